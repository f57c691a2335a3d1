//! Synthetic instances and experiment sweeps.

mod config;
mod experiment;
mod report;

use std::collections::BTreeSet;

use num_rational::Ratio;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{EntityId, InterdependentNetwork, Minterm, Side};

pub use config::{parse_sweep, SweepConfig, VulnMethod};
pub use experiment::{
    run_experiment, run_instance, ExperimentOptions, ExperimentRecord, InstanceSpec,
};
pub use report::{records_csv, render_svg, write_outputs, CSV_HEADER};

/// Parameters of the random network generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub n_a: u32,
    pub n_b: u32,
    pub max_minterms: u32,
    pub max_minterm_size: u32,
    /// Chance that an entity gets a non-empty rule.
    pub idr_probability: Ratio<u64>,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    /// Sized so that eight attacked entities bring down roughly two dozen.
    fn default() -> Self {
        GeneratorConfig {
            n_a: 18,
            n_b: 18,
            max_minterms: 2,
            max_minterm_size: 2,
            idr_probability: Ratio::new(3, 4),
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.n_a == 0 || self.n_b == 0 {
            return bad("n_a and n_b must be at least 1");
        }
        if self.max_minterms == 0 || self.max_minterm_size == 0 {
            return bad("max_minterms and max_minterm_size must be at least 1");
        }
        if *self.idr_probability.denom() == 0 || self.idr_probability > Ratio::from_integer(1) {
            return bad("idr_probability must lie in [0, 1]");
        }
        Ok(())
    }
}

/// Draws a network: for each entity in canonical order, with probability
/// `idr_probability`, a rule of 1..=`max_minterms` distinct minterms, each a
/// set of 1..=`max_minterm_size` entities from the opposite side.
pub fn gen_network(config: &GeneratorConfig) -> Result<InterdependentNetwork> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let p = config.idr_probability;
    let ids = |side: Side, n: u32| (1..=n).map(move |i| EntityId::new(side, i));
    let targets: Vec<EntityId> = ids(Side::A, config.n_a)
        .chain(ids(Side::B, config.n_b))
        .collect();

    let mut rules = Vec::with_capacity(targets.len());
    for target in targets {
        let other = match target.side() {
            Side::A => config.n_b,
            Side::B => config.n_a,
        };
        let mut minterms = BTreeSet::new();
        if rng.gen_range(0..*p.denom()) < *p.numer() {
            let count = rng.gen_range(1..=config.max_minterms);
            for _ in 0..count {
                let size = rng.gen_range(1..=config.max_minterm_size.min(other));
                let picked = sample(&mut rng, other as usize, size as usize);
                let lits = picked
                    .iter()
                    .map(|i| EntityId::new(target.side().opposite(), i as u32 + 1));
                minterms.insert(Minterm::new(lits.map(Into::into)).expect("size >= 1"));
            }
        }
        rules.push((target, minterms));
    }
    InterdependentNetwork::from_rules(rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{format_network, parse_network, Literal};

    #[test]
    fn same_seed_same_network() {
        let cfg = GeneratorConfig {
            n_a: 5,
            n_b: 3,
            seed: 7,
            ..GeneratorConfig::default()
        };
        assert_eq!(gen_network(&cfg).unwrap(), gen_network(&cfg).unwrap());
        let other = GeneratorConfig {
            seed: 8,
            ..cfg.clone()
        };
        assert_ne!(
            format_network(&gen_network(&cfg).unwrap()),
            format_network(&gen_network(&other).unwrap())
        );
    }

    #[test]
    fn zero_probability_gives_no_rules() {
        let cfg = GeneratorConfig {
            n_a: 1,
            n_b: 1,
            idr_probability: Ratio::from_integer(0),
            ..GeneratorConfig::default()
        };
        let net = gen_network(&cfg).unwrap();
        assert_eq!(net.len(), 2);
        assert!(net.idrs().iter().all(|d| d.is_empty()));
    }

    #[test]
    fn rules_cross_sides_and_round_trip() {
        for seed in 0..100 {
            let cfg = GeneratorConfig {
                n_a: 20,
                n_b: 20,
                seed,
                ..GeneratorConfig::default()
            };
            let net = gen_network(&cfg).unwrap();
            for idr in net.idrs() {
                assert!(idr.minterms().len() <= cfg.max_minterms as usize);
                for m in idr.minterms() {
                    assert!(m.len() <= cfg.max_minterm_size as usize);
                    for l in m.literals() {
                        let Literal::Entity(e) = l else {
                            panic!("alive literal generated")
                        };
                        assert_eq!(e.side(), idr.target().side().opposite());
                    }
                }
            }
            assert_eq!(parse_network(&format_network(&net)).unwrap(), net);
        }
    }

    #[test]
    fn invalid_bounds() {
        let base = GeneratorConfig::default();
        for cfg in [
            GeneratorConfig {
                n_a: 0,
                ..base.clone()
            },
            GeneratorConfig {
                n_b: 0,
                ..base.clone()
            },
            GeneratorConfig {
                max_minterms: 0,
                ..base.clone()
            },
            GeneratorConfig {
                max_minterm_size: 0,
                ..base.clone()
            },
            GeneratorConfig {
                idr_probability: Ratio::new(3, 2),
                ..base.clone()
            },
        ] {
            assert!(matches!(gen_network(&cfg), Err(Error::InvalidConfig(_))));
        }
    }
}
