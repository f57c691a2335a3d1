//! Shared corpus and reference implementations for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use aeap::harness::{gen_network, GeneratorConfig};
use aeap::model::{
    apply_modification, EntityId, InterdependentNetwork, Literal, Minterm, Modification,
};
use aeap::vulnerability::{k_most_vulnerable_exact, DEFAULT_CAP};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EXAMPLE: &str = "\
a1 <- b1 + b2
a2 <- b1 b2
a3 <- b2 + b1 b3
a4 <- b3
a5
b1 <- a2
b2 <- a2
b3 <- a4
";

pub fn set(names: &[&str]) -> BTreeSet<EntityId> {
    names.iter().map(|n| n.parse().unwrap()).collect()
}

pub struct Instance {
    pub seed: u64,
    pub net: InterdependentNetwork,
    pub k: usize,
    pub attacked: BTreeSet<EntityId>,
}

/// `count` networks with 2..=12 entities per side and an attack of the
/// `k <= 4` most vulnerable entities.
pub fn corpus(count: usize) -> Vec<Instance> {
    (0..count as u64)
        .map(|i| {
            let seed = 0x5eed_0000 + i;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let probs = [Ratio::new(1, 2), Ratio::new(3, 4), Ratio::from_integer(1)];
            let cfg = GeneratorConfig {
                n_a: rng.gen_range(2..=12),
                n_b: rng.gen_range(2..=12),
                max_minterms: rng.gen_range(1..=3),
                max_minterm_size: rng.gen_range(1..=3),
                idr_probability: probs[rng.gen_range(0..probs.len())],
                seed,
            };
            let net = gen_network(&cfg).unwrap();
            let k = rng.gen_range(1..=4);
            let attacked = k_most_vulnerable_exact(&net, k, DEFAULT_CAP)
                .unwrap()
                .attacked;
            Instance {
                seed,
                net,
                k,
                attacked,
            }
        })
        .collect()
}

/// Networks inside the special case: every rule is empty or a single
/// opposite-side entity, and no entity is used by more than one rule.
pub fn special_case_corpus(count: usize) -> Vec<Instance> {
    (0..count as u64)
        .map(|i| {
            let seed = 0xa1_0000 + i;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n_a = rng.gen_range(2..=12u32);
            let n_b = rng.gen_range(2..=12u32);
            let mut free_a: Vec<u32> = (1..=n_a).collect();
            let mut free_b: Vec<u32> = (1..=n_b).collect();
            let mut rules = Vec::new();
            let targets = (1..=n_a).map(EntityId::a).chain((1..=n_b).map(EntityId::b));
            for t in targets {
                let pool = match t.side() {
                    aeap::Side::A => &mut free_b,
                    aeap::Side::B => &mut free_a,
                };
                let mut minterms = Vec::new();
                if !pool.is_empty() && rng.gen_bool(0.75) {
                    let j = pool.swap_remove(rng.gen_range(0..pool.len()));
                    minterms.push(Minterm::single(EntityId::new(t.side().opposite(), j)));
                }
                rules.push((t, minterms));
            }
            let net = InterdependentNetwork::from_rules(rules).unwrap();
            let k = rng.gen_range(1..=4);
            let attacked = k_most_vulnerable_exact(&net, k, DEFAULT_CAP)
                .unwrap()
                .attacked;
            Instance {
                seed,
                net,
                k,
                attacked,
            }
        })
        .collect()
}

/// Final failed set by naive iteration: repeat "an entity fails when every
/// minterm has a failed literal" until nothing changes.
pub fn naive_failed(
    net: &InterdependentNetwork,
    attacked: &BTreeSet<EntityId>,
) -> BTreeSet<EntityId> {
    let mut failed = attacked.clone();
    loop {
        let mut next = failed.clone();
        for idr in net.idrs() {
            if idr.is_empty() {
                continue;
            }
            let dead = idr.minterms().all(|m| {
                m.literals().any(|l| match l {
                    Literal::Entity(e) => failed.contains(&e),
                    Literal::AlwaysAlive => false,
                })
            });
            if dead {
                next.insert(idr.target());
            }
        }
        if next == failed {
            return failed;
        }
        failed = next;
    }
}

pub fn naive_induced(
    net: &InterdependentNetwork,
    attacked: &BTreeSet<EntityId>,
) -> BTreeSet<EntityId> {
    naive_failed(net, attacked)
        .difference(attacked)
        .copied()
        .collect()
}

/// Protected set of a list of modifications, recomputed from scratch.
pub fn naive_protected(
    net: &InterdependentNetwork,
    attacked: &BTreeSet<EntityId>,
    mods: &[Modification],
) -> BTreeSet<EntityId> {
    let mut m = net.clone();
    for &md in mods {
        m = apply_modification(&m, md).unwrap();
    }
    let before = naive_induced(net, attacked);
    let after = naive_induced(&m, attacked);
    before.difference(&after).copied().collect()
}
