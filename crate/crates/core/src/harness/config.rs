//! Flat `key = value` sweep files.
//!
//! ```text
//! # generator
//! n_a = 18
//! n_b = 18
//! max_minterms = 2
//! max_minterm_size = 2
//! idr_probability = 3/4      # or 0.75
//! seed = 1
//! # sweep
//! instances = 5              # seeds seed, seed+1, ...
//! k = 8
//! s_list = 1,3,5,7
//! vuln_method = auto         # exact | greedy | auto
//! cap = 10000000
//! record_timings = false
//! ```

use std::collections::BTreeSet;
use std::str::FromStr;

use num_rational::Ratio;

use super::experiment::{ExperimentOptions, InstanceSpec};
use super::GeneratorConfig;
use crate::error::{Error, Result};
use crate::vulnerability::DEFAULT_CAP;

/// How the attack set is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VulnMethod {
    Exact,
    Greedy,
    /// Exhaustive when the search fits under the cap, greedy otherwise.
    Auto,
}

impl FromStr for VulnMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(VulnMethod::Exact),
            "greedy" => Ok(VulnMethod::Greedy),
            "auto" => Ok(VulnMethod::Auto),
            _ => Err(Error::InvalidConfig(format!("unknown vuln_method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub generator: GeneratorConfig,
    pub instances: u64,
    pub options: ExperimentOptions,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            generator: GeneratorConfig::default(),
            instances: 1,
            options: ExperimentOptions::default(),
        }
    }
}

impl SweepConfig {
    /// One instance per seed, starting at the configured seed.
    pub fn instances(&self) -> Vec<InstanceSpec> {
        (0..self.instances)
            .map(|i| InstanceSpec {
                id: i as usize,
                generator: GeneratorConfig {
                    seed: self.generator.seed.wrapping_add(i),
                    ..self.generator.clone()
                },
            })
            .collect()
    }
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("{key}: cannot parse {value:?}")))
}

/// Accepts `p/q`, an integer, or a decimal such as `0.75`.
fn ratio(key: &str, value: &str) -> Result<Ratio<u64>> {
    if let Some((int, frac)) = value.split_once('.') {
        let digits = frac.len() as u32;
        if digits > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidConfig(format!(
                "{key}: cannot parse {value:?}"
            )));
        }
        let int: u64 = if int.is_empty() { 0 } else { number(key, int)? };
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            number(key, frac)?
        };
        let denom = 10u64.pow(digits);
        return Ok(Ratio::new(int * denom + frac, denom));
    }
    let r: Ratio<u64> = number(key, value)?;
    Ok(r)
}

pub fn parse_sweep(text: &str) -> Result<SweepConfig> {
    let mut cfg = SweepConfig::default();
    let mut seen = BTreeSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::InvalidConfig(format!(
                "line {}: expected key = value",
                n + 1
            )));
        };
        let (key, value) = (key.trim(), value.trim());
        if !seen.insert(key.to_string()) {
            return Err(Error::InvalidConfig(format!(
                "line {}: duplicate key {key}",
                n + 1
            )));
        }
        let g = &mut cfg.generator;
        let o = &mut cfg.options;
        match key {
            "n_a" => g.n_a = number(key, value)?,
            "n_b" => g.n_b = number(key, value)?,
            "max_minterms" => g.max_minterms = number(key, value)?,
            "max_minterm_size" => g.max_minterm_size = number(key, value)?,
            "idr_probability" => g.idr_probability = ratio(key, value)?,
            "seed" => g.seed = number(key, value)?,
            "instances" => cfg.instances = number(key, value)?,
            "k" => o.k = number(key, value)?,
            "s_list" => {
                o.s_list = value
                    .split(',')
                    .map(|s| number(key, s.trim()))
                    .collect::<Result<_>>()?
            }
            "vuln_method" => o.vuln_method = value.parse()?,
            "cap" => o.cap = number(key, value)?,
            "record_timings" => o.record_timings = number(key, value)?,
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "line {}: unknown key {key}",
                    n + 1
                )))
            }
        }
    }
    cfg.generator.validate()?;
    if cfg.options.k == 0 || cfg.options.s_list.is_empty() {
        return Err(Error::InvalidConfig(
            "k and s_list must be non-empty".into(),
        ));
    }
    Ok(cfg)
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        ExperimentOptions {
            k: 8,
            s_list: vec![1, 3, 5, 7],
            vuln_method: VulnMethod::Auto,
            cap: DEFAULT_CAP,
            record_timings: false,
        }
    }
}
