use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;
use std::time::Instant;

use serde::Serialize;

use super::config::VulnMethod;
use super::{gen_network, GeneratorConfig};
use crate::error::{Error, Result};
use crate::model::InterdependentNetwork;
use crate::solvers::{solve_exact, solve_heuristic};
use crate::vulnerability::{binomial, k_most_vulnerable_exact, k_most_vulnerable_greedy};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentOptions {
    pub k: usize,
    pub s_list: Vec<usize>,
    pub vuln_method: VulnMethod,
    pub cap: u64,
    /// Wall-clock times are left at zero unless set, so that repeated runs
    /// produce identical files.
    pub record_timings: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceSpec {
    pub id: usize,
    pub generator: GeneratorConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub instance: usize,
    pub na: usize,
    pub nb: usize,
    pub k: usize,
    pub s: usize,
    pub induced_before: usize,
    pub protected_heuristic: usize,
    /// `None` when the exhaustive search exceeded the cap.
    pub protected_exact: Option<usize>,
    pub gap_percent: Option<f64>,
    pub ms_heuristic: f64,
    pub ms_exact: f64,
}

fn timed<T>(on: bool, f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    let ms = if on {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    };
    (out, ms)
}

/// Attack with the `k` most vulnerable entities, then run both solvers for
/// every budget in the list.
pub fn run_instance(
    id: usize,
    net: &InterdependentNetwork,
    options: &ExperimentOptions,
) -> Result<Vec<ExperimentRecord>> {
    let exhaustive = match options.vuln_method {
        VulnMethod::Exact => true,
        VulnMethod::Greedy => false,
        VulnMethod::Auto => binomial(net.len(), options.k) <= u128::from(options.cap),
    };
    let vuln = if exhaustive {
        k_most_vulnerable_exact(net, options.k, options.cap)?
    } else {
        k_most_vulnerable_greedy(net, options.k)?
    };
    let attacked = vuln.attacked;

    let mut records = Vec::with_capacity(options.s_list.len());
    for &s in &options.s_list {
        let (heur, ms_heuristic) = timed(options.record_timings, || {
            solve_heuristic(net, &attacked, s)
        });
        let heur = heur?;
        let (exact, ms_exact) = timed(options.record_timings, || {
            solve_exact(net, &attacked, s, options.cap)
        });
        let protected_exact = match exact {
            Ok(sol) => Some(sol.protected.len()),
            Err(Error::CapExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        let protected_heuristic = heur.protected.len();
        let gap_percent = protected_exact
            .map(|ex| 100.0 * (ex as f64 - protected_heuristic as f64) / ex.max(1) as f64);
        records.push(ExperimentRecord {
            instance: id,
            na: net.entities_a().count(),
            nb: net.entities_b().count(),
            k: options.k,
            s,
            induced_before: heur.induced_before.len(),
            protected_heuristic,
            protected_exact,
            gap_percent,
            ms_heuristic,
            ms_exact,
        });
    }
    Ok(records)
}

/// Runs every instance, spreading them over the available cores. Records come
/// back in instance order regardless of scheduling.
pub fn run_experiment(
    instances: &[InstanceSpec],
    options: &ExperimentOptions,
) -> Result<Vec<ExperimentRecord>> {
    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(instances.len())
        .max(1);
    let next = AtomicUsize::new(0);
    let mut results: Vec<(usize, Result<Vec<ExperimentRecord>>)> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(spec) = instances.get(i) else { break };
                        let out = gen_network(&spec.generator)
                            .and_then(|net| run_instance(spec.id, &net, options));
                        done.push((i, out));
                    }
                    done
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("experiment worker panicked"))
            .collect()
    });
    results.sort_by_key(|(i, _)| *i);
    let mut records = Vec::new();
    for (_, r) in results {
        records.extend(r?);
    }
    Ok(records)
}
