//! K most vulnerable entities: the attack of size `k` that maximises the final
//! failure count.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use crate::cascade::Propagator;
use crate::error::{Error, Result};
use crate::model::{EntityId, InterdependentNetwork};

/// Default limit on cascade evaluations for exhaustive searches.
pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VulnerabilityResult {
    pub k: usize,
    pub attacked: BTreeSet<EntityId>,
    pub total_failed: usize,
    pub failed_set: BTreeSet<EntityId>,
}

/// `C(n, k)` without overflow for the sizes we care about; saturates.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

fn check_k(net: &InterdependentNetwork, k: usize) -> Result<()> {
    if k == 0 || k > net.len() {
        return Err(Error::KOutOfRange { k, max: net.len() });
    }
    Ok(())
}

fn result(engine: &Propagator, k: usize, attacked: &[bool]) -> VulnerabilityResult {
    let failed = engine.final_failed(attacked, &vec![false; engine.len()]);
    let failed_set = engine.set(&failed);
    VulnerabilityResult {
        k,
        attacked: engine.set(attacked),
        total_failed: failed_set.len(),
        failed_set,
    }
}

/// Exhaustive search over all `k`-subsets. Ties go to the lexicographically
/// smallest attack in canonical entity order.
pub fn k_most_vulnerable_exact(
    net: &InterdependentNetwork,
    k: usize,
    cap: u64,
) -> Result<VulnerabilityResult> {
    check_k(net, k)?;
    let needed = binomial(net.len(), k);
    if needed > cap as u128 {
        return Err(Error::CapExceeded { needed, cap });
    }
    let engine = Propagator::new(net);
    let none = vec![false; engine.len()];
    let mut mask = vec![false; engine.len()];
    let mut best: Option<(usize, Vec<usize>)> = None;
    for combo in (0..engine.len()).combinations(k) {
        for &i in &combo {
            mask[i] = true;
        }
        let count = engine
            .final_failed(&mask, &none)
            .iter()
            .filter(|f| **f)
            .count();
        if best.as_ref().is_none_or(|(b, _)| count > *b) {
            best = Some((count, combo.clone()));
        }
        for &i in &combo {
            mask[i] = false;
        }
    }
    let (_, combo) = best.expect("at least one subset");
    for i in combo {
        mask[i] = true;
    }
    Ok(result(&engine, k, &mask))
}

/// Adds one entity at a time, each maximising the resulting failure count.
/// Ties go to the smallest entity.
pub fn k_most_vulnerable_greedy(
    net: &InterdependentNetwork,
    k: usize,
) -> Result<VulnerabilityResult> {
    check_k(net, k)?;
    let engine = Propagator::new(net);
    let none = vec![false; engine.len()];
    let mut mask = vec![false; engine.len()];
    for _ in 0..k {
        let mut best: Option<(usize, usize)> = None;
        for i in 0..engine.len() {
            if mask[i] {
                continue;
            }
            mask[i] = true;
            let count = engine
                .final_failed(&mask, &none)
                .iter()
                .filter(|f| **f)
                .count();
            mask[i] = false;
            if best.is_none_or(|(b, _)| count > b) {
                best = Some((count, i));
            }
        }
        let (_, pick) = best.expect("k <= number of entities");
        mask[pick] = true;
    }
    Ok(result(&engine, k, &mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::simulate_cascade;
    use crate::model::parse_network;

    const EXAMPLE: &str = "a1 <- b1 + b2\na2 <- b1 b2\na3 <- b2 + b1 b3\na4 <- b3\na5\nb1 <- a2\nb2 <- a2\nb3 <- a4\n";

    fn set(names: &[&str]) -> BTreeSet<EntityId> {
        names.iter().map(|n| n.parse().unwrap()).collect()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 2), 28);
        assert_eq!(binomial(24, 4), 10626);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(5, 0), 1);
    }

    #[test]
    fn example_k2() {
        let net = parse_network(EXAMPLE).unwrap();
        let r = k_most_vulnerable_exact(&net, 2, DEFAULT_CAP).unwrap();
        assert_eq!(r.total_failed, 7);
        // {b2, b3} reaches the optimum too.
        let t = simulate_cascade(&net, &set(&["b2", "b3"])).unwrap();
        assert_eq!(t.failed_set().len(), 7);
        assert!(r.attacked.is_subset(&r.failed_set));
    }

    #[test]
    fn example_k1_tie_break() {
        // Brute force over all singletons by direct simulation.
        let net = parse_network(EXAMPLE).unwrap();
        let counts: Vec<(EntityId, usize)> = net
            .entities()
            .map(|e| {
                let t = simulate_cascade(&net, &BTreeSet::from([e])).unwrap();
                (e, t.failed_set().len())
            })
            .collect();
        let max = counts.iter().map(|c| c.1).max().unwrap();
        assert_eq!(max, 5);
        let winners: Vec<String> = counts
            .iter()
            .filter(|c| c.1 == max)
            .map(|c| c.0.to_string())
            .collect();
        assert_eq!(winners, ["a2", "b1", "b2"]);

        let r = k_most_vulnerable_exact(&net, 1, DEFAULT_CAP).unwrap();
        assert_eq!(r.total_failed, 5);
        assert_eq!(r.attacked, set(&["a2"]));
    }

    #[test]
    fn dependency_free_network() {
        let net = parse_network("a1\na2\nb1").unwrap();
        assert_eq!(
            k_most_vulnerable_exact(&net, 1, DEFAULT_CAP)
                .unwrap()
                .total_failed,
            1
        );
        assert_eq!(k_most_vulnerable_greedy(&net, 2).unwrap().total_failed, 2);
    }

    #[test]
    fn greedy_on_example() {
        let net = parse_network(EXAMPLE).unwrap();
        let g = k_most_vulnerable_greedy(&net, 2).unwrap();
        let e = k_most_vulnerable_exact(&net, 2, DEFAULT_CAP).unwrap();
        assert!(g.total_failed >= 5);
        assert!(g.total_failed <= e.total_failed);
        let all = k_most_vulnerable_greedy(&net, net.len()).unwrap();
        assert_eq!(all.total_failed, net.len());
    }

    #[test]
    fn k_range_and_cap() {
        let net = parse_network(EXAMPLE).unwrap();
        assert!(matches!(
            k_most_vulnerable_exact(&net, 0, DEFAULT_CAP),
            Err(Error::KOutOfRange { .. })
        ));
        assert!(matches!(
            k_most_vulnerable_greedy(&net, 9),
            Err(Error::KOutOfRange { .. })
        ));
        assert_eq!(
            k_most_vulnerable_exact(&net, 4, 10).unwrap_err(),
            Error::CapExceeded {
                needed: 70,
                cap: 10
            }
        );
    }
}
