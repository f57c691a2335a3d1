//! Exhaustive optimum for the restricted case.
//!
//! Only rules whose target suffers an induced failure can change the outcome:
//! an attacked target stays failed and a target that never fails protects
//! nobody. The search therefore enumerates subsets of those effective rules
//! and pads them with the smallest remaining labels. The reported tuple is
//! the lexicographically smallest optimal `s`-subset of all labels, exactly
//! as a plain enumeration over every `s`-subset would report.

use std::collections::BTreeSet;

use itertools::Itertools;

use super::{always_alive_placement, verified_solution, AllocationSolution, Method};
use crate::cascade::Propagator;
use crate::error::{Error, Result};
use crate::model::{EntityId, InterdependentNetwork};
use crate::vulnerability::binomial;

pub fn solve_exact(
    net: &InterdependentNetwork,
    attacked: &BTreeSet<EntityId>,
    s: usize,
    cap: u64,
) -> Result<AllocationSolution> {
    if s > net.len() {
        return Err(Error::InvalidBudget {
            s,
            reason: format!("the network has only {} rules", net.len()),
        });
    }
    let engine = Propagator::new(net);
    let initial = engine.mask(attacked)?;
    let mut immune = vec![false; engine.len()];
    let base = engine.final_failed(&initial, &immune);

    let (effective, inert): (Vec<u32>, Vec<u32>) =
        net.idrs().iter().map(|d| d.label()).partition(|&l| {
            let p = engine.position_of_label(l);
            base[p] && !initial[p]
        });
    let lo = s.saturating_sub(inert.len());
    let hi = s.min(effective.len());
    let needed: u128 = (lo..=hi).map(|j| binomial(effective.len(), j)).sum();
    if needed > cap as u128 {
        return Err(Error::CapExceeded { needed, cap });
    }

    let mut best: Option<(usize, Vec<u32>)> = None;
    for j in lo..=hi {
        for subset in effective.iter().copied().combinations(j) {
            for &l in &subset {
                immune[engine.position_of_label(l)] = true;
            }
            let remaining = engine.induced_count(&initial, &immune);
            for &l in &subset {
                immune[engine.position_of_label(l)] = false;
            }
            let mut tuple = subset;
            tuple.extend_from_slice(&inert[..s - j]);
            tuple.sort_unstable();
            let better = match &best {
                None => true,
                Some((r, t)) => remaining < *r || (remaining == *r && tuple < *t),
            };
            if better {
                best = Some((remaining, tuple));
            }
        }
    }
    let (_, labels) = best.expect("lo <= hi always holds");
    let placements = labels
        .into_iter()
        .map(|l| always_alive_placement(net, l))
        .collect();
    verified_solution(net, attacked, Method::Exact, s, placements)
}
