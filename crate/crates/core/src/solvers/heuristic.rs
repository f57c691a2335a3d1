//! Greedy heuristic for the restricted case where auxiliaries never fail.
//!
//! Each round recomputes the protection set of every remaining rule on the
//! current network, picks the largest one, breaks ties by cumulative hit
//! value and then by smallest target, adds an `alive` auxiliary to the pick
//! and prunes the entities it protected. Pruned entities are kept in the
//! simulation as permanently operational, which is what removing them and
//! their satisfied literals amounts to.

use std::collections::BTreeSet;

use super::scoring::{cumulative, Score};
use super::{always_alive_placement, verified_solution, AllocationSolution, Method};
use crate::cascade::Propagator;
use crate::error::{Error, Result};
use crate::model::{EntityId, InterdependentNetwork};

struct Candidate {
    label: u32,
    target: EntityId,
    protected: BTreeSet<EntityId>,
    tie_score: Option<Score>,
}

pub fn solve_heuristic(
    net: &InterdependentNetwork,
    attacked: &BTreeSet<EntityId>,
    s: usize,
) -> Result<AllocationSolution> {
    if s == 0 {
        return Err(Error::InvalidBudget {
            s,
            reason: "at least one modification is required".into(),
        });
    }
    if s > net.len() {
        return Err(Error::InvalidBudget {
            s,
            reason: format!("the network has only {} rules", net.len()),
        });
    }
    let engine = Propagator::new(net);
    let initial = engine.mask(attacked)?;
    let mut immune = vec![false; engine.len()];
    let mut modified: BTreeSet<u32> = BTreeSet::new();
    let mut pruned: BTreeSet<EntityId> = BTreeSet::new();
    let mut placements = Vec::with_capacity(s);

    for _ in 0..s {
        let current = engine.final_failed(&initial, &immune);
        let open = |idr: &&crate::model::Idr| !modified.contains(&idr.label());
        let mut labels: Vec<u32> = net
            .idrs()
            .iter()
            .filter(open)
            .filter(|idr| !pruned.contains(&idr.target()))
            .map(|idr| idr.label())
            .collect();
        if labels.is_empty() {
            // Every live rule is used up; the rest protect nothing.
            labels = net
                .idrs()
                .iter()
                .filter(open)
                .map(|idr| idr.label())
                .collect();
        }

        let mut candidates: Vec<Candidate> = labels
            .into_iter()
            .map(|label| {
                let pos = engine.position_of_label(label);
                let was = immune[pos];
                immune[pos] = true;
                let after = engine.final_failed(&initial, &immune);
                immune[pos] = was;
                let protected = current
                    .iter()
                    .zip(&after)
                    .enumerate()
                    .filter(|(_, (c, a))| **c && !**a)
                    .map(|(i, _)| engine.entities()[i])
                    .collect();
                Candidate {
                    label,
                    target: engine.entities()[pos],
                    protected,
                    tie_score: None,
                }
            })
            .collect();

        let top = candidates
            .iter()
            .map(|c| c.protected.len())
            .max()
            .expect("at least one open rule");
        let tied = candidates
            .iter()
            .filter(|c| c.protected.len() == top)
            .count();
        if tied > 1 {
            for c in candidates.iter_mut().filter(|c| c.protected.len() == top) {
                c.tie_score = Some(cumulative(net, &c.protected, &pruned));
            }
        }
        let pick = candidates
            .into_iter()
            .filter(|c| c.protected.len() == top)
            .max_by(|x, y| {
                x.tie_score
                    .cmp(&y.tie_score)
                    .then_with(|| y.target.cmp(&x.target))
            })
            .expect("at least one candidate");

        immune[engine.position_of_label(pick.label)] = true;
        modified.insert(pick.label);
        pruned.extend(pick.protected);
        placements.push(always_alive_placement(net, pick.label));
    }
    verified_solution(net, attacked, Method::Heuristic, s, placements)
}
