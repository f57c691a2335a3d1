//! Auxiliary entity allocation: choose at most one auxiliary per rule, under
//! a budget of `s` rules, so that as few entities as possible fail after the
//! initial attack.
//!
//! Every solver reports its protected set from one final simulation of the
//! fully modified network, never from its own bookkeeping.

mod alg1;
mod exact;
mod heuristic;
mod protection;
mod scoring;
mod setcover;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cascade::{induced_failure_set, simulate_cascade};
use crate::error::Result;
use crate::model::{apply_modification, Auxiliary, EntityId, InterdependentNetwork, Modification};

pub use alg1::{alg1_select, solve_alg1_special_case};
pub use exact::solve_exact;
pub use heuristic::solve_heuristic;
pub use protection::{auxiliary_protection_set, ProtectionSet};
pub use scoring::{acfmhv, afmhv, score_idrs, Score, ScoredIdr};
pub use setcover::{reduce_setcover, SetCoverReduction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Alg1,
    Heuristic,
    Exact,
}

/// One chosen modification, with the rule's target for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Placement {
    #[serde(skip)]
    pub idr_label: u32,
    pub idr_target: EntityId,
    pub auxiliary: Auxiliary,
}

impl Placement {
    pub fn modification(&self) -> Modification {
        Modification {
            idr_label: self.idr_label,
            auxiliary: self.auxiliary,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocationSolution {
    pub method: Method,
    pub s: usize,
    pub modifications: Vec<Placement>,
    /// `P_f`: induced failures of the original network that no longer fail.
    pub protected: BTreeSet<EntityId>,
    pub induced_before: BTreeSet<EntityId>,
    pub induced_after: BTreeSet<EntityId>,
}

/// JSON shape of a solution.
#[derive(Debug, Serialize)]
pub struct SolutionReport<'a> {
    pub method: Method,
    pub s: usize,
    pub modifications: &'a [Placement],
    pub protected: &'a BTreeSet<EntityId>,
    pub protected_count: usize,
    pub induced_before: usize,
    pub induced_after: usize,
}

impl AllocationSolution {
    pub fn report(&self) -> SolutionReport<'_> {
        SolutionReport {
            method: self.method,
            s: self.s,
            modifications: &self.modifications,
            protected: &self.protected,
            protected_count: self.protected.len(),
            induced_before: self.induced_before.len(),
            induced_after: self.induced_after.len(),
        }
    }

    /// The network with every chosen modification applied.
    pub fn modified_network(&self, net: &InterdependentNetwork) -> Result<InterdependentNetwork> {
        apply_all(net, &self.modifications)
    }
}

fn apply_all(
    net: &InterdependentNetwork,
    placements: &[Placement],
) -> Result<InterdependentNetwork> {
    let mut current = net.clone();
    for p in placements {
        current = apply_modification(&current, p.modification())?;
    }
    Ok(current)
}

/// Applies the placements to a copy of `net`, re-simulates both networks and
/// packages the result.
pub(crate) fn verified_solution(
    net: &InterdependentNetwork,
    attacked: &BTreeSet<EntityId>,
    method: Method,
    s: usize,
    modifications: Vec<Placement>,
) -> Result<AllocationSolution> {
    let before = induced_failure_set(&simulate_cascade(net, attacked)?);
    let modified = apply_all(net, &modifications)?;
    let after = induced_failure_set(&simulate_cascade(&modified, attacked)?);
    Ok(AllocationSolution {
        method,
        s,
        modifications,
        protected: before.difference(&after).copied().collect(),
        induced_before: before,
        induced_after: after,
    })
}

pub(crate) fn always_alive_placement(net: &InterdependentNetwork, label: u32) -> Placement {
    Placement {
        idr_label: label,
        idr_target: net.idr(label).expect("label in range").target(),
        auxiliary: Auxiliary::AlwaysAlive,
    }
}
