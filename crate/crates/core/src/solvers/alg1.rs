//! Greedy allocation for networks whose rules are single one-literal
//! minterms, with every entity used at most once on a right-hand side.

use std::collections::{BTreeMap, BTreeSet};

use super::protection::auxiliary_protection_set;
use super::{verified_solution, AllocationSolution, Method, Placement};
use crate::cascade::simulate_cascade;
use crate::error::{Error, Result};
use crate::model::{Auxiliary, EntityId, InterdependentNetwork, Literal};

fn check_special_case(net: &InterdependentNetwork) -> Result<()> {
    let mut used: BTreeMap<EntityId, EntityId> = BTreeMap::new();
    for idr in net.idrs() {
        match idr.minterms().len() {
            0 => continue,
            1 => {}
            n => {
                return Err(Error::NotSpecialCase(format!(
                    "rule of {} has {n} minterms",
                    idr.target()
                )))
            }
        }
        let m = idr.minterms().next().expect("one minterm");
        let lits: Vec<Literal> = m.literals().collect();
        let [Literal::Entity(e)] = lits[..] else {
            return Err(Error::NotSpecialCase(format!(
                "rule of {} is not a single entity",
                idr.target()
            )));
        };
        if let Some(prev) = used.insert(e, idr.target()) {
            return Err(Error::NotSpecialCase(format!(
                "{e} appears in the rules of both {prev} and {}",
                idr.target()
            )));
        }
    }
    Ok(())
}

/// Runs the greedy selection and returns the chosen placements together with
/// the protected set accumulated from the (subtracted) protection sets.
pub fn alg1_select(
    net: &InterdependentNetwork,
    attacked: &BTreeSet<EntityId>,
    s: usize,
) -> Result<(Vec<Placement>, BTreeSet<EntityId>)> {
    if s == 0 {
        return Err(Error::InvalidBudget {
            s,
            reason: "at least one modification is required".into(),
        });
    }
    check_special_case(net)?;
    let failed = simulate_cascade(net, attacked)?.failed_set();

    struct Entry {
        label: u32,
        target: EntityId,
        aux: EntityId,
        ap: BTreeSet<EntityId>,
    }
    let mut table = Vec::new();
    for idr in net.idrs() {
        let members = idr.entities();
        for x in net.entities() {
            if failed.contains(&x) || members.contains(&x) {
                continue;
            }
            let ap = auxiliary_protection_set(net, idr.label(), Auxiliary::Entity(x), attacked)?;
            table.push(Entry {
                label: idr.label(),
                target: idr.target(),
                aux: x,
                ap: ap.protected,
            });
        }
    }
    let eligible: BTreeSet<u32> = table.iter().map(|e| e.label).collect();
    if s > eligible.len() {
        return Err(Error::InvalidBudget {
            s,
            reason: format!("only {} rules have an eligible auxiliary", eligible.len()),
        });
    }

    let mut chosen = Vec::with_capacity(s);
    let mut protected = BTreeSet::new();
    for _ in 0..s {
        let best = table
            .iter()
            .enumerate()
            .max_by(|(_, x), (_, y)| {
                x.ap.len()
                    .cmp(&y.ap.len())
                    .then_with(|| (y.target, y.aux).cmp(&(x.target, x.aux)))
            })
            .map(|(i, _)| i)
            .expect("eligible entries remain");
        let pick = table.swap_remove(best);
        table.retain(|e| e.label != pick.label);
        for e in &mut table {
            e.ap.retain(|x| !pick.ap.contains(x));
        }
        protected.extend(pick.ap.iter().copied());
        chosen.push(Placement {
            idr_label: pick.label,
            idr_target: pick.target,
            auxiliary: Auxiliary::Entity(pick.aux),
        });
    }
    Ok((chosen, protected))
}

pub fn solve_alg1_special_case(
    net: &InterdependentNetwork,
    attacked: &BTreeSet<EntityId>,
    s: usize,
) -> Result<AllocationSolution> {
    let (placements, _) = alg1_select(net, attacked, s)?;
    verified_solution(net, attacked, Method::Alg1, s, placements)
}
