//! Builds an allocation instance from a set-cover instance.
//!
//! Subset `i` becomes `b_i`; universe element `e` becomes an entity of `A1`
//! whose rule is the disjunction of the `b`s of the subsets containing it.
//! Each `b_i` depends on a dedicated attacked entity of `A2`, and `A3` holds
//! `x` dependency-free spares. A cover of size at most `x` exists iff `x`
//! modifications can protect `x + |A1|` entities.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{EntityId, InterdependentNetwork, Minterm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverReduction {
    pub network: InterdependentNetwork,
    pub attacked: BTreeSet<EntityId>,
    pub s: usize,
    pub p_f_target: usize,
    /// `b` entity of each subset, by subset position.
    pub subset_entities: Vec<EntityId>,
    /// `A1` entity of each universe element.
    pub element_entities: BTreeMap<u32, EntityId>,
}

impl SetCoverReduction {
    /// Subset positions whose `b` entity is among `protected`.
    pub fn cover_from(&self, protected: &BTreeSet<EntityId>) -> Vec<usize> {
        self.subset_entities
            .iter()
            .enumerate()
            .filter(|(_, b)| protected.contains(b))
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn reduce_setcover(
    universe: &BTreeSet<u32>,
    subsets: &[BTreeSet<u32>],
    x: usize,
) -> Result<SetCoverReduction> {
    if x == 0 {
        return Err(Error::InvalidBudget {
            s: x,
            reason: "the cover size must be at least 1".into(),
        });
    }
    if x > subsets.len() {
        return Err(Error::InvalidBudget {
            s: x,
            reason: format!(
                "cover size exceeds the {} available subsets; the target would be unreachable",
                subsets.len()
            ),
        });
    }
    for (i, sub) in subsets.iter().enumerate() {
        if let Some(e) = sub.iter().find(|e| !universe.contains(e)) {
            return Err(Error::InvalidConfig(format!(
                "subset {} contains {e}, which is not in the universe",
                i + 1
            )));
        }
    }
    if let Some(e) = universe
        .iter()
        .find(|e| !subsets.iter().any(|s| s.contains(e)))
    {
        return Err(Error::UncoveredElement(*e));
    }

    let n = universe.len() as u32;
    let m = subsets.len() as u32;
    let subset_entities: Vec<EntityId> = (1..=m).map(EntityId::b).collect();
    let element_entities: BTreeMap<u32, EntityId> = universe
        .iter()
        .zip(1..)
        .map(|(e, i)| (*e, EntityId::a(i)))
        .collect();
    let a2 = |j: u32| EntityId::a(n + j);

    let mut rules: Vec<(EntityId, Vec<Minterm>)> = Vec::new();
    for (e, a) in &element_entities {
        let minterms = subsets
            .iter()
            .zip(&subset_entities)
            .filter(|(s, _)| s.contains(e))
            .map(|(_, b)| Minterm::single(*b))
            .collect();
        rules.push((*a, minterms));
    }
    for j in 1..=m {
        rules.push((a2(j), Vec::new()));
    }
    for k in 1..=x as u32 {
        rules.push((EntityId::a(n + m + k), Vec::new()));
    }
    for (j, b) in (1..=m).zip(&subset_entities) {
        rules.push((*b, vec![Minterm::single(a2(j))]));
    }

    Ok(SetCoverReduction {
        network: InterdependentNetwork::from_rules(rules)?,
        attacked: (1..=m).map(a2).collect(),
        s: x,
        p_f_target: x + universe.len(),
        subset_entities,
        element_entities,
    })
}
