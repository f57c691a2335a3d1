//! Fractional minterm hit values used to break ties in the heuristic.
//!
//! The hit value of a rule counts, over every minterm of every rule that
//! contains the rule's target, the reciprocal of the minterm size. The
//! cumulative value of a rule sums the hit values of all entities it would
//! protect.

use std::collections::BTreeSet;

use num_rational::Ratio;

use super::protection::auxiliary_protection_set;
use crate::error::Result;
use crate::model::{Auxiliary, EntityId, InterdependentNetwork, Literal};

/// Exact non-negative rational.
pub type Score = Ratio<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoredIdr {
    pub idr_label: u32,
    pub target: EntityId,
    pub ap_size: usize,
    pub afmhv: Score,
    pub acfmhv: Score,
}

pub fn afmhv(net: &InterdependentNetwork, idr_label: u32) -> Result<Score> {
    let target = net.idr(idr_label)?.target();
    Ok(hit_value(net, target, &BTreeSet::new()))
}

pub fn acfmhv(
    net: &InterdependentNetwork,
    idr_label: u32,
    attacked: &BTreeSet<EntityId>,
) -> Result<Score> {
    let ap = auxiliary_protection_set(net, idr_label, Auxiliary::AlwaysAlive, attacked)?;
    Ok(cumulative(net, &ap.protected, &BTreeSet::new()))
}

/// Hit value of `target` on the network with `pruned` entities removed:
/// rules of pruned entities are dropped and pruned literals no longer count
/// towards minterm sizes.
pub(crate) fn hit_value(
    net: &InterdependentNetwork,
    target: EntityId,
    pruned: &BTreeSet<EntityId>,
) -> Score {
    let needle = Literal::Entity(target);
    let mut total = Score::from_integer(0);
    for idr in net.idrs() {
        if pruned.contains(&idr.target()) {
            continue;
        }
        for m in idr.minterms().filter(|m| m.contains(needle)) {
            let size = m
                .literals()
                .filter(|l| l.entity().is_none_or(|e| !pruned.contains(&e)))
                .count();
            total += Score::new(1, size as u64);
        }
    }
    total
}

pub(crate) fn cumulative(
    net: &InterdependentNetwork,
    protected: &BTreeSet<EntityId>,
    pruned: &BTreeSet<EntityId>,
) -> Score {
    protected
        .iter()
        .map(|e| hit_value(net, *e, pruned))
        .fold(Score::from_integer(0), |a, b| a + b)
}

/// Protection size and both hit values for every rule, in label order.
pub fn score_idrs(
    net: &InterdependentNetwork,
    attacked: &BTreeSet<EntityId>,
) -> Result<Vec<ScoredIdr>> {
    let none = BTreeSet::new();
    net.idrs()
        .iter()
        .map(|idr| {
            let ap = auxiliary_protection_set(net, idr.label(), Auxiliary::AlwaysAlive, attacked)?;
            Ok(ScoredIdr {
                idr_label: idr.label(),
                target: idr.target(),
                ap_size: ap.protected.len(),
                afmhv: hit_value(net, idr.target(), &none),
                acfmhv: cumulative(net, &ap.protected, &none),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_network;

    const EXAMPLE: &str = "a1 <- b1 + b2\na2 <- b1 b2\na3 <- b2 + b1 b3\na4 <- b3\na5\nb1 <- a2\nb2 <- a2\nb3 <- a4\n";

    fn set(names: &[&str]) -> BTreeSet<EntityId> {
        names.iter().map(|n| n.parse().unwrap()).collect()
    }

    /// Independent enumeration: walk every minterm of the document text.
    fn oracle(text: &str, target: &str) -> Score {
        let mut total = Score::from_integer(0);
        for line in text.lines() {
            let Some((_, rhs)) = line.split_once("<-") else {
                continue;
            };
            for minterm in rhs.split('+') {
                let lits: Vec<&str> = minterm.split_whitespace().collect();
                if lits.contains(&target) {
                    total += Score::new(1, lits.len() as u64);
                }
            }
        }
        total
    }

    #[test]
    fn example_hit_values() {
        let net = parse_network(EXAMPLE).unwrap();
        for idr in net.idrs() {
            let name = idr.target().to_string();
            assert_eq!(
                afmhv(&net, idr.label()).unwrap(),
                oracle(EXAMPLE, &name),
                "{name}"
            );
        }
        let b1 = net.label_of(EntityId::b(1)).unwrap();
        let a2 = net.label_of(EntityId::a(2)).unwrap();
        let a1 = net.label_of(EntityId::a(1)).unwrap();
        assert_eq!(afmhv(&net, b1).unwrap(), Score::from_integer(2));
        assert_eq!(afmhv(&net, a2).unwrap(), Score::from_integer(2));
        assert_eq!(afmhv(&net, a1).unwrap(), Score::from_integer(0));
    }

    #[test]
    fn example_cumulative() {
        let net = parse_network(EXAMPLE).unwrap();
        let attack = set(&["b2", "b3"]);
        let a2 = net.label_of(EntityId::a(2)).unwrap();
        let b1 = net.label_of(EntityId::b(1)).unwrap();
        let b2 = net.label_of(EntityId::b(2)).unwrap();
        assert_eq!(acfmhv(&net, a2, &attack).unwrap(), Score::from_integer(4));
        assert_eq!(acfmhv(&net, b1, &attack).unwrap(), Score::from_integer(2));
        assert_eq!(acfmhv(&net, b2, &attack).unwrap(), Score::from_integer(0));
    }

    #[test]
    fn unknown_label() {
        let net = parse_network(EXAMPLE).unwrap();
        assert!(afmhv(&net, 0).is_err());
        assert!(acfmhv(&net, 42, &BTreeSet::new()).is_err());
    }

    #[test]
    fn pruning_drops_rules_and_literals() {
        let net = parse_network(EXAMPLE).unwrap();
        // Pruning a2 removes its rule (b1 b2) and shrinks nothing else that
        // contains b1; pruning b3 shrinks {b1 b3} to size 1.
        let v = hit_value(&net, EntityId::b(1), &set(&["a2"]));
        assert_eq!(v, Score::new(3, 2));
        let v = hit_value(&net, EntityId::b(1), &set(&["b3"]));
        assert_eq!(v, Score::new(5, 2));
    }

    #[test]
    fn scores_cover_every_rule() {
        let net = parse_network(EXAMPLE).unwrap();
        let scores = score_idrs(&net, &set(&["b2", "b3"])).unwrap();
        assert_eq!(scores.len(), 8);
        for s in &scores {
            assert_eq!(
                s.afmhv == Score::from_integer(0),
                oracle(EXAMPLE, &s.target.to_string()) == Score::from_integer(0)
            );
        }
        let a2 = scores.iter().find(|s| s.target == EntityId::a(2)).unwrap();
        assert_eq!((a2.ap_size, a2.acfmhv), (3, Score::from_integer(4)));
    }
}
