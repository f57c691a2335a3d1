//! Synchronous, time-stepped failure propagation.
//!
//! At step `t >= 1` every operational entity whose rule is non-empty fails
//! when each of its minterms holds a literal that had failed by step `t - 1`.
//! Initial failures are permanent, `alive` literals never fail, and entities
//! without minterms only fail when attacked.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{EntityId, InterdependentNetwork, Literal};

/// Outcome of one simulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeTrace {
    horizon: usize,
    fail_time: BTreeMap<EntityId, Option<usize>>,
    initial: BTreeSet<EntityId>,
}

impl CascadeTrace {
    /// `|A| + |B| - 1`.
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn initial(&self) -> &BTreeSet<EntityId> {
        &self.initial
    }

    /// `None` means the entity never fails.
    pub fn fail_time(&self, entity: EntityId) -> Option<usize> {
        self.fail_time.get(&entity).copied().flatten()
    }

    pub fn fail_times(&self) -> &BTreeMap<EntityId, Option<usize>> {
        &self.fail_time
    }

    /// Entities failed at the end of the cascade (`A' ∪ B'`).
    pub fn failed_set(&self) -> BTreeSet<EntityId> {
        self.fail_time
            .iter()
            .filter_map(|(e, t)| t.map(|_| *e))
            .collect()
    }

    /// Entities non-operational at step `t`.
    pub fn failed_at(&self, t: usize) -> BTreeSet<EntityId> {
        self.fail_time
            .iter()
            .filter_map(|(e, ft)| matches!(ft, Some(ft) if *ft <= t).then_some(*e))
            .collect()
    }

    /// Step of the last failure, 0 when nothing propagates.
    pub fn last_step(&self) -> usize {
        self.fail_time
            .values()
            .flatten()
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// One row per entity in canonical order, one column per step
    /// `0..=horizon`; `1` marks a non-operational entity.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("entity");
        for t in 0..=self.horizon {
            write!(out, ",{t}").unwrap();
        }
        out.push('\n');
        for (e, ft) in &self.fail_time {
            write!(out, "{e}").unwrap();
            for t in 0..=self.horizon {
                let failed = matches!(ft, Some(ft) if *ft <= t);
                out.push_str(if failed { ",1" } else { ",0" });
            }
            out.push('\n');
        }
        out
    }
}

/// Entities that failed after step 0.
pub fn induced_failure_set(trace: &CascadeTrace) -> BTreeSet<EntityId> {
    trace
        .fail_time
        .iter()
        .filter_map(|(e, t)| matches!(t, Some(t) if *t > 0).then_some(*e))
        .collect()
}

/// Simulates the cascade up to the network horizon.
pub fn simulate_cascade(
    net: &InterdependentNetwork,
    initial: &BTreeSet<EntityId>,
) -> Result<CascadeTrace> {
    simulate_cascade_steps(net, initial, net.horizon())
}

/// Like [`simulate_cascade`] but runs for at most `max_steps` steps. Used to
/// check that running past the horizon changes nothing.
pub fn simulate_cascade_steps(
    net: &InterdependentNetwork,
    initial: &BTreeSet<EntityId>,
    max_steps: usize,
) -> Result<CascadeTrace> {
    let engine = Propagator::new(net);
    let mask = engine.mask(initial)?;
    let times = engine.run(&mask, &vec![false; engine.len()], max_steps);
    Ok(CascadeTrace {
        horizon: net.horizon(),
        fail_time: engine.entities.iter().copied().zip(times).collect(),
        initial: initial.clone(),
    })
}

/// Index-based form of a network for repeated simulation. Positions follow
/// canonical entity order.
#[derive(Debug, Clone)]
pub(crate) struct Propagator {
    entities: Vec<EntityId>,
    position: BTreeMap<EntityId, usize>,
    /// `None` when the entity cannot fail through propagation.
    rules: Vec<Option<Vec<Vec<usize>>>>,
    label_position: Vec<usize>,
}

impl Propagator {
    pub(crate) fn new(net: &InterdependentNetwork) -> Self {
        let entities: Vec<EntityId> = net.entities().collect();
        let position: BTreeMap<EntityId, usize> =
            entities.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let mut label_position = vec![0; net.len()];
        let mut rules = Vec::with_capacity(entities.len());
        for e in &entities {
            let idr = net.idr_of(*e).expect("every entity has a rule");
            label_position[idr.label() as usize - 1] = position[e];
            let mut minterms = Vec::with_capacity(idr.minterms().len());
            let mut immune = idr.is_empty();
            for m in idr.minterms() {
                let lits: Vec<usize> = m
                    .literals()
                    .filter_map(|l| match l {
                        Literal::Entity(x) => Some(position[&x]),
                        Literal::AlwaysAlive => None,
                    })
                    .collect();
                if lits.is_empty() {
                    immune = true;
                }
                minterms.push(lits);
            }
            rules.push((!immune).then_some(minterms));
        }
        Self {
            entities,
            position,
            rules,
            label_position,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.entities.len()
    }

    pub(crate) fn entities(&self) -> &[EntityId] {
        &self.entities
    }

    pub(crate) fn position(&self, e: EntityId) -> Option<usize> {
        self.position.get(&e).copied()
    }

    pub(crate) fn position_of_label(&self, label: u32) -> usize {
        self.label_position[label as usize - 1]
    }

    pub(crate) fn mask(&self, set: &BTreeSet<EntityId>) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.len()];
        for e in set {
            let p = self.position(*e).ok_or(Error::UnknownEntity(*e))?;
            mask[p] = true;
        }
        Ok(mask)
    }

    pub(crate) fn set(&self, mask: &[bool]) -> BTreeSet<EntityId> {
        mask.iter()
            .zip(&self.entities)
            .filter_map(|(m, e)| m.then_some(*e))
            .collect()
    }

    /// Fail times per position. `immune` entities behave as if their rule had
    /// gained an `alive` minterm.
    pub(crate) fn run(
        &self,
        initial: &[bool],
        immune: &[bool],
        max_steps: usize,
    ) -> Vec<Option<usize>> {
        let mut fail: Vec<Option<usize>> = initial.iter().map(|&f| f.then_some(0)).collect();
        for t in 1..=max_steps {
            let mut changed = false;
            for (i, rule) in self.rules.iter().enumerate() {
                if fail[i].is_some() || immune[i] {
                    continue;
                }
                let Some(minterms) = rule else { continue };
                let dead = minterms
                    .iter()
                    .all(|m| m.iter().any(|&l| matches!(fail[l], Some(ft) if ft < t)));
                if dead {
                    fail[i] = Some(t);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        fail
    }

    /// Final failure mask up to the horizon.
    pub(crate) fn final_failed(&self, initial: &[bool], immune: &[bool]) -> Vec<bool> {
        self.run(initial, immune, self.len().saturating_sub(1))
            .into_iter()
            .map(|t| t.is_some())
            .collect()
    }

    /// Number of entities failing after step 0.
    pub(crate) fn induced_count(&self, initial: &[bool], immune: &[bool]) -> usize {
        self.final_failed(initial, immune)
            .iter()
            .zip(initial)
            .filter(|(f, i)| **f && !**i)
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{apply_modification, parse_network, Auxiliary, Modification};

    const EXAMPLE: &str = "a1 <- b1 + b2\na2 <- b1 b2\na3 <- b2 + b1 b3\na4 <- b3\na5\nb1 <- a2\nb2 <- a2\nb3 <- a4\n";

    fn set(names: &[&str]) -> BTreeSet<EntityId> {
        names.iter().map(|n| n.parse().unwrap()).collect()
    }

    #[test]
    fn example_trace() {
        let net = parse_network(EXAMPLE).unwrap();
        let trace = simulate_cascade(&net, &set(&["b2", "b3"])).unwrap();
        assert_eq!(trace.horizon(), 7);
        assert_eq!(
            trace.failed_set(),
            set(&["a1", "a2", "a3", "a4", "b1", "b2", "b3"])
        );
        let expected = [
            ("a1", Some(3)),
            ("a2", Some(1)),
            ("a3", Some(1)),
            ("a4", Some(1)),
            ("a5", None),
            ("b1", Some(2)),
            ("b2", Some(0)),
            ("b3", Some(0)),
        ];
        for (name, t) in expected {
            assert_eq!(trace.fail_time(name.parse().unwrap()), t, "{name}");
        }
        assert_eq!(
            induced_failure_set(&trace),
            set(&["a1", "a2", "a3", "a4", "b1"])
        );
    }

    #[test]
    fn example_trace_csv() {
        let net = parse_network(EXAMPLE).unwrap();
        let trace = simulate_cascade(&net, &set(&["b2", "b3"])).unwrap();
        let expected = "\
entity,0,1,2,3,4,5,6,7
a1,0,0,0,1,1,1,1,1
a2,0,1,1,1,1,1,1,1
a3,0,1,1,1,1,1,1,1
a4,0,1,1,1,1,1,1,1
a5,0,0,0,0,0,0,0,0
b1,0,0,1,1,1,1,1,1
b2,1,1,1,1,1,1,1,1
b3,1,1,1,1,1,1,1,1
";
        assert_eq!(trace.to_csv(), expected);
    }

    #[test]
    fn no_initial_failures() {
        let net = parse_network(EXAMPLE).unwrap();
        let trace = simulate_cascade(&net, &BTreeSet::new()).unwrap();
        assert!(trace.failed_set().is_empty());
        assert!(induced_failure_set(&trace).is_empty());
    }

    #[test]
    fn modified_b1_stops_the_cascade() {
        let net = parse_network(EXAMPLE).unwrap();
        let modified = apply_modification(
            &net,
            Modification {
                idr_label: net.label_of(EntityId::b(1)).unwrap(),
                auxiliary: Auxiliary::Entity(EntityId::a(5)),
            },
        )
        .unwrap();
        let trace = simulate_cascade(&modified, &set(&["b2", "b3"])).unwrap();
        assert_eq!(trace.failed_set(), set(&["a2", "a3", "a4", "b2", "b3"]));
        assert_eq!(induced_failure_set(&trace), set(&["a2", "a3", "a4"]));
    }

    #[test]
    fn always_alive_target_never_fails() {
        let net = parse_network(EXAMPLE).unwrap();
        for idr in net.idrs() {
            let modified =
                apply_modification(&net, Modification::always_alive(idr.label())).unwrap();
            let attack: BTreeSet<_> = net.entities().filter(|e| *e != idr.target()).collect();
            let trace = simulate_cascade(&modified, &attack).unwrap();
            assert_eq!(trace.fail_time(idr.target()), None, "{}", idr.target());
        }
    }

    #[test]
    fn alive_inside_a_conjunction_is_just_operational() {
        let net = parse_network("a1 <- alive b1\nb1").unwrap();
        let trace = simulate_cascade(&net, &set(&["b1"])).unwrap();
        assert_eq!(trace.fail_time(EntityId::a(1)), Some(1));
    }

    #[test]
    fn initial_failures_are_permanent() {
        let net = parse_network("a1 <- alive\nb1 <- a1").unwrap();
        let trace = simulate_cascade(&net, &set(&["a1"])).unwrap();
        assert_eq!(trace.failed_set(), set(&["a1", "b1"]));
    }

    #[test]
    fn unknown_initial_entity() {
        let net = parse_network(EXAMPLE).unwrap();
        assert_eq!(
            simulate_cascade(&net, &set(&["b9"])).unwrap_err(),
            Error::UnknownEntity(EntityId::b(9))
        );
    }

    #[test]
    fn chain_uses_the_whole_horizon() {
        // a1 <- b1 <- a2 <- b2 <- a3: the last link fails at step 4 = horizon.
        let net = parse_network("a1 <- b1\nb1 <- a2\na2 <- b2\nb2 <- a3\na3").unwrap();
        let trace = simulate_cascade(&net, &set(&["a3"])).unwrap();
        assert_eq!(trace.horizon(), 4);
        assert_eq!(trace.fail_time(EntityId::a(1)), Some(4));
        assert_eq!(trace.last_step(), 4);
    }
}
