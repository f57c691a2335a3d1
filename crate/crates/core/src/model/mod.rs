//! Entities, minterms, dependency rules and networks.
//!
//! Every entity of a network owns exactly one rule record. A rule with no
//! minterms marks an entity that depends on nothing; it keeps a label so the
//! label space `1..=P` covers every entity, which is what the allocation
//! solvers and the ILP index over.

mod dsl;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use dsl::{format_network, parse_network};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn letter(self) -> char {
        match self {
            Side::A => 'a',
            Side::B => 'b',
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// An entity of either network. Ordering is by side, then numeric index,
/// which is the canonical order used everywhere (`a2 < a10 < b1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId {
    side: Side,
    index: u32,
}

impl EntityId {
    /// Panics if `index` is zero.
    pub fn new(side: Side, index: u32) -> Self {
        assert!(index > 0, "entity indices start at 1");
        Self { side, index }
    }

    pub fn a(index: u32) -> Self {
        Self::new(Side::A, index)
    }

    pub fn b(index: u32) -> Self {
        Self::new(Side::B, index)
    }

    pub fn side(self) -> Side {
        self.side
    }

    pub fn index(self) -> u32 {
        self.index
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.side.letter(), self.index)
    }
}

impl FromStr for EntityId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut chars = s.chars();
        let side = match chars.next() {
            Some('a') => Side::A,
            Some('b') => Side::B,
            _ => return Err(format!("`{s}` is not an entity (expected a<n> or b<n>)")),
        };
        let digits = chars.as_str();
        if digits.is_empty()
            || digits.starts_with('0')
            || !digits.bytes().all(|c| c.is_ascii_digit())
        {
            return Err(format!("`{s}` is not an entity (expected a<n> or b<n>)"));
        }
        let index = digits
            .parse::<u32>()
            .map_err(|_| format!("entity index in `{s}` is too large"))?;
        Ok(EntityId::new(side, index))
    }
}

impl Serialize for EntityId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EntityId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A literal of a minterm. `AlwaysAlive` stands for an auxiliary entity that
/// never fails; it renders as `alive`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Entity(EntityId),
    AlwaysAlive,
}

impl Literal {
    pub fn entity(self) -> Option<EntityId> {
        match self {
            Literal::Entity(e) => Some(e),
            Literal::AlwaysAlive => None,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Entity(e) => e.fmt(f),
            Literal::AlwaysAlive => f.write_str("alive"),
        }
    }
}

impl From<EntityId> for Literal {
    fn from(e: EntityId) -> Self {
        Literal::Entity(e)
    }
}

/// A conjunction of literals. Ordered by size first, then lexicographically
/// by literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Minterm(BTreeSet<Literal>);

impl Minterm {
    /// Returns `None` for an empty literal set.
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Option<Self> {
        let set: BTreeSet<Literal> = literals.into_iter().collect();
        (!set.is_empty()).then_some(Minterm(set))
    }

    pub fn single(literal: impl Into<Literal>) -> Self {
        Minterm(BTreeSet::from([literal.into()]))
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.0.iter().copied()
    }

    pub fn entities(&self) -> impl Iterator<Item = EntityId> + '_ {
        self.0.iter().filter_map(|l| l.entity())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, literal: Literal) -> bool {
        self.0.contains(&literal)
    }
}

impl Ord for Minterm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().cmp(other.0.iter()))
    }
}

impl PartialOrd for Minterm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Minterm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, lit) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            lit.fmt(f)?;
        }
        Ok(())
    }
}

/// One dependency rule: `target <- m1 + m2 + ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Idr {
    label: u32,
    target: EntityId,
    minterms: BTreeSet<Minterm>,
}

impl Idr {
    pub fn label(&self) -> u32 {
        self.label
    }

    pub fn target(&self) -> EntityId {
        self.target
    }

    /// Minterms in canonical order.
    pub fn minterms(&self) -> impl ExactSizeIterator<Item = &Minterm> + '_ {
        self.minterms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.minterms.is_empty()
    }

    /// `E_D`: the target plus every entity on the right-hand side.
    pub fn entities(&self) -> BTreeSet<EntityId> {
        let mut out: BTreeSet<EntityId> = self.minterms.iter().flat_map(|m| m.entities()).collect();
        out.insert(self.target);
        out
    }

    pub fn mentions(&self, literal: Literal) -> bool {
        self.minterms.iter().any(|m| m.contains(literal))
    }
}

impl fmt::Display for Idr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.target.fmt(f)?;
        for (i, m) in self.minterms.iter().enumerate() {
            f.write_str(if i == 0 { " <- " } else { " + " })?;
            m.fmt(f)?;
        }
        Ok(())
    }
}

/// `I(A, B, F(A, B))`. Immutable once built; rules are stored by label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InterdependentNetwork {
    idrs: Vec<Idr>,
    by_target: BTreeMap<EntityId, usize>,
}

impl InterdependentNetwork {
    /// Builds a validated network from `(target, minterms)` pairs. Labels are
    /// assigned in input order starting at 1. Each entity must appear exactly
    /// once as a target; an empty minterm list declares a dependency-free
    /// entity.
    pub fn from_rules<I, M>(rules: I) -> Result<Self>
    where
        I: IntoIterator<Item = (EntityId, M)>,
        M: IntoIterator<Item = Minterm>,
    {
        let mut builder = NetworkBuilder::default();
        for (target, minterms) in rules {
            builder.add_rule(target, minterms)?;
        }
        builder.finish()
    }

    pub fn len(&self) -> usize {
        self.idrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idrs.is_empty()
    }

    /// All rules in label order.
    pub fn idrs(&self) -> &[Idr] {
        &self.idrs
    }

    pub fn idr(&self, label: u32) -> Result<&Idr> {
        label
            .checked_sub(1)
            .and_then(|i| self.idrs.get(i as usize))
            .ok_or(Error::UnknownLabel(label))
    }

    pub fn idr_of(&self, target: EntityId) -> Option<&Idr> {
        self.by_target.get(&target).map(|&i| &self.idrs[i])
    }

    pub fn contains(&self, entity: EntityId) -> bool {
        self.by_target.contains_key(&entity)
    }

    /// Every entity in canonical order.
    pub fn entities(&self) -> impl Iterator<Item = EntityId> + '_ {
        self.by_target.keys().copied()
    }

    pub fn entities_a(&self) -> impl Iterator<Item = EntityId> + '_ {
        self.entities().filter(|e| e.side() == Side::A)
    }

    pub fn entities_b(&self) -> impl Iterator<Item = EntityId> + '_ {
        self.entities().filter(|e| e.side() == Side::B)
    }

    /// Longest possible cascade, `|A| + |B| - 1` steps.
    pub fn horizon(&self) -> usize {
        self.len().saturating_sub(1)
    }

    pub fn label_of(&self, target: EntityId) -> Option<u32> {
        self.idr_of(target).map(Idr::label)
    }
}

#[derive(Default)]
struct NetworkBuilder {
    idrs: Vec<Idr>,
    by_target: BTreeMap<EntityId, usize>,
}

impl NetworkBuilder {
    fn add_rule(
        &mut self,
        target: EntityId,
        minterms: impl IntoIterator<Item = Minterm>,
    ) -> Result<()> {
        if self.by_target.contains_key(&target) {
            return Err(Error::DuplicateTarget(target));
        }
        let mut set = BTreeSet::new();
        for m in minterms {
            if m.contains(Literal::Entity(target)) {
                return Err(Error::SelfReference(target));
            }
            if !set.insert(m) {
                return Err(Error::DuplicateMinterm(target));
            }
        }
        let label = self.idrs.len() as u32 + 1;
        self.by_target.insert(target, self.idrs.len());
        self.idrs.push(Idr {
            label,
            target,
            minterms: set,
        });
        Ok(())
    }

    fn finish(self) -> Result<InterdependentNetwork> {
        for idr in &self.idrs {
            for e in idr.minterms.iter().flat_map(|m| m.entities()) {
                if !self.by_target.contains_key(&e) {
                    return Err(Error::UnknownEntity(e));
                }
            }
        }
        Ok(InterdependentNetwork {
            idrs: self.idrs,
            by_target: self.by_target,
        })
    }
}

/// The auxiliary added by a modification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Auxiliary {
    Entity(EntityId),
    AlwaysAlive,
}

impl Auxiliary {
    pub fn literal(self) -> Literal {
        match self {
            Auxiliary::Entity(e) => Literal::Entity(e),
            Auxiliary::AlwaysAlive => Literal::AlwaysAlive,
        }
    }
}

impl fmt::Display for Auxiliary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.literal().fmt(f)
    }
}

impl Serialize for Auxiliary {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Adds `auxiliary` as a new single-literal minterm of rule `idr_label`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Modification {
    pub idr_label: u32,
    pub auxiliary: Auxiliary,
}

impl Modification {
    pub fn always_alive(idr_label: u32) -> Self {
        Self {
            idr_label,
            auxiliary: Auxiliary::AlwaysAlive,
        }
    }

    pub fn entity(idr_label: u32, auxiliary: EntityId) -> Self {
        Self {
            idr_label,
            auxiliary: Auxiliary::Entity(auxiliary),
        }
    }
}

/// Returns a copy of `net` in which the labeled rule gains the minterm
/// `{auxiliary}`. A concrete auxiliary must be a known entity outside `E_D`.
/// Membership in the failure set of an attack is checked by callers that know
/// the attack (see [`crate::solvers::auxiliary_protection_set`]).
pub fn apply_modification(
    net: &InterdependentNetwork,
    modification: Modification,
) -> Result<InterdependentNetwork> {
    let idr = net.idr(modification.idr_label)?;
    let literal = modification.auxiliary.literal();
    if let Auxiliary::Entity(e) = modification.auxiliary {
        if !net.contains(e) {
            return Err(Error::UnknownEntity(e));
        }
        if idr.target == e {
            return Err(Error::AuxiliaryInRule {
                label: idr.label,
                auxiliary: e.to_string(),
            });
        }
    }
    if idr.mentions(literal) {
        return Err(Error::AuxiliaryInRule {
            label: idr.label,
            auxiliary: literal.to_string(),
        });
    }
    let mut out = net.clone();
    out.idrs[modification.idr_label as usize - 1]
        .minterms
        .insert(Minterm::single(literal));
    Ok(out)
}
