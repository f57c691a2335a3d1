//! Time-indexed 0/1 program for optimal allocation.
//!
//! Variables: `x_i_d` / `y_j_d` mark entity `a_i` / `b_j` as failed at step
//! `d`, `c_k_d` marks virtual entity `k` (one per multi-literal minterm) as
//! failed, and `m_v` selects rule `v` for an `alive` auxiliary.
//!
//! Constraint families, for `1 <= d <= T`:
//!
//! * `init`: `x_i_0 >= g_i` with the attack folded in as a constant.
//! * `mono`: `x_i_d >= x_i_(d-1)`.
//! * `vlo` / `vhi`: `N c_k_d >= sum` and `c_k_d <= sum` over the `N`
//!   conjuncts at `d - 1`; a virtual entity reads as operational at step 0.
//! * `dlo` / `dhi`: the auxiliary acts as an extra disjunct whose failure
//!   indicator is `1 - m_v`:
//!   `x_i_d >= sum + (1 - m_v) - n` and
//!   `(n + 1) x_i_d <= sum + (1 - m_v) + (n + 1) g_i`.
//!   The `g_i` term keeps attacked entities failed even when their
//!   disjuncts are alive.
//! * `free`: `x_i_d <= x_i_(d-1)` for entities without minterms.
//! * `budget`: `sum m_v = s`.
//!
//! Virtual entities delay propagation by one step, so the horizon is
//! `T = 2 (|A| + |B|)`. The objective counts failed entities at `T`; the
//! attacked entities are a constant part of it and are reported as an
//! offset so the objective value equals the number of induced failures.

mod check;
mod lp;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{EntityId, InterdependentNetwork, Literal, Side};

pub use check::{check_assignment, minimal_assignment, transcribe_cascade, CheckReport};
pub use lp::{variable_map, write_lp};

/// A 0/1 decision variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Entity { entity: EntityId, step: usize },
    Virtual { id: usize, step: usize },
    Modify { label: u32 },
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Entity { entity, step } => {
                let prefix = match entity.side() {
                    Side::A => 'x',
                    Side::B => 'y',
                };
                write!(f, "{prefix}_{}_{step}", entity.index())
            }
            Var::Virtual { id, step } => write!(f, "c_{id}_{step}"),
            Var::Modify { label } => write!(f, "m_{label}"),
        }
    }
}

pub type Assignment = BTreeMap<Var, bool>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// `sum(coef * var) sense rhs`, integer coefficients over variable indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

/// One disjunct of a rule after virtualisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Disjunct {
    Entity(EntityId),
    Alive,
    Virtual(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualEntity {
    pub id: usize,
    pub owner_label: u32,
    pub literals: Vec<Literal>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleShape {
    pub label: u32,
    pub target: EntityId,
    pub disjuncts: Vec<Disjunct>,
}

/// Constraint and variable counts by family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModelStats {
    pub entities: usize,
    pub virtual_entities: usize,
    pub rules: usize,
    pub empty_rules: usize,
    pub horizon: usize,
    pub variables: usize,
    pub init: usize,
    pub mono: usize,
    pub virtual_bounds: usize,
    pub disjunct_bounds: usize,
    pub free: usize,
    pub budget: usize,
}

impl ModelStats {
    pub fn constraints(&self) -> usize {
        self.init + self.mono + self.virtual_bounds + self.disjunct_bounds + self.free + self.budget
    }
}

#[derive(Debug, Clone)]
pub struct IlpModel {
    horizon: usize,
    s: usize,
    attacked: BTreeSet<EntityId>,
    vars: Vec<Var>,
    index: HashMap<Var, usize>,
    constraints: Vec<Constraint>,
    objective: Vec<usize>,
    objective_offset: i64,
    virtuals: Vec<VirtualEntity>,
    rules: Vec<RuleShape>,
    stats: ModelStats,
}

impl IlpModel {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn budget(&self) -> usize {
        self.s
    }

    pub fn attacked(&self) -> &BTreeSet<EntityId> {
        &self.attacked
    }

    /// Variables in emission order.
    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn var_index(&self, var: Var) -> Option<usize> {
        self.index.get(&var).copied()
    }

    pub fn var_by_name(&self, name: &str) -> Option<Var> {
        self.vars.iter().copied().find(|v| v.to_string() == name)
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Indices of the variables summed by the objective.
    pub fn objective(&self) -> &[usize] {
        &self.objective
    }

    /// Constant added to the objective sum (minus the attacked count).
    pub fn objective_offset(&self) -> i64 {
        self.objective_offset
    }

    pub fn virtual_entities(&self) -> &[VirtualEntity] {
        &self.virtuals
    }

    pub fn rules(&self) -> &[RuleShape] {
        &self.rules
    }

    pub fn stats(&self) -> ModelStats {
        self.stats
    }
}

/// Linear expression with a constant part, used while emitting constraints.
#[derive(Default)]
struct Expr {
    terms: Vec<(usize, i64)>,
    constant: i64,
}

impl Expr {
    fn add(&mut self, var: usize, coef: i64) -> &mut Self {
        match self.terms.iter_mut().find(|(v, _)| *v == var) {
            Some(t) => t.1 += coef,
            None => self.terms.push((var, coef)),
        }
        self
    }

    fn add_expr(&mut self, other: &Expr, factor: i64) -> &mut Self {
        for &(v, c) in &other.terms {
            self.add(v, c * factor);
        }
        self.constant += other.constant * factor;
        self
    }

    /// `self sense rhs`, with constants moved to the right.
    fn constrain(self, name: String, sense: Sense, rhs: i64) -> Constraint {
        Constraint {
            name,
            terms: self.terms.into_iter().filter(|(_, c)| *c != 0).collect(),
            sense,
            rhs: rhs - self.constant,
        }
    }
}

struct Builder {
    vars: Vec<Var>,
    index: HashMap<Var, usize>,
}

impl Builder {
    fn var(&mut self, v: Var) -> usize {
        let next = self.vars.len();
        *self.index.entry(v).or_insert_with(|| {
            self.vars.push(v);
            next
        })
    }

    fn get(&self, v: Var) -> usize {
        self.index[&v]
    }

    fn entity(&self, e: EntityId, step: usize) -> Expr {
        Expr {
            terms: vec![(self.get(Var::Entity { entity: e, step }), 1)],
            constant: 0,
        }
    }

    /// Failure indicator of a literal at `step`; `alive` is constant 0.
    fn literal(&self, l: Literal, step: usize) -> Expr {
        match l {
            Literal::Entity(e) => self.entity(e, step),
            Literal::AlwaysAlive => Expr::default(),
        }
    }

    fn disjunct(&self, d: Disjunct, step: usize) -> Expr {
        match d {
            Disjunct::Entity(e) => self.entity(e, step),
            Disjunct::Alive => Expr::default(),
            Disjunct::Virtual(_) if step == 0 => Expr::default(),
            Disjunct::Virtual(id) => Expr {
                terms: vec![(self.get(Var::Virtual { id, step }), 1)],
                constant: 0,
            },
        }
    }
}

/// Builds the model for `attacked` and budget `s` (`s` may be 0).
pub fn build_ilp(
    net: &InterdependentNetwork,
    attacked: &BTreeSet<EntityId>,
    s: usize,
) -> Result<IlpModel> {
    if s > net.len() {
        return Err(Error::InvalidBudget {
            s,
            reason: format!("the network has only {} rules", net.len()),
        });
    }
    if let Some(e) = attacked.iter().find(|e| !net.contains(**e)) {
        return Err(Error::UnknownEntity(*e));
    }
    let horizon = 2 * net.len();
    let entities: Vec<EntityId> = net.entities().collect();

    let mut virtuals = Vec::new();
    let mut rules = Vec::new();
    for idr in net.idrs() {
        let disjuncts = idr
            .minterms()
            .map(|m| {
                let lits: Vec<Literal> = m.literals().collect();
                match lits[..] {
                    [Literal::Entity(e)] => Disjunct::Entity(e),
                    [Literal::AlwaysAlive] => Disjunct::Alive,
                    _ => {
                        let id = virtuals.len() + 1;
                        virtuals.push(VirtualEntity {
                            id,
                            owner_label: idr.label(),
                            literals: lits,
                        });
                        Disjunct::Virtual(id)
                    }
                }
            })
            .collect();
        rules.push(RuleShape {
            label: idr.label(),
            target: idr.target(),
            disjuncts,
        });
    }

    let mut b = Builder {
        vars: Vec::new(),
        index: HashMap::new(),
    };
    for &e in &entities {
        for step in 0..=horizon {
            b.var(Var::Entity { entity: e, step });
        }
    }
    for v in &virtuals {
        for step in 1..=horizon {
            b.var(Var::Virtual { id: v.id, step });
        }
    }
    for idr in net.idrs() {
        b.var(Var::Modify { label: idr.label() });
    }

    let mut constraints = Vec::new();
    let mut stats = ModelStats {
        entities: entities.len(),
        virtual_entities: virtuals.len(),
        rules: net.len(),
        empty_rules: net.idrs().iter().filter(|d| d.is_empty()).count(),
        horizon,
        variables: b.vars.len(),
        init: 0,
        mono: 0,
        virtual_bounds: 0,
        disjunct_bounds: 0,
        free: 0,
        budget: 0,
    };

    for &e in &entities {
        let g = i64::from(attacked.contains(&e));
        let name = format!("init_{}", Var::Entity { entity: e, step: 0 });
        constraints.push(b.entity(e, 0).constrain(name, Sense::Ge, g));
        stats.init += 1;
    }
    for &e in &entities {
        for d in 1..=horizon {
            let mut ex = b.entity(e, d);
            ex.add_expr(&b.entity(e, d - 1), -1);
            let name = format!("mono_{}", Var::Entity { entity: e, step: d });
            constraints.push(ex.constrain(name, Sense::Ge, 0));
            stats.mono += 1;
        }
    }
    for v in &virtuals {
        let n = v.literals.len() as i64;
        for d in 1..=horizon {
            let c = b.get(Var::Virtual { id: v.id, step: d });
            let mut sum = Expr::default();
            for &l in &v.literals {
                sum.add_expr(&b.literal(l, d - 1), 1);
            }
            let tag = Var::Virtual { id: v.id, step: d };
            let mut lo = Expr::default();
            lo.add(c, n).add_expr(&sum, -1);
            constraints.push(lo.constrain(format!("vlo_{tag}"), Sense::Ge, 0));
            let mut hi = Expr::default();
            hi.add(c, 1).add_expr(&sum, -1);
            constraints.push(hi.constrain(format!("vhi_{tag}"), Sense::Le, 0));
            stats.virtual_bounds += 2;
        }
    }
    for rule in &rules {
        let e = rule.target;
        let m = b.get(Var::Modify { label: rule.label });
        let g = i64::from(attacked.contains(&e));
        for d in 1..=horizon {
            let tag = Var::Entity { entity: e, step: d };
            if rule.disjuncts.is_empty() {
                let mut ex = b.entity(e, d);
                ex.add_expr(&b.entity(e, d - 1), -1);
                constraints.push(ex.constrain(format!("free_{tag}"), Sense::Le, 0));
                stats.free += 1;
                continue;
            }
            let n = rule.disjuncts.len() as i64;
            let mut sum = Expr::default();
            for &dj in &rule.disjuncts {
                sum.add_expr(&b.disjunct(dj, d - 1), 1);
            }
            // x_d - sum + m_v >= 1 - n
            let mut lo = b.entity(e, d);
            lo.add_expr(&sum, -1).add(m, 1);
            constraints.push(lo.constrain(format!("dlo_{tag}"), Sense::Ge, 1 - n));
            // (n+1) x_d - sum + m_v <= 1 + (n+1) g
            let mut hi = Expr::default();
            hi.add_expr(&b.entity(e, d), n + 1)
                .add_expr(&sum, -1)
                .add(m, 1);
            constraints.push(hi.constrain(format!("dhi_{tag}"), Sense::Le, 1 + (n + 1) * g));
            stats.disjunct_bounds += 2;
        }
    }
    let mut budget = Expr::default();
    for idr in net.idrs() {
        budget.add(b.get(Var::Modify { label: idr.label() }), 1);
    }
    constraints.push(budget.constrain("budget".into(), Sense::Eq, s as i64));
    stats.budget = 1;

    let objective = entities
        .iter()
        .map(|&e| {
            b.get(Var::Entity {
                entity: e,
                step: horizon,
            })
        })
        .collect();

    Ok(IlpModel {
        horizon,
        s,
        attacked: attacked.clone(),
        vars: b.vars,
        index: b.index,
        constraints,
        objective,
        objective_offset: -(attacked.len() as i64),
        virtuals,
        rules,
        stats,
    })
}
