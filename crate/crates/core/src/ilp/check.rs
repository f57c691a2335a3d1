use std::collections::BTreeSet;
use std::collections::VecDeque;

use super::{Assignment, Disjunct, IlpModel, Sense, Var};
use crate::error::{Error, Result};
use crate::model::Literal;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    /// Names of violated constraints, in model order.
    pub violated: Vec<String>,
    /// Objective including the constant offset (induced failures).
    pub objective: i64,
    /// Plain sum of the terminal variables.
    pub raw_objective: i64,
}

impl CheckReport {
    pub fn feasible(&self) -> bool {
        self.violated.is_empty()
    }
}

/// Evaluates every constraint and the objective under `assignment`, which
/// must give a value to every model variable.
pub fn check_assignment(model: &IlpModel, assignment: &Assignment) -> Result<CheckReport> {
    let mut values = Vec::with_capacity(model.vars().len());
    for v in model.vars() {
        match assignment.get(v) {
            Some(&b) => values.push(i64::from(b)),
            None => return Err(Error::MissingVariable(v.to_string())),
        }
    }
    let violated = model
        .constraints()
        .iter()
        .filter(|c| {
            let lhs: i64 = c.terms.iter().map(|&(v, a)| a * values[v]).sum();
            match c.sense {
                Sense::Le => lhs > c.rhs,
                Sense::Ge => lhs < c.rhs,
                Sense::Eq => lhs != c.rhs,
            }
        })
        .map(|c| c.name.clone())
        .collect();
    let raw_objective: i64 = model.objective().iter().map(|&v| values[v]).sum();
    Ok(CheckReport {
        violated,
        objective: raw_objective + model.objective_offset(),
        raw_objective,
    })
}

fn check_labels(model: &IlpModel, modified: &BTreeSet<u32>) -> Result<()> {
    match modified
        .iter()
        .find(|&&l| model.var_index(Var::Modify { label: l }).is_none())
    {
        Some(&l) => Err(Error::UnknownLabel(l)),
        None => Ok(()),
    }
}

/// Fixes `m_v` to the indicator of `modified` and tightens the 0/1 bounds of
/// every other variable to a fixed point using the linear constraints alone.
/// Returns the lower bounds, or `None` when propagation proves infeasibility.
pub fn minimal_assignment(
    model: &IlpModel,
    modified: &BTreeSet<u32>,
) -> Result<Option<Assignment>> {
    check_labels(model, modified)?;
    let n = model.vars().len();
    let mut lo = vec![0i64; n];
    let mut hi = vec![1i64; n];
    for (i, v) in model.vars().iter().enumerate() {
        if let Var::Modify { label } = v {
            let b = i64::from(modified.contains(label));
            lo[i] = b;
            hi[i] = b;
        }
    }

    // Every constraint as one or two rows of the form `sum a x <= r`.
    let mut rows: Vec<(Vec<(usize, i64)>, i64)> = Vec::new();
    for c in model.constraints() {
        let neg = || c.terms.iter().map(|&(v, a)| (v, -a)).collect::<Vec<_>>();
        match c.sense {
            Sense::Le => rows.push((c.terms.clone(), c.rhs)),
            Sense::Ge => rows.push((neg(), -c.rhs)),
            Sense::Eq => {
                rows.push((c.terms.clone(), c.rhs));
                rows.push((neg(), -c.rhs));
            }
        }
    }
    let mut uses: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (r, (terms, _)) in rows.iter().enumerate() {
        for &(v, _) in terms {
            uses[v].push(r);
        }
    }

    let mut queue: VecDeque<usize> = (0..rows.len()).collect();
    let mut queued = vec![true; rows.len()];
    while let Some(r) = queue.pop_front() {
        queued[r] = false;
        let (terms, rhs) = &rows[r];
        let min_act: i64 = terms
            .iter()
            .map(|&(v, a)| if a > 0 { a * lo[v] } else { a * hi[v] })
            .sum();
        let slack = rhs - min_act;
        if slack < 0 {
            return Ok(None);
        }
        for &(v, a) in terms {
            if lo[v] == hi[v] || a.abs() <= slack {
                continue;
            }
            if a > 0 {
                hi[v] = 0;
            } else {
                lo[v] = 1;
            }
            for &other in &uses[v] {
                if !queued[other] {
                    queued[other] = true;
                    queue.push_back(other);
                }
            }
        }
    }
    Ok(Some(
        model
            .vars()
            .iter()
            .zip(&lo)
            .map(|(&v, &b)| (v, b == 1))
            .collect(),
    ))
}

/// Replays the cascade under the model's timing (virtual entities take one
/// step) and writes it out as variable values.
pub fn transcribe_cascade(model: &IlpModel, modified: &BTreeSet<u32>) -> Result<Assignment> {
    check_labels(model, modified)?;
    let t = model.horizon();
    let mut out = Assignment::new();
    let mut state: std::collections::BTreeMap<_, bool> = model
        .rules()
        .iter()
        .map(|r| (r.target, model.attacked().contains(&r.target)))
        .collect();
    let mut virt: Vec<bool> = vec![false; model.virtual_entities().len()];
    for (&e, &f) in &state {
        out.insert(Var::Entity { entity: e, step: 0 }, f);
    }
    for d in 1..=t {
        let lit = |l: Literal| match l {
            Literal::Entity(e) => state[&e],
            Literal::AlwaysAlive => false,
        };
        let next_virt: Vec<bool> = model
            .virtual_entities()
            .iter()
            .map(|v| v.literals.iter().any(|&l| lit(l)))
            .collect();
        let next: std::collections::BTreeMap<_, bool> = model
            .rules()
            .iter()
            .map(|r| {
                let cascades = !r.disjuncts.is_empty()
                    && !modified.contains(&r.label)
                    && r.disjuncts.iter().all(|dj| match *dj {
                        Disjunct::Entity(e) => state[&e],
                        Disjunct::Alive => false,
                        Disjunct::Virtual(id) => virt[id - 1],
                    });
                (r.target, state[&r.target] || cascades)
            })
            .collect();
        state = next;
        virt = next_virt;
        for (&e, &f) in &state {
            out.insert(Var::Entity { entity: e, step: d }, f);
        }
        for (v, &f) in model.virtual_entities().iter().zip(&virt) {
            out.insert(Var::Virtual { id: v.id, step: d }, f);
        }
    }
    for r in model.rules() {
        out.insert(Var::Modify { label: r.label }, modified.contains(&r.label));
    }
    Ok(out)
}
