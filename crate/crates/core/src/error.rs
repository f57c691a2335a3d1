use thiserror::Error;

use crate::model::EntityId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("entity {0} has more than one dependency rule")]
    DuplicateTarget(EntityId),
    #[error("unknown entity {0}")]
    UnknownEntity(EntityId),
    #[error("entity {0} depends on itself")]
    SelfReference(EntityId),
    #[error("duplicate minterm in the rule of {0}")]
    DuplicateMinterm(EntityId),
    #[error("duplicate literal {literal} in a minterm of {target}")]
    DuplicateLiteral { target: EntityId, literal: String },
    #[error("no dependency rule with label {0}")]
    UnknownLabel(u32),
    #[error("auxiliary {auxiliary} already appears in rule {label}")]
    AuxiliaryInRule { label: u32, auxiliary: String },
    #[error("auxiliary {0} fails under the given attack")]
    AuxiliaryFails(EntityId),
    #[error("k = {k} is outside 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("enumeration needs {needed} evaluations, cap is {cap}")]
    CapExceeded { needed: u128, cap: u64 },
    #[error("budget {s} is invalid: {reason}")]
    InvalidBudget { s: usize, reason: String },
    #[error("network is outside the single-literal special case: {0}")]
    NotSpecialCase(String),
    #[error("universe element {0} is not contained in any subset")]
    UncoveredElement(u32),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("assignment is missing variable {0}")]
    MissingVariable(String),
}
