//! Cascading failure analysis for interdependent infrastructure networks.
//!
//! Networks are expressed as sets of dependency rules over two entity sides
//! (`a*` for power, `b*` for communication). Each rule states that a target
//! entity stays operational while at least one of its minterms (a conjunction
//! of entities) is fully operational. On top of the model the crate provides
//! a synchronous cascade simulator, K-most-vulnerable search, several solvers
//! for allocating auxiliary entities under a modification budget, an ILP
//! formulation with an LP-file writer, and an experiment harness.

pub mod cascade;
pub mod cli;
pub mod error;
pub mod harness;
pub mod ilp;
pub mod model;
pub mod solvers;
pub mod vulnerability;

pub use cascade::{induced_failure_set, simulate_cascade, CascadeTrace};
pub use error::{Error, Result};
pub use model::{
    apply_modification, format_network, parse_network, Auxiliary, EntityId, Idr,
    InterdependentNetwork, Literal, Minterm, Modification, Side,
};
