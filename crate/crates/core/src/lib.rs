//! A justification-tracking Boolean constraint engine with explanation-driven
//! search.
//!
//! The [`engine::ConstraintStore`] accepts `or`/`neg` constraints and variable
//! equations, each justified by a [`LabelSet`], propagates a fixed rule set to a
//! fixpoint, explains inconsistencies by label sets, and retracts items by label.
//! The [`search`] module drives it with chronological backtracking,
//! conflict-directed backjumping and two variants of dynamic backtracking.

pub mod binding;
pub mod cnf;
pub mod engine;
pub mod label;
pub mod oracle;
pub mod search;
pub mod term;
pub mod verify;

pub use binding::{BindOutcome, Bindings};
pub use cnf::{CnfInstance, Encoding};
pub use engine::{ConstraintStore, SourceItem, Status};
pub use label::{Label, LabelSet};
pub use search::{SearchResult, SolveOutcome, Strategy};
pub use term::{Term, VarId};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("no explanation: the store is consistent")]
    NotFailed,
    #[error("variable {0} is not bound to a constant")]
    Unbound(usize),
    #[error("brute force is limited to {max} variables, instance has {actual}")]
    TooManyVars { max: usize, actual: usize },
}
