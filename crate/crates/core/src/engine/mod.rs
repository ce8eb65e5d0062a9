//! The adaptive Boolean constraint store and its rule set.

pub mod rules;
mod store;

pub use rules::Kind;
pub use store::{ConstraintStore, EngineStats, SourceItem, Status, Snapshot};

#[cfg(test)]
mod tests;
