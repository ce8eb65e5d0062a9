//! Search over the constraint store.
//!
//! [`cssp`] is the driver loop; each strategy supplies a `label` step that tries
//! to assign the next variable and an `unlabel` step that backs up after a dead
//! end. Strategies talk to the store only through `equal`, `delete`,
//! `is_consistent` and `get_explanation`, plus reading variable values.

mod cbj;
mod cbt;
mod dbt;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

pub use cbj::Cbj;
pub use cbt::Cbt;
pub use dbt::Dbt;

use crate::cnf::{self, CnfInstance};
use crate::engine::ConstraintStore;
use crate::label::LabelSet;
use crate::term::VarId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    /// Chronological backtracking.
    Cbt,
    /// Conflict-directed backjumping with a conflict set per value.
    Cbj,
    /// Dynamic backtracking.
    Dbt,
    /// Dynamic backtracking that also retracts assignments determined by the retracted one.
    Fbt,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Cbt, Strategy::Cbj, Strategy::Dbt, Strategy::Fbt];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Cbt => "CBT",
            Strategy::Cbj => "CBJ",
            Strategy::Dbt => "DBT",
            Strategy::Fbt => "FBT",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown strategy `{0}` (expected cbt, cbj, dbt or fbt)")]
pub struct UnknownStrategy(String);

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cbt" => Ok(Strategy::Cbt),
            "cbj" => Ok(Strategy::Cbj),
            "dbt" => Ok(Strategy::Dbt),
            "fbt" => Ok(Strategy::Fbt),
            _ => Err(UnknownStrategy(s.to_string())),
        }
    }
}

/// Step counters. `unlabel_calls` is the headline step count.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub label_calls: u64,
    pub unlabel_calls: u64,
    /// Calls to `equal` made while probing values.
    pub value_attempts: u64,
    /// Live search assignments retracted by unlabel steps.
    pub deleted_assignments: u64,
}

/// The store, the problem variables `V1..Vn` and the counters, as seen by a strategy.
pub struct SearchCtx<'a> {
    pub store: &'a mut ConstraintStore,
    vars: &'a [VarId],
    pub stats: SearchStats,
}

impl<'a> SearchCtx<'a> {
    pub fn new(store: &'a mut ConstraintStore, vars: &'a [VarId]) -> Self {
        Self {
            store,
            vars,
            stats: SearchStats::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }

    /// Engine variable of problem variable `V_i`, 1-based.
    pub fn var(&self, i: usize) -> VarId {
        self.vars[i - 1]
    }

    pub fn is_bound(&self, i: usize) -> bool {
        self.store.is_bound(self.var(i))
    }

    pub fn value(&self, i: usize) -> Option<bool> {
        self.store.value(self.var(i))
    }

    /// Assert `V_i = value` under `label`; true iff the store stays consistent.
    fn probe(&mut self, i: usize, value: bool, label: u32) -> bool {
        self.stats.value_attempts += 1;
        self.store.equal(self.var(i), value, LabelSet::singleton(label));
        self.store.is_consistent()
    }

    fn explanation(&self) -> LabelSet {
        self.store
            .get_explanation()
            .expect("explanation requested after a failed probe")
    }
}

/// A label/unlabel pair driven by [`cssp`].
pub trait Labeller {
    /// Try to assign the `i`-th variable. Returns `i + 1` on success and `i` at a dead end.
    fn label(&mut self, i: usize, ctx: &mut SearchCtx<'_>) -> usize;
    /// Back up after a dead end at `i`. Returns 0 if the problem is inconsistent,
    /// otherwise the progress index to continue from.
    fn unlabel(&mut self, i: usize, ctx: &mut SearchCtx<'_>) -> usize;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    pub deadline: Option<Instant>,
    pub max_steps: Option<u64>,
}

impl Limits {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn timeout(d: Duration) -> Self {
        Self {
            deadline: Some(Instant::now() + d),
            max_steps: None,
        }
    }

    fn exceeded(&self, stats: &SearchStats) -> bool {
        self.max_steps.is_some_and(|m| stats.unlabel_calls >= m)
            || self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// The search driver: `Some(true)` when all `n` variables are labelled,
/// `Some(false)` when unlabelling proves inconsistency, `None` if a limit is hit.
pub fn cssp<L: Labeller + ?Sized>(n: usize, labeller: &mut L, ctx: &mut SearchCtx<'_>, limits: &Limits) -> Option<bool> {
    let mut i = 1;
    while 1 <= i && i <= n {
        if limits.exceeded(&ctx.stats) {
            return None;
        }
        let j = labeller.label(i, ctx);
        i = if i == j { labeller.unlabel(i, ctx) } else { j };
    }
    Some(i > n)
}

pub fn labeller_for(strategy: Strategy, n: usize) -> Box<dyn Labeller> {
    match strategy {
        Strategy::Cbt => Box::new(Cbt::new(n)),
        Strategy::Cbj => Box::new(Cbj::new(n)),
        Strategy::Dbt => Box::new(Dbt::new(n, false)),
        Strategy::Fbt => Box::new(Dbt::new(n, true)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    Sat(Vec<bool>),
    Unsat,
    Timeout,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub result: SearchResult,
    pub stats: SearchStats,
    pub elapsed: Duration,
}

/// Encode `instance` into a fresh store and search it with `strategy`.
pub fn solve(instance: &CnfInstance, strategy: Strategy, limits: &Limits) -> SolveOutcome {
    let start = Instant::now();
    let mut store = ConstraintStore::new();
    let encoding = cnf::encode(instance, &mut store);
    if !store.is_consistent() {
        return SolveOutcome {
            result: SearchResult::Unsat,
            stats: SearchStats::default(),
            elapsed: start.elapsed(),
        };
    }
    let mut labeller = labeller_for(strategy, instance.num_vars);
    let mut ctx = SearchCtx::new(&mut store, &encoding.problem_vars);
    let verdict = cssp(instance.num_vars, labeller.as_mut(), &mut ctx, limits);
    let stats = ctx.stats;
    let result = match verdict {
        None => SearchResult::Timeout,
        Some(false) => SearchResult::Unsat,
        Some(true) => SearchResult::Sat(
            cnf::decode_model(&encoding, &store).expect("every problem variable is bound after a successful search"),
        ),
    };
    SolveOutcome {
        result,
        stats,
        elapsed: start.elapsed(),
    }
}

#[cfg(test)]
mod tests;
