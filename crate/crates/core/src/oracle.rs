//! Reference SAT deciders used to check the search strategies.
//!
//! Nothing here touches the constraint store: clauses are evaluated directly on
//! literal arrays.

use crate::cnf::CnfInstance;
use crate::EngineError;

pub const BRUTE_FORCE_MAX_VARS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat(Vec<bool>),
    Unsat,
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub result: Verdict,
    /// Total assignments (brute force) or branching nodes (DPLL) visited.
    pub assignments_examined: u64,
}

/// Enumerate all `2^n` assignments, in binary counting order with variable 1 as the
/// low bit, and return the first model.
pub fn brute_force(instance: &CnfInstance) -> Result<OracleVerdict, EngineError> {
    let n = instance.num_vars;
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(EngineError::TooManyVars {
            max: BRUTE_FORCE_MAX_VARS,
            actual: n,
        });
    }
    let mut model = vec![false; n];
    for bits in 0u64..(1u64 << n) {
        for (j, m) in model.iter_mut().enumerate() {
            *m = bits >> j & 1 == 1;
        }
        if instance.satisfied_by(&model) {
            return Ok(OracleVerdict {
                result: Verdict::Sat(model),
                assignments_examined: bits + 1,
            });
        }
    }
    Ok(OracleVerdict {
        result: Verdict::Unsat,
        assignments_examined: 1u64 << n,
    })
}

/// Number of models, by enumeration. Same size limit as [`brute_force`].
pub fn brute_force_count(instance: &CnfInstance) -> Result<u64, EngineError> {
    let n = instance.num_vars;
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(EngineError::TooManyVars {
            max: BRUTE_FORCE_MAX_VARS,
            actual: n,
        });
    }
    let mut model = vec![false; n];
    let mut count = 0;
    for bits in 0u64..(1u64 << n) {
        for (j, m) in model.iter_mut().enumerate() {
            *m = bits >> j & 1 == 1;
        }
        count += u64::from(instance.satisfied_by(&model));
    }
    Ok(count)
}

struct Dpll<'a> {
    clauses: &'a [Vec<i32>],
    assign: Vec<Option<bool>>,
    nodes: u64,
}

enum Unit {
    Conflict,
    Fixpoint,
}

impl Dpll<'_> {
    fn lit_value(&self, lit: i32) -> Option<bool> {
        self.assign[lit.unsigned_abs() as usize - 1].map(|v| v == (lit > 0))
    }

    /// Unit propagation by repeated clause scans; records what it assigned in `trail`.
    fn propagate(&mut self, trail: &mut Vec<usize>) -> Unit {
        loop {
            let mut changed = false;
            for clause in self.clauses {
                let mut open = None;
                let mut open_count = 0;
                let mut satisfied = false;
                for &lit in clause {
                    match self.lit_value(lit) {
                        Some(true) => {
                            satisfied = true;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            open_count += 1;
                            open = Some(lit);
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match (open_count, open) {
                    (0, _) => return Unit::Conflict,
                    (1, Some(lit)) => {
                        let var = lit.unsigned_abs() as usize - 1;
                        self.assign[var] = Some(lit > 0);
                        trail.push(var);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return Unit::Fixpoint;
            }
        }
    }

    /// Visit models depth-first; `on_model` returns false to stop.
    fn search(&mut self, on_model: &mut dyn FnMut(&[Option<bool>]) -> bool) -> bool {
        self.nodes += 1;
        let mut trail = Vec::new();
        let keep_going = match self.propagate(&mut trail) {
            Unit::Conflict => true,
            Unit::Fixpoint => match self.assign.iter().position(Option::is_none) {
                None => on_model(&self.assign),
                Some(var) => {
                    let mut go = true;
                    for value in [false, true] {
                        self.assign[var] = Some(value);
                        go = self.search(on_model);
                        self.assign[var] = None;
                        if !go {
                            break;
                        }
                    }
                    go
                }
            },
        };
        for var in trail {
            self.assign[var] = None;
        }
        keep_going
    }
}

/// Davis–Putnam–Logemann–Loveland: unit propagation, then branch on the first
/// unassigned variable, value 0 first.
pub fn dpll(instance: &CnfInstance) -> OracleVerdict {
    let mut solver = Dpll {
        clauses: &instance.clauses,
        assign: vec![None; instance.num_vars],
        nodes: 0,
    };
    let mut found = None;
    solver.search(&mut |assign| {
        found = Some(assign.iter().map(|v| v.unwrap_or(false)).collect());
        false
    });
    OracleVerdict {
        result: found.map_or(Verdict::Unsat, Verdict::Sat),
        assignments_examined: solver.nodes,
    }
}

/// Count models with DPLL, stopping once `limit` have been seen.
pub fn dpll_count_models(instance: &CnfInstance, limit: u64) -> u64 {
    let mut solver = Dpll {
        clauses: &instance.clauses,
        assign: vec![None; instance.num_vars],
        nodes: 0,
    };
    let mut count = 0;
    solver.search(&mut |_| {
        count += 1;
        count < limit
    });
    count
}
