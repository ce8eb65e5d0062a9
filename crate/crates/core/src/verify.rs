//! Randomized self-checks: strategy/oracle agreement on small CNFs and a
//! rebuild-equivalence fuzz of the constraint store.
//!
//! Every trial is fully determined by its seed so a failure can be reproduced.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnf::CnfInstance;
use crate::engine::{ConstraintStore, SourceItem, Status};
use crate::label::{Label, LabelSet};
use crate::oracle::{self, Verdict};
use crate::search::{self, Limits, SearchResult, Strategy};
use crate::term::{Term, VarId};

/// Random 3-CNF over `num_vars` variables. Each clause has three distinct
/// variables (fewer if `num_vars < 3`).
pub fn random_3cnf<R: Rng>(rng: &mut R, num_vars: usize, num_clauses: usize) -> CnfInstance {
    let vars: Vec<i32> = (1..=num_vars as i32).collect();
    let clauses = (0..num_clauses)
        .map(|_| {
            vars.choose_multiple(rng, 3.min(num_vars))
                .map(|&v| if rng.gen() { v } else { -v })
                .collect()
        })
        .collect();
    CnfInstance::new("random", num_vars, clauses)
}

/// The instance used by agreement trial `seed`: `num_vars` variables and a
/// clause/variable ratio drawn from [3, 6], so both outcomes are common.
pub fn agreement_instance(seed: u64, num_vars: usize) -> CnfInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ratio = rng.gen_range(3.0..6.0);
    let m = (ratio * num_vars as f64).round() as usize;
    let mut inst = random_3cnf(&mut rng, num_vars, m);
    inst.name = format!("random-{num_vars}-{seed}");
    inst
}

/// Solve `instance` with both oracles and all four strategies. Returns whether it
/// is satisfiable, or a description of the first disagreement.
pub fn check_agreement(instance: &CnfInstance) -> Result<bool, String> {
    let dpll = oracle::dpll(instance).result;
    let expected = dpll.is_sat();
    if let Verdict::Sat(m) = &dpll {
        if !instance.satisfied_by(m) {
            return Err(format!("{}: dpll model violates a clause", instance.name));
        }
    }
    if instance.num_vars <= oracle::BRUTE_FORCE_MAX_VARS {
        let brute = oracle::brute_force(instance).map_err(|e| e.to_string())?.result;
        if brute.is_sat() != expected {
            return Err(format!("{}: brute force says sat={}, dpll says sat={expected}", instance.name, brute.is_sat()));
        }
    }
    for s in Strategy::ALL {
        match search::solve(instance, s, &Limits::none()).result {
            SearchResult::Sat(model) => {
                if !expected {
                    return Err(format!("{}: {s} found a model of an unsatisfiable instance", instance.name));
                }
                if !instance.satisfied_by(&model) {
                    return Err(format!("{}: {s} model violates a clause", instance.name));
                }
            }
            SearchResult::Unsat if expected => {
                return Err(format!("{}: {s} reports UNSAT on a satisfiable instance", instance.name));
            }
            SearchResult::Unsat => {}
            SearchResult::Timeout => return Err(format!("{}: {s} did not finish", instance.name)),
        }
    }
    Ok(expected)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FuzzReport {
    pub ops: usize,
    pub deletes: usize,
    /// Operations after which the store was failed.
    pub failures: usize,
}

/// Truth tables over all assignments to `n` variables, one bit per assignment.
struct Tables {
    n: usize,
    words: usize,
}

impl Tables {
    fn new(n: usize) -> Self {
        Tables { n, words: (1usize << n).div_ceil(64) }
    }

    fn term(&self, t: Term) -> Vec<u64> {
        match t {
            Term::Const(false) => vec![0; self.words],
            Term::Const(true) => vec![!0; self.words],
            Term::Var(v) => (0..self.words)
                .map(|w| {
                    (0..64).fold(0u64, |acc, b| {
                        let a = w * 64 + b;
                        acc | (((a >> v.index()) & 1) as u64) << b
                    })
                })
                .collect(),
        }
    }

    /// Assignments satisfying every item.
    fn models<'a>(&self, items: impl IntoIterator<Item = &'a SourceItem>) -> Vec<u64> {
        let mut acc = vec![!0u64; self.words];
        for item in items {
            let sat: Vec<u64> = match *item {
                SourceItem::Or([x, y, z]) => {
                    let (x, y, z) = (self.term(x), self.term(y), self.term(z));
                    (0..self.words).map(|w| !((x[w] | y[w]) ^ z[w])).collect()
                }
                SourceItem::Neg([x, y]) => {
                    let (x, y) = (self.term(x), self.term(y));
                    (0..self.words).map(|w| x[w] ^ y[w]).collect()
                }
                SourceItem::Equal(v, b) => self.term(Term::Var(v)).into_iter().map(|m| if b { m } else { !m }).collect(),
            };
            for (a, s) in acc.iter_mut().zip(sat) {
                *a &= s;
            }
        }
        self.mask(&mut acc);
        acc
    }

    fn mask(&self, bits: &mut [u64]) {
        let total = 1usize << self.n;
        if total < 64 {
            bits[0] &= (1u64 << total) - 1;
        }
    }

    /// Do all assignments in `models` give `a` and `b` the same value?
    fn entails_equal(&self, models: &[u64], a: Term, b: Term) -> bool {
        let (a, b) = (self.term(a), self.term(b));
        (0..self.words).all(|w| models[w] & (a[w] ^ b[w]) == 0)
    }
}

fn random_term<R: Rng>(rng: &mut R, n: usize) -> Term {
    if rng.gen_bool(0.15) {
        Term::Const(rng.gen())
    } else {
        Term::Var(VarId(rng.gen_range(0..n as u32)))
    }
}

/// One fuzz trial: a random interleaving of additions and deletions on at most
/// `max_vars` variables and `max_ops` operations. After every operation the
/// store must equal a fresh replay of its surviving items, every binding must
/// follow from the items its label names, and every failure must be explained
/// by an unsatisfiable subset of items.
pub fn store_fuzz_trial(seed: u64, max_vars: usize, max_ops: usize) -> Result<FuzzReport, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_vars.max(1));
    let ops = rng.gen_range(1..=max_ops.max(1));
    let tables = Tables::new(n);
    let mut store = ConstraintStore::new();
    for _ in 0..n {
        store.new_var();
    }
    let mut report = FuzzReport { ops, ..Default::default() };
    let mut next: Label = 1;
    for step in 0..ops {
        let roll = rng.gen_range(0..100);
        if roll < 25 && next > 1 {
            let k = rng.gen_range(1..=2);
            let labels: LabelSet = (0..k).map(|_| rng.gen_range(1..next)).collect();
            store.delete(&labels);
            report.deletes += 1;
        } else {
            let item = match roll % 4 {
                0 | 1 => SourceItem::Or([random_term(&mut rng, n), random_term(&mut rng, n), random_term(&mut rng, n)]),
                2 => SourceItem::Neg([random_term(&mut rng, n), random_term(&mut rng, n)]),
                _ => SourceItem::Equal(VarId(rng.gen_range(0..n as u32)), rng.gen()),
            };
            let mut label = LabelSet::singleton(next);
            if next > 1 && rng.gen_bool(0.2) {
                label.insert(rng.gen_range(1..next));
            }
            next += 1;
            store.add(item, label);
        }
        check_store(&store, &tables).map_err(|e| format!("seed {seed}, step {step}: {e}"))?;
        if !store.is_consistent() {
            report.failures += 1;
        }
    }
    Ok(report)
}

fn justified<'a>(log: &'a [(SourceItem, LabelSet)], just: &'a LabelSet) -> impl Iterator<Item = &'a SourceItem> + 'a {
    log.iter().filter(move |(_, l)| l.is_subset(just)).map(|(i, _)| i)
}

fn check_store(store: &ConstraintStore, tables: &Tables) -> Result<(), String> {
    let log: Vec<(SourceItem, LabelSet)> = store.source_log().map(|(i, l)| (*i, l.clone())).collect();
    let rebuilt = ConstraintStore::replay(store.num_vars(), log.iter().map(|(i, l)| (i, l)));
    if rebuilt.snapshot() != store.snapshot() {
        return Err(format!("state differs from replay\nincremental: {:?}\nreplayed: {:?}", store.snapshot(), rebuilt.snapshot()));
    }
    match store.status() {
        Status::Failed(expl) => {
            let sub: Vec<(SourceItem, LabelSet)> = log.iter().filter(|(_, l)| l.is_subset(expl)).cloned().collect();
            let again = ConstraintStore::replay(store.num_vars(), sub.iter().map(|(i, l)| (i, l)));
            if again.is_consistent() {
                return Err(format!("replaying the items of explanation {expl} does not fail"));
            }
            if tables.models(justified(&log, expl)).iter().any(|&w| w != 0) {
                return Err(format!("items of explanation {expl} are satisfiable"));
            }
        }
        Status::Consistent => {
            for i in 0..store.num_vars() {
                let v = VarId(i as u32);
                if let Some((to, just)) = store.bindings().binding(v) {
                    if !tables.entails_equal(&tables.models(justified(&log, just)), Term::Var(v), *to) {
                        return Err(format!("binding {v:?} = {to} is not implied by items labelled within {just}"));
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_clauses_use_distinct_variables() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = random_3cnf(&mut rng, 5, 40);
        for c in &inst.clauses {
            assert_eq!(c.len(), 3);
            let mut vars: Vec<i32> = c.iter().map(|l| l.abs()).collect();
            vars.dedup();
            vars.sort();
            vars.dedup();
            assert_eq!(vars.len(), 3);
        }
    }

    #[test]
    fn agreement_instance_is_reproducible() {
        assert_eq!(agreement_instance(17, 9), agreement_instance(17, 9));
        assert_ne!(agreement_instance(17, 9).clauses, agreement_instance(18, 9).clauses);
    }

    #[test]
    fn tables_model_or_and_neg() {
        let t = Tables::new(2);
        let (x, y) = (Term::Var(VarId(0)), Term::Var(VarId(1)));
        // x or y = 1: three of four assignments
        assert_eq!(t.models([&SourceItem::Or([x, y, Term::ONE])])[0].count_ones(), 3);
        assert_eq!(t.models([&SourceItem::Neg([x, x])])[0], 0);
        assert!(t.entails_equal(&t.models([&SourceItem::Neg([x, y]), &SourceItem::Equal(VarId(0), true)]), y, Term::ZERO));
    }

    #[test]
    fn fuzz_smoke() {
        for seed in 0..50 {
            store_fuzz_trial(seed, 6, 20).unwrap();
        }
    }

    #[test]
    fn agreement_smoke() {
        for seed in 0..30 {
            check_agreement(&agreement_instance(seed, 7)).unwrap();
        }
    }
}
