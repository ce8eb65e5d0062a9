//! Benchmark and cross-check harness behind the `achr` binary.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use adaptive_chr::oracle;
use adaptive_chr::search::{solve, Limits, SearchResult, Strategy};
use adaptive_chr::verify::{agreement_instance, check_agreement, store_fuzz_trial};
use adaptive_chr::CnfInstance;
use anyhow::Context;
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Sat,
    Unsat,
    Timeout,
    Error(String),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Sat => f.write_str("SAT"),
            Outcome::Unsat => f.write_str("UNSAT"),
            Outcome::Timeout => f.write_str("TIMEOUT"),
            Outcome::Error(_) => f.write_str("ERROR"),
        }
    }
}

/// One (instance, strategy) run.
#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub instance: String,
    pub strategy: Strategy,
    pub result: Outcome,
    /// Unlabel calls.
    pub steps: u64,
    pub label_calls: u64,
    pub value_attempts: u64,
    pub deleted_assignments: u64,
    pub millis: f64,
    /// Completed, agrees with the oracle, and any model satisfies every clause.
    pub verified: bool,
}

impl BenchRecord {
    pub fn completed(&self) -> bool {
        matches!(self.result, Outcome::Sat | Outcome::Unsat)
    }

    fn error(instance: &str, strategy: Strategy, msg: String) -> Self {
        BenchRecord {
            instance: instance.to_string(),
            strategy,
            result: Outcome::Error(msg),
            steps: 0,
            label_calls: 0,
            value_attempts: 0,
            deleted_assignments: 0,
            millis: 0.0,
            verified: false,
        }
    }
}

/// Run `strategy` on `instance`. `expected` is the oracle's satisfiability verdict.
pub fn run_cell(instance: &CnfInstance, strategy: Strategy, timeout: Option<Duration>, expected: bool) -> BenchRecord {
    let limits = timeout.map_or_else(Limits::none, Limits::timeout);
    let out = solve(instance, strategy, &limits);
    let (result, verified) = match &out.result {
        SearchResult::Sat(model) => (Outcome::Sat, expected && instance.satisfied_by(model)),
        SearchResult::Unsat => (Outcome::Unsat, !expected),
        SearchResult::Timeout => (Outcome::Timeout, false),
    };
    BenchRecord {
        instance: instance.name.clone(),
        strategy,
        result,
        steps: out.stats.unlabel_calls,
        label_calls: out.stats.label_calls,
        value_attempts: out.stats.value_attempts,
        deleted_assignments: out.stats.deleted_assignments,
        millis: out.elapsed.as_secs_f64() * 1000.0,
        verified,
    }
}

/// Every `.cnf` file in `dir`, sorted by name, with parse errors kept per file.
pub fn load_dir(dir: &Path) -> anyhow::Result<Vec<(String, Result<CnfInstance, String>)>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "cnf"))
        .collect();
    paths.sort();
    Ok(paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let inst = CnfInstance::from_file(&p).map_err(|e| e.to_string());
            (name, inst)
        })
        .collect())
}

/// Run every (instance, strategy) cell on `jobs` threads (0 = one per core).
/// Records come back in instance order, then strategy order.
pub fn bench(
    instances: &[(String, Result<CnfInstance, String>)],
    strategies: &[Strategy],
    timeout: Option<Duration>,
    jobs: usize,
) -> anyhow::Result<Vec<BenchRecord>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let records = pool.install(|| {
        let expected: Vec<Option<bool>> = instances
            .par_iter()
            .map(|(_, inst)| inst.as_ref().ok().map(|i| oracle::dpll(i).result.is_sat()))
            .collect();
        let cells: Vec<(usize, Strategy)> =
            (0..instances.len()).flat_map(|i| strategies.iter().map(move |&s| (i, s))).collect();
        cells
            .into_par_iter()
            .map(|(i, s)| {
                let (name, inst) = &instances[i];
                match (inst, expected[i]) {
                    (Ok(inst), Some(exp)) => {
                        let r = run_cell(inst, s, timeout, exp);
                        log::info!("{name} {s}: {} in {} steps, {:.1} ms", r.result, r.steps, r.millis);
                        r
                    }
                    (Err(e), _) => BenchRecord::error(name, s, e.clone()),
                    (Ok(_), None) => unreachable!(),
                }
            })
            .collect()
    });
    Ok(records)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Yes,
    No,
}

/// Instance class from the file naming convention (`...-yes1-...`, `...-no-...`).
pub fn class_of(name: &str) -> Option<Class> {
    if name.contains("yes") {
        Some(Class::Yes)
    } else if name.contains("-no") {
        Some(Class::No)
    } else {
        None
    }
}

/// Totals over the completed runs of one strategy on one instance class.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub class: Class,
    pub strategy: Strategy,
    pub completed: usize,
    pub total: usize,
    pub steps: u64,
    pub label_calls: u64,
    pub value_attempts: u64,
    pub deleted_assignments: u64,
    pub millis: f64,
    pub verified: bool,
}

pub fn summarize(records: &[BenchRecord], strategies: &[Strategy]) -> Vec<Summary> {
    let mut out = Vec::new();
    for class in [Class::Yes, Class::No] {
        for &strategy in strategies {
            let rows: Vec<&BenchRecord> = records
                .iter()
                .filter(|r| r.strategy == strategy && class_of(&r.instance) == Some(class))
                .collect();
            let done: Vec<&&BenchRecord> = rows.iter().filter(|r| r.completed()).collect();
            out.push(Summary {
                class,
                strategy,
                completed: done.len(),
                total: rows.len(),
                steps: done.iter().map(|r| r.steps).sum(),
                label_calls: done.iter().map(|r| r.label_calls).sum(),
                value_attempts: done.iter().map(|r| r.value_attempts).sum(),
                deleted_assignments: done.iter().map(|r| r.deleted_assignments).sum(),
                millis: done.iter().fold(0.0, |acc, r| acc + r.millis),
                verified: done.iter().all(|r| r.verified),
            });
        }
    }
    out
}

pub const CSV_HEADER: [&str; 9] = [
    "instance",
    "strategy",
    "result",
    "steps",
    "label_calls",
    "value_attempts",
    "deleted_assignments",
    "millis",
    "verified",
];

/// Per-run rows followed by summary rows. Summary rows name the class in the
/// instance column (`sum-yes`, `sum-no`) and `completed/total` in the result column.
pub fn write_csv<W: Write>(out: W, records: &[BenchRecord], summaries: &[Summary]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.instance.clone(),
            r.strategy.to_string(),
            r.result.to_string(),
            r.steps.to_string(),
            r.label_calls.to_string(),
            r.value_attempts.to_string(),
            r.deleted_assignments.to_string(),
            format!("{:.1}", r.millis),
            r.verified.to_string(),
        ])?;
    }
    for s in summaries {
        let class = match s.class {
            Class::Yes => "sum-yes",
            Class::No => "sum-no",
        };
        w.write_record([
            class.to_string(),
            s.strategy.to_string(),
            format!("{}/{}", s.completed, s.total),
            s.steps.to_string(),
            s.label_calls.to_string(),
            s.value_attempts.to_string(),
            s.deleted_assignments.to_string(),
            format!("{:.1}", s.millis),
            s.verified.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub const VERIFY_MAX_VARS: usize = 16;
const FUZZ_MAX_VARS: usize = 12;
const FUZZ_MAX_OPS: usize = 30;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub trials: u64,
    pub sat: u64,
    pub unsat: u64,
    pub fuzz_failed_states: usize,
}

#[derive(Debug, thiserror::Error)]
#[error("seed {seed}: {message}")]
pub struct Disagreement {
    pub seed: u64,
    pub message: String,
}

/// Pigeons into one hole fewer; unsatisfiable.
pub fn pigeonhole(holes: usize) -> CnfInstance {
    let pigeons = holes + 1;
    let var = |p: usize, h: usize| (p * holes + h + 1) as i32;
    let mut clauses: Vec<Vec<i32>> = (0..pigeons).map(|p| (0..holes).map(|h| var(p, h)).collect()).collect();
    for h in 0..holes {
        for p in 0..pigeons {
            for q in p + 1..pigeons {
                clauses.push(vec![-var(p, h), -var(q, h)]);
            }
        }
    }
    CnfInstance::new(format!("pigeonhole-{pigeons}-{holes}"), pigeons * holes, clauses)
}

/// Trial `t` uses seed `seed + t` for both a random 3-CNF agreement check and a
/// store fuzz run.
pub fn run_verify(trials: u64, vars: usize, seed: u64) -> Result<VerifyReport, Disagreement> {
    assert!(vars <= VERIFY_MAX_VARS, "at most {VERIFY_MAX_VARS} variables");
    let php = pigeonhole(3);
    match check_agreement(&php) {
        Ok(false) => {}
        Ok(true) => return Err(Disagreement { seed, message: format!("{} reported satisfiable", php.name) }),
        Err(message) => return Err(Disagreement { seed, message }),
    }
    let mut report = VerifyReport::default();
    for t in 0..trials {
        let s = seed.wrapping_add(t);
        match check_agreement(&agreement_instance(s, vars)) {
            Ok(true) => report.sat += 1,
            Ok(false) => report.unsat += 1,
            Err(message) => return Err(Disagreement { seed: s, message }),
        }
        let fuzz = store_fuzz_trial(s, vars.clamp(1, FUZZ_MAX_VARS), FUZZ_MAX_OPS)
            .map_err(|message| Disagreement { seed: s, message })?;
        report.fuzz_failed_states += fuzz.failures;
        report.trials += 1;
    }
    Ok(report)
}
