//! DIMACS CNF ingestion, the clause encoding into `neg`/`or` constraints, and
//! model decoding.

use std::collections::BTreeSet;
use std::path::Path;

use log::warn;

use crate::engine::ConstraintStore;
use crate::label::LabelSet;
use crate::term::{Term, VarId};
use crate::EngineError;

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: missing `p cnf` header before clauses")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed header `{text}`")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: `{token}` is not an integer")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {literal} out of range 1..={num_vars}")]
    OutOfRange { line: usize, literal: i64, num_vars: usize },
    #[error("no `p cnf` header found")]
    NoHeader,
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A CNF formula. Literals are non-zero; a negative literal negates its variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfInstance {
    pub name: String,
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfInstance {
    pub fn new(name: impl Into<String>, num_vars: usize, clauses: Vec<Vec<i32>>) -> Self {
        Self {
            name: name.into(),
            num_vars,
            clauses,
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, ParseError> {
        let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut inst = parse_dimacs(&text)?;
        inst.name = path
            .file_stem()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok(inst)
    }

    /// Whether `model` (index `j-1` holds the value of variable `j`) satisfies every clause.
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|&lit| model[lit.unsigned_abs() as usize - 1] == (lit > 0))
        })
    }
}

/// Parse DIMACS CNF text.
///
/// Comment lines (`c`) are skipped, as is everything from a `%` line on (the
/// trailer found in SATLIB files). A clause-count mismatch is only logged.
pub fn parse_dimacs(text: &str) -> Result<CnfInstance, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| ParseError::BadHeader {
                line: line_no,
                text: line.to_string(),
            })?);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(ParseError::MissingHeader { line: line_no });
        };
        for token in line.split_whitespace() {
            let literal: i64 = token.parse().map_err(|_| ParseError::BadToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if literal == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if literal.unsigned_abs() as usize > num_vars {
                return Err(ParseError::OutOfRange {
                    line: line_no,
                    literal,
                    num_vars,
                });
            } else {
                current.push(literal as i32);
            }
        }
    }
    let (num_vars, declared) = header.ok_or(ParseError::NoHeader)?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != declared {
        warn!("header declares {declared} clauses, found {}", clauses.len());
    }
    Ok(CnfInstance {
        name: String::new(),
        num_vars,
        clauses,
    })
}

/// Engine variables introduced for one CNF instance.
#[derive(Clone, Debug)]
pub struct Encoding {
    /// `problem_vars[j-1]` stands for CNF variable `j`.
    pub problem_vars: Vec<VarId>,
    /// Negation companion of each problem variable, if it occurs negatively.
    pub neg_companion: Vec<Option<VarId>>,
    /// Intermediate disjunction results, per clause.
    pub chain_vars: Vec<Vec<VarId>>,
}

/// Encode `instance` into `store` with empty justifications.
///
/// Every variable occurring negatively gets one companion `E` with `neg(V,E)`;
/// these are added first, in variable order. A clause `t1 ∨ … ∨ tk` becomes
/// `or(t1,t1,1)` for k = 1, `or(t1,t2,1)` for k = 2 and the chain
/// `or(t1,t2,R1), or(R1,t3,R2), …, or(R(k-2),tk,1)` otherwise. An empty clause
/// becomes `or(0,0,1)`, which fails immediately.
pub fn encode(instance: &CnfInstance, store: &mut ConstraintStore) -> Encoding {
    let problem_vars: Vec<VarId> = (0..instance.num_vars).map(|_| store.new_var()).collect();
    let negated: BTreeSet<usize> = instance
        .clauses
        .iter()
        .flatten()
        .filter(|&&l| l < 0)
        .map(|l| l.unsigned_abs() as usize)
        .collect();
    let mut neg_companion = vec![None; instance.num_vars];
    for &j in &negated {
        let companion = store.new_var();
        neg_companion[j - 1] = Some(companion);
        store.add_neg(problem_vars[j - 1].into(), companion.into(), LabelSet::new());
    }
    let term_of = |lit: i32| -> Term {
        let j = lit.unsigned_abs() as usize - 1;
        if lit > 0 {
            problem_vars[j].into()
        } else {
            neg_companion[j].expect("companion created for every negative literal").into()
        }
    };
    let mut chain_vars = Vec::with_capacity(instance.clauses.len());
    for clause in &instance.clauses {
        let terms: Vec<Term> = clause.iter().map(|&l| term_of(l)).collect();
        let mut chain = Vec::new();
        match terms.as_slice() {
            [] => store.add_or(Term::ZERO, Term::ZERO, Term::ONE, LabelSet::new()),
            [t] => store.add_or(*t, *t, Term::ONE, LabelSet::new()),
            [t1, t2] => store.add_or(*t1, *t2, Term::ONE, LabelSet::new()),
            [t1, t2, rest @ ..] => {
                let mut acc = store.new_var();
                chain.push(acc);
                store.add_or(*t1, *t2, acc.into(), LabelSet::new());
                for (m, t) in rest.iter().enumerate() {
                    if m + 1 == rest.len() {
                        store.add_or(acc.into(), *t, Term::ONE, LabelSet::new());
                    } else {
                        let next = store.new_var();
                        chain.push(next);
                        store.add_or(acc.into(), *t, next.into(), LabelSet::new());
                        acc = next;
                    }
                }
            }
        }
        chain_vars.push(chain);
    }
    Encoding {
        problem_vars,
        neg_companion,
        chain_vars,
    }
}

/// The 0/1 value of every CNF variable. Fails if a problem variable is unbound.
pub fn decode_model(encoding: &Encoding, store: &ConstraintStore) -> Result<Vec<bool>, EngineError> {
    encoding
        .problem_vars
        .iter()
        .enumerate()
        .map(|(j, &v)| store.value(v).ok_or(EngineError::Unbound(j + 1)))
        .collect()
}
