use std::collections::VecDeque;

use log::trace;

use super::rules::{Body, Head, Kind, Pat, Rule, PATTERN_VARS, RULES};
use crate::binding::{BindOutcome, Bindings};
use crate::label::LabelSet;
use crate::term::{Term, VarId};
use crate::EngineError;

/// An externally added item: a constraint or a variable/constant equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceItem {
    Or([Term; 3]),
    Neg([Term; 2]),
    Equal(VarId, bool),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Status {
    #[default]
    Consistent,
    Failed(LabelSet),
}

/// Counters for engine work. Not part of the observable store state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub firings: u64,
    pub deletes: u64,
    pub replayed_items: u64,
}

/// The observable state of a store: status, raw bindings and live constraints
/// in creation order. Two stores built from the same items compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub status: Status,
    pub bindings: Vec<Option<(Term, LabelSet)>>,
    pub constraints: Vec<(Kind, Vec<Term>, LabelSet)>,
}

#[derive(Clone, Debug)]
struct LogEntry {
    item: SourceItem,
    label: LabelSet,
    /// Trail length just before the item was processed.
    checkpoint: usize,
}

#[derive(Clone, Debug)]
struct Constraint {
    kind: Kind,
    args: [Term; 3],
    label: LabelSet,
    alive: bool,
    queued: bool,
}

impl Constraint {
    fn args(&self) -> &[Term] {
        &self.args[..self.kind.arity()]
    }
}

#[derive(Clone, Copy, Debug)]
enum Undo {
    Added,
    Watch(VarId),
    Killed(u32),
    Bound(VarId),
    Merged { into: VarId, len: usize },
    Failed,
}

type Subst = [Option<Term>; PATTERN_VARS];

/// The adaptive Boolean constraint store.
///
/// Items are added with a label set and can later be removed by label. After any
/// sequence of additions and deletions the store is in the state a fresh store
/// would reach by adding the surviving items in their original order.
///
/// Internally every mutation is recorded on a trail, and each source item
/// remembers the trail length at which it was added. A deletion rewinds to the
/// first affected item and re-adds the surviving items after it.
#[derive(Clone, Debug, Default)]
pub struct ConstraintStore {
    bindings: Bindings,
    constraints: Vec<Constraint>,
    /// Constraints indexed by the free variables their arguments dereference to.
    watches: Vec<Vec<u32>>,
    log: Vec<LogEntry>,
    trail: Vec<Undo>,
    agenda: VecDeque<u32>,
    status: Status,
    stats: EngineStats,
}

impl ConstraintStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// A fresh store with `num_vars` variables into which `items` are added in order.
    pub fn replay<'a>(num_vars: usize, items: impl IntoIterator<Item = (&'a SourceItem, &'a LabelSet)>) -> Self {
        let mut store = Self::new();
        for _ in 0..num_vars {
            store.new_var();
        }
        for (item, label) in items {
            store.add(*item, label.clone());
        }
        store
    }

    pub fn new_var(&mut self) -> VarId {
        self.watches.push(Vec::new());
        self.bindings.new_var()
    }

    pub fn num_vars(&self) -> usize {
        self.bindings.num_vars()
    }

    pub fn add_or(&mut self, x: Term, y: Term, z: Term, just: LabelSet) {
        self.add(SourceItem::Or([x, y, z]), just);
    }

    pub fn add_neg(&mut self, x: Term, y: Term, just: LabelSet) {
        self.add(SourceItem::Neg([x, y]), just);
    }

    /// Add the equation `var = value` justified by `just`.
    pub fn equal(&mut self, var: VarId, value: bool, just: LabelSet) {
        self.add(SourceItem::Equal(var, value), just);
    }

    pub fn add(&mut self, item: SourceItem, label: LabelSet) {
        let checkpoint = self.trail.len();
        if self.is_consistent() {
            if let Err(explanation) = self.activate(item, &label).and_then(|()| self.propagate()) {
                self.fail(explanation);
            }
        }
        self.log.push(LogEntry { item, label, checkpoint });
    }

    /// Remove every source item whose label intersects `labels`, together with
    /// everything derived from it.
    pub fn delete(&mut self, labels: &LabelSet) {
        if labels.is_empty() {
            return;
        }
        let Some(first) = self.log.iter().position(|e| e.label.intersects(labels)) else {
            return;
        };
        self.stats.deletes += 1;
        self.rewind(self.log[first].checkpoint);
        let tail = self.log.split_off(first);
        for entry in tail {
            if !entry.label.intersects(labels) {
                self.stats.replayed_items += 1;
                self.add(entry.item, entry.label);
            }
        }
    }

    pub fn is_consistent(&self) -> bool {
        matches!(self.status, Status::Consistent)
    }

    pub fn status(&self) -> &Status {
        &self.status
    }

    /// The label set responsible for the current inconsistency.
    pub fn get_explanation(&self) -> Result<LabelSet, EngineError> {
        match &self.status {
            Status::Failed(e) => Ok(e.clone()),
            Status::Consistent => Err(EngineError::NotFailed),
        }
    }

    /// True iff `var` dereferences to a constant.
    pub fn is_bound(&self, var: VarId) -> bool {
        self.value(var).is_some()
    }

    pub fn value(&self, var: VarId) -> Option<bool> {
        self.bindings.value(var)
    }

    pub fn deref(&self, t: Term) -> (Term, LabelSet) {
        self.bindings.deref(t)
    }

    pub fn bindings(&self) -> &Bindings {
        &self.bindings
    }

    pub fn stats(&self) -> EngineStats {
        self.stats
    }

    /// The surviving source items with their labels, in insertion order.
    pub fn source_log(&self) -> impl Iterator<Item = (&SourceItem, &LabelSet)> + '_ {
        self.log.iter().map(|e| (&e.item, &e.label))
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            status: self.status.clone(),
            bindings: (0..self.num_vars())
                .map(|i| self.bindings.binding(VarId(i as u32)).cloned())
                .collect(),
            constraints: self
                .constraints
                .iter()
                .filter(|c| c.alive)
                .map(|c| (c.kind, c.args().to_vec(), c.label.clone()))
                .collect(),
        }
    }

    /// Live constraints with dereferenced arguments, rendered for inspection.
    pub fn live_constraints(&self) -> Vec<(Kind, Vec<Term>, LabelSet)> {
        self.constraints
            .iter()
            .filter(|c| c.alive)
            .map(|c| {
                let args = c.args().iter().map(|t| self.bindings.walk(*t)).collect();
                (c.kind, args, c.label.clone())
            })
            .collect()
    }

    fn activate(&mut self, item: SourceItem, label: &LabelSet) -> Result<(), LabelSet> {
        match item {
            SourceItem::Or(args) => {
                self.insert_constraint(Kind::Or, args, label.clone());
                Ok(())
            }
            SourceItem::Neg([x, y]) => {
                self.insert_constraint(Kind::Neg, [x, y, Term::ZERO], label.clone());
                Ok(())
            }
            SourceItem::Equal(var, value) => self.unify(Term::Var(var), Term::Const(value), label),
        }
    }

    fn insert_constraint(&mut self, kind: Kind, args: [Term; 3], label: LabelSet) {
        let cid = self.constraints.len() as u32;
        self.constraints.push(Constraint {
            kind,
            args,
            label,
            alive: true,
            queued: false,
        });
        self.trail.push(Undo::Added);
        let mut seen: [Option<VarId>; 3] = [None; 3];
        for (slot, arg) in args[..kind.arity()].iter().enumerate() {
            if let Term::Var(rep) = self.bindings.walk(*arg) {
                if !seen.contains(&Some(rep)) {
                    seen[slot] = Some(rep);
                    self.watches[rep.index()].push(cid);
                    self.trail.push(Undo::Watch(rep));
                }
            }
        }
        self.enqueue(cid);
    }

    fn enqueue(&mut self, cid: u32) {
        let c = &mut self.constraints[cid as usize];
        if c.alive && !c.queued {
            c.queued = true;
            self.agenda.push_back(cid);
        }
    }

    fn fail(&mut self, explanation: LabelSet) {
        trace!("store failed with explanation {explanation}");
        for cid in self.agenda.drain(..) {
            self.constraints[cid as usize].queued = false;
        }
        self.status = Status::Failed(explanation);
        self.trail.push(Undo::Failed);
    }

    fn rewind(&mut self, len: usize) {
        while self.trail.len() > len {
            match self.trail.pop().expect("trail length checked") {
                Undo::Added => {
                    self.constraints.pop();
                }
                Undo::Watch(v) => {
                    self.watches[v.index()].pop();
                }
                Undo::Killed(cid) => self.constraints[cid as usize].alive = true,
                Undo::Bound(v) => self.bindings.unbind(v),
                Undo::Merged { into, len } => self.watches[into.index()].truncate(len),
                Undo::Failed => self.status = Status::Consistent,
            }
        }
        debug_assert!(self.agenda.is_empty());
    }

    fn propagate(&mut self) -> Result<(), LabelSet> {
        while let Some(cid) = self.agenda.pop_front() {
            let c = &mut self.constraints[cid as usize];
            c.queued = false;
            if c.alive {
                self.process(cid)?;
            }
        }
        Ok(())
    }

    /// Dereferenced arguments of a constraint, and its label joined with the chain labels.
    fn resolve(&self, cid: u32) -> ([Term; 3], LabelSet) {
        let c = &self.constraints[cid as usize];
        let mut label = c.label.clone();
        let mut args = c.args;
        for a in args[..c.kind.arity()].iter_mut() {
            *a = self.bindings.deref_into(*a, &mut label);
        }
        (args, label)
    }

    /// Try the rules in order with `cid` as the active constraint; fire the first match.
    fn process(&mut self, cid: u32) -> Result<(), LabelSet> {
        let kind = self.constraints[cid as usize].kind;
        let (args, label) = self.resolve(cid);
        let args = &args[..kind.arity()];
        for rule in RULES.iter() {
            let (heads, count) = rule_heads(rule);
            let heads = &heads[..count];
            for (pos, &(head, kept)) in heads.iter().enumerate() {
                if head.kind != kind {
                    continue;
                }
                let mut subst: Subst = [None; PATTERN_VARS];
                if !match_head(head, args, &mut subst) {
                    continue;
                }
                if heads.len() == 1 {
                    return self.fire(rule, &subst, label, &[cid]);
                }
                let (other, other_kept) = heads[1 - pos];
                if let Some((pid, subst, partner_label)) = self.find_partner(cid, other, &subst) {
                    let mut kill = Vec::with_capacity(2);
                    if !kept {
                        kill.push(cid);
                    }
                    if !other_kept {
                        kill.push(pid);
                    }
                    let mut just = label;
                    just.union_with(&partner_label);
                    let result = self.fire(rule, &subst, just, &kill);
                    if kept {
                        self.enqueue(cid);
                    }
                    return result;
                }
            }
        }
        Ok(())
    }

    fn find_partner(&self, cid: u32, head: &Head, subst: &Subst) -> Option<(u32, Subst, LabelSet)> {
        let pivot = head.args.iter().find_map(|p| match p {
            Pat::V(i) => subst[*i as usize].and_then(Term::as_var),
            _ => None,
        })?;
        for &pid in &self.watches[pivot.index()] {
            let p = &self.constraints[pid as usize];
            if pid == cid || !p.alive || p.kind != head.kind {
                continue;
            }
            let (pargs, plabel) = self.resolve(pid);
            let mut s = *subst;
            if match_head(head, &pargs[..p.kind.arity()], &mut s) {
                return Some((pid, s, plabel));
            }
        }
        None
    }

    fn fire(&mut self, rule: &Rule, subst: &Subst, just: LabelSet, kill: &[u32]) -> Result<(), LabelSet> {
        trace!("fire {} with {just}", rule.name);
        self.stats.firings += 1;
        for &k in kill {
            self.constraints[k as usize].alive = false;
            self.trail.push(Undo::Killed(k));
        }
        match rule.body {
            Body::Fail => Err(just),
            Body::Equations(eqs) => {
                for &(l, r) in eqs {
                    self.unify(instantiate(l, subst), instantiate(r, subst), &just)?;
                }
                Ok(())
            }
        }
    }

    fn unify(&mut self, left: Term, right: Term, just: &LabelSet) -> Result<(), LabelSet> {
        match self.bindings.bind(left, right, just) {
            BindOutcome::Unchanged => Ok(()),
            BindOutcome::Clash(e) => Err(e),
            BindOutcome::Bound(v) => {
                self.trail.push(Undo::Bound(v));
                let watched = std::mem::take(&mut self.watches[v.index()]);
                if let Some((Term::Var(into), _)) = self.bindings.binding(v) {
                    let into = *into;
                    let list = &mut self.watches[into.index()];
                    self.trail.push(Undo::Merged { into, len: list.len() });
                    list.extend_from_slice(&watched);
                }
                for &cid in &watched {
                    self.enqueue(cid);
                }
                self.watches[v.index()] = watched;
                Ok(())
            }
        }
    }
}

/// Heads of a rule paired with whether they are kept.
fn rule_heads(rule: &'static Rule) -> ([(&'static Head, bool); 2], usize) {
    let mut out = [(&rule.removed[0], false); 2];
    let mut n = 0;
    if let Some(k) = &rule.kept {
        out[n] = (k, true);
        n += 1;
    }
    for h in rule.removed {
        out[n] = (h, false);
        n += 1;
    }
    (out, n)
}

fn match_head(head: &Head, args: &[Term], subst: &mut Subst) -> bool {
    head.args.iter().zip(args).all(|(pat, &arg)| match pat {
        Pat::Zero => arg == Term::ZERO,
        Pat::One => arg == Term::ONE,
        Pat::V(i) => match subst[*i as usize] {
            Some(bound) => bound == arg,
            None => {
                subst[*i as usize] = Some(arg);
                true
            }
        },
    })
}

fn instantiate(p: Pat, subst: &Subst) -> Term {
    match p {
        Pat::Zero => Term::ZERO,
        Pat::One => Term::ONE,
        Pat::V(i) => subst[i as usize].expect("body variables occur in the heads"),
    }
}
