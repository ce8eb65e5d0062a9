//! Justified variable bindings.
//!
//! Each variable is either free or bound to a term together with the label set
//! justifying that binding. Chains are not compressed: [`Bindings::deref`] walks
//! the chain and unions the labels it passes, so removing a binding never
//! requires recomputing labels elsewhere.

use crate::label::LabelSet;
use crate::term::{Term, VarId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BindOutcome {
    /// Both sides already denote the same term; nothing recorded.
    Unchanged,
    /// `var` (a previously free variable) was bound.
    Bound(VarId),
    /// The two sides denote distinct constants.
    Clash(LabelSet),
}

#[derive(Clone, Debug, Default)]
pub struct Bindings {
    slots: Vec<Option<(Term, LabelSet)>>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn new_var(&mut self) -> VarId {
        let id = VarId(self.slots.len() as u32);
        self.slots.push(None);
        id
    }

    pub fn num_vars(&self) -> usize {
        self.slots.len()
    }

    /// The direct binding of `var`, if any.
    pub fn binding(&self, var: VarId) -> Option<&(Term, LabelSet)> {
        self.slots[var.index()].as_ref()
    }

    /// Terminal term of the chain starting at `t`, and the union of the labels along it.
    pub fn deref(&self, t: Term) -> (Term, LabelSet) {
        let mut labels = LabelSet::new();
        let term = self.deref_into(t, &mut labels);
        (term, labels)
    }

    /// Like [`Bindings::deref`] but accumulates the chain labels into `acc`.
    pub fn deref_into(&self, mut t: Term, acc: &mut LabelSet) -> Term {
        while let Term::Var(v) = t {
            match &self.slots[v.index()] {
                Some((next, label)) => {
                    acc.union_with(label);
                    t = *next;
                }
                None => break,
            }
        }
        t
    }

    /// Terminal term without label bookkeeping.
    pub fn walk(&self, mut t: Term) -> Term {
        while let Term::Var(v) = t {
            match &self.slots[v.index()] {
                Some((next, _)) => t = *next,
                None => break,
            }
        }
        t
    }

    /// Value of `var` if it dereferences to a constant.
    pub fn value(&self, var: VarId) -> Option<bool> {
        self.walk(Term::Var(var)).as_const()
    }

    /// Equate `left` and `right` under justification `label`.
    ///
    /// When both sides dereference to free variables, the left one is bound to the
    /// right one. The recorded label is `label` plus every label met while
    /// dereferencing either side; a clash reports the same union.
    pub fn bind(&mut self, left: Term, right: Term, label: &LabelSet) -> BindOutcome {
        let mut just = label.clone();
        let l = self.deref_into(left, &mut just);
        let r = self.deref_into(right, &mut just);
        match (l, r) {
            (Term::Const(a), Term::Const(b)) => {
                if a == b {
                    BindOutcome::Unchanged
                } else {
                    BindOutcome::Clash(just)
                }
            }
            (Term::Var(a), Term::Var(b)) if a == b => BindOutcome::Unchanged,
            (Term::Var(a), other) | (other @ Term::Const(_), Term::Var(a)) => {
                self.slots[a.index()] = Some((other, just));
                BindOutcome::Bound(a)
            }
        }
    }

    /// Remove the direct binding of `var`.
    pub fn unbind(&mut self, var: VarId) {
        self.slots[var.index()] = None;
    }
}
