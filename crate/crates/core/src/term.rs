//! The term universe of the Boolean handler: the constants 0 and 1, and variables.

use std::fmt;

/// Dense identifier of a logical variable owned by a binding substrate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_{}", self.0)
    }
}

/// An argument of an `or`/`neg` constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Const(bool),
    Var(VarId),
}

impl Term {
    pub const ZERO: Term = Term::Const(false);
    pub const ONE: Term = Term::Const(true);

    pub fn constant(value: u8) -> Term {
        debug_assert!(value <= 1, "the constant universe is {{0,1}}");
        Term::Const(value != 0)
    }

    pub fn as_var(self) -> Option<VarId> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }

    pub fn as_const(self) -> Option<bool> {
        match self {
            Term::Const(b) => Some(b),
            Term::Var(_) => None,
        }
    }
}

impl From<VarId> for Term {
    fn from(v: VarId) -> Self {
        Term::Var(v)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(b) => write!(f, "{}", u8::from(*b)),
            Term::Var(v) => write!(f, "{v}"),
        }
    }
}
