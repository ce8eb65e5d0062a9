//! The Boolean rule set.
//!
//! `neg(X,Y)` means `¬X = Y` and `or(X,Y,Z)` means `X ∨ Y = Z`. Rules are tried
//! in table order. Heads listed in `kept` survive a firing; heads in `removed`
//! are deleted from the store.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Or,
    Neg,
}

impl Kind {
    pub fn arity(self) -> usize {
        match self {
            Kind::Or => 3,
            Kind::Neg => 2,
        }
    }
}

/// A head or body argument pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pat {
    /// Pattern variable, numbered within the rule.
    V(u8),
    Zero,
    One,
}

#[derive(Debug)]
pub struct Head {
    pub kind: Kind,
    pub args: &'static [Pat],
}

#[derive(Debug)]
pub enum Body {
    Fail,
    Equations(&'static [(Pat, Pat)]),
}

#[derive(Debug)]
pub struct Rule {
    pub name: &'static str,
    pub kept: Option<Head>,
    pub removed: &'static [Head],
    pub body: Body,
}

impl Rule {
    pub fn head_count(&self) -> usize {
        self.removed.len() + usize::from(self.kept.is_some())
    }
}

pub const PATTERN_VARS: usize = 5;

const X: Pat = Pat::V(0);
const Y: Pat = Pat::V(1);
const Z: Pat = Pat::V(2);
const A: Pat = Pat::V(3);
const B: Pat = Pat::V(4);
const O: Pat = Pat::Zero;
const I: Pat = Pat::One;

const fn or(args: &'static [Pat; 3]) -> Head {
    Head { kind: Kind::Or, args }
}

const fn neg(args: &'static [Pat; 2]) -> Head {
    Head { kind: Kind::Neg, args }
}

macro_rules! simplify {
    ($name:expr, [$($head:expr),+], $body:expr) => {
        Rule { name: $name, kept: None, removed: &[$($head),+], body: $body }
    };
}

macro_rules! simpagate {
    ($name:expr, $kept:expr, $removed:expr, $body:expr) => {
        Rule { name: $name, kept: Some($kept), removed: &[$removed], body: $body }
    };
}

pub static RULES: [Rule; 22] = [
    simplify!("or(0,X,Y) <=> Y=X", [or(&[O, X, Y])], Body::Equations(&[(Y, X)])),
    simplify!("or(X,0,Y) <=> Y=X", [or(&[X, O, Y])], Body::Equations(&[(Y, X)])),
    simplify!("or(X,Y,0) <=> X=0,Y=0", [or(&[X, Y, O])], Body::Equations(&[(X, O), (Y, O)])),
    simplify!("or(1,X,Y) <=> Y=1", [or(&[I, X, Y])], Body::Equations(&[(Y, I)])),
    simplify!("or(X,1,Y) <=> Y=1", [or(&[X, I, Y])], Body::Equations(&[(Y, I)])),
    simplify!("or(X,X,Z) <=> X=Z", [or(&[X, X, Z])], Body::Equations(&[(X, Z)])),
    simplify!("neg(0,X) <=> X=1", [neg(&[O, X])], Body::Equations(&[(X, I)])),
    simplify!("neg(X,0) <=> X=1", [neg(&[X, O])], Body::Equations(&[(X, I)])),
    simplify!("neg(1,X) <=> X=0", [neg(&[I, X])], Body::Equations(&[(X, O)])),
    simplify!("neg(X,1) <=> X=0", [neg(&[X, I])], Body::Equations(&[(X, O)])),
    simplify!("neg(X,X) <=> fail", [neg(&[X, X])], Body::Fail),
    simpagate!("or(X,Y,A) \\ or(X,Y,B) <=> A=B", or(&[X, Y, A]), or(&[X, Y, B]), Body::Equations(&[(A, B)])),
    simpagate!("or(X,Y,A) \\ or(Y,X,B) <=> A=B", or(&[X, Y, A]), or(&[Y, X, B]), Body::Equations(&[(A, B)])),
    simpagate!("neg(X,Y) \\ neg(Y,Z) <=> X=Z", neg(&[X, Y]), neg(&[Y, Z]), Body::Equations(&[(X, Z)])),
    simpagate!("neg(X,Y) \\ neg(Z,Y) <=> X=Z", neg(&[X, Y]), neg(&[Z, Y]), Body::Equations(&[(X, Z)])),
    simpagate!("neg(Y,X) \\ neg(Y,Z) <=> X=Z", neg(&[Y, X]), neg(&[Y, Z]), Body::Equations(&[(X, Z)])),
    simpagate!("neg(X,Y) \\ or(X,Y,Z) <=> Z=1", neg(&[X, Y]), or(&[X, Y, Z]), Body::Equations(&[(Z, I)])),
    simpagate!("neg(Y,X) \\ or(X,Y,Z) <=> Z=1", neg(&[Y, X]), or(&[X, Y, Z]), Body::Equations(&[(Z, I)])),
    simplify!(
        "neg(X,Z), or(X,Y,Z) <=> X=0,Y=1,Z=1",
        [neg(&[X, Z]), or(&[X, Y, Z])],
        Body::Equations(&[(X, O), (Y, I), (Z, I)])
    ),
    simplify!(
        "neg(Z,X), or(X,Y,Z) <=> X=0,Y=1,Z=1",
        [neg(&[Z, X]), or(&[X, Y, Z])],
        Body::Equations(&[(X, O), (Y, I), (Z, I)])
    ),
    simplify!(
        "neg(Y,Z), or(X,Y,Z) <=> X=1,Y=0,Z=1",
        [neg(&[Y, Z]), or(&[X, Y, Z])],
        Body::Equations(&[(X, I), (Y, O), (Z, I)])
    ),
    simplify!(
        "neg(Z,Y), or(X,Y,Z) <=> X=1,Y=0,Z=1",
        [neg(&[Z, Y]), or(&[X, Y, Z])],
        Body::Equations(&[(X, I), (Y, O), (Z, I)])
    ),
];
