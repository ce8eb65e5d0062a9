use super::*;
use crate::label::LabelSet;
use crate::term::{Term, VarId};

fn store_with(n: usize) -> (ConstraintStore, Vec<Term>) {
    let mut s = ConstraintStore::new();
    let vars = (0..n).map(|_| Term::Var(s.new_var())).collect();
    (s, vars)
}

fn var(t: Term) -> VarId {
    t.as_var().unwrap()
}

fn ls<const N: usize>(labels: [u32; N]) -> LabelSet {
    LabelSet::from(labels)
}

#[test]
fn or_with_one_forces_result() {
    let (mut s, v) = store_with(2);
    s.add_or(Term::ONE, v[0], v[1], LabelSet::new());
    assert_eq!(s.deref(v[1]), (Term::ONE, LabelSet::new()));
    assert!(s.live_constraints().is_empty());
}

#[test]
fn neg_of_itself_fails() {
    let (mut s, v) = store_with(1);
    s.add_neg(v[0], v[0], LabelSet::new());
    assert!(!s.is_consistent());
    assert_eq!(s.get_explanation(), Ok(LabelSet::new()));
}

#[test]
fn neg_and_or_over_same_pair_force_true() {
    let (mut s, v) = store_with(3);
    s.add_neg(v[0], v[1], LabelSet::new());
    s.add_or(v[0], v[1], v[2], LabelSet::new());
    assert_eq!(s.value(var(v[2])), Some(true));
    // the neg constraint is kept, the or is removed
    let live = s.live_constraints();
    assert_eq!(live.len(), 1);
    assert_eq!(live[0].0, Kind::Neg);
}

#[test]
fn no_rule_applies_to_free_or() {
    let (mut s, v) = store_with(3);
    s.add_or(v[0], v[1], v[2], LabelSet::new());
    assert_eq!(s.stats().firings, 0);
    assert_eq!(s.live_constraints().len(), 1);
    assert!(s.is_consistent());
}

#[test]
fn duplicate_or_merges_results() {
    let (mut s, v) = store_with(4);
    s.add_or(v[0], v[1], v[2], LabelSet::new());
    s.add_or(v[0], v[1], v[3], LabelSet::new());
    assert_eq!(s.bindings().walk(v[2]), s.bindings().walk(v[3]));
    assert_eq!(s.live_constraints().len(), 1);
    // swapped arguments merge too
    let (mut s, v) = store_with(4);
    s.add_or(v[0], v[1], v[2], LabelSet::new());
    s.add_or(v[1], v[0], v[3], LabelSet::new());
    assert_eq!(s.bindings().walk(v[2]), s.bindings().walk(v[3]));
}

#[test]
fn unit_chain_derives_remaining_literal() {
    // or(X0,X1,R1), or(R1,X2,R2), ..., or(R(k-1),Xk,1) with every X_i = 0 except X_j
    for k in 2..6 {
        for j in 0..=k {
            let (mut s, x) = store_with(k + 1);
            let r: Vec<Term> = (0..k - 1).map(|_| Term::Var(s.new_var())).collect();
            s.add_or(x[0], x[1], if k == 1 { Term::ONE } else { r[0] }, LabelSet::new());
            for m in 2..=k {
                let out = if m == k { Term::ONE } else { r[m - 1] };
                s.add_or(r[m - 2], x[m], out, LabelSet::new());
            }
            for (i, xi) in x.iter().enumerate() {
                if i != j {
                    s.equal(var(*xi), false, ls([i as u32]));
                }
            }
            assert!(s.is_consistent());
            let (val, why) = s.deref(x[j]);
            assert_eq!(val, Term::ONE, "k={k} j={j}");
            let expected: LabelSet = (0..=k as u32).filter(|&i| i != j as u32).collect();
            assert_eq!(why, expected);
        }
    }
}

#[test]
fn equal_on_empty_store() {
    let (mut s, v) = store_with(1);
    s.equal(var(v[0]), false, ls([4]));
    assert!(s.is_consistent());
    assert_eq!(s.deref(v[0]), (Term::ZERO, ls([4])));
}

#[test]
fn late_assignment_contradicts_derived_value() {
    // neg(X,Y), or(X,Y,Z), neg(Z,U): Z=1 is derived, so U=1 is refuted on its own
    let (mut s, v) = store_with(4);
    let [x, y, z, u] = v[..] else { unreachable!() };
    s.add_neg(x, y, LabelSet::new());
    s.add_or(x, y, z, LabelSet::new());
    s.add_neg(z, u, LabelSet::new());
    assert_eq!(s.value(var(z)), Some(true));
    s.equal(var(u), true, ls([5]));
    assert_eq!(s.get_explanation(), Ok(ls([5])));
    s.delete(&ls([5]));
    assert!(s.is_consistent());
    assert_eq!(s.value(var(u)), Some(false));
}

#[test]
fn or_false_alone_propagates_into_contradiction() {
    // or(X,U,V), neg(Y,U), or(X,Y,V); X=0 gives U=V, then neg(Y,V), or(0,Y,V) fail
    let (mut s, v) = store_with(4);
    let [x, u, vv, y] = v[..] else { unreachable!() };
    s.add_or(x, u, vv, LabelSet::new());
    s.add_neg(y, u, LabelSet::new());
    s.add_or(x, y, vv, LabelSet::new());
    assert!(s.is_consistent());
    s.equal(var(x), false, ls([1]));
    assert_eq!(s.get_explanation(), Ok(ls([1])));
}

#[test]
fn explanation_requires_failure() {
    let (s, _) = store_with(1);
    assert_eq!(s.get_explanation(), Err(crate::EngineError::NotFailed));
    assert!(s.is_consistent());
}

#[test]
fn conflicting_equations_explain_with_both_labels() {
    let (mut s, v) = store_with(1);
    s.equal(var(v[0]), false, ls([2]));
    s.equal(var(v[0]), true, ls([7]));
    assert_eq!(s.get_explanation(), Ok(ls([2, 7])));
}

#[test]
fn or_zero_result_forces_both_zero() {
    let (mut s, v) = store_with(2);
    s.add_or(v[0], v[1], Term::ZERO, LabelSet::new());
    assert_eq!(s.value(var(v[0])), Some(false));
    assert_eq!(s.value(var(v[1])), Some(false));
    s.equal(var(v[0]), true, ls([4]));
    assert_eq!(s.get_explanation(), Ok(ls([4])));
}

#[test]
fn deleting_one_culprit_repairs_and_rederives() {
    let (mut s, v) = store_with(2);
    let [a, b] = v[..] else { unreachable!() };
    s.equal(var(a), true, ls([1]));
    s.equal(var(b), true, ls([3]));
    s.add_neg(a, b, LabelSet::new());
    assert_eq!(s.get_explanation(), Ok(ls([1, 3])));
    s.delete(&ls([1]));
    assert!(s.is_consistent());
    assert_eq!(s.deref(b), (Term::ONE, ls([3])));
    // neg(X,1) <=> X=0
    assert_eq!(s.deref(a), (Term::ZERO, ls([3])));
    assert_eq!(s.source_log().count(), 2);
}

#[test]
fn delete_empty_or_absent_is_noop() {
    let (mut s, v) = store_with(3);
    s.add_or(v[0], v[1], v[2], ls([1]));
    s.equal(var(v[0]), false, ls([2]));
    let before: Vec<_> = s.source_log().map(|(i, l)| (*i, l.clone())).collect();
    s.delete(&LabelSet::new());
    s.delete(&ls([99]));
    let after: Vec<_> = s.source_log().map(|(i, l)| (*i, l.clone())).collect();
    assert_eq!(before, after);
    assert_eq!(s.stats().deletes, 0);
    assert_eq!(s.bindings().walk(v[2]), s.bindings().walk(v[1]));
}

#[test]
fn range_delete_removes_assignments_and_consequences() {
    // V1..V6 assigned with labels 1..6; or(V4, V5, W) ties W to them
    let (mut s, v) = store_with(7);
    let w = v[6];
    s.add_or(v[3], v[4], w, LabelSet::new());
    for (i, vi) in v.iter().take(6).enumerate() {
        s.equal(var(*vi), i % 2 == 1, ls([i as u32 + 1]));
    }
    assert_eq!(s.value(var(w)), Some(true));
    s.delete(&LabelSet::range(4, 6));
    for vi in &v[..3] {
        assert!(s.is_bound(var(*vi)));
    }
    for (i, vi) in v.iter().enumerate().skip(3) {
        assert!(!s.is_bound(var(*vi)), "V{} still bound", i + 1);
    }
}

#[test]
fn adds_after_failure_wait_for_repair() {
    let (mut s, v) = store_with(3);
    s.equal(var(v[0]), true, ls([1]));
    s.equal(var(v[0]), false, ls([2]));
    s.add_or(v[1], v[1], v[2], LabelSet::new());
    assert!(!s.is_consistent());
    assert!(!s.is_bound(var(v[1])));
    s.delete(&ls([2]));
    assert!(s.is_consistent());
    assert_eq!(s.bindings().walk(v[1]), s.bindings().walk(v[2]));
}
