use super::*;
use crate::cnf::{encode, CnfInstance};
use crate::term::Term;

fn ls<const N: usize>(labels: [u32; N]) -> LabelSet {
    LabelSet::from(labels)
}

/// Store holding the encoding of `instance`; returns its problem variables.
fn encoded(instance: &CnfInstance) -> (ConstraintStore, Vec<VarId>) {
    let mut store = ConstraintStore::new();
    let enc = encode(instance, &mut store);
    (store, enc.problem_vars)
}

/// Clauses under which `V_target = 0` fails by propagation once `V_a` and `V_b`
/// are 0, while the store itself stays consistent.
fn refutes_zero(n: usize, target: i32, a: i32, b: i32, aux: i32) -> CnfInstance {
    CnfInstance::new("probe", n, vec![vec![target, aux], vec![target, -aux, a, b]])
}

#[test]
fn empty_problem_is_sat() {
    let inst = CnfInstance::new("empty", 0, vec![]);
    for s in Strategy::ALL {
        let out = solve(&inst, s, &Limits::none());
        assert_eq!(out.result, SearchResult::Sat(vec![]));
        assert_eq!(out.stats.label_calls, 0);
    }
}

#[test]
fn contradictory_units_are_unsat_without_search() {
    let inst = CnfInstance::new("contra", 1, vec![vec![1], vec![-1]]);
    for s in Strategy::ALL {
        let out = solve(&inst, s, &Limits::none());
        assert_eq!(out.result, SearchResult::Unsat);
        assert_eq!(out.stats, SearchStats::default());
    }
}

#[test]
fn step_limit_reports_timeout() {
    let inst = pigeonhole(5, 4);
    let out = solve(&inst, Strategy::Cbt, &Limits { deadline: None, max_steps: Some(1) });
    assert_eq!(out.result, SearchResult::Timeout);
}

fn pigeonhole(pigeons: usize, holes: usize) -> CnfInstance {
    let var = |p: usize, h: usize| (p * holes + h + 1) as i32;
    let mut clauses: Vec<Vec<i32>> = (0..pigeons).map(|p| (0..holes).map(|h| var(p, h)).collect()).collect();
    for h in 0..holes {
        for p in 0..pigeons {
            for q in p + 1..pigeons {
                clauses.push(vec![-var(p, h), -var(q, h)]);
            }
        }
    }
    CnfInstance::new("php", pigeons * holes, clauses)
}

#[test]
fn pigeonhole_is_unsat_for_every_strategy() {
    let inst = pigeonhole(4, 3);
    for s in Strategy::ALL {
        assert_eq!(solve(&inst, s, &Limits::none()).result, SearchResult::Unsat, "{s}");
    }
}

#[test]
fn cbt_label_skips_bound_variable() {
    let (mut store, vars) = encoded(&CnfInstance::new("unit", 2, vec![vec![1]]));
    let mut ctx = SearchCtx::new(&mut store, &vars);
    let mut cbt = Cbt::new(2);
    assert_eq!(cbt.label(1, &mut ctx), 2);
    assert_eq!(ctx.stats.value_attempts, 0);
}

#[test]
fn cbt_label_first_value() {
    let (mut store, vars) = encoded(&CnfInstance::new("free", 1, vec![]));
    let mut ctx = SearchCtx::new(&mut store, &vars);
    let mut cbt = Cbt::new(1);
    assert_eq!(cbt.label(1, &mut ctx), 2);
    assert_eq!(cbt.num[1], 1);
    assert_eq!(ctx.value(1), Some(false));
}

#[test]
fn cbt_dead_end_then_unlabel() {
    // V1 = 0 and V1 = 1 each fail by propagation; the store alone is consistent
    let inst = CnfInstance::new("xor", 2, vec![vec![1, 2], vec![1, -2], vec![-1, 2], vec![-1, -2]]);
    let (mut store, vars) = encoded(&inst);
    assert!(store.is_consistent());
    let mut ctx = SearchCtx::new(&mut store, &vars);
    let mut cbt = Cbt::new(2);
    assert_eq!(cbt.label(1, &mut ctx), 1);
    assert_eq!(ctx.stats.value_attempts, 2);
    assert_eq!(cbt.num[1], 2);
    assert_eq!(cbt.unlabel(1, &mut ctx), 0);
    assert_eq!(cbt.num[1], 0);
    assert!(ctx.store.is_consistent());
}

#[test]
fn cbt_unlabel_retracts_previous_choice() {
    let inst = CnfInstance::new("free", 3, vec![]);
    let (mut store, vars) = encoded(&inst);
    let mut ctx = SearchCtx::new(&mut store, &vars);
    let mut cbt = Cbt::new(3);
    assert_eq!(cbt.label(1, &mut ctx), 2);
    assert_eq!(cbt.label(2, &mut ctx), 3);
    assert_eq!(cbt.unlabel(3, &mut ctx), 2);
    assert!(!ctx.is_bound(2));
    assert!(ctx.is_bound(1));
    // relabelling V2 moves on to value 1
    assert_eq!(cbt.label(2, &mut ctx), 3);
    assert_eq!(ctx.value(2), Some(true));
}

#[test]
fn cbj_records_conflict_set_without_own_label() {
    let inst = refutes_zero(9, 8, 3, 7, 9);
    let (mut store, vars) = encoded(&inst);
    store.equal(vars[2], false, ls([3]));
    store.equal(vars[6], false, ls([7]));
    assert!(store.is_consistent() && !store.is_bound(vars[7]));
    let mut ctx = SearchCtx::new(&mut store, &vars);
    let mut cbj = Cbj::new(9);
    assert_eq!(cbj.label(8, &mut ctx), 9);
    assert_eq!(cbj.conflict[8][0], Some(ls([3, 7])));
    assert_eq!(cbj.conflict[8][1], None);
    assert_eq!(ctx.value(8), Some(true));
}

#[test]
fn cbj_never_reprobes_nogood_value() {
    let (mut store, vars) = encoded(&CnfInstance::new("free", 1, vec![]));
    let mut ctx = SearchCtx::new(&mut store, &vars);
    let mut cbj = Cbj::new(1);
    cbj.conflict[1][0] = Some(LabelSet::new());
    assert_eq!(cbj.label(1, &mut ctx), 2);
    assert_eq!(ctx.stats.value_attempts, 1);
    assert_eq!(ctx.value(1), Some(true));
}

#[test]
fn cbj_free_variable_takes_zero() {
    let (mut store, vars) = encoded(&CnfInstance::new("free", 2, vec![]));
    let mut ctx = SearchCtx::new(&mut store, &vars);
    assert_eq!(Cbj::new(2).label(2, &mut ctx), 3);
    assert_eq!(ctx.value(2), Some(false));
}

#[test]
fn cbj_backjump_merges_conflict_sets() {
    // V7's value 0 conflicts with V1,V3 and value 1 with V2,V4
    let (mut store, vars) = encoded(&CnfInstance::new("free", 9, vec![]));
    let mut cbj = Cbj::new(9);
    for i in 1..=6 {
        store.equal(vars[i - 1], i % 2 == 0, ls([i as u32]));
        cbj.mark_assigned(i);
    }
    cbj.conflict[7] = [Some(ls([1, 3])), Some(ls([2, 4]))];
    cbj.conflict[9][0] = Some(ls([1, 3]));
    cbj.conflict[8][1] = Some(ls([5]));
    let v4 = usize::from(store.value(vars[3]).unwrap());
    let mut ctx = SearchCtx::new(&mut store, &vars);
    assert_eq!(cbj.unlabel(7, &mut ctx), 4);
    assert_eq!(cbj.conflict[4][v4], Some(ls([1, 2, 3])));
    for i in 1..=3 {
        assert!(ctx.is_bound(i));
    }
    for i in 4..=6 {
        assert!(!ctx.is_bound(i));
    }
    assert_eq!(ctx.stats.deleted_assignments, 3);
    // still-valid sets survive, sets naming V4 or later are dropped
    assert_eq!(cbj.conflict[9][0], Some(ls([1, 3])));
    assert_eq!(cbj.conflict[7][0], Some(ls([1, 3])));
    assert_eq!(cbj.conflict[7][1], None);
    assert_eq!(cbj.conflict[8][1], None);
    for (j, sets) in cbj.conflict.iter().enumerate() {
        for s in sets.iter().flatten() {
            assert!(s.max().is_none_or(|m| m < 4), "V{j} keeps {s}");
        }
    }
}

#[test]
fn cbj_two_empty_sets_mean_inconsistent() {
    let (mut store, vars) = encoded(&CnfInstance::new("free", 2, vec![]));
    let mut ctx = SearchCtx::new(&mut store, &vars);
    let mut cbj = Cbj::new(2);
    cbj.conflict[2] = [Some(LabelSet::new()), Some(LabelSet::new())];
    assert_eq!(cbj.unlabel(2, &mut ctx), 0);
}

#[test]
fn dbt_first_label_uses_counter_zero() {
    let (mut store, vars) = encoded(&CnfInstance::new("free", 3, vec![]));
    let mut ctx = SearchCtx::new(&mut store, &vars);
    let mut dbt = Dbt::new(3, false);
    assert_eq!(dbt.label(1, &mut ctx), 2);
    assert_eq!(dbt.labelled, vec![1]);
    assert_eq!(dbt.num[1], Some(0));
    assert_eq!(dbt.cntr, 1);
    assert_eq!(ctx.store.deref(Term::Var(vars[0])).1, ls([0]));
}

#[test]
fn dbt_failed_probe_keeps_counter() {
    let inst = refutes_zero(9, 8, 2, 5, 9);
    let (mut store, vars) = encoded(&inst);
    store.equal(vars[1], false, ls([2]));
    store.equal(vars[4], false, ls([5]));
    let mut dbt = Dbt::new(9, false);
    dbt.cntr = 6;
    dbt.num[2] = Some(2);
    dbt.num[5] = Some(5);
    dbt.labelled = vec![2, 5];
    dbt.unlabelled = vec![9, 7, 6, 4, 3, 1, 8];
    let mut ctx = SearchCtx::new(&mut store, &vars);
    assert_eq!(dbt.label(3, &mut ctx), 4);
    assert_eq!(dbt.elim[8][0], Some(ls([2, 5])));
    assert_eq!(dbt.num[8], Some(6));
    assert_eq!(dbt.cntr, 7);
    assert_eq!(ctx.stats.value_attempts, 2);
}

#[test]
fn dbt_bound_variable_moves_without_probe() {
    let (mut store, vars) = encoded(&CnfInstance::new("unit", 2, vec![vec![-1]]));
    let mut ctx = SearchCtx::new(&mut store, &vars);
    let mut dbt = Dbt::new(2, false);
    assert_eq!(dbt.label(1, &mut ctx), 2);
    assert_eq!(dbt.labelled, vec![1]);
    assert_eq!(dbt.num[1], None);
    assert_eq!(dbt.cntr, 0);
    assert_eq!(ctx.stats.value_attempts, 0);
}

/// V2, V9, V11, V3 labelled with labels 0, 1, 2, 3; V7 at a dead end.
fn go_back_state(cascade: bool) -> (ConstraintStore, Vec<VarId>, Dbt) {
    let (mut store, vars) = encoded(&CnfInstance::new("free", 13, vec![]));
    let mut dbt = Dbt::new(13, cascade);
    for (label, v) in [2usize, 9, 11, 3].into_iter().enumerate() {
        store.equal(vars[v - 1], true, ls([label as u32]));
        dbt.num[v] = Some(label as u32);
    }
    dbt.cntr = 4;
    dbt.labelled = vec![2, 9, 11, 3];
    dbt.unlabelled = vec![13, 12, 10, 8, 6, 5, 4, 1, 7];
    dbt.elim[7] = [Some(ls([0, 1])), Some(ls([3, 2]))];
    dbt.elim[12][1] = Some(ls([0]));
    dbt.elim[13][0] = Some(ls([3]));
    (store, vars, dbt)
}

#[test]
fn dbt_goes_back_to_latest_culprit() {
    let (mut store, vars, mut dbt) = go_back_state(false);
    let mut ctx = SearchCtx::new(&mut store, &vars);
    assert_eq!(dbt.unlabel(5, &mut ctx), 4);
    // V3 held label 3, the largest; its value is now explained by V2, V9, V11
    assert_eq!(dbt.elim[3][1], Some(ls([0, 1, 2])));
    assert_eq!(dbt.labelled, vec![2, 9, 11]);
    assert_eq!(dbt.unlabelled[dbt.unlabelled.len() - 2..], [7, 3]);
    assert!(!ctx.is_bound(3));
    assert_eq!(dbt.elim[7][0], Some(ls([0, 1])));
    assert_eq!(dbt.elim[7][1], None);
    assert_eq!(dbt.elim[12][1], Some(ls([0])));
    assert_eq!(dbt.elim[13][0], None);
    dbt.check_partition(&ctx).unwrap();
}

#[test]
fn dbt_empty_explanations_mean_inconsistent() {
    let (mut store, vars) = encoded(&CnfInstance::new("free", 1, vec![]));
    let mut ctx = SearchCtx::new(&mut store, &vars);
    let mut dbt = Dbt::new(1, false);
    dbt.elim[1] = [Some(LabelSet::new()), Some(LabelSet::new())];
    assert_eq!(dbt.unlabel(1, &mut ctx), 0);
}

#[test]
fn fbt_cascades_through_dependent_assignments() {
    // V7 (label 0) is the culprit; V5 = 1 (label 1) because value 0 was eliminated by V7;
    // V9's value 1 was eliminated by V5; V2 (label 2) is independent
    let (mut store, vars) = encoded(&CnfInstance::new("free", 9, vec![]));
    let mut fbt = Dbt::new(9, true);
    for (label, v) in [(0u32, 7usize), (1, 5), (2, 2)] {
        store.equal(vars[v - 1], true, ls([label]));
        fbt.num[v] = Some(label);
    }
    fbt.cntr = 3;
    fbt.labelled = vec![7, 5, 2];
    fbt.unlabelled = vec![9, 6, 4, 3, 1, 8];
    fbt.elim[5][0] = Some(ls([0]));
    fbt.elim[9][1] = Some(ls([1]));
    fbt.elim[8] = [Some(ls([0])), Some(ls([0]))];
    let mut ctx = SearchCtx::new(&mut store, &vars);
    assert_eq!(fbt.unlabel(4, &mut ctx), 2);
    assert_eq!(fbt.labelled, vec![2]);
    assert!(!ctx.is_bound(7) && !ctx.is_bound(5) && ctx.is_bound(2));
    assert_eq!(fbt.elim[5][0], None);
    assert_eq!(fbt.elim[9][1], None);
    assert_eq!(ctx.stats.deleted_assignments, 2);
    fbt.check_partition(&ctx).unwrap();
}

#[test]
fn fbt_without_dependents_matches_dbt() {
    let (mut s1, vars, mut dbt) = go_back_state(false);
    let (mut s2, _, mut fbt) = go_back_state(true);
    // nothing labelled depends on label 3
    let mut c1 = SearchCtx::new(&mut s1, &vars);
    let mut c2 = SearchCtx::new(&mut s2, &vars);
    assert_eq!(dbt.unlabel(5, &mut c1), fbt.unlabel(5, &mut c2));
    assert_eq!(dbt.labelled, fbt.labelled);
    assert_eq!(dbt.unlabelled, fbt.unlabelled);
    assert_eq!(dbt.elim, fbt.elim);
    assert_eq!(c1.stats, c2.stats);
    assert_eq!(s1.source_log().count(), s2.source_log().count());
}
