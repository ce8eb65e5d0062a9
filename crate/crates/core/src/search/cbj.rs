use super::{Labeller, SearchCtx};
use crate::label::LabelSet;

/// Conflict-directed backjumping keeping one conflict set per value.
///
/// `conflict[i][k]` is `None` while value `k` of `V_i` is untried or no longer
/// known to conflict, and `Some(set)` when assigning it conflicts with the
/// assignments to the variables indexed by `set`. `Some(∅)` marks a value that
/// is inconsistent regardless of the other assignments.
#[derive(Clone, Debug)]
pub struct Cbj {
    pub conflict: Vec<[Option<LabelSet>; 2]>,
    assigned: Vec<bool>,
}

impl Cbj {
    pub fn new(n: usize) -> Self {
        Self {
            conflict: vec![[None, None]; n + 1],
            assigned: vec![false; n + 1],
        }
    }

    /// Mark `V_i` as holding a live search assignment (for driving the steps by hand).
    pub fn mark_assigned(&mut self, i: usize) {
        self.assigned[i] = true;
    }
}

impl Labeller for Cbj {
    fn label(&mut self, i: usize, ctx: &mut SearchCtx<'_>) -> usize {
        ctx.stats.label_calls += 1;
        if ctx.is_bound(i) {
            return i + 1;
        }
        for k in 0..2 {
            if self.conflict[i][k].is_some() {
                continue;
            }
            if ctx.probe(i, k == 1, i as u32) {
                self.assigned[i] = true;
                return i + 1;
            }
            self.conflict[i][k] = Some(ctx.explanation().without(i as u32));
            ctx.store.delete(&LabelSet::singleton(i as u32));
        }
        i
    }

    fn unlabel(&mut self, i: usize, ctx: &mut SearchCtx<'_>) -> usize {
        ctx.stats.unlabel_calls += 1;
        let [Some(c0), Some(c1)] = &self.conflict[i] else {
            panic!("unlabel({i}) before both values of V{i} were refuted");
        };
        if c0.is_empty() && c1.is_empty() {
            return 0;
        }
        let union = c0.union(c1);
        let h = union.max().expect("non-empty union") as usize;
        let value = ctx.value(h).expect("a variable named in a conflict set holds an assignment");
        self.conflict[h][usize::from(value)] = Some(union.without(h as u32));
        ctx.store.delete(&LabelSet::range(h as u32, i as u32 - 1));
        for j in h..i {
            if std::mem::take(&mut self.assigned[j]) {
                ctx.stats.deleted_assignments += 1;
            }
        }
        let h_label = h as u32;
        for sets in &mut self.conflict[h..] {
            for set in sets.iter_mut() {
                if set.as_ref().is_some_and(|s| s.max().is_some_and(|m| m >= h_label)) {
                    *set = None;
                }
            }
        }
        h
    }
}
