use super::{Labeller, SearchCtx};
use crate::label::LabelSet;

/// Chronological backtracking. `V_i`'s assignment is justified by `{i}`.
#[derive(Clone, Debug)]
pub struct Cbt {
    /// Next value to try per variable (index 0 unused).
    pub num: Vec<u8>,
    /// Whether `V_i` currently holds a search assignment.
    assigned: Vec<bool>,
}

impl Cbt {
    pub fn new(n: usize) -> Self {
        Self {
            num: vec![0; n + 1],
            assigned: vec![false; n + 1],
        }
    }
}

impl Labeller for Cbt {
    fn label(&mut self, i: usize, ctx: &mut SearchCtx<'_>) -> usize {
        ctx.stats.label_calls += 1;
        if ctx.is_bound(i) {
            return i + 1;
        }
        while self.num[i] <= 1 {
            let value = self.num[i] == 1;
            self.num[i] += 1;
            if ctx.probe(i, value, i as u32) {
                self.assigned[i] = true;
                return i + 1;
            }
            ctx.store.delete(&LabelSet::singleton(i as u32));
        }
        i
    }

    /// Steps back to the most recent variable that holds a search assignment,
    /// retracting it. Variables in between were bound by propagation alone and
    /// offer no alternative value.
    fn unlabel(&mut self, i: usize, ctx: &mut SearchCtx<'_>) -> usize {
        ctx.stats.unlabel_calls += 1;
        ctx.store.delete(&LabelSet::singleton(i as u32));
        self.num[i] = 0;
        let mut h = i - 1;
        while h >= 1 {
            if self.assigned[h] {
                self.assigned[h] = false;
                ctx.store.delete(&LabelSet::singleton(h as u32));
                ctx.stats.deleted_assignments += 1;
                return h;
            }
            self.num[h] = 0;
            h -= 1;
        }
        0
    }
}
