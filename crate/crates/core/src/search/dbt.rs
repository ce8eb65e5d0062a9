use super::{Labeller, SearchCtx};
use crate::label::LabelSet;

/// Dynamic backtracking, optionally with cascading retraction.
///
/// Each successful assignment is justified by a fresh counter value stored in
/// `num`. `elim[v][k]` is the elimination explanation of value `k` of `V_v`:
/// the assignment labels that rule the value out, or `None` if unknown.
///
/// With `cascade` set, retracting an assignment also retracts every labelled
/// variable whose elimination explanations depend on it, transitively.
#[derive(Clone, Debug)]
pub struct Dbt {
    pub cascade: bool,
    pub num: Vec<Option<u32>>,
    pub elim: Vec<[Option<LabelSet>; 2]>,
    /// Labelled variables in labelling order (1-based indices).
    pub labelled: Vec<usize>,
    /// Variables still to label; the last one is labelled next.
    pub unlabelled: Vec<usize>,
    pub cntr: u32,
}

impl Dbt {
    pub fn new(n: usize, cascade: bool) -> Self {
        Self {
            cascade,
            num: vec![None; n + 1],
            elim: vec![[None, None]; n + 1],
            labelled: Vec::with_capacity(n),
            unlabelled: (1..=n).rev().collect(),
            cntr: 0,
        }
    }

    /// Every variable sits in exactly one of the two lists, and every labelled one is bound.
    pub fn check_partition(&self, ctx: &SearchCtx<'_>) -> Result<(), String> {
        let n = ctx.n();
        let mut seen = vec![0u8; n + 1];
        for &v in self.labelled.iter().chain(&self.unlabelled) {
            seen[v] += 1;
        }
        if let Some(v) = (1..=n).find(|&v| seen[v] != 1) {
            return Err(format!("V{v} occurs {} times across the variable lists", seen[v]));
        }
        if let Some(v) = self.labelled.iter().find(|&&v| !ctx.is_bound(v)) {
            return Err(format!("labelled V{v} is unbound"));
        }
        Ok(())
    }

    fn reset_elims(&mut self, hit: impl Fn(&LabelSet) -> bool) {
        for sets in &mut self.elim {
            for set in sets.iter_mut() {
                if set.as_ref().is_some_and(&hit) {
                    *set = None;
                }
            }
        }
    }

    /// Move labelled variables left unbound by a deletion back to the unlabelled list.
    fn release_unbound(&mut self, ctx: &SearchCtx<'_>) {
        for j in (0..self.labelled.len()).rev() {
            let v = self.labelled[j];
            if !ctx.is_bound(v) {
                self.labelled.remove(j);
                self.num[v] = None;
                self.unlabelled.push(v);
            }
        }
    }
}

impl Labeller for Dbt {
    fn label(&mut self, i: usize, ctx: &mut SearchCtx<'_>) -> usize {
        ctx.stats.label_calls += 1;
        let v = self.unlabelled.pop().expect("label called with no unlabelled variable");
        if ctx.is_bound(v) {
            self.num[v] = None;
            self.labelled.push(v);
            return i + 1;
        }
        for k in 0..2 {
            if self.elim[v][k].is_some() {
                continue;
            }
            if ctx.probe(v, k == 1, self.cntr) {
                self.num[v] = Some(self.cntr);
                self.cntr += 1;
                self.labelled.push(v);
                return i + 1;
            }
            self.elim[v][k] = Some(ctx.explanation().without(self.cntr));
            ctx.store.delete(&LabelSet::singleton(self.cntr));
        }
        self.unlabelled.push(v);
        i
    }

    fn unlabel(&mut self, _i: usize, ctx: &mut SearchCtx<'_>) -> usize {
        ctx.stats.unlabel_calls += 1;
        let v = self.unlabelled.pop().expect("dead-end variable on the unlabelled list");
        let [Some(e0), Some(e1)] = &self.elim[v] else {
            panic!("unlabel before both values of V{v} were eliminated");
        };
        if e0.is_empty() && e1.is_empty() {
            self.unlabelled.push(v);
            return 0;
        }
        let union = e0.union(e1);
        let h = union.max().expect("non-empty union");
        let pos = self
            .labelled
            .iter()
            .rposition(|&b| self.num[b] == Some(h))
            .expect("the latest culprit label belongs to a labelled variable");
        let bt = self.labelled.remove(pos);
        let value = ctx.value(bt).expect("a labelled variable is bound");
        self.elim[bt][usize::from(value)] = Some(union.without(h));
        self.num[bt] = None;
        // the dead-end variable goes back first so that bt is popped before it
        self.unlabelled.push(v);
        self.unlabelled.push(bt);

        if !self.cascade {
            ctx.store.delete(&LabelSet::singleton(h));
            ctx.stats.deleted_assignments += 1;
            self.reset_elims(|s| s.contains(h));
            self.release_unbound(ctx);
            return self.labelled.len() + 1;
        }

        let mut retract = LabelSet::singleton(h);
        let mut changed = true;
        while changed {
            changed = false;
            let mut j = 0;
            while j < self.labelled.len() {
                let w = self.labelled[j];
                let mut hit = false;
                for set in self.elim[w].iter_mut() {
                    if set.as_ref().is_some_and(|s| s.intersects(&retract)) {
                        *set = None;
                        hit = true;
                    }
                }
                if hit {
                    if let Some(label) = self.num[w].take() {
                        retract.insert(label);
                    }
                    self.labelled.remove(j);
                    self.unlabelled.push(w);
                    changed = true;
                } else {
                    j += 1;
                }
            }
        }
        ctx.store.delete(&retract);
        ctx.stats.deleted_assignments += retract.len() as u64;
        self.release_unbound(ctx);
        self.reset_elims(|s| s.intersects(&retract));
        self.labelled.len() + 1
    }
}
