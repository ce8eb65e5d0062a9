//! Justification label sets.
//!
//! A [`LabelSet`] is a small set of non-negative integer labels. Every constraint
//! and every derived binding in the store carries one; the labels record which
//! externally added items the fact depends on. The representation is a sorted,
//! duplicate-free vector: the sets that occur during search are small (a few
//! dozen labels at most) and most are empty.

use std::fmt;

/// A single justification label.
pub type Label = u32;

/// A finite set of justification labels with value semantics.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LabelSet {
    elems: Vec<Label>,
}

impl LabelSet {
    pub const fn new() -> Self {
        Self { elems: Vec::new() }
    }

    pub fn singleton(label: Label) -> Self {
        Self { elems: vec![label] }
    }

    /// The labels `lo..=hi`; empty when `lo > hi`.
    pub fn range(lo: Label, hi: Label) -> Self {
        Self {
            elems: (lo..=hi).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn contains(&self, label: Label) -> bool {
        self.elems.binary_search(&label).is_ok()
    }

    /// Largest element, or `None` for the empty set.
    pub fn max(&self) -> Option<Label> {
        self.elems.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = Label> + '_ {
        self.elems.iter().copied()
    }

    pub fn as_slice(&self) -> &[Label] {
        &self.elems
    }

    pub fn insert(&mut self, label: Label) {
        if let Err(pos) = self.elems.binary_search(&label) {
            self.elems.insert(pos, label);
        }
    }

    pub fn remove(&mut self, label: Label) {
        if let Ok(pos) = self.elems.binary_search(&label) {
            self.elems.remove(pos);
        }
    }

    pub fn union(&self, other: &LabelSet) -> LabelSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    /// In-place union. Cheap when either side is empty, which is the common case.
    pub fn union_with(&mut self, other: &LabelSet) {
        if other.elems.is_empty() {
            return;
        }
        if self.elems.is_empty() {
            self.elems.extend_from_slice(&other.elems);
            return;
        }
        let mut merged = Vec::with_capacity(self.elems.len() + other.elems.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.elems, &other.elems);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    merged.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    merged.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    merged.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        merged.extend_from_slice(&a[i..]);
        merged.extend_from_slice(&b[j..]);
        self.elems = merged;
    }

    pub fn minus(&self, other: &LabelSet) -> LabelSet {
        if other.is_empty() || self.is_empty() {
            return self.clone();
        }
        LabelSet {
            elems: self
                .elems
                .iter()
                .copied()
                .filter(|x| !other.contains(*x))
                .collect(),
        }
    }

    pub fn without(&self, label: Label) -> LabelSet {
        let mut out = self.clone();
        out.remove(label);
        out
    }

    /// True iff the two sets share at least one label.
    pub fn intersects(&self, other: &LabelSet) -> bool {
        let (a, b) = (&self.elems, &other.elems);
        if a.is_empty() || b.is_empty() || a[a.len() - 1] < b[0] || b[b.len() - 1] < a[0] {
            return false;
        }
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn is_subset(&self, other: &LabelSet) -> bool {
        self.elems.iter().all(|x| other.contains(*x))
    }
}

impl FromIterator<Label> for LabelSet {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        let mut elems: Vec<Label> = iter.into_iter().collect();
        elems.sort_unstable();
        elems.dedup();
        Self { elems }
    }
}

impl<const N: usize> From<[Label; N]> for LabelSet {
    fn from(labels: [Label; N]) -> Self {
        labels.into_iter().collect()
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}
