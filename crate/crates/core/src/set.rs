//! Canonical vertex sets.
//!
//! [`VertexSet`] is the external, canonical form: a strictly increasing
//! sequence of vertex ids. The closure and search kernels work over
//! [`Bits`], a fixed-width bitset sized to the instance.

use std::fmt;

use smallvec::SmallVec;

pub type VertexId = u32;

/// A finite set of vertex ids, stored sorted and duplicate-free.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<VertexId>);

impl VertexSet {
    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn new<I: IntoIterator<Item = VertexId>>(ids: I) -> Self {
        let mut v: Vec<VertexId> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn singleton(id: VertexId) -> Self {
        VertexSet(vec![id])
    }

    pub fn members(&self) -> &[VertexId] {
        &self.0
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: VertexId) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn max_id(&self) -> Option<VertexId> {
        self.0.last().copied()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for &x in &self.0 {
            for &y in it.by_ref() {
                if y == x {
                    continue 'outer;
                }
                if y > x {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            if a < b {
                out.push(a);
                i += 1;
            } else if b < a {
                out.push(b);
                j += 1;
            } else {
                out.push(a);
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        VertexSet(out)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(
            self.0
                .iter()
                .copied()
                .filter(|&x| !other.contains(x))
                .collect(),
        )
    }

    pub fn without(&self, id: VertexId) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&x| x != id).collect())
    }

    /// `{0, .., size-1} \ self`.
    pub fn complement(&self, size: usize) -> VertexSet {
        VertexSet(
            (0..size as VertexId)
                .filter(|&x| !self.contains(x))
                .collect(),
        )
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

/// Fixed-width bitset used by the hot loops. All sets taking part in one
/// computation must be created with the same universe size.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Bits(SmallVec<[u64; 2]>);

impl Bits {
    pub(crate) fn zeros(universe: usize) -> Self {
        Bits(SmallVec::from_elem(0, universe.div_ceil(64).max(1)))
    }

    pub(crate) fn from_set(set: &VertexSet, universe: usize) -> Self {
        let mut b = Bits::zeros(universe);
        for v in set.iter() {
            b.insert(v);
        }
        b
    }

    pub(crate) fn to_set(&self) -> VertexSet {
        let mut out = Vec::new();
        for (w, &word) in self.0.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let t = word.trailing_zeros();
                out.push((w as u32) * 64 + t);
                word &= word - 1;
            }
        }
        VertexSet(out)
    }

    #[inline]
    pub(crate) fn insert(&mut self, v: VertexId) {
        self.0[(v / 64) as usize] |= 1 << (v % 64);
    }

    #[inline]
    pub(crate) fn remove(&mut self, v: VertexId) {
        self.0[(v / 64) as usize] &= !(1 << (v % 64));
    }

    #[inline]
    pub(crate) fn contains(&self, v: VertexId) -> bool {
        self.0[(v / 64) as usize] & (1 << (v % 64)) != 0
    }

    #[inline]
    pub(crate) fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }

    #[inline]
    pub(crate) fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a |= b;
        }
    }

    pub(crate) fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}
