use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest vertex count a [`crate::Quiver`] may have; vertex sets are 64-bit masks.
pub const MAX_VERTICES: usize = 64;

/// A 1-based vertex label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(transparent))]
pub struct VertexId(u32);

impl VertexId {
    pub const fn new(id: u32) -> Self {
        VertexId(id)
    }

    /// The vertex stored at 0-based position `index`.
    pub fn from_index(index: usize) -> Self {
        VertexId(index as u32 + 1)
    }

    pub const fn get(self) -> u32 {
        self.0
    }

    /// 0-based position. Meaningless for the invalid label 0.
    pub fn index(self) -> usize {
        (self.0 as usize).wrapping_sub(1)
    }

    pub(crate) fn check(self, n: usize) -> Result<()> {
        if self.0 >= 1 && self.0 as usize <= n {
            Ok(())
        } else {
            Err(Error::UnknownVertex { vertex: self, n })
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(id: u32) -> Self {
        VertexId(id)
    }
}

/// A set of vertices of one quiver, as a bitmask over 0-based positions.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// All vertices `1..=n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: VertexId) -> Self {
        VertexSet(1 << v.index())
    }

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: VertexId) -> bool {
        v.get() >= 1 && v.index() < MAX_VERTICES && self.0 >> v.index() & 1 == 1
    }

    pub fn insert(&mut self, v: VertexId) {
        self.0 |= 1 << v.index();
    }

    pub fn remove(&mut self, v: VertexId) {
        self.0 &= !(1 << v.index());
    }

    pub fn with(mut self, v: VertexId) -> Self {
        self.insert(v);
        self
    }

    pub fn without(mut self, v: VertexId) -> Self {
        self.remove(v);
        self
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    /// Complement inside `1..=n`.
    pub fn complement(self, n: usize) -> Self {
        VertexSet::full(n).difference(self)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn first(self) -> Option<VertexId> {
        (self.0 != 0).then(|| VertexId::from_index(self.0.trailing_zeros() as usize))
    }

    /// Members in increasing label order.
    pub fn iter(self) -> impl Iterator<Item = VertexId> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(VertexId::from_index(i))
        })
    }

    pub fn to_vec(self) -> Vec<VertexId> {
        self.iter().collect()
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        let mut set = VertexSet::EMPTY;
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.get())).finish()
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let ids = Vec::<VertexId>::deserialize(d)?;
        for v in &ids {
            if v.get() == 0 || v.get() as usize > MAX_VERTICES {
                return Err(D::Error::custom("vertex label out of range"));
            }
        }
        Ok(ids.into_iter().collect())
    }
}

/// An ordered list of vertices to mutate at, applied left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(transparent))]
pub struct MutationSequence(Vec<VertexId>);

impl MutationSequence {
    pub fn new() -> Self {
        MutationSequence(Vec::new())
    }

    pub fn steps(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, v: VertexId) {
        self.0.push(v);
    }

    /// The inverse sequence: mutation is an involution, so reversing undoes it.
    pub fn reversed(&self) -> Self {
        MutationSequence(self.0.iter().rev().copied().collect())
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    /// Relabel every step; `None` from `f` aborts with `None`.
    pub fn try_map(&self, mut f: impl FnMut(VertexId) -> Option<VertexId>) -> Option<Self> {
        self.0.iter().map(|&v| f(v)).collect::<Option<Vec<_>>>().map(MutationSequence)
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut steps = self.0.clone();
        steps.extend_from_slice(&other.0);
        MutationSequence(steps)
    }
}

impl From<Vec<VertexId>> for MutationSequence {
    fn from(steps: Vec<VertexId>) -> Self {
        MutationSequence(steps)
    }
}

impl FromIterator<VertexId> for MutationSequence {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        MutationSequence(iter.into_iter().collect())
    }
}

/// A bijection on `1..=n`; `image[i - 1]` is where vertex `i` goes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(try_from = "Vec<VertexId>", into = "Vec<VertexId>")
)]
pub struct Permutation {
    image: Vec<VertexId>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).map(VertexId::from_index).collect() }
    }

    pub fn from_images(image: Vec<VertexId>) -> Result<Self> {
        let n = image.len();
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        let mut seen = VertexSet::EMPTY;
        for &v in &image {
            if v.check(n).is_err() || seen.contains(v) {
                return Err(Error::BadPermutation(n));
            }
            seen.insert(v);
        }
        Ok(Permutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.image[v.index()]
    }

    pub fn images(&self) -> &[VertexId] {
        &self.image
    }

    pub fn inverse(&self) -> Self {
        let mut image = alloc::vec![VertexId(0); self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v.index()] = VertexId::from_index(i);
        }
        Permutation { image }
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn after(&self, inner: &Permutation) -> Self {
        Permutation { image: inner.image.iter().map(|&v| self.apply(v)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, v)| v.index() == i)
    }
}

impl TryFrom<Vec<VertexId>> for Permutation {
    type Error = Error;

    fn try_from(image: Vec<VertexId>) -> Result<Self> {
        Permutation::from_images(image)
    }
}

impl From<Permutation> for Vec<VertexId> {
    fn from(p: Permutation) -> Self {
        p.image
    }
}

/// Old labels of the vertices of an induced subquiver: the child's vertex
/// `a` was vertex `old[a - 1]` of the parent. Always strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(transparent))]
pub struct LabelMap(Vec<VertexId>);

impl LabelMap {
    pub fn of_set(set: VertexSet) -> Self {
        LabelMap(set.to_vec())
    }

    pub fn from_old_labels(old: Vec<VertexId>) -> Self {
        LabelMap(old)
    }

    pub fn old_labels(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parent label of child vertex `new`.
    pub fn to_old(&self, new: VertexId) -> Option<VertexId> {
        self.0.get(new.index()).copied()
    }

    /// Child label of parent vertex `old`, if it was kept.
    pub fn to_new(&self, old: VertexId) -> Option<VertexId> {
        self.0.binary_search(&old).ok().map(VertexId::from_index)
    }

    pub fn as_set(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }
}
