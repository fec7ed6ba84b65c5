//! Quivers as skew-symmetric exchange matrices.
//!
//! `b[i][j]` is the number of arrows `i -> j` minus the number of arrows
//! `j -> i`. Since a quiver has no oriented 2-cycles at most one of those
//! counts is nonzero, so the matrix loses nothing.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::vertex::{LabelMap, MutationSequence, Permutation, VertexId, VertexSet, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quiver {
    n: usize,
    b: Vec<i64>,
}

impl Quiver {
    /// The quiver on `n` vertices with no arrows.
    ///
    /// Panics if `n` exceeds [`MAX_VERTICES`].
    pub fn arrowless(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices are supported");
        Quiver { n, b: vec![0; n * n] }
    }

    /// Build from `(src, dst, multiplicity)` triples. Repeated pairs add up.
    pub fn from_arrows<I>(n: usize, arrows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, i64)>,
    {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        let mut counts = vec![0i64; n * n];
        for (src, dst, mult) in arrows {
            src.check(n)?;
            dst.check(n)?;
            if src == dst {
                return Err(Error::LoopArrow(src));
            }
            if mult <= 0 {
                return Err(Error::BadMultiplicity { src, dst, mult });
            }
            let slot = &mut counts[src.index() * n + dst.index()];
            *slot = slot.checked_add(mult).ok_or(Error::Overflow)?;
        }
        let mut b = vec![0i64; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let (fwd, back) = (counts[i * n + j], counts[j * n + i]);
                if fwd > 0 && back > 0 {
                    return Err(Error::TwoCycle(VertexId::from_index(i), VertexId::from_index(j)));
                }
                b[i * n + j] = fwd - back;
                b[j * n + i] = back - fwd;
            }
        }
        Ok(Quiver { n, b })
    }

    /// Build from a row-major `n x n` exchange matrix.
    pub fn from_matrix(n: usize, entries: Vec<i64>) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { n, len: entries.len() });
        }
        for i in 0..n {
            for j in i..n {
                let (x, y) = (entries[i * n + j], entries[j * n + i]);
                if x.checked_neg() != Some(y) {
                    return Err(Error::NotSkewSymmetric(VertexId::from_index(i), VertexId::from_index(j)));
                }
            }
        }
        Ok(Quiver { n, b: entries })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Row-major exchange matrix.
    pub fn matrix(&self) -> &[i64] {
        &self.b
    }

    /// Signed arrow count from `i` to `j`. Panics on out-of-range labels.
    pub fn entry(&self, i: VertexId, j: VertexId) -> i64 {
        self.at(i.index(), j.index())
    }

    #[inline]
    pub(crate) fn at(&self, i: usize, j: usize) -> i64 {
        self.b[i * self.n + j]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.check(self.n).is_ok()
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        v.check(self.n)
    }

    pub(crate) fn check_set(&self, set: VertexSet) -> Result<()> {
        match set.difference(self.vertices()).first() {
            Some(vertex) => Err(Error::UnknownVertex { vertex, n: self.n }),
            None => Ok(()),
        }
    }

    pub fn has_arrow(&self, src: VertexId, dst: VertexId) -> bool {
        self.contains(src) && self.contains(dst) && self.entry(src, dst) > 0
    }

    /// All arrows as `(src, dst, multiplicity)`, sorted by `(src, dst)`.
    pub fn arrows(&self) -> impl Iterator<Item = (VertexId, VertexId, i64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.n).filter_map(move |j| {
                let m = self.at(i, j);
                (m > 0).then(|| (VertexId::from_index(i), VertexId::from_index(j), m))
            })
        })
    }

    pub fn has_arrows(&self) -> bool {
        self.b.iter().any(|&x| x != 0)
    }

    pub fn max_abs_entry(&self) -> u64 {
        self.b.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn out_neighbors(&self, v: VertexId) -> VertexSet {
        let i = v.index();
        (0..self.n).filter(|&j| self.at(i, j) > 0).map(VertexId::from_index).collect()
    }

    pub fn in_neighbors(&self, v: VertexId) -> VertexSet {
        let i = v.index();
        (0..self.n).filter(|&j| self.at(j, i) > 0).map(VertexId::from_index).collect()
    }

    pub fn is_source(&self, v: VertexId) -> bool {
        let i = v.index();
        (0..self.n).all(|j| self.at(j, i) <= 0)
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        let i = v.index();
        (0..self.n).all(|j| self.at(i, j) <= 0)
    }

    /// Vertices with no incoming arrows.
    pub fn sources(&self) -> VertexSet {
        self.vertices().iter().filter(|&v| self.is_source(v)).collect()
    }

    /// Vertices with no outgoing arrows.
    pub fn sinks(&self) -> VertexSet {
        self.vertices().iter().filter(|&v| self.is_sink(v)).collect()
    }

    /// Mutation at `k` by the exchange-matrix rule.
    ///
    /// Fails with [`Error::Overflow`] rather than wrapping when a new
    /// multiplicity does not fit in an `i64`.
    pub fn mutate(&self, k: VertexId) -> Result<Quiver> {
        self.check_vertex(k)?;
        let (n, k) = (self.n, k.index());
        let mut b = self.b.clone();
        for i in 0..n {
            let bik = self.at(i, k);
            b[i * n + k] = -bik;
            b[k * n + i] = bik;
            if bik == 0 || i == k {
                continue;
            }
            for j in 0..n {
                if j == k || j == i {
                    continue;
                }
                let bkj = self.at(k, j);
                let through = if bik > 0 && bkj > 0 {
                    bik.checked_mul(bkj)
                } else if bik < 0 && bkj < 0 {
                    bik.checked_mul(bkj).and_then(i64::checked_neg)
                } else {
                    Some(0)
                };
                let cell = &mut b[i * n + j];
                *cell = through.and_then(|t| cell.checked_add(t)).ok_or(Error::Overflow)?;
            }
        }
        Ok(Quiver { n, b })
    }

    /// Mutation at `k` carried out literally on arrow counts: compose every
    /// 2-path through `k`, reverse the arrows at `k`, then cancel opposite
    /// pairs. Kept as an independent reference for [`Quiver::mutate`].
    pub fn mutate_graphical(&self, k: VertexId) -> Result<Quiver> {
        self.check_vertex(k)?;
        let (n, k) = (self.n, k.index());
        let mut arrows: Vec<i64> = self.b.iter().map(|&x| x.max(0)).collect();

        // one new arrow j -> l for each pair of arrows j -> k, k -> l
        for j in 0..n {
            let into_k = self.at(j, k).max(0);
            if into_k == 0 {
                continue;
            }
            for l in 0..n {
                let out_of_k = self.at(k, l).max(0);
                if out_of_k == 0 {
                    continue;
                }
                let added = into_k.checked_mul(out_of_k).ok_or(Error::Overflow)?;
                let cell = &mut arrows[j * n + l];
                *cell = cell.checked_add(added).ok_or(Error::Overflow)?;
            }
        }
        for j in 0..n {
            arrows.swap(j * n + k, k * n + j);
        }
        for i in 0..n {
            for j in i + 1..n {
                let cancel = arrows[i * n + j].min(arrows[j * n + i]);
                arrows[i * n + j] -= cancel;
                arrows[j * n + i] -= cancel;
            }
        }

        let mut b = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                b[i * n + j] = arrows[i * n + j] - arrows[j * n + i];
            }
        }
        Ok(Quiver { n, b })
    }

    /// Mutate at each step of `seq` in order.
    pub fn apply_sequence(&self, seq: &MutationSequence) -> Result<Quiver> {
        for &k in seq.steps() {
            self.check_vertex(k)?;
        }
        let mut q = self.clone();
        for &k in seq.steps() {
            q = q.mutate(k)?;
        }
        Ok(q)
    }

    /// Full subquiver on `set`, relabelled `1..=|set|` in increasing order.
    pub fn induced_subquiver(&self, set: VertexSet) -> Result<(Quiver, LabelMap)> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        self.check_set(set)?;
        Ok(self.restrict(set))
    }

    /// `Q \ removed`. May produce the empty quiver.
    pub fn delete(&self, removed: VertexSet) -> (Quiver, LabelMap) {
        self.restrict(self.vertices().difference(removed))
    }

    pub(crate) fn restrict(&self, set: VertexSet) -> (Quiver, LabelMap) {
        let keep: Vec<usize> = set.intersection(self.vertices()).iter().map(VertexId::index).collect();
        let m = keep.len();
        let mut b = Vec::with_capacity(m * m);
        for &i in &keep {
            for &j in &keep {
                b.push(self.at(i, j));
            }
        }
        let map = LabelMap::from_old_labels(keep.into_iter().map(VertexId::from_index).collect());
        (Quiver { n: m, b }, map)
    }

    /// `σ·Q`: the quiver with an arrow `σ(i) -> σ(j)` for each arrow `i -> j`.
    pub fn permute(&self, sigma: &Permutation) -> Result<Quiver> {
        if sigma.len() != self.n {
            return Err(Error::BadPermutation(self.n));
        }
        let n = self.n;
        let mut b = vec![0i64; n * n];
        for i in 0..n {
            let si = sigma.apply(VertexId::from_index(i)).index();
            for j in 0..n {
                let sj = sigma.apply(VertexId::from_index(j)).index();
                b[si * n + sj] = self.at(i, j);
            }
        }
        Ok(Quiver { n, b })
    }
}

/// The `{"n": .., "arrows": [[src, dst, mult], ...]}` interchange document.
#[cfg(feature = "serde")]
mod json {
    use alloc::vec::Vec;

    use super::Quiver;
    use crate::vertex::VertexId;

    #[derive(serde::Serialize, serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct QuiverDoc {
        n: usize,
        arrows: Vec<(VertexId, VertexId, i64)>,
    }

    impl serde::Serialize for Quiver {
        fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            QuiverDoc { n: self.n, arrows: self.arrows().collect() }.serialize(s)
        }
    }

    impl<'de> serde::Deserialize<'de> for Quiver {
        fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let doc = QuiverDoc::deserialize(d)?;
            Quiver::from_arrows(doc.n, doc.arrows).map_err(serde::de::Error::custom)
        }
    }
}
