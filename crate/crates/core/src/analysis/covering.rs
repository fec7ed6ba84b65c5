use alloc::vec;
use alloc::vec::Vec;

use super::{ancestors, descendants};
use crate::error::{Error, Result};
use crate::quiver::Quiver;
use crate::vertex::{VertexId, VertexSet};

/// An arrow `src -> dst` lying on no bi-infinite path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(from = "(VertexId, VertexId)", into = "(VertexId, VertexId)")
)]
pub struct CoveringPair {
    pub src: VertexId,
    pub dst: VertexId,
}

impl CoveringPair {
    pub fn new(src: VertexId, dst: VertexId) -> Self {
        CoveringPair { src, dst }
    }
}

impl From<(VertexId, VertexId)> for CoveringPair {
    fn from((src, dst): (VertexId, VertexId)) -> Self {
        CoveringPair { src, dst }
    }
}

impl From<CoveringPair> for (VertexId, VertexId) {
    fn from(cp: CoveringPair) -> Self {
        (cp.src, cp.dst)
    }
}

/// The two triangular decompositions induced by a covering pair `(i, j)`.
///
/// `ancestors` holds every vertex with a path to `i`, `descendants` every
/// vertex reachable from `j`; the other two fields are their complements.
/// Arrows between `ancestors` and its complement all leave `ancestors`, and
/// arrows between `descendants` and its complement all enter `descendants`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TriangularSplit {
    pub ancestors: VertexSet,
    pub not_ancestors: VertexSet,
    pub descendants: VertexSet,
    pub not_descendants: VertexSet,
}

/// How the arrows between `X` and its complement `Y` are oriented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum CrossDirection {
    XToY,
    YToX,
    NoCross,
    Mixed,
}

impl CrossDirection {
    pub fn is_triangular(self) -> bool {
        self != CrossDirection::Mixed
    }
}

/// Tarjan's algorithm. Components come out in reverse topological order.
pub fn strongly_connected_components(q: &Quiver) -> Vec<VertexSet> {
    struct Tarjan<'a> {
        q: &'a Quiver,
        index: Vec<usize>,
        low: Vec<usize>,
        on_stack: VertexSet,
        stack: Vec<VertexId>,
        next: usize,
        out: Vec<VertexSet>,
    }

    impl Tarjan<'_> {
        fn visit(&mut self, v: VertexId) {
            let vi = v.index();
            self.index[vi] = self.next;
            self.low[vi] = self.next;
            self.next += 1;
            self.stack.push(v);
            self.on_stack.insert(v);
            for w in self.q.out_neighbors(v).iter() {
                let wi = w.index();
                if self.index[wi] == usize::MAX {
                    self.visit(w);
                    self.low[vi] = self.low[vi].min(self.low[wi]);
                } else if self.on_stack.contains(w) {
                    self.low[vi] = self.low[vi].min(self.index[wi]);
                }
            }
            if self.low[vi] == self.index[vi] {
                let mut component = VertexSet::EMPTY;
                while let Some(w) = self.stack.pop() {
                    self.on_stack.remove(w);
                    component.insert(w);
                    if w == v {
                        break;
                    }
                }
                self.out.push(component);
            }
        }
    }

    let n = q.vertex_count();
    let mut t = Tarjan {
        q,
        index: vec![usize::MAX; n],
        low: vec![0; n],
        on_stack: VertexSet::EMPTY,
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in q.vertices().iter() {
        if t.index[v.index()] == usize::MAX {
            t.visit(v);
        }
    }
    t.out
}

/// Vertices on some oriented cycle. Loops are impossible, so these are the
/// members of strongly connected components with two or more vertices.
pub fn cycle_vertices(q: &Quiver) -> VertexSet {
    strongly_connected_components(q).into_iter().filter(|c| c.len() >= 2).fold(VertexSet::EMPTY, VertexSet::union)
}

/// Whether `src -> dst` is an arrow that misses every bi-infinite path: either
/// no cycle feeds into `src` or `dst` leads to no cycle.
pub fn is_covering_pair(q: &Quiver, src: VertexId, dst: VertexId) -> bool {
    if !q.has_arrow(src, dst) {
        return false;
    }
    let cycles = cycle_vertices(q);
    !(descendants(q, cycles).contains(src) && ancestors(q, cycles).contains(dst))
}

/// All covering pairs, one per arrow regardless of multiplicity, sorted.
pub fn covering_pairs(q: &Quiver) -> Vec<CoveringPair> {
    let cycles = cycle_vertices(q);
    let fed_by_cycle = descendants(q, cycles);
    let feeds_cycle = ancestors(q, cycles);
    q.arrows()
        .filter(|&(i, j, _)| !(fed_by_cycle.contains(i) && feeds_cycle.contains(j)))
        .map(|(i, j, _)| CoveringPair::new(i, j))
        .collect()
}

/// Brute-force test for whether the arrow `src -> dst` lies on a bi-infinite
/// path: search for a walk of `n` arrows ending at `src` and one of `n`
/// arrows starting at `dst`. Each such walk visits `n + 1` vertices and so
/// repeats one, which closes a cycle that can be traversed forever.
pub fn on_bi_infinite_path_oracle(q: &Quiver, src: VertexId, dst: VertexId) -> Result<bool> {
    if !q.has_arrow(src, dst) {
        return Err(Error::ArrowMissing(src, dst));
    }
    let n = q.vertex_count();
    let backward = long_walk_exists(n, src, &|v| q.in_neighbors(v));
    let forward = long_walk_exists(n, dst, &|v| q.out_neighbors(v));
    Ok(backward && forward)
}

/// `length` is the vertex count, so it also bounds the vertex indices.
fn long_walk_exists(length: usize, start: VertexId, step: &dyn Fn(VertexId) -> VertexSet) -> bool {
    // dead[v][r]: no walk of r more arrows from v
    let mut dead = vec![false; length * (length + 1)];
    let mut walk = vec![start];
    fn go(
        walk: &mut Vec<VertexId>,
        remaining: usize,
        length: usize,
        step: &dyn Fn(VertexId) -> VertexSet,
        dead: &mut [bool],
    ) -> bool {
        let v = *walk.last().expect("walk is never empty");
        if remaining == 0 {
            let mut seen = VertexSet::EMPTY;
            return walk.iter().any(|&w| {
                let repeat = seen.contains(w);
                seen.insert(w);
                repeat
            });
        }
        let slot = v.index() * (length + 1) + remaining;
        if dead[slot] {
            return false;
        }
        for w in step(v).iter() {
            walk.push(w);
            let found = go(walk, remaining - 1, length, step, dead);
            walk.pop();
            if found {
                return true;
            }
        }
        dead[slot] = true;
        false
    }
    go(&mut walk, length, length, step, &mut dead)
}

/// The ancestor/descendant decomposition of a covering pair.
pub fn covering_split(q: &Quiver, cp: CoveringPair) -> Result<TriangularSplit> {
    if !is_covering_pair(q, cp.src, cp.dst) {
        return Err(Error::NotACoveringPair(cp.src, cp.dst));
    }
    let n = q.vertex_count();
    let a = ancestors(q, VertexSet::singleton(cp.src));
    let b = descendants(q, VertexSet::singleton(cp.dst));
    Ok(TriangularSplit {
        ancestors: a,
        not_ancestors: a.complement(n),
        descendants: b,
        not_descendants: b.complement(n),
    })
}

/// Orientation of the arrows crossing between `x` and the rest of `q`.
pub fn is_triangular_extension(q: &Quiver, x: VertexSet) -> Result<CrossDirection> {
    q.check_set(x).map_err(|_| Error::BadPartition)?;
    let y = x.complement(q.vertex_count());
    if x.is_empty() || y.is_empty() {
        return Err(Error::BadPartition);
    }
    let (mut forward, mut backward) = (false, false);
    for (s, d, _) in q.arrows() {
        match (x.contains(s), x.contains(d)) {
            (true, false) => forward = true,
            (false, true) => backward = true,
            _ => {}
        }
    }
    Ok(match (forward, backward) {
        (false, false) => CrossDirection::NoCross,
        (true, false) => CrossDirection::XToY,
        (false, true) => CrossDirection::YToX,
        (true, true) => CrossDirection::Mixed,
    })
}
