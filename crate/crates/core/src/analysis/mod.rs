//! Acyclicity, orderings, source/sink sequences, and covering pairs.

mod covering;
mod normalize;

use alloc::vec::Vec;

pub use covering::{
    covering_pairs, covering_split, cycle_vertices, is_covering_pair, is_triangular_extension,
    on_bi_infinite_path_oracle, strongly_connected_components, CoveringPair, CrossDirection, TriangularSplit,
};
pub use normalize::{normalize_covering_pair, NormalizationMode, NormalizationResult};

use crate::error::{Error, Result};
use crate::quiver::Quiver;
use crate::vertex::{MutationSequence, VertexId, VertexSet};

/// A total order of the vertices in which every arrow points forward.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(transparent))]
pub struct AcyclicOrdering(Vec<VertexId>);

impl AcyclicOrdering {
    pub fn from_order(order: Vec<VertexId>) -> Self {
        AcyclicOrdering(order)
    }

    pub fn order(&self) -> &[VertexId] {
        &self.0
    }

    /// Whether this lists every vertex of `q` exactly once with all arrows forward.
    pub fn is_valid_for(&self, q: &Quiver) -> bool {
        let n = q.vertex_count();
        if self.0.len() != n {
            return false;
        }
        let mut position = alloc::vec![usize::MAX; n];
        for (p, &v) in self.0.iter().enumerate() {
            if !q.contains(v) || position[v.index()] != usize::MAX {
                return false;
            }
            position[v.index()] = p;
        }
        q.arrows().all(|(s, d, _)| position[s.index()] < position[d.index()])
    }
}

/// Kahn's algorithm, always removing the smallest-labelled source next.
fn kahn_order(q: &Quiver) -> Option<Vec<VertexId>> {
    let mut remaining = q.vertices();
    let mut order = Vec::with_capacity(q.vertex_count());
    while let Some(next) = remaining.iter().find(|&v| q.in_neighbors(v).intersection(remaining).is_empty()) {
        order.push(next);
        remaining.remove(next);
    }
    remaining.is_empty().then_some(order)
}

pub fn is_acyclic(q: &Quiver) -> bool {
    kahn_order(q).is_some()
}

/// The smallest-label-first acyclic ordering.
pub fn acyclic_ordering(q: &Quiver) -> Result<AcyclicOrdering> {
    kahn_order(q).map(AcyclicOrdering).ok_or(Error::NotAcyclic)
}

fn verify_sequence(q: &Quiver, w: &MutationSequence, at_turn: impl Fn(&Quiver, VertexId) -> bool) -> bool {
    let mut current = q.clone();
    for &k in w.steps() {
        if !current.contains(k) || !at_turn(&current, k) {
            return false;
        }
        current = match current.mutate(k) {
            Ok(next) => next,
            Err(_) => return false,
        };
    }
    true
}

/// Each step is a source of the quiver reached so far.
pub fn verify_source_sequence(q: &Quiver, w: &MutationSequence) -> bool {
    verify_sequence(q, w, Quiver::is_source)
}

/// Each step is a sink of the quiver reached so far.
pub fn verify_sink_sequence(q: &Quiver, w: &MutationSequence) -> bool {
    verify_sequence(q, w, Quiver::is_sink)
}

/// The acyclic ordering read as a source mutation sequence.
pub fn source_sequence_from_ordering(q: &Quiver) -> Result<MutationSequence> {
    Ok(acyclic_ordering(q)?.0.into())
}

/// The acyclic ordering reversed, which is a sink mutation sequence.
pub fn sink_sequence_from_ordering(q: &Quiver) -> Result<MutationSequence> {
    Ok(acyclic_ordering(q)?.0.into_iter().rev().collect())
}

/// Every vertex reachable from `from` by a directed path, `from` included.
pub fn descendants(q: &Quiver, from: VertexSet) -> VertexSet {
    closure(from, |v| q.out_neighbors(v))
}

/// Every vertex with a directed path into `to`, `to` included.
pub fn ancestors(q: &Quiver, to: VertexSet) -> VertexSet {
    closure(to, |v| q.in_neighbors(v))
}

fn closure(start: VertexSet, step: impl Fn(VertexId) -> VertexSet) -> VertexSet {
    let mut seen = start;
    let mut stack: Vec<VertexId> = start.to_vec();
    while let Some(v) = stack.pop() {
        for w in step(v).difference(seen).iter() {
            seen.insert(w);
            stack.push(w);
        }
    }
    seen
}

/// Summary of the structural data shown by `analyze`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnalysisReport {
    pub acyclic: bool,
    pub sources: VertexSet,
    pub sinks: VertexSet,
    pub cycle_vertices: VertexSet,
    pub covering_pairs: Vec<CoveringPair>,
}

pub fn analyze(q: &Quiver) -> AnalysisReport {
    AnalysisReport {
        acyclic: is_acyclic(q),
        sources: q.sources(),
        sinks: q.sinks(),
        cycle_vertices: cycle_vertices(q),
        covering_pairs: covering_pairs(q),
    }
}
