use super::{Branch, Certificate, ClassId, SplitMode};
use crate::analysis::{is_covering_pair, is_triangular_extension, CrossDirection};
use crate::quiver::Quiver;
use crate::vertex::{LabelMap, VertexId, VertexSet};

/// Why a certificate was not accepted.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Rejection {
    #[error("{kind} node is not allowed in a {class} certificate")]
    IllegalNodeForClass { kind: &'static str, class: ClassId },
    #[error("child label map does not match the deleted subquiver")]
    LabelMapMismatch,
    #[error("quiver has arrows")]
    ArrowsPresent,
    #[error("ordering is not an acyclic ordering of the quiver")]
    BadOrdering,
    #[error("quiver is not the one-vertex quiver")]
    NotTrivial,
    #[error("mutation sequence does not apply to the quiver")]
    BadSequence,
    #[error("({0}, {1}) is not a covering pair")]
    NotACoveringPair(VertexId, VertexId),
    #[error("no arrow {0} -> {1}")]
    NoSuchArrow(VertexId, VertexId),
    #[error("vertex {0} is not a source")]
    NotASource(VertexId),
    #[error("vertex {0} is not a sink")]
    NotASink(VertexId),
    #[error("split is missing the child for Q \\ {{i, j}}")]
    MissingThirdChild,
    #[error("split has a child for Q \\ {{i, j}} but the class takes two children")]
    UnexpectedThirdChild,
    #[error("apex {0} does not split the quiver")]
    BadApex(VertexId),
    #[error("crossing arrows are {actual:?}, certificate claims {claimed:?}")]
    DirectionMismatch { claimed: CrossDirection, actual: CrossDirection },
}

/// Whether `cert` is a valid derivation of `q` in `class`.
pub fn check_certificate(q: &Quiver, cert: &Certificate, class: ClassId) -> bool {
    verify(q, cert, class).is_ok()
}

/// Like [`check_certificate`], reporting the first problem found.
pub fn verify(q: &Quiver, cert: &Certificate, class: ClassId) -> Result<(), Rejection> {
    if !class.allows(cert) {
        return Err(Rejection::IllegalNodeForClass { kind: cert.kind(), class });
    }
    match cert {
        Certificate::BaseNoArrows => {
            if q.has_arrows() {
                return Err(Rejection::ArrowsPresent);
            }
        }
        Certificate::BaseAcyclic { ordering } => {
            if !ordering.is_valid_for(q) {
                return Err(Rejection::BadOrdering);
            }
        }
        Certificate::BaseTrivial => {
            if q.vertex_count() != 1 {
                return Err(Rejection::NotTrivial);
            }
        }
        Certificate::MutationStep { sequence, child } => {
            let next = q.apply_sequence(sequence).map_err(|_| Rejection::BadSequence)?;
            verify(&next, child, class)?;
        }
        Certificate::CoverSplit { pair, del_i, del_j, del_ij } => {
            let (i, j) = (pair.src, pair.dst);
            if !q.contains(i) || !q.contains(j) || !is_covering_pair(q, i, j) {
                return Err(Rejection::NotACoveringPair(i, j));
            }
            verify_split(q, class, i, j, del_i, del_j, del_ij.as_ref())?;
        }
        Certificate::SourceSinkSplit { arrow: (i, j), mode, del_i, del_j, del_ij } => {
            let (i, j) = (*i, *j);
            if !q.has_arrow(i, j) {
                return Err(Rejection::NoSuchArrow(i, j));
            }
            match mode {
                SplitMode::Source if !q.is_source(i) => return Err(Rejection::NotASource(i)),
                SplitMode::Sink if !q.is_sink(j) => return Err(Rejection::NotASink(j)),
                _ => {}
            }
            verify_split(q, class, i, j, del_i, del_j, del_ij.as_ref())?;
        }
        Certificate::TriangularStep { apex, direction, rest } => {
            let apex = *apex;
            if !q.contains(apex) {
                return Err(Rejection::BadApex(apex));
            }
            let actual =
                is_triangular_extension(q, VertexSet::singleton(apex)).map_err(|_| Rejection::BadApex(apex))?;
            if actual != *direction || !actual.is_triangular() {
                return Err(Rejection::DirectionMismatch { claimed: *direction, actual });
            }
            verify_branch(q, VertexSet::singleton(apex), rest, class)?;
        }
    }
    Ok(())
}

fn verify_split(
    q: &Quiver,
    class: ClassId,
    i: VertexId,
    j: VertexId,
    del_i: &Branch,
    del_j: &Branch,
    del_ij: Option<&Branch>,
) -> Result<(), Rejection> {
    match (class.needs_third_child(), del_ij) {
        (true, None) => return Err(Rejection::MissingThirdChild),
        (false, Some(_)) => return Err(Rejection::UnexpectedThirdChild),
        _ => {}
    }
    verify_branch(q, VertexSet::singleton(i), del_i, class)?;
    verify_branch(q, VertexSet::singleton(j), del_j, class)?;
    if let Some(b) = del_ij {
        verify_branch(q, VertexSet::singleton(i).with(j), b, class)?;
    }
    Ok(())
}

fn verify_branch(q: &Quiver, removed: VertexSet, branch: &Branch, class: ClassId) -> Result<(), Rejection> {
    let (sub, labels) = q.delete(removed);
    if branch.labels != labels {
        return Err(Rejection::LabelMapMismatch);
    }
    debug_assert_eq!(labels, LabelMap::of_set(q.vertices().difference(removed)));
    verify(&sub, &branch.cert, class)
}
