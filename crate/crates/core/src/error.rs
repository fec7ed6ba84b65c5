use crate::vertex::VertexId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("arrow {0} -> {0} is a loop")]
    LoopArrow(VertexId),
    #[error("arrows {0} -> {1} and {1} -> {0} form a 2-cycle")]
    TwoCycle(VertexId, VertexId),
    #[error("arrow {src} -> {dst} has non-positive multiplicity {mult}")]
    BadMultiplicity { src: VertexId, dst: VertexId, mult: i64 },
    #[error("vertex {vertex} is not in 1..={n}")]
    UnknownVertex { vertex: VertexId, n: usize },
    #[error("vertex set is empty")]
    EmptySet,
    #[error("quiver has {0} vertices, at most {max} are supported", max = crate::MAX_VERTICES)]
    TooManyVertices(usize),
    #[error("matrix is not skew-symmetric at ({0}, {1})")]
    NotSkewSymmetric(VertexId, VertexId),
    #[error("matrix has {len} entries, expected {n}x{n}")]
    DimensionMismatch { n: usize, len: usize },
    #[error("arrow multiplicity overflowed")]
    Overflow,
    #[error("permutation is not a bijection on 1..={0}")]
    BadPermutation(usize),
    #[error("quiver is not acyclic")]
    NotAcyclic,
    #[error("no arrow {0} -> {1}")]
    ArrowMissing(VertexId, VertexId),
    #[error("({0}, {1}) is not a covering pair")]
    NotACoveringPair(VertexId, VertexId),
    #[error("vertex set does not split the quiver into two nonempty parts")]
    BadPartition,
    #[error("invalid search budget: {0}")]
    BadBudget(&'static str),
    #[error("input certificate is invalid: {0}")]
    InvalidInputCertificate(crate::membership::Rejection),
}
