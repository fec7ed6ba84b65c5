//! Membership certificates for the Banff, Louise, B', L' and P' classes.
//!
//! A [`Certificate`] is a finite derivation tree. Every node applies one
//! clause of a class definition to the quiver it certifies: a base case, a
//! mutation, or a split into vertex-deleted subquivers. Children of a split
//! certify the subquivers in compacted labels, and each child carries the
//! [`LabelMap`] that says which parent vertex each of its vertices was.

mod check;
mod derive;
mod scan;
mod transform;

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use check::{check_certificate, verify, Rejection};
pub use derive::derive_certificate;
pub use scan::{scan_banff_not_louise, scan_quivers, ScanCandidate, ScanReport, ScanSource};
pub use transform::{
    bprime_from_banff, louise_cert_to_banff_cert, lprime_cert_to_bprime_cert, lprime_from_louise, pprime_from_bprime,
};

use crate::analysis::{AcyclicOrdering, CoveringPair, CrossDirection};
use crate::vertex::{LabelMap, MutationSequence, Permutation, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ClassId {
    #[cfg_attr(feature = "serde", serde(rename = "banff"))]
    Banff,
    #[cfg_attr(feature = "serde", serde(rename = "bprime"))]
    BanffPrime,
    #[cfg_attr(feature = "serde", serde(rename = "louise"))]
    Louise,
    #[cfg_attr(feature = "serde", serde(rename = "lprime"))]
    LouisePrime,
    #[cfg_attr(feature = "serde", serde(rename = "pprime"))]
    PPrime,
}

impl ClassId {
    pub const ALL: [ClassId; 5] =
        [ClassId::Banff, ClassId::BanffPrime, ClassId::Louise, ClassId::LouisePrime, ClassId::PPrime];

    pub fn name(self) -> &'static str {
        match self {
            ClassId::Banff => "banff",
            ClassId::BanffPrime => "bprime",
            ClassId::Louise => "louise",
            ClassId::LouisePrime => "lprime",
            ClassId::PPrime => "pprime",
        }
    }

    /// Whether splits in this class carry the doubly-deleted third child.
    pub fn needs_third_child(self) -> bool {
        matches!(self, ClassId::Louise | ClassId::LouisePrime)
    }

    /// Whether a node of this kind may appear in a certificate for the class.
    pub fn allows(self, cert: &Certificate) -> bool {
        use ClassId::*;
        match cert {
            Certificate::BaseNoArrows => matches!(self, BanffPrime | LouisePrime),
            Certificate::BaseAcyclic { .. } => matches!(self, Banff | Louise),
            Certificate::BaseTrivial => self == PPrime,
            Certificate::MutationStep { .. } => true,
            Certificate::CoverSplit { .. } => matches!(self, Banff | Louise),
            Certificate::SourceSinkSplit { .. } => matches!(self, BanffPrime | LouisePrime),
            Certificate::TriangularStep { .. } => self == PPrime,
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownClass;

impl fmt::Display for UnknownClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of banff, bprime, louise, lprime, pprime")
    }
}

impl FromStr for ClassId {
    type Err = UnknownClass;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClassId::ALL.into_iter().find(|c| c.name() == s).ok_or(UnknownClass)
    }
}

/// Which end of a source/sink split is extremal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum SplitMode {
    /// `i` is a source.
    Source,
    /// `j` is a sink.
    Sink,
}

/// A child certificate for a vertex-deleted subquiver.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Branch {
    /// Parent labels of the subquiver's vertices, in order.
    pub labels: LabelMap,
    pub cert: Box<Certificate>,
}

impl Branch {
    pub fn new(labels: LabelMap, cert: Certificate) -> Self {
        Branch { labels, cert: Box::new(cert) }
    }

    /// The same branch under a relabelling `sigma` of the parent quiver.
    fn relabel(&self, sigma: &Permutation) -> Branch {
        let mut moved: Vec<VertexId> = self.labels.old_labels().iter().map(|&v| sigma.apply(v)).collect();
        moved.sort_unstable();
        let labels = LabelMap::from_old_labels(moved);
        let images = self
            .labels
            .old_labels()
            .iter()
            .map(|&v| labels.to_new(sigma.apply(v)).expect("image is in the moved set"))
            .collect();
        let tau = Permutation::from_images(images).expect("compaction is a bijection");
        Branch { labels, cert: Box::new(self.cert.relabel(&tau)) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "kind", rename_all = "snake_case")
)]
pub enum Certificate {
    /// The quiver has no arrows.
    BaseNoArrows,
    /// The quiver is acyclic, witnessed by an ordering.
    BaseAcyclic { ordering: AcyclicOrdering },
    /// The quiver is the one-vertex quiver.
    BaseTrivial,
    /// `child` certifies the quiver reached by mutating along `sequence`.
    MutationStep { sequence: MutationSequence, child: Box<Certificate> },
    CoverSplit {
        pair: CoveringPair,
        del_i: Branch,
        del_j: Branch,
        #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
        del_ij: Option<Branch>,
    },
    SourceSinkSplit {
        arrow: (VertexId, VertexId),
        mode: SplitMode,
        del_i: Branch,
        del_j: Branch,
        #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
        del_ij: Option<Branch>,
    },
    /// The quiver is a triangular extension of the one-vertex quiver on
    /// `apex` and the rest, with crossing arrows oriented by `direction`
    /// (`X` is `{apex}`).
    TriangularStep { apex: VertexId, direction: CrossDirection, rest: Branch },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::BaseNoArrows => "base_no_arrows",
            Certificate::BaseAcyclic { .. } => "base_acyclic",
            Certificate::BaseTrivial => "base_trivial",
            Certificate::MutationStep { .. } => "mutation_step",
            Certificate::CoverSplit { .. } => "cover_split",
            Certificate::SourceSinkSplit { .. } => "source_sink_split",
            Certificate::TriangularStep { .. } => "triangular_step",
        }
    }

    /// Child certificates, in field order.
    pub fn children(&self) -> Vec<&Certificate> {
        match self {
            Certificate::BaseNoArrows | Certificate::BaseAcyclic { .. } | Certificate::BaseTrivial => Vec::new(),
            Certificate::MutationStep { child, .. } => alloc::vec![&**child],
            Certificate::CoverSplit { del_i, del_j, del_ij, .. }
            | Certificate::SourceSinkSplit { del_i, del_j, del_ij, .. } => {
                let mut out = alloc::vec![&*del_i.cert, &*del_j.cert];
                out.extend(del_ij.iter().map(|b| &*b.cert));
                out
            }
            Certificate::TriangularStep { rest, .. } => alloc::vec![&*rest.cert],
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().into_iter().map(Certificate::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().into_iter().map(Certificate::depth).max().unwrap_or(0)
    }

    /// `MutationStep(sequence, child)`, or `child` itself for an empty
    /// sequence. Directly nested steps are merged.
    pub fn mutated(sequence: MutationSequence, child: Certificate) -> Certificate {
        if sequence.is_empty() {
            return child;
        }
        match child {
            Certificate::MutationStep { sequence: inner, child } => {
                let merged = sequence.concat(&inner);
                Certificate::mutated(merged, *child)
            }
            child => Certificate::MutationStep { sequence, child: Box::new(child) },
        }
    }

    /// Certificate for `sigma·Q` given one for `Q`. `sigma` must act on the
    /// vertices of `Q`.
    pub(crate) fn relabel(&self, sigma: &Permutation) -> Certificate {
        let map = |v: VertexId| sigma.apply(v);
        match self {
            Certificate::BaseNoArrows => Certificate::BaseNoArrows,
            Certificate::BaseTrivial => Certificate::BaseTrivial,
            Certificate::BaseAcyclic { ordering } => Certificate::BaseAcyclic {
                ordering: AcyclicOrdering::from_order(ordering.order().iter().map(|&v| map(v)).collect()),
            },
            Certificate::MutationStep { sequence, child } => Certificate::MutationStep {
                sequence: sequence.steps().iter().map(|&v| map(v)).collect(),
                child: Box::new(child.relabel(sigma)),
            },
            Certificate::CoverSplit { pair, del_i, del_j, del_ij } => Certificate::CoverSplit {
                pair: CoveringPair::new(map(pair.src), map(pair.dst)),
                del_i: del_i.relabel(sigma),
                del_j: del_j.relabel(sigma),
                del_ij: del_ij.as_ref().map(|b| b.relabel(sigma)),
            },
            Certificate::SourceSinkSplit { arrow, mode, del_i, del_j, del_ij } => Certificate::SourceSinkSplit {
                arrow: (map(arrow.0), map(arrow.1)),
                mode: *mode,
                del_i: del_i.relabel(sigma),
                del_j: del_j.relabel(sigma),
                del_ij: del_ij.as_ref().map(|b| b.relabel(sigma)),
            },
            Certificate::TriangularStep { apex, direction, rest } => {
                Certificate::TriangularStep { apex: map(*apex), direction: *direction, rest: rest.relabel(sigma) }
            }
        }
    }
}
