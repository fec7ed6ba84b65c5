use super::{acyclic_ordering, covering_split, is_acyclic, CoveringPair};
use crate::error::{Error, Result};
use crate::quiver::Quiver;
use crate::vertex::{MutationSequence, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum NormalizationMode {
    /// `sequence` is a source sequence and `i` is a source afterwards.
    SourceAtI,
    /// `sequence` is a sink sequence and `j` is a sink afterwards.
    SinkAtJ,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationResult {
    pub sequence: MutationSequence,
    pub quiver: Quiver,
    pub mode: NormalizationMode,
}

/// Turn the covering pair `(i, j)` into a source/sink pair by mutating only
/// at sources (or only at sinks) other than `i` and `j`.
///
/// If `i` already is a source or `j` a sink the sequence is empty. Otherwise,
/// when the ancestors of `i` induce an acyclic quiver, mutate through their
/// acyclic ordering up to (not including) `i`; all those arrows point away
/// from the ancestor set, so each step is a source of the whole quiver. Else
/// the descendants of `j` are acyclic and the reversed ordering of
/// everything after `j` is used as a sink sequence. The source case wins
/// whenever both apply.
pub fn normalize_covering_pair(q: &Quiver, cp: CoveringPair) -> Result<NormalizationResult> {
    let split = covering_split(q, cp)?;
    let (i, j) = (cp.src, cp.dst);
    if q.is_source(i) || q.is_sink(j) {
        let mode = if q.is_source(i) { NormalizationMode::SourceAtI } else { NormalizationMode::SinkAtJ };
        return Ok(NormalizationResult { sequence: MutationSequence::new(), quiver: q.clone(), mode });
    }

    let (above, above_map) = q.restrict(split.ancestors);
    let (sequence, mode) = if is_acyclic(&above) {
        let order = acyclic_ordering(&above)?;
        let sequence: MutationSequence = order
            .order()
            .iter()
            .map(|&v| above_map.to_old(v).expect("ordering stays inside the subquiver"))
            .take_while(|&v| v != i)
            .collect();
        (sequence, NormalizationMode::SourceAtI)
    } else {
        let (below, below_map) = q.restrict(split.descendants);
        let order = acyclic_ordering(&below).map_err(|_| Error::NotACoveringPair(i, j))?;
        let relabeled: alloc::vec::Vec<VertexId> =
            order.order().iter().map(|&v| below_map.to_old(v).expect("ordering stays inside the subquiver")).collect();
        // j reaches everything below it, so it heads the ordering
        let sequence: MutationSequence = relabeled.into_iter().rev().take_while(|&v| v != j).collect();
        (sequence, NormalizationMode::SinkAtJ)
    };
    let quiver = q.apply_sequence(&sequence)?;
    Ok(NormalizationResult { sequence, quiver, mode })
}
