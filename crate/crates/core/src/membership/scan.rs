//! Looking for Banff quivers that might not be Louise.
//!
//! A candidate is a quiver with a Banff certificate for which no Louise
//! certificate was found. That is evidence worth a closer look, never a
//! counterexample: an `Unknown` Louise verdict only means the budget ran out.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{derive_certificate, ClassId};
use crate::error::Result;
use crate::generate::{all_quivers_up_to_iso, random_quiver_with};
use crate::quiver::Quiver;
use crate::search::{SearchBudget, Verdict};

/// Quivers with fewer vertices than this are Louise whenever they are Banff.
pub const MIN_CANDIDATE_VERTICES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "mode", rename_all = "snake_case")
)]
pub enum ScanSource {
    /// `count` random quivers from a seeded generator.
    Sample { n: usize, max_mult: u32, count: usize, seed: u64 },
    /// Every quiver up to isomorphism.
    Exhaustive { n: usize, max_mult: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanCandidate {
    pub quiver: Quiver,
    pub banff: Verdict<()>,
    pub louise: Verdict<()>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanReport {
    pub source: Option<ScanSource>,
    pub budget: SearchBudget,
    pub examined: usize,
    /// Quivers below [`MIN_CANDIDATE_VERTICES`], which are not checked.
    pub skipped_small: usize,
    pub banff_certified: usize,
    pub candidates: Vec<ScanCandidate>,
}

/// Generate the quivers described by `source` and scan them.
pub fn scan_banff_not_louise(source: &ScanSource, budget: &SearchBudget) -> Result<ScanReport> {
    let quivers = match *source {
        ScanSource::Sample { n, max_mult, count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| random_quiver_with(&mut rng, n, max_mult)).collect()
        }
        ScanSource::Exhaustive { n, max_mult } => all_quivers_up_to_iso(n, max_mult),
    };
    let mut report = scan_quivers(&quivers, budget)?;
    report.source = Some(source.clone());
    Ok(report)
}

/// Scan the given quivers.
pub fn scan_quivers(quivers: &[Quiver], budget: &SearchBudget) -> Result<ScanReport> {
    budget.validate()?;
    let mut report = ScanReport {
        source: None,
        budget: *budget,
        examined: 0,
        skipped_small: 0,
        banff_certified: 0,
        candidates: Vec::new(),
    };
    for q in quivers {
        if q.vertex_count() < MIN_CANDIDATE_VERTICES {
            report.skipped_small += 1;
            continue;
        }
        report.examined += 1;
        let banff = derive_certificate(q, ClassId::Banff, budget)?;
        if !banff.is_certified() {
            continue;
        }
        report.banff_certified += 1;
        let louise = derive_certificate(q, ClassId::Louise, budget)?;
        if !louise.is_certified() {
            report.candidates.push(ScanCandidate {
                quiver: q.clone(),
                banff: banff.map(|_| ()),
                louise: louise.map(|_| ()),
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::random_acyclic_quiver;

    fn budget() -> SearchBudget {
        SearchBudget { max_iso_classes: 3000, ..Default::default() }
    }

    #[test]
    fn acyclic_quivers_are_never_candidates() {
        let qs: Vec<Quiver> = (0..10).map(|s| random_acyclic_quiver(6, 2, s)).collect();
        let report = scan_quivers(&qs, &budget()).unwrap();
        assert_eq!(report.examined, 10);
        assert_eq!(report.banff_certified, 10);
        assert!(report.candidates.is_empty());
    }

    #[test]
    fn small_quivers_are_skipped() {
        let report = scan_quivers(&[random_acyclic_quiver(5, 2, 1)], &budget()).unwrap();
        assert_eq!((report.examined, report.skipped_small), (0, 1));
    }

    #[test]
    fn seeded_samples_reproduce() {
        let src = ScanSource::Sample { n: 6, max_mult: 1, count: 4, seed: 17 };
        let a = scan_banff_not_louise(&src, &budget()).unwrap();
        let b = scan_banff_not_louise(&src, &budget()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.examined, 4);
        assert_eq!(a.source, Some(src));
    }

    #[test]
    fn candidates_are_banff_without_a_louise_certificate() {
        let src = ScanSource::Sample { n: 6, max_mult: 1, count: 6, seed: 5 };
        let report = scan_banff_not_louise(&src, &budget()).unwrap();
        for c in &report.candidates {
            assert!(c.banff.is_certified());
            assert!(!c.louise.is_certified());
            assert!(c.quiver.vertex_count() >= MIN_CANDIDATE_VERTICES);
        }
    }
}
