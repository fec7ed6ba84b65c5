//! Constructive maps between certificates of different classes.

use alloc::boxed::Box;
use alloc::vec::Vec;

use super::{verify, Branch, Certificate, ClassId, SplitMode};
use crate::analysis::{normalize_covering_pair, CrossDirection, NormalizationMode};
use crate::error::{Error, Result};
use crate::quiver::Quiver;
use crate::vertex::{LabelMap, VertexId, VertexSet};

fn require(q: &Quiver, cert: &Certificate, class: ClassId) -> Result<()> {
    verify(q, cert, class).map_err(Error::InvalidInputCertificate)
}

/// Turn a Banff certificate into a B' certificate for the same quiver.
///
/// Acyclic leaves become chains of source splits. A covering-pair split at
/// `(i, j)` is preceded by the normalizing sequence `w`, after which `i` is a
/// source or `j` a sink; the children pick up `w` reversed, since deleting
/// `i` or `j` commutes with mutating along `w`.
pub fn bprime_from_banff(q: &Quiver, cert: &Certificate) -> Result<Certificate> {
    require(q, cert, ClassId::Banff)?;
    Ok(to_prime(q, cert, false))
}

/// The Louise analogue of [`bprime_from_banff`], producing an L' certificate.
pub fn lprime_from_louise(q: &Quiver, cert: &Certificate) -> Result<Certificate> {
    require(q, cert, ClassId::Louise)?;
    Ok(to_prime(q, cert, true))
}

fn to_prime(q: &Quiver, cert: &Certificate, third: bool) -> Certificate {
    match cert {
        Certificate::BaseAcyclic { ordering } => source_splits(q, ordering.order(), third),
        Certificate::MutationStep { sequence, child } => {
            let next = q.apply_sequence(sequence).expect("checked certificate");
            Certificate::MutationStep { sequence: sequence.clone(), child: Box::new(to_prime(&next, child, third)) }
        }
        Certificate::CoverSplit { pair, del_i, del_j, del_ij } => {
            let norm = normalize_covering_pair(q, *pair).expect("checked covering pair");
            let w = &norm.sequence;
            let (i, j) = (pair.src, pair.dst);
            let branch = |removed: VertexSet, b: &Branch| {
                let (sub, _) = q.delete(removed);
                let inner = to_prime(&sub, &b.cert, third);
                let w_sub = w.try_map(|x| b.labels.to_new(x)).expect("normalizing sequence avoids i and j");
                Branch::new(b.labels.clone(), Certificate::mutated(w_sub.reversed(), inner))
            };
            let mode = match norm.mode {
                NormalizationMode::SourceAtI => SplitMode::Source,
                NormalizationMode::SinkAtJ => SplitMode::Sink,
            };
            let split = Certificate::SourceSinkSplit {
                arrow: (i, j),
                mode,
                del_i: branch(VertexSet::singleton(i), del_i),
                del_j: branch(VertexSet::singleton(j), del_j),
                del_ij: del_ij.as_ref().map(|b| branch(VertexSet::singleton(i).with(j), b)),
            };
            Certificate::mutated(w.clone(), split)
        }
        other => unreachable!("{} does not occur in checked Banff or Louise certificates", other.kind()),
    }
}

/// Source splits of an acyclic quiver along `order`: split at the first
/// vertex with an outgoing arrow (a source, since everything before it has no
/// arrows out) and its smallest out-neighbour, until no arrows remain.
fn source_splits(q: &Quiver, order: &[VertexId], third: bool) -> Certificate {
    let Some(i) = order.iter().copied().find(|&v| !q.out_neighbors(v).is_empty()) else {
        return Certificate::BaseNoArrows;
    };
    let j = q.out_neighbors(i).first().expect("i has an out-neighbour");
    let child = |removed: VertexSet| {
        let (sub, labels) = q.delete(removed);
        let sub_order: Vec<VertexId> = order.iter().filter_map(|&v| labels.to_new(v)).collect();
        let cert = source_splits(&sub, &sub_order, third);
        Branch::new(labels, cert)
    };
    Certificate::SourceSinkSplit {
        arrow: (i, j),
        mode: SplitMode::Source,
        del_i: child(VertexSet::singleton(i)),
        del_j: child(VertexSet::singleton(j)),
        del_ij: third.then(|| child(VertexSet::singleton(i).with(j))),
    }
}

/// Turn a B' certificate into a P' certificate for the same quiver.
///
/// A source split at `i -> j` makes `q` a triangular extension of the
/// one-vertex quiver on `i` with arrows leaving it, a sink split one on `j`
/// with arrows entering it. Arrowless leaves become chains of
/// [`CrossDirection::NoCross`] steps. The empty quiver is not in P'.
pub fn pprime_from_bprime(q: &Quiver, cert: &Certificate) -> Result<Certificate> {
    require(q, cert, ClassId::BanffPrime)?;
    if q.vertex_count() == 0 {
        return Err(Error::EmptySet);
    }
    Ok(to_pprime(q, cert))
}

fn to_pprime(q: &Quiver, cert: &Certificate) -> Certificate {
    match cert {
        Certificate::BaseNoArrows => trivial_chain(q.vertex_count()),
        Certificate::MutationStep { sequence, child } => {
            let next = q.apply_sequence(sequence).expect("checked certificate");
            Certificate::MutationStep { sequence: sequence.clone(), child: Box::new(to_pprime(&next, child)) }
        }
        Certificate::SourceSinkSplit { arrow: (i, j), mode, del_i, del_j, .. } => {
            let (apex, direction, branch) = match mode {
                SplitMode::Source => (*i, CrossDirection::XToY, del_i),
                SplitMode::Sink => (*j, CrossDirection::YToX, del_j),
            };
            let (rest, _) = q.delete(VertexSet::singleton(apex));
            Certificate::TriangularStep {
                apex,
                direction,
                rest: Branch::new(branch.labels.clone(), to_pprime(&rest, &branch.cert)),
            }
        }
        other => unreachable!("{} does not occur in checked B' certificates", other.kind()),
    }
}

fn trivial_chain(n: usize) -> Certificate {
    if n <= 1 {
        return Certificate::BaseTrivial;
    }
    let apex = VertexId::new(1);
    Certificate::TriangularStep {
        apex,
        direction: CrossDirection::NoCross,
        rest: Branch::new(LabelMap::of_set(VertexSet::full(n).without(apex)), trivial_chain(n - 1)),
    }
}

/// A Louise certificate with the third child of every split dropped, which
/// is a Banff certificate.
pub fn louise_cert_to_banff_cert(q: &Quiver, cert: &Certificate) -> Result<Certificate> {
    require(q, cert, ClassId::Louise)?;
    Ok(drop_third(cert))
}

/// An L' certificate with the third child of every split dropped, which is a
/// B' certificate.
pub fn lprime_cert_to_bprime_cert(q: &Quiver, cert: &Certificate) -> Result<Certificate> {
    require(q, cert, ClassId::LouisePrime)?;
    Ok(drop_third(cert))
}

fn drop_third(cert: &Certificate) -> Certificate {
    let br = |b: &Branch| Branch::new(b.labels.clone(), drop_third(&b.cert));
    match cert {
        Certificate::MutationStep { sequence, child } => {
            Certificate::MutationStep { sequence: sequence.clone(), child: Box::new(drop_third(child)) }
        }
        Certificate::CoverSplit { pair, del_i, del_j, .. } => {
            Certificate::CoverSplit { pair: *pair, del_i: br(del_i), del_j: br(del_j), del_ij: None }
        }
        Certificate::SourceSinkSplit { arrow, mode, del_i, del_j, .. } => Certificate::SourceSinkSplit {
            arrow: *arrow,
            mode: *mode,
            del_i: br(del_i),
            del_j: br(del_j),
            del_ij: None,
        },
        Certificate::TriangularStep { apex, direction, rest } => {
            Certificate::TriangularStep { apex: *apex, direction: *direction, rest: br(rest) }
        }
        base => base.clone(),
    }
}

#[cfg(test)]
mod tests {
    use alloc::vec;

    use super::*;
    use crate::analysis::{acyclic_ordering, covering_pairs, is_acyclic, CoveringPair};
    use crate::generate::{cycle_quiver, path_quiver, random_acyclic_quiver, random_quiver, six_vertex_louise_quiver};
    use crate::membership::{check_certificate, derive_certificate, Rejection};
    use crate::search::SearchBudget;
    use crate::vertex::MutationSequence;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(i: u32) -> VertexId {
        VertexId::new(i)
    }

    fn labels(ids: &[u32]) -> LabelMap {
        LabelMap::from_old_labels(ids.iter().map(|&i| v(i)).collect())
    }

    fn acyclic_cert(q: &Quiver) -> Certificate {
        Certificate::BaseAcyclic { ordering: acyclic_ordering(q).unwrap() }
    }

    fn budget() -> SearchBudget {
        SearchBudget { max_iso_classes: 5000, ..Default::default() }
    }

    #[test]
    fn path_of_three_becomes_nested_source_splits() {
        let p = path_quiver(3);
        let out = bprime_from_banff(&p, &acyclic_cert(&p)).unwrap();
        // split at 1 -> 2; Q \ {1} is the path 2 -> 3 (relabelled 1 -> 2), Q \ {2} has no arrows
        let expected = Certificate::SourceSinkSplit {
            arrow: (v(1), v(2)),
            mode: SplitMode::Source,
            del_i: Branch::new(
                labels(&[2, 3]),
                Certificate::SourceSinkSplit {
                    arrow: (v(1), v(2)),
                    mode: SplitMode::Source,
                    del_i: Branch::new(labels(&[2]), Certificate::BaseNoArrows),
                    del_j: Branch::new(labels(&[1]), Certificate::BaseNoArrows),
                    del_ij: None,
                },
            ),
            del_j: Branch::new(labels(&[1, 3]), Certificate::BaseNoArrows),
            del_ij: None,
        };
        assert_eq!(out, expected);
        assert!(check_certificate(&p, &out, ClassId::BanffPrime));
    }

    #[test]
    fn mutation_steps_pass_through() {
        let c3 = cycle_quiver(3);
        let after = c3.mutate(v(1)).unwrap();
        let cert = Certificate::MutationStep { sequence: vec![v(1)].into(), child: Box::new(acyclic_cert(&after)) };
        let out = bprime_from_banff(&c3, &cert).unwrap();
        let expected = Certificate::MutationStep {
            sequence: vec![v(1)].into(),
            child: Box::new(bprime_from_banff(&after, &acyclic_cert(&after)).unwrap()),
        };
        assert_eq!(out, expected);
        assert!(check_certificate(&c3, &out, ClassId::BanffPrime));

        let louise = Certificate::MutationStep { sequence: vec![v(1)].into(), child: Box::new(acyclic_cert(&after)) };
        let lp = lprime_from_louise(&c3, &louise).unwrap();
        assert!(matches!(&lp, Certificate::MutationStep { sequence, .. } if sequence.steps() == [v(1)]));
        assert!(check_certificate(&c3, &lp, ClassId::LouisePrime));
    }

    /// A covering-pair split whose children are acyclic or 3-cycles.
    fn split_at(q: &Quiver, i: u32, j: u32, third: bool) -> Certificate {
        let del = |removed: VertexSet| {
            let (sub, map) = q.delete(removed);
            let cert = if is_acyclic(&sub) {
                acyclic_cert(&sub)
            } else {
                let m = sub.mutate(v(1)).unwrap();
                Certificate::MutationStep { sequence: vec![v(1)].into(), child: Box::new(acyclic_cert(&m)) }
            };
            Branch::new(map, cert)
        };
        Certificate::CoverSplit {
            pair: CoveringPair::new(v(i), v(j)),
            del_i: del(VertexSet::singleton(v(i))),
            del_j: del(VertexSet::singleton(v(j))),
            del_ij: third.then(|| del(VertexSet::singleton(v(i)).with(v(j)))),
        }
    }

    #[test]
    fn cover_split_at_a_source_needs_no_mutation() {
        // 3-cycle 2 -> 3 -> 4 -> 2 fed by the source 1 -> 2
        let q =
            Quiver::from_arrows(4, [(1, 2), (2, 3), (3, 4), (4, 2)].into_iter().map(|(a, b)| (v(a), v(b), 1))).unwrap();
        assert!(covering_pairs(&q).contains(&CoveringPair::new(v(1), v(2))));
        let q_minus_1 = q.delete(VertexSet::singleton(v(1))).0;
        assert!(!is_acyclic(&q_minus_1));
        for third in [false, true] {
            let cert = split_at(&q, 1, 2, third);
            let class = if third { ClassId::Louise } else { ClassId::Banff };
            assert!(check_certificate(&q, &cert, class));
            let out = if third { lprime_from_louise(&q, &cert) } else { bprime_from_banff(&q, &cert) }.unwrap();
            assert!(
                matches!(&out, Certificate::SourceSinkSplit { mode: SplitMode::Source, arrow, .. } if *arrow == (v(1), v(2)))
            );
            let target = if third { ClassId::LouisePrime } else { ClassId::BanffPrime };
            assert_eq!(verify(&q, &out, target), Ok(()));
        }
    }

    #[test]
    fn interior_cover_split_gets_normalized() {
        let p = path_quiver(4);
        for third in [false, true] {
            let cert = split_at(&p, 2, 3, third);
            let out = if third { lprime_from_louise(&p, &cert) } else { bprime_from_banff(&p, &cert) }.unwrap();
            match &out {
                Certificate::MutationStep { sequence, child } => {
                    assert_eq!(sequence.steps(), &[v(1)]);
                    assert!(matches!(**child, Certificate::SourceSinkSplit { mode: SplitMode::Source, .. }));
                }
                other => panic!("{other:?}"),
            }
            let target = if third { ClassId::LouisePrime } else { ClassId::BanffPrime };
            assert_eq!(verify(&p, &out, target), Ok(()));
        }
    }

    #[test]
    fn invalid_inputs_are_refused() {
        let c3 = cycle_quiver(3);
        assert_eq!(
            bprime_from_banff(&c3, &acyclic_cert(&path_quiver(3))),
            Err(Error::InvalidInputCertificate(Rejection::BadOrdering))
        );
        assert!(pprime_from_bprime(&c3, &Certificate::BaseNoArrows).is_err());
        assert!(louise_cert_to_banff_cert(&c3, &Certificate::BaseNoArrows).is_err());
        assert_eq!(pprime_from_bprime(&Quiver::arrowless(0), &Certificate::BaseNoArrows), Err(Error::EmptySet));
    }

    #[test]
    fn pprime_examples() {
        assert_eq!(
            pprime_from_bprime(&Quiver::arrowless(1), &Certificate::BaseNoArrows).unwrap(),
            Certificate::BaseTrivial
        );
        let p = path_quiver(2);
        let bp = derive_certificate(&p, ClassId::BanffPrime, &budget()).unwrap().into_witness().unwrap();
        let pp = pprime_from_bprime(&p, &bp).unwrap();
        assert_eq!(
            pp,
            Certificate::TriangularStep {
                apex: v(1),
                direction: CrossDirection::XToY,
                rest: Branch::new(labels(&[2]), Certificate::BaseTrivial),
            }
        );
        let chain = pprime_from_bprime(&Quiver::arrowless(4), &Certificate::BaseNoArrows).unwrap();
        assert_eq!(chain.node_count(), 4);
        assert!(check_certificate(&Quiver::arrowless(4), &chain, ClassId::PPrime));
    }

    #[test]
    fn sink_splits_become_rest_to_apex_steps() {
        // 3-cycle 1 -> 2 -> 3 -> 1 draining into the sink 4
        let q =
            Quiver::from_arrows(4, [(1, 2), (2, 3), (3, 1), (3, 4)].into_iter().map(|(a, b)| (v(a), v(b), 1))).unwrap();
        let bp = derive_certificate(&q, ClassId::BanffPrime, &budget()).unwrap().into_witness().unwrap();
        assert!(matches!(bp, Certificate::SourceSinkSplit { mode: SplitMode::Sink, .. }), "{bp:?}");
        let pp = pprime_from_bprime(&q, &bp).unwrap();
        assert!(
            matches!(pp, Certificate::TriangularStep { apex, direction: CrossDirection::YToX, .. } if apex == v(4))
        );
        assert!(check_certificate(&q, &pp, ClassId::PPrime));
    }

    #[test]
    fn pprime_size_is_bounded_by_the_input() {
        for s in 0..40 {
            let q = random_quiver(1 + s as usize % 5, 2, 40 + s);
            if let Some(bp) = derive_certificate(&q, ClassId::BanffPrime, &budget()).unwrap().into_witness() {
                let pp = pprime_from_bprime(&q, &bp).unwrap();
                assert!(check_certificate(&q, &pp, ClassId::PPrime));
                assert!(pp.node_count() <= bp.node_count() + q.vertex_count());
            }
        }
    }

    #[test]
    fn pipeline_on_mutated_acyclic_quivers() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for s in 0..40 {
            let n = 1 + s as usize % 5;
            let a = random_acyclic_quiver(n, 2, 70 + s);
            let len = rng.gen_range(0..=4);
            let w: MutationSequence = (0..len).map(|_| VertexId::from_index(rng.gen_range(0..n))).collect();
            let Ok(q) = a.apply_sequence(&w) else { continue };
            let banff = derive_certificate(&q, ClassId::Banff, &budget()).unwrap().into_witness().unwrap();
            let bp = bprime_from_banff(&q, &banff).unwrap();
            assert_eq!(verify(&q, &bp, ClassId::BanffPrime), Ok(()));
            let pp = pprime_from_bprime(&q, &bp).unwrap();
            assert_eq!(verify(&q, &pp, ClassId::PPrime), Ok(()));
        }
    }

    #[test]
    fn dropping_third_children() {
        for s in 0..40 {
            let q = random_quiver(1 + s as usize % 5, 2, 300 + s);
            if let Some(l) = derive_certificate(&q, ClassId::Louise, &budget()).unwrap().into_witness() {
                let b = louise_cert_to_banff_cert(&q, &l).unwrap();
                assert_eq!(verify(&q, &b, ClassId::Banff), Ok(()));
                let lp = lprime_from_louise(&q, &l).unwrap();
                assert_eq!(verify(&q, &lp, ClassId::LouisePrime), Ok(()));
                let bp = lprime_cert_to_bprime_cert(&q, &lp).unwrap();
                assert_eq!(verify(&q, &bp, ClassId::BanffPrime), Ok(()));
            }
        }
        assert_eq!(drop_third(&Certificate::BaseNoArrows), Certificate::BaseNoArrows);
    }

    #[test]
    fn six_vertex_louise_quiver_pair_uses_no_mutation() {
        let r = six_vertex_louise_quiver();
        let norm = normalize_covering_pair(&r, CoveringPair::new(v(6), v(5))).unwrap();
        assert!(norm.sequence.is_empty());
    }
}
