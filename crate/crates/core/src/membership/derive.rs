//! Budgeted certificate search.
//!
//! A quiver is in one of the five classes exactly when some quiver in its
//! mutation class meets the base clause or splits into members. The search
//! therefore works one mutation class at a time: base checks, then the
//! splits of the starting quiver, then a breadth-first exploration of the
//! class with the same checks on every representative. Children are smaller
//! quivers and are solved recursively.
//!
//! Everything runs in rising tiers of per-class exploration size, so cheap
//! certificates are found before any single class eats the budget. The total
//! number of representatives across all explorations is bounded by
//! `max_iso_classes`. Verdicts are memoized by canonical form and class, and
//! every representative met during an exploration is linked to its class
//! root so later visits reuse the result.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::{Branch, Certificate, ClassId, SplitMode};
use crate::analysis::{acyclic_ordering, covering_pairs, is_triangular_extension, CrossDirection};
use crate::canonical::canonical_form;
use crate::error::Result;
use crate::quiver::Quiver;
use crate::search::{explore_pass, ClassExploration, Meter, PassLimits, SearchBudget, Truncation, Verdict};
use crate::vertex::{MutationSequence, Permutation, VertexId, VertexSet};

const FIRST_TIER: usize = 8;
const TIER_GROWTH: usize = 8;

/// Search for a certificate of membership of `q` in `class`.
///
/// `Certified` certificates always pass [`super::check_certificate`].
/// `RefutedExhaustive` is returned only when the mutation class of `q` was
/// explored completely and every split of every representative has a child
/// that was itself refuted.
pub fn derive_certificate(q: &Quiver, class: ClassId, budget: &SearchBudget) -> Result<Verdict<Certificate>> {
    budget.validate()?;
    if let Some(cert) = base_certificate(q, class) {
        return Ok(Verdict::Certified { witness: cert });
    }
    let mut certifier = Certifier::new(budget);
    let mut reason = Truncation::NodeCap;
    for tier in tiers(budget.max_iso_classes) {
        match certifier.solve(q, class, tier) {
            Outcome::Certified(cert) => {
                debug_assert_eq!(super::verify(q, &cert, class), Ok(()));
                return Ok(Verdict::Certified { witness: cert });
            }
            Outcome::Refuted => return Ok(Verdict::RefutedExhaustive),
            Outcome::Unknown(r) => reason = r,
        }
        if let Some(r) = certifier.out_of_resources() {
            reason = r;
            break;
        }
    }
    Ok(Verdict::Unknown { reason })
}

fn tiers(max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut t = FIRST_TIER;
    while t < max {
        out.push(t);
        t = t.saturating_mul(TIER_GROWTH);
    }
    out.push(max);
    out
}

fn base_certificate(q: &Quiver, class: ClassId) -> Option<Certificate> {
    match class {
        ClassId::Banff | ClassId::Louise => {
            acyclic_ordering(q).ok().map(|ordering| Certificate::BaseAcyclic { ordering })
        }
        ClassId::BanffPrime | ClassId::LouisePrime => (!q.has_arrows()).then_some(Certificate::BaseNoArrows),
        ClassId::PPrime => (q.vertex_count() == 1).then_some(Certificate::BaseTrivial),
    }
}

enum Outcome {
    Certified(Certificate),
    Refuted,
    Unknown(Truncation),
}

enum Memo {
    Certified(Certificate),
    Refuted,
    Unknown { tier: usize, reason: Truncation },
}

/// `relabel·μ_path(root) = key` for a representative first met while
/// exploring from `root`.
struct Link {
    root: Quiver,
    path: MutationSequence,
    relabel: Permutation,
}

/// One way of splitting a quiver into vertex-deleted children.
enum Split {
    Cover(VertexId, VertexId),
    SourceSink(VertexId, VertexId, SplitMode),
    Apex(VertexId, CrossDirection),
}

impl Split {
    fn removed_sets(&self, third: bool) -> Vec<VertexSet> {
        match *self {
            Split::Cover(i, j) | Split::SourceSink(i, j, _) => {
                let mut sets = alloc::vec![VertexSet::singleton(i), VertexSet::singleton(j)];
                if third {
                    sets.push(VertexSet::singleton(i).with(j));
                }
                sets
            }
            Split::Apex(v, _) => alloc::vec![VertexSet::singleton(v)],
        }
    }

    fn assemble(&self, q: &Quiver, removed: &[VertexSet], mut certs: Vec<Certificate>) -> Certificate {
        let mut branches: Vec<Branch> =
            removed.iter().zip(certs.drain(..)).map(|(&set, cert)| Branch::new(q.delete(set).1, cert)).collect();
        let del_ij = if branches.len() == 3 { branches.pop() } else { None };
        let mut it = branches.into_iter();
        match *self {
            Split::Cover(i, j) => Certificate::CoverSplit {
                pair: crate::analysis::CoveringPair::new(i, j),
                del_i: it.next().expect("two children"),
                del_j: it.next().expect("two children"),
                del_ij,
            },
            Split::SourceSink(i, j, mode) => Certificate::SourceSinkSplit {
                arrow: (i, j),
                mode,
                del_i: it.next().expect("two children"),
                del_j: it.next().expect("two children"),
                del_ij,
            },
            Split::Apex(apex, direction) => {
                Certificate::TriangularStep { apex, direction, rest: it.next().expect("one child") }
            }
        }
    }
}

fn splits(q: &Quiver, class: ClassId) -> Vec<Split> {
    match class {
        ClassId::Banff | ClassId::Louise => {
            let (mut easy, mut hard) = (Vec::new(), Vec::new());
            for cp in covering_pairs(q) {
                let target = if q.is_source(cp.src) || q.is_sink(cp.dst) { &mut easy } else { &mut hard };
                target.push(Split::Cover(cp.src, cp.dst));
            }
            easy.append(&mut hard);
            easy
        }
        ClassId::BanffPrime | ClassId::LouisePrime => q
            .arrows()
            .filter_map(|(i, j, _)| {
                if q.is_source(i) {
                    Some(Split::SourceSink(i, j, SplitMode::Source))
                } else if q.is_sink(j) {
                    Some(Split::SourceSink(i, j, SplitMode::Sink))
                } else {
                    None
                }
            })
            .collect(),
        ClassId::PPrime => {
            if q.vertex_count() < 2 {
                return Vec::new();
            }
            q.vertices()
                .iter()
                .filter_map(|v| {
                    let d = is_triangular_extension(q, VertexSet::singleton(v)).ok()?;
                    d.is_triangular().then_some(Split::Apex(v, d))
                })
                .collect()
        }
    }
}

struct Certifier {
    budget: SearchBudget,
    meter: Meter,
    memo: BTreeMap<(ClassId, Quiver), Memo>,
    links: BTreeMap<Quiver, Link>,
    roots: BTreeSet<Quiver>,
}

impl Certifier {
    fn new(budget: &SearchBudget) -> Self {
        Certifier {
            budget: *budget,
            meter: Meter::new(budget),
            memo: BTreeMap::new(),
            links: BTreeMap::new(),
            roots: BTreeSet::new(),
        }
    }

    fn out_of_resources(&self) -> Option<Truncation> {
        if self.meter.deadline.expired() {
            Some(Truncation::TimeCap)
        } else if self.meter.nodes_left == 0 {
            Some(Truncation::NodeCap)
        } else {
            None
        }
    }

    /// Certificate for `q` itself, in its own labels.
    fn solve(&mut self, q: &Quiver, class: ClassId, tier: usize) -> Outcome {
        if let Some(cert) = base_certificate(q, class) {
            return Outcome::Certified(cert);
        }
        let (canon, sigma) = canonical_form(q);
        let (root, link) = match self.links.get(&canon) {
            Some(link) => (link.root.clone(), Some((link.path.clone(), link.relabel.clone()))),
            None => {
                self.roots.insert(canon.clone());
                (canon, None)
            }
        };
        match self.solve_root(&root, class, tier) {
            Outcome::Certified(cert) => {
                let on_canon = match link {
                    None => cert,
                    Some((path, relabel)) => Certificate::mutated(path.reversed(), cert).relabel(&relabel),
                };
                Outcome::Certified(on_canon.relabel(&sigma.inverse()))
            }
            other => other,
        }
    }

    fn solve_root(&mut self, root: &Quiver, class: ClassId, tier: usize) -> Outcome {
        match self.memo.get(&(class, root.clone())) {
            Some(Memo::Certified(cert)) => return Outcome::Certified(cert.clone()),
            Some(Memo::Refuted) => return Outcome::Refuted,
            Some(Memo::Unknown { tier: t, reason }) if *t >= tier => return Outcome::Unknown(*reason),
            _ => {}
        }
        if let Some(reason) = self.out_of_resources() {
            return Outcome::Unknown(reason);
        }
        let out = self.search_class(root, class, tier);
        let entry = match &out {
            Outcome::Certified(cert) => Some(Memo::Certified(cert.clone())),
            Outcome::Refuted => Some(Memo::Refuted),
            // a global shortage says nothing about this class
            Outcome::Unknown(reason) => {
                self.out_of_resources().is_none().then_some(Memo::Unknown { tier, reason: *reason })
            }
        };
        if let Some(entry) = entry {
            self.memo.insert((class, root.clone()), entry);
        }
        out
    }

    fn search_class(&mut self, root: &Quiver, class: ClassId, tier: usize) -> Outcome {
        if let Some(cert) = base_certificate(root, class) {
            return Outcome::Certified(cert);
        }
        let mut unknown = None;
        match self.try_splits(root, class, tier) {
            Outcome::Certified(cert) => return Outcome::Certified(cert),
            Outcome::Refuted => {}
            Outcome::Unknown(reason) => {
                unknown = Some(reason);
                if let Some(reason) = self.out_of_resources() {
                    return Outcome::Unknown(reason);
                }
            }
        }

        let limits =
            PassLimits { max_nodes: tier, max_depth: self.budget.max_depth, max_entry: self.budget.max_abs_entry };
        let mut hit = None;
        let ex = explore_pass(root, limits, &mut self.meter, &mut |ex, idx| {
            let found = base_certificate(&ex.representatives[idx], class).is_some();
            if found {
                hit = Some(idx);
            }
            found
        });
        self.record_links(root, &ex);
        if let Some(idx) = hit {
            let cert = base_certificate(&ex.representatives[idx], class).expect("visitor saw a base case");
            return Outcome::Certified(lift(&ex, idx, cert));
        }

        for idx in 1..ex.len() {
            match self.try_splits(&ex.representatives[idx], class, tier) {
                Outcome::Certified(cert) => return Outcome::Certified(lift(&ex, idx, cert)),
                Outcome::Refuted => {}
                Outcome::Unknown(reason) => {
                    unknown.get_or_insert(reason);
                    if let Some(reason) = self.out_of_resources() {
                        return Outcome::Unknown(reason);
                    }
                }
            }
        }
        match (ex.truncation_reason, unknown) {
            (None, None) => Outcome::Refuted,
            (Some(reason), _) | (None, Some(reason)) => Outcome::Unknown(reason),
        }
    }

    fn record_links(&mut self, root: &Quiver, ex: &ClassExploration) {
        for idx in 1..ex.len() {
            let rep = &ex.representatives[idx];
            if self.roots.contains(rep) || self.links.contains_key(rep) {
                continue;
            }
            let (path, relabel) = ex.path_to(idx);
            self.links.insert(rep.clone(), Link { root: root.clone(), path, relabel });
        }
    }

    /// `Refuted` means every split has a refuted child (vacuously so when
    /// there are no splits).
    fn try_splits(&mut self, q: &Quiver, class: ClassId, tier: usize) -> Outcome {
        let third = class.needs_third_child();
        let mut unknown = None;
        for split in splits(q, class) {
            let removed = split.removed_sets(third);
            let mut certs: Vec<Option<Certificate>> = alloc::vec![None; removed.len()];
            let mut refuted = false;
            // smallest child first: it is the cheapest to refute
            for pos in (0..removed.len()).rev() {
                let (child, _) = q.delete(removed[pos]);
                match self.solve(&child, class, tier) {
                    Outcome::Certified(cert) => certs[pos] = Some(cert),
                    Outcome::Refuted => {
                        refuted = true;
                        break;
                    }
                    Outcome::Unknown(reason) => {
                        unknown.get_or_insert(reason);
                        if let Some(reason) = self.out_of_resources() {
                            return Outcome::Unknown(reason);
                        }
                    }
                }
            }
            if refuted {
                continue;
            }
            if certs.iter().all(Option::is_some) {
                let certs = certs.into_iter().map(|c| c.expect("all present")).collect();
                return Outcome::Certified(split.assemble(q, &removed, certs));
            }
        }
        match unknown {
            None => Outcome::Refuted,
            Some(reason) => Outcome::Unknown(reason),
        }
    }
}

/// Certificate for the exploration root from one for representative `idx`.
fn lift(ex: &ClassExploration, idx: usize, cert: Certificate) -> Certificate {
    let (path, relabel) = ex.path_to(idx);
    Certificate::mutated(path, cert.relabel(&relabel.inverse()))
}
