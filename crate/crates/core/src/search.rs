//! Bounded exploration of mutation classes up to isomorphism.
//!
//! Mutation classes are usually infinite, so every search runs under a
//! [`SearchBudget`] and reports a three-valued [`Verdict`]: a checked witness,
//! a refutation backed by a closed exploration, or `Unknown` with the cap that
//! stopped it.
//!
//! Exploration is a breadth-first search over canonical forms. Each
//! representative remembers the representative it was first reached from, the
//! vertex mutated, and a relabelling `ρ` with `ρ·(labelled quiver) = rep`, so
//! witnesses are rebuilt from parent links in the labels of the starting
//! quiver.

use alloc::collections::BTreeMap;
use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::canonical::canonical_form;
use crate::error::{Error, Result};
use crate::quiver::Quiver;
use crate::vertex::{MutationSequence, Permutation, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(default))]
pub struct SearchBudget {
    /// Representatives per exploration; also the total across a certificate search.
    pub max_iso_classes: usize,
    pub max_depth: usize,
    /// Largest `|b[i][j]|` a discovered quiver may have.
    pub max_abs_entry: u64,
    /// Wall-clock cap, 0 for none. Needs the `std` feature.
    pub max_millis: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_iso_classes: 50_000, max_depth: 64, max_abs_entry: 12, max_millis: 0 }
    }
}

impl SearchBudget {
    pub fn validate(&self) -> Result<()> {
        if self.max_iso_classes == 0 {
            return Err(Error::BadBudget("max_iso_classes must be at least 1"));
        }
        if self.max_depth == 0 {
            return Err(Error::BadBudget("max_depth must be at least 1"));
        }
        if self.max_abs_entry == 0 {
            return Err(Error::BadBudget("max_abs_entry must be at least 1"));
        }
        Ok(())
    }

    /// Every count field multiplied by `factor`.
    pub fn scaled(&self, factor: usize) -> Self {
        SearchBudget {
            max_iso_classes: self.max_iso_classes.saturating_mul(factor),
            max_depth: self.max_depth.saturating_mul(factor),
            max_abs_entry: self.max_abs_entry.saturating_mul(factor as u64),
            max_millis: self.max_millis.saturating_mul(factor as u64),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum Truncation {
    EntryCap,
    NodeCap,
    DepthCap,
    TimeCap,
}

/// Outcome of a budgeted semi-decision.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "verdict", rename_all = "snake_case")
)]
pub enum Verdict<T> {
    Certified {
        witness: T,
    },
    /// Only produced when the whole mutation class was explored.
    RefutedExhaustive,
    Unknown {
        reason: Truncation,
    },
}

impl<T> Verdict<T> {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::RefutedExhaustive)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    pub fn witness(&self) -> Option<&T> {
        match self {
            Verdict::Certified { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn into_witness(self) -> Option<T> {
        match self {
            Verdict::Certified { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Verdict<U> {
        match self {
            Verdict::Certified { witness } => Verdict::Certified { witness: f(witness) },
            Verdict::RefutedExhaustive => Verdict::RefutedExhaustive,
            Verdict::Unknown { reason } => Verdict::Unknown { reason },
        }
    }
}

/// Wall-clock deadline. Without the `std` feature it never expires.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Deadline {
    #[cfg(feature = "std")]
    at: Option<std::time::Instant>,
}

impl Deadline {
    pub(crate) fn after_millis(millis: u64) -> Self {
        #[cfg(feature = "std")]
        {
            let at = (millis > 0).then(|| std::time::Instant::now() + core::time::Duration::from_millis(millis));
            Deadline { at }
        }
        #[cfg(not(feature = "std"))]
        {
            let _ = millis;
            Deadline {}
        }
    }

    pub(crate) fn expired(&self) -> bool {
        #[cfg(feature = "std")]
        {
            self.at.is_some_and(|at| std::time::Instant::now() >= at)
        }
        #[cfg(not(feature = "std"))]
        {
            false
        }
    }
}

/// Shared resource pool: total representatives left and the deadline.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Meter {
    pub(crate) nodes_left: usize,
    pub(crate) deadline: Deadline,
}

impl Meter {
    pub(crate) fn new(budget: &SearchBudget) -> Self {
        Meter { nodes_left: budget.max_iso_classes, deadline: Deadline::after_millis(budget.max_millis) }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PassLimits {
    pub(crate) max_nodes: usize,
    pub(crate) max_depth: usize,
    pub(crate) max_entry: u64,
}

#[derive(Debug, Clone)]
struct Link {
    /// `usize::MAX` for the root
    parent: usize,
    /// vertex of the parent representative that was mutated
    vertex: VertexId,
    /// `relabel·(labelled quiver) = representative`
    relabel: Permutation,
    depth: usize,
}

/// Result of one breadth-first pass over a mutation class.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClassExploration {
    /// Canonical quivers, pairwise non-isomorphic, in discovery order.
    pub representatives: Vec<Quiver>,
    /// `(p, k, c)`: mutating representative `p` at `k` gives representative `c` up to isomorphism.
    pub edges: Vec<(usize, VertexId, usize)>,
    /// Every mutation of every representative stays inside the list.
    pub exhausted: bool,
    pub truncation_reason: Option<Truncation>,
    #[cfg_attr(feature = "serde", serde(skip))]
    links: Vec<Link>,
    #[cfg_attr(feature = "serde", serde(skip))]
    smallest_pruned_entry: Option<u64>,
}

impl ClassExploration {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn depth(&self, idx: usize) -> usize {
        self.links[idx].depth
    }

    /// A mutation sequence `w` (in the starting quiver's labels) and the
    /// relabelling `ρ` with `ρ·μ_w(Q) = representatives[idx]`.
    pub fn path_to(&self, idx: usize) -> (MutationSequence, Permutation) {
        let mut chain = Vec::new();
        let mut at = idx;
        while self.links[at].parent != usize::MAX {
            chain.push(at);
            at = self.links[at].parent;
        }
        let mut steps = MutationSequence::new();
        for &node in chain.iter().rev() {
            let link = &self.links[node];
            let parent_relabel = &self.links[link.parent].relabel;
            steps.push(parent_relabel.inverse().apply(link.vertex));
        }
        (steps, self.links[idx].relabel.clone())
    }

    /// `μ_w(Q)` for the `w` of [`ClassExploration::path_to`].
    pub fn labeled(&self, idx: usize) -> Quiver {
        self.representatives[idx]
            .permute(&self.links[idx].relabel.inverse())
            .expect("relabelling matches the quiver size")
    }
}

enum Step {
    Continue,
    Stop,
}

/// One BFS pass. `visit` sees every representative as it is discovered and
/// may stop the pass.
pub(crate) fn explore_pass(
    q: &Quiver,
    limits: PassLimits,
    meter: &mut Meter,
    visit: &mut dyn FnMut(&ClassExploration, usize) -> bool,
) -> ClassExploration {
    let mut ex = ClassExploration {
        representatives: Vec::new(),
        edges: Vec::new(),
        exhausted: false,
        truncation_reason: None,
        links: Vec::new(),
        smallest_pruned_entry: None,
    };
    let mut index: BTreeMap<Quiver, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let (mut depth_pruned, mut stopped) = (false, None);

    let mut discover = |ex: &mut ClassExploration,
                        index: &mut BTreeMap<Quiver, usize>,
                        meter: &mut Meter,
                        rep: Quiver,
                        link: Link|
     -> core::result::Result<(usize, Step), Truncation> {
        if ex.representatives.len() >= limits.max_nodes || meter.nodes_left == 0 {
            return Err(Truncation::NodeCap);
        }
        meter.nodes_left -= 1;
        let idx = ex.representatives.len();
        index.insert(rep.clone(), idx);
        ex.representatives.push(rep);
        ex.links.push(link);
        let step = if visit(ex, idx) { Step::Stop } else { Step::Continue };
        Ok((idx, step))
    };

    let (root, root_relabel) = canonical_form(q);
    let root_link = Link { parent: usize::MAX, vertex: VertexId::new(0), relabel: root_relabel, depth: 0 };
    match discover(&mut ex, &mut index, meter, root, root_link) {
        Err(reason) => {
            ex.truncation_reason = Some(reason);
            return ex;
        }
        Ok((_, Step::Stop)) => return ex,
        Ok((idx, Step::Continue)) => queue.push_back(idx),
    }

    'bfs: while let Some(p) = queue.pop_front() {
        if meter.deadline.expired() {
            stopped = Some(Truncation::TimeCap);
            break;
        }
        let rep = ex.representatives[p].clone();
        let depth = ex.links[p].depth;
        for k in rep.vertices().iter() {
            let child = match rep.mutate(k) {
                Ok(c) => c,
                Err(_) => {
                    // overflow: beyond every cap
                    ex.smallest_pruned_entry = Some(ex.smallest_pruned_entry.unwrap_or(u64::MAX));
                    continue;
                }
            };
            let entry = child.max_abs_entry();
            if entry > limits.max_entry {
                ex.smallest_pruned_entry = Some(entry.min(ex.smallest_pruned_entry.unwrap_or(u64::MAX)));
                continue;
            }
            let (canon, pi) = canonical_form(&child);
            if let Some(&c) = index.get(&canon) {
                ex.edges.push((p, k, c));
                continue;
            }
            if depth >= limits.max_depth {
                depth_pruned = true;
                continue;
            }
            let relabel = pi.after(&ex.links[p].relabel);
            let link = Link { parent: p, vertex: k, relabel, depth: depth + 1 };
            match discover(&mut ex, &mut index, meter, canon, link) {
                Err(reason) => {
                    stopped = Some(reason);
                    break 'bfs;
                }
                Ok((c, step)) => {
                    ex.edges.push((p, k, c));
                    if let Step::Stop = step {
                        return ex;
                    }
                    queue.push_back(c);
                }
            }
        }
    }

    ex.truncation_reason = stopped
        .or(depth_pruned.then_some(Truncation::DepthCap))
        .or(ex.smallest_pruned_entry.map(|_| Truncation::EntryCap));
    ex.exhausted = ex.truncation_reason.is_none();
    ex
}

/// Breadth-first exploration of the mutation class of `q` up to isomorphism.
///
/// The starting quiver is always admitted; the entry cap applies to the
/// quivers reached from it.
pub fn explore_class(q: &Quiver, budget: &SearchBudget) -> Result<ClassExploration> {
    budget.validate()?;
    let mut meter = Meter::new(budget);
    let limits =
        PassLimits { max_nodes: budget.max_iso_classes, max_depth: budget.max_depth, max_entry: budget.max_abs_entry };
    Ok(explore_pass(q, limits, &mut meter, &mut |_, _| false))
}

/// Search the mutation class of `q` for a quiver satisfying `predicate`.
///
/// The predicate is evaluated on the quiver as reached from `q` (not on the
/// canonical representative), so a certified witness always replays to a
/// quiver satisfying it. Refutations are only meaningful for predicates that
/// are invariant under relabelling.
///
/// Passes run with entry caps rising from the starting quiver's largest entry
/// up to `max_abs_entry`. Every pass is deterministic and does not depend on
/// the caps above it, so enlarging a budget field never turns a certified or
/// refuted verdict into `Unknown`.
pub fn find_matching(
    q: &Quiver,
    predicate: impl Fn(&Quiver) -> bool,
    budget: &SearchBudget,
) -> Result<Verdict<MutationSequence>> {
    budget.validate()?;
    let deadline = Deadline::after_millis(budget.max_millis);
    let mut entry_cap = q.max_abs_entry().clamp(1, budget.max_abs_entry);
    loop {
        let mut meter = Meter { nodes_left: budget.max_iso_classes, deadline };
        let limits =
            PassLimits { max_nodes: budget.max_iso_classes, max_depth: budget.max_depth, max_entry: entry_cap };
        let mut hit = None;
        let ex = explore_pass(q, limits, &mut meter, &mut |ex, idx| {
            let found = predicate(&ex.labeled(idx));
            if found {
                hit = Some(idx);
            }
            found
        });
        if let Some(idx) = hit {
            return Ok(Verdict::Certified { witness: ex.path_to(idx).0 });
        }
        let reason = match ex.truncation_reason {
            None => return Ok(Verdict::RefutedExhaustive),
            Some(reason) => reason,
        };
        let next = match ex.smallest_pruned_entry {
            // passes with caps below the smallest pruned entry repeat this one
            Some(pruned) if entry_cap < budget.max_abs_entry && reason != Truncation::TimeCap => {
                pruned.clamp(entry_cap + 1, budget.max_abs_entry)
            }
            _ => return Ok(Verdict::Unknown { reason }),
        };
        entry_cap = next;
    }
}

/// Whether some quiver mutation-equivalent to `q` is acyclic.
pub fn is_mutation_acyclic(q: &Quiver, budget: &SearchBudget) -> Result<Verdict<MutationSequence>> {
    find_matching(q, crate::analysis::is_acyclic, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::is_acyclic;
    use crate::canonical::canonical_quiver;
    use crate::generate::{cycle_quiver, markov_quiver, path_quiver, random_quiver, six_vertex_louise_quiver};
    use crate::vertex::VertexSet;

    fn v(i: u32) -> VertexId {
        VertexId::new(i)
    }

    fn four_vertex_core() -> Quiver {
        six_vertex_louise_quiver().induced_subquiver([1, 2, 3, 4].into_iter().map(v).collect::<VertexSet>()).unwrap().0
    }

    #[test]
    fn one_vertex_class() {
        let ex = explore_class(&Quiver::arrowless(1), &SearchBudget::default()).unwrap();
        assert_eq!(ex.len(), 1);
        assert!(ex.exhausted);
    }

    #[test]
    fn four_vertex_core_class_is_a_single_isomorphism_type() {
        for cap in [2, 3, 12] {
            let budget = SearchBudget { max_abs_entry: cap, ..SearchBudget::default() };
            let ex = explore_class(&four_vertex_core(), &budget).unwrap();
            assert_eq!(ex.len(), 1);
            assert!(ex.exhausted);
            assert_eq!(ex.edges.len(), 4);
        }
    }

    #[test]
    fn markov_class_is_a_single_isomorphism_type() {
        let ex = explore_class(&markov_quiver(), &SearchBudget::default()).unwrap();
        assert_eq!(ex.len(), 1);
        assert!(ex.exhausted);
    }

    #[test]
    fn a2_class_and_a3_class() {
        // type A_3: orientations of the path plus the oriented 3-cycle, up to isomorphism
        let ex = explore_class(&path_quiver(3), &SearchBudget::default()).unwrap();
        assert!(ex.exhausted);
        assert_eq!(ex.len(), 4);
    }

    #[test]
    fn edges_are_mutations() {
        let ex = explore_class(&random_quiver(4, 1, 7), &SearchBudget { max_iso_classes: 200, ..Default::default() })
            .unwrap();
        for &(p, k, c) in &ex.edges {
            assert_eq!(canonical_quiver(&ex.representatives[p].mutate(k).unwrap()), ex.representatives[c]);
        }
    }

    #[test]
    fn paths_replay_to_representatives() {
        let q = random_quiver(4, 1, 3);
        let ex = explore_class(&q, &SearchBudget { max_iso_classes: 300, ..Default::default() }).unwrap();
        for idx in 0..ex.len() {
            let (w, rho) = ex.path_to(idx);
            let reached = q.apply_sequence(&w).unwrap();
            assert_eq!(reached.permute(&rho).unwrap(), ex.representatives[idx]);
            assert_eq!(reached, ex.labeled(idx));
            assert_eq!(w.len(), ex.depth(idx));
        }
    }

    #[test]
    fn caps_truncate() {
        let q = random_quiver(5, 2, 11);
        let ex = explore_class(&q, &SearchBudget { max_iso_classes: 3, ..Default::default() }).unwrap();
        assert_eq!(ex.len(), 3);
        assert_eq!(ex.truncation_reason, Some(Truncation::NodeCap));
        assert!(!ex.exhausted);
        // the root is admitted even above the cap, its mutations are not
        let ex = explore_class(&markov_quiver(), &SearchBudget { max_abs_entry: 1, ..Default::default() }).unwrap();
        assert_eq!(ex.len(), 1);
        assert_eq!(ex.truncation_reason, Some(Truncation::EntryCap));
        let ex = explore_class(&cycle_quiver(4), &SearchBudget { max_depth: 1, ..Default::default() }).unwrap();
        assert_eq!(ex.truncation_reason, Some(Truncation::DepthCap));
    }

    #[test]
    fn mutation_acyclic_verdicts() {
        let budget = SearchBudget::default();
        let c3 = is_mutation_acyclic(&cycle_quiver(3), &budget).unwrap();
        let w = c3.witness().unwrap();
        assert_eq!(w.len(), 1);
        assert!(is_acyclic(&cycle_quiver(3).apply_sequence(w).unwrap()));
        assert_eq!(
            is_mutation_acyclic(&path_quiver(3), &budget).unwrap(),
            Verdict::Certified { witness: MutationSequence::new() }
        );
        assert_eq!(is_mutation_acyclic(&markov_quiver(), &budget).unwrap(), Verdict::RefutedExhaustive);
    }

    #[test]
    fn matching_other_predicates() {
        let budget = SearchBudget::default();
        let has_source = |q: &Quiver| !q.sources().is_empty();
        assert!(find_matching(&cycle_quiver(3), has_source, &budget).unwrap().is_certified());
        assert_eq!(find_matching(&markov_quiver(), |_| false, &budget).unwrap(), Verdict::RefutedExhaustive);
    }

    #[test]
    fn bad_budgets_are_rejected() {
        let bad = SearchBudget { max_depth: 0, ..Default::default() };
        assert!(explore_class(&path_quiver(2), &bad).is_err());
        assert!(is_mutation_acyclic(&path_quiver(2), &bad).is_err());
    }

    #[test]
    fn exhausted_classes_are_stable_under_doubling() {
        for s in 0..40 {
            let q = random_quiver(3, 2, s);
            let budget = SearchBudget { max_iso_classes: 500, max_abs_entry: 6, ..Default::default() };
            let ex = explore_class(&q, &budget).unwrap();
            if ex.exhausted {
                let again = explore_class(&q, &budget.scaled(2)).unwrap();
                assert_eq!(again.representatives, ex.representatives);
            }
        }
    }
}
