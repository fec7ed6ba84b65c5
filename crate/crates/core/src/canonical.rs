//! Canonical labelling of quivers.
//!
//! Vertices are first coloured by iterated degree refinement: a vertex's
//! initial colour is the sorted list of its nonzero matrix row entries, and
//! each round appends the sorted list of `(neighbour colour, entry)` pairs.
//! Colour classes are ranked by their signatures, which makes the ranking
//! isomorphism invariant. Positions are then filled class by class, and among
//! all labellings that respect the class order we keep the one whose matrix is
//! lexicographically smallest in column order of the upper triangle:
//! `b[1][2], b[1][3], b[2][3], b[1][4], ...`. That order lets a partial
//! labelling be compared against the best one found so far, so most branches
//! die early. Interchangeable twin vertices are only branched on once.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::quiver::Quiver;
use crate::vertex::{Permutation, VertexId};

/// The canonical relabelling `σ·Q` of `q` together with `σ`.
///
/// Two quivers are isomorphic exactly when their canonical quivers are equal.
pub fn canonical_form(q: &Quiver) -> (Quiver, Permutation) {
    let n = q.vertex_count();
    if n <= 1 {
        return (q.clone(), Permutation::identity(n));
    }
    let colors = refine_colors(q);
    let mut cells: Vec<usize> = colors.clone();
    cells.sort_unstable();

    let mut search = Search {
        q,
        n,
        colors: &colors,
        cells: &cells,
        twins: twin_table(q),
        order: Vec::with_capacity(n),
        used: vec![false; n],
        key: Vec::with_capacity(n * (n - 1) / 2),
        best_key: Vec::new(),
        best_order: Vec::new(),
        updates: 0,
    };
    search.run(0, true);

    let mut image = vec![VertexId::new(0); n];
    for (pos, &vertex) in search.best_order.iter().enumerate() {
        image[vertex] = VertexId::from_index(pos);
    }
    let sigma = Permutation::from_images(image).expect("search visits every vertex once");
    let canon = q.permute(&sigma).expect("permutation has the right size");
    (canon, sigma)
}

/// Just the canonical quiver.
pub fn canonical_quiver(q: &Quiver) -> Quiver {
    canonical_form(q).0
}

/// `Some(σ)` with `σ·q = r` when the two quivers are isomorphic.
pub fn is_isomorphic(q: &Quiver, r: &Quiver) -> Option<Permutation> {
    if q.vertex_count() != r.vertex_count() {
        return None;
    }
    let (cq, sq) = canonical_form(q);
    let (cr, sr) = canonical_form(r);
    (cq == cr).then(|| sr.inverse().after(&sq))
}

fn refine_colors(q: &Quiver) -> Vec<usize> {
    let n = q.vertex_count();
    let initial: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut row: Vec<i64> = (0..n).map(|j| q.at(i, j)).filter(|&x| x != 0).collect();
            row.sort_unstable();
            row
        })
        .collect();
    let mut colors = rank(&initial);
    let mut classes = count_classes(&colors);
    loop {
        let signatures: Vec<(usize, Vec<(usize, i64)>)> = (0..n)
            .map(|i| {
                let mut nbrs: Vec<(usize, i64)> =
                    (0..n).filter(|&j| q.at(i, j) != 0).map(|j| (colors[j], q.at(i, j))).collect();
                nbrs.sort_unstable();
                (colors[i], nbrs)
            })
            .collect();
        let next = rank(&signatures);
        let next_classes = count_classes(&next);
        if next_classes == classes {
            return colors;
        }
        colors = next;
        classes = next_classes;
    }
}

fn rank<T: Ord + Clone>(signatures: &[T]) -> Vec<usize> {
    let mut ranks: BTreeMap<T, usize> = signatures.iter().cloned().map(|s| (s, 0)).collect();
    for (i, r) in ranks.values_mut().enumerate() {
        *r = i;
    }
    signatures.iter().map(|s| ranks[s]).collect()
}

fn count_classes(colors: &[usize]) -> usize {
    colors.iter().copied().max().map_or(0, |m| m + 1)
}

/// `twins[u * n + v]`: swapping `u` and `v` is an automorphism.
fn twin_table(q: &Quiver) -> Vec<bool> {
    let n = q.vertex_count();
    let mut twins = vec![false; n * n];
    for u in 0..n {
        for v in u + 1..n {
            let same = q.at(u, v) == 0 && (0..n).all(|w| w == u || w == v || q.at(u, w) == q.at(v, w));
            twins[u * n + v] = same;
            twins[v * n + u] = same;
        }
    }
    twins
}

struct Search<'a> {
    q: &'a Quiver,
    n: usize,
    colors: &'a [usize],
    /// colour required at each position
    cells: &'a [usize],
    twins: Vec<bool>,
    order: Vec<usize>,
    used: Vec<bool>,
    key: Vec<i64>,
    best_key: Vec<i64>,
    best_order: Vec<usize>,
    updates: usize,
}

impl Search<'_> {
    /// `below`: the current prefix is already smaller than the best one (or
    /// there is no best yet).
    fn run(&mut self, pos: usize, mut below: bool) {
        let mut tried: Vec<usize> = Vec::new();
        for c in 0..self.n {
            if self.used[c] || self.colors[c] != self.cells[pos] {
                continue;
            }
            if tried.iter().any(|&t| self.twins[t * self.n + c]) {
                continue;
            }
            tried.push(c);

            let start = self.key.len();
            for &prev in &self.order {
                self.key.push(self.q.at(prev, c));
            }
            let child_below = below
                || match self.key[start..].cmp(&self.best_key[start..self.key.len()]) {
                    Ordering::Greater => {
                        self.key.truncate(start);
                        continue;
                    }
                    Ordering::Less => true,
                    Ordering::Equal => false,
                };

            self.order.push(c);
            self.used[c] = true;
            if pos + 1 == self.n {
                if child_below {
                    self.best_key.clone_from(&self.key);
                    self.best_order.clone_from(&self.order);
                    self.updates += 1;
                    below = false;
                }
            } else {
                let before = self.updates;
                self.run(pos + 1, child_below);
                if self.updates != before {
                    // the new best extends the current prefix
                    below = false;
                }
            }
            self.used[c] = false;
            self.order.pop();
            self.key.truncate(start);
        }
    }
}
