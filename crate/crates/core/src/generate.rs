//! Seeded quiver generators and a few named quivers.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canonical::canonical_form;
use crate::quiver::Quiver;
use crate::vertex::{Permutation, VertexId};

/// Uniform entries in `-max_mult..=max_mult` above the diagonal.
pub fn random_quiver(n: usize, max_mult: u32, seed: u64) -> Quiver {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_quiver_with(&mut rng, n, max_mult)
}

pub fn random_quiver_with<R: Rng>(rng: &mut R, n: usize, max_mult: u32) -> Quiver {
    let bound = i64::from(max_mult);
    let mut b = vec![0i64; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let x = rng.gen_range(-bound..=bound);
            b[i * n + j] = x;
            b[j * n + i] = -x;
        }
    }
    Quiver::from_matrix(n, b).expect("generated matrix is skew-symmetric")
}

/// An acyclic quiver whose arrows all follow a random hidden vertex order.
pub fn random_acyclic_quiver(n: usize, max_mult: u32, seed: u64) -> Quiver {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_acyclic_quiver_with(&mut rng, n, max_mult)
}

pub fn random_acyclic_quiver_with<R: Rng>(rng: &mut R, n: usize, max_mult: u32) -> Quiver {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut b = vec![0i64; n * n];
    for a in 0..n {
        for c in a + 1..n {
            let m = rng.gen_range(0..=i64::from(max_mult));
            let (i, j) = (order[a], order[c]);
            b[i * n + j] = m;
            b[j * n + i] = -m;
        }
    }
    Quiver::from_matrix(n, b).expect("generated matrix is skew-symmetric")
}

pub fn random_permutation_with<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut image: Vec<VertexId> = (0..n).map(VertexId::from_index).collect();
    image.shuffle(rng);
    Permutation::from_images(image).expect("shuffle is a bijection")
}

/// One canonical representative of every quiver on `n` vertices with
/// multiplicities at most `max_mult`, in increasing matrix order.
pub fn all_quivers_up_to_iso(n: usize, max_mult: u32) -> Vec<Quiver> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let bound = i64::from(max_mult);
    let mut digits = vec![-bound; pairs.len()];
    let mut seen = BTreeSet::new();
    loop {
        let mut b = vec![0i64; n * n];
        for (&(i, j), &x) in pairs.iter().zip(&digits) {
            b[i * n + j] = x;
            b[j * n + i] = -x;
        }
        let q = Quiver::from_matrix(n, b).expect("skew-symmetric by construction");
        seen.insert(canonical_form(&q).0);

        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return seen.into_iter().collect();
            }
            if digits[pos] < bound {
                digits[pos] += 1;
                break;
            }
            digits[pos] = -bound;
            pos += 1;
        }
    }
}

fn build(n: usize, arrows: &[(u32, u32, i64)]) -> Quiver {
    Quiver::from_arrows(n, arrows.iter().map(|&(s, d, m)| (VertexId::new(s), VertexId::new(d), m)))
        .expect("named quiver is valid")
}

/// The six-vertex Louise quiver whose `{1,2,3,4}` subquiver has a mutation
/// class of one isomorphism type; `(6,5)` is its only covering pair.
pub fn six_vertex_louise_quiver() -> Quiver {
    build(6, &[(1, 2, 2), (2, 3, 1), (2, 4, 1), (3, 1, 1), (3, 4, 1), (4, 1, 1), (4, 5, 1), (5, 3, 1), (6, 5, 1)])
}

/// Oriented 3-cycle with every multiplicity 2.
pub fn markov_quiver() -> Quiver {
    build(3, &[(1, 2, 2), (2, 3, 2), (3, 1, 2)])
}

/// `1 -> 2 -> ... -> n`.
pub fn path_quiver(n: usize) -> Quiver {
    let arrows: Vec<_> = (1..n as u32).map(|i| (i, i + 1, 1)).collect();
    build(n, &arrows)
}

/// `1 -> 2 -> ... -> n -> 1`.
pub fn cycle_quiver(n: usize) -> Quiver {
    let mut arrows: Vec<_> = (1..n as u32).map(|i| (i, i + 1, 1)).collect();
    arrows.push((n as u32, 1, 1));
    build(n, &arrows)
}
