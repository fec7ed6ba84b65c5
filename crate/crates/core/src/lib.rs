//! Quiver mutation combinatorics.
//!
//! A quiver is a finite directed multigraph without loops or oriented
//! 2-cycles; it is stored here as its skew-symmetric exchange matrix. On top
//! of that representation the crate provides:
//!
//! - [`quiver`]: construction, matrix and graphical mutation, induced
//!   subquivers, sources and sinks.
//! - [`canonical`]: canonical labelling and isomorphism witnesses.
//! - [`analysis`]: acyclic orderings, source/sink mutation sequences, covering
//!   pairs, triangular splits, and covering-pair normalization.
//! - [`search`]: budgeted breadth-first exploration of mutation classes up to
//!   isomorphism with three-valued verdicts.
//! - [`membership`]: certificate trees for the Banff, Louise, B', L' and P'
//!   classes, a checker, a certificate search, and the constructive
//!   transformations between classes.
//!
//! The crate is `no_std` (it needs `alloc`). The default `std` feature only
//! adds wall-clock deadlines to searches.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod analysis;
pub mod canonical;
mod error;
pub mod generate;
pub mod membership;
pub mod quiver;
pub mod search;
mod vertex;

pub use error::{Error, Result};
pub use quiver::Quiver;
pub use vertex::{LabelMap, MutationSequence, Permutation, VertexId, VertexSet, MAX_VERTICES};
