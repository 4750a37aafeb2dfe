//! Exact partition functions of symmetric rational matrices.
//!
//! For a symmetric matrix `A` with rational entries, the partition function
//! `Z_A(G)` of a multigraph `G` sums, over all spin assignments of the
//! vertices, the product of edge weights `A[spin(u)][spin(v)]`. This crate
//! decides for any such matrix whether `Z_A` is polynomial-time computable or
//! #P-hard, and for the tractable matrices evaluates `Z_A(G)` exactly.
//!
//! Module map:
//! - [`core_model`]: rationals, multigraphs, weight matrices, graph transforms
//!   and the text formats used by the CLI.
//! - [`oracle`]: exponential-time brute-force evaluators used as ground truth
//!   by every test suite.
//! - [`gf2`]: GF(2) polynomials, subspaces and the degree-2 solution counter
//!   that powers tractable evaluation.
//! - [`structure`]: matrix components, twin reductions and the canonical
//!   `v·wᵀ ⊗ H` decomposition of a connected component.
//! - [`hadamard`]: group condition, tensor peeling and the polynomial
//!   representation of Hadamard sign patterns.
//! - [`classify`]: the decision algorithm; matrix in, verdict out.
//! - [`evaluate`]: polynomial-time exact evaluation driven by a tractability
//!   witness.
//! - [`selftest`]: the acceptance corpus, shared by `cargo test` and the CLI.

// Index loops that walk two structures in lockstep read better than zipped
// iterator chains in the dense linear-algebra code, and the witness variants
// intentionally share one enum despite their size spread.
#![allow(clippy::needless_range_loop, clippy::large_enum_variant)]

pub mod core_model;
pub mod oracle;
pub mod gf2;
pub mod structure;
pub mod hadamard;
pub mod classify;
pub mod evaluate;
pub mod selftest;

pub use core_model::{
    DiagMatrix, LabelledGraph, Multigraph, PdpfInstance, Rational, SymMatrix,
};
pub use classify::{classify, ComponentWitness, TractabilityWitness, Verdict};
pub use evaluate::eval_tractable;
pub use structure::{HardEvidence, HardReason};
