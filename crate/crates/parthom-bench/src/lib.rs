//! Shared fixtures for the pipeline benchmarks.

use parthom::core_model::{Multigraph, SymMatrix};

/// Order-4 symmetric Hadamard matrix with positive diagonal.
pub fn h4() -> SymMatrix {
    SymMatrix::from_int_rows(&[
        &[1, 1, 1, 1],
        &[1, 1, -1, -1],
        &[1, -1, 1, -1],
        &[1, -1, -1, 1],
    ])
}

/// `h4() ⊗ h4() ⊗ h4()`: a tractable order-64 matrix that exercises the
/// full canonicalization and peeling pipeline.
pub fn h4_cubed() -> SymMatrix {
    let h = h4();
    h.tensor(&h).tensor(&h)
}

/// Deterministic pseudo-random multigraph on `n` vertices with roughly
/// `edges` edges, built from a fixed linear-congruential stream so benches
/// are reproducible without pulling in an RNG crate here.
pub fn scrambled_graph(n: usize, edges: usize) -> Multigraph {
    let mut g = Multigraph::new(n);
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as usize
    };
    for _ in 0..edges {
        let u = next() % n;
        let v = next() % n;
        g.add_edge(u, v, 1 + (next() % 2) as u64);
    }
    g
}
