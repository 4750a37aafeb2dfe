//! Exponential-time ground-truth evaluators.
//!
//! Everything here enumerates all `m^|V|` spin configurations and is guarded
//! against accidental blow-up. These functions are the reference values every
//! transform and every polynomial-time evaluator is tested against; they are
//! deliberately simple and never take shortcuts.

use num::{One, Zero};
use thiserror::Error;

use crate::core_model::{
    rational_pow, DiagMatrix, LabelledGraph, Multigraph, PdpfInstance, Rational, SymMatrix,
};

/// Default enumeration guard: at most 2^24 configurations.
pub const DEFAULT_GUARD: u128 = 1 << 24;

/// Environment variable overriding the enumeration guard (a configuration
/// count, not a bit width).
pub const GUARD_ENV_VAR: &str = "PARTHOM_ORACLE_GUARD";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration refused: {configurations} configurations exceed guard {guard}")]
    GuardExceeded { configurations: u128, guard: u128 },
    #[error("pinned spin {spin} has zero weight D_{{{spin},{spin}}}")]
    ZeroPinWeight { spin: usize },
}

/// The active guard: `PARTHOM_ORACLE_GUARD` if set and parseable, else
/// [`DEFAULT_GUARD`].
pub fn current_guard() -> u128 {
    std::env::var(GUARD_ENV_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_GUARD)
}

fn configuration_count(m: usize, vertices: usize) -> Option<u128> {
    let mut count: u128 = 1;
    for _ in 0..vertices {
        count = count.checked_mul(m as u128)?;
    }
    Some(count)
}

fn check_guard(m: usize, vertices: usize, guard: u128) -> Result<(), OracleError> {
    match configuration_count(m, vertices) {
        Some(c) if c <= guard => Ok(()),
        Some(c) => Err(OracleError::GuardExceeded {
            configurations: c,
            guard,
        }),
        None => Err(OracleError::GuardExceeded {
            configurations: u128::MAX,
            guard,
        }),
    }
}

/// Advances `xi` as a base-`m` counter; returns false after the last value.
fn next_configuration(xi: &mut [usize], m: usize) -> bool {
    for digit in xi.iter_mut() {
        *digit += 1;
        if *digit < m {
            return true;
        }
        *digit = 0;
    }
    false
}

fn configuration_weight(inst: &PdpfInstance, g: &Multigraph, degrees: &[u64], xi: &[usize]) -> Rational {
    let mut term = Rational::one();
    for ((u, v), k) in g.edges() {
        let entry = inst.a.entry(xi[u], xi[v]);
        if entry.is_zero() {
            return Rational::zero();
        }
        term *= rational_pow(entry, k);
    }
    for (v, &spin) in xi.iter().enumerate() {
        let weight = if degrees[v].is_multiple_of(2) {
            inst.d.entry(spin)
        } else {
            inst.o.entry(spin)
        };
        if weight.is_zero() {
            return Rational::zero();
        }
        term *= weight;
    }
    term
}

/// Exact `Z_{A,D,O}(G)` by full enumeration; empty graph gives 1.
pub fn eval_pdpf_bruteforce(inst: &PdpfInstance, g: &Multigraph) -> Result<Rational, OracleError> {
    eval_pdpf_bruteforce_with_guard(inst, g, current_guard())
}

/// [`eval_pdpf_bruteforce`] with an explicit guard instead of the ambient one.
pub fn eval_pdpf_bruteforce_with_guard(
    inst: &PdpfInstance,
    g: &Multigraph,
    guard: u128,
) -> Result<Rational, OracleError> {
    let m = inst.order();
    let n = g.vertex_count();
    check_guard(m, n, guard)?;
    if m == 0 {
        return Ok(if n == 0 { Rational::one() } else { Rational::zero() });
    }
    let degrees = g.degrees();
    let mut xi = vec![0usize; n];
    let mut total = Rational::zero();
    loop {
        total += configuration_weight(inst, g, &degrees, &xi);
        if !next_configuration(&mut xi, m) {
            break;
        }
    }
    Ok(total)
}

/// Exact `Z_A(G)`: the pdpf with `D = O = I`.
pub fn eval_plain_bruteforce(a: &SymMatrix, g: &Multigraph) -> Result<Rational, OracleError> {
    eval_pdpf_bruteforce(&PdpfInstance::plain(a.clone()), g)
}

/// Exact `Z_{A,D}(G)`: the pdpf with `O = D`.
pub fn eval_vertex_weighted_bruteforce(
    a: &SymMatrix,
    d: &DiagMatrix,
    g: &Multigraph,
) -> Result<Rational, OracleError> {
    eval_pdpf_bruteforce(&PdpfInstance::vertex_weighted(a.clone(), d.clone()), g)
}

/// Exact pinned value `Z_{A,D}(k, G) = (D_{k,k})^{-1} sum over {xi(z) = k}`,
/// prefactor included.
pub fn eval_pinned_bruteforce(
    a: &SymMatrix,
    d: &DiagMatrix,
    lg: &LabelledGraph,
    k: usize,
) -> Result<Rational, OracleError> {
    if d.entry(k).is_zero() {
        return Err(OracleError::ZeroPinWeight { spin: k });
    }
    let m = a.order();
    let g = &lg.graph;
    let n = g.vertex_count();
    check_guard(m, n, current_guard())?;
    let inst = PdpfInstance::vertex_weighted(a.clone(), d.clone());
    let degrees = g.degrees();
    let mut xi = vec![0usize; n];
    xi[lg.z] = k;
    let mut total = Rational::zero();
    loop {
        if xi[lg.z] == k {
            total += configuration_weight(&inst, g, &degrees, &xi);
        }
        if !next_configuration(&mut xi, m) {
            break;
        }
    }
    Ok(total / d.entry(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_model::{rat, ratio};

    fn h2() -> SymMatrix {
        SymMatrix::from_int_rows(&[&[1, 1], &[1, -1]])
    }

    fn u_matrix() -> SymMatrix {
        SymMatrix::from_int_rows(&[&[1, -1], &[-1, 1]])
    }

    fn triangle() -> Multigraph {
        Multigraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)])
    }

    #[test]
    fn h2_single_edge_is_two() {
        let edge = Multigraph::from_edges(2, &[(0, 1)]);
        assert_eq!(eval_plain_bruteforce(&h2(), &edge).unwrap(), rat(2));
    }

    #[test]
    fn eulerian_matrix_values() {
        assert_eq!(eval_plain_bruteforce(&u_matrix(), &triangle()).unwrap(), rat(8));
        let path = Multigraph::from_edges(2, &[(0, 1)]);
        assert_eq!(eval_plain_bruteforce(&u_matrix(), &path).unwrap(), rat(0));
    }

    #[test]
    fn empty_graph_gives_one() {
        let empty = Multigraph::new(0);
        assert_eq!(eval_plain_bruteforce(&h2(), &empty).unwrap(), rat(1));
        let isolated = Multigraph::new(1);
        assert_eq!(eval_plain_bruteforce(&h2(), &isolated).unwrap(), rat(2));
    }

    #[test]
    fn pdpf_distinguishes_parity() {
        // A = [1], D = [1], O = [0]: a single edge has two odd vertices.
        let inst = PdpfInstance::new(
            SymMatrix::from_int_rows(&[&[1]]),
            DiagMatrix::new(vec![rat(1)]),
            DiagMatrix::new(vec![rat(0)]),
        );
        let edge = Multigraph::from_edges(2, &[(0, 1)]);
        assert_eq!(eval_pdpf_bruteforce(&inst, &edge).unwrap(), rat(0));
        assert_eq!(eval_pdpf_bruteforce(&inst, &triangle()).unwrap(), rat(1));
    }

    #[test]
    fn rational_entries_stay_exact() {
        let a = SymMatrix::from_rows(vec![
            vec![ratio(1, 2), ratio(1, 3)],
            vec![ratio(1, 3), ratio(1, 2)],
        ])
        .unwrap();
        let edge = Multigraph::from_edges(2, &[(0, 1)]);
        // 1/2 + 1/3 + 1/3 + 1/2 = 5/3.
        assert_eq!(eval_plain_bruteforce(&a, &edge).unwrap(), ratio(5, 3));
    }

    #[test]
    fn pinned_values_match_examples() {
        let d = DiagMatrix::identity(2);
        let isolated = LabelledGraph::new(Multigraph::new(1), 0);
        assert_eq!(eval_pinned_bruteforce(&h2(), &d, &isolated, 0).unwrap(), rat(1));

        let edge = LabelledGraph::new(Multigraph::from_edges(2, &[(0, 1)]), 0);
        assert_eq!(eval_pinned_bruteforce(&h2(), &d, &edge, 0).unwrap(), rat(2));
        assert_eq!(eval_pinned_bruteforce(&h2(), &d, &edge, 1).unwrap(), rat(0));
    }

    #[test]
    fn pinned_decomposition_sums_to_z() {
        let a = SymMatrix::from_int_rows(&[&[1, 2], &[2, -1]]);
        let d = DiagMatrix::new(vec![rat(2), rat(3)]);
        let g = triangle();
        let total = eval_vertex_weighted_bruteforce(&a, &d, &g).unwrap();
        let lg = LabelledGraph::new(g, 0);
        let mut sum = rat(0);
        for k in 0..2 {
            sum += eval_pinned_bruteforce(&a, &d, &lg, k).unwrap() * d.entry(k);
        }
        assert_eq!(sum, total);
    }

    #[test]
    fn zero_pin_weight_is_an_error() {
        let d = DiagMatrix::new(vec![rat(1), rat(0)]);
        let lg = LabelledGraph::new(Multigraph::new(1), 0);
        assert_eq!(
            eval_pinned_bruteforce(&h2(), &d, &lg, 1),
            Err(OracleError::ZeroPinWeight { spin: 1 })
        );
    }

    #[test]
    fn guard_refuses_large_enumeration() {
        let g = Multigraph::new(30);
        let err = eval_pdpf_bruteforce_with_guard(&PdpfInstance::plain(h2()), &g, 1 << 24);
        assert!(matches!(err, Err(OracleError::GuardExceeded { .. })));
    }

    #[test]
    fn component_multiplicativity() {
        // Z_A(G) for disconnected G is the product over graph components of
        // the sum over matrix components.
        let a = SymMatrix::from_int_rows(&[&[2, 0], &[0, 3]]);
        let g = Multigraph::from_edges(4, &[(0, 1), (2, 3)]);
        let z = eval_plain_bruteforce(&a, &g).unwrap();
        // Each edge: 2 + 3 = 5 per component (diagonal entries only).
        assert_eq!(z, rat(25));
    }
}
