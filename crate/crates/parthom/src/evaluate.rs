//! Polynomial-time exact evaluation of `Z_A(G)` driven by a tractability
//! witness.
//!
//! Each graph component contributes a sum over matrix components. A
//! component's value splits into a rank-1 layer, evaluated per vertex from
//! degree data alone, and a Hadamard layer, evaluated by counting solutions
//! of a degree-2 GF(2) polynomial. Nothing here enumerates configurations;
//! every quantity comes from closed formulas over the canonical data.

use num::{BigInt, One, Zero};

use crate::classify::{ComponentVerdict, ComponentWitness, TractabilityWitness};
use crate::core_model::{rational_pow, Multigraph, PdpfInstance, Rational};
use crate::gf2::{compose_linear, count_quadratic_ones, Gf2Poly, QuadPoly, SubspaceBasis};
use crate::hadamard::Representation;
use crate::structure::{matrix_components, ComponentKind};

/// Values of the two spin orientations of a bipartite component on a
/// connected bipartite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionalValue {
    pub forward: Rational,
    pub backward: Rational,
}

/// `Z_A(G)` for a matrix proven tractable. Exact and polynomial time in the
/// size of `G`.
pub fn eval_tractable(witness: &TractabilityWitness, g: &Multigraph) -> Rational {
    let mut total = Rational::one();
    for (gi, _) in g.components() {
        let mut sum = Rational::zero();
        for comp in &witness.components {
            sum += component_value(comp, &gi);
        }
        total *= sum;
    }
    total
}

fn flip_sign(flipped: bool, edges: u64) -> Rational {
    if flipped && edges % 2 == 1 {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// Contribution of one matrix component to one connected graph component.
fn component_value(cv: &ComponentVerdict, gi: &Multigraph) -> Rational {
    let degrees = gi.degrees();
    let has_odd = |verts: &[usize]| verts.iter().any(|&z| degrees[z] % 2 == 1);
    let all: Vec<usize> = (0..gi.vertex_count()).collect();
    match &cv.witness {
        ComponentWitness::Zero => {
            if gi.vertex_count() == 1 && gi.edge_count() == 0 {
                Rational::one()
            } else {
                Rational::zero()
            }
        }
        ComponentWitness::Rank1 { form, flipped } => {
            let sign = flip_sign(*flipped, gi.edge_count());
            if form.symmetric {
                if form.lambda_r.is_empty() && has_odd(&all) {
                    return Rational::zero();
                }
                sign * rank1_symmetric_value(form, gi, &degrees)
            } else {
                let (u, w) = match gi.bipartition() {
                    Some(parts) => parts,
                    None => return Rational::zero(),
                };
                let trivial = |row_first: bool| -> Rational {
                    let (row_verts, col_verts) = if row_first { (&u, &w) } else { (&w, &u) };
                    if (form.lambda_r.is_empty() && has_odd(row_verts))
                        || (form.lambda_c.is_empty() && has_odd(col_verts))
                    {
                        Rational::zero()
                    } else {
                        Rational::one()
                    }
                };
                let fwd = trivial(true) * rank1_directional_value(form, &degrees, &u, &w);
                let bwd = trivial(false) * rank1_directional_value(form, &degrees, &w, &u);
                sign * (fwd + bwd)
            }
        }
        ComponentWitness::Hadamard {
            form,
            flipped,
            rep,
            phi_r,
            phi_c,
        } => {
            let sign = flip_sign(*flipped, gi.edge_count());
            if form.symmetric {
                let had = eval_hadamard_symmetric(rep, &form.lambda_r, phi_r, gi);
                if had.is_zero() {
                    return Rational::zero();
                }
                sign * rank1_symmetric_value(form, gi, &degrees) * had
            } else {
                let (u, w) = match gi.bipartition() {
                    Some(parts) => parts,
                    None => return Rational::zero(),
                };
                let had = eval_hadamard_bipartite(
                    rep,
                    &form.lambda_r,
                    phi_r,
                    &form.lambda_c,
                    phi_c,
                    gi,
                    &u,
                );
                let fwd = had.forward * rank1_directional_value(form, &degrees, &u, &w);
                let bwd = had.backward * rank1_directional_value(form, &degrees, &w, &u);
                sign * (fwd + bwd)
            }
        }
    }
}

/// Rank-1 layer of a symmetric (non-bipartite) component: orient every edge
/// arbitrarily and take the per-vertex sums of `v^out w^in` weighted by the
/// parity scalars.
fn rank1_symmetric_value(
    form: &crate::structure::CanonicalForm,
    gi: &Multigraph,
    degrees: &[u64],
) -> Rational {
    let n = gi.vertex_count();
    let mut out = vec![0u64; n];
    let mut inn = vec![0u64; n];
    for ((a, b), k) in gi.edges() {
        out[a] += k;
        inn[b] += k;
    }
    let verts: Vec<(u64, u64, bool)> = (0..n)
        .map(|z| (out[z], inn[z], degrees[z] % 2 == 1))
        .collect();
    eval_rank1_directed(&form.v, &form.w, &form.alpha_r, &form.beta_r, &verts)
}

/// Rank-1 layer of a bipartite component for one orientation: `row_verts`
/// carry row-side spins (values `v`, scalars `alpha_r`/`beta_r`),
/// `col_verts` the column side.
fn rank1_directional_value(
    form: &crate::structure::CanonicalForm,
    degrees: &[u64],
    row_verts: &[usize],
    col_verts: &[usize],
) -> Rational {
    let side = |verts: &[usize], vals: &[Rational], even: &[Rational], odd: &[Rational]| {
        verts
            .iter()
            .map(|&z| {
                let d = degrees[z];
                (0..vals.len())
                    .map(|i| {
                        rational_pow(&vals[i], d) * if d.is_multiple_of(2) { &even[i] } else { &odd[i] }
                    })
                    .sum::<Rational>()
            })
            .product::<Rational>()
    };
    side(row_verts, &form.v, &form.alpha_r, &form.beta_r)
        * side(col_verts, &form.w, &form.alpha_c, &form.beta_c)
}

/// Per-vertex closed form for a rank-1 weight layer `x y^T`: the product
/// over vertices `(out, in, odd)` of `sum_i x_i^out y_i^in * weight_i`,
/// where the weight is `even[i]` or `odd[i]` by the parity flag.
pub fn eval_rank1_directed(
    x: &[Rational],
    y: &[Rational],
    even: &[Rational],
    odd: &[Rational],
    vertices: &[(u64, u64, bool)],
) -> Rational {
    vertices
        .iter()
        .map(|&(o, i, odd_parity)| {
            (0..x.len())
                .map(|s| {
                    rational_pow(&x[s], o)
                        * rational_pow(&y[s], i)
                        * if odd_parity { &odd[s] } else { &even[s] }
                })
                .sum::<Rational>()
        })
        .product()
}

/// Per-vertex variable layout for the quadratic solution count: each
/// coordinate of the vertex's spin index vector is an XOR of global
/// variables.
struct VertexExpr {
    coords: Vec<Vec<usize>>,
    base: usize,
    pinned: Option<usize>,
}

fn allocate_vertex(
    next: &mut usize,
    k: usize,
    pinned: Option<&SubspaceBasis>,
) -> VertexExpr {
    let base = *next;
    match pinned {
        None => {
            let coords = (0..k).map(|j| vec![base + j]).collect();
            *next += k;
            VertexExpr { coords, base, pinned: None }
        }
        Some(phi) => {
            let l = phi.dim();
            let coords = (0..k)
                .map(|j| {
                    (0..l)
                        .filter(|&t| phi.rows()[t].bit(j))
                        .map(|t| base + t)
                        .collect()
                })
                .collect();
            *next += l;
            VertexExpr { coords, base, pinned: Some(l) }
        }
    }
}

/// XORs `g` composed with the vertex's coordinatisation into the counter;
/// degree at most 2 is guaranteed by the witness.
fn add_g_terms(qp: &mut QuadPoly, composed: &Gf2Poly, base: usize) {
    for mono in composed.monomials() {
        let vars: Vec<usize> = (0..composed.variables())
            .filter(|&t| (mono >> t) & 1 == 1)
            .map(|t| base + t)
            .collect();
        match vars.as_slice() {
            [] => qp.toggle_constant(),
            [a] => qp.toggle_linear(*a),
            [a, b] => qp.toggle_quadratic(*a, *b),
            _ => unreachable!("witness guarantees degree <= 2"),
        }
    }
}

/// Signed solution count `s_0 - s_1` of the edge polynomial: `x_side` marks
/// vertices whose index vector takes the permuted position in each edge
/// term. Pinned (odd-degree) vertices carry their coordinatisation and
/// composed correction polynomial.
fn signed_hadamard_count(
    rep: &Representation,
    g: &Multigraph,
    x_side: &[bool],
    pinning: &[Option<(&SubspaceBasis, Gf2Poly)>],
) -> Rational {
    let k = rep.k;
    let mut next = 0usize;
    let exprs: Vec<VertexExpr> = (0..g.vertex_count())
        .map(|z| allocate_vertex(&mut next, k, pinning[z].as_ref().map(|(phi, _)| *phi)))
        .collect();
    let mut qp = QuadPoly::new(next);
    for ((a, b), t) in g.edges() {
        if t % 2 == 0 {
            continue;
        }
        let (xv, yv) = if a == b || x_side[a] { (a, b) } else { (b, a) };
        for j in 0..k {
            for &p in &exprs[xv].coords[rep.pi[j]] {
                for &q in &exprs[yv].coords[j] {
                    qp.toggle_quadratic(p, q);
                }
            }
        }
    }
    for (z, pin) in pinning.iter().enumerate() {
        if let Some((_, composed)) = pin {
            debug_assert!(exprs[z].pinned.is_some());
            add_g_terms(&mut qp, composed, exprs[z].base);
        }
    }
    let n1 = count_quadratic_ones(&qp);
    Rational::from_integer((BigInt::one() << next) - BigInt::from(2) * n1)
}

/// `Z_{H, I, I_Lambda}(G)` for a symmetric represented sign pattern on a
/// connected graph: odd-degree vertices are confined to the pinned subspace.
/// An empty pinned set together with an odd-degree vertex gives 0.
pub fn eval_hadamard_symmetric(
    rep: &Representation,
    lambda: &[usize],
    phi: &SubspaceBasis,
    g: &Multigraph,
) -> Rational {
    let degrees = g.degrees();
    let odd: Vec<bool> = degrees.iter().map(|&d| d % 2 == 1).collect();
    if lambda.is_empty() && odd.iter().any(|&o| o) {
        return Rational::zero();
    }
    let composed = compose_linear(&rep.g_r, phi);
    let x_side = vec![true; g.vertex_count()];
    let pinning: Vec<Option<(&SubspaceBasis, Gf2Poly)>> = odd
        .iter()
        .map(|&o| if o { Some((phi, composed.clone())) } else { None })
        .collect();
    signed_hadamard_count(rep, g, &x_side, &pinning)
}

/// Directional Hadamard values of a bipartite sign pattern on a connected
/// bipartite graph with part `u_part` (local vertices). Forward maps
/// `u_part` to the row side; backward to the column side.
pub fn eval_hadamard_bipartite(
    rep: &Representation,
    lam_r: &[usize],
    phi_r: &SubspaceBasis,
    lam_c: &[usize],
    phi_c: &SubspaceBasis,
    g: &Multigraph,
    u_part: &[usize],
) -> DirectionalValue {
    let n = g.vertex_count();
    let degrees = g.degrees();
    let mut in_u = vec![false; n];
    for &z in u_part {
        in_u[z] = true;
    }
    let composed_r = compose_linear(&rep.g_r, phi_r);
    let composed_c = compose_linear(&rep.g_c, phi_c);

    let direction = |u_on_rows: bool| -> Rational {
        // Row-side vertices take the x (permuted) role.
        let x_side: Vec<bool> = (0..n).map(|z| in_u[z] == u_on_rows).collect();
        let row_odd = (0..n).any(|z| x_side[z] && degrees[z] % 2 == 1);
        let col_odd = (0..n).any(|z| !x_side[z] && degrees[z] % 2 == 1);
        if (lam_r.is_empty() && row_odd) || (lam_c.is_empty() && col_odd) {
            return Rational::zero();
        }
        let pinning: Vec<Option<(&SubspaceBasis, Gf2Poly)>> = (0..n)
            .map(|z| {
                if degrees[z].is_multiple_of(2) {
                    None
                } else if x_side[z] {
                    Some((phi_r, composed_r.clone()))
                } else {
                    Some((phi_c, composed_c.clone()))
                }
            })
            .collect();
        signed_hadamard_count(rep, g, &x_side, &pinning)
    };

    DirectionalValue {
        forward: direction(true),
        backward: direction(false),
    }
}

/// Exact `Z_{C,D,O}(G)` in polynomial time when every connected component of
/// `C` has an underlying block of rank at most 1. Returns `None` when some
/// block has rank 2 or more.
pub fn eval_rank1_pdpf(inst: &PdpfInstance, g: &Multigraph) -> Option<Rational> {
    let (a2, delta_diag) = parity_split(inst);
    let delta: Vec<Rational> = delta_diag.diagonal().to_vec();

    // Factor every block up front so an unexpected rank refuses cleanly.
    enum Layer {
        Zero { index: usize },
        Whole { indices: Vec<usize>, x: Vec<Rational>, y: Vec<Rational> },
        Split { row_idx: Vec<usize>, col_idx: Vec<usize>, x: Vec<Rational>, y: Vec<Rational> },
    }
    let mut layers = Vec::new();
    for comp in matrix_components(&a2) {
        match &comp.kind {
            ComponentKind::ZeroSingleton => layers.push(Layer::Zero { index: comp.indices[0] }),
            ComponentKind::NonBipartite => {
                let rows: Vec<Vec<Rational>> = comp.matrix.rows().to_vec();
                let (x, y) = rank1_factor_signed(&rows)?;
                layers.push(Layer::Whole { indices: comp.indices, x, y });
            }
            ComponentKind::Bipartite { rows, cols } => {
                let b = comp.block();
                let entries: Vec<Vec<Rational>> = (0..b.nrows())
                    .map(|i| (0..b.ncols()).map(|j| b.entry(i, j).clone()).collect())
                    .collect();
                let (x, y) = rank1_factor_signed(&entries)?;
                layers.push(Layer::Split {
                    row_idx: rows.iter().map(|&l| comp.indices[l]).collect(),
                    col_idx: cols.iter().map(|&l| comp.indices[l]).collect(),
                    x,
                    y,
                });
            }
        }
    }

    // One-sided vertex sum: sum_i vals_i^degree * delta_{idx_i}.
    let vertex_sum = |vals: &[Rational], idx: &[usize], d: u64| -> Rational {
        (0..vals.len())
            .map(|i| rational_pow(&vals[i], d) * &delta[idx[i]])
            .sum()
    };

    let mut total = Rational::one();
    for (gi, _) in g.components() {
        let degrees = gi.degrees();
        let n = gi.vertex_count();
        let mut out = vec![0u64; n];
        let mut inn = vec![0u64; n];
        for ((a, b), k) in gi.edges() {
            out[a] += k;
            inn[b] += k;
        }
        let mut sum = Rational::zero();
        for layer in &layers {
            sum += match layer {
                Layer::Zero { index } => {
                    if n == 1 && gi.edge_count() == 0 {
                        delta[*index].clone()
                    } else {
                        Rational::zero()
                    }
                }
                Layer::Whole { indices, x, y } => (0..n)
                    .map(|z| {
                        (0..x.len())
                            .map(|i| {
                                rational_pow(&x[i], out[z])
                                    * rational_pow(&y[i], inn[z])
                                    * &delta[indices[i]]
                            })
                            .sum::<Rational>()
                    })
                    .product(),
                Layer::Split { row_idx, col_idx, x, y } => match gi.bipartition() {
                    None => Rational::zero(),
                    Some((u, w)) => {
                        let orient = |rows: &[usize], cols: &[usize]| -> Rational {
                            rows.iter()
                                .map(|&z| vertex_sum(x, row_idx, degrees[z]))
                                .product::<Rational>()
                                * cols
                                    .iter()
                                    .map(|&z| vertex_sum(y, col_idx, degrees[z]))
                                    .product::<Rational>()
                        };
                        orient(&u, &w) + orient(&w, &u)
                    }
                },
            };
        }
        total *= sum;
    }
    Some(total)
}

/// Standard conversion of a pdpf to a vertex-weighted instance on doubled
/// spins: `Z_{C,D,O}(G) = Z_{A,Delta}(G)` with `A = (C -C; -C C)` and
/// `Delta = diag((D + O)/2, (D - O)/2)`. The sign spin tracks degree parity.
pub fn parity_split(inst: &PdpfInstance) -> (crate::core_model::SymMatrix, crate::core_model::DiagMatrix) {
    let m = inst.order();
    let half = crate::core_model::ratio(1, 2);
    let rows: Vec<Vec<Rational>> = (0..2 * m)
        .map(|i| {
            (0..2 * m)
                .map(|j| {
                    let sign = if (i < m) == (j < m) { Rational::one() } else { -Rational::one() };
                    sign * inst.a.entry(i % m, j % m)
                })
                .collect()
        })
        .collect();
    let a2 = crate::core_model::SymMatrix::from_rows(rows).expect("parity split stays symmetric");
    let delta: Vec<Rational> = (0..2 * m)
        .map(|i| {
            let s = if i < m { Rational::one() } else { -Rational::one() };
            (inst.d.entry(i % m) + s * inst.o.entry(i % m)) * &half
        })
        .collect();
    (a2, crate::core_model::DiagMatrix::new(delta))
}

/// Writes a matrix as `x y^T` with `x` normalized at the first nonzero
/// entry, or `None` when the rank exceeds 1.
fn rank1_factor_signed(rows: &[Vec<Rational>]) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let (r0, c0) = rows
        .iter()
        .enumerate()
        .find_map(|(i, row)| row.iter().position(|e| !e.is_zero()).map(|j| (i, j)))?;
    let x: Vec<Rational> = rows.iter().map(|row| &row[c0] / &rows[r0][c0]).collect();
    let y: Vec<Rational> = rows[r0].clone();
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if e != &(&x[i] * &y[j]) {
                return None;
            }
        }
    }
    Some((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify, Verdict};
    use crate::core_model::{rat, ratio, DiagMatrix, SymMatrix};
    use crate::hadamard::{check_linearity, construct_representation, SignMatrix};
    use crate::oracle::{eval_pdpf_bruteforce, eval_plain_bruteforce};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, max_v: usize, max_e: usize) -> Multigraph {
        let n = rng.gen_range(1..=max_v);
        let e = rng.gen_range(0..=max_e);
        let mut g = Multigraph::new(n);
        for _ in 0..e {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            g.add_edge(u, v, rng.gen_range(1..=2));
        }
        g
    }

    fn check_matrix(a: &SymMatrix, seed: u64, iters: usize) {
        let w = match classify(a) {
            Verdict::Tractable(w) => w,
            Verdict::Hard(e) => panic!("expected tractable, got {e}"),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..iters {
            let g = random_graph(&mut rng, 5, 7);
            assert_eq!(
                eval_tractable(&w, &g),
                eval_plain_bruteforce(a, &g).unwrap(),
                "matrix {a:?} graph {g:?}"
            );
        }
    }

    fn check_int_matrix(rows: &[&[i64]], seed: u64) {
        check_matrix(&SymMatrix::from_int_rows(rows), seed, 25);
    }

    #[test]
    fn matches_oracle_h2() {
        check_int_matrix(&[&[1, 1], &[1, -1]], 1);
    }

    #[test]
    fn matches_oracle_h4() {
        check_int_matrix(
            &[&[1, 1, 1, 1], &[1, 1, -1, -1], &[1, -1, 1, -1], &[1, -1, -1, 1]],
            2,
        );
    }

    #[test]
    fn matches_oracle_eulerian() {
        check_int_matrix(&[&[1, -1], &[-1, 1]], 3);
    }

    #[test]
    fn matches_oracle_identities() {
        for m in 1..=4 {
            check_matrix(&SymMatrix::identity(m), 4 + m as u64, 15);
        }
        check_int_matrix(&[&[-1, 0], &[0, -1]], 9);
    }

    #[test]
    fn matches_oracle_rank1_layers() {
        check_int_matrix(&[&[1, 2], &[2, 4]], 10);
        check_int_matrix(&[&[0, 2], &[2, 0]], 11);
        check_int_matrix(&[&[1, -1, 2], &[-1, 1, -2], &[2, -2, 4]], 12);
        check_matrix(
            &SymMatrix::from_rows(vec![
                vec![ratio(1, 2), rat(1)],
                vec![rat(1), rat(2)],
            ])
            .unwrap(),
            13,
            25,
        );
    }

    #[test]
    fn matches_oracle_mixed_components() {
        check_int_matrix(&[&[1, 1, 0], &[1, -1, 0], &[0, 0, 0]], 14);
        check_int_matrix(&[&[1, 1, 0, 0], &[1, -1, 0, 0], &[0, 0, 3, 0], &[0, 0, 0, 0]], 15);
    }

    #[test]
    fn matches_oracle_bipartite_hadamard() {
        check_int_matrix(
            &[&[0, 0, 1, 1], &[0, 0, 1, -1], &[1, 1, 0, 0], &[1, -1, 0, 0]],
            16,
        );
    }

    #[test]
    fn hadamard_symmetric_matches_oracle() {
        let cases: Vec<(SignMatrix, Vec<Vec<usize>>)> = vec![
            (SignMatrix::h2(), vec![vec![0, 1], vec![], vec![0]]),
            (
                SignMatrix::h4(),
                vec![vec![0, 1, 2, 3], vec![], vec![0, 1], vec![0]],
            ),
            (
                SignMatrix::h2().tensor(&SignMatrix::h2()),
                vec![vec![0, 1, 2, 3], vec![]],
            ),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (h, lambdas) in cases {
            let r = h.order();
            let a = SymMatrix::from_rows(
                h.rows()
                    .iter()
                    .map(|row| row.iter().map(|&e| rat(i64::from(e))).collect())
                    .collect(),
            )
            .unwrap();
            for lambda in lambdas {
                let rep = construct_representation(&h, &lambda, &lambda);
                let (phi, _) = check_linearity(&rep, &lambda, &lambda).unwrap();
                let inst = PdpfInstance::new(
                    a.clone(),
                    DiagMatrix::identity(r),
                    DiagMatrix::identity_restricted(r, &lambda),
                );
                for _ in 0..10 {
                    let g = random_graph(&mut rng, 4, 6);
                    assert_eq!(
                        eval_hadamard_symmetric(&rep, &lambda, &phi, &g),
                        eval_pdpf_bruteforce(&inst, &g).unwrap(),
                        "H order {r}, lambda {lambda:?}, graph {g:?}"
                    );
                }
            }
        }
    }

    /// Connected bipartite test graphs with known parts.
    fn bipartite_graphs() -> Vec<Multigraph> {
        let mut gs = vec![
            Multigraph::from_edges(2, &[(0, 1)]),
            Multigraph::from_edges(3, &[(0, 1), (1, 2)]),
            Multigraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]),
            Multigraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]),
            Multigraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]),
        ];
        let mut doubled = Multigraph::new(3);
        doubled.add_edge(0, 1, 2);
        doubled.add_edge(1, 2, 3);
        gs.push(doubled);
        gs
    }

    #[test]
    fn hadamard_bipartite_matches_oracle() {
        // Z of the bipartisation on a connected bipartite graph is the sum
        // of the two directional values.
        let h = SignMatrix::h2();
        for (lam_r, lam_c) in [
            (vec![0, 1], vec![0, 1]),
            (vec![], vec![]),
            (vec![0], vec![0, 1]),
        ] {
            let rep = construct_representation(&h, &lam_r, &lam_c);
            let (phi_r, phi_c) = check_linearity(&rep, &lam_r, &lam_c).unwrap();
            let bip = crate::hadamard::bipartise(&h, &lam_r, &lam_c);
            let inst = PdpfInstance::new(
                bip.m.clone(),
                DiagMatrix::identity(4),
                DiagMatrix::identity_restricted(4, &bip.lambda),
            );
            for g in bipartite_graphs() {
                let (u, _) = g.bipartition().unwrap();
                let d = eval_hadamard_bipartite(&rep, &lam_r, &phi_r, &lam_c, &phi_c, &g, &u);
                assert_eq!(
                    d.forward + d.backward,
                    eval_pdpf_bruteforce(&inst, &g).unwrap(),
                    "lambda ({lam_r:?}, {lam_c:?}) graph {g:?}"
                );
            }
        }
    }

    #[test]
    fn rank1_directed_closed_form() {
        let x = [rat(1), rat(2)];
        let y = [rat(2), rat(4)];
        let ones = [rat(1), rat(1)];
        assert_eq!(
            eval_rank1_directed(&x, &y, &ones, &ones, &[(1, 1, false)]),
            rat(10)
        );
        assert_eq!(
            eval_rank1_directed(&x, &y, &ones, &[rat(0), rat(1)], &[(1, 0, true)]),
            rat(2)
        );
    }

    #[test]
    fn rank1_pdpf_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for trial in 0..40 {
            let m = rng.gen_range(1..=3);
            let v: Vec<i64> = (0..m).map(|_| rng.gen_range(-2..=2)).collect();
            let c = rng.gen_range(1..=2);
            let a = SymMatrix::from_rows(
                (0..m)
                    .map(|i| (0..m).map(|j| rat(c * v[i] * v[j])).collect())
                    .collect(),
            )
            .unwrap();
            let d = DiagMatrix::new((0..m).map(|_| rat(rng.gen_range(-2..=2))).collect());
            let o = DiagMatrix::new((0..m).map(|_| rat(rng.gen_range(-2..=2))).collect());
            let inst = PdpfInstance::new(a, d, o);
            let g = random_graph(&mut rng, 4, 6);
            assert_eq!(
                eval_rank1_pdpf(&inst, &g),
                Some(eval_pdpf_bruteforce(&inst, &g).unwrap()),
                "trial {trial}"
            );
        }
    }

    #[test]
    fn rank1_pdpf_bipartite_blocks() {
        let a = SymMatrix::from_int_rows(&[&[0, 2], &[2, 0]]);
        let d = DiagMatrix::new(vec![rat(1), rat(2)]);
        let o = DiagMatrix::new(vec![rat(-1), rat(1)]);
        let inst = PdpfInstance::new(a, d, o);
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..20 {
            let g = random_graph(&mut rng, 5, 6);
            assert_eq!(
                eval_rank1_pdpf(&inst, &g),
                Some(eval_pdpf_bruteforce(&inst, &g).unwrap())
            );
        }
    }

    #[test]
    fn rank1_pdpf_refuses_higher_rank() {
        let inst = PdpfInstance::plain(SymMatrix::from_int_rows(&[&[0, 1], &[1, 1]]));
        let g = Multigraph::from_edges(2, &[(0, 1)]);
        assert_eq!(eval_rank1_pdpf(&inst, &g), None);
    }

    #[test]
    fn empty_and_trivial_graphs() {
        let a = SymMatrix::from_int_rows(&[&[1, 1], &[1, -1]]);
        let w = match classify(&a) {
            Verdict::Tractable(w) => w,
            Verdict::Hard(_) => unreachable!(),
        };
        assert_eq!(eval_tractable(&w, &Multigraph::new(0)), rat(1));
        assert_eq!(eval_tractable(&w, &Multigraph::new(1)), rat(2));
        assert_eq!(eval_tractable(&w, &Multigraph::new(3)), rat(8));
    }
}
