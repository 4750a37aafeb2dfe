//! Hadamard-specific machinery: group condition, positivity, tensor peeling,
//! and the polynomial representation of a sign pattern.
//!
//! A canonical form with `H` of order `r >= 2` is tractable only when `H`
//! passes the group condition, its sign pattern is a quadratic-free GF(2)
//! polynomial `X_pi . Y (+) g^R(X) (+) g^C(Y)` under suitable index
//! bijections, and the pinned index sets translate into linear subspaces on
//! which `g` has degree at most 2. Everything constructed here is verified
//! exhaustively before use.

use crate::gf2::{
    anf_from_truth_table, compose_linear, poly_degree, subspace_basis, Gf2Poly, Gf2Vec,
    SubspaceBasis,
};
use crate::core_model::{rat, SymMatrix};

/// Square matrix with entries +1/-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    rows: Vec<Vec<i8>>,
}

impl SignMatrix {
    pub fn new(rows: Vec<Vec<i8>>) -> SignMatrix {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "not square");
        assert!(
            rows.iter().flatten().all(|&e| e == 1 || e == -1),
            "entries must be +1 or -1"
        );
        SignMatrix { rows }
    }

    pub fn h2() -> SignMatrix {
        SignMatrix::new(vec![vec![1, 1], vec![1, -1]])
    }

    pub fn h4() -> SignMatrix {
        SignMatrix::new(vec![
            vec![1, 1, 1, 1],
            vec![1, 1, -1, -1],
            vec![1, -1, 1, -1],
            vec![1, -1, -1, 1],
        ])
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i8 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.rows
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (0..n).all(|j| self.rows[i][j] == self.rows[j][i]))
    }

    pub fn negate(&self) -> SignMatrix {
        SignMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&e| -e).collect())
                .collect(),
        }
    }

    pub fn transpose(&self) -> SignMatrix {
        let n = self.order();
        SignMatrix {
            rows: (0..n).map(|j| (0..n).map(|i| self.rows[i][j]).collect()).collect(),
        }
    }

    pub fn tensor(&self, other: &SignMatrix) -> SignMatrix {
        let (n, m) = (self.order(), other.order());
        SignMatrix {
            rows: (0..n * m)
                .map(|i| {
                    (0..n * m)
                        .map(|j| self.rows[i / m][j / m] * other.rows[i % m][j % m])
                        .collect()
                })
                .collect(),
        }
    }

    /// Entrywise product of rows `a` and `b`.
    fn row_product(&self, a: usize, b: usize) -> Vec<i8> {
        self.rows[a]
            .iter()
            .zip(&self.rows[b])
            .map(|(&x, &y)| x * y)
            .collect()
    }

    fn is_normalised(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| self.rows[0][i] == 1 && self.rows[i][0] == 1)
    }
}

/// True iff `H H^T = n I`.
pub fn is_hadamard(h: &SignMatrix) -> bool {
    let n = h.order();
    (0..n).all(|a| {
        (a + 1..n).all(|b| {
            (0..n)
                .map(|c| i64::from(h.entry(a, c)) * i64::from(h.entry(b, c)))
                .sum::<i64>()
                == 0
        })
    })
}

/// A shift `l` whose product set `G(H, l)` differs from `G(H, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupConditionFailure {
    pub transposed: bool,
    pub shift: usize,
}

/// The group condition: for every `l`, the sign-normalized set of row
/// products `row_i o row_l` equals the set for `l = 1`, and likewise for
/// columns.
pub fn group_condition(h: &SignMatrix) -> Result<(), GroupConditionFailure> {
    for (transposed, m) in [(false, h.clone()), (true, h.transpose())] {
        let canonical = product_set(&m, 0);
        for l in 1..m.order() {
            if product_set(&m, l) != canonical {
                return Err(GroupConditionFailure { transposed, shift: l });
            }
        }
    }
    Ok(())
}

/// `G(H, l)`: each product row normalized so its first entry is +1, as a
/// sorted set.
fn product_set(h: &SignMatrix, l: usize) -> Vec<Vec<i8>> {
    let mut set: Vec<Vec<i8>> = (0..h.order())
        .map(|i| {
            let mut p = h.row_product(i, l);
            if p[0] == -1 {
                for e in &mut p {
                    *e = -*e;
                }
            }
            p
        })
        .collect();
    set.sort();
    set
}

/// Positivity of `H` for the pinned sets: some +1 entry whose row index is
/// unconstrained (empty `lam_r`) or pinned, likewise its column index, with
/// the symmetric equal-sets case restricted to the diagonal. When `H` is not
/// positive, `-H` always is.
pub fn is_positive_for(h: &SignMatrix, lam_r: &[usize], lam_c: &[usize]) -> bool {
    let r = h.order();
    let candidates_r: Vec<usize> = if lam_r.is_empty() { (0..r).collect() } else { lam_r.to_vec() };
    let candidates_c: Vec<usize> = if lam_c.is_empty() { (0..r).collect() } else { lam_c.to_vec() };
    if h.is_symmetric() && lam_r == lam_c {
        candidates_r.iter().any(|&i| h.entry(i, i) == 1)
    } else {
        candidates_r
            .iter()
            .any(|&i| candidates_c.iter().any(|&j| h.entry(i, j) == 1))
    }
}

/// The bipartisation `M = (0 H; H^T 0)` with the combined pinned set
/// `Lambda = Lambda^R u (r + Lambda^C)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartisation {
    pub m: SymMatrix,
    pub lambda: Vec<usize>,
}

pub fn bipartise(h: &SignMatrix, lam_r: &[usize], lam_c: &[usize]) -> Bipartisation {
    let r = h.order();
    let rows = (0..2 * r)
        .map(|i| {
            (0..2 * r)
                .map(|j| {
                    if i < r && j >= r {
                        rat(i64::from(h.entry(i, j - r)))
                    } else if i >= r && j < r {
                        rat(i64::from(h.entry(j, i - r)))
                    } else {
                        rat(0)
                    }
                })
                .collect()
        })
        .collect();
    let mut lambda: Vec<usize> = lam_r.to_vec();
    lambda.extend(lam_c.iter().map(|&j| r + j));
    Bipartisation {
        m: SymMatrix::from_rows(rows).expect("bipartisation is symmetric"),
        lambda,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeelFactor {
    H2,
    H4,
}

/// One tensor-peeling step: row and column orders under which the matrix
/// equals `factor (x) rest`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelStep {
    /// `sigma[p]` is the input row shown at position `p`.
    pub sigma: Vec<usize>,
    pub pi: Vec<usize>,
    pub factor: PeelFactor,
    pub rest: SignMatrix,
}

fn factor_matrix(f: PeelFactor) -> SignMatrix {
    match f {
        PeelFactor::H2 => SignMatrix::h2(),
        PeelFactor::H4 => SignMatrix::h4(),
    }
}

/// Splits a normalised Hadamard matrix with the group condition into
/// `H_2 (x) H'` or, for the symmetric positive-diagonal case, `H_4 (x) H'`,
/// following lexicographic choices. Symmetric input yields `sigma = pi` and
/// a symmetric `rest`.
pub fn peel_tensor_step(h: &SignMatrix) -> PeelStep {
    let n = h.order();
    assert!(n >= 2, "nothing to peel at order 1");
    assert!(h.is_normalised(), "peeling requires a normalised matrix");
    debug_assert!(is_hadamard(h));
    debug_assert!(group_condition(h).is_ok());
    let symmetric = h.is_symmetric();
    let negative_diagonal = (0..n).find(|&i| h.entry(i, i) == -1);

    let step = if !symmetric {
        peel_h2_asymmetric(h)
    } else if let Some(i) = negative_diagonal {
        peel_h2_symmetric(h, i)
    } else {
        assert!(n > 2, "a normalised symmetric positive-diagonal Hadamard matrix has order > 2");
        peel_h4(h)
    };

    // Reconstruction: the permuted matrix must equal factor (x) rest.
    let factor = factor_matrix(step.factor);
    let nu = n / factor.order();
    for p in 0..n {
        for q in 0..n {
            assert_eq!(
                h.entry(step.sigma[p], step.pi[q]),
                factor.entry(p / nu, q / nu) * step.rest.entry(p % nu, q % nu),
                "peeled block structure failed at ({p},{q}); this is a bug"
            );
        }
    }
    debug_assert!(step.rest.is_normalised());
    debug_assert!(is_hadamard(&step.rest));
    debug_assert!(group_condition(&step.rest).is_ok());
    if symmetric {
        debug_assert_eq!(step.sigma, step.pi);
        debug_assert!(step.rest.is_symmetric());
    }
    step
}

/// Entry access through current position orders.
fn at(h: &SignMatrix, sigma: &[usize], pi: &[usize], p: usize, q: usize) -> i8 {
    h.entry(sigma[p], pi[q])
}

fn peel_h2_asymmetric(h: &SignMatrix) -> PeelStep {
    let n = h.order();
    let nu = n / 2;
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut pi: Vec<usize> = (0..n).collect();

    // Part 1: move the lexicographically first -1 entry to position (nu, nu).
    let (i, j) = (0..n)
        .flat_map(|p| (0..n).map(move |q| (p, q)))
        .find(|&(p, q)| h.entry(p, q) == -1)
        .expect("a Hadamard matrix of order >= 2 has a -1 entry");
    sigma.swap(nu, i);
    pi.swap(nu, j);

    // Part 2: arrange row nu as (+...+, -...-) and column nu likewise.
    for t in 1..nu {
        if at(h, &sigma, &pi, nu, nu + t) != -1 {
            let l = (1..nu)
                .find(|&l| at(h, &sigma, &pi, nu, l) == -1)
                .expect("row nu has nu entries equal to -1");
            pi.swap(nu + t, l);
        }
    }
    for t in 1..nu {
        if at(h, &sigma, &pi, nu + t, nu) != -1 {
            let l = (1..nu)
                .find(|&l| at(h, &sigma, &pi, l, nu) == -1)
                .expect("column nu has nu entries equal to -1");
            sigma.swap(nu + t, l);
        }
    }

    // Part 3: pair each left-half column with the column equal to its
    // product with column nu, and likewise for rows.
    pi = pair_halves(|p, q| at(h, &sigma, &pi, p, q), n, &pi, true);
    sigma = pair_halves(|p, q| at(h, &sigma, &pi, p, q), n, &sigma, false);

    let rest = SignMatrix::new(
        (0..nu)
            .map(|p| (0..nu).map(|q| at(h, &sigma, &pi, p, q)).collect())
            .collect(),
    );
    PeelStep {
        sigma,
        pi,
        factor: PeelFactor::H2,
        rest,
    }
}

/// Reorders one side so position `t` (for `t` in `1..nu`) carries the
/// `t`-th unused line of the first half and position `nu + t` the line whose
/// entries are the product of line `t` and line `nu`. Positions 0 and `nu`
/// stay fixed. `columns` selects which side the entry accessor varies.
fn pair_halves(entry: impl Fn(usize, usize) -> i8, n: usize, order: &[usize], columns: bool) -> Vec<usize> {
    let nu = n / 2;
    let line = |pos: usize| -> Vec<i8> {
        (0..n)
            .map(|other| if columns { entry(other, pos) } else { entry(pos, other) })
            .collect()
    };
    let base = line(nu);
    let mut new_positions = vec![usize::MAX; n];
    new_positions[0] = 0;
    new_positions[nu] = nu;
    let mut used = vec![false; n];
    used[0] = true;
    used[nu] = true;
    for t in 1..nu {
        let c = (1..n).find(|&c| !used[c] && c < nu).unwrap_or_else(|| {
            panic!("ran out of first-half lines while pairing; this is a bug")
        });
        let target: Vec<i8> = line(c).iter().zip(&base).map(|(&a, &b)| a * b).collect();
        let c2 = (1..n)
            .find(|&c2| !used[c2] && c2 != c && line(c2) == target)
            .expect("the group condition pairs every line with its product line");
        assert!(c2 > nu, "product line landed outside the second half; this is a bug");
        used[c] = true;
        used[c2] = true;
        new_positions[t] = c;
        new_positions[nu + t] = c2;
    }
    new_positions.iter().map(|&p| order[p]).collect()
}

fn peel_h2_symmetric(h: &SignMatrix, diag: usize) -> PeelStep {
    let n = h.order();
    let nu = n / 2;
    let mut order: Vec<usize> = (0..n).collect();
    let e = |ord: &[usize], p: usize, q: usize| h.entry(ord[p], ord[q]);

    // Part 1: put the first -1 diagonal entry at (nu, nu).
    order.swap(nu, diag);

    // Part 2: arrange row nu (and by symmetry column nu) as (+...+, -...-).
    for t in 1..nu {
        if e(&order, nu, nu + t) != -1 {
            let l = (1..nu)
                .find(|&l| e(&order, nu, l) == -1)
                .expect("row nu has nu entries equal to -1");
            order.swap(nu + t, l);
        }
    }

    // Part 3: pair the halves through products with row nu, symmetrically.
    let half_pairing = pair_halves(|p, q| e(&order, p, q), n, &order, false);
    let order = half_pairing;

    let rest = SignMatrix::new(
        (0..nu)
            .map(|p| (0..nu).map(|q| h.entry(order[p], order[q])).collect())
            .collect(),
    );
    PeelStep {
        sigma: order.clone(),
        pi: order,
        factor: PeelFactor::H2,
        rest,
    }
}

fn peel_h4(h: &SignMatrix) -> PeelStep {
    let n = h.order();
    assert!(n.is_multiple_of(4), "symmetric positive-diagonal case requires order divisible by 4");
    let nu = n / 4;
    let mut order: Vec<usize> = (0..n).collect();
    let e = |ord: &[usize], p: usize, q: usize| h.entry(ord[p], ord[q]);

    // Part 1: row nu gets + on the first half and - on the second, by
    // symmetric swaps that avoid positions 0 and nu.
    for t in 0..2 * nu {
        if e(&order, nu, 2 * nu + t) != -1 {
            let l = (1..2 * nu)
                .filter(|&l| l != nu)
                .find(|&l| e(&order, nu, l) == -1)
                .expect("row nu has 2 nu entries equal to -1");
            order.swap(2 * nu + t, l);
        }
    }

    // Part 2: row 2 nu gets the pattern (+^nu, -^nu, +^nu, -^nu), fixed by
    // symmetric swaps inside each half so Part 1 is preserved.
    for t in 1..nu {
        if e(&order, 2 * nu, nu + t) != -1 {
            let l = (1..nu)
                .find(|&l| e(&order, 2 * nu, l) == -1)
                .expect("row 2nu has nu entries equal to -1 in the first half");
            order.swap(nu + t, l);
        }
    }
    for t in 0..nu {
        if e(&order, 2 * nu, 3 * nu + t) != -1 {
            let l = (2 * nu + 1..3 * nu)
                .find(|&l| e(&order, 2 * nu, l) == -1)
                .expect("row 2nu has nu entries equal to -1 in the second half");
            order.swap(3 * nu + t, l);
        }
    }

    // Part 3: group positions into quadruples (i1, i2, i3, i4) with
    // row_{i2} = row_{i1} o row_{nu}, row_{i3} = row_{i1} o row_{2nu},
    // row_{i4} = row_{i2} o row_{2nu}, applied symmetrically.
    let row = |ord: &[usize], p: usize| -> Vec<i8> { (0..n).map(|q| e(ord, p, q)).collect() };
    let mut new_positions = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for t in 0..nu {
        let i1 = (0..nu).find(|&p| !used[p]).expect("first quarter exhausted early");
        let find_product = |a: usize, b: usize, lo: usize, hi: usize, used: &[bool]| -> usize {
            let target: Vec<i8> = row(&order, a)
                .iter()
                .zip(&row(&order, b))
                .map(|(&x, &y)| x * y)
                .collect();
            (0..n)
                .find(|&p| !used[p] && row(&order, p) == target)
                .filter(|&p| p >= lo && p < hi)
                .expect("the group condition closes row products inside the expected quarter")
        };
        used[i1] = true;
        let i2 = find_product(i1, nu, nu, 2 * nu, &used);
        used[i2] = true;
        let i3 = find_product(i1, 2 * nu, 2 * nu, 3 * nu, &used);
        used[i3] = true;
        let i4 = find_product(i2, 2 * nu, 3 * nu, 4 * nu, &used);
        used[i4] = true;
        new_positions[t] = i1;
        new_positions[nu + t] = i2;
        new_positions[2 * nu + t] = i3;
        new_positions[3 * nu + t] = i4;
    }
    let order: Vec<usize> = new_positions.iter().map(|&p| order[p]).collect();

    let rest = SignMatrix::new(
        (0..nu)
            .map(|p| (0..nu).map(|q| h.entry(order[p], order[q])).collect())
            .collect(),
    );
    PeelStep {
        sigma: order.clone(),
        pi: order,
        factor: PeelFactor::H4,
        rest,
    }
}

/// Index bijections and a variable permutation under which the sign pattern
/// of a normalised matrix is the quadratic form `X_pi . Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Backbone {
    pub k: usize,
    /// `rho_r[x]` is the row shown for the bit vector `x`.
    pub rho_r: Vec<usize>,
    pub rho_c: Vec<usize>,
    /// `pi[j]` pairs `X_{pi[j]}` with `Y_j`; an involution.
    pub pi: Vec<usize>,
}

/// Builds the backbone by repeated tensor peeling. Variables are 0-based
/// with the outermost peel level highest.
pub fn backbone_representation(h: &SignMatrix) -> Backbone {
    let n = h.order();
    assert!(n.is_power_of_two(), "group condition forces a power-of-two order");
    if n == 1 {
        return Backbone {
            k: 0,
            rho_r: vec![0],
            rho_c: vec![0],
            pi: Vec::new(),
        };
    }
    let step = peel_tensor_step(h);
    let inner = backbone_representation(&step.rest);
    let k_inner = inner.k;
    match step.factor {
        PeelFactor::H2 => {
            let k = k_inner + 1;
            let nu = n / 2;
            let map = |outer: &[usize], inner_map: &[usize]| -> Vec<usize> {
                (0..1usize << k)
                    .map(|x| {
                        let top = (x >> k_inner) & 1;
                        outer[top * nu + inner_map[x & ((1 << k_inner) - 1)]]
                    })
                    .collect()
            };
            let mut pi: Vec<usize> = inner.pi.clone();
            pi.push(k - 1);
            Backbone {
                k,
                rho_r: map(&step.sigma, &inner.rho_r),
                rho_c: map(&step.pi, &inner.rho_c),
                pi,
            }
        }
        PeelFactor::H4 => {
            let k = k_inner + 2;
            let nu = n / 4;
            let map = |outer: &[usize], inner_map: &[usize]| -> Vec<usize> {
                (0..1usize << k)
                    .map(|x| {
                        let top = (x >> (k - 1)) & 1;
                        let second = (x >> (k - 2)) & 1;
                        outer[(2 * top + second) * nu + inner_map[x & ((1 << k_inner) - 1)]]
                    })
                    .collect()
            };
            // The H4 levels pair crosswise: X_{k-1} with Y_{k-2}.
            let mut pi: Vec<usize> = inner.pi.clone();
            pi.push(k - 1);
            pi.push(k - 2);
            Backbone {
                k,
                rho_r: map(&step.sigma, &inner.rho_r),
                rho_c: map(&step.pi, &inner.rho_c),
                pi,
            }
        }
    }
}

/// A full representation of `H`: `H[rho_r(x)][rho_c(y)] = -1` exactly when
/// `x_pi . y (+) g_r(x) (+) g_c(y) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub k: usize,
    pub rho_r: Vec<usize>,
    pub rho_c: Vec<usize>,
    pub pi: Vec<usize>,
    pub g_r: Gf2Poly,
    pub g_c: Gf2Poly,
}

/// Evaluates the representation polynomial `x_pi . y (+) g_r(x) (+) g_c(y)`.
pub fn representation_value(rep: &Representation, x: u64, y: u64) -> bool {
    let mut acc = rep.g_r.eval(x) ^ rep.g_c.eval(y);
    for (j, &pj) in rep.pi.iter().enumerate() {
        acc ^= ((x >> pj) & (y >> j) & 1) == 1;
    }
    acc
}

/// Exhaustive check of the representation invariant over all index pairs.
pub fn verify_representation(h: &SignMatrix, rep: &Representation) -> bool {
    let size = 1u64 << rep.k;
    (0..size).all(|x| {
        (0..size).all(|y| {
            (h.entry(rep.rho_r[x as usize], rep.rho_c[y as usize]) == -1)
                == representation_value(rep, x, y)
        })
    })
}

/// Constructs the representation of a Hadamard matrix with the group
/// condition that is positive for the pinned sets: anchors at the
/// lexicographically smallest admissible +1 entry, normalizes, runs the
/// peeling backbone, and reads the correction polynomials off the anchor row
/// and column. Panics if the exhaustive verification fails, which would be
/// an implementation bug.
pub fn construct_representation(h: &SignMatrix, lam_r: &[usize], lam_c: &[usize]) -> Representation {
    let r = h.order();
    assert!(r.is_power_of_two());
    assert!(is_positive_for(h, lam_r, lam_c), "caller must pre-negate to the positive matrix");
    let symmetric_pinning = h.is_symmetric() && lam_r == lam_c;
    let admissible_r = |i: usize| lam_r.is_empty() || lam_r.contains(&i);
    let admissible_c = |j: usize| lam_c.is_empty() || lam_c.contains(&j);
    let (a, b) = if symmetric_pinning {
        let i = (0..r)
            .find(|&i| admissible_r(i) && h.entry(i, i) == 1)
            .expect("positivity provides a diagonal anchor");
        (i, i)
    } else {
        (0..r)
            .flat_map(|i| (0..r).map(move |j| (i, j)))
            .find(|&(i, j)| admissible_r(i) && admissible_c(j) && h.entry(i, j) == 1)
            .expect("positivity provides an anchor")
    };

    // Move the anchor to (0,0) and normalize the first row and column.
    let mut sigma: Vec<usize> = (0..r).collect();
    let mut pi: Vec<usize> = (0..r).collect();
    sigma.swap(0, a);
    pi.swap(0, b);
    let permuted = |i: usize, j: usize| h.entry(sigma[i], pi[j]);
    let normalised = SignMatrix::new(
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| permuted(i, j) * permuted(i, 0) * permuted(0, j))
                    .collect()
            })
            .collect(),
    );
    debug_assert!(normalised.is_normalised());

    let backbone = backbone_representation(&normalised);
    let k = backbone.k;
    // g_r(x) records the sign stripped off the anchor column, g_c the row.
    let g_r = anf_from_truth_table(
        &(0..1usize << k)
            .map(|x| permuted(backbone.rho_r[x], 0) == -1)
            .collect::<Vec<_>>(),
    );
    let g_c = anf_from_truth_table(
        &(0..1usize << k)
            .map(|y| permuted(0, backbone.rho_c[y]) == -1)
            .collect::<Vec<_>>(),
    );
    let rep = Representation {
        k,
        rho_r: backbone.rho_r.iter().map(|&i| sigma[i]).collect(),
        rho_c: backbone.rho_c.iter().map(|&j| pi[j]).collect(),
        pi: backbone.pi,
        g_r,
        g_c,
    };
    assert!(
        verify_representation(h, &rep),
        "constructed representation failed exhaustive verification; this is a bug"
    );
    if !lam_r.is_empty() {
        assert!(lam_r.contains(&rep.rho_r[0]), "rho_r(0) must be pinned");
    }
    if !lam_c.is_empty() {
        assert!(lam_c.contains(&rep.rho_c[0]), "rho_c(0) must be pinned");
    }
    if symmetric_pinning {
        debug_assert_eq!(rep.rho_r, rep.rho_c);
        debug_assert_eq!(rep.g_r, rep.g_c);
    }
    rep
}

/// Condition (L): the pinned sets, pulled back through the index bijections,
/// must be linear subspaces. Returns their canonical coordinatisations, or
/// the failing side. An empty pinned set yields the empty-basis map; the
/// evaluator special-cases it.
pub fn check_linearity(
    rep: &Representation,
    lam_r: &[usize],
    lam_c: &[usize],
) -> Result<(SubspaceBasis, SubspaceBasis), bool> {
    let pullback = |rho: &[usize], lam: &[usize]| -> Vec<Gf2Vec> {
        (0..rho.len())
            .filter(|&x| lam.contains(&rho[x]))
            .map(|x| Gf2Vec::new(rep.k, x as u64))
            .collect()
    };
    let side = |rho: &[usize], lam: &[usize]| -> Option<SubspaceBasis> {
        if lam.is_empty() {
            return Some(SubspaceBasis::empty(rep.k));
        }
        subspace_basis(&pullback(rho, lam))
    };
    let phi_r = side(&rep.rho_r, lam_r).ok_or(true)?;
    let phi_c = side(&rep.rho_c, lam_c).ok_or(false)?;
    Ok((phi_r, phi_c))
}

/// Condition (D): `g` composed with the coordinatisation has degree at most
/// 2 on each nonempty side. Returns the failing side and degree.
pub fn check_degree(
    rep: &Representation,
    lam_r: &[usize],
    lam_c: &[usize],
    phi_r: &SubspaceBasis,
    phi_c: &SubspaceBasis,
) -> Result<(), (bool, usize)> {
    if !lam_r.is_empty() {
        let d = poly_degree(&compose_linear(&rep.g_r, phi_r));
        if d > 2 {
            return Err((true, d));
        }
    }
    if !lam_c.is_empty() {
        let d = poly_degree(&compose_linear(&rep.g_c, phi_c));
        if d > 2 {
            return Err((false, d));
        }
    }
    Ok(())
}

/// Sanity helper used by tests: the product set `G(H, 1)` is closed under
/// entrywise products when the group condition holds.
pub fn product_set_closed(h: &SignMatrix) -> bool {
    let set = product_set(h, 0);
    for a in &set {
        for b in &set {
            let mut p: Vec<i8> = a.iter().zip(b).map(|(&x, &y)| x * y).collect();
            if p[0] == -1 {
                for e in &mut p {
                    *e = -*e;
                }
            }
            if !set.contains(&p) {
                return false;
            }
        }
    }
    true
}
