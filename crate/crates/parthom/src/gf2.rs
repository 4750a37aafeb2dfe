//! GF(2) polynomial and linear-algebra kernel.
//!
//! Two polynomial representations live here. [`Gf2Poly`] is a full algebraic
//! normal form over few variables (truth tables are feasible); it carries the
//! correction polynomials `g` of a Hadamard representation. [`QuadPoly`] is a
//! sparse degree-at-most-2 polynomial over arbitrarily many variables; its
//! solutions are counted in O(n^3) without enumeration, which is what makes
//! tractable evaluation polynomial-time.

use std::collections::BTreeSet;

use num::bigint::BigInt;
use num::traits::Pow;
use num::One;

/// A vector over GF(2): `width` bits packed into a word, bit `i` is
/// coordinate `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gf2Vec {
    width: usize,
    bits: u64,
}

impl Gf2Vec {
    pub fn new(width: usize, bits: u64) -> Gf2Vec {
        assert!(width <= 64, "width above machine cap");
        assert!(width == 64 || bits < (1 << width), "bits exceed width");
        Gf2Vec { width, bits }
    }

    pub fn zero(width: usize) -> Gf2Vec {
        Gf2Vec::new(width, 0)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.width);
        (self.bits >> i) & 1 == 1
    }

    pub fn xor(&self, other: &Gf2Vec) -> Gf2Vec {
        assert_eq!(self.width, other.width);
        Gf2Vec::new(self.width, self.bits ^ other.bits)
    }
}

/// Multilinear polynomial over GF(2) in algebraic normal form: a set of
/// monomials, each a subset of the variables encoded as a bitmask. The empty
/// mask is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Poly {
    variables: usize,
    monomials: BTreeSet<u64>,
}

impl Gf2Poly {
    pub fn zero(variables: usize) -> Gf2Poly {
        Gf2Poly {
            variables,
            monomials: BTreeSet::new(),
        }
    }

    pub fn from_monomials(variables: usize, monomials: impl IntoIterator<Item = u64>) -> Gf2Poly {
        let mut p = Gf2Poly::zero(variables);
        for m in monomials {
            p.toggle_monomial(m);
        }
        p
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn monomials(&self) -> impl Iterator<Item = u64> + '_ {
        self.monomials.iter().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    /// XORs one monomial in or out (coefficients are mod 2).
    pub fn toggle_monomial(&mut self, mask: u64) {
        assert!(
            self.variables == 64 || mask < (1 << self.variables),
            "monomial uses variables beyond {}",
            self.variables
        );
        if !self.monomials.remove(&mask) {
            self.monomials.insert(mask);
        }
    }

    pub fn xor_with(&mut self, other: &Gf2Poly) {
        assert_eq!(self.variables, other.variables);
        for &m in &other.monomials {
            self.toggle_monomial(m);
        }
    }

    /// Evaluates at the assignment whose bit `i` is the value of variable `i`.
    pub fn eval(&self, assignment: u64) -> bool {
        self.monomials
            .iter()
            .filter(|&&m| m & assignment == m)
            .count()
            % 2
            == 1
    }

    pub fn truth_table(&self) -> Vec<bool> {
        (0..1u64 << self.variables).map(|x| self.eval(x)).collect()
    }
}

/// Max monomial size; the zero polynomial has degree 0.
pub fn poly_degree(p: &Gf2Poly) -> usize {
    p.monomials().map(|m| m.count_ones() as usize).max().unwrap_or(0)
}

/// ANF of the boolean function given by its truth table (index bit `i` =
/// value of variable `i`), via the Moebius transform. Panics unless the
/// length is a power of two.
pub fn anf_from_truth_table(values: &[bool]) -> Gf2Poly {
    assert!(
        values.len().is_power_of_two(),
        "truth table length {} is not a power of two",
        values.len()
    );
    let k = values.len().trailing_zeros() as usize;
    let mut coeffs: Vec<bool> = values.to_vec();
    for bit in 0..k {
        let step = 1usize << bit;
        for block in (0..values.len()).step_by(step * 2) {
            for offset in 0..step {
                let lo = block + offset;
                coeffs[lo + step] ^= coeffs[lo];
            }
        }
    }
    Gf2Poly {
        variables: k,
        monomials: coeffs
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c)
            .map(|(m, _)| m as u64)
            .collect(),
    }
}

/// A linear injection `phi : GF(2)^l -> GF(2)^k` given by `l` independent
/// basis rows; `phi(y) = XOR of rows[j] over set bits j of y`. Rows are in
/// reduced echelon form with ascending pivots, so the basis of a subspace is
/// canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient: usize,
    rows: Vec<Gf2Vec>,
}

impl SubspaceBasis {
    pub fn identity(width: usize) -> SubspaceBasis {
        SubspaceBasis {
            ambient: width,
            rows: (0..width).map(|i| Gf2Vec::new(width, 1 << i)).collect(),
        }
    }

    pub fn empty(ambient: usize) -> SubspaceBasis {
        SubspaceBasis {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Dimension `l` of the domain.
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Gf2Vec] {
        &self.rows
    }

    pub fn apply(&self, y: u64) -> Gf2Vec {
        let mut out = Gf2Vec::zero(self.ambient);
        for (j, row) in self.rows.iter().enumerate() {
            if (y >> j) & 1 == 1 {
                out = out.xor(row);
            }
        }
        out
    }

    /// All `2^l` image vectors.
    pub fn image(&self) -> Vec<Gf2Vec> {
        (0..1u64 << self.dim()).map(|y| self.apply(y)).collect()
    }
}

/// True iff the set contains 0 and is closed under XOR.
pub fn is_linear_subspace(vectors: &[Gf2Vec]) -> bool {
    if vectors.is_empty() {
        return false;
    }
    let width = vectors[0].width();
    if vectors.iter().any(|v| v.width() != width) {
        return false;
    }
    let set: BTreeSet<u64> = vectors.iter().map(|v| v.bits()).collect();
    if !set.contains(&0) {
        return false;
    }
    for &a in &set {
        for &b in &set {
            if !set.contains(&(a ^ b)) {
                return false;
            }
        }
    }
    true
}

/// Reduced echelon basis of the span; `None` when the set is not itself a
/// linear subspace.
pub fn subspace_basis(vectors: &[Gf2Vec]) -> Option<SubspaceBasis> {
    if !is_linear_subspace(vectors) {
        return None;
    }
    let width = vectors[0].width();
    // Gaussian elimination with ascending pivot positions, then back
    // substitution for the reduced form.
    let mut rows: Vec<u64> = Vec::new();
    for v in vectors {
        let mut cur = v.bits();
        for &r in &rows {
            let pivot = r & r.wrapping_neg();
            if cur & pivot != 0 {
                cur ^= r;
            }
        }
        if cur != 0 {
            rows.push(cur);
            rows.sort_by_key(|r| r.trailing_zeros());
        }
    }
    let mut reduced = rows.clone();
    for i in 0..reduced.len() {
        let pivot = reduced[i] & reduced[i].wrapping_neg();
        for j in 0..reduced.len() {
            if j != i && reduced[j] & pivot != 0 {
                reduced[j] ^= reduced[i];
            }
        }
    }
    reduced.sort_by_key(|r| r.trailing_zeros());
    Some(SubspaceBasis {
        ambient: width,
        rows: reduced.into_iter().map(|r| Gf2Vec::new(width, r)).collect(),
    })
}

/// ANF of `p(phi(y))` in the `l` domain variables of `phi`, by substituting
/// each `x_i` with the linear form of `phi`'s `i`-th coordinate and expanding
/// multilinearly.
pub fn compose_linear(p: &Gf2Poly, phi: &SubspaceBasis) -> Gf2Poly {
    assert_eq!(
        phi.ambient(),
        p.variables(),
        "coordinatisation ambient width must match the polynomial"
    );
    let l = phi.dim();
    // coordinate_form[i] = set of domain variables j whose basis row touches
    // coordinate i; that is the linear form substituted for x_i.
    let coordinate_form: Vec<u64> = (0..p.variables())
        .map(|i| {
            phi.rows()
                .iter()
                .enumerate()
                .filter(|(_, row)| row.bit(i))
                .fold(0u64, |acc, (j, _)| acc | (1 << j))
        })
        .collect();
    let mut out = Gf2Poly::zero(l);
    for monomial in p.monomials() {
        // Expand the product of the substituted linear forms; x^2 = x folds
        // repeated variables, so terms are variable-set unions.
        let mut terms: BTreeSet<u64> = BTreeSet::new();
        terms.insert(0);
        for i in 0..p.variables() {
            if (monomial >> i) & 1 == 0 {
                continue;
            }
            let form = coordinate_form[i];
            let mut next: BTreeSet<u64> = BTreeSet::new();
            for term in &terms {
                for j in 0..l {
                    if (form >> j) & 1 == 1 {
                        let merged = term | (1 << j);
                        if !next.remove(&merged) {
                            next.insert(merged);
                        }
                    }
                }
            }
            terms = next;
        }
        for term in terms {
            out.toggle_monomial(term);
        }
    }
    out
}

/// Sparse polynomial of degree at most 2 over `n` variables: quadratic pairs
/// `(i, j)` with `i < j`, a linear index set, and a constant bit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuadPoly {
    n: usize,
    quad: BTreeSet<(usize, usize)>,
    linear: BTreeSet<usize>,
    constant: bool,
}

impl QuadPoly {
    pub fn new(n: usize) -> QuadPoly {
        QuadPoly {
            n,
            quad: BTreeSet::new(),
            linear: BTreeSet::new(),
            constant: false,
        }
    }

    pub fn variables(&self) -> usize {
        self.n
    }

    pub fn quadratic_terms(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.quad.iter().copied()
    }

    pub fn linear_terms(&self) -> impl Iterator<Item = usize> + '_ {
        self.linear.iter().copied()
    }

    pub fn constant(&self) -> bool {
        self.constant
    }

    /// XORs in `x_i * x_j`; `i == j` folds to the linear term `x_i`.
    pub fn toggle_quadratic(&mut self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n);
        if i == j {
            self.toggle_linear(i);
            return;
        }
        let key = (i.min(j), i.max(j));
        if !self.quad.remove(&key) {
            self.quad.insert(key);
        }
    }

    pub fn toggle_linear(&mut self, i: usize) {
        assert!(i < self.n);
        if !self.linear.remove(&i) {
            self.linear.insert(i);
        }
    }

    pub fn toggle_constant(&mut self) {
        self.constant = !self.constant;
    }

    /// Evaluates at the assignment whose bit `i` is the value of `x_i`
    /// (requires `n <= 64`).
    pub fn eval(&self, assignment: u64) -> bool {
        assert!(self.n <= 64);
        let mut acc = self.constant;
        for &(i, j) in &self.quad {
            acc ^= (assignment >> i) & (assignment >> j) & 1 == 1;
        }
        for &i in &self.linear {
            acc ^= (assignment >> i) & 1 == 1;
        }
        acc
    }
}

/// Dense bitset: `words[w]` holds bits `64w .. 64w+63`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    fn zero(n: usize) -> BitRow {
        BitRow {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    fn set_to(&mut self, i: usize, value: bool) {
        if self.get(i) != value {
            self.flip(i);
        }
    }

    fn xor_with(&mut self, other: &BitRow) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn lowest_set(&self) -> Option<usize> {
        for (w, &word) in self.words.iter().enumerate() {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
        }
        None
    }

    fn iter_set(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let b = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(w * 64 + b)
                }
            })
        })
    }
}

/// Exact number of assignments with `q(x) = 1`, in O(n^3) bit-parallel time.
///
/// The quadratic part is reduced to a direct sum of `u*v` blocks: repeatedly
/// take the lexicographically least pair `x_i x_j` present, complete the
/// square on both variables (an invertible affine substitution), and fold the
/// cross terms back into the remaining polynomial. Each extracted block
/// doubles the signed count `#0 - #1`; the affine residue decides its base
/// value, and `#1` follows from the total `2^n`.
pub fn count_quadratic_ones(q: &QuadPoly) -> BigInt {
    let n = q.variables();
    let mut rows: Vec<BitRow> = (0..n).map(|_| BitRow::zero(n)).collect();
    for (i, j) in q.quadratic_terms() {
        rows[i].flip(j);
        rows[j].flip(i);
    }
    let mut linear = BitRow::zero(n);
    for i in q.linear_terms() {
        linear.flip(i);
    }
    let mut constant = q.constant();

    let mut steps: u32 = 0;
    // Lexicographically least pair each round: the first nonzero row i pairs
    // with its lowest partner j, necessarily j > i by symmetry.
    while let Some(i) = (0..n).find(|&i| !rows[i].is_zero()) {
        let j = rows[i].lowest_set().expect("nonzero row has a set bit");
        debug_assert!(j > i);

        let mut a = rows[i].clone(); // partners of x_i other than x_j
        a.set_to(j, false);
        a.set_to(i, false);
        let mut b = rows[j].clone(); // partners of x_j other than x_i
        b.set_to(i, false);
        b.set_to(j, false);
        let a0 = linear.get(i);
        let b0 = linear.get(j);

        // x_i x_j + x_i A + x_j B + a0 x_i + b0 x_j
        //   = u v + A B + a0 B + b0 A + a0 b0   under the substitution
        // u = x_i + B + b0, v = x_j + A + a0.
        for p in a.iter_set().collect::<Vec<_>>() {
            rows[p].xor_with(&b);
        }
        for p in b.iter_set().collect::<Vec<_>>() {
            rows[p].xor_with(&a);
        }
        // Squares x_p^2 from A B fold into the linear part; their paired
        // diagonal flips above cancelled already.
        let mut a_and_b = a.clone();
        for (w, bw) in a_and_b.words.iter_mut().zip(&b.words) {
            *w &= bw;
        }
        linear.xor_with(&a_and_b);
        if a0 {
            linear.xor_with(&b);
        }
        if b0 {
            linear.xor_with(&a);
        }
        constant ^= a0 & b0;
        // Rows and columns i, j are consumed by the substitution.
        for p in 0..n {
            rows[p].set_to(i, false);
            rows[p].set_to(j, false);
        }
        rows[i] = BitRow::zero(n);
        rows[j] = BitRow::zero(n);
        linear.set_to(i, false);
        linear.set_to(j, false);
        steps += 1;
    }

    // Residue: an affine form on the n - 2*steps unconsumed variables.
    // Signed count d = #0 - #1 of the residue, then d doubles per block.
    let total: BigInt = BigInt::from(2).pow(n as u64);
    let free = (n as u64) - 2 * steps as u64;
    let d_base: BigInt = if !linear.is_zero() {
        BigInt::from(0)
    } else if constant {
        -BigInt::from(2).pow(free)
    } else {
        BigInt::from(2).pow(free)
    };
    let d = d_base * BigInt::from(2).pow(steps as u64);
    let ones = (total - d) / BigInt::from(2);
    debug_assert!(&ones * 2u8 + BigInt::one() != BigInt::one() || true);
    ones
}

/// Guarded enumeration counter; test oracle for [`count_quadratic_ones`].
pub fn count_quadratic_bruteforce(q: &QuadPoly) -> BigInt {
    assert!(q.variables() <= 24, "brute-force counter limited to 24 variables");
    let mut count: u64 = 0;
    for x in 0..1u64 << q.variables() {
        if q.eval(x) {
            count += 1;
        }
    }
    BigInt::from(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anf_known_cases() {
        // AND: x_0 x_1.
        let and = anf_from_truth_table(&[false, false, false, true]);
        assert_eq!(and, Gf2Poly::from_monomials(2, [0b11]));
        // XOR: x_0 + x_1.
        let xor = anf_from_truth_table(&[false, true, true, false]);
        assert_eq!(xor, Gf2Poly::from_monomials(2, [0b01, 0b10]));
        assert!(anf_from_truth_table(&[false; 8]).is_zero());
    }

    #[test]
    fn anf_round_trip_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for k in 0..=10usize {
            let table: Vec<bool> = (0..1usize << k).map(|_| rng.gen()).collect();
            let p = anf_from_truth_table(&table);
            assert_eq!(p.truth_table(), table, "k={k}");
        }
    }

    #[test]
    fn degree_cases() {
        assert_eq!(poly_degree(&Gf2Poly::from_monomials(3, [0b111])), 3);
        assert_eq!(poly_degree(&Gf2Poly::from_monomials(1, [0b1, 0b0])), 1);
        assert_eq!(poly_degree(&Gf2Poly::zero(4)), 0);
    }

    #[test]
    fn subspace_detection() {
        let v = |w, b| Gf2Vec::new(w, b);
        assert!(is_linear_subspace(&[v(2, 0), v(2, 1), v(2, 2), v(2, 3)]));
        assert!(!is_linear_subspace(&[v(2, 0), v(2, 1), v(2, 3)]));
        assert!(is_linear_subspace(&[v(3, 0)]));
        assert!(!is_linear_subspace(&[v(2, 1), v(2, 2), v(2, 3)]));
    }

    #[test]
    fn basis_is_reduced_echelon() {
        let v = |b| Gf2Vec::new(2, b);
        let basis = subspace_basis(&[v(0), v(1), v(2), v(3)]).unwrap();
        assert_eq!(basis.rows(), &[v(1), v(2)]);
        let trivial = subspace_basis(&[Gf2Vec::zero(3)]).unwrap();
        assert_eq!(trivial.dim(), 0);
        // Span {0, 3}: single basis row 11.
        let diag = subspace_basis(&[v(0), v(3)]).unwrap();
        assert_eq!(diag.rows(), &[v(3)]);
    }

    #[test]
    fn basis_spans_exactly_the_subspace() {
        let vectors: Vec<Gf2Vec> = [0b000, 0b011, 0b101, 0b110]
            .iter()
            .map(|&b| Gf2Vec::new(3, b))
            .collect();
        let basis = subspace_basis(&vectors).unwrap();
        assert_eq!(basis.dim(), 2);
        let mut image: Vec<u64> = basis.image().iter().map(|v| v.bits()).collect();
        image.sort_unstable();
        assert_eq!(image, vec![0b000, 0b011, 0b101, 0b110]);
    }

    #[test]
    fn compose_linear_examples() {
        // p = x0 x1 x2, phi(y) = (y, y, y): idempotence collapses to y.
        let p = Gf2Poly::from_monomials(3, [0b111]);
        let phi = SubspaceBasis {
            ambient: 3,
            rows: vec![Gf2Vec::new(3, 0b111)],
        };
        assert_eq!(compose_linear(&p, &phi), Gf2Poly::from_monomials(1, [0b1]));

        let p = Gf2Poly::from_monomials(2, [0b01, 0b10]);
        assert_eq!(compose_linear(&p, &SubspaceBasis::identity(2)), p);

        // p = x0 x1, phi(y0, y1) = (y0, y0 + y1): y0(y0 + y1) = y0 + y0 y1.
        let p = Gf2Poly::from_monomials(2, [0b11]);
        let phi = SubspaceBasis {
            ambient: 2,
            rows: vec![Gf2Vec::new(2, 0b11), Gf2Vec::new(2, 0b10)],
        };
        assert_eq!(compose_linear(&p, &phi), Gf2Poly::from_monomials(2, [0b01, 0b11]));
    }

    #[test]
    fn compose_linear_agrees_pointwise() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let k = rng.gen_range(1..=5usize);
            let l = rng.gen_range(0..=k);
            let rows: Vec<Gf2Vec> = (0..l)
                .map(|j| {
                    // Guarantee independence with a pivot at position j.
                    let noise: u64 = rng.gen_range(0..1 << k);
                    Gf2Vec::new(k, (noise & !((1 << l) - 1)) | (1 << j))
                })
                .collect();
            let phi = SubspaceBasis { ambient: k, rows };
            let table: Vec<bool> = (0..1usize << k).map(|_| rng.gen()).collect();
            let p = anf_from_truth_table(&table);
            let composed = compose_linear(&p, &phi);
            for y in 0..1u64 << l {
                assert_eq!(composed.eval(y), p.eval(phi.apply(y).bits()));
            }
        }
    }

    #[test]
    fn quadratic_counter_examples() {
        let mut q = QuadPoly::new(2);
        q.toggle_quadratic(0, 1);
        assert_eq!(count_quadratic_ones(&q), BigInt::from(1));

        let mut q = QuadPoly::new(4);
        q.toggle_quadratic(0, 1);
        q.toggle_quadratic(2, 3);
        assert_eq!(count_quadratic_ones(&q), BigInt::from(6));

        let mut q = QuadPoly::new(2);
        q.toggle_quadratic(0, 1);
        q.toggle_linear(0);
        q.toggle_constant();
        assert_eq!(count_quadratic_ones(&q), BigInt::from(3));
    }

    #[test]
    fn quadratic_counter_trivial_cases() {
        assert_eq!(count_quadratic_ones(&QuadPoly::new(3)), BigInt::from(0));
        let mut one = QuadPoly::new(3);
        one.toggle_constant();
        assert_eq!(count_quadratic_ones(&one), BigInt::from(8));
        let mut q = QuadPoly::new(2);
        q.toggle_linear(0);
        q.toggle_linear(1);
        assert_eq!(count_quadratic_ones(&q), BigInt::from(2));
    }

    #[test]
    fn quadratic_square_folds_to_linear() {
        let mut q = QuadPoly::new(2);
        q.toggle_quadratic(1, 1);
        assert_eq!(q.quadratic_terms().count(), 0);
        assert_eq!(q.linear_terms().collect::<Vec<_>>(), vec![1]);
    }

    fn random_quad(rng: &mut impl rand::Rng, n: usize) -> QuadPoly {
        let mut q = QuadPoly::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen() {
                    q.toggle_quadratic(i, j);
                }
            }
            if rng.gen() {
                q.toggle_linear(i);
            }
        }
        if rng.gen() {
            q.toggle_constant();
        }
        q
    }

    #[test]
    fn counter_matches_bruteforce_exhaustive_small() {
        // Every quadratic polynomial on up to 4 variables.
        for n in 0..=4usize {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let terms = pairs.len() + n + 1;
            for code in 0..1u64 << terms {
                let mut q = QuadPoly::new(n);
                for (t, &(i, j)) in pairs.iter().enumerate() {
                    if (code >> t) & 1 == 1 {
                        q.toggle_quadratic(i, j);
                    }
                }
                for i in 0..n {
                    if (code >> (pairs.len() + i)) & 1 == 1 {
                        q.toggle_linear(i);
                    }
                }
                if (code >> (terms - 1)) & 1 == 1 {
                    q.toggle_constant();
                }
                assert_eq!(
                    count_quadratic_ones(&q),
                    count_quadratic_bruteforce(&q),
                    "n={n} code={code:b}"
                );
            }
        }
    }

    #[test]
    fn counter_matches_bruteforce_random() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            use rand::Rng;
            let n = rng.gen_range(0..=14usize);
            let q = random_quad(&mut rng, n);
            assert_eq!(count_quadratic_ones(&q), count_quadratic_bruteforce(&q));
        }
    }

    #[test]
    fn counter_plus_zeros_is_total() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            use rand::Rng;
            let n = rng.gen_range(1..=12usize);
            let q = random_quad(&mut rng, n);
            let ones = count_quadratic_ones(&q);
            let mut negated = q.clone();
            negated.toggle_constant();
            let zeros = count_quadratic_ones(&negated);
            assert_eq!(ones + zeros, BigInt::from(2).pow(n as u64));
        }
    }

    #[test]
    fn counter_scales_beyond_enumeration() {
        // Chain f = x_0 x_1 + x_1 x_2 + ... + x_{n-2} x_{n-1}. The signed
        // count d = sum of (-1)^f telescopes through the transfer matrix
        // T = [[1,1],[1,-1]] with T^2 = 2I: d = 1^T T^{n-1} 1 = 2^{ceil(n/2)}.
        for n in [21usize, 22, 200, 201] {
            let mut q = QuadPoly::new(n);
            for i in 0..n - 1 {
                q.toggle_quadratic(i, i + 1);
            }
            let ones = count_quadratic_ones(&q);
            let d = BigInt::from(2).pow(n as u64) - 2 * ones;
            assert_eq!(d, BigInt::from(2).pow(n.div_ceil(2) as u64), "n={n}");
        }
    }
}
