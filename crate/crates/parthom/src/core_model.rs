//! Exact scalars, matrices, multigraphs, and the graph transforms the
//! partition-function identities quantify over.
//!
//! All arithmetic is exact: scalars are arbitrary-precision rationals, and
//! every type here is an immutable value. Transforms return new graphs or
//! matrices rather than mutating in place.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar: reduced fraction, positive denominator.
pub type Rational = num::BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `p/q`. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("matrix is not symmetric at ({i},{j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("edge endpoint {vertex} out of range (n={n})")]
    VertexOutOfRange { vertex: usize, n: usize },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses `"p"` or `"p/q"` with optional leading sign into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (s, None),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| syntax(0, format!("bad numerator {num_str:?}")))?;
    let den: BigInt = match den_str {
        Some(q) => q
            .parse()
            .map_err(|_| syntax(0, format!("bad denominator {q:?}")))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(syntax(0, "zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Renders a rational as `"p"` for integers and `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fixed-point decimal rendering with `digits` fractional digits, rounded
/// toward zero. Used by the CLI's `--decimal` flag; always an approximation
/// unless the rational happens to terminate.
pub fn decimal_string(r: &Rational, digits: u32) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (abs * Rational::from_integer(scale.clone())).floor();
    let scaled = scaled.to_integer();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part:0>width$}", width = digits as usize)
    }
}

/// Undirected multigraph: dense 0-based vertices, edge multiset with loops.
///
/// A loop at `v` contributes 2 to `degree(v)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multigraph {
    vertex_count: usize,
    /// Keys are normalized pairs `(u, v)` with `u <= v`; values are
    /// multiplicities, always >= 1.
    edges: BTreeMap<(usize, usize), u64>,
}

impl Multigraph {
    pub fn new(vertex_count: usize) -> Self {
        Multigraph {
            vertex_count,
            edges: BTreeMap::new(),
        }
    }

    /// Builds a graph from `(u, v)` pairs, each with multiplicity 1 per entry.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Multigraph::new(vertex_count);
        for &(u, v) in edges {
            g.add_edge(u, v, 1);
        }
        g
    }

    /// Adds `k` parallel copies of the edge `{u, v}`. Panics on out-of-range
    /// endpoints; `k = 0` is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize, k: u64) {
        assert!(
            u < self.vertex_count && v < self.vertex_count,
            "edge ({u},{v}) out of range for n={}",
            self.vertex_count
        );
        if k == 0 {
            return;
        }
        let key = (u.min(v), u.max(v));
        *self.edges.entry(key).or_insert(0) += k;
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Total edge multiplicity, loops counted once each.
    pub fn edge_count(&self) -> u64 {
        self.edges.values().sum()
    }

    /// Normalized edge entries `((u, v), multiplicity)` with `u <= v`.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.edges.iter().map(|(&e, &k)| (e, k))
    }

    /// Degree of `v`: non-loop incidences plus twice the loop count.
    pub fn degree(&self, v: usize) -> u64 {
        let mut d = 0;
        for (&(a, b), &k) in &self.edges {
            if a == v && b == v {
                d += 2 * k;
            } else if a == v || b == v {
                d += k;
            }
        }
        d
    }

    pub fn degrees(&self) -> Vec<u64> {
        let mut d = vec![0u64; self.vertex_count];
        for (&(a, b), &k) in &self.edges {
            if a == b {
                d[a] += 2 * k;
            } else {
                d[a] += k;
                d[b] += k;
            }
        }
        d
    }

    /// Replaces each edge (including loops) by a fresh path of `s` edges.
    /// Original vertices keep their indices; the `s - 1` interior vertices of
    /// each path are appended in edge order.
    pub fn stretch(&self, s: u64) -> Multigraph {
        assert!(s >= 1, "stretch factor must be >= 1");
        let mut out = Multigraph::new(self.vertex_count);
        let mut next = self.vertex_count;
        for (&(u, v), &k) in &self.edges {
            for _ in 0..k {
                if s == 1 {
                    out.add_vertices_up_to(next);
                    out.add_edge(u, v, 1);
                    continue;
                }
                let mut prev = u;
                for step in 0..s {
                    let target = if step == s - 1 {
                        v
                    } else {
                        next += 1;
                        next - 1
                    };
                    out.add_vertices_up_to(next);
                    out.add_edge(prev, target, 1);
                    prev = target;
                }
            }
        }
        out
    }

    /// Multiplies every edge multiplicity by `t`.
    pub fn thicken(&self, t: u64) -> Multigraph {
        assert!(t >= 1, "thicken factor must be >= 1");
        let mut out = self.clone();
        for k in out.edges.values_mut() {
            *k *= t;
        }
        out
    }

    fn add_vertices_up_to(&mut self, n: usize) {
        if n > self.vertex_count {
            self.vertex_count = n;
        }
    }

    /// Connected components in ascending order of their smallest vertex.
    /// Each component comes with the map from its local indices back to the
    /// original vertex indices (ascending). Isolated vertices are singleton
    /// components.
    pub fn components(&self) -> Vec<(Multigraph, Vec<usize>)> {
        let n = self.vertex_count;
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in self.edges.keys() {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            comp[start] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for &w in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }
        comps
            .into_iter()
            .map(|members| {
                let mut local = BTreeMap::new();
                for (i, &v) in members.iter().enumerate() {
                    local.insert(v, i);
                }
                let mut g = Multigraph::new(members.len());
                for (&(u, v), &k) in &self.edges {
                    if let Some(&lu) = local.get(&u) {
                        g.add_edge(lu, local[&v], k);
                    }
                }
                (g, members)
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// The unique 2-coloring of a connected graph, or `None` if it is not
    /// bipartite (a loop forces `None`). The side containing the
    /// lowest-index vertex is `U`. Panics if the graph is disconnected.
    pub fn bipartition(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        assert!(self.is_connected(), "bipartition requires a connected graph");
        if self.vertex_count == 0 {
            return Some((Vec::new(), Vec::new()));
        }
        let n = self.vertex_count;
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in self.edges.keys() {
            if u == v {
                return None;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut color = vec![u8::MAX; n];
        color[0] = 0;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    stack.push(w);
                } else if color[w] == color[v] {
                    return None;
                }
            }
        }
        let u_side = (0..n).filter(|&v| color[v] == 0).collect();
        let w_side = (0..n).filter(|&v| color[v] == 1).collect();
        Some((u_side, w_side))
    }

    /// Parses the graph text format: first line `n=<vertex_count>`, then
    /// lines `u v k` for edge `{u,v}` with multiplicity `k`. Blank lines and
    /// `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<Multigraph, ParseError> {
        let mut lines = numbered_lines(text);
        let (ln, header) = lines
            .next()
            .ok_or_else(|| syntax(0, "empty input, expected n=<vertex_count>"))?;
        let n: usize = header
            .strip_prefix("n=")
            .ok_or_else(|| syntax(ln, "expected n=<vertex_count>"))?
            .trim()
            .parse()
            .map_err(|_| syntax(ln, "bad vertex count"))?;
        let mut g = Multigraph::new(n);
        for (ln, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(syntax(ln, "expected: u v k"));
            }
            let parse =
                |s: &str| -> Result<u64, ParseError> { s.parse().map_err(|_| syntax(ln, format!("bad number {s:?}"))) };
            let (u, v, k) = (parse(fields[0])? as usize, parse(fields[1])? as usize, parse(fields[2])?);
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(ParseError::VertexOutOfRange { vertex, n });
                }
            }
            g.add_edge(u, v, k);
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.vertex_count);
        for (&(u, v), &k) in &self.edges {
            writeln!(out, "{u} {v} {k}").unwrap();
        }
        out
    }
}

fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Symmetric matrix of exact rationals; the `A` of `Z_A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatrix {
    order: usize,
    entries: Vec<Vec<Rational>>,
}

impl SymMatrix {
    /// Builds a matrix from rows, checking squareness and symmetry.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<SymMatrix, ParseError> {
        let order = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(syntax(i + 1, format!("row has {} entries, expected {order}", row.len())));
            }
        }
        for i in 0..order {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(ParseError::NotSymmetric { i, j });
                }
            }
        }
        Ok(SymMatrix { order, entries: rows })
    }

    /// Builds from integer rows; panics on asymmetry (test helper).
    pub fn from_int_rows(rows: &[&[i64]]) -> SymMatrix {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect();
        SymMatrix::from_rows(rows).expect("symmetric integer matrix")
    }

    pub fn identity(order: usize) -> SymMatrix {
        let rows = (0..order)
            .map(|i| (0..order).map(|j| if i == j { rat(1) } else { rat(0) }).collect())
            .collect();
        SymMatrix { order, entries: rows }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    /// Induced submatrix on `indices` (in the given order).
    pub fn submatrix(&self, indices: &[usize]) -> SymMatrix {
        let entries = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.entries[i][j].clone()).collect())
            .collect();
        SymMatrix {
            order: indices.len(),
            entries,
        }
    }

    /// Entrywise `t`-th power; realizes the thickening identity's `A^(t)`.
    pub fn entrywise_power(&self, t: u32) -> SymMatrix {
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|x| pow_rational(x, t)).collect())
            .collect();
        SymMatrix {
            order: self.order,
            entries,
        }
    }

    /// Kronecker product; the entry at `(i*o2+k, j*o2+l)` is `A_{ij} B_{kl}`.
    pub fn tensor(&self, other: &SymMatrix) -> SymMatrix {
        let o1 = self.order;
        let o2 = other.order;
        let entries = (0..o1 * o2)
            .map(|r| {
                (0..o1 * o2)
                    .map(|c| &self.entries[r / o2][c / o2] * &other.entries[r % o2][c % o2])
                    .collect()
            })
            .collect();
        SymMatrix {
            order: o1 * o2,
            entries,
        }
    }

    pub fn negate(&self) -> SymMatrix {
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|x| -x.clone()).collect())
            .collect();
        SymMatrix {
            order: self.order,
            entries,
        }
    }

    /// Parses the matrix text format: first line `m=<order>`, then `m` rows
    /// of `m` whitespace-separated rationals written `p/q` or `p`.
    pub fn from_text(text: &str) -> Result<SymMatrix, ParseError> {
        let mut lines = numbered_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| syntax(0, "empty input, expected m=<order>"))?;
        let m: usize = header
            .strip_prefix("m=")
            .ok_or_else(|| syntax(ln, "expected m=<order>"))?
            .trim()
            .parse()
            .map_err(|_| syntax(ln, "bad order"))?;
        let mut rows = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, line) = lines.next().ok_or_else(|| syntax(0, format!("expected {m} matrix rows")))?;
            let row: Result<Vec<Rational>, ParseError> = line
                .split_whitespace()
                .map(|tok| parse_rational(tok).map_err(|_| syntax(ln, format!("bad rational {tok:?}"))))
                .collect();
            let row = row?;
            if row.len() != m {
                return Err(syntax(ln, format!("row has {} entries, expected {m}", row.len())));
            }
            rows.push(row);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(syntax(ln, "trailing content after matrix rows"));
        }
        SymMatrix::from_rows(rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("m={}\n", self.order);
        for row in &self.entries {
            let line: Vec<String> = row.iter().map(format_rational).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }
}

fn pow_rational(x: &Rational, t: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..t {
        acc *= x;
    }
    acc
}

/// Exact power with `u64` exponent; `x^0 = 1` including for `x = 0`.
pub fn rational_pow(x: &Rational, mut e: u64) -> Rational {
    let mut base = x.clone();
    let mut acc = Rational::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Diagonal matrix of exact rationals; the `D` and `O` of `Z_{A,D,O}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagMatrix {
    diagonal: Vec<Rational>,
}

impl DiagMatrix {
    pub fn new(diagonal: Vec<Rational>) -> DiagMatrix {
        DiagMatrix { diagonal }
    }

    pub fn identity(order: usize) -> DiagMatrix {
        DiagMatrix {
            diagonal: vec![rat(1); order],
        }
    }

    /// Identity restricted to `lambda`: 1 on listed indices, 0 elsewhere.
    pub fn identity_restricted(order: usize, lambda: &[usize]) -> DiagMatrix {
        let mut diagonal = vec![rat(0); order];
        for &i in lambda {
            diagonal[i] = rat(1);
        }
        DiagMatrix { diagonal }
    }

    pub fn order(&self) -> usize {
        self.diagonal.len()
    }

    pub fn entry(&self, i: usize) -> &Rational {
        &self.diagonal[i]
    }

    pub fn diagonal(&self) -> &[Rational] {
        &self.diagonal
    }

    pub fn tensor(&self, other: &DiagMatrix) -> DiagMatrix {
        let diagonal = self
            .diagonal
            .iter()
            .flat_map(|a| other.diagonal.iter().map(move |b| a * b))
            .collect();
        DiagMatrix { diagonal }
    }
}

/// The triple `(A, D, O)` of a parity-distinguishing partition function:
/// `D` weights even-degree vertices, `O` odd-degree vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdpfInstance {
    pub a: SymMatrix,
    pub d: DiagMatrix,
    pub o: DiagMatrix,
}

impl PdpfInstance {
    pub fn new(a: SymMatrix, d: DiagMatrix, o: DiagMatrix) -> PdpfInstance {
        assert_eq!(a.order(), d.order(), "matrix orders must agree");
        assert_eq!(a.order(), o.order(), "matrix orders must agree");
        PdpfInstance { a, d, o }
    }

    /// Plain `Z_A` as a pdpf: `D = O = I`.
    pub fn plain(a: SymMatrix) -> PdpfInstance {
        let m = a.order();
        PdpfInstance::new(a, DiagMatrix::identity(m), DiagMatrix::identity(m))
    }

    /// Vertex-weighted `Z_{A,D}` as a pdpf: `O = D`.
    pub fn vertex_weighted(a: SymMatrix, d: DiagMatrix) -> PdpfInstance {
        let o = d.clone();
        PdpfInstance::new(a, d, o)
    }

    pub fn order(&self) -> usize {
        self.a.order()
    }
}

/// A multigraph with one labelled vertex, the `z` of pinned evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledGraph {
    pub graph: Multigraph,
    pub z: usize,
}

impl LabelledGraph {
    pub fn new(graph: Multigraph, z: usize) -> LabelledGraph {
        assert!(z < graph.vertex_count(), "label out of range");
        LabelledGraph { graph, z }
    }
}

/// The matrix `A (D A)^(s-1)` of the stretching identity
/// `Z_{A(DA)^{s-1},D}(G) = Z_{A,D}(stretch(G, s))`.
pub fn stretched_matrix(a: &SymMatrix, d: &DiagMatrix, s: u64) -> SymMatrix {
    assert!(s >= 1);
    assert_eq!(a.order(), d.order());
    let m = a.order();
    // acc = A (D A)^(step); symmetric at every step since A and D are.
    let mut acc = a.clone();
    for _ in 1..s {
        let mut next = vec![vec![rat(0); m]; m];
        #[allow(clippy::needless_range_loop)]
        for i in 0..m {
            for j in 0..m {
                let mut sum = rat(0);
                for k in 0..m {
                    sum += acc.entry(i, k) * d.entry(k) * a.entry(k, j);
                }
                next[i][j] = sum;
            }
        }
        acc = SymMatrix::from_rows(next).expect("A(DA)^k stays symmetric");
    }
    acc
}
