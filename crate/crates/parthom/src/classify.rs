//! The decision procedure: symmetric rational matrix in, verdict out.
//!
//! Each connected component of the matrix is canonicalized to a rank-1
//! weight layer tensored with a sign pattern `H`, then `H` must pass the
//! group condition, admit a polynomial representation, pin to linear
//! subspaces, and keep the correction polynomials at degree at most 2. The
//! first violated condition becomes machine-checkable hardness evidence; if
//! every component survives, the collected witnesses drive the
//! polynomial-time evaluator.

use num::Zero;
use serde::Serialize;

use crate::core_model::{Rational, SymMatrix};
use crate::gf2::SubspaceBasis;
use crate::hadamard::{
    check_degree, check_linearity, construct_representation, group_condition, is_positive_for,
    Representation, SignMatrix,
};
use crate::structure::{
    canonicalize_connected, matrix_components, CanonicalForm, ComponentKind, HardEvidence,
    HardReason, MatrixComponent,
};

/// Everything the evaluator needs for one connected matrix component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentWitness {
    /// Isolated index with zero diagonal; contributes only to single-vertex
    /// graph components.
    Zero,
    /// Sign pattern of order 1: the component is a pure rank-1 layer.
    Rank1 {
        form: CanonicalForm,
        /// True when the single sign entry was -1, contributing
        /// `(-1)^{|E|}` per graph component.
        flipped: bool,
    },
    /// Sign pattern of order `2^k` with a verified representation.
    Hadamard {
        form: CanonicalForm,
        /// True when `-H` was the positive matrix; contributes `(-1)^{|E|}`.
        flipped: bool,
        rep: Representation,
        phi_r: SubspaceBasis,
        phi_c: SubspaceBasis,
    },
}

/// A component paired with the original matrix indices it covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentVerdict {
    pub indices: Vec<usize>,
    pub witness: ComponentWitness,
}

/// Proof object for a tractable matrix; consumed by the evaluator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TractabilityWitness {
    pub matrix: SymMatrix,
    pub components: Vec<ComponentVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Tractable(TractabilityWitness),
    Hard(HardEvidence),
}

impl Verdict {
    pub fn is_tractable(&self) -> bool {
        matches!(self, Verdict::Tractable(_))
    }
}

/// Decides tractability of `Z_A`.
pub fn classify(a: &SymMatrix) -> Verdict {
    let mut components = Vec::new();
    for comp in matrix_components(a) {
        match classify_connected(&comp) {
            Ok(witness) => components.push(ComponentVerdict {
                indices: comp.indices,
                witness,
            }),
            Err(evidence) => return Verdict::Hard(evidence),
        }
    }
    Verdict::Tractable(TractabilityWitness {
        matrix: a.clone(),
        components,
    })
}

/// Runs the full condition chain on one connected component.
pub fn classify_connected(comp: &MatrixComponent) -> Result<ComponentWitness, HardEvidence> {
    if comp.kind == ComponentKind::ZeroSingleton {
        return Ok(ComponentWitness::Zero);
    }
    let mut form = canonicalize_connected(comp)?;
    let r = form.h.len();
    let evidence = |reason| HardEvidence {
        component: comp.indices.clone(),
        reason,
    };

    if r == 1 {
        let flipped = form.h[0][0] == -1;
        form.chain.push(format!(
            "sign pattern has order 1{}; rank-1 evaluation applies",
            if flipped { " with entry -1" } else { "" }
        ));
        return Ok(ComponentWitness::Rank1 { form, flipped });
    }

    let mut h = SignMatrix::new(form.h.clone());
    let flipped = !is_positive_for(&h, &form.lambda_r, &form.lambda_c);
    if flipped {
        h = h.negate();
        form.chain.push(
            "negated H to its positive sign; Z picks up (-1)^|E| per graph component".into(),
        );
    }

    if let Err(fail) = group_condition(&h) {
        return Err(evidence(HardReason::GroupConditionFails {
            transposed: fail.transposed,
            shift: fail.shift,
        }));
    }
    if !r.is_power_of_two() {
        // The group condition forces a power-of-two order; rows that are
        // negations of each other can collapse the product set, so guard
        // rather than assume.
        return Err(evidence(HardReason::GroupConditionFails {
            transposed: false,
            shift: 0,
        }));
    }
    form.chain.push("group condition holds".into());

    let rep = construct_representation(&h, &form.lambda_r, &form.lambda_c);
    form.chain.push(format!(
        "representation X_pi.Y (+) g^R (+) g^C constructed and verified, k = {}",
        rep.k
    ));

    let (phi_r, phi_c) = match check_linearity(&rep, &form.lambda_r, &form.lambda_c) {
        Ok(pair) => pair,
        Err(row_side) => return Err(evidence(HardReason::LambdaNotLinear { row_side })),
    };
    form.chain.push(format!(
        "pinned sets are linear subspaces of dimensions ({}, {})",
        phi_r.dim(),
        phi_c.dim()
    ));

    if let Err((row_side, degree)) = check_degree(&rep, &form.lambda_r, &form.lambda_c, &phi_r, &phi_c)
    {
        return Err(evidence(HardReason::DegreeAboveTwo { row_side, degree }));
    }
    form.chain.push("correction polynomials have degree <= 2 on the pinned subspaces".into());

    Ok(ComponentWitness::Hadamard {
        form,
        flipped,
        rep,
        phi_r,
        phi_c,
    })
}

/// Independent tractability criterion for nonnegative matrices: every
/// connected component's underlying block has rank at most 1. Returns `None`
/// when the matrix has a negative entry and the criterion does not apply.
pub fn bulatov_grohe_tractable(a: &SymMatrix) -> Option<bool> {
    let m = a.order();
    if (0..m).any(|i| (0..m).any(|j| a.entry(i, j) < &Rational::zero())) {
        return None;
    }
    for comp in matrix_components(a) {
        if comp.kind == ComponentKind::ZeroSingleton {
            continue;
        }
        let b = comp.block();
        let rows: Vec<Vec<Rational>> = (0..b.nrows())
            .map(|i| (0..b.ncols()).map(|j| b.entry(i, j).clone()).collect())
            .collect();
        if !rank_at_most_one(&rows) {
            return Some(false);
        }
    }
    Some(true)
}

/// True iff every row is a rational multiple of the first nonzero row.
fn rank_at_most_one(rows: &[Vec<Rational>]) -> bool {
    let pivot = match rows.iter().find(|r| r.iter().any(|e| !e.is_zero())) {
        Some(r) => r,
        None => return true,
    };
    let lead = pivot.iter().position(|e| !e.is_zero()).unwrap();
    rows.iter().all(|row| {
        let scale = &row[lead] / &pivot[lead];
        row.iter()
            .zip(pivot)
            .all(|(e, p)| e == &(p * &scale))
    })
}

/// Serializable summary of a verdict: the condition trail per component or
/// the first hardness evidence, with rationals rendered as strings.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct VerdictReport {
    pub verdict: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<ComponentReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hard: Option<HardReport>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ComponentReport {
    pub indices: Vec<usize>,
    pub kind: String,
    pub conditions: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct HardReport {
    pub component: Vec<usize>,
    pub reason: String,
}

pub fn verdict_report(verdict: &Verdict) -> VerdictReport {
    match verdict {
        Verdict::Tractable(witness) => VerdictReport {
            verdict: "tractable".into(),
            components: witness
                .components
                .iter()
                .map(|c| ComponentReport {
                    indices: c.indices.clone(),
                    kind: match &c.witness {
                        ComponentWitness::Zero => "zero-singleton".into(),
                        ComponentWitness::Rank1 { .. } => "rank-1".into(),
                        ComponentWitness::Hadamard { rep, .. } => {
                            format!("hadamard-order-{}", 1usize << rep.k)
                        }
                    },
                    conditions: match &c.witness {
                        ComponentWitness::Zero => vec!["zero singleton".into()],
                        ComponentWitness::Rank1 { form, .. }
                        | ComponentWitness::Hadamard { form, .. } => form.chain.clone(),
                    },
                })
                .collect(),
            hard: None,
        },
        Verdict::Hard(evidence) => VerdictReport {
            verdict: "hard".into(),
            components: Vec::new(),
            hard: Some(HardReport {
                component: evidence.component.clone(),
                reason: evidence.to_string(),
            }),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_model::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn verdict_of(rows: &[&[i64]]) -> Verdict {
        classify(&SymMatrix::from_int_rows(rows))
    }

    #[test]
    fn corpus_tractable() {
        assert!(verdict_of(&[&[1, 1], &[1, -1]]).is_tractable());
        assert!(verdict_of(&[
            &[1, 1, 1, 1],
            &[1, 1, -1, -1],
            &[1, -1, 1, -1],
            &[1, -1, -1, 1],
        ])
        .is_tractable());
        assert!(verdict_of(&[&[1, -1], &[-1, 1]]).is_tractable());
        for m in 1..=4 {
            assert!(classify(&SymMatrix::identity(m)).is_tractable(), "I_{m}");
        }
    }

    #[test]
    fn corpus_hard() {
        let s = verdict_of(&[&[0, 1], &[1, 1]]);
        assert!(matches!(
            s,
            Verdict::Hard(HardEvidence {
                reason: HardReason::BlockRankAtLeastTwo { .. },
                ..
            })
        ));
        assert!(!verdict_of(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]).is_tractable());
        assert!(!verdict_of(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]]).is_tractable());
    }

    #[test]
    fn h2_witness_shape() {
        match verdict_of(&[&[1, 1], &[1, -1]]) {
            Verdict::Tractable(w) => {
                assert_eq!(w.components.len(), 1);
                match &w.components[0].witness {
                    ComponentWitness::Hadamard { rep, flipped, phi_r, .. } => {
                        assert_eq!(rep.k, 1);
                        assert!(!flipped);
                        assert_eq!(phi_r.dim(), 1);
                    }
                    other => panic!("unexpected witness {other:?}"),
                }
            }
            Verdict::Hard(e) => panic!("H2 must be tractable, got {e}"),
        }
    }

    #[test]
    fn eulerian_matrix_is_rank_one_with_flip() {
        // U = [[1,-1],[-1,1]] collapses to a single plus-minus class.
        match verdict_of(&[&[1, -1], &[-1, 1]]) {
            Verdict::Tractable(w) => match &w.components[0].witness {
                ComponentWitness::Rank1 { form, flipped } => {
                    assert!(!flipped);
                    assert!(form.lambda_r.is_empty());
                }
                other => panic!("unexpected witness {other:?}"),
            },
            Verdict::Hard(e) => panic!("U must be tractable, got {e}"),
        }
    }

    #[test]
    fn negated_identity_flips() {
        match verdict_of(&[&[-1, 0], &[0, -1]]) {
            Verdict::Tractable(w) => {
                for c in &w.components {
                    match &c.witness {
                        ComponentWitness::Rank1 { flipped, .. } => assert!(flipped),
                        other => panic!("unexpected witness {other:?}"),
                    }
                }
            }
            Verdict::Hard(e) => panic!("-I must be tractable, got {e}"),
        }
    }

    #[test]
    fn verdict_is_deterministic() {
        let a = SymMatrix::from_int_rows(&[&[1, 1, 0], &[1, -1, 0], &[0, 0, 2]]);
        assert_eq!(classify(&a), classify(&a));
    }

    #[test]
    fn permutation_preserves_the_verdict_kind() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let m = rng.gen_range(1..=4);
            let mut rows = vec![vec![rat(0); m]; m];
            for i in 0..m {
                for j in i..m {
                    let e = rat(rng.gen_range(-2..=2));
                    rows[i][j] = e.clone();
                    rows[j][i] = e;
                }
            }
            let a = SymMatrix::from_rows(rows.clone()).unwrap();
            // Reverse-order relabelling.
            let perm: Vec<usize> = (0..m).rev().collect();
            let permuted = SymMatrix::from_rows(
                (0..m)
                    .map(|i| (0..m).map(|j| rows[perm[i]][perm[j]].clone()).collect())
                    .collect(),
            )
            .unwrap();
            assert_eq!(
                classify(&a).is_tractable(),
                classify(&permuted).is_tractable()
            );
        }
    }

    #[test]
    fn nonnegative_matches_bulatov_grohe() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let m = rng.gen_range(1..=4);
            let mut rows = vec![vec![rat(0); m]; m];
            for i in 0..m {
                for j in i..m {
                    let e = rat(rng.gen_range(0..=3));
                    rows[i][j] = e.clone();
                    rows[j][i] = e;
                }
            }
            let a = SymMatrix::from_rows(rows).unwrap();
            let bg = bulatov_grohe_tractable(&a).expect("nonnegative");
            assert_eq!(classify(&a).is_tractable(), bg, "matrix {a:?}");
        }
    }

    #[test]
    fn bulatov_grohe_examples() {
        assert_eq!(
            bulatov_grohe_tractable(&SymMatrix::from_int_rows(&[&[0, 1], &[1, 1]])),
            Some(false)
        );
        assert_eq!(
            bulatov_grohe_tractable(&SymMatrix::from_int_rows(&[&[1, 2], &[2, 4]])),
            Some(true)
        );
        assert_eq!(
            bulatov_grohe_tractable(&SymMatrix::from_int_rows(&[&[1, -1], &[-1, 1]])),
            None
        );
    }

    #[test]
    fn report_serializes() {
        let report = verdict_report(&verdict_of(&[&[1, 1], &[1, -1]]));
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"tractable\""));
        let hard = verdict_report(&verdict_of(&[&[0, 1], &[1, 1]]));
        assert_eq!(hard.verdict, "hard");
        assert!(hard.hard.unwrap().reason.contains("rank"));
    }
}
