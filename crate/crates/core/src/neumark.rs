//! Lifting unsharp questions to sharp ones on a larger space.
//!
//! Any binary POVM can be realized as a projective measurement on an
//! extended space that contains the original space isometrically; the
//! original effects come back by compressing the lifted projectors. The
//! construction here is spectral: eigendirections of the yes-effect with
//! eigenvalue 0 or 1 are already sharp and stay put, and every fractional
//! eigenvalue `t` is paired with one ancilla direction carrying the 2x2
//! projector block
//!
//! ```text
//! [ t          sqrt(t(1-t)) ]
//! [ sqrt(t(1-t))    1 - t   ]
//! ```
//!
//! so the extension is minimal: one ancilla per fractional eigenvalue.
//! Because sharp question pairs satisfy the order identity in every state,
//! lifting restores the identity that unsharp pairs violate.

use alloc::vec::Vec;

use rand_core::SeedableRng;

use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Tolerance};
use crate::math;
use crate::measurement::{BinaryMeasurement, Convention, QuantumState, ValidationReport};
use crate::qq::qq_statistic;
use crate::random::random_density_matrix;
use crate::Complex64;

/// A binary measurement together with its projective realization on an
/// extended space.
#[derive(Debug, Clone)]
pub struct Dilation {
    original: BinaryMeasurement,
    extended_dim: usize,
    embedding: ComplexMatrix,
    lifted: BinaryMeasurement,
    surplus_ancillas_to_no: usize,
}

impl Dilation {
    /// Assembles a dilation from explicit parts, checking shapes only;
    /// use [`verify_dilation`] to check the semantic invariants.
    pub fn from_parts(
        original: BinaryMeasurement,
        embedding: ComplexMatrix,
        lifted: BinaryMeasurement,
        surplus_ancillas_to_no: usize,
    ) -> Result<Self> {
        if embedding.cols() != original.dim() {
            return Err(Error::DimensionMismatch {
                expected: original.dim(),
                found: embedding.cols(),
            });
        }
        if embedding.rows() != lifted.dim() || lifted.dim() < original.dim() {
            return Err(Error::DimensionMismatch {
                expected: lifted.dim(),
                found: embedding.rows(),
            });
        }
        Ok(Self {
            original,
            extended_dim: lifted.dim(),
            embedding,
            lifted,
            surplus_ancillas_to_no,
        })
    }

    pub fn original(&self) -> &BinaryMeasurement {
        &self.original
    }

    pub fn extended_dim(&self) -> usize {
        self.extended_dim
    }

    /// The isometry V (extended_dim x original_dim) with V†V = I.
    pub fn embedding(&self) -> &ComplexMatrix {
        &self.embedding
    }

    pub fn lifted(&self) -> &BinaryMeasurement {
        &self.lifted
    }

    /// Ancilla directions not used by the construction and assigned
    /// wholly to the no-effect (nonzero only after padding to a common
    /// space).
    pub fn surplus_ancillas_to_no(&self) -> usize {
        self.surplus_ancillas_to_no
    }

    /// Carries a state into the extended space: `V rho V†`.
    pub fn embed_state(&self, state: &QuantumState) -> Result<QuantumState> {
        embed(&self.embedding, state)
    }

    /// `V† M V`, the restriction of an extended-space operator back to
    /// the original space.
    pub fn compress(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.embedding.adjoint() * m) * &self.embedding
    }
}

fn embed(embedding: &ComplexMatrix, state: &QuantumState) -> Result<QuantumState> {
    if state.dim() != embedding.cols() {
        return Err(Error::DimensionMismatch {
            expected: embedding.cols(),
            found: state.dim(),
        });
    }
    let rho = &(embedding * state.rho()) * &embedding.adjoint();
    Ok(QuantumState::from_density_unchecked(rho.hermitized()))
}

fn invalidity_reason(report: &ValidationReport) -> Option<&'static str> {
    if !report.hermitian() {
        Some("effects are not Hermitian")
    } else if !report.positive() {
        Some("effects are not positive semidefinite")
    } else if !report.complete() {
        Some("effects do not sum to identity")
    } else {
        None
    }
}

/// Minimal projective lifting of one binary measurement.
///
/// The extension adds one dimension per eigenvalue of the yes-effect
/// strictly inside (tol, 1 - tol); eigenvalues at 0 and 1 need no help.
/// The embedding maps the original space onto the first coordinates of
/// the extended space.
pub fn dilate_binary(m: &BinaryMeasurement, tol: Tolerance) -> Result<Dilation> {
    let report = m.validate(tol)?;
    if let Some(reason) = invalidity_reason(&report) {
        return Err(Error::InvalidMeasurement {
            name: m.name().into(),
            reason,
        });
    }

    let dim = m.dim();
    let eig = eig_hermitian(m.yes().matrix(), tol)?;
    let fractional: Vec<usize> = (0..dim)
        .filter(|&i| {
            let t = eig.values()[i];
            t > tol.eps() && t < 1.0 - tol.eps()
        })
        .collect();
    let extended_dim = dim + fractional.len();

    let mut yes = ComplexMatrix::zeros(extended_dim, extended_dim);
    let mut next_ancilla = dim;
    for i in 0..dim {
        let t = eig.values()[i].clamp(0.0, 1.0);
        if t <= tol.eps() {
            continue;
        }
        let mut v = eig.vector(i);
        v.resize(extended_dim, Complex64::ZERO);
        if t >= 1.0 - tol.eps() {
            yes = &yes + &ComplexMatrix::outer(&v, &v);
            continue;
        }
        let mut anc = alloc::vec![Complex64::ZERO; extended_dim];
        anc[next_ancilla] = Complex64::ONE;
        next_ancilla += 1;
        let s = math::sqrt(t * (1.0 - t));
        let block = &(&ComplexMatrix::outer(&v, &v).scale(t)
            + &(&ComplexMatrix::outer(&v, &anc) + &ComplexMatrix::outer(&anc, &v)).scale(s))
            + &ComplexMatrix::outer(&anc, &anc).scale(1.0 - t);
        yes = &yes + &block;
    }
    let yes = yes.hermitized();
    let no = &ComplexMatrix::identity(extended_dim) - &yes;
    let lifted = BinaryMeasurement::from_matrices(m.name(), yes, no)?;

    let mut embedding = ComplexMatrix::zeros(extended_dim, dim);
    for i in 0..dim {
        embedding.set(i, i, Complex64::ONE);
    }

    Ok(Dilation {
        original: m.clone(),
        extended_dim,
        embedding,
        lifted,
        surplus_ancillas_to_no: 0,
    })
}

/// Residuals for every dilation invariant, plus the tolerance they were
/// judged against. Failures are reported here, never thrown.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationCertificate {
    isometry_residual: f64,
    hermiticity_residual: f64,
    idempotency_residual: f64,
    completeness_residual: f64,
    compression_residual: f64,
    probability_agreement_residual: f64,
    eps: f64,
}

impl DilationCertificate {
    pub fn isometry_residual(&self) -> f64 {
        self.isometry_residual
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.hermiticity_residual
    }

    pub fn idempotency_residual(&self) -> f64 {
        self.idempotency_residual
    }

    pub fn completeness_residual(&self) -> f64 {
        self.completeness_residual
    }

    pub fn compression_residual(&self) -> f64 {
        self.compression_residual
    }

    pub fn probability_agreement_residual(&self) -> f64 {
        self.probability_agreement_residual
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn residuals(&self) -> [(&'static str, f64); 6] {
        [
            ("isometry", self.isometry_residual),
            ("hermiticity", self.hermiticity_residual),
            ("idempotency", self.idempotency_residual),
            ("completeness", self.completeness_residual),
            ("compression", self.compression_residual),
            ("probability agreement", self.probability_agreement_residual),
        ]
    }

    pub fn passed(&self) -> bool {
        self.residuals().iter().all(|(_, r)| *r <= self.eps)
    }
}

/// Seed for the certificate's random probability-agreement check; fixed
/// so that verification is deterministic.
const CERTIFICATE_SEED: u64 = 0x5eed_cafe;
const CERTIFICATE_STATES: usize = 20;

/// Checks every invariant of a dilation and reports residuals.
///
/// Probability agreement draws a fixed set of random states on the
/// original space and compares first-answer probabilities before and
/// after embedding.
pub fn verify_dilation(d: &Dilation, tol: Tolerance) -> DilationCertificate {
    let v = &d.embedding;
    let ext = ComplexMatrix::identity(d.extended_dim);
    let orig = ComplexMatrix::identity(d.original.dim());

    let isometry_residual = (&v.adjoint() * v).max_abs_diff(&orig);

    let yes = d.lifted.yes().matrix();
    let no = d.lifted.no().matrix();
    let hermiticity_residual = yes
        .hermiticity_residual()
        .unwrap_or(f64::INFINITY)
        .max(no.hermiticity_residual().unwrap_or(f64::INFINITY));
    let idempotency_residual = (yes * yes)
        .max_abs_diff(yes)
        .max((no * no).max_abs_diff(no));
    let completeness_residual = (yes + no).max_abs_diff(&ext);

    let compression_residual = d
        .compress(yes)
        .max_abs_diff(d.original.yes().matrix())
        .max(d.compress(no).max_abs_diff(d.original.no().matrix()));

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(CERTIFICATE_SEED);
    let mut probability_agreement_residual = 0.0f64;
    for _ in 0..CERTIFICATE_STATES {
        let state = random_density_matrix(d.original.dim(), &mut rng);
        if let Ok(lifted_state) = d.embed_state(&state) {
            for (small, big) in [
                (d.original.yes().matrix(), yes),
                (d.original.no().matrix(), no),
            ] {
                let p = (small * state.rho()).trace().re;
                let q = (big * lifted_state.rho()).trace().re;
                probability_agreement_residual = probability_agreement_residual.max((p - q).abs());
            }
        } else {
            probability_agreement_residual = f64::INFINITY;
        }
    }

    DilationCertificate {
        isometry_residual,
        hermiticity_residual,
        idempotency_residual,
        completeness_residual,
        compression_residual,
        probability_agreement_residual,
        eps: tol.eps(),
    }
}

/// Two dilations sharing one extended space and one embedding.
#[derive(Debug, Clone)]
pub struct CommonLift {
    extended_dim: usize,
    embedding: ComplexMatrix,
    a: Dilation,
    b: Dilation,
}

impl CommonLift {
    pub fn extended_dim(&self) -> usize {
        self.extended_dim
    }

    pub fn embedding(&self) -> &ComplexMatrix {
        &self.embedding
    }

    pub fn dilation_a(&self) -> &Dilation {
        &self.a
    }

    pub fn dilation_b(&self) -> &Dilation {
        &self.b
    }

    pub fn lifted_a(&self) -> &BinaryMeasurement {
        self.a.lifted()
    }

    pub fn lifted_b(&self) -> &BinaryMeasurement {
        self.b.lifted()
    }

    pub fn embed_state(&self, state: &QuantumState) -> Result<QuantumState> {
        embed(&self.embedding, state)
    }
}

/// Widens a dilation to a larger extended space. The extra ancilla
/// directions are orthogonal to everything the construction used, so they
/// are assigned wholly to the no-effect, which keeps the pair projective
/// and complete.
fn pad_to(d: &Dilation, target_dim: usize) -> Result<Dilation> {
    if d.extended_dim == target_dim {
        return Ok(d.clone());
    }
    let old = d.lifted.yes().matrix();
    let mut yes = ComplexMatrix::zeros(target_dim, target_dim);
    for i in 0..d.extended_dim {
        for j in 0..d.extended_dim {
            yes.set(i, j, old.get(i, j));
        }
    }
    let no = &ComplexMatrix::identity(target_dim) - &yes;
    let lifted = BinaryMeasurement::from_matrices(d.lifted.name(), yes, no)?;

    let mut embedding = ComplexMatrix::zeros(target_dim, d.original.dim());
    for i in 0..d.original.dim() {
        embedding.set(i, i, Complex64::ONE);
    }

    Ok(Dilation {
        original: d.original.clone(),
        extended_dim: target_dim,
        embedding,
        lifted,
        surplus_ancillas_to_no: d.surplus_ancillas_to_no + (target_dim - d.extended_dim),
    })
}

/// Lifts two questions into one shared extended space.
///
/// Each question is dilated on its own; the one needing fewer ancillas is
/// padded so both live in dimension `d + max(k_A, k_B)`.
pub fn common_space_lift(
    a: &BinaryMeasurement,
    b: &BinaryMeasurement,
    tol: Tolerance,
) -> Result<CommonLift> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let da = dilate_binary(a, tol)?;
    let db = dilate_binary(b, tol)?;
    let extended_dim = da.extended_dim.max(db.extended_dim);
    let da = pad_to(&da, extended_dim)?;
    let db = pad_to(&db, extended_dim)?;
    let embedding = da.embedding.clone();
    Ok(CommonLift {
        extended_dim,
        embedding,
        a: da,
        b: db,
    })
}

/// The order statistic before and after lifting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftedQq {
    /// Statistic of the original pair under the literal convention.
    pub before: f64,
    /// Statistic of the lifted pair on the embedded state; zero up to
    /// roundoff because the lifted pair is projective.
    pub after: f64,
}

/// Compares the order statistic on the original model against the lifted
/// model with the embedded state. Both sides use the literal convention;
/// on the lifted side the conventions coincide anyway since the lifted
/// effects are projectors.
pub fn lifted_qq_check(
    a: &BinaryMeasurement,
    b: &BinaryMeasurement,
    state: &QuantumState,
    tol: Tolerance,
) -> Result<LiftedQq> {
    let before = qq_statistic(state, a, b, Convention::Literal, tol)?.statistic();
    let lift = common_space_lift(a, b, tol)?;
    let embedded = lift.embed_state(state)?;
    let after = qq_statistic(
        &embedded,
        lift.lifted_a(),
        lift.lifted_b(),
        Convention::Literal,
        tol,
    )?
    .statistic();
    Ok(LiftedQq { before, after })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::MeasurementOrder;

    const S12: f64 = 0.2886751345948129; // 1/sqrt(12) = 1/(2 sqrt 3)

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn question_a() -> BinaryMeasurement {
        let q1 = ComplexMatrix::from_real_rows(&[&[5.0 / 6.0, S12], &[S12, 0.5]]).unwrap();
        let q2 = ComplexMatrix::from_real_rows(&[&[1.0 / 6.0, -S12], &[-S12, 0.5]]).unwrap();
        BinaryMeasurement::from_matrices("A", q1, q2).unwrap()
    }

    fn question_b() -> BinaryMeasurement {
        let p1 = ComplexMatrix::from_real_rows(&[&[1.0 / 6.0, S12], &[S12, 0.5]]).unwrap();
        let p2 = ComplexMatrix::from_real_rows(&[&[5.0 / 6.0, -S12], &[-S12, 0.5]]).unwrap();
        BinaryMeasurement::from_matrices("B", p1, p2).unwrap()
    }

    // The published 3x3 projector pairs, with the two top-left entries
    // that completeness forces to 1/6.
    fn fixture_lift_a() -> (ComplexMatrix, ComplexMatrix) {
        let a = S12;
        let b = 1.0 / (3.0 * 2.0f64.sqrt());
        let c = 1.0 / 6.0f64.sqrt();
        let yes = ComplexMatrix::from_real_rows(&[
            &[5.0 / 6.0, a, b],
            &[a, 0.5, -c],
            &[b, -c, 2.0 / 3.0],
        ])
        .unwrap();
        let no = ComplexMatrix::from_real_rows(&[
            &[1.0 / 6.0, -a, -b],
            &[-a, 0.5, c],
            &[-b, c, 1.0 / 3.0],
        ])
        .unwrap();
        (yes, no)
    }

    fn fixture_lift_b() -> (ComplexMatrix, ComplexMatrix) {
        let a = S12;
        let b = 1.0 / (3.0 * 2.0f64.sqrt());
        let c = 1.0 / 6.0f64.sqrt();
        let yes = ComplexMatrix::from_real_rows(&[
            &[1.0 / 6.0, a, -b],
            &[a, 0.5, -c],
            &[-b, -c, 1.0 / 3.0],
        ])
        .unwrap();
        let no = ComplexMatrix::from_real_rows(&[
            &[5.0 / 6.0, -a, b],
            &[-a, 0.5, c],
            &[b, c, 2.0 / 3.0],
        ])
        .unwrap();
        (yes, no)
    }

    fn first_coords_embedding(extended: usize, dim: usize) -> ComplexMatrix {
        let mut v = ComplexMatrix::zeros(extended, dim);
        for i in 0..dim {
            v.set(i, i, Complex64::ONE);
        }
        v
    }

    #[test]
    fn unsharp_questions_need_one_ancilla() {
        for m in [question_a(), question_b()] {
            let d = dilate_binary(&m, tol()).unwrap();
            assert_eq!(d.extended_dim(), 3);
            assert_eq!(d.surplus_ancillas_to_no(), 0);
            let cert = verify_dilation(&d, tol());
            assert!(cert.passed(), "residuals: {:?}", cert.residuals());
            assert!(cert.compression_residual() < 1e-12);
            let report = d.lifted().validate(tol()).unwrap();
            assert!(report.is_valid() && report.projective());
        }
    }

    #[test]
    fn projective_questions_lift_to_themselves() {
        let p = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
        let m = BinaryMeasurement::complement_pair("Z", p).unwrap();
        let d = dilate_binary(&m, tol()).unwrap();
        assert_eq!(d.extended_dim(), 2);
        assert!(d
            .lifted()
            .yes()
            .matrix()
            .max_abs_diff(m.yes().matrix())
            < 1e-12);
        assert!(d.embedding().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        assert!(verify_dilation(&d, tol()).passed());
    }

    #[test]
    fn half_identity_needs_two_ancillas_with_block_form() {
        let half = ComplexMatrix::from_real_rows(&[&[0.5, 0.0], &[0.0, 0.5]]).unwrap();
        let m = BinaryMeasurement::complement_pair("coin", half).unwrap();
        let d = dilate_binary(&m, tol()).unwrap();
        assert_eq!(d.extended_dim(), 4);
        let yes = d.lifted().yes().matrix();
        // Two disjoint blocks [[1/2, 1/2], [1/2, 1/2]] spanning
        // (original i, ancilla i).
        for (i, anc) in [(0, 2), (1, 3)] {
            assert!((yes.get(i, i).re - 0.5).abs() < 1e-12);
            assert!((yes.get(i, anc).re - 0.5).abs() < 1e-12);
            assert!((yes.get(anc, anc).re - 0.5).abs() < 1e-12);
        }
        assert!(yes.get(0, 1).norm_sqr() < 1e-24);
        assert!(yes.get(0, 3).norm_sqr() < 1e-24);
        assert!(verify_dilation(&d, tol()).passed());
    }

    #[test]
    fn published_projector_fixtures_pass_verification() {
        for (m, (yes, no)) in [
            (question_a(), fixture_lift_a()),
            (question_b(), fixture_lift_b()),
        ] {
            let lifted =
                BinaryMeasurement::from_matrices(m.name(), yes, no).unwrap();
            let d = Dilation::from_parts(
                m.clone(),
                first_coords_embedding(3, 2),
                lifted,
                0,
            )
            .unwrap();
            let cert = verify_dilation(&d, tol());
            assert!(cert.passed(), "residuals: {:?}", cert.residuals());
            // Compression recovers the original effects exactly.
            assert!(
                d.compress(d.lifted().yes().matrix())
                    .max_abs_diff(m.yes().matrix())
                    < 1e-12
            );
        }
    }

    #[test]
    fn perturbed_fixture_fails_idempotency() {
        let (mut yes, no) = fixture_lift_a();
        yes.set(0, 1, yes.get(0, 1) + Complex64::new(1e-3, 0.0));
        let lifted = BinaryMeasurement::from_matrices("A", yes, no).unwrap();
        let d = Dilation::from_parts(question_a(), first_coords_embedding(3, 2), lifted, 0)
            .unwrap();
        let cert = verify_dilation(&d, tol());
        assert!(!cert.passed());
        assert!(cert.idempotency_residual() > 1e-4);
    }

    #[test]
    fn common_lift_of_the_reference_pair_is_three_dimensional() {
        let lift = common_space_lift(&question_a(), &question_b(), tol()).unwrap();
        assert_eq!(lift.extended_dim(), 3);
        for d in [lift.dilation_a(), lift.dilation_b()] {
            assert_eq!(d.surplus_ancillas_to_no(), 0);
            assert!(verify_dilation(d, tol()).passed());
        }
    }

    #[test]
    fn mismatched_sharpness_pads_the_projective_side() {
        let p = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
        let sharp = BinaryMeasurement::complement_pair("Z", p).unwrap();
        let lift = common_space_lift(&sharp, &question_b(), tol()).unwrap();
        assert_eq!(lift.extended_dim(), 3);
        assert_eq!(lift.dilation_a().surplus_ancillas_to_no(), 1);
        assert_eq!(lift.dilation_b().surplus_ancillas_to_no(), 0);
        // The padded side stays projective and complete, with the ancilla
        // direction absorbed by "no".
        assert!(verify_dilation(lift.dilation_a(), tol()).passed());
        assert!((lift.lifted_a().no().matrix().get(2, 2).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lifting_restores_the_order_identity() {
        let state = QuantumState::uniform_superposition(2);
        let out = lifted_qq_check(&question_a(), &question_b(), &state, tol()).unwrap();
        let c = 2.0 / (27.0 * 3.0f64.sqrt());
        assert!((out.before - c).abs() < 1e-12);
        assert!(out.after.abs() <= 1e-10);
    }

    #[test]
    fn first_answer_probabilities_survive_the_lift_but_sequences_need_not() {
        let state = QuantumState::uniform_superposition(2);
        let lift = common_space_lift(&question_a(), &question_b(), tol()).unwrap();
        let embedded = lift.embed_state(&state).unwrap();

        let p_before = (question_a().yes().matrix() * state.rho()).trace().re;
        let p_after = (lift.lifted_a().yes().matrix() * embedded.rho()).trace().re;
        assert!((p_before - p_after).abs() < 1e-12);

        // The sequence weights themselves are allowed to move; that is
        // what cancels the order effect.
        let before = crate::measurement::outcome_distribution(
            &state,
            &question_a(),
            &question_b(),
            MeasurementOrder::AFirst,
            Convention::Literal,
            tol(),
        )
        .unwrap();
        let after = crate::measurement::outcome_distribution(
            &embedded,
            lift.lifted_a(),
            lift.lifted_b(),
            MeasurementOrder::AFirst,
            Convention::Literal,
            tol(),
        )
        .unwrap();
        assert!((before.yes_no - after.yes_no).abs() > 1e-3);
    }

    #[test]
    fn invalid_measurements_are_rejected_with_a_reason() {
        let q1 = question_a().yes().matrix().clone();
        let broken = BinaryMeasurement::from_matrices("broken", q1.clone(), q1).unwrap();
        let err = dilate_binary(&broken, tol()).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidMeasurement {
                reason: "effects do not sum to identity",
                ..
            }
        ));
    }
}
