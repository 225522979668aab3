//! Binary questions as two-outcome measurements.
//!
//! A question is a pair of effects (yes, no) that sum to the identity. Two
//! update conventions are supported for the state change caused by an
//! answer:
//!
//! * [`Convention::Literal`] uses the effect itself as the update operator,
//!   `rho -> E rho E / tr(E rho E)`. Joint sequence weights under this rule
//!   need not sum to one unless the effects are projectors.
//! * [`Convention::Sqrt`] uses the positive square root, the Lueders
//!   instrument `rho -> sqrt(E) rho sqrt(E) / tr(E rho)`, whose sequence
//!   weights always form a probability distribution.
//!
//! Both rules agree on projective questions, where `sqrt(E) = E`.

use alloc::string::String;

use crate::eigen::{eig_hermitian, principal_sqrt};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Tolerance};
use crate::Complex64;

/// How an answer updates the state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// Update with the effect itself.
    Literal,
    /// Update with the principal square root of the effect.
    Sqrt,
}

impl Convention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::Literal => "literal",
            Convention::Sqrt => "sqrt",
        }
    }
}

impl core::fmt::Display for Convention {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which question is asked first in a two-question sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasurementOrder {
    AFirst,
    BFirst,
}

impl MeasurementOrder {
    pub fn as_str(&self) -> &'static str {
        match self {
            MeasurementOrder::AFirst => "a-first",
            MeasurementOrder::BFirst => "b-first",
        }
    }
}

impl core::fmt::Display for MeasurementOrder {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One labeled measurement operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    label: String,
    matrix: ComplexMatrix,
}

impl Effect {
    /// Structural checks only (square, finite); the POVM axioms are
    /// examined by [`BinaryMeasurement::validate`].
    pub fn new(label: impl Into<String>, matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NonSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            label: label.into(),
            matrix,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// A yes/no question: two effects on the same space.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMeasurement {
    name: String,
    yes: Effect,
    no: Effect,
}

impl BinaryMeasurement {
    pub fn new(name: impl Into<String>, yes: Effect, no: Effect) -> Result<Self> {
        if yes.dim() != no.dim() {
            return Err(Error::DimensionMismatch {
                expected: yes.dim(),
                found: no.dim(),
            });
        }
        Ok(Self {
            name: name.into(),
            yes,
            no,
        })
    }

    pub fn from_matrices(
        name: impl Into<String>,
        yes: ComplexMatrix,
        no: ComplexMatrix,
    ) -> Result<Self> {
        Self::new(name, Effect::new("yes", yes)?, Effect::new("no", no)?)
    }

    /// Builds the question whose no-effect is `I - yes`.
    pub fn complement_pair(name: impl Into<String>, yes: ComplexMatrix) -> Result<Self> {
        let id = ComplexMatrix::identity(yes.rows());
        let no = &id - &yes;
        Self::from_matrices(name, yes, no)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn yes(&self) -> &Effect {
        &self.yes
    }

    pub fn no(&self) -> &Effect {
        &self.no
    }

    pub fn effect(&self, answer_yes: bool) -> &Effect {
        if answer_yes {
            &self.yes
        } else {
            &self.no
        }
    }

    pub fn dim(&self) -> usize {
        self.yes.dim()
    }

    /// Checks the POVM axioms effect by effect and reports residuals.
    ///
    /// Positivity is judged on the Hermitian part of each effect, so a
    /// report is produced even for badly non-Hermitian input. Fails only
    /// if the eigensolver does, which finite input does not trigger.
    pub fn validate(&self, tol: Tolerance) -> Result<ValidationReport> {
        let yes = EffectReport::for_effect(&self.yes, tol)?;
        let no = EffectReport::for_effect(&self.no, tol)?;
        let sum = &self.yes.matrix + &self.no.matrix;
        let completeness_residual = sum.max_abs_diff(&ComplexMatrix::identity(self.dim()));
        Ok(ValidationReport {
            yes,
            no,
            completeness_residual,
            eps: tol.eps(),
        })
    }
}

/// Residuals for a single effect.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectReport {
    label: String,
    hermiticity_residual: f64,
    min_eigenvalue: f64,
    idempotency_residual: f64,
}

impl EffectReport {
    fn for_effect(effect: &Effect, tol: Tolerance) -> Result<Self> {
        let m = effect.matrix();
        let hermiticity_residual = m.hermiticity_residual()?;
        let herm = m.hermitized();
        let eig = eig_hermitian(&herm, tol)?;
        let min_eigenvalue = eig.values().first().copied().unwrap_or(0.0);
        let idempotency_residual = (m * m).max_abs_diff(m);
        Ok(Self {
            label: effect.label().into(),
            hermiticity_residual,
            min_eigenvalue,
            idempotency_residual,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.hermiticity_residual
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// Entrywise residual of `E^2 - E`; zero for projectors.
    pub fn idempotency_residual(&self) -> f64 {
        self.idempotency_residual
    }
}

/// Axiom-by-axiom verdict for a binary measurement at a given tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    yes: EffectReport,
    no: EffectReport,
    completeness_residual: f64,
    eps: f64,
}

impl ValidationReport {
    pub fn yes(&self) -> &EffectReport {
        &self.yes
    }

    pub fn no(&self) -> &EffectReport {
        &self.no
    }

    pub fn completeness_residual(&self) -> f64 {
        self.completeness_residual
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn hermitian(&self) -> bool {
        self.yes.hermiticity_residual <= self.eps && self.no.hermiticity_residual <= self.eps
    }

    pub fn positive(&self) -> bool {
        self.yes.min_eigenvalue >= -self.eps && self.no.min_eigenvalue >= -self.eps
    }

    pub fn complete(&self) -> bool {
        self.completeness_residual <= self.eps
    }

    /// True when both effects are idempotent, i.e. the question is sharp.
    pub fn projective(&self) -> bool {
        self.yes.idempotency_residual <= self.eps && self.no.idempotency_residual <= self.eps
    }

    pub fn is_valid(&self) -> bool {
        self.hermitian() && self.positive() && self.complete()
    }
}

/// A density matrix, validated at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    rho: ComplexMatrix,
}

impl QuantumState {
    /// Accepts a matrix that is Hermitian, positive semidefinite, and of
    /// unit trace, each within `tol`.
    pub fn from_density(rho: ComplexMatrix, tol: Tolerance) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::NonSquare {
                rows: rho.rows(),
                cols: rho.cols(),
            });
        }
        if !rho.is_finite() {
            return Err(Error::NonFinite);
        }
        if !tol.accepts(rho.hermiticity_residual()?) {
            return Err(Error::InvalidState {
                reason: "not Hermitian",
            });
        }
        let eig = eig_hermitian(&rho, tol)?;
        if eig.values().first().copied().unwrap_or(0.0) < -tol.eps() {
            return Err(Error::InvalidState {
                reason: "not positive semidefinite",
            });
        }
        let tr = rho.trace();
        if !tol.accepts((tr.re - 1.0).abs()) || !tol.accepts(tr.im.abs()) {
            return Err(Error::InvalidState {
                reason: "trace differs from 1",
            });
        }
        Ok(Self { rho })
    }

    /// Pure state from an amplitude vector, normalized here; the all-zero
    /// vector is rejected.
    pub fn from_amplitudes(amplitudes: &[Complex64]) -> Result<Self> {
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(Error::ZeroStateVector);
        }
        let rho = ComplexMatrix::outer(amplitudes, amplitudes).scale(1.0 / norm_sq);
        Ok(Self { rho })
    }

    /// Qubit pure state with amplitudes `(alpha, beta)`.
    pub fn qubit(alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::from_amplitudes(&[alpha, beta])
    }

    /// Equal-weight pure superposition of all basis states.
    pub fn uniform_superposition(dim: usize) -> Self {
        let v = alloc::vec![Complex64::ONE; dim.max(1)];
        Self::from_amplitudes(&v).expect("nonzero vector")
    }

    pub(crate) fn from_density_unchecked(rho: ComplexMatrix) -> Self {
        Self { rho }
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }
}

/// The operator a given answer applies to the state under a convention.
pub fn update_operator(
    effect: &Effect,
    convention: Convention,
    tol: Tolerance,
) -> Result<ComplexMatrix> {
    match convention {
        Convention::Literal => Ok(effect.matrix().clone()),
        Convention::Sqrt => principal_sqrt(effect.matrix(), tol),
    }
}

fn check_state_dim(state: &QuantumState, dim: usize) -> Result<()> {
    if state.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: state.dim(),
        });
    }
    Ok(())
}

/// Unnormalized post-answer operator `M rho M†` and its trace.
fn conditional(
    state: &QuantumState,
    effect: &Effect,
    convention: Convention,
    tol: Tolerance,
) -> Result<(ComplexMatrix, f64)> {
    check_state_dim(state, effect.dim())?;
    let m = update_operator(effect, convention, tol)?;
    let out = &(&m * state.rho()) * &m.adjoint();
    let tr = out.trace();
    if tr.im.abs() > crate::linalg::REAL_TRACE_EPS * (1.0 + tr.re.abs()) {
        return Err(Error::NonRealTrace { imaginary: tr.im });
    }
    Ok((out, tr.re))
}

/// Probability of one answer: `tr(M rho M†)`.
pub fn answer_probability(
    state: &QuantumState,
    effect: &Effect,
    convention: Convention,
    tol: Tolerance,
) -> Result<f64> {
    conditional(state, effect, convention, tol).map(|(_, p)| p)
}

/// State after observing an answer, `M rho M† / tr(M rho M†)`.
///
/// Conditioning on an answer whose probability is below `tol` is refused;
/// the quotient would be dominated by roundoff.
pub fn post_state(
    state: &QuantumState,
    effect: &Effect,
    convention: Convention,
    tol: Tolerance,
) -> Result<QuantumState> {
    let (num, p) = conditional(state, effect, convention, tol)?;
    if p < tol.eps() {
        return Err(Error::ZeroProbabilityOutcome { probability: p });
    }
    Ok(QuantumState::from_density_unchecked(
        num.scale(1.0 / p).hermitized(),
    ))
}

/// Weight of the answer sequence (first, second):
/// `tr(M2 M1 rho M1† M2†)`.
///
/// Under the sqrt convention these weights form a probability
/// distribution over the four answer pairs; under the literal convention
/// they are the raw sequence weights, which sum to one only for sharp
/// questions.
pub fn sequential_joint_prob(
    state: &QuantumState,
    first: &Effect,
    second: &Effect,
    convention: Convention,
    tol: Tolerance,
) -> Result<f64> {
    check_state_dim(state, first.dim())?;
    if first.dim() != second.dim() {
        return Err(Error::DimensionMismatch {
            expected: first.dim(),
            found: second.dim(),
        });
    }
    let m1 = update_operator(first, convention, tol)?;
    let m2 = update_operator(second, convention, tol)?;
    let m21 = &m2 * &m1;
    let out = &(&m21 * state.rho()) * &m21.adjoint();
    let tr = out.trace();
    if tr.im.abs() > crate::linalg::REAL_TRACE_EPS * (1.0 + tr.re.abs()) {
        return Err(Error::NonRealTrace { imaginary: tr.im });
    }
    Ok(tr.re)
}

/// Joint weights of both answers for a fixed question order.
///
/// Field names give the answers in the order they were obtained:
/// `yes_no` is "first question yes, second question no".
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeTable {
    pub order: MeasurementOrder,
    pub convention: Convention,
    pub yes_yes: f64,
    pub yes_no: f64,
    pub no_yes: f64,
    pub no_no: f64,
}

impl OutcomeTable {
    /// Cells in the fixed order (yy, yn, ny, nn).
    pub fn probabilities(&self) -> [f64; 4] {
        [self.yes_yes, self.yes_no, self.no_yes, self.no_no]
    }

    pub fn total(&self) -> f64 {
        self.yes_yes + self.yes_no + self.no_yes + self.no_no
    }

    /// `1 - total`; zero (up to roundoff) under the sqrt convention and
    /// for sharp questions under either convention.
    pub fn normalization_defect(&self) -> f64 {
        1.0 - self.total()
    }
}

/// All four sequence weights for questions `a` and `b` in a given order.
pub fn outcome_distribution(
    state: &QuantumState,
    a: &BinaryMeasurement,
    b: &BinaryMeasurement,
    order: MeasurementOrder,
    convention: Convention,
    tol: Tolerance,
) -> Result<OutcomeTable> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let (first, second) = match order {
        MeasurementOrder::AFirst => (a, b),
        MeasurementOrder::BFirst => (b, a),
    };
    let cell = |fy: bool, sy: bool| {
        sequential_joint_prob(state, first.effect(fy), second.effect(sy), convention, tol)
    };
    Ok(OutcomeTable {
        order,
        convention,
        yes_yes: cell(true, true)?,
        yes_no: cell(true, false)?,
        no_yes: cell(false, true)?,
        no_no: cell(false, false)?,
    })
}
