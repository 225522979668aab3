//! The order statistic for a pair of questions.
//!
//! For questions A and B asked in both orders, the quantity
//!
//! ```text
//! p(AyBn) + p(AnBy) - p(ByAn) - p(BnAy)
//! ```
//!
//! vanishes for every state when both questions are projective. This
//! module computes it two ways: directly from the four sequence weights,
//! and as `tr(rho K)` for a Hermitian operator K assembled from the update
//! operators. The operator form exposes the statistic's state dependence:
//! its top eigenvalue is the largest violation any state can produce, and
//! its kernel structure carves out the zero-violation states.

use alloc::vec::Vec;

use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::linalg::{real_trace_product, ComplexMatrix, Tolerance};
use crate::math;
use crate::measurement::{
    outcome_distribution, update_operator, BinaryMeasurement, Convention, MeasurementOrder,
    OutcomeTable, QuantumState,
};
use crate::Complex64;

/// Everything computed for one (state, A, B, convention) analysis.
#[derive(Debug, Clone)]
pub struct QqReport {
    k_operator: ComplexMatrix,
    statistic: f64,
    statistic_from_probabilities: f64,
    convention: Convention,
    a_first: OutcomeTable,
    b_first: OutcomeTable,
    zero_state: bool,
}

impl QqReport {
    /// The Hermitian operator K with statistic = `tr(rho K)`.
    pub fn k_operator(&self) -> &ComplexMatrix {
        &self.k_operator
    }

    /// `tr(rho K)`.
    pub fn statistic(&self) -> f64 {
        self.statistic
    }

    /// The same number assembled from the four sequence weights; agrees
    /// with [`statistic`](Self::statistic) to roundoff.
    pub fn statistic_from_probabilities(&self) -> f64 {
        self.statistic_from_probabilities
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn a_first(&self) -> &OutcomeTable {
        &self.a_first
    }

    pub fn b_first(&self) -> &OutcomeTable {
        &self.b_first
    }

    /// Whether `|statistic|` is within the tolerance used for the analysis.
    pub fn zero_state(&self) -> bool {
        self.zero_state
    }
}

/// `p(AyBn) + p(AnBy) - p(ByAn) - p(BnAy)` read off two outcome tables.
pub fn statistic_from_tables(a_first: &OutcomeTable, b_first: &OutcomeTable) -> f64 {
    (a_first.yes_no + a_first.no_yes) - (b_first.yes_no + b_first.no_yes)
}

/// One term `(M2 M1)† (M2 M1)`; manifestly Hermitian and PSD.
fn sequence_term(first: &ComplexMatrix, second: &ComplexMatrix) -> ComplexMatrix {
    let t = second * first;
    &t.adjoint() * &t
}

/// The Hermitian operator K whose expectation is the order statistic:
///
/// ```text
/// K = (Bn Ay)†(Bn Ay) + (By An)†(By An) - (An By)†(An By) - (Ay Bn)†(Ay Bn)
/// ```
///
/// built from the update operators of the given convention. For a pair of
/// projective questions K is the zero matrix, which is the operator form
/// of the order identity.
pub fn qq_operator(
    a: &BinaryMeasurement,
    b: &BinaryMeasurement,
    convention: Convention,
    tol: Tolerance,
) -> Result<ComplexMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let ay = update_operator(a.yes(), convention, tol)?;
    let an = update_operator(a.no(), convention, tol)?;
    let by = update_operator(b.yes(), convention, tol)?;
    let bn = update_operator(b.no(), convention, tol)?;

    let positive = &sequence_term(&ay, &bn) + &sequence_term(&an, &by);
    let negative = &sequence_term(&by, &an) + &sequence_term(&bn, &ay);
    Ok((&positive - &negative).hermitized())
}

/// Full analysis of the order statistic for one state.
///
/// The statistic is evaluated both as `tr(rho K)` and as the four-weight
/// combination; both values are recorded and agree to roundoff. The
/// `zero_state` flag compares `|tr(rho K)|` against `tol`.
pub fn qq_statistic(
    state: &QuantumState,
    a: &BinaryMeasurement,
    b: &BinaryMeasurement,
    convention: Convention,
    tol: Tolerance,
) -> Result<QqReport> {
    let k_operator = qq_operator(a, b, convention, tol)?;
    if state.dim() != k_operator.rows() {
        return Err(Error::DimensionMismatch {
            expected: k_operator.rows(),
            found: state.dim(),
        });
    }
    let statistic = real_trace_product(&k_operator, state.rho())?;
    let a_first = outcome_distribution(state, a, b, MeasurementOrder::AFirst, convention, tol)?;
    let b_first = outcome_distribution(state, a, b, MeasurementOrder::BFirst, convention, tol)?;
    let statistic_from_probabilities = statistic_from_tables(&a_first, &b_first);
    Ok(QqReport {
        k_operator,
        statistic,
        statistic_from_probabilities,
        convention,
        a_first,
        b_first,
        zero_state: statistic.abs() <= tol.eps(),
    })
}

/// Whether the qubit pure state with amplitudes `(alpha, beta)` lies on
/// the zero manifold of the statistic, judged by `|tr(rho K)| <= tol`.
///
/// For the reference model under the literal convention this is
/// equivalent to `Re(conj(alpha) beta) = 0`.
pub fn zero_state_condition(
    alpha: Complex64,
    beta: Complex64,
    a: &BinaryMeasurement,
    b: &BinaryMeasurement,
    convention: Convention,
    tol: Tolerance,
) -> Result<bool> {
    let state = QuantumState::qubit(alpha, beta)?;
    let report = qq_statistic(&state, a, b, convention, tol)?;
    Ok(report.zero_state())
}

/// The largest violation over all states, and a state that attains it.
#[derive(Debug, Clone)]
pub struct MaxViolation {
    pub value: f64,
    pub maximizer: QuantumState,
}

/// Finds the state maximizing the statistic.
///
/// The statistic is linear in the state, so the maximum over all density
/// matrices is the top eigenvalue of K; a maximizer is the projector onto
/// the corresponding eigenvector. No iteration needed.
pub fn max_violation(
    a: &BinaryMeasurement,
    b: &BinaryMeasurement,
    convention: Convention,
    tol: Tolerance,
) -> Result<MaxViolation> {
    let k = qq_operator(a, b, convention, tol)?;
    let eig = eig_hermitian(&k, tol)?;
    let top = k.rows() - 1;
    let value = eig.values()[top];
    let v = eig.vector(top);
    let maximizer = QuantumState::from_density(ComplexMatrix::outer(&v, &v), tol)?;
    Ok(MaxViolation { value, maximizer })
}

/// One pure state on the scan grid whose statistic is within tolerance
/// of zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub theta_index: usize,
    pub phi_index: usize,
    pub theta: f64,
    pub phi: f64,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub statistic: f64,
}

/// Scans pure qubit states over a Bloch grid and returns the points where
/// the statistic vanishes within `tol`.
///
/// The grid is `theta_k = k pi / (steps - 1)` for `k = 0..steps` (poles
/// included) against `phi_j = 2 pi j / steps` for `j = 0..steps`, with
/// amplitudes `alpha = cos(theta/2)`, `beta = e^{i phi} sin(theta/2)`.
/// Output is ordered by `(theta_index, phi_index)`.
pub fn zero_manifold_scan(
    a: &BinaryMeasurement,
    b: &BinaryMeasurement,
    convention: Convention,
    tol: Tolerance,
    grid_steps: usize,
) -> Result<Vec<GridPoint>> {
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: a.dim(),
        });
    }
    if grid_steps < 2 {
        return Err(Error::GridTooSmall { steps: grid_steps });
    }
    let k_op = qq_operator(a, b, convention, tol)?;
    let mut hits = Vec::new();
    for ti in 0..grid_steps {
        let theta = math::PI * ti as f64 / (grid_steps - 1) as f64;
        for pi_ in 0..grid_steps {
            let phi = 2.0 * math::PI * pi_ as f64 / grid_steps as f64;
            let alpha = Complex64::new(math::cos(theta / 2.0), 0.0);
            let beta = Complex64::new(math::cos(phi), math::sin(phi)) * math::sin(theta / 2.0);
            let psi = [alpha, beta];
            let image = k_op.apply(&psi);
            // <psi|K|psi> is real for Hermitian K.
            let statistic: f64 = psi
                .iter()
                .zip(image.iter())
                .map(|(p, i)| (p.conj() * i).re)
                .sum();
            if statistic.abs() <= tol.eps() {
                hits.push(GridPoint {
                    theta_index: ti,
                    phi_index: pi_,
                    theta,
                    phi,
                    alpha,
                    beta,
                    statistic,
                });
            }
        }
    }
    Ok(hits)
}
