//! Seeded generators for states and measurements.
//!
//! Used by certificate verification and by the test suite. All functions
//! draw from a caller-supplied [`RngCore`], so results are reproducible
//! from the seed alone.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::eigen::eig_hermitian;
use crate::linalg::{ComplexMatrix, Tolerance};
use crate::measurement::{BinaryMeasurement, QuantumState};
use crate::Complex64;

/// Uniform draw from [0, 1) using the top 53 bits.
pub fn unit_f64(rng: &mut impl RngCore) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    (rng.next_u64() >> 11) as f64 * SCALE
}

/// Complex scalar with both components uniform in [-1, 1).
pub fn random_complex(rng: &mut impl RngCore) -> Complex64 {
    Complex64::new(
        2.0 * unit_f64(rng) - 1.0,
        2.0 * unit_f64(rng) - 1.0,
    )
}

fn random_matrix(dim: usize, rng: &mut impl RngCore) -> ComplexMatrix {
    let data: Vec<Complex64> = (0..dim * dim).map(|_| random_complex(rng)).collect();
    ComplexMatrix::new(dim, dim, data).expect("finite by construction")
}

/// Hermitian matrix with entries of order one.
pub fn random_hermitian(dim: usize, rng: &mut impl RngCore) -> ComplexMatrix {
    random_matrix(dim, rng).hermitized()
}

/// Full-rank-in-expectation density matrix, `G G† / tr(G G†)`.
pub fn random_density_matrix(dim: usize, rng: &mut impl RngCore) -> QuantumState {
    let g = random_matrix(dim, rng);
    let gram = &g * &g.adjoint();
    let tr = gram.trace().re;
    QuantumState::from_density(gram.scale(1.0 / tr).hermitized(), Tolerance::default())
        .expect("normalized Gram matrix is a valid state")
}

/// Haar-ish pure state from normalized complex amplitudes.
pub fn random_pure_state(dim: usize, rng: &mut impl RngCore) -> QuantumState {
    loop {
        let amps: Vec<Complex64> = (0..dim).map(|_| random_complex(rng)).collect();
        if let Ok(state) = QuantumState::from_amplitudes(&amps) {
            return state;
        }
    }
}

/// Generic unsharp binary measurement: a random Hermitian matrix with its
/// spectrum mapped affinely into [0.05, 0.95], paired with its
/// complement. Always a valid POVM, never projective.
pub fn random_binary_measurement(
    name: &str,
    dim: usize,
    rng: &mut impl RngCore,
) -> BinaryMeasurement {
    let h = random_hermitian(dim, rng);
    let eig = eig_hermitian(&h, Tolerance::default()).expect("Hermitian by construction");
    let lo = eig.values().first().copied().unwrap_or(0.0);
    let hi = eig.values().last().copied().unwrap_or(1.0);
    let span = hi - lo;
    let n = eig.values().len();
    let mut scaled = eig.vectors().clone();
    for j in 0..n {
        let t = if span > 0.0 {
            (eig.values()[j] - lo) / span
        } else {
            0.5
        };
        let mapped = 0.05 + 0.9 * t;
        for i in 0..n {
            scaled.set(i, j, scaled.get(i, j) * mapped);
        }
    }
    let yes = (&scaled * &eig.vectors().adjoint()).hermitized();
    BinaryMeasurement::complement_pair(name, yes).expect("square by construction")
}

/// Projective binary measurement: the yes-effect projects onto a random
/// eigenspace of dimension 1..dim of a random Hermitian matrix.
pub fn random_projective_measurement(
    name: &str,
    dim: usize,
    rng: &mut impl RngCore,
) -> BinaryMeasurement {
    let h = random_hermitian(dim, rng);
    let eig = eig_hermitian(&h, Tolerance::default()).expect("Hermitian by construction");
    let rank = 1 + (rng.next_u64() as usize) % dim.max(1);
    let mut yes = ComplexMatrix::zeros(dim, dim);
    for j in 0..rank.min(dim) {
        let v = eig.vector(j);
        yes = &yes + &ComplexMatrix::outer(&v, &v);
    }
    BinaryMeasurement::complement_pair(name, yes.hermitized()).expect("square by construction")
}
