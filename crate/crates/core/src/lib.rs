//! Binary quantum "questions" and the order effects they produce.
//!
//! A question with answers yes/no is modeled as a two-outcome POVM. This
//! crate computes sequential answer distributions under two update
//! conventions, the QQ order statistic and its state dependence, and
//! Neumark liftings that replace unsharp questions by sharp ones on a
//! larger space.
//!
//! The crate is `no_std` compatible: disable default features and enable
//! `libm` to build without the standard library (an allocator is still
//! required).

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("quorder-core needs a float math source: enable `std` or `libm`");

mod math;

pub mod eigen;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod montecarlo;
pub mod neumark;
pub mod qq;
pub mod random;

pub use eigen::{eig_hermitian, principal_sqrt, Eigen};
pub use error::{Error, Result};
pub use linalg::{real_trace_product, ComplexMatrix, Tolerance};
pub use measurement::{
    outcome_distribution, sequential_joint_prob, update_operator, BinaryMeasurement, Convention,
    Effect, EffectReport, MeasurementOrder, OutcomeTable, QuantumState, ValidationReport,
};
pub use montecarlo::{
    convergence_sweep, derive_seed, simulate, EmpiricalReport, ExperimentConfig, SweepPoint,
};
pub use neumark::{
    common_space_lift, dilate_binary, lifted_qq_check, verify_dilation, CommonLift, Dilation,
    DilationCertificate, LiftedQq,
};
pub use qq::{
    max_violation, qq_operator, qq_statistic, zero_manifold_scan, zero_state_condition, GridPoint,
    MaxViolation, QqReport,
};

/// Double precision complex scalar used throughout.
pub type Complex64 = num_complex::Complex<f64>;
