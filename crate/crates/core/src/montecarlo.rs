//! Finite-sample simulation of the two-order question experiment.
//!
//! Respondents are drawn from the exact four-cell answer distribution of
//! each order, so the empirical statistic converges to the analytic one
//! at the usual `1/sqrt(n)` rate. Sampling requires the sqrt convention:
//! the literal convention's sequence weights do not form a probability
//! distribution for unsharp questions (their normalization defect is
//! nonzero), so no respondent population exists for them, and
//! renormalizing would silently change the quantity being estimated.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::error::{Error, Result};
use crate::linalg::Tolerance;
use crate::math;
use crate::measurement::{
    outcome_distribution, BinaryMeasurement, Convention, MeasurementOrder, OutcomeTable,
    QuantumState,
};
use crate::qq::statistic_from_tables;
use crate::random::unit_f64;

/// One reproducible experiment: a model, a sample size per order, and a
/// seed.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub state: QuantumState,
    pub a: BinaryMeasurement,
    pub b: BinaryMeasurement,
    pub convention: Convention,
    pub n_per_order: u64,
    pub seed: u64,
    pub tolerance: Tolerance,
}

impl ExperimentConfig {
    fn check(&self) -> Result<()> {
        if self.n_per_order == 0 {
            return Err(Error::ZeroSamples);
        }
        if self.convention != Convention::Sqrt {
            return Err(Error::UnsupportedConvention);
        }
        Ok(())
    }
}

/// Counts and estimates from one simulated experiment.
///
/// Count cells are ordered (yes-yes, yes-no, no-yes, no-no) by the
/// answers in the order they were given, matching
/// [`OutcomeTable::probabilities`].
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalReport {
    pub n_per_order: u64,
    pub a_first_counts: [u64; 4],
    pub b_first_counts: [u64; 4],
    pub empirical_qq: f64,
    pub standard_error: f64,
    pub analytic_qq: f64,
}

/// Draws `n` respondents from one order's answer distribution.
///
/// Stream selection keeps the two orders independent while both derive
/// from the one experiment seed.
fn sample_counts(table: &OutcomeTable, n: u64, seed: u64, stream: u64) -> [u64; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let probs = table.probabilities().map(|p| p.max(0.0));
    let mut cumulative = [0.0f64; 4];
    let mut acc = 0.0;
    for (cell, p) in probs.iter().enumerate() {
        acc += p;
        cumulative[cell] = acc;
    }
    let mut counts = [0u64; 4];
    for _ in 0..n {
        let u = unit_f64(&mut rng);
        let cell = cumulative.iter().position(|&c| u < c).unwrap_or(3);
        counts[cell] += 1;
    }
    counts
}

/// Runs the experiment: `n_per_order` respondents per question order,
/// sampled from the exact sqrt-convention distributions.
///
/// The standard error combines the four contributing cells as
/// `sqrt(sum p-hat (1 - p-hat) / n)`; the two orders are independent
/// samples.
pub fn simulate(config: &ExperimentConfig) -> Result<EmpiricalReport> {
    config.check()?;
    let n = config.n_per_order;
    let ta = outcome_distribution(
        &config.state,
        &config.a,
        &config.b,
        MeasurementOrder::AFirst,
        config.convention,
        config.tolerance,
    )?;
    let tb = outcome_distribution(
        &config.state,
        &config.a,
        &config.b,
        MeasurementOrder::BFirst,
        config.convention,
        config.tolerance,
    )?;
    let analytic_qq = statistic_from_tables(&ta, &tb);

    let a_first_counts = sample_counts(&ta, n, config.seed, 0);
    let b_first_counts = sample_counts(&tb, n, config.seed, 1);

    let nf = n as f64;
    let a_yn = a_first_counts[1] as f64 / nf;
    let a_ny = a_first_counts[2] as f64 / nf;
    let b_yn = b_first_counts[1] as f64 / nf;
    let b_ny = b_first_counts[2] as f64 / nf;
    let empirical_qq = (a_yn + a_ny) - (b_yn + b_ny);
    let variance: f64 = [a_yn, a_ny, b_yn, b_ny]
        .iter()
        .map(|&p| p * (1.0 - p) / nf)
        .sum();
    let standard_error = math::sqrt(variance);

    Ok(EmpiricalReport {
        n_per_order: n,
        a_first_counts,
        b_first_counts,
        empirical_qq,
        standard_error,
        analytic_qq,
    })
}

/// One row of a convergence sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub n: u64,
    pub empirical_qq: f64,
    pub abs_error: f64,
    pub standard_error: f64,
}

/// Sub-seed for sweep entry `index`, via the splitmix64 finalizer; spaced
/// by the golden-ratio increment so entries are independent streams.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Repeats the experiment at each sample size with derived sub-seeds.
/// Sizes must be nonempty, positive, and strictly increasing.
pub fn convergence_sweep(config: &ExperimentConfig, sizes: &[u64]) -> Result<Vec<SweepPoint>> {
    if sizes.is_empty() || sizes.contains(&0) || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSweepSizes);
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for (index, &n) in sizes.iter().enumerate() {
        let sub = ExperimentConfig {
            n_per_order: n,
            seed: derive_seed(config.seed, index as u64),
            ..config.clone()
        };
        let report = simulate(&sub)?;
        rows.push(SweepPoint {
            n,
            empirical_qq: report.empirical_qq,
            abs_error: (report.empirical_qq - report.analytic_qq).abs(),
            standard_error: report.standard_error,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;

    const S12: f64 = 0.2886751345948129; // 1/sqrt(12)

    fn reference_config(n: u64, seed: u64) -> ExperimentConfig {
        let q1 = ComplexMatrix::from_real_rows(&[&[5.0 / 6.0, S12], &[S12, 0.5]]).unwrap();
        let q2 = ComplexMatrix::from_real_rows(&[&[1.0 / 6.0, -S12], &[-S12, 0.5]]).unwrap();
        let p1 = ComplexMatrix::from_real_rows(&[&[1.0 / 6.0, S12], &[S12, 0.5]]).unwrap();
        let p2 = ComplexMatrix::from_real_rows(&[&[5.0 / 6.0, -S12], &[-S12, 0.5]]).unwrap();
        ExperimentConfig {
            state: QuantumState::uniform_superposition(2),
            a: BinaryMeasurement::from_matrices("A", q1, q2).unwrap(),
            b: BinaryMeasurement::from_matrices("B", p1, p2).unwrap(),
            convention: Convention::Sqrt,
            n_per_order: n,
            seed,
            tolerance: Tolerance::default(),
        }
    }

    #[test]
    fn literal_convention_and_empty_samples_are_refused() {
        let mut config = reference_config(10, 0);
        config.convention = Convention::Literal;
        assert_eq!(simulate(&config).unwrap_err(), Error::UnsupportedConvention);

        let mut config = reference_config(10, 0);
        config.n_per_order = 0;
        assert_eq!(simulate(&config).unwrap_err(), Error::ZeroSamples);
    }

    #[test]
    fn identical_configs_reproduce_identical_reports() {
        let config = reference_config(5000, 99);
        let first = simulate(&config).unwrap();
        let second = simulate(&config).unwrap();
        assert_eq!(first, second);
        let different = simulate(&reference_config(5000, 100)).unwrap();
        assert_ne!(first.a_first_counts, different.a_first_counts);
    }

    #[test]
    fn counts_sum_to_the_sample_size() {
        let report = simulate(&reference_config(1234, 5)).unwrap();
        assert_eq!(report.a_first_counts.iter().sum::<u64>(), 1234);
        assert_eq!(report.b_first_counts.iter().sum::<u64>(), 1234);
    }

    #[test]
    fn single_respondent_gives_a_degenerate_estimate() {
        let report = simulate(&reference_config(1, 3)).unwrap();
        assert_eq!(report.a_first_counts.iter().sum::<u64>(), 1);
        assert_eq!(report.b_first_counts.iter().sum::<u64>(), 1);
        assert!([-1.0, 0.0, 1.0].contains(&report.empirical_qq));
    }

    #[test]
    fn empirical_statistic_brackets_the_analytic_one() {
        let report = simulate(&reference_config(10_000, 42)).unwrap();
        assert!((report.empirical_qq - report.analytic_qq).abs() <= 4.0 * report.standard_error);
        assert!(report.standard_error > 0.0);
    }

    #[test]
    fn projective_models_estimate_zero() {
        let p = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
        let h = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        let config = ExperimentConfig {
            a: BinaryMeasurement::complement_pair("Z", p).unwrap(),
            b: BinaryMeasurement::complement_pair("X", h).unwrap(),
            ..reference_config(20_000, 11)
        };
        let report = simulate(&config).unwrap();
        assert!(report.analytic_qq.abs() < 1e-12);
        assert!(report.empirical_qq.abs() <= 4.0 * report.standard_error);
    }

    #[test]
    fn sweep_rows_shrink_their_standard_error() {
        let rows = convergence_sweep(&reference_config(1, 7), &[100, 1000, 10_000]).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows[0].standard_error > rows[1].standard_error);
        assert!(rows[1].standard_error > rows[2].standard_error);
    }

    #[test]
    fn sweep_rejects_bad_size_lists() {
        let config = reference_config(1, 7);
        for sizes in [&[][..], &[100, 100][..], &[1000, 100][..], &[0, 10][..]] {
            assert_eq!(
                convergence_sweep(&config, sizes).unwrap_err(),
                Error::InvalidSweepSizes
            );
        }
    }

    #[test]
    fn derived_seeds_are_distinct() {
        let mut seen: Vec<u64> = (0..32).map(|i| derive_seed(123, i)).collect();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 32);
    }
}
