//! Monte Carlo and exact-enumeration experiments.
//!
//! Every trial draws from its own stream seeded by
//! `splitmix64(base_seed ^ trial_index)`. Per-trial results are collected in
//! trial order and reduced with pairwise summation, so the output is
//! bit-identical for any thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    corner_trace_bound, limit_energy, talagrand_tail, theorem1_for, theorem3_bound,
    ToeplitzGapBound,
};
use crate::ensembles::{
    corner_block, CirculantMatrix, CoefficientVector, DistributionSpec, ToeplitzMatrix,
};
use crate::error::{Error, Result};
use crate::linalg::nuclear_norm;
use crate::rng::{trial_rng, TrialRng};
use crate::spectral::{normalize, toeplitz_energy_capped, CirculantEnergy, DEFAULT_DENSE_CAP};

/// Largest `b` accepted by exact enumeration (`2^b` patterns).
pub const ENUMERATION_CAP: usize = 20;

/// Absolute slack allowed in per-sample trace-norm inequalities.
pub const CHAIN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub trials: usize,
    pub base_seed: u64,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
}

impl ExperimentConfig {
    pub fn new(trials: usize, base_seed: u64) -> Self {
        Self {
            trials,
            base_seed,
            threads: 0,
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        Ok(())
    }
}

/// Runs `f(trial_index, rng)` for every trial on a pool of `cfg.threads`
/// workers and returns results in trial order.
pub fn run_trials<T, F>(cfg: &ExperimentConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut TrialRng) -> Result<T> + Sync,
{
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| {
        (0..cfg.trials as u64)
            .into_par_iter()
            .map(|i| f(i, &mut trial_rng(cfg.base_seed, i)))
            .collect()
    })
}

/// Pairwise (cascade) summation; the result depends only on the input order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if xs.len() <= BLOCK {
        xs.iter().sum()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Sample mean and standard error of the mean (0 for a single sample).
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = pairwise_sum(xs) / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean).powi(2)).collect();
    let var = pairwise_sum(&sq) / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn check_band(n: usize, b: usize) -> Result<()> {
    if b == 0 || 2 * b >= n {
        Err(Error::BandWidth { n, b })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMethod {
    Mc,
    ExactEnum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateParams {
    pub n: usize,
    pub b: usize,
    pub dist: String,
    pub trials: usize,
    pub base_seed: u64,
}

/// Estimate of the expected energy; `estimate` is normalized by `n sqrt(b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub method: EstimateMethod,
    pub params: EstimateParams,
    pub estimate: f64,
    pub stderr: f64,
    pub raw_mean: f64,
}

/// Monte Carlo mean of the normalized circulant energy.
pub fn mc_expected_energy(
    n: usize,
    b: usize,
    dist: &DistributionSpec,
    cfg: &ExperimentConfig,
) -> Result<EstimateRecord> {
    check_band(n, b)?;
    let samples = normalized_energy_samples(n, b, dist, cfg)?;
    let (estimate, stderr) = mean_and_stderr(&samples);
    Ok(EstimateRecord {
        method: EstimateMethod::Mc,
        params: EstimateParams {
            n,
            b,
            dist: dist.to_string(),
            trials: cfg.trials,
            base_seed: cfg.base_seed,
        },
        estimate,
        stderr,
        raw_mean: estimate * n as f64 * (b as f64).sqrt(),
    })
}

/// Per-trial normalized energies `E(A)/(n sqrt b)` in trial order.
pub fn normalized_energy_samples(
    n: usize,
    b: usize,
    dist: &DistributionSpec,
    cfg: &ExperimentConfig,
) -> Result<Vec<f64>> {
    check_band(n, b)?;
    let eval = CirculantEnergy::new(n);
    run_trials(cfg, |_, rng| {
        let coeffs = CoefficientVector::sample(dist, b, rng);
        let m = CirculantMatrix::new(n, coeffs)?;
        Ok(eval.energy(&m)?.normalized)
    })
}

/// Expected energy of the Bernoulli(`p`) band circulant by summing over all
/// `2^b` coefficient patterns.
pub fn exact_expected_energy_bernoulli(n: usize, b: usize, p: f64) -> Result<EstimateRecord> {
    check_band(n, b)?;
    if b > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            b,
            cap: ENUMERATION_CAP,
        });
    }
    let dist = DistributionSpec::bernoulli(p)?;
    let eval = CirculantEnergy::new(n);
    let mut total = 0.0;
    for mask in 0u32..(1u32 << b) {
        let ones = mask.count_ones() as i32;
        let weight = p.powi(ones) * (1.0 - p).powi(b as i32 - ones);
        if weight == 0.0 {
            continue;
        }
        let values = (0..b).map(|k| f64::from((mask >> k) & 1)).collect();
        let m = CirculantMatrix::new(n, CoefficientVector::new(values)?)?;
        total += weight * eval.energy(&m)?.energy;
    }
    Ok(EstimateRecord {
        method: EstimateMethod::ExactEnum,
        params: EstimateParams {
            n,
            b,
            dist: dist.to_string(),
            trials: 1 << b,
            base_seed: 0,
        },
        estimate: normalize(total, n, b),
        stderr: 0.0,
        raw_mean: total,
    })
}

/// Empirical deviation frequencies against the concentration bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailCurve {
    pub deltas: Vec<f64>,
    pub empirical: Vec<f64>,
    pub theoretical: Vec<f64>,
    pub trials: usize,
    /// Monte Carlo mean the deviations are measured from.
    pub mean: f64,
    pub delta0: f64,
    #[serde(rename = "R")]
    pub r: f64,
}

impl TailCurve {
    /// Three binomial standard errors of an empirical frequency at level `p`.
    pub fn binomial_slack(&self, p: f64) -> f64 {
        3.0 * (p * (1.0 - p).max(0.0) / self.trials as f64).sqrt()
    }
}

pub fn deviation_experiment(
    n: usize,
    b: usize,
    dist: &DistributionSpec,
    deltas: &[f64],
    cfg: &ExperimentConfig,
) -> Result<TailCurve> {
    let r = dist.require_support_bound()?;
    check_band(n, b)?;
    let samples = normalized_energy_samples(n, b, dist, cfg)?;
    let (mean, _) = mean_and_stderr(&samples);
    let mut empirical = Vec::with_capacity(deltas.len());
    let mut theoretical = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let hits = samples
            .iter()
            .filter(|x| (*x - mean).abs() >= delta)
            .count();
        empirical.push(hits as f64 / samples.len() as f64);
        theoretical.push(talagrand_tail(delta, b, r)?.prob_bound);
    }
    Ok(TailCurve {
        deltas: deltas.to_vec(),
        empirical,
        theoretical,
        trials: cfg.trials,
        mean,
        delta0: talagrand_tail(0.0, b, r)?.delta0,
        r,
    })
}

/// One coupled Toeplitz / circulant draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoupledSample {
    pub toeplitz_energy: f64,
    pub circulant_energy: f64,
    /// `|E(T) - E(C)|`.
    pub gap: f64,
    /// `tr|C - T| = 2 tr|L|`.
    pub corner_trace: f64,
    /// `2 sqrt(b) (sum k a_k^2)^{1/2}`.
    pub corner_bound: f64,
}

impl CoupledSample {
    pub fn violates_chain(&self) -> bool {
        self.gap > self.corner_trace + CHAIN_TOL
            || self.corner_trace > self.corner_bound + CHAIN_TOL
    }
}

pub fn coupled_sample(
    toeplitz: &ToeplitzMatrix,
    eval: &CirculantEnergy,
    cap: usize,
) -> Result<CoupledSample> {
    let circ = toeplitz.to_circulant();
    let circulant_energy = eval.energy(&circ)?.energy;
    let toeplitz_energy = toeplitz_energy_capped(toeplitz, cap)?.energy;
    let corner_trace = 2.0 * nuclear_norm(&corner_block(toeplitz.coeffs()))?;
    Ok(CoupledSample {
        toeplitz_energy,
        circulant_energy,
        gap: (toeplitz_energy - circulant_energy).abs(),
        corner_trace,
        corner_bound: corner_trace_bound(toeplitz.coeffs()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzGapRecord {
    pub n: usize,
    pub b: usize,
    pub trials: usize,
    /// Mean of `|E(T) - E(C)| / (n sqrt b)`.
    pub mean_normalized_gap: f64,
    /// Largest per-sample `|E(T) - E(C)| / corner_bound`.
    pub max_gap_ratio: f64,
    /// Samples breaking `gap <= tr|C - T| <= corner_bound` by more than [`CHAIN_TOL`].
    pub violations: usize,
    pub bounds: ToeplitzGapBound,
}

/// Coupled Toeplitz/circulant energies (the circulant is the corner-trick
/// completion of each sampled Toeplitz matrix).
pub fn toeplitz_vs_circulant(
    n: usize,
    b: usize,
    dist: &DistributionSpec,
    cfg: &ExperimentConfig,
) -> Result<ToeplitzGapRecord> {
    toeplitz_vs_circulant_capped(n, b, dist, cfg, DEFAULT_DENSE_CAP)
}

pub fn toeplitz_vs_circulant_capped(
    n: usize,
    b: usize,
    dist: &DistributionSpec,
    cfg: &ExperimentConfig,
    cap: usize,
) -> Result<ToeplitzGapRecord> {
    check_band(n, b)?;
    if n > cap {
        return Err(Error::SizeCap { n, cap });
    }
    let eval = CirculantEnergy::new(n);
    let samples = run_trials(cfg, |_, rng| {
        let t = ToeplitzMatrix::new(n, CoefficientVector::sample(dist, b, rng))?;
        coupled_sample(&t, &eval, cap)
    })?;
    let gaps: Vec<f64> = samples.iter().map(|s| normalize(s.gap, n, b)).collect();
    let max_gap_ratio = samples
        .iter()
        .filter(|s| s.corner_bound > 0.0)
        .map(|s| s.gap / s.corner_bound)
        .fold(0.0, f64::max);
    Ok(ToeplitzGapRecord {
        n,
        b,
        trials: cfg.trials,
        mean_normalized_gap: pairwise_sum(&gaps) / gaps.len() as f64,
        max_gap_ratio,
        violations: samples.iter().filter(|s| s.violates_chain()).count(),
        bounds: theorem3_bound(dist, n, b)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub b: usize,
    pub estimate: f64,
    pub stderr: f64,
    /// `|estimate - 2 sigma / sqrt(pi)|`.
    pub deviation: f64,
    pub limit: f64,
    pub theorem1_rhs: f64,
    /// `deviation <= theorem1_rhs + 4 stderr`.
    pub within_bound: bool,
}

pub fn convergence_study(
    schedule: &[(usize, usize)],
    dist: &DistributionSpec,
    cfg: &ExperimentConfig,
) -> Result<Vec<ConvergenceRow>> {
    dist.require_nondegenerate()?;
    for &(n, b) in schedule {
        check_band(n, b)?;
    }
    let limit = limit_energy(dist.sigma());
    schedule
        .iter()
        .map(|&(n, b)| {
            let rec = mc_expected_energy(n, b, dist, cfg)?;
            let rhs = theorem1_for(dist, n, b)?.total;
            let deviation = (rec.estimate - limit).abs();
            Ok(ConvergenceRow {
                n,
                b,
                estimate: rec.estimate,
                stderr: rec.stderr,
                deviation,
                limit,
                theorem1_rhs: rhs,
                within_bound: deviation <= rhs + 4.0 * rec.stderr,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pairwise_matches_naive_for_small() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64 * 0.5).collect();
        assert_eq!(pairwise_sum(&xs), xs.iter().sum::<f64>());
        let (m, se) = mean_and_stderr(&[2.0]);
        assert_eq!((m, se), (2.0, 0.0));
    }

    #[test]
    fn exact_enumeration_n8_b2() {
        let r = exact_expected_energy_bernoulli(8, 2, 0.5).unwrap();
        // patterns (0,0), (1,0), (0,1), (1,1): 0, 4 + 4 sqrt 2, 8, 8 + 4 sqrt 2
        let want = (0.0 + (4.0 + 4.0 * 2f64.sqrt()) + 8.0 + (8.0 + 4.0 * 2f64.sqrt())) / 4.0;
        assert_abs_diff_eq!(r.raw_mean, want, epsilon = 1e-12);
        assert_abs_diff_eq!(r.raw_mean, 7.82843, epsilon = 1e-5);
        assert_abs_diff_eq!(r.estimate, 0.691942, epsilon = 1e-6);
        assert_eq!(
            exact_expected_energy_bernoulli(8, 2, 0.0).unwrap().raw_mean,
            0.0
        );
        assert!(matches!(
            exact_expected_energy_bernoulli(100, 21, 0.5),
            Err(Error::EnumerationCap { .. })
        ));
    }

    #[test]
    fn deterministic_mc() {
        let d = DistributionSpec::bernoulli(1.0).unwrap();
        let r = mc_expected_energy(8, 2, &d, &ExperimentConfig::new(50, 1)).unwrap();
        assert!(r.stderr < 1e-12);
        let exact = exact_expected_energy_bernoulli(8, 2, 1.0).unwrap();
        assert_abs_diff_eq!(r.raw_mean, exact.raw_mean, epsilon = 1e-12);
    }

    #[test]
    fn deviation_needs_bounded_support() {
        let g = DistributionSpec::gaussian(0.0, 1.0).unwrap();
        let err =
            deviation_experiment(64, 4, &g, &[0.1], &ExperimentConfig::new(10, 0)).unwrap_err();
        assert!(matches!(err, Error::UnboundedSupport(_)));
    }

    #[test]
    fn zero_coefficients_zero_gap() {
        let t = ToeplitzMatrix::new(16, CoefficientVector::zeros(3)).unwrap();
        let s = coupled_sample(&t, &CirculantEnergy::new(16), 64).unwrap();
        assert_eq!(s.gap, 0.0);
        assert_eq!(s.corner_bound, 0.0);
    }

    #[test]
    fn single_band_gap_at_most_two() {
        let t = ToeplitzMatrix::new(8, CoefficientVector::new(vec![1.0]).unwrap()).unwrap();
        let s = coupled_sample(&t, &CirculantEnergy::new(8), 64).unwrap();
        assert!(s.gap <= 2.0 + 1e-12);
        assert_abs_diff_eq!(s.corner_trace, 2.0, epsilon = 1e-12);
        assert!(!s.violates_chain());
    }
}
