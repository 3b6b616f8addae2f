//! Entry distributions, coefficient vectors and the symmetric band
//! circulant / Toeplitz matrices they define.
//!
//! Matrices are stored as `(n, coeffs)`. The diagonal coefficient `a_0` and,
//! for even `n`, the middle coefficient `a_{n/2}` are always zero. Dense
//! materialization exists for oracles and small-instance checks only.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::rng::{rng_from_seed, TrialRng};

/// Shape of an entry distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DistributionKind {
    Bernoulli { p: f64 },
    Uniform { lo: f64, hi: f64 },
    Gaussian { mu: f64, sigma: f64 },
}

/// An i.i.d. entry distribution together with the moments the bounds need.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    /// Mean `a`.
    pub mean: f64,
    /// Variance `sigma^2`.
    pub variance: f64,
    /// Central absolute third moment `E|xi - a|^3`.
    pub mu3: f64,
    /// `R` such that the support lies in `[0, R]`, when one exists.
    pub support_bound: Option<f64>,
}

impl DistributionSpec {
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidDistribution(format!(
                "bernoulli probability {p} outside [0, 1]"
            )));
        }
        let q = 1.0 - p;
        Ok(Self {
            kind: DistributionKind::Bernoulli { p },
            mean: p,
            variance: p * q,
            mu3: p * q * (p * p + q * q),
            support_bound: Some(1.0),
        })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidDistribution(format!(
                "uniform bounds must satisfy lo < hi, got [{lo}, {hi}]"
            )));
        }
        let w = hi - lo;
        Ok(Self {
            kind: DistributionKind::Uniform { lo, hi },
            mean: 0.5 * (lo + hi),
            variance: w * w / 12.0,
            // 2 * int_0^{w/2} x^3 dx / w
            mu3: w * w * w / 32.0,
            support_bound: (lo >= 0.0).then_some(hi),
        })
    }

    pub fn gaussian(mu: f64, sigma: f64) -> Result<Self> {
        if !(mu.is_finite() && sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "gaussian needs finite mu and sigma > 0, got ({mu}, {sigma})"
            )));
        }
        Ok(Self {
            kind: DistributionKind::Gaussian { mu, sigma },
            mean: mu,
            variance: sigma * sigma,
            // E|N(0, s)|^3 = 2 sqrt(2/pi) s^3
            mu3: 2.0 * (2.0 / std::f64::consts::PI).sqrt() * sigma.powi(3),
            support_bound: None,
        })
    }

    /// `(a, sigma, mu3)`.
    pub fn moments(&self) -> (f64, f64, f64) {
        (self.mean, self.variance.sqrt(), self.mu3)
    }

    pub fn sigma(&self) -> f64 {
        self.variance.sqrt()
    }

    /// `E xi^2 = a^2 + sigma^2`.
    pub fn second_moment(&self) -> f64 {
        self.mean * self.mean + self.variance
    }

    /// The support bound `R`, or an error for distributions without one.
    pub fn require_support_bound(&self) -> Result<f64> {
        self.support_bound
            .ok_or_else(|| Error::UnboundedSupport(self.to_string()))
    }

    /// Rejects point masses (`sigma^2 = 0`).
    pub fn require_nondegenerate(&self) -> Result<()> {
        if self.variance > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidDistribution(format!(
                "{self} is a point mass (variance 0)"
            )))
        }
    }

    pub fn sample(&self, rng: &mut TrialRng) -> f64 {
        match self.kind {
            DistributionKind::Bernoulli { p } => {
                if rng.random_bool(p) {
                    1.0
                } else {
                    0.0
                }
            }
            DistributionKind::Uniform { lo, hi } => Uniform::new(lo, hi)
                .expect("validated at construction")
                .sample(rng),
            DistributionKind::Gaussian { mu, sigma } => Normal::new(mu, sigma)
                .expect("validated at construction")
                .sample(rng),
        }
    }
}

/// Free-function form of [`DistributionSpec::moments`].
pub fn distribution_moments(dist: &DistributionSpec) -> (f64, f64, f64) {
    dist.moments()
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DistributionKind::Bernoulli { p } => write!(f, "bernoulli:{p}"),
            DistributionKind::Uniform { lo, hi } => write!(f, "uniform:{lo}:{hi}"),
            DistributionKind::Gaussian { mu, sigma } => write!(f, "gaussian:{mu}:{sigma}"),
        }
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    /// Parses `bernoulli:p`, `uniform:lo:hi` or `gaussian:mu:sigma`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let name = parts.next().unwrap_or_default().to_ascii_lowercase();
        let nums = parts
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidDistribution(format!("bad number {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match (name.as_str(), nums.as_slice()) {
            ("bernoulli", [p]) => Self::bernoulli(*p),
            ("uniform", [lo, hi]) => Self::uniform(*lo, *hi),
            ("gaussian", [mu, sigma]) => Self::gaussian(*mu, *sigma),
            _ => Err(Error::InvalidDistribution(format!(
                "expected bernoulli:p, uniform:lo:hi or gaussian:mu:sigma, got {s:?}"
            ))),
        }
    }
}

/// Band coefficients `a_1..a_b`; `values[k - 1]` is the coefficient at offset `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoefficientVector {
    values: Vec<f64>,
}

impl CoefficientVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument(
                "coefficient vector needs at least one entry".into(),
            ));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite coefficient {v}"
            )));
        }
        Ok(Self { values })
    }

    pub fn zeros(b: usize) -> Self {
        Self {
            values: vec![0.0; b.max(1)],
        }
    }

    pub fn b(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Coefficient at offset `k` in `1..=b`.
    pub fn at(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn sample(dist: &DistributionSpec, b: usize, rng: &mut TrialRng) -> Self {
        Self {
            values: (0..b.max(1)).map(|_| dist.sample(rng)).collect(),
        }
    }
}

/// `b` i.i.d. draws from `dist`, deterministic in `seed`.
pub fn sample_coefficients(
    dist: &DistributionSpec,
    b: usize,
    seed: u64,
) -> Result<CoefficientVector> {
    if b == 0 {
        return Err(Error::InvalidArgument("band width b must be >= 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    Ok(CoefficientVector::sample(dist, b, &mut rng))
}

fn check_band(n: usize, b: usize) -> Result<()> {
    if b == 0 || 2 * b >= n {
        Err(Error::BandWidth { n, b })
    } else {
        Ok(())
    }
}

/// `Circ(0, a_1, .., a_b, 0, .., 0, a_b, .., a_1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantMatrix {
    n: usize,
    coeffs: CoefficientVector,
}

impl CirculantMatrix {
    pub fn new(n: usize, coeffs: CoefficientVector) -> Result<Self> {
        check_band(n, coeffs.b())?;
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> usize {
        self.coeffs.b()
    }

    pub fn coeffs(&self) -> &CoefficientVector {
        &self.coeffs
    }

    /// First row `(c_0, .., c_{n-1})` with `c_k = c_{n-k} = a_k`.
    pub fn symbol_row(&self) -> Vec<f64> {
        let mut row = vec![0.0; self.n];
        for (i, &a) in self.coeffs.values().iter().enumerate() {
            let k = i + 1;
            row[k] = a;
            row[self.n - k] = a;
        }
        row
    }

    pub fn dense(&self) -> DenseMatrix {
        let n = self.n;
        let row = self.symbol_row();
        DenseMatrix::from_fn(n, n, |i, j| row[(j + n - i) % n])
    }
}

pub fn build_circulant(n: usize, coeffs: CoefficientVector) -> Result<CirculantMatrix> {
    CirculantMatrix::new(n, coeffs)
}

/// `Toep_s(0, a_1, .., a_b, 0, .., 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzMatrix {
    n: usize,
    coeffs: CoefficientVector,
}

impl ToeplitzMatrix {
    pub fn new(n: usize, coeffs: CoefficientVector) -> Result<Self> {
        check_band(n, coeffs.b())?;
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> usize {
        self.coeffs.b()
    }

    pub fn coeffs(&self) -> &CoefficientVector {
        &self.coeffs
    }

    pub fn dense(&self) -> DenseMatrix {
        let b = self.b();
        DenseMatrix::from_fn(self.n, self.n, |i, j| {
            let k = i.abs_diff(j);
            if k >= 1 && k <= b {
                self.coeffs.at(k)
            } else {
                0.0
            }
        })
    }

    /// The circulant obtained by filling in the two `b x b` corners.
    pub fn to_circulant(&self) -> CirculantMatrix {
        CirculantMatrix {
            n: self.n,
            coeffs: self.coeffs.clone(),
        }
    }
}

pub fn build_toeplitz(n: usize, coeffs: CoefficientVector) -> Result<ToeplitzMatrix> {
    ToeplitzMatrix::new(n, coeffs)
}

/// Upper-triangular `b x b` block `L` with first row `a_b, a_{b-1}, .., a_1`.
///
/// The circulant minus the Toeplitz matrix with the same coefficients has `L`
/// in its upper-right corner, `L^T` in its lower-left corner, and zeros elsewhere.
pub fn corner_block(coeffs: &CoefficientVector) -> DenseMatrix {
    let b = coeffs.b();
    DenseMatrix::from_fn(
        b,
        b,
        |i, j| {
            if j >= i {
                coeffs.at(b - (j - i))
            } else {
                0.0
            }
        },
    )
}

/// A circulant graph on `Z_n` whose jump sizes are drawn from `1..=b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirculantGraph {
    pub n: usize,
    pub b: usize,
    /// Sorted, distinct jump sizes in `1..=b`.
    pub jumps: Vec<usize>,
}

impl CirculantGraph {
    pub fn new(n: usize, b: usize, mut jumps: Vec<usize>) -> Result<Self> {
        check_band(n, b)?;
        jumps.sort_unstable();
        jumps.dedup();
        if let Some(&j) = jumps.iter().find(|&&j| j == 0 || j > b) {
            return Err(Error::InvalidArgument(format!(
                "jump size {j} outside 1..={b}"
            )));
        }
        Ok(Self { n, b, jumps })
    }

    /// 0/1 coefficient vector of the jump set.
    pub fn coefficients(&self) -> CoefficientVector {
        let mut values = vec![0.0; self.b];
        for &j in &self.jumps {
            values[j - 1] = 1.0;
        }
        CoefficientVector { values }
    }

    pub fn adjacency(&self) -> CirculantMatrix {
        CirculantMatrix {
            n: self.n,
            coeffs: self.coefficients(),
        }
    }
}

/// Draws a graph from `G_{n,b}(p)`: each `k` in `1..=b` is a jump with probability `p`.
pub fn sample_circulant_graph(n: usize, b: usize, p: f64, seed: u64) -> Result<CirculantGraph> {
    check_band(n, b)?;
    let dist = DistributionSpec::bernoulli(p)?;
    let mut rng = rng_from_seed(seed);
    let jumps = (1..=b).filter(|_| dist.sample(&mut rng) == 1.0).collect();
    Ok(CirculantGraph { n, b, jumps })
}
