//! Right-hand sides of the convergence-rate, deviation and Toeplitz-gap
//! inequalities, with per-term breakdowns.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dirichlet::{total_variation_bound, EULER_GAMMA};
use crate::ensembles::{CoefficientVector, DistributionSpec};
use crate::error::{Error, Result};

/// Berry-Esseen constant `C_1` used by the rate bound.
pub const BERRY_ESSEEN_C1: f64 = 31.954;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Thm1,
    LemmaMean,
    LemmaClt,
    LemmaVar,
    Thm2Tail,
    Thm3,
    Corner,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    pub value: f64,
}

impl Term {
    fn new(name: &str, value: f64) -> Self {
        Self {
            name: name.to_owned(),
            value,
        }
    }
}

/// An evaluated bound: `total` is the sum of `terms`. `aux` carries related
/// values that are not addends (e.g. `delta0`, the coarse Toeplitz bound).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: BoundKind,
    pub inputs: BoundInputs,
    pub terms: Vec<Term>,
    pub total: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux: Vec<Term>,
}

impl BoundReport {
    fn new(theorem: BoundKind, inputs: BoundInputs, terms: Vec<Term>) -> Self {
        let total = terms.iter().map(|t| t.value).sum();
        Self {
            theorem,
            inputs,
            terms,
            total,
            aux: Vec::new(),
        }
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms
            .iter()
            .chain(&self.aux)
            .find(|t| t.name == name)
            .map(|t| t.value)
    }
}

fn check_nb(n: usize, b: usize) -> Result<()> {
    if b == 0 || 2 * b >= n {
        Err(Error::BandWidth { n, b })
    } else {
        Ok(())
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be finite and >= 0, got {v}"
        )))
    }
}

/// `2 sigma / sqrt(pi)`.
pub fn limit_energy(sigma: f64) -> f64 {
    2.0 * sigma / PI.sqrt()
}

/// `E|N(0, tau)| = sqrt(2/pi) tau`.
pub fn gaussian_abs_moment(tau: f64) -> f64 {
    (2.0 / PI).sqrt() * tau
}

fn clt_prefactor(c1: f64) -> f64 {
    4.0 * PI * c1 / (3.0 * 3f64.sqrt())
}

/// `(4 pi C_1 / (3 sqrt 3)) mu3 / sigma^2`.
pub fn clt_moment_gap_bound(mu3: f64, sigma2: f64) -> Result<f64> {
    clt_moment_gap_bound_with(mu3, sigma2, BERRY_ESSEEN_C1)
}

pub fn clt_moment_gap_bound_with(mu3: f64, sigma2: f64, c1: f64) -> Result<f64> {
    if sigma2.is_nan() || sigma2 <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "variance must be > 0, got {sigma2}"
        )));
    }
    check_nonneg("mu3", mu3)?;
    Ok(clt_prefactor(c1) * mu3 / sigma2)
}

/// Bound on the error of dropping the mean from the expected normalized energy.
///
/// `(2|a|/sqrt b)(2 + (2/pi^2) ln b + (1 + (2b+1)(1+gamma+ln b))/n)`
pub fn mean_part_bound(a: f64, n: usize, b: usize) -> Result<BoundReport> {
    check_nb(n, b)?;
    let bf = b as f64;
    let scale = 2.0 * a.abs() / bf.sqrt();
    let terms = vec![
        Term::new("constant", scale * 2.0),
        Term::new("lebesgue", scale * 2.0 / (PI * PI) * bf.ln()),
        Term::new("variation", scale * total_variation_bound(b) / n as f64),
    ];
    Ok(BoundReport::new(
        BoundKind::LemmaMean,
        BoundInputs {
            a: Some(a),
            n: Some(n),
            b: Some(b),
            ..Default::default()
        },
        terms,
    ))
}

/// Bound on the Gaussian Riemann sum's distance from `2 sigma / sqrt(pi)`.
///
/// `(4 sigma/(b sqrt pi))(1 + (1/pi^2) ln b + (1 + (2b+1)(1+gamma+ln b))/n)`
pub fn var_part_bound(sigma: f64, n: usize, b: usize) -> Result<BoundReport> {
    check_nb(n, b)?;
    check_nonneg("sigma", sigma)?;
    let bf = b as f64;
    let scale = 4.0 * sigma / (bf * PI.sqrt());
    let terms = vec![
        Term::new("constant", scale),
        Term::new("lebesgue", scale / (PI * PI) * bf.ln()),
        Term::new("variation", scale * total_variation_bound(b) / n as f64),
    ];
    Ok(BoundReport::new(
        BoundKind::LemmaVar,
        BoundInputs {
            sigma: Some(sigma),
            n: Some(n),
            b: Some(b),
            ..Default::default()
        },
        terms,
    ))
}

pub fn clt_part_report(mu3: f64, sigma: f64, c1: f64) -> Result<BoundReport> {
    let v = clt_moment_gap_bound_with(mu3, sigma * sigma, c1)?;
    Ok(BoundReport::new(
        BoundKind::LemmaClt,
        BoundInputs {
            sigma: Some(sigma),
            mu3: Some(mu3),
            c1: Some(c1),
            ..Default::default()
        },
        vec![Term::new("berry_esseen", v)],
    ))
}

/// Rate bound on `|E E(A)/(n sqrt b) - 2 sigma/sqrt(pi)|` with the default `C_1`.
pub fn theorem1_rhs(a: f64, sigma: f64, mu3: f64, n: usize, b: usize) -> Result<BoundReport> {
    theorem1_rhs_with(a, sigma, mu3, n, b, BERRY_ESSEEN_C1)
}

pub fn theorem1_rhs_with(
    a: f64,
    sigma: f64,
    mu3: f64,
    n: usize,
    b: usize,
    c1: f64,
) -> Result<BoundReport> {
    check_nb(n, b)?;
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "sigma must be > 0, got {sigma}"
        )));
    }
    check_nonneg("mu3", mu3)?;
    let bf = b as f64;
    let sb = bf.sqrt();
    let spb = (PI * bf).sqrt();
    let berry_esseen = 2.0 * clt_prefactor(c1) * mu3 / (sigma * sigma * sb);
    let mean_kernel = 4.0 / sb * (a.abs() + sigma / spb) * (1.0 + bf.ln() / (PI * PI));
    let variation = 2.0 / (n as f64 * sb)
        * (a.abs() + 2.0 * sigma / spb)
        * (1.0 + (2.0 * bf + 1.0) * (1.0 + EULER_GAMMA + bf.ln()));
    Ok(BoundReport::new(
        BoundKind::Thm1,
        BoundInputs {
            a: Some(a),
            sigma: Some(sigma),
            mu3: Some(mu3),
            n: Some(n),
            b: Some(b),
            c1: Some(c1),
            ..Default::default()
        },
        vec![
            Term::new("berry_esseen", berry_esseen),
            Term::new("mean_kernel", mean_kernel),
            Term::new("variation", variation),
        ],
    ))
}

pub fn theorem1_for(dist: &DistributionSpec, n: usize, b: usize) -> Result<BoundReport> {
    let (a, sigma, mu3) = dist.moments();
    theorem1_rhs(a, sigma, mu3, n, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub delta0: f64,
    pub prob_bound: f64,
}

/// `delta0 = 4 sqrt(2 pi R^2 / b)`.
pub fn talagrand_delta0(b: usize, r: f64) -> f64 {
    4.0 * (2.0 * PI * r * r / b as f64).sqrt()
}

/// Deviation probability bound `4 exp(-(b/(8R^2))(delta - delta0)^2)`,
/// clamped to 1 (and equal to 1 for `delta <= delta0`).
pub fn talagrand_tail(delta: f64, b: usize, r: f64) -> Result<TailBound> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("R must be > 0, got {r}")));
    }
    if b == 0 {
        return Err(Error::InvalidArgument("b must be >= 1".into()));
    }
    let delta0 = talagrand_delta0(b, r);
    let prob_bound = if delta > delta0 {
        let ex = b as f64 / (8.0 * r * r) * (delta - delta0).powi(2);
        (4.0 * (-ex).exp()).min(1.0)
    } else {
        1.0
    };
    Ok(TailBound { delta0, prob_bound })
}

pub fn talagrand_report(delta: f64, b: usize, r: f64) -> Result<BoundReport> {
    let t = talagrand_tail(delta, b, r)?;
    let mut rep = BoundReport::new(
        BoundKind::Thm2Tail,
        BoundInputs {
            b: Some(b),
            r: Some(r),
            delta: Some(delta),
            ..Default::default()
        },
        vec![Term::new("prob_bound", t.prob_bound)],
    );
    rep.aux.push(Term::new("delta0", t.delta0));
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzGapBound {
    /// `(E xi^2)^{1/2} sqrt(2 b (b+1)) / n`.
    pub exact: f64,
    /// `2 (|a| + sigma) b / n`.
    pub coarse: f64,
}

pub fn theorem3_bound(dist: &DistributionSpec, n: usize, b: usize) -> Result<ToeplitzGapBound> {
    theorem3_from_moments(dist.mean, dist.sigma(), n, b)
}

pub fn theorem3_from_moments(a: f64, sigma: f64, n: usize, b: usize) -> Result<ToeplitzGapBound> {
    check_nb(n, b)?;
    let (nf, bf) = (n as f64, b as f64);
    let exact = (a * a + sigma * sigma).sqrt() * (2.0 * bf * (bf + 1.0)).sqrt() / nf;
    let coarse = 2.0 * (a.abs() + sigma) * bf / nf;
    Ok(ToeplitzGapBound { exact, coarse })
}

pub fn theorem3_report(dist: &DistributionSpec, n: usize, b: usize) -> Result<BoundReport> {
    theorem3_report_from_moments(dist.mean, dist.sigma(), n, b)
}

pub fn theorem3_report_from_moments(a: f64, sigma: f64, n: usize, b: usize) -> Result<BoundReport> {
    let t = theorem3_from_moments(a, sigma, n, b)?;
    let mut rep = BoundReport::new(
        BoundKind::Thm3,
        BoundInputs {
            a: Some(a),
            sigma: Some(sigma),
            n: Some(n),
            b: Some(b),
            ..Default::default()
        },
        vec![Term::new("exact", t.exact)],
    );
    rep.aux.push(Term::new("coarse", t.coarse));
    Ok(rep)
}

/// Upper bound `2 sqrt(b) (sum k a_k^2)^{1/2}` on the trace norm of the
/// circulant-minus-Toeplitz difference.
pub fn corner_trace_bound(coeffs: &CoefficientVector) -> f64 {
    let b = coeffs.b() as f64;
    let weighted: f64 = coeffs
        .values()
        .iter()
        .enumerate()
        .map(|(i, a)| (i + 1) as f64 * a * a)
        .sum();
    2.0 * b.sqrt() * weighted.sqrt()
}

pub fn corner_report(coeffs: &CoefficientVector) -> BoundReport {
    BoundReport::new(
        BoundKind::Corner,
        BoundInputs {
            b: Some(coeffs.b()),
            ..Default::default()
        },
        vec![Term::new("corner_trace", corner_trace_bound(coeffs))],
    )
}

/// `sqrt(2 / b)`, the Lipschitz constant of the normalized energy in the coefficients.
pub fn lipschitz_energy_bound(b: usize) -> f64 {
    (2.0 / b as f64).sqrt()
}
