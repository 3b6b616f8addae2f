//! Limit energy constants of several random graph and matrix ensembles, for
//! comparison with random band circulants.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("p = {p} outside [0, 1]")))
    }
}

/// Random band circulant graph `G_{n,b}(p)`: energy per `n sqrt(b)`.
pub fn circulant_graph_limit(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(2.0 / PI.sqrt() * (p * (1.0 - p)).sqrt())
}

/// Erdos-Renyi `G_n(p)`: energy per `n sqrt(n)`.
pub fn gnp_limit(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(8.0 / (3.0 * PI) * (p * (1.0 - p)).sqrt())
}

/// Band symmetric matrices with semicircle limit: energy per `n sqrt(b)`, `8 sigma / (3 pi)`.
pub fn band_symmetric_limit(sigma: f64) -> Result<f64> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "sigma must be > 0, got {sigma}"
        )));
    }
    Ok(8.0 * sigma / (3.0 * PI))
}

/// First absolute moment of the semicircle law of radius `2 sigma`, by quadrature.
///
/// Substituting `x = 2 sigma sin(theta)` removes the square-root endpoint
/// singularity: the integrand becomes `8 sigma^3 |sin| cos^2`.
pub fn semicircle_abs_moment_numeric(sigma: f64, tol: f64) -> Result<f64> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "sigma must be > 0, got {sigma}"
        )));
    }
    let f = |th: f64| {
        let c = th.cos();
        8.0 * sigma.powi(3) * th.sin() * c * c
    };
    let half = adaptive_simpson(&f, 0.0, 0.5 * PI, tol * PI * sigma * sigma);
    Ok(2.0 * half / (2.0 * PI * sigma * sigma))
}

fn check_degree(d: u32) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidArgument(format!(
            "degree d must be >= 2, got {d}"
        )))
    } else {
        Ok(())
    }
}

/// Kesten-law energy per vertex of a random `d`-regular graph (closed form).
///
/// `d = 2` is the analytic limit `4/pi` of the arctan term.
pub fn kesten_energy(d: u32) -> Result<f64> {
    check_degree(d)?;
    let df = d as f64;
    let root = (df - 1.0).sqrt();
    if d == 2 {
        return Ok(2.0 * df * root / PI);
    }
    let t = (df - 2.0) / (2.0 * root);
    Ok(2.0 * df * root / PI * (1.0 - t * (1.0 / t).atan()))
}

/// `int |x| dKesten_d(x)` by quadrature, `x = 2 sqrt(d-1) sin(theta)`.
pub fn kesten_energy_numeric(d: u32, tol: f64) -> Result<f64> {
    check_degree(d)?;
    let df = d as f64;
    let rho = 2.0 * (df - 1.0).sqrt();
    let shift = (df - 2.0) * (df - 2.0);
    // d^2 - x^2 = (d-2)^2 + rho^2 cos^2
    let f = |th: f64| {
        let c2 = th.cos().powi(2);
        let denom = shift + rho * rho * c2;
        let ratio = if denom == 0.0 {
            1.0 / (rho * rho)
        } else {
            c2 / denom
        };
        rho.powi(3) * th.sin() * ratio
    };
    let scale = df / (2.0 * PI) * 2.0;
    let integral = adaptive_simpson(&f, 0.0, 0.5 * PI, tol / scale);
    Ok(scale * integral)
}

/// Dense random regular graphs: energy per vertex `(8/(3 pi)) sqrt(d (1 - d/n))`.
pub fn regular_dense_limit(d: u64, n: u64) -> Result<f64> {
    if d == 0 || d >= n {
        return Err(Error::InvalidArgument(format!(
            "need 0 < d < n, got d = {d}, n = {n}"
        )));
    }
    let (df, nf) = (d as f64, n as f64);
    Ok(8.0 / (3.0 * PI) * (df * (1.0 - df / nf)).sqrt())
}

/// Average energy over circulants with exactly `d` jumps, per `n sqrt(d)`: `[1/sqrt 3, 1]`.
pub fn tnd_average_bounds(d: u64) -> Result<(f64, f64)> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be >= 1".into()));
    }
    Ok((1.0 / 3f64.sqrt(), 1.0))
}

/// `E(G) > 2n - 2`, the energy of `K_n`.
pub fn is_hyperenergetic(energy: f64, n: usize) -> bool {
    energy > 2.0 * n as f64 - 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "ensemble", rename_all = "snake_case")]
pub enum Ensemble {
    CirculantBand { p: f64 },
    Gnp { p: f64 },
    BandSymmetric { sigma: f64 },
    RegularSparse { d: u32 },
    RegularDense { d: u64, n: u64 },
    TndAvg { d: u64 },
}

impl Ensemble {
    pub fn label(&self) -> &'static str {
        match self {
            Ensemble::CirculantBand { .. } => "circulant_band",
            Ensemble::Gnp { .. } => "gnp",
            Ensemble::BandSymmetric { .. } => "band_symmetric",
            Ensemble::RegularSparse { .. } => "regular_sparse",
            Ensemble::RegularDense { .. } => "regular_dense",
            Ensemble::TndAvg { .. } => "tnd_avg",
        }
    }

    pub fn normalizer(&self) -> &'static str {
        match self {
            Ensemble::CirculantBand { .. } | Ensemble::BandSymmetric { .. } => "n*sqrt(b)",
            Ensemble::Gnp { .. } => "n*sqrt(n)",
            Ensemble::RegularSparse { .. } => "n",
            Ensemble::RegularDense { .. } => "n",
            Ensemble::TndAvg { .. } => "n*sqrt(d)",
        }
    }
}

/// One row of the comparison table. `upper` is set for interval-valued entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleLimit {
    #[serde(flatten)]
    pub ensemble: Ensemble,
    pub normalizer: &'static str,
    pub constant: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
}

impl EnsembleLimit {
    pub fn evaluate(ensemble: Ensemble) -> Result<Self> {
        let (constant, upper) = match ensemble {
            Ensemble::CirculantBand { p } => (circulant_graph_limit(p)?, None),
            Ensemble::Gnp { p } => (gnp_limit(p)?, None),
            Ensemble::BandSymmetric { sigma } => (band_symmetric_limit(sigma)?, None),
            Ensemble::RegularSparse { d } => (kesten_energy(d)?, None),
            Ensemble::RegularDense { d, n } => (regular_dense_limit(d, n)?, None),
            Ensemble::TndAvg { d } => {
                let (lo, hi) = tnd_average_bounds(d)?;
                (lo, Some(hi))
            }
        };
        Ok(Self {
            ensemble,
            normalizer: ensemble.normalizer(),
            constant,
            upper,
        })
    }
}

/// The comparison table for edge probability `p`, degree `d`, band-matrix
/// entry scale `sigma` and (for the dense regular row) vertex count `n`.
pub fn comparison_table(p: f64, d: u32, sigma: f64, n: Option<u64>) -> Result<Vec<EnsembleLimit>> {
    check_probability(p)?;
    let mut rows = vec![
        Ensemble::CirculantBand { p },
        Ensemble::Gnp { p },
        Ensemble::BandSymmetric { sigma },
        Ensemble::RegularSparse { d },
    ];
    if let Some(n) = n {
        rows.push(Ensemble::RegularDense { d: d as u64, n });
    }
    rows.push(Ensemble::TndAvg { d: d as u64 });
    rows.into_iter().map(EnsembleLimit::evaluate).collect()
}
