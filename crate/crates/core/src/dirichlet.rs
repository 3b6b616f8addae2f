//! Dirichlet kernel `D_b(t) = 1 + 2 sum_{k<=b} cos(kt)`: pointwise values,
//! Lebesgue constants, total variation over `[0, pi]`, and the gap between
//! Riemann sums of `|D_b(pi m t) - 1|` and its integral.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::quadrature::{adaptive_simpson, bisect, bracketed_roots};

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// Extremum search tolerance in `t`.
const EXTREMUM_XTOL: f64 = 1e-12;

pub fn dirichlet_kernel(b: usize, t: f64) -> f64 {
    let half = (0.5 * t).sin();
    if half.abs() < 1e-8 {
        cosine_sum(b, t)
    } else {
        ((b as f64 + 0.5) * t).sin() / half
    }
}

/// `1 + 2 sum cos(kt)` evaluated term by term.
pub fn cosine_sum(b: usize, t: f64) -> f64 {
    1.0 + 2.0 * (1..=b).map(|k| (k as f64 * t).cos()).sum::<f64>()
}

/// `3 + (4/pi^2) ln b`.
pub fn lebesgue_bound(b: usize) -> f64 {
    3.0 + 4.0 / (PI * PI) * (b as f64).ln()
}

/// `1 + (2b+1)(1 + gamma + ln b)`.
pub fn total_variation_bound(b: usize) -> f64 {
    1.0 + (2 * b + 1) as f64 * (1.0 + EULER_GAMMA + (b as f64).ln())
}

/// `Lambda_b = (1/pi) int_0^pi |D_b(t)| dt`, absolute error at most `tol`.
///
/// The interval is split at the `b` zeros `2 pi k / (2b+1)` so each piece is
/// smooth and of one sign.
pub fn lebesgue_constant(b: usize, tol: f64) -> f64 {
    if b == 0 {
        return 1.0;
    }
    let m = (2 * b + 1) as f64;
    let mut knots: Vec<f64> = (0..=b).map(|k| 2.0 * PI * k as f64 / m).collect();
    knots.push(PI);
    let pieces = knots.len() - 1;
    let piece_tol = tol * PI / pieces as f64;
    let f = |t: f64| dirichlet_kernel(b, t);
    let total: f64 = knots
        .windows(2)
        .map(|w| adaptive_simpson(&f, w[0], w[1], piece_tol).abs())
        .sum();
    total / PI
}

/// `D_b(2t) = sin(mt)/sin(t)` with `m = 2b + 1`.
fn doubled_kernel(b: usize, t: f64) -> f64 {
    dirichlet_kernel(b, 2.0 * t)
}

/// Interior extrema of `sin(mt)/sin t` on `(0, pi/2)`, one per inter-zero
/// interval `[pi k/m, pi (k+1)/m]`, `k = 1..b-1`.
pub fn kernel_extrema(b: usize, xtol: f64) -> Vec<f64> {
    let m = (2 * b + 1) as f64;
    // numerator of the derivative of sin(mt)/sin(t)
    let slope = |t: f64| m * (m * t).cos() * t.sin() - (m * t).sin() * t.cos();
    (1..b)
        .map(|k| {
            let lo = PI * k as f64 / m;
            let hi = PI * (k + 1) as f64 / m;
            bisect(&slope, lo, hi, slope(lo), xtol)
        })
        .collect()
}

/// `Var_{[0, pi]}(D_b)` computed as `Var_{[0, pi/2]}(sin(mt)/sin t)`.
///
/// Between the endpoints and the interior extrema the function is monotone,
/// so the variation is the sum of absolute rises and falls between them.
/// Extrema are bisected to `min(tol, 1e-12)` in `t`.
pub fn total_variation(b: usize, tol: f64) -> f64 {
    if b == 0 {
        return 0.0;
    }
    let mut points = vec![0.0];
    points.extend(kernel_extrema(b, tol.min(EXTREMUM_XTOL)));
    points.push(0.5 * PI);
    let values: Vec<f64> = points.iter().map(|&t| doubled_kernel(b, t)).collect();
    values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// Alternative bookkeeping: `D_m(0) + 2 sum |extrema| + |D_m(pi/2)|`.
pub fn total_variation_by_extrema(b: usize) -> f64 {
    if b == 0 {
        return 0.0;
    }
    let m = (2 * b + 1) as f64;
    let inner: f64 = kernel_extrema(b, EXTREMUM_XTOL)
        .iter()
        .map(|&t| doubled_kernel(b, t).abs())
        .sum();
    m + 2.0 * inner + doubled_kernel(b, 0.5 * PI).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelAnalysis {
    pub b: usize,
    pub lebesgue: f64,
    pub lebesgue_bound: f64,
    pub total_variation: f64,
    pub tv_bound: f64,
}

impl KernelAnalysis {
    pub fn compute(b: usize, tol: f64) -> Self {
        Self {
            b,
            lebesgue: lebesgue_constant(b, tol),
            lebesgue_bound: lebesgue_bound(b),
            total_variation: total_variation(b, tol),
            tv_bound: total_variation_bound(b),
        }
    }

    pub fn within_bounds(&self) -> bool {
        self.lebesgue <= self.lebesgue_bound && self.total_variation <= self.tv_bound
    }
}

/// Riemann sum vs integral of `|D_b(pi m t) - 1|` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannGap {
    pub b: usize,
    pub m: u32,
    pub n: usize,
    pub sum: f64,
    pub integral: f64,
    pub gap: f64,
    /// `(m / n) Var_{[0, pi]}(D_b)`.
    pub bound: f64,
    /// `1 + Lambda_b`, the integral's upper bound.
    pub integral_bound: f64,
}

impl RiemannGap {
    pub fn within_bound(&self) -> bool {
        self.gap <= self.bound
    }

    /// `integral - (1 + Lambda_b)`; reported, expected to be `<= 0`.
    pub fn integral_excess(&self) -> f64 {
        self.integral - self.integral_bound
    }
}

const GAP_QUAD_TOL: f64 = 1e-11;

pub fn riemann_sum_gap(b: usize, m: u32, n: usize) -> RiemannGap {
    let mf = m as f64;
    let f = |t: f64| dirichlet_kernel(b, PI * mf * t) - 1.0;
    let sum = (1..=n).map(|r| f(r as f64 / n as f64).abs()).sum::<f64>() / n as f64;
    let integral = if b == 0 {
        0.0
    } else {
        // D_b(pi m t) - 1 has at most 2b sign changes per unit of m t.
        let steps = 16 * m.max(1) as usize * (b + 1);
        let mut knots = vec![0.0];
        knots.extend(bracketed_roots(&f, 0.0, 1.0, steps, 1e-14));
        knots.push(1.0);
        let piece_tol = GAP_QUAD_TOL / (knots.len() - 1) as f64;
        let g = |t: f64| f(t).abs();
        knots
            .windows(2)
            .map(|w| adaptive_simpson(&g, w[0], w[1], piece_tol))
            .sum()
    };
    RiemannGap {
        b,
        m,
        n,
        sum,
        integral,
        gap: (sum - integral).abs(),
        bound: mf / n as f64 * total_variation(b, EXTREMUM_XTOL),
        integral_bound: 1.0 + lebesgue_constant(b, 1e-10),
    }
}
