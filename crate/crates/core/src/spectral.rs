//! Eigenvalues and trace-norm energies.
//!
//! Circulant spectra come from the cosine closed form `lambda_r = 2 sum_k a_k
//! cos(2 pi k r / n)` (direct, `O(nb)`) or from a length-`n` FFT of the symbol
//! row. Toeplitz spectra, and anything without a closed form, go through the
//! dense symmetric eigensolver.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::ensembles::{CirculantMatrix, CoefficientVector, ToeplitzMatrix};
use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigenvalues, DenseMatrix};

/// Default size cap for dense Toeplitz energies.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Relative tolerance on the FFT imaginary residual, scaled by `n * ||a||_1`.
pub const FFT_IMAG_TOL: f64 = 1e-9;

/// Multiset of `n` real eigenvalues. Order carries no meaning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn new(eigenvalues: Vec<f64>) -> Self {
        Self { eigenvalues }
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Sum of absolute eigenvalues.
    pub fn trace_norm(&self) -> f64 {
        self.eigenvalues.iter().map(|v| v.abs()).sum()
    }

    /// Largest elementwise gap after sorting both spectra; `None` if sizes differ.
    pub fn max_sorted_diff(&self, other: &Spectrum) -> Option<f64> {
        if self.n() != other.n() {
            return None;
        }
        Some(
            self.sorted()
                .iter()
                .zip(other.sorted())
                .fold(0.0, |m, (a, b)| m.max((a - b).abs())),
        )
    }
}

/// Trace norm and its `n sqrt(b)` normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyValue {
    pub energy: f64,
    pub normalized: f64,
}

impl EnergyValue {
    pub fn new(energy: f64, n: usize, b: usize) -> Self {
        Self {
            energy,
            normalized: normalize(energy, n, b),
        }
    }
}

pub fn normalize(energy: f64, n: usize, b: usize) -> f64 {
    energy / (n as f64 * (b as f64).sqrt())
}

pub fn energy(spectrum: &Spectrum, b: usize) -> EnergyValue {
    EnergyValue::new(spectrum.trace_norm(), spectrum.n(), b)
}

/// `lambda_r` for `r = 1..=n` by direct cosine summation.
pub fn circulant_eigenvalues_direct(m: &CirculantMatrix) -> Spectrum {
    let n = m.n();
    let cos = cosine_table(n);
    Spectrum::new(direct_eigenvalues(m.coeffs(), n, &cos))
}

fn cosine_table(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| (2.0 * PI * j as f64 / n as f64).cos())
        .collect()
}

fn direct_eigenvalues(coeffs: &CoefficientVector, n: usize, cos: &[f64]) -> Vec<f64> {
    (1..=n)
        .map(|r| {
            let s: f64 = coeffs
                .values()
                .iter()
                .enumerate()
                .map(|(i, a)| a * cos[((i + 1) * r) % n])
                .sum();
            2.0 * s
        })
        .collect()
}

/// Circulant spectrum via a discrete Fourier transform of the symbol row.
///
/// Fails if the imaginary residue exceeds `FFT_IMAG_TOL * n * ||a||_1`.
pub fn circulant_eigenvalues_fft(m: &CirculantMatrix) -> Result<Spectrum> {
    let fft = FftPlanner::new().plan_fft_forward(m.n());
    fft_eigenvalues(m, fft.as_ref()).map(Spectrum::new)
}

fn fft_eigenvalues(m: &CirculantMatrix, fft: &dyn Fft<f64>) -> Result<Vec<f64>> {
    let n = m.n();
    let mut buf: Vec<Complex<f64>> = m
        .symbol_row()
        .into_iter()
        .map(|x| Complex::new(x, 0.0))
        .collect();
    fft.process(&mut buf);
    let residual = buf.iter().fold(0.0f64, |r, z| r.max(z.im.abs()));
    let tol = FFT_IMAG_TOL * n as f64 * m.coeffs().l1_norm().max(f64::MIN_POSITIVE);
    if residual > tol {
        return Err(Error::ImaginaryResidual { residual, tol });
    }
    // bin k holds lambda_k; report r = 1..=n like the direct route
    let mut eig: Vec<f64> = buf.into_iter().map(|z| z.re).collect();
    eig.rotate_left(1);
    Ok(eig)
}

/// All eigenvalues of a dense symmetric matrix.
pub fn dense_symmetric_eigenvalues(matrix: &DenseMatrix) -> Result<Spectrum> {
    symmetric_eigenvalues(matrix).map(Spectrum::new)
}

/// Energy of a band Toeplitz matrix through the dense eigensolver, capped at
/// [`DEFAULT_DENSE_CAP`].
pub fn toeplitz_energy(m: &ToeplitzMatrix) -> Result<EnergyValue> {
    toeplitz_energy_capped(m, DEFAULT_DENSE_CAP)
}

pub fn toeplitz_energy_capped(m: &ToeplitzMatrix, cap: usize) -> Result<EnergyValue> {
    if m.n() > cap {
        return Err(Error::SizeCap { n: m.n(), cap });
    }
    let spec = dense_symmetric_eigenvalues(&m.dense())?;
    Ok(energy(&spec, m.b()))
}

/// Which circulant spectrum route to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumMethod {
    Direct,
    Fft,
    Dense,
}

/// Reusable circulant energy evaluator for one size `n`.
///
/// Holds the cosine table and FFT plan so Monte Carlo loops do not rebuild
/// them per trial. Shareable across threads.
#[derive(Clone)]
pub struct CirculantEnergy {
    n: usize,
    cos: Arc<Vec<f64>>,
    fft: Arc<dyn Fft<f64>>,
}

impl CirculantEnergy {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            cos: Arc::new(cosine_table(n)),
            fft: FftPlanner::new().plan_fft_forward(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// FFT wins once `b` exceeds `log2 n`.
    pub fn prefers_fft(&self, b: usize) -> bool {
        (b as f64) > (self.n as f64).log2()
    }

    pub fn eigenvalues(&self, m: &CirculantMatrix) -> Result<Vec<f64>> {
        debug_assert_eq!(m.n(), self.n);
        if self.prefers_fft(m.b()) {
            fft_eigenvalues(m, self.fft.as_ref())
        } else {
            Ok(direct_eigenvalues(m.coeffs(), self.n, &self.cos))
        }
    }

    pub fn energy(&self, m: &CirculantMatrix) -> Result<EnergyValue> {
        let e: f64 = self.eigenvalues(m)?.iter().map(|v| v.abs()).sum();
        Ok(EnergyValue::new(e, self.n, m.b()))
    }
}

/// Energy of a circulant through the chosen route.
pub fn circulant_energy(m: &CirculantMatrix, method: SpectrumMethod) -> Result<EnergyValue> {
    let spec = match method {
        SpectrumMethod::Direct => circulant_eigenvalues_direct(m),
        SpectrumMethod::Fft => circulant_eigenvalues_fft(m)?,
        SpectrumMethod::Dense => dense_symmetric_eigenvalues(&m.dense())?,
    };
    Ok(energy(&spec, m.b()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{build_circulant, build_toeplitz};
    use approx::assert_abs_diff_eq;

    fn circ(n: usize, a: &[f64]) -> CirculantMatrix {
        build_circulant(n, CoefficientVector::new(a.to_vec()).unwrap()).unwrap()
    }

    fn assert_multiset(got: &Spectrum, want: &[f64], tol: f64) {
        let s = Spectrum::new(want.to_vec());
        let d = got.max_sorted_diff(&s).expect("same size");
        assert!(
            d <= tol,
            "spectra differ by {d}: {:?} vs {:?}",
            got.sorted(),
            s.sorted()
        );
    }

    #[test]
    fn cycle_c4() {
        let m = circ(4, &[1.0]);
        let direct = circulant_eigenvalues_direct(&m);
        assert_multiset(&direct, &[0.0, -2.0, 0.0, 2.0], 1e-12);
        assert_multiset(
            &circulant_eigenvalues_fft(&m).unwrap(),
            &[0.0, -2.0, 0.0, 2.0],
            1e-12,
        );
        assert_abs_diff_eq!(energy(&direct, 1).energy, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn complete_k5() {
        let spec = circulant_eigenvalues_direct(&circ(5, &[1.0, 1.0]));
        assert_multiset(&spec, &[4.0, -1.0, -1.0, -1.0, -1.0], 1e-12);
        assert_abs_diff_eq!(energy(&spec, 2).energy, 8.0, epsilon = 1e-12);
    }

    #[test]
    fn last_eigenvalue_is_row_sum() {
        let spec = circulant_eigenvalues_direct(&circ(8, &[1.0, 1.0]));
        assert_abs_diff_eq!(spec.eigenvalues[7], 4.0, epsilon = 1e-12);
    }

    #[test]
    fn hexagon_fft() {
        let spec = circulant_eigenvalues_fft(&circ(6, &[1.0, 0.0])).unwrap();
        assert_multiset(&spec, &[1.0, -1.0, -2.0, -1.0, 1.0, 2.0], 1e-12);
        assert!((spec.eigenvalues[5] - 2.0).abs() < 1e-12);
        assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dense_c4_matches_closed_form() {
        let spec = dense_symmetric_eigenvalues(&circ(4, &[1.0]).dense()).unwrap();
        assert_multiset(&spec, &[0.0, -2.0, 0.0, 2.0], 1e-12);
    }

    #[test]
    fn path_p4_energy() {
        let t = build_toeplitz(4, CoefficientVector::new(vec![1.0]).unwrap()).unwrap();
        let spec = dense_symmetric_eigenvalues(&t.dense()).unwrap();
        assert_multiset(
            &spec,
            &[1.6180339887, 0.6180339887, -0.6180339887, -1.6180339887],
            1e-9,
        );
        assert_abs_diff_eq!(
            toeplitz_energy(&t).unwrap().energy,
            2.0 * 5f64.sqrt(),
            epsilon = 1e-12
        );
        let z = build_toeplitz(4, CoefficientVector::new(vec![0.0]).unwrap()).unwrap();
        assert_eq!(toeplitz_energy(&z).unwrap().energy, 0.0);
    }

    #[test]
    fn toeplitz_cap() {
        let t = build_toeplitz(40, CoefficientVector::new(vec![1.0]).unwrap()).unwrap();
        assert!(matches!(
            toeplitz_energy_capped(&t, 32),
            Err(Error::SizeCap { n: 40, cap: 32 })
        ));
    }

    #[test]
    fn normalized_energy() {
        let e = EnergyValue::new(8.0, 4, 4);
        assert_eq!(e.normalized, 1.0);
    }

    #[test]
    fn evaluator_switches_route() {
        let ev = CirculantEnergy::new(64);
        assert!(!ev.prefers_fft(6));
        assert!(ev.prefers_fft(7));
        let m = circ(64, &[0.3, -1.0, 2.0, 0.0, 1.0, 0.5, 0.25, -0.7, 0.1, 0.9]);
        let a = ev.energy(&m).unwrap().energy;
        let b = circulant_energy(&m, SpectrumMethod::Direct).unwrap().energy;
        assert_abs_diff_eq!(a, b, epsilon = 1e-10);
    }
}
