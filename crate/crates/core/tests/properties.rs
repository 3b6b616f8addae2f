use approx::assert_relative_eq;
use band_energy::bounds::{corner_trace_bound, lipschitz_energy_bound};
use band_energy::ensembles::corner_block;
use band_energy::linalg::{nuclear_norm, DenseMatrix};
use band_energy::spectral::{
    circulant_eigenvalues_direct, circulant_eigenvalues_fft, circulant_energy,
    dense_symmetric_eigenvalues, energy, SpectrumMethod,
};
use band_energy::{build_circulant, build_toeplitz, CoefficientVector};
use proptest::prelude::*;

/// (n, coefficients) with 1 <= b < n/2.
fn band(max_n: usize) -> impl Strategy<Value = (usize, Vec<f64>)> {
    (5..=max_n).prop_flat_map(|n| {
        let max_b = (n - 1) / 2;
        (Just(n), prop::collection::vec(-3.0..3.0f64, 1..=max_b))
    })
}

fn coeffs(v: &[f64]) -> CoefficientVector {
    CoefficientVector::new(v.to_vec()).unwrap()
}

/// Circulant built entry by entry from the definition `C[i][j] = a_{dist(i, j)}`.
fn circulant_oracle(n: usize, a: &[f64]) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |i, j| {
        let d = (i as isize - j as isize).rem_euclid(n as isize) as usize;
        let k = d.min(n - d);
        if k >= 1 && k <= a.len() {
            a[k - 1]
        } else {
            0.0
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circulant_matches_definition((n, a) in band(40)) {
        let m = build_circulant(n, coeffs(&a)).unwrap();
        prop_assert_eq!(m.dense(), circulant_oracle(n, &a));
    }

    #[test]
    fn corner_structure((n, a) in band(40)) {
        let c = coeffs(&a);
        let b = c.b();
        let t = build_toeplitz(n, c.clone()).unwrap();
        let diff = &t.to_circulant().dense() - &t.dense();
        let l = corner_block(&c);
        for i in 0..n {
            for j in 0..n {
                let want = if i < b && j >= n - b {
                    l[(i, j + b - n)]
                } else if i >= n - b && j < b {
                    l[(j, i + b - n)]
                } else {
                    0.0
                };
                prop_assert_eq!(diff[(i, j)], want, "entry ({}, {})", i, j);
            }
        }
    }

    #[test]
    fn fft_matches_direct((n, a) in band(300)) {
        let m = build_circulant(n, coeffs(&a)).unwrap();
        let d = circulant_eigenvalues_direct(&m);
        let f = circulant_eigenvalues_fft(&m).unwrap();
        let scale = 1.0 + coeffs(&a).l1_norm();
        for (x, y) in d.eigenvalues.iter().zip(&f.eigenvalues) {
            prop_assert!((x - y).abs() <= 1e-10 * scale, "{} vs {}", x, y);
        }
        prop_assert!(d.trace().abs() <= 1e-9 * n as f64 * scale);
    }

    #[test]
    fn closed_form_matches_dense((n, a) in band(64)) {
        let m = build_circulant(n, coeffs(&a)).unwrap();
        let closed = circulant_eigenvalues_direct(&m);
        let dense = dense_symmetric_eigenvalues(&m.dense()).unwrap();
        let d = closed.max_sorted_diff(&dense).unwrap();
        prop_assert!(d <= 1e-9 * (1.0 + coeffs(&a).l1_norm()), "max diff {}", d);
    }

    #[test]
    fn trace_norm_triangle((n, a) in band(64), seed in any::<u64>()) {
        let b = a.len();
        let other: Vec<f64> = (0..b).map(|k| ((seed >> (k % 60)) & 7) as f64 - 3.5).collect();
        let sum: Vec<f64> = a.iter().zip(&other).map(|(x, y)| x + y).collect();
        let e = |v: &[f64]| circulant_energy(&build_circulant(n, coeffs(v)).unwrap(), SpectrumMethod::Direct).unwrap().energy;
        prop_assert!(e(&sum) <= e(&a) + e(&other) + 1e-9 * (1.0 + e(&sum)));
    }

    #[test]
    fn energy_scales((n, a) in band(64), c in -5.0..5.0f64) {
        let v = coeffs(&a);
        let e = |v: CoefficientVector| circulant_energy(&build_circulant(n, v).unwrap(), SpectrumMethod::Direct).unwrap().energy;
        let base = e(v.clone());
        prop_assert!((e(v.scaled(c)) - c.abs() * base).abs() <= 1e-10 * (1.0 + c.abs() * base));
    }

    #[test]
    fn normalized_energy_is_lipschitz((n, a) in band(64), shift in prop::collection::vec(-1.0..1.0f64, 32)) {
        let b = a.len();
        let moved: Vec<f64> = a.iter().zip(shift.iter().cycle()).map(|(x, s)| x + s).collect();
        let f = |v: &[f64]| circulant_energy(&build_circulant(n, coeffs(v)).unwrap(), SpectrumMethod::Direct).unwrap().normalized;
        let dist = a.iter().zip(&moved).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        prop_assert!((f(&a) - f(&moved)).abs() <= lipschitz_energy_bound(b) * dist + 1e-12);
    }

    #[test]
    fn corner_chain((n, a) in band(48)) {
        let c = coeffs(&a);
        let t = build_toeplitz(n, c.clone()).unwrap();
        let et = energy(&dense_symmetric_eigenvalues(&t.dense()).unwrap(), c.b()).energy;
        let ec = circulant_energy(&t.to_circulant(), SpectrumMethod::Direct).unwrap().energy;
        let corner = 2.0 * nuclear_norm(&corner_block(&c)).unwrap();
        prop_assert!((et - ec).abs() <= corner + 1e-8);
        prop_assert!(corner <= corner_trace_bound(&c) + 1e-8);
    }
}

#[test]
fn dense_route_agrees_with_closed_form() {
    let m = build_circulant(12, coeffs(&[0.5, -1.0, 2.0, 0.25])).unwrap();
    let direct = circulant_energy(&m, SpectrumMethod::Direct).unwrap();
    let fft = circulant_energy(&m, SpectrumMethod::Fft).unwrap();
    let dense = circulant_energy(&m, SpectrumMethod::Dense).unwrap();
    assert_relative_eq!(direct.energy, fft.energy, max_relative = 1e-12);
    assert_relative_eq!(direct.energy, dense.energy, max_relative = 1e-10);
}

#[test]
fn nuclear_norm_of_symmetric_is_energy() {
    let t = build_toeplitz(10, coeffs(&[1.0, -0.5, 0.3])).unwrap();
    let e = energy(&dense_symmetric_eigenvalues(&t.dense()).unwrap(), 3).energy;
    assert_relative_eq!(nuclear_norm(&t.dense()).unwrap(), e, max_relative = 1e-10);
}
