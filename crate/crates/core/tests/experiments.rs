use band_energy::experiments::{
    deviation_experiment, exact_expected_energy_bernoulli, mc_expected_energy,
    normalized_energy_samples, toeplitz_vs_circulant, ExperimentConfig,
};
use band_energy::spectral::{circulant_energy, SpectrumMethod};
use band_energy::{build_circulant, CoefficientVector, DistributionSpec, Error};

#[test]
fn exact_matches_brute_force_average() {
    // every pattern of a_1..a_3 in {0, 1}, averaged with equal weights
    let (n, b) = (11, 3);
    let mut total = 0.0;
    for mask in 0..8u32 {
        let v = (0..b).map(|k| f64::from((mask >> k) & 1)).collect();
        let m = build_circulant(n, CoefficientVector::new(v).unwrap()).unwrap();
        total += circulant_energy(&m, SpectrumMethod::Dense).unwrap().energy;
    }
    let exact = exact_expected_energy_bernoulli(n, b, 0.5).unwrap();
    assert!((exact.raw_mean - total / 8.0).abs() < 1e-10);
}

#[test]
fn exact_vs_mc_small_cases() {
    for (n, b, p, seed) in [(9, 3, 0.3, 11u64), (12, 4, 0.5, 12), (20, 6, 0.8, 13)] {
        let exact = exact_expected_energy_bernoulli(n, b, p).unwrap();
        let dist = DistributionSpec::bernoulli(p).unwrap();
        let mc = mc_expected_energy(n, b, &dist, &ExperimentConfig::new(20_000, seed)).unwrap();
        let z = (mc.estimate - exact.estimate) / mc.stderr;
        assert!(z.abs() <= 4.0, "n={n} b={b} p={p}: z = {z}");
    }
}

#[test]
fn gaussian_near_limit() {
    let g = DistributionSpec::gaussian(0.0, 1.0).unwrap();
    let r = mc_expected_energy(4096, 256, &g, &ExperimentConfig::new(200, 7)).unwrap();
    assert!(
        (r.estimate - std::f64::consts::FRAC_2_SQRT_PI).abs() <= 0.05,
        "{}",
        r.estimate
    );
}

#[test]
fn bernoulli_band_in_pilot_window() {
    let d = DistributionSpec::bernoulli(0.5).unwrap();
    let r = mc_expected_energy(4096, 256, &d, &ExperimentConfig::new(200, 42)).unwrap();
    assert!(r.estimate > 0.56 && r.estimate < 0.75, "{}", r.estimate);
}

#[test]
fn thread_count_does_not_change_results() {
    let d = DistributionSpec::uniform(-1.0, 2.0).unwrap();
    let base =
        normalized_energy_samples(200, 30, &d, &ExperimentConfig::new(64, 99).with_threads(1))
            .unwrap();
    for t in [2, 3, 8] {
        let cfg = ExperimentConfig::new(64, 99).with_threads(t);
        assert_eq!(normalized_energy_samples(200, 30, &d, &cfg).unwrap(), base);
    }
}

#[test]
fn toeplitz_gap_small() {
    let d = DistributionSpec::bernoulli(0.5).unwrap();
    let r = toeplitz_vs_circulant(64, 4, &d, &ExperimentConfig::new(50, 3)).unwrap();
    assert_eq!(r.violations, 0);
    assert!(r.max_gap_ratio <= 1.0);
    assert!(r.mean_normalized_gap <= r.bounds.coarse);
}

#[test]
fn deviation_shape() {
    let u = DistributionSpec::uniform(0.0, 1.0).unwrap();
    let c = deviation_experiment(
        256,
        16,
        &u,
        &[0.0, 0.01, 10.0],
        &ExperimentConfig::new(100, 5),
    )
    .unwrap();
    assert_eq!(c.empirical[0], 1.0);
    assert_eq!(c.empirical[2], 0.0);
    assert!(c.theoretical.iter().all(|&p| (0.0..=1.0).contains(&p)));
    let e = deviation_experiment(15, 8, &u, &[0.1], &ExperimentConfig::new(10, 0)).unwrap_err();
    assert!(matches!(e, Error::BandWidth { .. }));
}
