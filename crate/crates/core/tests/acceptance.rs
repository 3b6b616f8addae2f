//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p band-energy --test acceptance`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use band_energy::asymptotics::{comparison_table, kesten_energy, kesten_energy_numeric};
use band_energy::bounds::talagrand_delta0;
use band_energy::dirichlet::{
    lebesgue_bound, lebesgue_constant, riemann_sum_gap, total_variation, total_variation_bound,
};
use band_energy::experiments::{
    convergence_study, deviation_experiment, exact_expected_energy_bernoulli, mc_expected_energy,
    toeplitz_vs_circulant, ExperimentConfig,
};
use band_energy::rng::rng_from_seed;
use band_energy::spectral::{circulant_energy, SpectrumMethod};
use band_energy::{build_circulant, CoefficientVector, DistributionSpec};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, ok: String, bad: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

fn within_time(start: Instant, limit: Duration, detail: String) -> Outcome {
    let t = start.elapsed();
    check(
        t < limit,
        format!("{detail}; {:.2}s", t.as_secs_f64()),
        format!(
            "{detail}; took {:.2}s, limit {}s",
            t.as_secs_f64(),
            limit.as_secs()
        ),
    )
}

/// Direct, FFT and (n <= 64) dense energies of 200 random circulants agree.
fn spectral_oracles() -> Outcome {
    let start = Instant::now();
    let mut rng = rng_from_seed(0x5eed_0001);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let n = if i % 4 == 0 {
            rng.random_range(5..=64)
        } else {
            rng.random_range(5..=2048)
        };
        let b = rng.random_range(1..=(n - 1) / 2);
        let a: Vec<f64> = (0..b).map(|_| rng.random_range(-2.0..2.0)).collect();
        let m = build_circulant(n, CoefficientVector::new(a).unwrap()).unwrap();
        let direct = circulant_energy(&m, SpectrumMethod::Direct)
            .map_err(|e| e.to_string())?
            .energy;
        let mut others = vec![
            circulant_energy(&m, SpectrumMethod::Fft)
                .map_err(|e| e.to_string())?
                .energy,
        ];
        if n <= 64 {
            others.push(
                circulant_energy(&m, SpectrumMethod::Dense)
                    .map_err(|e| e.to_string())?
                    .energy,
            );
        }
        for e in others {
            worst = worst.max((e - direct).abs() / direct.max(f64::MIN_POSITIVE));
        }
    }
    if worst > 1e-8 {
        return Err(format!("max relative disagreement {worst:.2e} > 1e-8"));
    }
    within_time(
        start,
        Duration::from_secs(30),
        format!("max relative disagreement {worst:.2e}"),
    )
}

/// Exact enumeration at (8, 2, 1/2) and a 10^5-trial Monte Carlo estimate.
fn exact_vs_mc() -> Outcome {
    let start = Instant::now();
    let exact = exact_expected_energy_bernoulli(8, 2, 0.5).map_err(|e| e.to_string())?;
    let closed = 5.0 + 2.0 * 2f64.sqrt();
    if (exact.raw_mean - closed).abs() > 1e-9 || (exact.raw_mean - 7.82843).abs() > 5e-6 {
        return Err(format!("exact {} != 5 + 2 sqrt 2", exact.raw_mean));
    }
    let d = DistributionSpec::bernoulli(0.5).unwrap();
    let mc = mc_expected_energy(8, 2, &d, &ExperimentConfig::new(100_000, 42))
        .map_err(|e| e.to_string())?;
    let z = (mc.estimate - exact.estimate) / mc.stderr;
    if z.abs() > 3.0 {
        return Err(format!(
            "MC {} vs exact {}: {z:.2} stderr",
            mc.raw_mean, exact.raw_mean
        ));
    }
    within_time(
        start,
        Duration::from_secs(10),
        format!(
            "exact {:.9}, MC {:.5} ({z:+.2} stderr)",
            exact.raw_mean, mc.raw_mean
        ),
    )
}

/// Lebesgue constant and total variation bounds for b = 1..100.
fn dirichlet_bounds() -> Outcome {
    let start = Instant::now();
    let l1 = lebesgue_constant(1, 1e-10);
    if (l1 - 1.435991).abs() > 1e-5 {
        return Err(format!("Lambda_1 = {l1}"));
    }
    for b in 1..=100 {
        let l = lebesgue_constant(b, 1e-10);
        if l > lebesgue_bound(b) {
            return Err(format!("Lambda_{b} = {l} > {}", lebesgue_bound(b)));
        }
        let tv = total_variation(b, 1e-12);
        if tv > total_variation_bound(b) {
            return Err(format!("TV_{b} = {tv} > {}", total_variation_bound(b)));
        }
    }
    within_time(
        start,
        Duration::from_secs(60),
        format!("Lambda_1 = {l1:.6}, all 100 b within bounds"),
    )
}

/// Riemann-sum gaps within (m/n) TV_b.
fn riemann_gaps() -> Outcome {
    let mut violations = Vec::new();
    let mut count = 0;
    for b in 1..=20 {
        for m in [2, 4] {
            for n in [100, 1000, 10_000] {
                let g = riemann_sum_gap(b, m, n);
                count += 1;
                if !g.within_bound() {
                    violations.push(format!("(b={b}, m={m}, n={n}): {} > {}", g.gap, g.bound));
                }
            }
        }
    }
    check(
        violations.is_empty(),
        format!("{count} cases, 0 violations"),
        format!("{} violations: {}", violations.len(), violations.join("; ")),
    )
}

/// Rate-bound envelope and decreasing deviation along n = 16 b.
fn rate_envelope() -> Outcome {
    let start = Instant::now();
    let d = DistributionSpec::bernoulli(0.5).unwrap();
    let rows = convergence_study(
        &[(256, 16), (1024, 64), (4096, 256)],
        &d,
        &ExperimentConfig::new(200, 42),
    )
    .map_err(|e| e.to_string())?;
    let limit = 1.0 / PI.sqrt();
    if (rows[0].limit - limit).abs() > 1e-12 || (limit - 0.564190).abs() > 1e-6 {
        return Err(format!("limit {}", rows[0].limit));
    }
    if let Some(r) = rows.iter().find(|r| !r.within_bound) {
        return Err(format!(
            "b={}: deviation {} > {} + 4 stderr",
            r.b, r.deviation, r.theorem1_rhs
        ));
    }
    let devs: Vec<f64> = rows.iter().map(|r| r.deviation).collect();
    if !devs.windows(2).all(|w| w[1] < w[0]) {
        return Err(format!("deviations not strictly decreasing: {devs:?}"));
    }
    // frozen from the seed-42 pilot run (0.1415, 0.0910, 0.0528)
    let windows = [(0.12, 0.16), (0.08, 0.10), (0.045, 0.06)];
    for (dv, (lo, hi)) in devs.iter().zip(windows) {
        if !(lo..=hi).contains(dv) {
            return Err(format!("deviation {dv} outside pilot window [{lo}, {hi}]"));
        }
    }
    within_time(
        start,
        Duration::from_secs(300),
        format!("deviations {devs:.4?}"),
    )
}

/// Tail frequency at delta0 + 0.5 for (1024, 128), uniform on [0, 1].
fn tail_frequency() -> Outcome {
    let start = Instant::now();
    let u = DistributionSpec::uniform(0.0, 1.0).unwrap();
    let delta = talagrand_delta0(128, 1.0) + 0.5;
    let c = deviation_experiment(1024, 128, &u, &[delta], &ExperimentConfig::new(2000, 3))
        .map_err(|e| e.to_string())?;
    let (emp, th) = (c.empirical[0], c.theoretical[0]);
    if (th - 0.0733).abs() > 1e-4 {
        return Err(format!("bound {th} != 0.0733"));
    }
    let limit = 0.0733 + c.binomial_slack(0.0733);
    if emp > limit {
        return Err(format!("empirical {emp} > {limit}"));
    }
    within_time(
        start,
        Duration::from_secs(120),
        format!("empirical {emp}, bound {th:.4}"),
    )
}

/// Coupled Toeplitz/circulant samples obey the corner chain and the coarse bound.
fn toeplitz_chain() -> Outcome {
    let d = DistributionSpec::bernoulli(0.5).unwrap();
    let r = toeplitz_vs_circulant(512, 8, &d, &ExperimentConfig::new(1000, 5))
        .map_err(|e| e.to_string())?;
    if (r.bounds.coarse - 0.03125).abs() > 1e-15 {
        return Err(format!("coarse bound {}", r.bounds.coarse));
    }
    check(
        r.violations == 0 && r.mean_normalized_gap <= r.bounds.coarse,
        format!(
            "0 violations, mean gap {:.5} <= {}, max ratio {:.3}",
            r.mean_normalized_gap, r.bounds.coarse, r.max_gap_ratio
        ),
        format!(
            "{} violations, mean gap {}",
            r.violations, r.mean_normalized_gap
        ),
    )
}

/// Comparison constants and the Kesten closed form.
fn comparison_constants() -> Outcome {
    let t = comparison_table(0.5, 3, 1.0, None).map_err(|e| e.to_string())?;
    let want = [1.0 / PI.sqrt(), 4.0 / (3.0 * PI), 8.0 / (3.0 * PI)];
    for (row, w) in t.iter().zip(want) {
        if (row.constant - w).abs() > 1e-9 {
            return Err(format!("{}: {} != {w}", row.ensemble.label(), row.constant));
        }
    }
    let k3 = kesten_energy(3).unwrap();
    let k3n = kesten_energy_numeric(3, 1e-12).unwrap();
    if (k3 - k3n).abs() > 1e-8 {
        return Err(format!("kesten(3) closed {k3} vs numeric {k3n}"));
    }
    let ratio = kesten_energy(400).unwrap() / 20.0;
    check(
        (ratio - 8.0 / (3.0 * PI)).abs() <= 0.01,
        format!("kesten(3) = {k3:.6}, kesten(400)/20 = {ratio:.6}"),
        format!("kesten(400)/20 = {ratio}"),
    )
}

/// Same seed, different thread counts, identical numbers.
fn reproducibility() -> Outcome {
    let b = DistributionSpec::bernoulli(0.5).unwrap();
    let u = DistributionSpec::uniform(0.0, 1.0).unwrap();
    let run = |threads: usize| -> Result<(Vec<f64>, Vec<f64>, f64), String> {
        let cfg = ExperimentConfig::new(300, 77).with_threads(threads);
        let mc = mc_expected_energy(512, 40, &b, &cfg).map_err(|e| e.to_string())?;
        let dev =
            deviation_experiment(256, 20, &u, &[0.01, 0.05], &cfg).map_err(|e| e.to_string())?;
        let small = ExperimentConfig::new(40, 77).with_threads(threads);
        let gap = toeplitz_vs_circulant(96, 6, &b, &small).map_err(|e| e.to_string())?;
        Ok((
            vec![mc.estimate, mc.stderr],
            dev.empirical,
            gap.mean_normalized_gap,
        ))
    };
    let base = run(1)?;
    for t in [2, 4, 7] {
        let other = run(t)?;
        if other
            .0
            .iter()
            .map(|x| x.to_bits())
            .ne(base.0.iter().map(|x| x.to_bits()))
            || other.1 != base.1
            || other.2.to_bits() != base.2.to_bits()
        {
            return Err(format!("threads={t} differs from threads=1"));
        }
    }
    Ok("threads 1, 2, 4, 7 bit-identical".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 spectral oracle equivalence", spectral_oracles),
        ("2 exact vs Monte Carlo", exact_vs_mc),
        ("3 Dirichlet kernel bounds", dirichlet_bounds),
        ("4 Riemann-sum gap", riemann_gaps),
        ("5 rate bound envelope", rate_envelope),
        ("6 concentration tail", tail_frequency),
        ("7 Toeplitz corner chain", toeplitz_chain),
        ("8 comparison constants", comparison_constants),
        ("9 reproducibility across threads", reproducibility),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
