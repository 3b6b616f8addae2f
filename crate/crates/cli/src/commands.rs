//! Argument definitions and dispatch.

use std::path::PathBuf;
use std::str::FromStr;

use band_energy::asymptotics::comparison_table;
use band_energy::bounds::{
    clt_part_report, corner_report, limit_energy, mean_part_bound, talagrand_report,
    theorem1_rhs_with, theorem3_report_from_moments, var_part_bound, BoundReport, BERRY_ESSEEN_C1,
};
use band_energy::dirichlet::{riemann_sum_gap, KernelAnalysis};
use band_energy::experiments::{
    convergence_study, deviation_experiment, exact_expected_energy_bernoulli, mc_expected_energy,
    toeplitz_vs_circulant,
};
use band_energy::io::read_coefficients;
use band_energy::spectral::{
    circulant_eigenvalues_direct, circulant_eigenvalues_fft, dense_symmetric_eigenvalues, energy,
    Spectrum,
};
use band_energy::{
    build_circulant, build_toeplitz, sample_coefficients, CirculantEnergy, DistributionKind,
    DistributionSpec, Error, ExperimentConfig, Result,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::output::{Format, Sink};

/// Environment variable that, when set, replaces `--seed`.
pub const SEED_ENV: &str = "SPECTRAL_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "band-energy",
    version,
    about = "Energies of random band circulant and Toeplitz matrices"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format: JSON lines (default) or CSV.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for Monte Carlo runs (0 = all cores). Results do not depend on it.
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,
    /// Base seed; trial i uses splitmix64(seed XOR i). SPECTRAL_SEED overrides it.
    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,
    /// Omit the timestamp field so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy (sum of |eigenvalues|) of one band matrix.
    ///
    /// Coefficients a_1..a_b come from --coeffs (JSON array or one-column CSV)
    /// or are sampled from --dist with --seed.
    Energy(EnergyArgs),
    /// Expected normalized energy E/(n sqrt b) of the random band circulant.
    ExpectedEnergy(ExpectedArgs),
    /// Evaluate one of the explicit bounds with a per-term breakdown.
    Bounds(BoundsArgs),
    /// Lebesgue constants and total variation of the Dirichlet kernel, or
    /// Riemann-sum gaps with --gap-n.
    Dirichlet(DirichletArgs),
    /// Empirical deviation frequencies against the concentration bound.
    Deviation(DeviationArgs),
    /// Monte Carlo estimates along an (n, b) schedule against the rate bound.
    Convergence(ConvergenceArgs),
    /// Limiting normalized energies of several random graph ensembles.
    Compare(CompareArgs),
    /// Coupled Toeplitz vs circulant energy gaps.
    ToeplitzGap(ToeplitzGapArgs),
}

#[derive(Debug, Clone, Copy, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Circulant,
    Toeplitz,
}

#[derive(Debug, Clone, Copy, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EigenRoute {
    /// Direct/FFT choice by b versus log2 n (circulant), dense otherwise.
    Auto,
    Direct,
    Fft,
    Dense,
}

#[derive(Debug, Args, Serialize)]
pub struct EnergyArgs {
    /// Matrix size.
    #[arg(long)]
    pub n: usize,
    /// Band width; must be given with --dist, optional with --coeffs.
    #[arg(long)]
    pub b: Option<usize>,
    /// Coefficient file (.json array or .csv column).
    #[arg(long, conflicts_with = "dist")]
    pub coeffs: Option<PathBuf>,
    /// Coefficient distribution: bernoulli:p, uniform:lo:hi or gaussian:mu:sigma.
    #[arg(long)]
    pub dist: Option<String>,
    #[arg(long, value_enum, default_value_t = MatrixKind::Circulant)]
    pub kind: MatrixKind,
    /// Eigenvalue route (direct and fft apply to circulants only).
    #[arg(long, value_enum, default_value_t = EigenRoute::Auto)]
    pub method: EigenRoute,
    /// Also emit the eigenvalues (in CSV mode: emit only the spectrum table).
    #[arg(long)]
    pub spectrum: bool,
}

#[derive(Debug, Clone, Copy, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExpectedMethod {
    /// Monte Carlo over --trials independent draws.
    Mc,
    /// Exact sum over all 2^b coefficient patterns (Bernoulli only, b <= 20).
    Exact,
}

#[derive(Debug, Args, Serialize)]
pub struct ExpectedArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub b: usize,
    /// Coefficient distribution.
    #[arg(long, default_value = "bernoulli:0.5")]
    pub dist: String,
    #[arg(long, value_enum, default_value_t = ExpectedMethod::Mc)]
    pub method: ExpectedMethod,
    /// Monte Carlo trials.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, Serialize, ValueEnum)]
pub enum BoundSel {
    /// Rate bound on |E E/(n sqrt b) - 2 sigma/sqrt(pi)|.
    #[value(name = "1")]
    #[serde(rename = "1")]
    Rate,
    /// Deviation probability bound (needs --R or a bounded --dist, and --delta).
    #[value(name = "2")]
    #[serde(rename = "2")]
    Tail,
    /// Toeplitz vs circulant expected-energy gap.
    #[value(name = "3")]
    #[serde(rename = "3")]
    Toeplitz,
    /// Mean-removal error.
    #[value(name = "mean")]
    #[serde(rename = "mean")]
    Mean,
    /// Gaussian Riemann-sum error.
    #[value(name = "var")]
    #[serde(rename = "var")]
    Var,
    /// Moment gap from the non-uniform Berry-Esseen inequality (times sqrt b).
    #[value(name = "clt")]
    #[serde(rename = "clt")]
    Clt,
    /// Trace-norm bound of the circulant-minus-Toeplitz corners (needs --coeffs).
    #[value(name = "corner")]
    #[serde(rename = "corner")]
    Corner,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    /// Which bound: 1, 2, 3, mean, var, clt or corner.
    #[arg(long, value_enum)]
    pub theorem: BoundSel,
    /// Distribution supplying a, sigma, mu3 and R; explicit flags override it.
    #[arg(long)]
    pub dist: Option<String>,
    /// Mean of the entries.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Standard deviation of the entries.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Absolute central third moment of the entries.
    #[arg(long)]
    pub mu3: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    /// Deviation level on the E/(n sqrt b) scale.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Support bound: entries lie in [0, R].
    #[arg(long = "R")]
    #[serde(rename = "R")]
    pub r: Option<f64>,
    /// Berry-Esseen constant.
    #[arg(long, default_value_t = BERRY_ESSEEN_C1)]
    pub c1: f64,
    /// Coefficient file for --theorem corner.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DirichletArgs {
    /// Inclusive band-width range LO:HI.
    #[arg(long, default_value = "1:10")]
    pub b_range: String,
    /// Absolute quadrature tolerance for Lebesgue constants.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Report Riemann-sum gaps with this many nodes instead of kernel constants.
    #[arg(long)]
    pub gap_n: Option<usize>,
    /// Frequencies m for the Riemann-sum gaps.
    #[arg(long, value_delimiter = ',', default_value = "2,4")]
    pub m: Vec<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct DeviationArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub b: usize,
    /// Coefficient distribution; needs support in [0, R].
    #[arg(long, default_value = "uniform:0:1")]
    pub dist: String,
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
    /// Comma-separated deviation levels.
    #[arg(long, value_delimiter = ',', required = true)]
    pub deltas: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct ConvergenceArgs {
    /// Comma-separated n:b points.
    #[arg(long, default_value = "256:16,1024:64,4096:256")]
    pub schedule: String,
    #[arg(long, default_value = "bernoulli:0.5")]
    pub dist: String,
    /// Monte Carlo trials per point.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    /// Edge probability for the circulant-graph and G(n, p) rows.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Degree for the regular-graph rows.
    #[arg(long, default_value_t = 3)]
    pub d: u32,
    /// Entry standard deviation for the band symmetric (semicircle) row.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Vertex count; adds the dense regular row.
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct ToeplitzGapArgs {
    #[arg(long, default_value_t = 512)]
    pub n: usize,
    #[arg(long, default_value_t = 8)]
    pub b: usize,
    #[arg(long, default_value = "bernoulli:0.5")]
    pub dist: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

struct Ctx {
    sink: Sink,
    seed: u64,
    threads: usize,
}

impl Ctx {
    fn config(&self, trials: usize) -> ExperimentConfig {
        ExperimentConfig::new(trials, self.seed).with_threads(self.threads)
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let seed = match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{SEED_ENV}={s:?} is not a u64")))?,
        Err(_) => cli.common.seed,
    };
    let mut ctx = Ctx {
        sink: Sink::new(cli.common.format, !cli.common.no_timestamp),
        seed,
        threads: cli.common.threads,
    };
    match &cli.command {
        Command::Energy(a) => cmd_energy(&mut ctx, a)?,
        Command::ExpectedEnergy(a) => cmd_expected(&mut ctx, a)?,
        Command::Bounds(a) => cmd_bounds(&mut ctx, a)?,
        Command::Dirichlet(a) => cmd_dirichlet(&mut ctx, a)?,
        Command::Deviation(a) => cmd_deviation(&mut ctx, a)?,
        Command::Convergence(a) => cmd_convergence(&mut ctx, a)?,
        Command::Compare(a) => cmd_compare(&mut ctx, a)?,
        Command::ToeplitzGap(a) => cmd_toeplitz_gap(&mut ctx, a)?,
    }
    ctx.sink.finish(cli.common.out.as_deref())
}

fn parse_dist(s: &str) -> Result<DistributionSpec> {
    DistributionSpec::from_str(s)
}

fn parse_pair(s: &str, what: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidArgument(format!("{what}: expected X:Y, got {s:?}"));
    let (x, y) = s.split_once(':').ok_or_else(bad)?;
    Ok((
        x.trim().parse().map_err(|_| bad())?,
        y.trim().parse().map_err(|_| bad())?,
    ))
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required here")))
}

#[derive(Serialize)]
struct EnergyBody {
    energy: f64,
    normalized: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigenvalues: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct EnergyRow {
    n: usize,
    b: usize,
    energy: f64,
    normalized: f64,
}

#[derive(Serialize)]
struct SpectrumRow {
    r: usize,
    lambda: f64,
}

fn cmd_energy(ctx: &mut Ctx, a: &EnergyArgs) -> Result<()> {
    let (coeffs, seed) = match (&a.coeffs, &a.dist) {
        (Some(path), _) => {
            let c = read_coefficients(path)?;
            if let Some(b) = a.b.filter(|&b| b != c.b()) {
                return Err(Error::InvalidArgument(format!(
                    "--b {b} does not match the {} coefficients in {}",
                    c.b(),
                    path.display()
                )));
            }
            (c, None)
        }
        (None, dist) => {
            let dist = parse_dist(dist.as_deref().unwrap_or("bernoulli:0.5"))?;
            let b = require(a.b, "b")?;
            (sample_coefficients(&dist, b, ctx.seed)?, Some(ctx.seed))
        }
    };
    let b = coeffs.b();
    let spectrum: Spectrum = match (a.kind, a.method) {
        (MatrixKind::Circulant, route) => {
            let m = build_circulant(a.n, coeffs)?;
            match route {
                EigenRoute::Auto => Spectrum::new(CirculantEnergy::new(a.n).eigenvalues(&m)?),
                EigenRoute::Direct => circulant_eigenvalues_direct(&m),
                EigenRoute::Fft => circulant_eigenvalues_fft(&m)?,
                EigenRoute::Dense => dense_symmetric_eigenvalues(&m.dense())?,
            }
        }
        (MatrixKind::Toeplitz, EigenRoute::Auto | EigenRoute::Dense) => {
            dense_symmetric_eigenvalues(&build_toeplitz(a.n, coeffs)?.dense())?
        }
        (MatrixKind::Toeplitz, _) => {
            return Err(Error::InvalidArgument(
                "Toeplitz spectra have no closed form; use --method dense".into(),
            ))
        }
    };
    let e = energy(&spectrum, b);
    match ctx.sink.format() {
        Format::Json => ctx.sink.record(
            "energy",
            a,
            seed,
            EnergyBody {
                energy: e.energy,
                normalized: e.normalized,
                eigenvalues: a.spectrum.then(|| spectrum.eigenvalues.clone()),
            },
        ),
        Format::Csv if a.spectrum => {
            let rows: Vec<SpectrumRow> = spectrum
                .eigenvalues
                .iter()
                .enumerate()
                .map(|(i, &lambda)| SpectrumRow { r: i + 1, lambda })
                .collect();
            ctx.sink.table(&rows)
        }
        Format::Csv => ctx.sink.table(&[EnergyRow {
            n: a.n,
            b,
            energy: e.energy,
            normalized: e.normalized,
        }]),
    }
}

#[derive(Serialize)]
struct EstimateBody {
    method: &'static str,
    estimate: f64,
    stderr: f64,
    raw_mean: f64,
    limit: f64,
    bounds: Option<BoundReport>,
}

#[derive(Serialize)]
struct EstimateRow {
    method: &'static str,
    n: usize,
    b: usize,
    trials: usize,
    estimate: f64,
    stderr: f64,
    raw_mean: f64,
    limit: f64,
    theorem1_rhs: Option<f64>,
}

fn cmd_expected(ctx: &mut Ctx, a: &ExpectedArgs) -> Result<()> {
    let dist = parse_dist(&a.dist)?;
    let (rec, method, seed) = match a.method {
        ExpectedMethod::Exact => {
            let DistributionKind::Bernoulli { p } = dist.kind else {
                return Err(Error::InvalidArgument(
                    "--method exact needs a bernoulli:p distribution".into(),
                ));
            };
            (
                exact_expected_energy_bernoulli(a.n, a.b, p)?,
                "exact_enum",
                None,
            )
        }
        ExpectedMethod::Mc => (
            mc_expected_energy(a.n, a.b, &dist, &ctx.config(a.trials))?,
            "mc",
            Some(ctx.seed),
        ),
    };
    let bound = if dist.sigma() > 0.0 {
        Some(band_energy::bounds::theorem1_for(&dist, a.n, a.b)?)
    } else {
        None
    };
    let limit = limit_energy(dist.sigma());
    match ctx.sink.format() {
        Format::Json => ctx.sink.record(
            "expected-energy",
            a,
            seed,
            EstimateBody {
                method,
                estimate: rec.estimate,
                stderr: rec.stderr,
                raw_mean: rec.raw_mean,
                limit,
                bounds: bound,
            },
        ),
        Format::Csv => ctx.sink.table(&[EstimateRow {
            method,
            n: a.n,
            b: a.b,
            trials: rec.params.trials,
            estimate: rec.estimate,
            stderr: rec.stderr,
            raw_mean: rec.raw_mean,
            limit,
            theorem1_rhs: bound.map(|r| r.total),
        }]),
    }
}

#[derive(Serialize)]
struct TermRow<'a> {
    theorem: &'a str,
    term: &'a str,
    value: f64,
}

fn cmd_bounds(ctx: &mut Ctx, a: &BoundsArgs) -> Result<()> {
    let dist = a.dist.as_deref().map(parse_dist).transpose()?;
    let mean = a.a.or(dist.map(|d| d.mean));
    let sigma = a.sigma.or(dist.map(|d| d.sigma()));
    let mu3 = a.mu3.or(dist.map(|d| d.mu3));
    let report = match a.theorem {
        BoundSel::Rate => theorem1_rhs_with(
            require(mean, "a")?,
            require(sigma, "sigma")?,
            require(mu3, "mu3")?,
            require(a.n, "n")?,
            require(a.b, "b")?,
            a.c1,
        )?,
        BoundSel::Tail => {
            let r = match (a.r, dist) {
                (Some(r), _) => r,
                (None, Some(d)) => d.require_support_bound()?,
                (None, None) => return Err(Error::InvalidArgument("--R is required here".into())),
            };
            talagrand_report(require(a.delta, "delta")?, require(a.b, "b")?, r)?
        }
        BoundSel::Toeplitz => theorem3_report_from_moments(
            require(mean, "a")?,
            require(sigma, "sigma")?,
            require(a.n, "n")?,
            require(a.b, "b")?,
        )?,
        BoundSel::Mean => {
            mean_part_bound(require(mean, "a")?, require(a.n, "n")?, require(a.b, "b")?)?
        }
        BoundSel::Var => var_part_bound(
            require(sigma, "sigma")?,
            require(a.n, "n")?,
            require(a.b, "b")?,
        )?,
        BoundSel::Clt => clt_part_report(require(mu3, "mu3")?, require(sigma, "sigma")?, a.c1)?,
        BoundSel::Corner => {
            let path = require(a.coeffs.as_ref(), "coeffs")?;
            corner_report(&read_coefficients(path)?)
        }
    };
    match ctx.sink.format() {
        Format::Json => ctx.sink.record("bounds", a, None, &report),
        Format::Csv => {
            let name = serde_json::to_value(report.theorem)?;
            let theorem = name.as_str().unwrap_or_default();
            let mut rows: Vec<TermRow> = report
                .terms
                .iter()
                .chain(&report.aux)
                .map(|t| TermRow {
                    theorem,
                    term: &t.name,
                    value: t.value,
                })
                .collect();
            rows.push(TermRow {
                theorem,
                term: "total",
                value: report.total,
            });
            ctx.sink.table(&rows)
        }
    }
}

#[derive(Serialize)]
struct KernelRow {
    b: usize,
    lebesgue: f64,
    lebesgue_bound: f64,
    total_variation: f64,
    tv_bound: f64,
    within_bounds: bool,
}

#[derive(Serialize)]
struct GapRow {
    b: usize,
    m: u32,
    n: usize,
    sum: f64,
    integral: f64,
    gap: f64,
    bound: f64,
    within_bound: bool,
}

#[derive(Serialize)]
struct Rows<R> {
    rows: Vec<R>,
}

fn cmd_dirichlet(ctx: &mut Ctx, a: &DirichletArgs) -> Result<()> {
    let (lo, hi) = parse_pair(&a.b_range, "--b-range")?;
    if lo > hi {
        return Err(Error::InvalidArgument(format!(
            "--b-range {lo}:{hi} is empty"
        )));
    }
    if a.tol.is_nan() || a.tol <= 0.0 {
        return Err(Error::InvalidArgument("--tol must be > 0".into()));
    }
    match a.gap_n {
        None => {
            let rows: Vec<KernelRow> = (lo..=hi)
                .map(|b| {
                    let k = KernelAnalysis::compute(b, a.tol);
                    KernelRow {
                        b,
                        lebesgue: k.lebesgue,
                        lebesgue_bound: k.lebesgue_bound,
                        total_variation: k.total_variation,
                        tv_bound: k.tv_bound,
                        within_bounds: k.within_bounds(),
                    }
                })
                .collect();
            emit_rows(ctx, "dirichlet", a, rows)
        }
        Some(n) => {
            if n == 0 {
                return Err(Error::InvalidArgument("--gap-n must be >= 1".into()));
            }
            let mut rows = Vec::new();
            for b in lo..=hi {
                for &m in &a.m {
                    let g = riemann_sum_gap(b, m, n);
                    rows.push(GapRow {
                        b,
                        m,
                        n,
                        sum: g.sum,
                        integral: g.integral,
                        gap: g.gap,
                        bound: g.bound,
                        within_bound: g.within_bound(),
                    });
                }
            }
            emit_rows(ctx, "dirichlet", a, rows)
        }
    }
}

fn emit_rows<P: Serialize, R: Serialize>(
    ctx: &mut Ctx,
    command: &str,
    params: &P,
    rows: Vec<R>,
) -> Result<()> {
    match ctx.sink.format() {
        Format::Json => ctx.sink.record(command, params, None, Rows { rows }),
        Format::Csv => ctx.sink.table(&rows),
    }
}

#[derive(Serialize)]
struct TailRow {
    delta: f64,
    empirical: f64,
    theoretical: f64,
}

fn cmd_deviation(ctx: &mut Ctx, a: &DeviationArgs) -> Result<()> {
    let dist = parse_dist(&a.dist)?;
    let curve = deviation_experiment(a.n, a.b, &dist, &a.deltas, &ctx.config(a.trials))?;
    match ctx.sink.format() {
        Format::Json => ctx.sink.record("deviation", a, Some(ctx.seed), &curve),
        Format::Csv => {
            let rows: Vec<TailRow> = curve
                .deltas
                .iter()
                .zip(&curve.empirical)
                .zip(&curve.theoretical)
                .map(|((&delta, &empirical), &theoretical)| TailRow {
                    delta,
                    empirical,
                    theoretical,
                })
                .collect();
            ctx.sink.table(&rows)
        }
    }
}

#[derive(Serialize)]
struct PointParams<'a> {
    n: usize,
    b: usize,
    dist: &'a str,
    trials: usize,
}

#[derive(Serialize)]
struct PointBounds {
    theorem1_rhs: f64,
    limit: f64,
}

#[derive(Serialize)]
struct PointBody {
    estimate: f64,
    stderr: f64,
    deviation: f64,
    within_bound: bool,
    bounds: PointBounds,
}

fn cmd_convergence(ctx: &mut Ctx, a: &ConvergenceArgs) -> Result<()> {
    let schedule = a
        .schedule
        .split(',')
        .map(|s| parse_pair(s, "--schedule"))
        .collect::<Result<Vec<_>>>()?;
    let dist = parse_dist(&a.dist)?;
    let rows = convergence_study(&schedule, &dist, &ctx.config(a.trials))?;
    match ctx.sink.format() {
        Format::Json => {
            for r in &rows {
                let params = PointParams {
                    n: r.n,
                    b: r.b,
                    dist: &a.dist,
                    trials: a.trials,
                };
                let body = PointBody {
                    estimate: r.estimate,
                    stderr: r.stderr,
                    deviation: r.deviation,
                    within_bound: r.within_bound,
                    bounds: PointBounds {
                        theorem1_rhs: r.theorem1_rhs,
                        limit: r.limit,
                    },
                };
                ctx.sink
                    .record("convergence", &params, Some(ctx.seed), body)?;
            }
            Ok(())
        }
        Format::Csv => ctx.sink.table(&rows),
    }
}

#[derive(Serialize)]
struct CompareRow {
    ensemble: &'static str,
    normalizer: &'static str,
    constant: f64,
    upper: Option<f64>,
}

fn cmd_compare(ctx: &mut Ctx, a: &CompareArgs) -> Result<()> {
    let table = comparison_table(a.p, a.d, a.sigma, a.n)?;
    match ctx.sink.format() {
        Format::Json => ctx.sink.record("compare", a, None, Rows { rows: table }),
        Format::Csv => {
            let rows: Vec<CompareRow> = table
                .iter()
                .map(|r| CompareRow {
                    ensemble: r.ensemble.label(),
                    normalizer: r.normalizer,
                    constant: r.constant,
                    upper: r.upper,
                })
                .collect();
            ctx.sink.table(&rows)
        }
    }
}

#[derive(Serialize)]
struct GapCsvRow {
    n: usize,
    b: usize,
    trials: usize,
    mean_normalized_gap: f64,
    max_gap_ratio: f64,
    violations: usize,
    bound_exact: f64,
    bound_coarse: f64,
}

fn cmd_toeplitz_gap(ctx: &mut Ctx, a: &ToeplitzGapArgs) -> Result<()> {
    let dist = parse_dist(&a.dist)?;
    let rec = toeplitz_vs_circulant(a.n, a.b, &dist, &ctx.config(a.trials))?;
    match ctx.sink.format() {
        Format::Json => ctx.sink.record("toeplitz-gap", a, Some(ctx.seed), &rec),
        Format::Csv => ctx.sink.table(&[GapCsvRow {
            n: rec.n,
            b: rec.b,
            trials: rec.trials,
            mean_normalized_gap: rec.mean_normalized_gap,
            max_gap_ratio: rec.max_gap_ratio,
            violations: rec.violations,
            bound_exact: rec.bounds.exact,
            bound_coarse: rec.bounds.coarse,
        }]),
    }
}
