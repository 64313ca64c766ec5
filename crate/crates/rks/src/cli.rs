//! Command-line configuration and dispatch.
//!
//! Each subcommand produces one [`Table`]. Randomized commands take
//! `--seed`; when it is omitted a seed is drawn from entropy and recorded in
//! the `# command:` metadata line, which then reruns the exact same table.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use rks_core::bounds::{c0_and_error, noise_thresholds, random_thresholds, TheoryParams};
use rks_core::family::{epsilon_target, C_ALPHA};
use rks_core::reconstruct::{required_iterations, IterationRule};
use rks_core::sampling::{coverage_bound, deterministic_interior, empirical_coverage};
use rks_core::{ExteriorGrid, GeneratorKind, KernelSpace, ProbeGrid, QuadratureSpec};

use crate::experiments::{
    aggregate, campaign_space, noise_sweep, remark34_demo, run_campaign_with_threads, Aggregate,
    CampaignError, ExperimentSpec, SamplingMode, Settings, EXTERIOR_EXTENT, GAUSSIAN_PAD,
};
use crate::table::{Cell, Table, TIMESTAMP_KEY};

/// Failure while executing a parsed command.
#[derive(Debug, Error)]
pub enum RunError {
    /// Campaign failure.
    #[error(transparent)]
    Campaign(#[from] CampaignError),
    /// Library failure outside a campaign.
    #[error(transparent)]
    Core(#[from] rks_core::Error),
    /// Output could not be written.
    #[error("cannot write {path}: {source}")]
    Io {
        /// Target path.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
}

/// Parsed command line.
#[derive(Debug, Clone, Parser)]
#[command(name = "rks", version, about = "Sampling and reconstruction experiments for concentrated signals")]
pub struct RunConfig {
    /// Experiment to run.
    #[command(subcommand)]
    pub command: Command,
    /// Write the CSV here instead of standard output.
    #[arg(long, short = 'o', global = true)]
    pub out: Option<PathBuf>,
}

/// Subcommands, one per experiment family.
#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Gram matrix, kernel and Schur-norm diagnostics of one space.
    SpaceInfo(SpaceInfoArgs),
    /// Mean relative error of the deterministic-gap campaign.
    Table1(Table1Args),
    /// Success rate of the random-sampling campaign.
    Table2(Table2Args),
    /// Mean relative error against sample count under uniform noise.
    NoiseSweep(NoiseSweepArgs),
    /// Empirical gap-exceedance frequency against its probability bound.
    Coverage(CoverageArgs),
    /// Closed-form constants and thresholds.
    Bounds(BoundsArgs),
    /// Two hat-space signals that agree on the domain and differ outside it.
    Remark34(Remark34Args),
    /// One reconstruction with the error after every iteration.
    ReconstructOne(ReconstructOneArgs),
}

/// Seed and numerical settings shared by the campaigns.
#[derive(Debug, Clone, Args)]
pub struct CampaignArgs {
    /// Master seed; drawn from entropy when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Simpson panel width for norms.
    #[arg(long, default_value_t = 0.01, value_parser = positive_real)]
    pub step: f64,
    /// Integration window beyond the outermost basis center.
    #[arg(long = "window-pad", default_value_t = 10.0, value_parser = positive_real)]
    pub window_pad: f64,
    /// Basis indices run over [-(L + pad), L + pad].
    #[arg(long, default_value_t = GAUSSIAN_PAD, value_parser = clap::value_parser!(i64).range(0..))]
    pub pad: i64,
    /// Exterior grid covers L < |x| <= L + extent.
    #[arg(long = "exterior-extent", default_value_t = EXTERIOR_EXTENT, value_parser = positive_real)]
    pub exterior_extent: f64,
}

impl CampaignArgs {
    fn settings(&self) -> Settings {
        Settings {
            basis_pad: self.pad,
            exterior_extent: self.exterior_extent,
            quadrature: QuadratureSpec {
                step: self.step,
                window_pad: self.window_pad,
            },
        }
    }
}

/// Generator kind on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    /// Jittered or plain Gaussian.
    Gaussian,
    /// Hat function.
    Hat,
}

/// `space-info` options.
#[derive(Debug, Clone, Args)]
pub struct SpaceInfoArgs {
    /// Generator.
    #[arg(long, value_enum, default_value_t = KindArg::Gaussian)]
    pub kind: KindArg,
    /// Lowest basis index.
    #[arg(long, default_value_t = -20, allow_hyphen_values = true)]
    pub lo: i64,
    /// Highest basis index.
    #[arg(long, default_value_t = 20, allow_hyphen_values = true)]
    pub hi: i64,
    /// Draw Gaussian jitter from the seed.
    #[arg(long)]
    pub jitter: bool,
    /// Also estimate the Schur norms (slow).
    #[arg(long)]
    pub schur: bool,
    /// Jitter seed; drawn from entropy when jitter is requested without one.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// `table1` options.
#[derive(Debug, Clone, Args)]
pub struct Table1Args {
    /// Half-widths L.
    #[arg(long = "L", value_delimiter = ',', default_value = "50,70,90,110", value_parser = half_width)]
    pub l: Vec<u32>,
    /// Decay exponents.
    #[arg(long, value_delimiter = ',', default_value = "0,0.2,0.4,0.6,0.8", value_parser = tabulated_alpha)]
    pub alpha: Vec<f64>,
    /// Iterations reported.
    #[arg(long, value_delimiter = ',', default_value = "0,3")]
    pub iters: Vec<usize>,
    /// Trials per cell.
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: u32,
    #[command(flatten)]
    pub campaign: CampaignArgs,
}

/// `table2` options.
#[derive(Debug, Clone, Args)]
pub struct Table2Args {
    /// Half-widths L.
    #[arg(long = "L", value_delimiter = ',', default_value = "50,70,90,110", value_parser = half_width)]
    pub l: Vec<u32>,
    /// Decay exponents.
    #[arg(long, value_delimiter = ',', default_value = "0,0.2,0.4,0.6,0.8", value_parser = tabulated_alpha)]
    pub alpha: Vec<f64>,
    /// Sample-count multipliers: N = rule * L.
    #[arg(long = "n-rule", value_delimiter = ',', default_value = "8,12", value_parser = clap::value_parser!(u32).range(1..))]
    pub n_rule: Vec<u32>,
    /// Iteration judged against the concentration level.
    #[arg(long, default_value_t = 6)]
    pub iters: usize,
    /// Trials per cell.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: u32,
    #[command(flatten)]
    pub campaign: CampaignArgs,
}

/// `noise-sweep` options.
#[derive(Debug, Clone, Args)]
pub struct NoiseSweepArgs {
    /// Half-width L.
    #[arg(long = "L", default_value = "50", value_parser = half_width)]
    pub l: u32,
    /// Decay exponent.
    #[arg(long, default_value = "0", value_parser = tabulated_alpha)]
    pub alpha: f64,
    /// Increasing sample counts.
    #[arg(long = "n-grid", value_delimiter = ',', default_value = "500,1000,2000,3000,4000,5000")]
    pub n_grid: Vec<usize>,
    /// Noise amplitude; defaults to L^min(1/2 - alpha, 0) / 2.
    #[arg(long, value_parser = nonnegative_real)]
    pub amp: Option<f64>,
    /// Iteration reported.
    #[arg(long, default_value_t = 6)]
    pub iters: usize,
    /// Trials per sample count.
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: u32,
    #[command(flatten)]
    pub campaign: CampaignArgs,
}

/// `coverage` options.
#[derive(Debug, Clone, Args)]
pub struct CoverageArgs {
    /// Half-widths L.
    #[arg(long = "L", value_delimiter = ',', default_value = "10,50", value_parser = half_width)]
    pub l: Vec<u32>,
    /// Sample counts.
    #[arg(long = "N", value_delimiter = ',', default_value = "100,400,1600", value_parser = clap::value_parser!(u64).range(2..))]
    pub n: Vec<u64>,
    /// Gap thresholds delta1 in (0, 1].
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1", value_parser = unit_interval)]
    pub delta: Vec<f64>,
    /// Trials per cell.
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: u32,
    /// Master seed; drawn from entropy when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// `bounds` options.
#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    /// Half-width L.
    #[arg(long = "L", default_value = "50", value_parser = positive_real)]
    pub l: f64,
    /// Kernel constant; estimated for the plain Gaussian space when omitted.
    #[arg(long, value_parser = positive_real)]
    pub k: Option<f64>,
    /// Concentration level.
    #[arg(long, default_value_t = 0.1, value_parser = unit_open)]
    pub eps: f64,
    /// Failure probability.
    #[arg(long, default_value_t = 0.1, value_parser = unit_open)]
    pub tau: f64,
    /// Hausdorff distance of the interior set.
    #[arg(long, default_value_t = 0.375, value_parser = positive_real)]
    pub dh: f64,
    /// Sample count for the random-sampling probability.
    #[arg(long = "N", default_value_t = 0)]
    pub n: u64,
    /// Noise variance.
    #[arg(long, default_value_t = 1.0, value_parser = positive_real)]
    pub sigma2: f64,
    /// Signal norm.
    #[arg(long = "f-norm", default_value_t = 1.0, value_parser = positive_real)]
    pub f_norm: f64,
}

/// `remark34` options.
#[derive(Debug, Clone, Args)]
pub struct Remark34Args {
    /// Domain half-width R (at least 2).
    #[arg(long = "R", default_value_t = 5, value_parser = clap::value_parser!(u32).range(2..))]
    pub r: u32,
    /// Outer bump heights in (0, 1).
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.5", value_parser = unit_open)]
    pub delta: Vec<f64>,
    /// Iterations.
    #[arg(long, default_value_t = 3)]
    pub iters: usize,
    /// Seed of the interior sampling set; drawn from entropy when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Interior sampling scheme for `reconstruct-one`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplingArg {
    /// Gaps uniform on [1/4, 3/4].
    Deterministic,
    /// i.i.d. uniform positions.
    Random,
}

/// `reconstruct-one` options.
#[derive(Debug, Clone, Args)]
pub struct ReconstructOneArgs {
    /// Half-width L.
    #[arg(long = "L", default_value = "50", value_parser = half_width)]
    pub l: u32,
    /// Decay exponent.
    #[arg(long, default_value = "0", value_parser = tabulated_alpha)]
    pub alpha: f64,
    /// Interior sampling scheme.
    #[arg(long, value_enum, default_value_t = SamplingArg::Deterministic)]
    pub sampling: SamplingArg,
    /// Sample count for random sampling; defaults to 12 L.
    #[arg(long = "N", value_parser = clap::value_parser!(u64).range(2..))]
    pub n: Option<u64>,
    /// Uniform noise amplitude on the samples.
    #[arg(long, value_parser = nonnegative_real)]
    pub amp: Option<f64>,
    /// Iterations.
    #[arg(long, default_value_t = 6)]
    pub iters: usize,
    #[command(flatten)]
    pub campaign: CampaignArgs,
}

fn parse_real(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| format!("`{s}` is not a number: {e}"))
}

fn positive_real(s: &str) -> Result<f64, String> {
    let v = parse_real(s)?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` must be positive"))
    }
}

fn nonnegative_real(s: &str) -> Result<f64, String> {
    let v = parse_real(s)?;
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` must be nonnegative"))
    }
}

fn unit_open(s: &str) -> Result<f64, String> {
    let v = parse_real(s)?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("`{s}` must lie in (0, 1)"))
    }
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v = parse_real(s)?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("`{s}` must lie in (0, 1]"))
    }
}

fn half_width(s: &str) -> Result<u32, String> {
    match s.trim().parse::<u32>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("`{s}` must be a positive integer")),
    }
}

fn tabulated_alpha(s: &str) -> Result<f64, String> {
    let v = parse_real(s)?;
    if C_ALPHA.iter().any(|(a, _)| (a - v).abs() < 1e-9) {
        Ok(v)
    } else {
        Err(format!("alpha `{s}` is not one of 0, 0.2, 0.4, 0.6, 0.8"))
    }
}

/// Parses `argv` (program name first).
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    RunConfig::try_parse_from(argv)
}

impl RunConfig {
    /// Whether the command draws random numbers.
    pub fn is_randomized(&self) -> bool {
        match &self.command {
            Command::SpaceInfo(a) => a.kind == KindArg::Gaussian && a.jitter,
            Command::Bounds(_) => false,
            _ => true,
        }
    }

    /// The `--seed` given on the command line.
    pub fn explicit_seed(&self) -> Option<u64> {
        match &self.command {
            Command::SpaceInfo(a) => a.seed,
            Command::Bounds(_) => None,
            Command::Table1(a) => a.campaign.seed,
            Command::Table2(a) => a.campaign.seed,
            Command::NoiseSweep(a) => a.campaign.seed,
            Command::ReconstructOne(a) => a.campaign.seed,
            Command::Coverage(a) => a.seed,
            Command::Remark34(a) => a.seed,
        }
    }
}

/// Runs `config` on `threads` workers (`0` means automatic). `argv` (without
/// the program name) is recorded as the reproducing command; `--seed` is
/// appended when the seed was drawn here.
pub fn execute(config: &RunConfig, argv: &[String], threads: usize) -> Result<Table, RunError> {
    let drawn = (config.is_randomized() && config.explicit_seed().is_none()).then(rand::random::<u64>);
    let seed = config.is_randomized().then(|| config.explicit_seed().or(drawn)).flatten();
    let mut table = match &config.command {
        Command::SpaceInfo(a) => space_info(a, seed)?,
        Command::Table1(a) => table1(a, seed.expect("randomized"), threads)?,
        Command::Table2(a) => table2(a, seed.expect("randomized"), threads)?,
        Command::NoiseSweep(a) => sweep(a, seed.expect("randomized"), threads)?,
        Command::Coverage(a) => coverage(a, seed.expect("randomized"))?,
        Command::Bounds(a) => bounds(a)?,
        Command::Remark34(a) => remark34(a, seed.expect("randomized"))?,
        Command::ReconstructOne(a) => reconstruct_one(a, seed.expect("randomized"))?,
    };
    let mut command = argv.join(" ");
    if let Some(s) = drawn {
        command.push_str(&format!(" --seed {s}"));
    }
    let mut meta = vec![
        ("version".to_owned(), env!("CARGO_PKG_VERSION").to_owned()),
        ("command".to_owned(), format!("rks {command}")),
    ];
    if let Some(s) = seed {
        meta.push(("seed".to_owned(), s.to_string()));
    }
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    meta.push((TIMESTAMP_KEY.to_owned(), stamp.to_string()));
    meta.append(&mut table.metadata);
    table.metadata = meta;
    Ok(table)
}

fn space_info(a: &SpaceInfoArgs, seed: Option<u64>) -> Result<Table, RunError> {
    let kind = match a.kind {
        KindArg::Gaussian => GeneratorKind::Gaussian,
        KindArg::Hat => GeneratorKind::Hat,
    };
    if a.jitter && kind == GeneratorKind::Hat {
        return Err(rks_core::Error::Contract("jitter is only defined for the Gaussian generator").into());
    }
    let space = KernelSpace::make(kind, a.lo, a.hi, seed, QuadratureSpec::default())?;
    let mid = (a.lo + a.hi).div_euclid(2);
    let k = space.generator().local(mid).expect("midpoint index");
    let mut t = Table::new(&["quantity", "value"]);
    let mut row = |name: &str, v: Cell| t.push(vec![name.into(), v]);
    row("dim", space.dim().into());
    row("gram_center_diag", space.gram()[(k, k)].into());
    if k + 1 < space.dim() {
        row("gram_center_offdiag", space.gram()[(k, k + 1)].into());
    }
    row("gram_inverse_center_diag", space.gram_inverse()[(k, k)].into());
    row("decay_ratio", space.decay_ratio().into());
    row("identity_residual", space.identity_residual().into());
    let c = space.generator().center(k);
    row("kernel_center", space.kernel(c, c).into());
    if a.schur {
        let est = space.estimate_schur(1.0, &ProbeGrid::centered(&space, 21, 0.01))?;
        row("schur_norm", est.schur_norm.into());
        row("modulus_schur_at_1", est.modulus_schur.into());
        row("schur_theta_norm", est.combined.into());
    }
    Ok(t)
}

fn campaign_meta(t: &mut Table, trials: u32, c: &CampaignArgs) {
    t.meta("trials", trials);
    t.meta("quadrature_step", c.step);
    t.meta("window_pad", c.window_pad);
    t.meta("basis_pad", c.pad);
    t.meta("exterior_extent", c.exterior_extent);
}

/// Cells in ascending `L`, then `alpha`.
fn cells(ls: &[u32], alphas: &[f64]) -> Vec<(u32, f64)> {
    let mut ls = ls.to_vec();
    ls.sort_unstable();
    ls.dedup();
    let mut alphas = alphas.to_vec();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    ls.iter()
        .flat_map(|&l| alphas.iter().map(move |&a| (l, a)))
        .collect()
}

fn table1(a: &Table1Args, seed: u64, threads: usize) -> Result<Table, RunError> {
    let mut t = Table::new(&["L", "alpha", "n", "mean_rae", "trials"]);
    campaign_meta(&mut t, a.trials, &a.campaign);
    let mut iters = a.iters.clone();
    iters.sort_unstable();
    iters.dedup();
    let n_max = iters.last().copied().unwrap_or(0);
    for (l, alpha) in cells(&a.l, &a.alpha) {
        let mut spec = ExperimentSpec::new(l, alpha, n_max, a.trials as usize, SamplingMode::Deterministic, seed);
        spec.settings = a.campaign.settings();
        let results = run_campaign_with_threads(&spec, threads)?;
        for &n in &iters {
            let mean = aggregate(&results, Aggregate::MeanRae(n))?;
            t.push(vec![l.into(), alpha.into(), n.into(), mean.into(), a.trials.into()]);
        }
    }
    Ok(t)
}

fn table2(a: &Table2Args, seed: u64, threads: usize) -> Result<Table, RunError> {
    let mut t = Table::new(&["L", "alpha", "N_rule", "success_rate_pct", "trials"]);
    campaign_meta(&mut t, a.trials, &a.campaign);
    t.meta("success_iteration", a.iters);
    let mut rules = a.n_rule.clone();
    rules.sort_unstable();
    rules.dedup();
    for (l, alpha) in cells(&a.l, &a.alpha) {
        for &rule in &rules {
            let n = (rule * l) as usize;
            let mut spec = ExperimentSpec::new(l, alpha, a.iters, a.trials as usize, SamplingMode::Random(n), seed);
            spec.settings = a.campaign.settings();
            spec.success_iter = Some(a.iters);
            let results = run_campaign_with_threads(&spec, threads)?;
            let rate = aggregate(&results, Aggregate::SuccessRate)?;
            t.push(vec![
                l.into(),
                alpha.into(),
                format!("{rule}L").into(),
                rate.into(),
                a.trials.into(),
            ]);
        }
    }
    Ok(t)
}

fn sweep(a: &NoiseSweepArgs, seed: u64, threads: usize) -> Result<Table, RunError> {
    let mut t = Table::new(&["L", "alpha", "N", "mean_rae", "trials"]);
    campaign_meta(&mut t, a.trials, &a.campaign);
    let amp = a
        .amp
        .unwrap_or_else(|| rks_core::family::noise_amplitude(f64::from(a.l), a.alpha));
    t.meta("noise_amplitude", crate::table::format_g(amp));
    t.meta("iteration", a.iters);
    let points = noise_sweep(
        a.l,
        a.alpha,
        &a.n_grid,
        a.trials as usize,
        seed,
        Some(amp),
        a.iters,
        a.campaign.settings(),
        threads,
    )?;
    for p in points {
        t.push(vec![a.l.into(), a.alpha.into(), p.n.into(), p.mean_rae.into(), a.trials.into()]);
    }
    Ok(t)
}

fn coverage(a: &CoverageArgs, seed: u64) -> Result<Table, RunError> {
    let mut t = Table::new(&["L", "N", "delta1", "empirical", "bound_raw", "bound_clamped", "trials"]);
    t.meta("trials", a.trials);
    let mut ns = a.n.clone();
    ns.sort_unstable();
    ns.dedup();
    let mut deltas = a.delta.clone();
    deltas.sort_by(f64::total_cmp);
    deltas.dedup();
    let mut cell = 0u64;
    for (l, _) in cells(&a.l, &[0.0]) {
        let lf = f64::from(l);
        let params = TheoryParams::interval(lf);
        for &n in &ns {
            for &d in &deltas {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(cell);
                cell += 1;
                let freq = empirical_coverage(lf, n as usize, d, a.trials as usize, &mut rng)?;
                let b = coverage_bound(&params, d, n)?;
                t.push(vec![
                    l.into(),
                    (n as usize).into(),
                    d.into(),
                    freq.into(),
                    b.raw.into(),
                    b.clamped.into(),
                    a.trials.into(),
                ]);
            }
        }
    }
    Ok(t)
}

/// `1.1 x` the Schur estimate of the plain Gaussian space.
pub fn estimated_kernel_constant() -> Result<f64, rks_core::Error> {
    let space = KernelSpace::make(GeneratorKind::Gaussian, -20, 20, None, QuadratureSpec::default())?;
    Ok(1.1 * space.estimate_schur(1.0, &ProbeGrid::centered(&space, 21, 0.01))?.combined)
}

fn bounds(a: &BoundsArgs) -> Result<Table, RunError> {
    let mut t = Table::new(&["quantity", "value"]);
    let k = match a.k {
        Some(k) => {
            t.meta("k_source", "given");
            k
        }
        None => {
            t.meta("k_source", "estimated (1.1 x probed Schur norm, plain Gaussian)");
            estimated_kernel_constant()?
        }
    };
    let params = TheoryParams {
        k_norm: k,
        eps: a.eps,
        tau: a.tau,
        n: a.n,
        sigma2: a.sigma2,
        f_norm: a.f_norm,
        ..TheoryParams::interval(a.l)
    };
    let mut row = |name: &str, v: f64| t.push(vec![name.into(), v.into()]);
    row("k", k);
    row("contraction", params.contraction(a.dh));
    match c0_and_error(&params, a.dh) {
        Ok(f) => {
            row("c0", f.c0);
            row("error_factor", f.det_error_factor);
            row("concentration_factor", f.concentration_factor);
            row("sample_difference_factor", f.sample_difference_factor);
        }
        Err(_) => row("c0", f64::INFINITY),
    }
    match required_iterations(a.eps, k, 1.0, a.dh, IterationRule::General) {
        Ok(n) => row("required_iterations", f64::from(n)),
        Err(_) => row("required_iterations", f64::INFINITY),
    }
    let r = random_thresholds(&params);
    row("tau_of_n_raw", r.tau_of_n.raw);
    row("tau_of_n_clamped", r.tau_of_n.clamped);
    row("n0", r.n0);
    row("n1", r.n1);
    let nt = noise_thresholds(&params)?;
    row("delta1_tilde", nt.delta1_tilde);
    row("n_min", nt.n_min);
    Ok(t)
}

fn remark34(a: &Remark34Args, seed: u64) -> Result<Table, RunError> {
    let mut t = Table::new(&[
        "R",
        "delta",
        "max_pair_error",
        "eps_measured",
        "signal_norm",
        "lower_bound",
        "identical",
    ]);
    let top = i64::from(a.r) + 7;
    let space = KernelSpace::make(GeneratorKind::Hat, -top, top, None, QuadratureSpec::default())?;
    let rf = f64::from(a.r);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampling = deterministic_interior(rf, &mut rng)?.with_exterior(ExteriorGrid::new(rf, 0.05, 10.0)?);
    let mut deltas = a.delta.clone();
    deltas.sort_by(f64::total_cmp);
    deltas.dedup();
    for d in deltas {
        let o = remark34_demo(&space, a.r, d, &sampling, a.iters)?;
        t.push(vec![
            a.r.into(),
            d.into(),
            o.max_pair_error.into(),
            o.eps_measured.into(),
            o.signal_norm.into(),
            (d * (2.0f64 / 3.0).sqrt()).into(),
            if o.reconstruction_gap == 0.0 { "yes" } else { "no" }.into(),
        ]);
    }
    Ok(t)
}

fn reconstruct_one(a: &ReconstructOneArgs, seed: u64) -> Result<Table, RunError> {
    let sampling_mode = match (a.sampling, a.amp) {
        (SamplingArg::Deterministic, _) => SamplingMode::Deterministic,
        (SamplingArg::Random, amp) => {
            let n = a.n.unwrap_or(12 * u64::from(a.l)) as usize;
            match amp {
                Some(amp) => SamplingMode::RandomNoisy { n, amp },
                None => SamplingMode::Random(n),
            }
        }
    };
    let mut spec = ExperimentSpec::new(a.l, a.alpha, a.iters, 1, sampling_mode, seed);
    spec.settings = a.campaign.settings();
    let space = campaign_space(&spec)?;
    let result = crate::experiments::run_trial(&spec, &space, 0)?;
    let mut t = Table::new(&["n", "rae"]);
    t.meta("samples", result.sample_count);
    t.meta("hausdorff", crate::table::format_g(result.hausdorff));
    t.meta("concentration", crate::table::format_g(result.concentration_measured));
    t.meta("eps_target", crate::table::format_g(epsilon_target(f64::from(a.l), a.alpha)?));
    for (n, e) in result.rae_by_iter.iter().enumerate() {
        t.push(vec![n.into(), (*e).into()]);
    }
    Ok(t)
}
