//! Monte Carlo campaigns over the concentrated-signal family.
//!
//! A campaign fixes one Gaussian space (jitter drawn from the master seed)
//! and runs independent trials. Trial `t` draws its signal, sampling set and
//! noise from a ChaCha8 generator seeded by [`trial_seed`], so results do not
//! depend on scheduling.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use rks_core::family::{epsilon_target, exterior_gap, make_concentrated_signal};
use rks_core::reconstruct::{iterate_with, rae, sample_signal, FrameOperator};
use rks_core::sampling::{deterministic_interior, random_interior};
use rks_core::{ExteriorGrid, GeneratorKind, KernelSpace, Mode, QuadratureSpec};

/// Default basis truncation beyond `[-L, L]`.
pub const GAUSSIAN_PAD: i64 = 20;
/// Default exterior grid extent beyond `L`.
pub const EXTERIOR_EXTENT: f64 = 10.0;

/// Errors raised while running a campaign.
#[derive(Debug, Error)]
pub enum CampaignError {
    /// Invalid specification.
    #[error("invalid experiment: {0}")]
    Spec(&'static str),
    /// A trial failed.
    #[error("trial {trial}: {source}")]
    Trial {
        /// Index of the failing trial.
        trial: usize,
        /// Underlying error.
        source: rks_core::Error,
    },
    /// Space construction failed.
    #[error("space construction: {0}")]
    Space(rks_core::Error),
    /// Thread pool construction failed.
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// How interior samples are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SamplingMode {
    /// Consecutive gaps uniform on `[1/4, 3/4]`.
    Deterministic,
    /// `n` i.i.d. uniform points on `[-L, L]`.
    Random(usize),
    /// As [`SamplingMode::Random`], with i.i.d. uniform noise on `[-amp, amp]`.
    RandomNoisy {
        /// Number of samples.
        n: usize,
        /// Noise amplitude.
        amp: f64,
    },
}

/// Numerical settings shared by every trial of a campaign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    /// Basis indices run over `[-(L + pad), L + pad]`.
    pub basis_pad: i64,
    /// Exterior grid covers `L < |x| <= L + extent`.
    pub exterior_extent: f64,
    /// Quadrature used for norms.
    pub quadrature: QuadratureSpec,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            basis_pad: GAUSSIAN_PAD,
            exterior_extent: EXTERIOR_EXTENT,
            quadrature: QuadratureSpec::default(),
        }
    }
}

/// One campaign cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentSpec {
    /// Half-width `L` (a positive integer).
    pub l: u32,
    /// Decay exponent.
    pub alpha: f64,
    /// Iterations after preconstruction.
    pub n_iters: usize,
    /// Number of trials.
    pub trials: usize,
    /// Sampling scheme.
    pub sampling: SamplingMode,
    /// Seed of the whole campaign.
    pub master_seed: u64,
    /// Iteration judged against the concentration level; defaults to 3 for
    /// deterministic sampling and 6 otherwise, capped at `n_iters`.
    pub success_iter: Option<usize>,
    /// Numerical settings.
    pub settings: Settings,
}

impl ExperimentSpec {
    /// Cell with default settings.
    pub fn new(l: u32, alpha: f64, n_iters: usize, trials: usize, sampling: SamplingMode, master_seed: u64) -> Self {
        Self {
            l,
            alpha,
            n_iters,
            trials,
            sampling,
            master_seed,
            success_iter: None,
            settings: Settings::default(),
        }
    }

    fn validate(&self) -> Result<(), CampaignError> {
        if self.trials == 0 {
            return Err(CampaignError::Spec("trials must be at least 1"));
        }
        if self.l == 0 {
            return Err(CampaignError::Spec("L must be at least 1"));
        }
        if !(self.alpha >= 0.0) {
            return Err(CampaignError::Spec("alpha must be nonnegative"));
        }
        if self.settings.basis_pad < 0 || !(self.settings.exterior_extent > 0.0) {
            return Err(CampaignError::Spec("pads must be positive"));
        }
        match self.sampling {
            SamplingMode::Random(n) | SamplingMode::RandomNoisy { n, .. } if n < 2 => {
                Err(CampaignError::Spec("random sampling needs at least two points"))
            }
            SamplingMode::RandomNoisy { amp, .. } if !(amp >= 0.0) => {
                Err(CampaignError::Spec("noise amplitude must be nonnegative"))
            }
            _ => Ok(()),
        }
    }

    /// Iteration used for the success flag.
    pub fn success_index(&self) -> usize {
        let default = match self.sampling {
            SamplingMode::Deterministic => 3,
            _ => 6,
        };
        self.success_iter.unwrap_or(default).min(self.n_iters)
    }
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    /// Position in the campaign.
    pub trial_index: usize,
    /// Seed of the trial generator.
    pub seed: u64,
    /// `E(0) .. E(n)`.
    pub rae_by_iter: Vec<f64>,
    /// Measured concentration ratio of the drawn signal.
    pub concentration_measured: f64,
    /// Tabulated concentration level.
    pub eps_target: f64,
    /// `E(success_index) <= eps_target`.
    pub success: bool,
    /// Number of interior samples.
    pub sample_count: usize,
    /// Hausdorff distance of the interior set.
    pub hausdorff: f64,
}

/// Seed of trial `trial_index`: first word of stream `trial_index + 1` of the
/// master ChaCha8 generator. Stream 0 feeds the basis jitter.
pub fn trial_seed(master_seed: u64, trial_index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index as u64 + 1);
    rng.next_u64()
}

/// The jittered Gaussian space of a campaign.
pub fn campaign_space(spec: &ExperimentSpec) -> Result<KernelSpace, CampaignError> {
    let top = i64::from(spec.l) + spec.settings.basis_pad;
    KernelSpace::make(
        GeneratorKind::Gaussian,
        -top,
        top,
        Some(spec.master_seed),
        spec.settings.quadrature,
    )
    .map_err(CampaignError::Space)
}

/// Runs one trial in `space`.
pub fn run_trial(
    spec: &ExperimentSpec,
    space: &KernelSpace,
    trial_index: usize,
) -> Result<TrialResult, CampaignError> {
    let wrap = |source| CampaignError::Trial {
        trial: trial_index,
        source,
    };
    let l = f64::from(spec.l);
    let seed = trial_seed(spec.master_seed, trial_index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let f = make_concentrated_signal(space, l, spec.alpha, &mut rng).map_err(wrap)?;
    let interior = match spec.sampling {
        SamplingMode::Deterministic => deterministic_interior(l, &mut rng),
        SamplingMode::Random(n) | SamplingMode::RandomNoisy { n, .. } => random_interior(l, n, &mut rng),
    }
    .map_err(wrap)?;
    let eps_target = epsilon_target(l, spec.alpha).map_err(wrap)?;
    let gap = exterior_gap(l, spec.alpha).map_err(wrap)?;
    let grid = ExteriorGrid::new(l, gap, spec.settings.exterior_extent).map_err(wrap)?;
    let sampling = interior.with_exterior(grid);

    let noise: Option<Vec<f64>> = match spec.sampling {
        SamplingMode::RandomNoisy { amp, .. } if amp > 0.0 => {
            Some((0..sampling.len()).map(|_| rng.gen_range(-amp..=amp)).collect())
        }
        _ => None,
    };
    let samples = sample_signal(space, &sampling, &f, noise.as_deref()).map_err(wrap)?;
    let mode = if noise.is_some() {
        Mode::InteriorNoisy
    } else {
        Mode::InteriorOnly
    };
    let op = FrameOperator::new(space, &sampling);
    let run = iterate_with(space, &op, &samples, spec.n_iters, mode).map_err(wrap)?;
    let rae_by_iter = run
        .iterates
        .iter()
        .map(|g| rae(space, g, &f))
        .collect::<Result<Vec<_>, _>>()
        .map_err(wrap)?;
    let concentration_measured = space.concentration_ratio(&f, l).map_err(wrap)?;
    let success = rae_by_iter[spec.success_index()] <= eps_target;
    Ok(TrialResult {
        trial_index,
        seed,
        rae_by_iter,
        concentration_measured,
        eps_target,
        success,
        sample_count: sampling.len(),
        hausdorff: sampling.hausdorff,
    })
}

/// Worker count from `RKS_THREADS` (unset or `0` means automatic).
pub fn threads_from_env() -> usize {
    std::env::var("RKS_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

/// Runs every trial with the worker count from `RKS_THREADS`.
pub fn run_campaign(spec: &ExperimentSpec) -> Result<Vec<TrialResult>, CampaignError> {
    run_campaign_with_threads(spec, threads_from_env())
}

/// Runs every trial on `threads` workers (`0` means automatic). Results are
/// ordered by trial index.
pub fn run_campaign_with_threads(
    spec: &ExperimentSpec,
    threads: usize,
) -> Result<Vec<TrialResult>, CampaignError> {
    spec.validate()?;
    let space = campaign_space(spec)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    pool.install(|| {
        (0..spec.trials)
            .into_par_iter()
            .map(|t| run_trial(spec, &space, t))
            .collect()
    })
}

/// Summary statistic of a campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregate {
    /// Mean of `E(n)`.
    MeanRae(usize),
    /// Percentage of successful trials.
    SuccessRate,
}

/// Reduces trial results to one number.
pub fn aggregate(results: &[TrialResult], kind: Aggregate) -> Result<f64, CampaignError> {
    if results.is_empty() {
        return Err(CampaignError::Spec("no trial results to aggregate"));
    }
    let count = results.len() as f64;
    match kind {
        Aggregate::MeanRae(n) => {
            let mut sum = 0.0;
            for r in results {
                sum += *r
                    .rae_by_iter
                    .get(n)
                    .ok_or(CampaignError::Spec("iteration beyond the recorded range"))?;
            }
            Ok(sum / count)
        }
        Aggregate::SuccessRate => {
            Ok(100.0 * results.iter().filter(|r| r.success).count() as f64 / count)
        }
    }
}

/// Outcome of the boundary-ambiguity demonstration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Remark34Outcome {
    /// `max(||g - f_+||_2, ||g - f_-||_2)`.
    pub max_pair_error: f64,
    /// Measured concentration ratio of `f_+`.
    pub eps_measured: f64,
    /// `||f_+||_2`.
    pub signal_norm: f64,
    /// `max |g_+ - g_-|` over coefficients; zero when both runs agree.
    pub reconstruction_gap: f64,
}

/// Reconstructs `f_+- = h + delta h(. - R - 1)` in the hat space from
/// samples inside `[-R, R]` and measures how far the common reconstruction
/// is from each signal.
pub fn remark34_demo(
    space: &KernelSpace,
    r: u32,
    delta: f64,
    sampling: &rks_core::SamplingSet,
    n_iters: usize,
) -> Result<Remark34Outcome, rks_core::Error> {
    use rks_core::Error;
    if space.generator().kind() != GeneratorKind::Hat {
        return Err(Error::Contract("the demonstration runs in the hat space"));
    }
    if r < 2 || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Contract("need R >= 2 and delta in (0, 1)"));
    }
    let rf = f64::from(r);
    if (sampling.half_width - rf).abs() > 1e-12 {
        return Err(Error::Contract("sampling set must cover [-R, R]"));
    }
    let far = i64::from(r) + 1;
    if space.generator().index_hi() < far + 1 || space.generator().index_lo() > -(far + 1) {
        return Err(Error::Contract("space must contain indices up to R + 2"));
    }
    let bump = space.unit(far)?;
    let centre = space.unit(0)?;
    let f_plus = centre.axpy(delta, &bump);
    let f_minus = centre.axpy(-delta, &bump);

    let op = FrameOperator::new(space, sampling);
    let run = |f: &rks_core::Signal| -> Result<rks_core::Signal, Error> {
        let samples = sample_signal(space, sampling, f, None)?;
        Ok(iterate_with(space, &op, &samples, n_iters, Mode::InteriorOnly)?
            .last()
            .clone())
    };
    let g_plus = run(&f_plus)?;
    let g_minus = run(&f_minus)?;
    let reconstruction_gap = g_plus
        .coeffs
        .iter()
        .zip(&g_minus.coeffs)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    let norm = |s: &rks_core::Signal| space.l2_norm(s, rks_core::Region::WholeLine);
    Ok(Remark34Outcome {
        max_pair_error: norm(&(&g_plus - &f_plus)).max(norm(&(&g_minus - &f_minus))),
        eps_measured: space.concentration_ratio(&f_plus, rf)?,
        signal_norm: norm(&f_plus),
        reconstruction_gap,
    })
}

/// One point of a noise sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    /// Sample count.
    pub n: usize,
    /// Mean `E(n_iters)` over the trials.
    pub mean_rae: f64,
}

/// Mean RAE after `n_iters` iterations for each sample count in `n_grid`,
/// with uniform noise of amplitude `amp` (the family default when `None`).
#[allow(clippy::too_many_arguments)]
pub fn noise_sweep(
    l: u32,
    alpha: f64,
    n_grid: &[usize],
    trials: usize,
    master_seed: u64,
    amp: Option<f64>,
    n_iters: usize,
    settings: Settings,
    threads: usize,
) -> Result<Vec<SweepPoint>, CampaignError> {
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CampaignError::Spec("sample counts must be increasing"));
    }
    let amp = amp.unwrap_or_else(|| rks_core::family::noise_amplitude(f64::from(l), alpha));
    n_grid
        .iter()
        .map(|&n| {
            let mut spec = ExperimentSpec::new(
                l,
                alpha,
                n_iters,
                trials,
                SamplingMode::RandomNoisy { n, amp },
                master_seed,
            );
            spec.settings = settings;
            let results = run_campaign_with_threads(&spec, threads)?;
            Ok(SweepPoint {
                n,
                mean_rae: aggregate(&results, Aggregate::MeanRae(n_iters))?,
            })
        })
        .collect()
}
