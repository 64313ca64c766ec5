//! Preconstruction and iterative reconstruction in coefficient space.
//!
//! For a sampling set `Gamma` with weights `w_gamma`, the preconstruction
//! operator is `S g = sum_gamma w_gamma g(gamma) K(., gamma)`. Writing
//! `g = sum_k c_k phi_k`, its coefficients are `B M c` with the sampled frame
//! matrix `M = sum_gamma w_gamma phi(gamma) phi(gamma)^T`. The iterations
//!
//! ```text
//! g_0 = sum_{gamma in interior} w_gamma y_gamma K(., gamma)
//! g_n = g_0 + g_{n-1} - S g_{n-1}
//! ```
//!
//! only touch `n x n` matrices and vectors.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernel_space::{KernelSpace, Region, Signal};
use crate::linalg::Matrix;
use crate::sampling::{weighted_sample_norm, SamplingSet};

/// Residual guard: an iteration whose step exceeds this multiple of
/// `||g_0||` is aborted.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

/// One observed sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRecord {
    /// Position `gamma`.
    pub position: f64,
    /// Voronoi weight `|I_gamma|`.
    pub weight: f64,
    /// Observed value (possibly noisy).
    pub value: f64,
}

/// Interior samples of `f` on `sampling`, optionally with additive noise.
pub fn sample_signal(
    space: &KernelSpace,
    sampling: &SamplingSet,
    f: &Signal,
    noise: Option<&[f64]>,
) -> Result<Vec<SampleRecord>> {
    if let Some(xi) = noise {
        if xi.len() != sampling.len() {
            return Err(Error::Contract("one noise value per interior sample"));
        }
    }
    Ok(sampling
        .interior
        .iter()
        .zip(&sampling.interior_weights)
        .enumerate()
        .map(|(k, (&position, &weight))| SampleRecord {
            position,
            weight,
            value: space.eval(f, position) + noise.map_or(0.0, |xi| xi[k]),
        })
        .collect())
}

/// `g_0 = sum w_gamma y_gamma K(., gamma)`; coefficients
/// `B sum w_gamma y_gamma phi(gamma)`.
pub fn preconstruct(space: &KernelSpace, samples: &[SampleRecord]) -> Result<Signal> {
    if samples.is_empty() {
        return Err(Error::Contract("preconstruction needs at least one sample"));
    }
    let mut acc = alloc::vec![0.0; space.dim()];
    for s in samples {
        if !(s.weight > 0.0) {
            return Err(Error::Contract("sample weights must be positive"));
        }
        let phi = space.basis_at(s.position);
        let scale = s.weight * s.value;
        for (a, v) in phi.values.iter().enumerate() {
            acc[phi.offset + a] += scale * v;
        }
    }
    Ok(Signal::new(space.gram_inverse().mul_vec(&acc)))
}

/// The preconstruction operator of one sampling set, assembled once.
#[derive(Debug, Clone)]
pub struct FrameOperator {
    frame: Matrix,
}

impl FrameOperator {
    /// Assembles `M` from the interior and exterior points of `sampling`.
    pub fn new(space: &KernelSpace, sampling: &SamplingSet) -> Self {
        let mut frame = Matrix::zeros(space.dim());
        for (x, w) in sampling.weighted_points() {
            let phi = space.basis_at(x);
            if !phi.values.is_empty() {
                frame.add_outer_window(phi.offset, &phi.values, w);
            }
        }
        Self { frame }
    }

    /// The sampled frame matrix `M`.
    pub fn frame(&self) -> &Matrix {
        &self.frame
    }

    /// `S g`.
    pub fn apply(&self, space: &KernelSpace, g: &Signal) -> Signal {
        let mg = self.frame.mul_vec(&g.coeffs);
        Signal::new(space.gram_inverse().mul_vec(&mg))
    }
}

/// `S g` over the interior and exterior points of `sampling`.
pub fn apply_s(space: &KernelSpace, sampling: &SamplingSet, g: &Signal) -> Signal {
    FrameOperator::new(space, sampling).apply(space, g)
}

/// Which algorithm a run follows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode<'a> {
    /// Interior samples only, `g_0` from the samples.
    InteriorOnly,
    /// Same recursion; the samples carry additive noise.
    InteriorNoisy,
    /// Full-information iteration `f_0 = S f` from a known signal.
    OracleEverywhere(&'a Signal),
}

/// Tag of a [`Mode`] kept in a finished run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    /// See [`Mode::InteriorOnly`].
    InteriorOnly,
    /// See [`Mode::InteriorNoisy`].
    InteriorNoisy,
    /// See [`Mode::OracleEverywhere`].
    OracleEverywhere,
}

/// Iterates `g_0, ..., g_n` and the step norms `||g_k - g_{k-1}||_2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionRun {
    /// `g_0 .. g_n`.
    pub iterates: Vec<Signal>,
    /// `||g_k - g_{k-1}||_2` for `k = 1..=n` (exact Gram norm).
    pub residual_norms: Vec<f64>,
    /// Algorithm used.
    pub mode: ModeKind,
}

impl ReconstructionRun {
    /// Last iterate.
    pub fn last(&self) -> &Signal {
        self.iterates.last().expect("a run has at least one iterate")
    }
}

/// Runs `n_iters` steps of `g_n = g_0 + g_{n-1} - S g_{n-1}`.
pub fn iterate(
    space: &KernelSpace,
    sampling: &SamplingSet,
    samples: &[SampleRecord],
    n_iters: usize,
    mode: Mode<'_>,
) -> Result<ReconstructionRun> {
    let op = FrameOperator::new(space, sampling);
    iterate_with(space, &op, samples, n_iters, mode)
}

/// [`iterate`] with a pre-assembled operator.
pub fn iterate_with(
    space: &KernelSpace,
    op: &FrameOperator,
    samples: &[SampleRecord],
    n_iters: usize,
    mode: Mode<'_>,
) -> Result<ReconstructionRun> {
    let (g0, kind) = match mode {
        Mode::InteriorOnly => (preconstruct(space, samples)?, ModeKind::InteriorOnly),
        Mode::InteriorNoisy => (preconstruct(space, samples)?, ModeKind::InteriorNoisy),
        Mode::OracleEverywhere(truth) => {
            if truth.len() != space.dim() {
                return Err(Error::Contract("ground truth must belong to the space"));
            }
            (op.apply(space, truth), ModeKind::OracleEverywhere)
        }
    };
    let guard = DIVERGENCE_FACTOR * space.gram_norm(&g0);
    let mut iterates = Vec::with_capacity(n_iters + 1);
    let mut residual_norms = Vec::with_capacity(n_iters);
    iterates.push(g0);
    for n in 1..=n_iters {
        let prev = &iterates[n - 1];
        let step = &iterates[0] - &op.apply(space, prev);
        let next = prev + &step;
        let residual = space.gram_norm(&step);
        if !residual.is_finite() || residual > guard {
            return Err(Error::Divergence {
                iterate: n,
                residual,
            });
        }
        residual_norms.push(residual);
        iterates.push(next);
    }
    Ok(ReconstructionRun {
        iterates,
        residual_norms,
        mode: kind,
    })
}

/// Iteration-count rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationRule {
    /// Denominator `theta ln(1/d_H) - 2 ln k` from the measured distance.
    General,
    /// Denominator `ln 2`, valid once `d_H <= (2k^2)^{-1/theta}`.
    Simplified,
}

/// Smallest `n >= 0` with `n + 1 >= (ln(1/eps) - ln k) / denominator`.
pub fn required_iterations(
    eps: f64,
    k_norm: f64,
    theta: f64,
    d_h: f64,
    rule: IterationRule,
) -> Result<u32> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Contract("eps must lie in (0, 1)"));
    }
    let denom = match rule {
        IterationRule::General => theta * libm::log(1.0 / d_h) - 2.0 * libm::log(k_norm),
        IterationRule::Simplified => core::f64::consts::LN_2,
    };
    if !(denom > 0.0) {
        return Err(Error::Infeasible("k^2 d_H^theta must be below 1"));
    }
    let ratio = (libm::log(1.0 / eps) - libm::log(k_norm)) / denom;
    Ok((libm::ceil(ratio) - 1.0).max(0.0) as u32)
}

/// `||g - f||_2 / ||f||_2` by quadrature over the whole-line window.
pub fn rae(space: &KernelSpace, g: &Signal, f: &Signal) -> Result<f64> {
    let fnorm = space.l2_norm(f, Region::WholeLine);
    if fnorm == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let diff = g - f;
    Ok(space.l2_norm(&diff, Region::WholeLine) / fnorm)
}

/// The three sides of the weighted bi-Lipschitz inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityMargins {
    /// `(1 - eps - k d_H^theta) ||f - g|| - 2 eps min(||f||, ||g||)`.
    pub lower: f64,
    /// Weighted sample norm of `f - g` on the interior points.
    pub middle: f64,
    /// `(1 + k d_H^theta) ||f - g||`.
    pub upper: f64,
    /// `d_H < (1 - eps) / k` (theta = 1).
    pub hypothesis_holds: bool,
}

impl StabilityMargins {
    /// `lower <= middle <= upper`.
    pub fn chain_holds(&self) -> bool {
        self.lower <= self.middle && self.middle <= self.upper
    }
}

/// Evaluates the weighted stability chain for `f, g` on `sampling` with
/// kernel constant `k_norm` and `theta = 1`.
pub fn stability_margins(
    space: &KernelSpace,
    sampling: &SamplingSet,
    f: &Signal,
    g: &Signal,
    eps: f64,
    k_norm: f64,
) -> StabilityMargins {
    let diff = f - g;
    let values: Vec<f64> = sampling.interior.iter().map(|&x| space.eval(&diff, x)).collect();
    let middle = weighted_sample_norm(&values, &sampling.interior_weights)
        .expect("one value per interior point");
    let dn = space.l2_norm(&diff, Region::WholeLine);
    let fmin = space
        .l2_norm(f, Region::WholeLine)
        .min(space.l2_norm(g, Region::WholeLine));
    let k_dh = k_norm * sampling.hausdorff;
    StabilityMargins {
        lower: (1.0 - eps - k_dh) * dn - 2.0 * eps * fmin,
        middle,
        upper: (1.0 + k_dh) * dn,
        hypothesis_holds: sampling.hausdorff < (1.0 - eps) / k_norm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel_space::{GeneratorKind, QuadratureSpec};
    use crate::sampling::ExteriorGrid;

    fn gauss() -> KernelSpace {
        KernelSpace::make(GeneratorKind::Gaussian, -15, 15, Some(1), QuadratureSpec::default())
            .unwrap()
    }

    #[test]
    fn single_sample_preconstruction() {
        let s = gauss();
        let rec = [SampleRecord { position: 0.0, weight: 1.0, value: 2.5 }];
        let g0 = preconstruct(&s, &rec).unwrap();
        let want = s.kernel_section(0.0).scale(2.5);
        for (a, b) in g0.coeffs.iter().zip(&want.coeffs) {
            assert!((a - b).abs() < 1e-12);
        }
        let zero = [SampleRecord { value: 0.0, ..rec[0] }];
        assert!(preconstruct(&s, &zero).unwrap().is_zero());
        assert!(preconstruct(&s, &[]).is_err());
    }

    #[test]
    fn zero_iterations_is_preconstruction() {
        let s = gauss();
        let set = SamplingSet::from_interior(5.0, (0..41).map(|k| -5.0 + k as f64 * 0.25).collect())
            .unwrap()
            .with_exterior(ExteriorGrid::new(5.0, 0.1, 16.0).unwrap());
        let f = s.unit(1).unwrap();
        let samples = sample_signal(&s, &set, &f, None).unwrap();
        let run = iterate(&s, &set, &samples, 0, Mode::InteriorOnly).unwrap();
        assert_eq!(run.iterates.len(), 1);
        assert!(run.residual_norms.is_empty());
        assert_eq!(run.iterates[0], preconstruct(&s, &samples).unwrap());
    }

    #[test]
    fn iteration_counts() {
        use IterationRule::*;
        assert_eq!(required_iterations(0.1, 2.0, 1.0, 0.125, General).unwrap(), 2);
        assert_eq!(required_iterations(0.1, 2.0, 1.0, 0.125, Simplified).unwrap(), 2);
        assert_eq!(required_iterations(0.6, 2.0, 1.0, 0.125, General).unwrap(), 0);
        assert_eq!(required_iterations(0.5, 2.0, 1.0, 0.125, Simplified).unwrap(), 0);
        assert!(matches!(
            required_iterations(0.1, 2.0, 1.0, 0.25, General),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn rae_basics() {
        let s = gauss();
        let f = s.unit(0).unwrap().axpy(0.5, &s.unit(2).unwrap());
        assert_eq!(rae(&s, &f, &f).unwrap(), 0.0);
        assert!((rae(&s, &f.scale(2.0), &f).unwrap() - 1.0).abs() < 1e-12);
        assert!((rae(&s, &s.zero(), &f).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(rae(&s, &f, &s.zero()), Err(Error::ZeroSignal));
    }

    #[test]
    fn coincident_pair_margins() {
        let s = gauss();
        let set = SamplingSet::from_interior(5.0, (0..21).map(|k| -5.0 + k as f64 * 0.5).collect())
            .unwrap();
        let f = s.unit(0).unwrap();
        let m = stability_margins(&s, &set, &f, &f, 0.1, 3.0);
        assert_eq!(m.middle, 0.0);
        assert_eq!(m.upper, 0.0);
        assert!(m.lower <= 0.0);
        assert!(m.chain_holds());
    }
}
