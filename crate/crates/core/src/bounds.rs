//! Closed-form constants, error factors, probabilities and sample-size
//! thresholds for sampling and reconstruction of concentrated signals.
//!
//! All evaluators are parametric in the dimension `d`, the Corkscrew ratio
//! `c`, the Ahlfors constants `D1, D2` and the kernel constant
//! `k = ||K||_{S,theta}`. Thresholds are returned as reals; rounding up is
//! left to the caller. Probabilities are reported both raw and clamped.

use crate::error::{Error, Result};
use crate::sampling::{Domain1D, ProbabilityBound};

/// Inputs shared by the bound evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryParams {
    /// Hoelder exponent `theta` in `(0, 1]`.
    pub theta: f64,
    /// Kernel constant `||K||_{S,theta}`.
    pub k_norm: f64,
    /// Concentration level `epsilon` in `(0, 1)`.
    pub eps: f64,
    /// Dimension `d`.
    pub d: u32,
    /// Corkscrew ratio `c`.
    pub c: f64,
    /// Lower Ahlfors constant `D1`.
    pub d1: f64,
    /// Upper Ahlfors constant `D2`.
    pub d2: f64,
    /// Measure of the domain.
    pub mu_omega: f64,
    /// Sample count `N`.
    pub n: u64,
    /// Failure probability `tau` in `(0, 1)`.
    pub tau: f64,
    /// Noise variance `sigma^2`.
    pub sigma2: f64,
    /// Norm exponent `p`.
    pub p: f64,
    /// `||f||_p` of the signal under consideration.
    pub f_norm: f64,
}

impl TheoryParams {
    /// Constants of `[-L, L]` with `theta = 1`, `p = 2` and placeholder
    /// values (`k = 2`, `eps = 0.1`, `tau = 0.1`, `sigma^2 = 1`,
    /// `||f|| = 1`, `N = 0`) to be overwritten by the caller.
    pub fn interval(l: f64) -> Self {
        Self {
            theta: 1.0,
            k_norm: 2.0,
            eps: 0.1,
            d: Domain1D::DIM,
            c: Domain1D::CORKSCREW_C,
            d1: Domain1D::D1,
            d2: Domain1D::D2,
            mu_omega: 2.0 * l,
            n: 0,
            tau: 0.1,
            sigma2: 1.0,
            p: 2.0,
            f_norm: 1.0,
        }
    }

    fn dim(&self) -> f64 {
        self.d as f64
    }

    /// `c^d D1`.
    fn cover_scale(&self) -> f64 {
        libm::pow(self.c, self.dim()) * self.d1
    }

    fn pow10d(&self) -> f64 {
        libm::pow(10.0, self.dim())
    }

    /// `k^2 d_h^theta`, the contraction factor of the iteration.
    pub fn contraction(&self, d_h: f64) -> f64 {
        self.k_norm * self.k_norm * libm::pow(d_h, self.theta)
    }
}

/// `C0` and the factors built on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorFactors {
    /// `C0 = k / (1 - k^2 d_h^theta)`.
    pub c0: f64,
    /// `4 C0 eps`: relative error bound of the interior-only reconstruction.
    pub det_error_factor: f64,
    /// `C0`: multiplier of the weighted noise norm.
    pub noisy_noise_factor: f64,
    /// `9 C0 eps`: concentration level of the reconstructions.
    pub concentration_factor: f64,
    /// `4 C0 (1 + k d_h^theta) eps`: relative bound on the weighted sampling
    /// difference.
    pub sample_difference_factor: f64,
}

/// `C0` and the deterministic error factors at Hausdorff distance `d_h`.
pub fn c0_and_error(params: &TheoryParams, d_h: f64) -> Result<ErrorFactors> {
    let q = params.contraction(d_h);
    if !(q < 1.0) {
        return Err(Error::Infeasible("k^2 d_H^theta must be below 1"));
    }
    let c0 = params.k_norm / (1.0 - q);
    let k_dh = params.k_norm * libm::pow(d_h, params.theta);
    Ok(ErrorFactors {
        c0,
        det_error_factor: 4.0 * c0 * params.eps,
        noisy_noise_factor: c0,
        concentration_factor: 9.0 * c0 * params.eps,
        sample_difference_factor: 4.0 * c0 * (1.0 + k_dh) * params.eps,
    })
}

/// Random-sampling probability and sample-count thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomThresholds {
    /// `tau(mu(Omega), N)`, the failure probability of the
    /// random-sampling error estimate.
    pub tau_of_n: ProbabilityBound,
    /// Sample count beyond which the unweighted sampling inequality holds
    /// with probability `1 - tau`.
    pub n0: f64,
    /// Sample count beyond which `tau(mu(Omega), N) <= tau`.
    pub n1: f64,
}

/// `P = 10^d (2k^2)^{d/theta} mu(Omega) / (c^d D1)`, the prefactor of
/// `tau(mu(Omega), N) = P (1 - 1/P)^N`.
pub fn tau_prefactor(params: &TheoryParams) -> f64 {
    let d = params.dim();
    params.pow10d()
        * libm::pow(2.0 * params.k_norm * params.k_norm, d / params.theta)
        * params.mu_omega
        / params.cover_scale()
}

/// `tau(mu(Omega), N)`, `N0` and `N1`.
pub fn random_thresholds(params: &TheoryParams) -> RandomThresholds {
    let d = params.dim();
    let p = tau_prefactor(params);
    let tau_raw = p * libm::exp(params.n as f64 * libm::log1p(-1.0 / p));
    let n1 = p * libm::log(p / params.tau);
    let n0_scale = libm::pow(5.0, d)
        * libm::pow(2.0, d + 1.0 + d / params.theta)
        * libm::pow(params.k_norm, d / params.theta)
        * params.mu_omega
        / params.cover_scale();
    let n0_arg = params.pow10d()
        * libm::pow(2.0 * params.k_norm, d / params.theta)
        * params.mu_omega
        / (params.cover_scale() * params.tau);
    RandomThresholds {
        tau_of_n: ProbabilityBound::new(tau_raw),
        n0: n0_scale * libm::log(n0_arg),
        n1,
    }
}

/// Random-noise regime thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseThresholds {
    /// `min((2k^2)^{-1/theta}, (tau eps^2 sigma^{-2} ||f||^2 / (D2 D1^{2/p-1}))^{1/d})`.
    pub delta1_tilde: f64,
    /// Sample count required by the random-noise error estimate.
    pub n_min: f64,
}

/// `delta1_tilde` and the sample count it forces.
pub fn noise_thresholds(params: &TheoryParams) -> Result<NoiseThresholds> {
    if !(params.sigma2 > 0.0) || !(params.f_norm > 0.0) {
        return Err(Error::Contract("sigma^2 and ||f|| must be positive"));
    }
    let d = params.dim();
    let cap = libm::pow(2.0 * params.k_norm * params.k_norm, -1.0 / params.theta);
    let noise_arg = params.tau * params.eps * params.eps * params.f_norm * params.f_norm
        / (params.sigma2 * params.d2 * libm::pow(params.d1, 2.0 / params.p - 1.0));
    let delta1_tilde = cap.min(libm::pow(noise_arg, 1.0 / d));
    let scale = params.pow10d() * params.mu_omega
        / (params.cover_scale() * libm::pow(delta1_tilde, d));
    Ok(NoiseThresholds {
        delta1_tilde,
        n_min: scale * libm::log(scale / params.tau),
    })
}

/// Convergence factor of the full-information iteration:
/// `(1 + q) / (1 - q) * q^{n+1}` with `q = k^2 delta^theta`.
pub fn full_information_error_factor(params: &TheoryParams, delta: f64, n: u32) -> Result<f64> {
    let q = params.contraction(delta);
    if !(q < 1.0) {
        return Err(Error::Infeasible("k^2 delta^theta must be below 1"));
    }
    Ok((1.0 + q) / (1.0 - q) * libm::pow(q, n as f64 + 1.0))
}

/// `D1^{-1/p + 1/q} k^{1 - p/q}`, the constant in `||f||_q <= C ||f||_p`.
pub fn norm_comparison_factor(params: &TheoryParams, q: f64) -> f64 {
    let (p, d1, k) = (params.p, params.d1, params.k_norm);
    if q.is_infinite() {
        libm::pow(d1, -1.0 / p) * k
    } else {
        libm::pow(d1, -1.0 / p + 1.0 / q) * libm::pow(k, 1.0 - p / q)
    }
}

/// Bi-Lipschitz constants at Hausdorff distance `d_h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityConstants {
    /// `1 - eps - k d_h^theta`.
    pub lower: f64,
    /// `1 + k d_h^theta`.
    pub upper: f64,
    /// Whether `d_h < ((1 - eps)/k)^{1/theta}`.
    pub hypothesis_holds: bool,
}

/// Constants of the weighted bi-Lipschitz inequality.
pub fn stability_constants(params: &TheoryParams, d_h: f64) -> StabilityConstants {
    let k_dh = params.k_norm * libm::pow(d_h, params.theta);
    StabilityConstants {
        lower: 1.0 - params.eps - k_dh,
        upper: 1.0 + k_dh,
        hypothesis_holds: d_h < libm::pow((1.0 - params.eps) / params.k_norm, 1.0 / params.theta),
    }
}

/// Lower constant of the unweighted sampling inequality,
/// `(1 - eps - k d_h^theta) / (D2^{1/p} d_h^{d/p})`.
pub fn unweighted_lower_constant(params: &TheoryParams, d_h: f64) -> f64 {
    let st = stability_constants(params, d_h);
    st.lower / (libm::pow(params.d2, 1.0 / params.p) * libm::pow(d_h, params.dim() / params.p))
}

/// Probability that the random weighted stability inequality with slack
/// `eps_tilde` fails: the coverage bound at `delta1 = (eps_tilde / k)^{1/theta}`.
pub fn random_stability_failure(params: &TheoryParams, eps_tilde: f64) -> Result<ProbabilityBound> {
    if !(eps_tilde > 0.0 && eps_tilde < 1.0 - params.eps) {
        return Err(Error::Contract("eps_tilde must lie in (0, 1 - eps)"));
    }
    let delta1 = libm::pow(eps_tilde / params.k_norm, 1.0 / params.theta);
    crate::sampling::coverage_bound(params, delta1.min(1.0), params.n)
}

/// Exterior Hausdorff distance allowed by the interior-only iteration:
/// `min((eps / k)^{1/theta}, (2 k^2)^{-1/theta})`.
pub fn exterior_gap_limit(params: &TheoryParams) -> f64 {
    let k = params.k_norm;
    libm::pow(params.eps / k, 1.0 / params.theta)
        .min(libm::pow(2.0 * k * k, -1.0 / params.theta))
}

/// Relative L_p error bound `8 k eps` of random-sampling reconstruction.
pub fn random_error_factor(params: &TheoryParams) -> f64 {
    8.0 * params.k_norm * params.eps
}

/// Relative L_q bound `8 D1^{-1/p+1/q} k^{2-p/q} eps`.
pub fn random_error_factor_q(params: &TheoryParams, q: f64) -> f64 {
    8.0 * params.k_norm * norm_comparison_factor(params, q) * params.eps
}

/// Sup-norm bound `8 D1^{-1/p} k^2 eps ||f|| + 2 k ||xi||_inf` with bounded noise.
pub fn bounded_noise_sup_error(params: &TheoryParams, noise_sup: f64) -> f64 {
    let k = params.k_norm;
    8.0 * libm::pow(params.d1, -1.0 / params.p) * k * k * params.eps * params.f_norm
        + 2.0 * k * noise_sup
}

/// Sup-norm bound `10 D1^{-1/p} k^2 eps ||f||` with i.i.d. random noise.
pub fn random_noise_sup_error(params: &TheoryParams) -> f64 {
    let k = params.k_norm;
    10.0 * libm::pow(params.d1, -1.0 / params.p) * k * k * params.eps * params.f_norm
}
