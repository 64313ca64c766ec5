//! The randomized family `f_{L,alpha} = sum_{|i| <= L} r_i (1 + |i|)^{-alpha} phi_i`
//! with `|r_i|` uniform on `[1/2, 1]` and random sign, and the tabulated
//! concentration levels `eps_{L,alpha} = C_alpha L^{-max(alpha, 1/2)}`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::kernel_space::{KernelSpace, Signal};

/// `(alpha, C_alpha)` pairs.
pub const C_ALPHA: [(f64, f64); 5] = [(0.0, 1.15), (0.2, 1.0), (0.4, 0.75), (0.6, 0.80), (0.8, 1.45)];

/// `C_alpha` for a tabulated exponent.
pub fn c_alpha(alpha: f64) -> Result<f64> {
    C_ALPHA
        .iter()
        .find(|(a, _)| (a - alpha).abs() < 1e-9)
        .map(|(_, c)| *c)
        .ok_or(Error::UnsupportedAlpha(alpha))
}

/// `eps_{L,alpha} = C_alpha L^{-max(alpha, 1/2)}`.
pub fn epsilon_target(l: f64, alpha: f64) -> Result<f64> {
    Ok(c_alpha(alpha)? * libm::pow(l, -alpha.max(0.5)))
}

/// Exterior grid spacing `eps_{L,alpha} / 2`.
pub fn exterior_gap(l: f64, alpha: f64) -> Result<f64> {
    Ok(0.5 * epsilon_target(l, alpha)?)
}

/// Default uniform-noise amplitude `L^{min(1/2 - alpha, 0)} / 2`.
pub fn noise_amplitude(l: f64, alpha: f64) -> f64 {
    0.5 * libm::pow(l, (0.5 - alpha).min(0.0))
}

/// Draws `f_{L,alpha}` in `space`, whose index range must cover `[-L, L]`.
pub fn make_concentrated_signal<R: Rng + ?Sized>(
    space: &KernelSpace,
    l: f64,
    alpha: f64,
    rng: &mut R,
) -> Result<Signal> {
    if !(alpha >= 0.0) {
        return Err(Error::Contract("alpha must be nonnegative"));
    }
    let top = libm::floor(l) as i64;
    let g = space.generator();
    if g.index_lo() > -top || g.index_hi() < top {
        return Err(Error::Contract("space index range must contain [-L, L]"));
    }
    let mut f = space.zero();
    for i in -top..=top {
        let mag: f64 = rng.gen_range(0.5..=1.0);
        let r = if rng.gen::<bool>() { mag } else { -mag };
        let k = g.local(i).expect("range checked above");
        f.coeffs[k] = r * libm::pow(1.0 + i.unsigned_abs() as f64, -alpha);
    }
    Ok(f)
}
