//! Sampling sets on `Omega = [-L, L]` and its complement.
//!
//! Interior cells are the Voronoi cells of the sorted positions clipped to
//! `[-L, L]`; their lengths serve as quadrature weights. The exterior is
//! covered by a uniform grid `+-(L + (m + 1/2) gap)` with weight `gap`.

use alloc::vec::Vec;

use rand::Rng;

use crate::bounds::TheoryParams;
use crate::error::{Error, Result};

/// The interval `[-L, L]` with its constants as a 1-D metric measure domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain1D {
    /// Half-width `L`.
    pub half_width: f64,
}

impl Domain1D {
    /// Corkscrew ratio of an interval.
    pub const CORKSCREW_C: f64 = 0.5;
    /// Dimension.
    pub const DIM: u32 = 1;
    /// Ahlfors constants: a ball `[x - r, x + r]` has measure exactly `2r`.
    pub const D1: f64 = 2.0;
    /// See [`Self::D1`].
    pub const D2: f64 = 2.0;

    /// `[-L, L]`, requiring `L >= 1`.
    pub fn new(half_width: f64) -> Result<Self> {
        if !(half_width >= 1.0) {
            return Err(Error::Contract("domain half-width must be at least 1"));
        }
        Ok(Self { half_width })
    }

    /// Lebesgue measure `2L`.
    pub fn measure(&self) -> f64 {
        2.0 * self.half_width
    }
}

/// Uniform exterior grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExteriorGrid {
    /// Points `+-(L + (m + 1/2) gap)` in ascending order.
    pub points: Vec<f64>,
    /// Spacing, which is also each point's weight.
    pub gap: f64,
}

impl ExteriorGrid {
    /// Points `+-(L + (m + 1/2) gap)` for `m = 0 .. ceil(extent / gap) - 1`.
    pub fn new(l: f64, gap: f64, extent: f64) -> Result<Self> {
        if !(gap > 0.0) || !(extent > 0.0) {
            return Err(Error::Contract("exterior gap and extent must be positive"));
        }
        let m = libm::ceil(extent / gap - 1e-9).max(1.0) as usize;
        let mut points = Vec::with_capacity(2 * m);
        points.extend((0..m).rev().map(|k| -(l + (k as f64 + 0.5) * gap)));
        points.extend((0..m).map(|k| l + (k as f64 + 0.5) * gap));
        Ok(Self { points, gap })
    }

    /// Distance from any point of the covered band to the grid.
    pub fn hausdorff(&self) -> f64 {
        0.5 * self.gap
    }
}

/// Interior positions with Voronoi weights, plus an exterior grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingSet {
    /// Half-width `L` of the domain.
    pub half_width: f64,
    /// Strictly increasing positions inside `[-L, L]`.
    pub interior: Vec<f64>,
    /// Voronoi cell lengths `|I_gamma|`, summing to `2L`.
    pub interior_weights: Vec<f64>,
    /// Exterior grid; empty when only interior samples are considered.
    pub exterior: Vec<f64>,
    /// Exterior spacing (zero when there is no exterior grid).
    pub exterior_gap: f64,
    /// `d_H(Gamma, [-L, L])`.
    pub hausdorff: f64,
}

impl SamplingSet {
    /// Sorts `positions`, merges coincident ones and computes weights and the
    /// Hausdorff distance.
    pub fn from_interior(l: f64, mut positions: Vec<f64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::Contract("sampling set must be nonempty"));
        }
        if positions.iter().any(|p| !(p.abs() <= l)) {
            return Err(Error::Contract("interior positions must lie in [-L, L]"));
        }
        positions.sort_by(f64::total_cmp);
        positions.dedup();
        let interior_weights = voronoi_weights(l, &positions);
        let hausdorff = hausdorff_distance(l, &positions);
        Ok(Self {
            half_width: l,
            interior: positions,
            interior_weights,
            exterior: Vec::new(),
            exterior_gap: 0.0,
            hausdorff,
        })
    }

    /// Attaches an exterior grid.
    pub fn with_exterior(mut self, grid: ExteriorGrid) -> Self {
        self.exterior = grid.points;
        self.exterior_gap = grid.gap;
        self
    }

    /// Number of interior samples.
    pub fn len(&self) -> usize {
        self.interior.len()
    }

    /// True when there are no interior samples.
    pub fn is_empty(&self) -> bool {
        self.interior.is_empty()
    }

    /// Every sample position with its weight, interior first.
    pub fn weighted_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.interior
            .iter()
            .copied()
            .zip(self.interior_weights.iter().copied())
            .chain(self.exterior.iter().map(move |p| (*p, self.exterior_gap)))
    }
}

/// Voronoi cell lengths of sorted positions in `[-L, L]`: the first cell
/// reaches `-L`, the last reaches `L`, inner cells split at midpoints.
pub fn voronoi_weights(l: f64, sorted: &[f64]) -> Vec<f64> {
    let n = sorted.len();
    match n {
        0 => Vec::new(),
        1 => alloc::vec![2.0 * l],
        _ => (0..n)
            .map(|k| {
                if k == 0 {
                    l + 0.5 * (sorted[1] + sorted[0])
                } else if k == n - 1 {
                    l - 0.5 * (sorted[n - 1] + sorted[n - 2])
                } else {
                    0.5 * (sorted[k + 1] - sorted[k - 1])
                }
            })
            .collect(),
    }
}

/// `sup_{x in [-L, L]} dist(x, set)` for sorted positions.
pub fn hausdorff_distance(l: f64, sorted: &[f64]) -> f64 {
    let (Some(first), Some(last)) = (sorted.first(), sorted.last()) else {
        return f64::INFINITY;
    };
    let inner = sorted
        .windows(2)
        .map(|w| 0.5 * (w[1] - w[0]))
        .fold(0.0, f64::max);
    (first + l).max(l - last).max(inner)
}

/// Gap-driven interior set: starting from `-L`, gaps are drawn from `gap`
/// and the walk stops once the next position lands in `[L - 1/4, L]`. A gap
/// that would overshoot `L` is redrawn.
pub fn deterministic_interior_with(l: f64, mut gap: impl FnMut() -> f64) -> Result<SamplingSet> {
    if !(l >= 1.0) {
        return Err(Error::Contract("domain half-width must be at least 1"));
    }
    let mut positions = Vec::new();
    let mut cur = -l;
    let mut rejected = 0usize;
    loop {
        let next = cur + gap();
        if next > l {
            rejected += 1;
            if rejected > 10_000 {
                return Err(Error::Contract("gap law cannot land the terminal point"));
            }
            continue;
        }
        rejected = 0;
        positions.push(next);
        if l - next <= 0.25 {
            break;
        }
        cur = next;
    }
    SamplingSet::from_interior(l, positions)
}

/// Interior set with i.i.d. uniform gaps on `[1/4, 3/4]`.
pub fn deterministic_interior<R: Rng + ?Sized>(l: f64, rng: &mut R) -> Result<SamplingSet> {
    deterministic_interior_with(l, || rng.gen_range(0.25..=0.75))
}

/// `n` i.i.d. uniform positions on `[-L, L]`, sorted.
pub fn random_interior<R: Rng + ?Sized>(l: f64, n: usize, rng: &mut R) -> Result<SamplingSet> {
    if n < 2 {
        return Err(Error::Contract("random sampling needs at least two points"));
    }
    let positions = (0..n).map(|_| rng.gen_range(-l..=l)).collect();
    SamplingSet::from_interior(l, positions)
}

/// `(sum_k |h_k|^2 w_k)^{1/2}`.
pub fn weighted_sample_norm(values: &[f64], weights: &[f64]) -> Result<f64> {
    if values.len() != weights.len() {
        return Err(Error::Contract("values and weights must have equal length"));
    }
    let s: f64 = values.iter().zip(weights).map(|(v, w)| v * v * w).sum();
    Ok(libm::sqrt(s))
}

/// A probability bound as evaluated and clipped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityBound {
    /// Formula value, possibly above one.
    pub raw: f64,
    /// `raw` clamped to `[0, 1]`.
    pub clamped: f64,
}

impl ProbabilityBound {
    pub(crate) fn new(raw: f64) -> Self {
        Self {
            raw,
            clamped: raw.clamp(0.0, 1.0),
        }
    }
}

/// Upper bound `(1/q) (1 - q)^n` on `P(d_H(Gamma, Omega) > delta1)` for `n`
/// i.i.d. uniform positions, where `q = c^d D1 delta1^d / (10^d mu(Omega))`.
pub fn coverage_bound(params: &TheoryParams, delta1: f64, n: u64) -> Result<ProbabilityBound> {
    if !(delta1 > 0.0 && delta1 <= 1.0) {
        return Err(Error::Contract("delta1 must lie in (0, 1]"));
    }
    let d = params.d as f64;
    let q = libm::pow(params.c, d) * params.d1 * libm::pow(delta1, d)
        / (libm::pow(10.0, d) * params.mu_omega);
    let raw = (1.0 / q) * libm::exp(n as f64 * libm::log1p(-q));
    Ok(ProbabilityBound::new(raw))
}

/// Monte Carlo frequency of `d_H > delta1` over `trials` draws of `n`
/// uniform positions on `[-L, L]`.
pub fn empirical_coverage<R: Rng + ?Sized>(
    l: f64,
    n: usize,
    delta1: f64,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::Contract("at least one trial is required"));
    }
    if n == 0 {
        return Err(Error::Contract("at least one sample is required"));
    }
    let mut buf = Vec::with_capacity(n);
    let mut hits = 0usize;
    for _ in 0..trials {
        buf.clear();
        buf.extend((0..n).map(|_| rng.gen_range(-l..=l)));
        buf.sort_by(f64::total_cmp);
        if hausdorff_distance(l, &buf) > delta1 {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}
