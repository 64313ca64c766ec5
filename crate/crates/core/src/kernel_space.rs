//! Truncated shift-invariant spaces `span{phi_i : lo <= i <= hi}` and the
//! reproducing kernel `K(x, y) = sum_{i,j} b_ji phi_i(x) phi_j(y)` induced by
//! the inverse `B = (b_ij)` of the Gram matrix `A = (<phi_i, phi_j>)`.
//!
//! The orthogonal projection onto the space has `K` as integral kernel, so
//! `int K(x, y) f(y) dy = f(x)` for every `f` in the space and
//! `int K(x, z) K(z, y) dz = K(x, y)`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::quadrature;

/// Largest admissible jitter `|theta_i|`.
pub const MAX_JITTER: f64 = 0.1;

/// Beyond this distance from its center a Gaussian generator is below
/// `exp(-42)` and is treated as zero.
const GAUSSIAN_RADIUS: f64 = 6.5;

/// Shape of the generating function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `phi_i(x) = exp(-(x - i - theta_i)^2)`.
    Gaussian,
    /// `phi_i(x) = max(1 - |x - i|, 0)`.
    Hat,
}

/// Basis generator over the index range `index_lo..=index_hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    kind: GeneratorKind,
    index_lo: i64,
    index_hi: i64,
    jitter: Vec<f64>,
}

impl Generator {
    /// Unjittered generator.
    pub fn new(kind: GeneratorKind, index_lo: i64, index_hi: i64) -> Result<Self> {
        if index_lo > index_hi {
            return Err(Error::Contract("index_lo must not exceed index_hi"));
        }
        let n = (index_hi - index_lo + 1) as usize;
        Ok(Self {
            kind,
            index_lo,
            index_hi,
            jitter: vec![0.0; n],
        })
    }

    /// Gaussian generator with explicit shifts `theta_i`, one per index.
    pub fn gaussian_with_jitter(index_lo: i64, index_hi: i64, jitter: Vec<f64>) -> Result<Self> {
        let mut g = Self::new(GeneratorKind::Gaussian, index_lo, index_hi)?;
        if jitter.len() != g.len() {
            return Err(Error::Contract("one jitter value per basis index"));
        }
        if jitter.iter().any(|t| !(t.abs() <= MAX_JITTER)) {
            return Err(Error::Contract("jitter must lie in [-1/10, 1/10]"));
        }
        g.jitter = jitter;
        Ok(g)
    }

    /// Gaussian generator with `theta_i` drawn uniformly from `[-1/10, 1/10]`.
    pub fn jittered_gaussian<R: Rng + ?Sized>(
        index_lo: i64,
        index_hi: i64,
        rng: &mut R,
    ) -> Result<Self> {
        if index_lo > index_hi {
            return Err(Error::Contract("index_lo must not exceed index_hi"));
        }
        let jitter = (index_lo..=index_hi)
            .map(|_| rng.gen_range(-MAX_JITTER..=MAX_JITTER))
            .collect();
        Self::gaussian_with_jitter(index_lo, index_hi, jitter)
    }

    /// Generator kind.
    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    /// Lowest basis index.
    pub fn index_lo(&self) -> i64 {
        self.index_lo
    }

    /// Highest basis index.
    pub fn index_hi(&self) -> i64 {
        self.index_hi
    }

    /// Shifts `theta_i` in index order.
    pub fn jitter(&self) -> &[f64] {
        &self.jitter
    }

    /// Number of basis elements.
    pub fn len(&self) -> usize {
        self.jitter.len()
    }

    /// Always false; a generator has at least one element.
    pub fn is_empty(&self) -> bool {
        self.jitter.is_empty()
    }

    /// Integer index of local position `k`.
    pub fn index(&self, k: usize) -> i64 {
        self.index_lo + k as i64
    }

    /// Local position of integer index `i`, if it is in range.
    pub fn local(&self, i: i64) -> Option<usize> {
        (self.index_lo..=self.index_hi)
            .contains(&i)
            .then(|| (i - self.index_lo) as usize)
    }

    /// Center `i + theta_i` of basis element `k`.
    pub fn center(&self, k: usize) -> f64 {
        self.index(k) as f64 + self.jitter[k]
    }

    /// Distance from its center beyond which an element vanishes (exactly for
    /// the hat, numerically for the Gaussian).
    pub fn support_radius(&self) -> f64 {
        match self.kind {
            GeneratorKind::Gaussian => GAUSSIAN_RADIUS,
            GeneratorKind::Hat => 1.0,
        }
    }

    /// `phi_k(x)` for local position `k`.
    pub fn eval(&self, k: usize, x: f64) -> f64 {
        let t = x - self.center(k);
        match self.kind {
            GeneratorKind::Gaussian => libm::exp(-t * t),
            GeneratorKind::Hat => (1.0 - t.abs()).max(0.0),
        }
    }

    /// Local positions whose element can be nonzero at `x`.
    pub fn active(&self, x: f64) -> Range<usize> {
        let r = self.support_radius() + MAX_JITTER;
        let lo = libm::ceil(x - r).max(self.index_lo as f64);
        let hi = libm::floor(x + r).min(self.index_hi as f64);
        if !(lo <= hi) {
            return 0..0;
        }
        let a = (lo as i64 - self.index_lo) as usize;
        let b = (hi as i64 - self.index_lo) as usize + 1;
        a..b
    }

    /// `<phi_a, phi_b>` in closed form.
    pub fn inner(&self, a: usize, b: usize) -> f64 {
        match self.kind {
            GeneratorKind::Gaussian => {
                let d = self.center(a) - self.center(b);
                libm::sqrt(core::f64::consts::FRAC_PI_2) * libm::exp(-0.5 * d * d)
            }
            GeneratorKind::Hat => match a.abs_diff(b) {
                0 => 2.0 / 3.0,
                1 => 1.0 / 6.0,
                _ => 0.0,
            },
        }
    }
}

/// Composite Simpson settings for norms and kernel integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Panel width.
    pub step: f64,
    /// Padding `W` added around the coefficient support for whole-line norms.
    pub window_pad: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            step: 0.01,
            window_pad: 10.0,
        }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !(self.window_pad > 0.0) {
            return Err(Error::Contract("quadrature step and window pad must be positive"));
        }
        Ok(())
    }
}

/// Element `f = sum_k coeffs[k] phi_k` of a [`KernelSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    /// Coefficients in local index order.
    pub coeffs: Vec<f64>,
}

impl Signal {
    /// Wraps a coefficient vector.
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// The zero signal of dimension `n`.
    pub fn zeros(n: usize) -> Self {
        Self {
            coeffs: vec![0.0; n],
        }
    }

    /// Number of coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// True when there are no coefficients.
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &Signal) -> Signal {
        assert_eq!(self.len(), other.len(), "signals from different spaces");
        Signal::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    /// `s * self`.
    pub fn scale(&self, s: f64) -> Signal {
        Signal::new(self.coeffs.iter().map(|c| s * c).collect())
    }
}

impl core::ops::Sub for &Signal {
    type Output = Signal;
    fn sub(self, rhs: &Signal) -> Signal {
        self.axpy(-1.0, rhs)
    }
}

impl core::ops::Add for &Signal {
    type Output = Signal;
    fn add(self, rhs: &Signal) -> Signal {
        self.axpy(1.0, rhs)
    }
}

/// Integration region for [`KernelSpace::l2_norm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// The real line (a window padded around the coefficient support).
    WholeLine,
    /// `[-L, L]`.
    Inside(f64),
    /// The complement of `[-L, L]` within the whole-line window.
    Outside(f64),
}

/// Basis values at a point: `values[a] = phi_{offset + a}(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisEval {
    /// Local position of the first active element.
    pub offset: usize,
    /// Values of the active elements.
    pub values: Vec<f64>,
}

impl BasisEval {
    /// `sum_a values[a] * coeffs[offset + a]`.
    pub fn dot(&self, coeffs: &[f64]) -> f64 {
        dot(&self.values, &coeffs[self.offset..self.offset + self.values.len()])
    }
}

/// Probe configuration for [`KernelSpace::estimate_schur`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeGrid {
    /// First-argument points at which row integrals are taken.
    pub x_points: Vec<f64>,
    /// Simpson panel width for the inner integral.
    pub y_step: f64,
    /// Radii at which the modulus of continuity is probed.
    pub deltas: Vec<f64>,
}

impl ProbeGrid {
    /// `count` equispaced points over one unit cell at the center of the
    /// index range, deltas `1, 1/2, ..., 1/32`.
    pub fn centered(space: &KernelSpace, count: usize, y_step: f64) -> Self {
        let g = space.generator();
        let mid = libm::floor((g.index_lo() + g.index_hi()) as f64 / 2.0);
        let count = count.max(1);
        let x_points = (0..count)
            .map(|k| mid - 0.5 + k as f64 / count as f64)
            .collect();
        Self {
            x_points,
            y_step,
            deltas: (0..6).map(|k| libm::pow(0.5, k as f64)).collect(),
        }
    }
}

/// Lower estimates of the Schur quantities of `K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchurEstimate {
    /// `max_x int |K(x, y)| dy` over probed `x`.
    pub schur_norm: f64,
    /// `max_x int omega_delta(K)(x, y) dy` at the requested delta.
    pub modulus_schur: f64,
    /// The requested delta.
    pub delta: f64,
    /// Hoelder exponent used in `combined`.
    pub holder_theta: f64,
    /// `schur_norm + max_delta delta^{-theta} * modulus(delta)` over all
    /// probed deltas.
    pub combined: f64,
}

/// Truncated shift-invariant space with its Gram matrix and inverse.
#[derive(Debug, Clone)]
pub struct KernelSpace {
    generator: Generator,
    gram: Matrix,
    gram_inverse: Matrix,
    quadrature: QuadratureSpec,
    decay_ratio: f64,
}

impl KernelSpace {
    /// Assembles the Gram matrix in closed form and inverts it.
    pub fn new(generator: Generator, quadrature: QuadratureSpec) -> Result<Self> {
        quadrature.validate()?;
        let n = generator.len();
        let gram = Matrix::from_fn(n, |a, b| generator.inner(a, b));
        let gram_inverse = gram.inverse_spd()?;
        let decay_ratio = decay_ratio(&gram_inverse);
        Ok(Self {
            generator,
            gram,
            gram_inverse,
            quadrature,
            decay_ratio,
        })
    }

    /// Builds the space for `index_lo..=index_hi`; with a seed, a Gaussian
    /// space gets uniform jitter drawn from a ChaCha stream.
    pub fn make(
        kind: GeneratorKind,
        index_lo: i64,
        index_hi: i64,
        jitter_seed: Option<u64>,
        quadrature: QuadratureSpec,
    ) -> Result<Self> {
        let generator = match (kind, jitter_seed) {
            (GeneratorKind::Gaussian, Some(seed)) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Generator::jittered_gaussian(index_lo, index_hi, &mut rng)?
            }
            (GeneratorKind::Hat, Some(_)) => {
                return Err(Error::Contract("jitter is only defined for the Gaussian generator"))
            }
            (kind, None) => Generator::new(kind, index_lo, index_hi)?,
        };
        Self::new(generator, quadrature)
    }

    /// The generator.
    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    /// Number of basis elements.
    pub fn dim(&self) -> usize {
        self.generator.len()
    }

    /// Gram matrix `A`.
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// `B = A^{-1}`.
    pub fn gram_inverse(&self) -> &Matrix {
        &self.gram_inverse
    }

    /// Quadrature settings.
    pub fn quadrature(&self) -> QuadratureSpec {
        self.quadrature
    }

    /// Smallest `r` with `|b_ij| <= b_ref r^{|i-j|}` over all entries above
    /// round-off, `b_ref` being the largest diagonal entry of `B`.
    pub fn decay_ratio(&self) -> f64 {
        self.decay_ratio
    }

    /// `max |A B - I|`.
    pub fn identity_residual(&self) -> f64 {
        self.gram
            .mul(&self.gram_inverse)
            .max_abs_diff(&Matrix::identity(self.dim()))
    }

    /// Zero element.
    pub fn zero(&self) -> Signal {
        Signal::zeros(self.dim())
    }

    /// Basis element with integer index `i`.
    pub fn unit(&self, i: i64) -> Result<Signal> {
        let k = self
            .generator
            .local(i)
            .ok_or(Error::Contract("basis index outside the space"))?;
        let mut s = self.zero();
        s.coeffs[k] = 1.0;
        Ok(s)
    }

    /// Values of the active basis elements at `x`.
    pub fn basis_at(&self, x: f64) -> BasisEval {
        let r = self.generator.active(x);
        let offset = r.start;
        let values = r.map(|k| self.generator.eval(k, x)).collect();
        BasisEval { offset, values }
    }

    /// `f(x) = sum_k c_k phi_k(x)`.
    pub fn eval(&self, f: &Signal, x: f64) -> f64 {
        debug_assert_eq!(f.len(), self.dim());
        self.basis_at(x).dot(&f.coeffs)
    }

    /// Coefficients of `K(., y)`, i.e. `B phi(y)`.
    pub fn kernel_section(&self, y: f64) -> Signal {
        let phi = self.basis_at(y);
        let n = self.dim();
        let coeffs = (0..n)
            .map(|i| {
                let row = self.gram_inverse.row(i);
                phi.dot(row)
            })
            .collect();
        Signal::new(coeffs)
    }

    /// `K(x, y)`.
    pub fn kernel(&self, x: f64, y: f64) -> f64 {
        let px = self.basis_at(x);
        let py = self.basis_at(y);
        let mut s = 0.0;
        for (a, va) in px.values.iter().enumerate() {
            let row = self.gram_inverse.row(px.offset + a);
            s += va * py.dot(row);
        }
        s
    }

    /// Whole-line window `[floor(t_min) - W, ceil(t_max) + W]` around the
    /// centers of nonzero coefficients; `None` for the zero signal.
    pub fn support_window(&self, f: &Signal) -> Option<(f64, f64)> {
        let first = f.coeffs.iter().position(|c| *c != 0.0)?;
        let last = f.coeffs.iter().rposition(|c| *c != 0.0)?;
        let w = self.quadrature.window_pad;
        Some((
            libm::floor(self.generator.center(first)) - w,
            libm::ceil(self.generator.center(last)) + w,
        ))
    }

    fn sq_integral(&self, f: &Signal, a: f64, b: f64) -> f64 {
        quadrature::simpson(a, b, self.quadrature.step, |x| {
            let v = self.eval(f, x);
            v * v
        })
    }

    /// L2 norm over `region` by composite Simpson.
    pub fn l2_norm(&self, f: &Signal, region: Region) -> f64 {
        let Some((a, b)) = self.support_window(f) else {
            return 0.0;
        };
        let sq = match region {
            Region::WholeLine => self.sq_integral(f, a, b),
            Region::Inside(l) => self.sq_integral(f, -l, l),
            Region::Outside(l) => {
                self.sq_integral(f, a.min(-l), -l) + self.sq_integral(f, l, b.max(l))
            }
        };
        libm::sqrt(sq.max(0.0))
    }

    /// Exact L2 norm `sqrt(c^T A c)` from the closed-form Gram matrix.
    pub fn gram_norm(&self, f: &Signal) -> f64 {
        let ac = self.gram.mul_vec(&f.coeffs);
        libm::sqrt(dot(&f.coeffs, &ac).max(0.0))
    }

    /// `||f||_{2, outside [-L, L]} / ||f||_2`.
    pub fn concentration_ratio(&self, f: &Signal, l: f64) -> Result<f64> {
        let whole = self.l2_norm(f, Region::WholeLine);
        if whole == 0.0 {
            return Err(Error::ZeroSignal);
        }
        Ok((self.l2_norm(f, Region::Outside(l)) / whole).min(1.0))
    }

    /// Probed lower estimates of `||K||_S`, `||omega_delta(K)||_S` and
    /// `||K||_{S,theta}` with `theta = 1`.
    ///
    /// `omega_delta` takes its inner supremum over the stencil
    /// `{0, +-delta/2, +-delta}` in each argument. `K` is symmetric, so the
    /// row integrals suffice for the Schur norm.
    pub fn estimate_schur(&self, delta: f64, grid: &ProbeGrid) -> Result<SchurEstimate> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::Contract("delta must lie in (0, 1]"));
        }
        if grid.x_points.is_empty() || !(grid.y_step > 0.0) {
            return Err(Error::Contract("probe grid needs points and a positive step"));
        }
        let theta = 1.0;
        let mut schur: f64 = 0.0;
        for &x in &grid.x_points {
            let sec = self.kernel_section(x);
            let (a, b) = self.section_window(&[&sec], 0.0);
            schur = schur.max(quadrature::simpson(a, b, grid.y_step, |y| {
                self.eval(&sec, y).abs()
            }));
        }
        let modulus_at = |d: f64| {
            let offs = [-d, -0.5 * d, 0.0, 0.5 * d, d];
            let mut best: f64 = 0.0;
            for &x in &grid.x_points {
                let secs: Vec<Signal> = offs.iter().map(|o| self.kernel_section(x + o)).collect();
                let refs: Vec<&Signal> = secs.iter().collect();
                let (a, b) = self.section_window(&refs, d);
                let centre = &secs[2];
                let v = quadrature::simpson(a, b, grid.y_step, |y| {
                    let k0 = self.eval(centre, y);
                    let mut w: f64 = 0.0;
                    for o in offs {
                        let phi = self.basis_at(y + o);
                        for s in &secs {
                            w = w.max((phi.dot(&s.coeffs) - k0).abs());
                        }
                    }
                    w
                });
                best = best.max(v);
            }
            best
        };
        let modulus = modulus_at(delta);
        let mut sup = modulus / libm::pow(delta, theta);
        for &d in &grid.deltas {
            if d > 0.0 && d <= 1.0 && d != delta {
                sup = sup.max(modulus_at(d) / libm::pow(d, theta));
            }
        }
        Ok(SchurEstimate {
            schur_norm: schur,
            modulus_schur: modulus,
            delta,
            holder_theta: theta,
            combined: schur + sup,
        })
    }

    /// Window outside of which every section is below round-off, widened by
    /// `pad` and the generator support.
    fn section_window(&self, secs: &[&Signal], pad: f64) -> (f64, f64) {
        let peak = secs
            .iter()
            .flat_map(|s| s.coeffs.iter())
            .fold(0.0_f64, |m, c| m.max(c.abs()));
        let cut = 1e-14 * peak;
        let mut lo = usize::MAX;
        let mut hi = 0;
        for s in secs {
            for (k, c) in s.coeffs.iter().enumerate() {
                if c.abs() > cut {
                    lo = lo.min(k);
                    hi = hi.max(k);
                }
            }
        }
        if lo == usize::MAX {
            return (0.0, 0.0);
        }
        let r = self.generator.support_radius() + MAX_JITTER + pad;
        (
            libm::floor(self.generator.center(lo) - r),
            libm::ceil(self.generator.center(hi) + r),
        )
    }
}

fn decay_ratio(b: &Matrix) -> f64 {
    let n = b.dim();
    let b_ref = (0..n).fold(0.0_f64, |m, i| m.max(b[(i, i)].abs()));
    if n < 2 || b_ref == 0.0 {
        return 0.0;
    }
    let floor = 1e-12 * b_ref;
    let mut r: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let v = b[(i, j)].abs();
            if v > floor {
                r = r.max(libm::pow(v / b_ref, 1.0 / (j - i) as f64));
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(lo: i64, hi: i64) -> KernelSpace {
        KernelSpace::make(GeneratorKind::Gaussian, lo, hi, None, QuadratureSpec::default()).unwrap()
    }

    fn hat(lo: i64, hi: i64) -> KernelSpace {
        KernelSpace::make(GeneratorKind::Hat, lo, hi, None, QuadratureSpec::default()).unwrap()
    }

    #[test]
    fn gaussian_gram_entries() {
        let s = gauss(-5, 5);
        for k in 0..10 {
            assert!((s.gram()[(k, k)] - 1.25331).abs() < 1e-5);
            assert!((s.gram()[(k, k + 1)] - 0.76017).abs() < 1e-5);
        }
    }

    #[test]
    fn hat_gram_entries() {
        let s = hat(-5, 5);
        for i in 0..11usize {
            for j in 0..11 {
                let want = match i.abs_diff(j) {
                    0 => 2.0 / 3.0,
                    1 => 1.0 / 6.0,
                    _ => 0.0,
                };
                assert!((s.gram()[(i, j)] - want).abs() <= 1e-14);
            }
        }
        assert!(s.identity_residual() < 1e-10);
    }

    #[test]
    fn hat_inverse_tends_to_toeplitz_limit() {
        // Oracle: the bi-infinite inverse of (1/6) tridiag(1, 4, 1) has
        // central entry sqrt(3) and neighbour ratio -(2 - sqrt(3)).
        let s = hat(-200, 200);
        let b = s.gram_inverse();
        let c = 200;
        assert!((b[(c, c)] - 3f64.sqrt()).abs() < 1e-10);
        assert!((b[(c, c + 1)] / b[(c, c)] + (2.0 - 3f64.sqrt())).abs() < 1e-10);
        assert!((s.kernel(0.0, 0.0) - 3f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn jitter_rules() {
        assert!(KernelSpace::make(GeneratorKind::Hat, 0, 3, Some(1), QuadratureSpec::default())
            .is_err());
        assert!(Generator::gaussian_with_jitter(0, 1, vec![0.0, 0.2]).is_err());
        assert!(Generator::new(GeneratorKind::Hat, 2, 1).is_err());
        let s = KernelSpace::make(GeneratorKind::Gaussian, -10, 10, Some(3), QuadratureSpec::default())
            .unwrap();
        assert!(s.generator().jitter().iter().all(|t| t.abs() <= MAX_JITTER));
        assert!(s.generator().jitter().iter().any(|t| *t != 0.0));
        assert!(s.identity_residual() < 1e-10);
    }

    #[test]
    fn decay_ratio_bounds_entries() {
        let s = KernelSpace::make(GeneratorKind::Gaussian, -15, 15, Some(9), QuadratureSpec::default())
            .unwrap();
        let r = s.decay_ratio();
        assert!(r > 0.0 && r < 1.0, "r = {r}");
        let b = s.gram_inverse();
        let b_ref = (0..s.dim()).map(|i| b[(i, i)]).fold(0.0, f64::max);
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let k = i.abs_diff(j) as f64;
                assert!(b[(i, j)].abs() <= b_ref * r.powf(k) * (1.0 + 1e-12) + 1e-12 * b_ref);
            }
        }
    }

    #[test]
    fn signal_evaluation() {
        let h = hat(-5, 5);
        let e0 = h.unit(0).unwrap();
        assert_eq!(h.eval(&e0, 0.0), 1.0);
        assert_eq!(h.eval(&e0, 1.0), 0.0);
        assert_eq!(h.eval(&e0, -1.0), 0.0);
        let g = gauss(-5, 5);
        let e0 = g.unit(0).unwrap();
        assert_eq!(g.eval(&e0, 0.0), 1.0);
        assert!((g.eval(&e0, 1.0) - (-1f64).exp()).abs() < 1e-15);
        let z = g.zero();
        for x in [-3.0, 0.1, 4.4] {
            assert_eq!(g.eval(&z, x), 0.0);
        }
        assert!(g.unit(6).is_err());
    }

    #[test]
    fn kernel_symmetry() {
        let g = KernelSpace::make(GeneratorKind::Gaussian, -12, 12, Some(5), QuadratureSpec::default())
            .unwrap();
        for (x, y) in [(0.3, -1.7), (2.2, 2.9), (-4.0, 5.5)] {
            assert!((g.kernel(x, y) - g.kernel(y, x)).abs() < 1e-12);
            assert!((g.kernel(x, y) - g.eval(&g.kernel_section(y), x)).abs() < 1e-12);
        }
    }

    #[test]
    fn norms() {
        let h = hat(-5, 5);
        let e0 = h.unit(0).unwrap();
        let n = h.l2_norm(&e0, Region::WholeLine);
        assert!((n - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(h.concentration_ratio(&e0, 2.0).unwrap(), 0.0);
        let z = h.zero();
        for r in [Region::WholeLine, Region::Inside(2.0), Region::Outside(2.0)] {
            assert_eq!(h.l2_norm(&z, r), 0.0);
        }
        assert_eq!(h.concentration_ratio(&z, 2.0), Err(Error::ZeroSignal));
    }

    #[test]
    fn gaussian_tail_ratio() {
        // Oracle: sqrt(erfc(sqrt(2) L)) is the exact outside/whole ratio of
        // exp(-x^2) on [-L, L]; values from a high-precision erfc.
        let g = gauss(-20, 20);
        let e0 = g.unit(0).unwrap();
        let r1 = g.concentration_ratio(&e0, 1.0).unwrap();
        assert!((r1 - 0.213_307_908_658_722_4).abs() < 1e-9, "{r1}");
        let r2 = g.concentration_ratio(&e0, 2.0).unwrap();
        assert!((r2 - 0.007_958_799_134_683_557).abs() < 1e-9, "{r2}");
    }

    #[test]
    fn pythagorean_split() {
        let g = KernelSpace::make(GeneratorKind::Gaussian, -12, 12, Some(2), QuadratureSpec::default())
            .unwrap();
        let f = Signal::new((0..g.dim()).map(|k| ((k * 7 % 5) as f64 - 2.0) / 3.0).collect());
        let w = g.l2_norm(&f, Region::WholeLine);
        let i = g.l2_norm(&f, Region::Inside(4.5));
        let o = g.l2_norm(&f, Region::Outside(4.5));
        assert!((i * i + o * o - w * w).abs() <= 1e-8 * w * w);
        assert!((w - g.gram_norm(&f)).abs() <= 1e-10 * w);
    }

    #[test]
    fn rank_one_schur_norm() {
        // One Gaussian element normalized in L2: K(x,y) = phi(x) phi(y) with
        // phi = (2/pi)^{1/4} exp(-x^2), so ||K||_S = ||phi||_inf ||phi||_1 = sqrt(2).
        let g = gauss(0, 0);
        let grid = ProbeGrid {
            x_points: vec![0.0],
            y_step: 0.01,
            deltas: vec![],
        };
        let est = g.estimate_schur(0.5, &grid).unwrap();
        assert!((est.schur_norm - 2f64.sqrt()).abs() < 1e-9);
        assert!(est.combined >= est.schur_norm);
        assert!(est.modulus_schur > 0.0);
    }

    #[test]
    fn modulus_shrinks_with_delta() {
        let g = gauss(-10, 10);
        let grid = ProbeGrid {
            x_points: vec![0.0, 0.5],
            y_step: 0.02,
            deltas: vec![],
        };
        let big = g.estimate_schur(0.5, &grid).unwrap().modulus_schur;
        let small = g.estimate_schur(1e-3, &grid).unwrap().modulus_schur;
        let tiny = g.estimate_schur(1e-5, &grid).unwrap().modulus_schur;
        assert!(small < big && tiny < small && tiny < 1e-3);
        assert!(g.estimate_schur(0.0, &grid).is_err());
    }
}
