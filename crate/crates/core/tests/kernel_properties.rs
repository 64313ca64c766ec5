use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rks_core::quadrature::simpson;
use rks_core::{GeneratorKind, KernelSpace, ProbeGrid, QuadratureSpec, Region, Signal};

fn jittered(lo: i64, hi: i64, seed: u64) -> KernelSpace {
    KernelSpace::make(GeneratorKind::Gaussian, lo, hi, Some(seed), QuadratureSpec::default()).unwrap()
}

fn random_signal(space: &KernelSpace, rng: &mut ChaCha8Rng) -> Signal {
    Signal::new((0..space.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

#[test]
fn gaussian_gram_matches_product_integral() {
    let space = jittered(-12, 12, 5);
    let g = space.generator();
    let root_half_pi = (std::f64::consts::PI / 2.0).sqrt();
    for a in 0..space.dim() {
        for b in 0..space.dim() {
            let d = g.center(a) - g.center(b);
            let want = root_half_pi * (-d * d / 2.0).exp();
            assert!((space.gram()[(a, b)] - want).abs() < 1e-12);
        }
    }
    // the same entries by brute quadrature of phi_a phi_b
    for (a, b) in [(12, 12), (12, 13), (3, 5)] {
        let q = simpson(-30.0, 30.0, 0.005, |x| g.eval(a, x) * g.eval(b, x));
        assert!((space.gram()[(a, b)] - q).abs() < 1e-10);
    }
}

#[test]
fn reproducing_property_on_interior_probes() {
    let space = jittered(-20, 20, 11);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3 {
        let f = random_signal(&space, &mut rng);
        let norm = space.gram_norm(&f);
        for k in 0..15 {
            let x = -14.0 + 2.0 * k as f64 + rng.gen_range(-0.5..0.5);
            let sec = space.kernel_section(x);
            let integral = simpson(-32.0, 32.0, 0.01, |y| space.eval(&sec, y) * space.eval(&f, y));
            assert!(
                (integral - space.eval(&f, x)).abs() <= 1e-6 * norm,
                "x = {x}: {integral} vs {}",
                space.eval(&f, x)
            );
        }
    }
}

#[test]
fn kernel_is_idempotent() {
    let space = jittered(-20, 20, 12);
    let probes = [-12.3, -4.0, 0.0, 0.37, 6.5, 13.1];
    for &x in &probes {
        let sx = space.kernel_section(x);
        for &y in &probes {
            let sy = space.kernel_section(y);
            let integral = simpson(-32.0, 32.0, 0.01, |z| space.eval(&sx, z) * space.eval(&sy, z));
            let scale = (space.kernel(x, x) * space.kernel(y, y)).sqrt();
            assert!((integral - space.kernel(x, y)).abs() <= 1e-6 * scale);
        }
    }
}

#[test]
fn sup_norm_is_controlled_by_schur_estimate() {
    let space = jittered(-15, 15, 2);
    let est = space
        .estimate_schur(1.0, &ProbeGrid::centered(&space, 11, 0.01))
        .unwrap();
    let k = 1.1 * est.combined;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let f = random_signal(&space, &mut rng);
        let sup = (0..6000)
            .map(|i| space.eval(&f, -30.0 + 0.01 * i as f64).abs())
            .fold(0.0_f64, f64::max);
        let l2 = space.l2_norm(&f, Region::WholeLine);
        assert!(sup <= k / 2.0_f64.sqrt() * l2, "{sup} vs {}", k / 2.0_f64.sqrt() * l2);
    }
    assert!(est.schur_norm >= 1.0 && est.combined > est.schur_norm);
}

#[test]
fn hat_schur_norm_is_finite_and_above_one() {
    let space = KernelSpace::make(GeneratorKind::Hat, -15, 15, None, QuadratureSpec::default()).unwrap();
    let est = space.estimate_schur(0.5, &ProbeGrid::centered(&space, 5, 0.01)).unwrap();
    // K(x, .) reproduces constants on the interior, so its L1 norm is at least 1
    assert!(est.schur_norm >= 1.0 - 1e-9);
    assert!(est.combined.is_finite());
}

#[test]
fn inside_outside_split_is_pythagorean() {
    let space = jittered(-30, 30, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for l in [3.0, 10.5, 20.0] {
        let f = random_signal(&space, &mut rng);
        let w = space.l2_norm(&f, Region::WholeLine);
        let i = space.l2_norm(&f, Region::Inside(l));
        let o = space.l2_norm(&f, Region::Outside(l));
        assert!((i * i + o * o - w * w).abs() <= 1e-8 * w * w);
        // exact Gram norm agrees with quadrature
        assert!((space.gram_norm(&f) - w).abs() <= 1e-9 * w);
    }
}
