use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rks_core::bounds::{c0_and_error, TheoryParams};
use rks_core::family::make_concentrated_signal;
use rks_core::reconstruct::{
    apply_s, iterate, preconstruct, required_iterations, sample_signal, stability_margins,
    IterationRule,
};
use rks_core::sampling::{random_interior, weighted_sample_norm};
use rks_core::{
    ExteriorGrid, GeneratorKind, KernelSpace, Mode, ProbeGrid, QuadratureSpec, Region, SampleRecord,
    SamplingSet, Signal,
};

fn space(half: i64, seed: u64) -> KernelSpace {
    KernelSpace::make(GeneratorKind::Gaussian, -half, half, Some(seed), QuadratureSpec::default()).unwrap()
}

/// Lattice of spacing `h` on `[-l, l]` with each point moved by up to
/// `jitter * h`.
fn lattice(l: f64, h: f64, jitter: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = (2.0 * l / h).round() as usize;
    (0..n)
        .map(|k| -l + (k as f64 + 0.5) * h + rng.gen_range(-jitter..=jitter) * h)
        .collect()
}

fn max_rel_gap(a: &Signal, b: &Signal) -> f64 {
    let scale = a.coeffs.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
    a.coeffs
        .iter()
        .zip(&b.coeffs)
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
        / scale
}

#[test]
fn preconstruction_and_frame_operator_are_linear() {
    let s = space(25, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let set = random_interior(5.0, 60, &mut rng)
        .unwrap()
        .with_exterior(ExteriorGrid::new(5.0, 0.1, 20.0).unwrap());
    let y1: Vec<f64> = (0..set.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let y2: Vec<f64> = (0..set.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let (a, b) = (0.7, -2.3);
    let recs = |y: &[f64]| -> Vec<SampleRecord> {
        set.interior
            .iter()
            .zip(&set.interior_weights)
            .zip(y)
            .map(|((&position, &weight), &value)| SampleRecord { position, weight, value })
            .collect()
    };
    let mix: Vec<f64> = y1.iter().zip(&y2).map(|(u, v)| a * u + b * v).collect();
    let lhs = preconstruct(&s, &recs(&mix)).unwrap();
    let rhs = preconstruct(&s, &recs(&y1)).unwrap().scale(a).axpy(b, &preconstruct(&s, &recs(&y2)).unwrap());
    assert!(max_rel_gap(&lhs, &rhs) < 1e-12);

    let f = Signal::new((0..s.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect());
    let g = Signal::new((0..s.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect());
    let lhs = apply_s(&s, &set, &f.scale(a).axpy(b, &g));
    let rhs = apply_s(&s, &set, &f).scale(a).axpy(b, &apply_s(&s, &set, &g));
    assert!(max_rel_gap(&lhs, &rhs) < 1e-12);
}

#[test]
fn coefficients_match_pointwise_kernel_sums() {
    let s = space(25, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let set = random_interior(6.0, 50, &mut rng)
        .unwrap()
        .with_exterior(ExteriorGrid::new(6.0, 0.2, 10.0).unwrap());
    let f = make_concentrated_signal(&s, 6.0, 0.4, &mut rng).unwrap();
    let samples = sample_signal(&s, &set, &f, None).unwrap();
    let g0 = preconstruct(&s, &samples).unwrap();
    let sf = apply_s(&s, &set, &f);
    for _ in 0..20 {
        let x = rng.gen_range(-15.0..15.0);
        let direct: f64 = samples.iter().map(|r| r.weight * r.value * s.kernel(x, r.position)).sum();
        let via = s.eval(&g0, x);
        assert!((direct - via).abs() <= 1e-8 * direct.abs().max(1.0));
        let direct_s: f64 = set
            .weighted_points()
            .map(|(p, w)| w * s.eval(&f, p) * s.kernel(x, p))
            .sum();
        let via_s = s.eval(&sf, x);
        assert!((direct_s - via_s).abs() <= 1e-8 * direct_s.abs().max(1.0));
    }
}

fn frame_error(s: &KernelSpace, f: &Signal, h: f64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let set = SamplingSet::from_interior(10.0, lattice(10.0, h, 0.3, &mut rng))
        .unwrap()
        .with_exterior(ExteriorGrid::new(10.0, h, 25.0).unwrap());
    let diff = &apply_s(s, &set, f) - f;
    s.gram_norm(&diff) / s.gram_norm(f)
}

#[test]
fn frame_operator_approaches_identity_on_dense_sets() {
    let s = space(30, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = make_concentrated_signal(&s, 10.0, 0.0, &mut rng).unwrap();
    let e1 = frame_error(&s, &f, 0.05, 7);
    let e2 = frame_error(&s, &f, 0.025, 7);
    assert!(e1 <= 0.02, "{e1}");
    assert!(e2 <= 0.5 * e1, "{e2} vs {e1}");
}

fn log_linear_fit(ys: &[f64]) -> (f64, f64) {
    let n = ys.len() as f64;
    let xs: Vec<f64> = (1..=ys.len()).map(|k| k as f64).collect();
    let ls: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ls.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ls).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ls.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    (slope.exp(), sxy * sxy / (sxx * syy))
}

#[test]
fn full_information_iteration_converges_geometrically() {
    let s = space(30, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = make_concentrated_signal(&s, 10.0, 0.0, &mut rng).unwrap();
    // coarse jittered lattice: slow enough contraction to stay above round-off
    let set = SamplingSet::from_interior(10.0, lattice(10.0, 0.4, 0.45, &mut rng))
        .unwrap()
        .with_exterior(ExteriorGrid::new(10.0, 0.4, 25.0).unwrap());
    let run = iterate(&s, &set, &[], 8, Mode::OracleEverywhere(&f)).unwrap();
    let floor = 1e-11 * s.gram_norm(&f);
    let above: Vec<f64> = run.residual_norms.iter().copied().take_while(|r| *r > floor).collect();
    assert!(above.len() >= 4, "{:?}", run.residual_norms);
    let (ratio, r2) = log_linear_fit(&above);
    assert!(ratio < 1.0 && r2 > 0.99, "ratio {ratio}, r2 {r2}, {:?}", run.residual_norms);
    let err = s.gram_norm(&(run.last() - &f)) / s.gram_norm(&f);
    assert!(err < 1e-6, "{err}");
}

#[test]
fn stability_chain_on_random_pairs() {
    let s = space(30, 10);
    let k = 1.1
        * s.estimate_schur(1.0, &ProbeGrid::centered(&s, 11, 0.01))
            .unwrap()
            .combined;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let l = 8.0;
    let mut inside = 0;
    for t in 0..30 {
        let f = make_concentrated_signal(&s, l, 0.2, &mut rng).unwrap();
        let g = make_concentrated_signal(&s, l, 0.6, &mut rng).unwrap();
        let eps = s.concentration_ratio(&f, l).unwrap().max(s.concentration_ratio(&g, l).unwrap());
        let n = 50 + 120 * t;
        let set = random_interior(l, n, &mut rng).unwrap();
        let m = stability_margins(&s, &set, &f, &g, eps, k);
        assert!(m.middle <= m.upper, "upper side fails at N = {n}");
        if m.hypothesis_holds {
            inside += 1;
            assert!(m.chain_holds(), "{m:?}");
        }
    }
    assert!(inside > 0);
}

struct DenseCase {
    space: KernelSpace,
    set: SamplingSet,
    f: Signal,
    eps: f64,
    k: f64,
}

fn dense_case() -> DenseCase {
    let space = space(25, 12);
    let k = 1.1
        * space
            .estimate_schur(1.0, &ProbeGrid::centered(&space, 11, 0.01))
            .unwrap()
            .combined;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let l = 5.0;
    let f = make_concentrated_signal(&space, l, 0.0, &mut rng).unwrap();
    let eps = space.concentration_ratio(&f, l).unwrap();
    let h = 0.5 / (k * k);
    let ext_gap = (2.0 * (eps / k).min(0.5 / (k * k))).min(h);
    let set = SamplingSet::from_interior(l, lattice(l, h, 0.2, &mut rng))
        .unwrap()
        .with_exterior(ExteriorGrid::new(l, ext_gap, 20.0).unwrap());
    DenseCase { space, set, f, eps, k }
}

#[test]
fn error_bounds_hold_on_dense_sets() {
    let c = dense_case();
    let s = &c.space;
    let params = TheoryParams {
        k_norm: c.k,
        eps: c.eps,
        ..TheoryParams::interval(5.0)
    };
    let d_h = c.set.hausdorff;
    let factors = c0_and_error(&params, d_h).expect("dense set satisfies the hypothesis");
    let n_req = required_iterations(c.eps, c.k, 1.0, d_h, IterationRule::General).unwrap() as usize;
    let n_run = n_req.max(1) + 2;
    let samples = sample_signal(s, &c.set, &c.f, None).unwrap();
    let run = iterate(s, &c.set, &samples, n_run, Mode::InteriorOnly).unwrap();
    let fnorm = s.l2_norm(&c.f, Region::WholeLine);
    for g in &run.iterates[n_req.max(1)..] {
        let err = s.l2_norm(&(g - &c.f), Region::WholeLine);
        assert!(err <= factors.det_error_factor * fnorm);
        assert!(s.concentration_ratio(g, 5.0).unwrap() <= factors.concentration_factor);
        let diff: Vec<f64> = c.set.interior.iter().map(|&x| s.eval(g, x) - s.eval(&c.f, x)).collect();
        let wn = weighted_sample_norm(&diff, &c.set.interior_weights).unwrap();
        assert!(wn <= factors.sample_difference_factor * fnorm);
    }

    // deterministic noise
    let xi: Vec<f64> = c.set.interior.iter().map(|x| 0.02 * (3.0 * x).sin()).collect();
    let noisy = sample_signal(s, &c.set, &c.f, Some(&xi)).unwrap();
    let run = iterate(s, &c.set, &noisy, n_run, Mode::InteriorNoisy).unwrap();
    let xi_norm = weighted_sample_norm(&xi, &c.set.interior_weights).unwrap();
    for g in &run.iterates[n_req.max(1)..] {
        let err = s.l2_norm(&(g - &c.f), Region::WholeLine);
        assert!(err <= factors.det_error_factor * fnorm + factors.noisy_noise_factor * xi_norm);
    }
}

#[test]
fn interior_only_iteration_improves_on_preconstruction() {
    let s = space(30, 14);
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let l = 10.0;
    let f = make_concentrated_signal(&s, l, 0.8, &mut rng).unwrap();
    let set = rks_core::sampling::deterministic_interior(l, &mut rng)
        .unwrap()
        .with_exterior(ExteriorGrid::new(l, 0.05, 10.0).unwrap());
    let samples = sample_signal(&s, &set, &f, None).unwrap();
    let run = iterate(&s, &set, &samples, 3, Mode::InteriorOnly).unwrap();
    let e0 = rks_core::reconstruct::rae(&s, &run.iterates[0], &f).unwrap();
    let e3 = rks_core::reconstruct::rae(&s, run.last(), &f).unwrap();
    assert!(e3 < e0, "{e3} vs {e0}");
}
