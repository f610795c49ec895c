use dsos_core::edge::{
    airy_process_kernel, extended_matrix, fredholm_det_airy, fredholm_det_airy_fixed, johnstone_check,
    tracy_widom_cdf, KernelForm,
};
use dsos_core::kernel::{kernel_k, KernelContext};
use dsos_core::edge::ScalingFrame;
use dsos_core::QuadratureRule;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn single_time_forms_agree() {
    for v in [-3.0, -1.0, 0.5] {
        let closed = fredholm_det_airy_fixed(&[0.0], &[v], 48, 14.0, KernelForm::ClosedForm).unwrap();
        let quad = fredholm_det_airy_fixed(&[0.0], &[v], 48, 14.0, KernelForm::Quadrature).unwrap();
        assert!((closed - quad).abs() < 1e-10, "{v}: {closed} vs {quad}");
    }
}

#[test]
fn factorizes_at_large_separation() {
    let q = QuadratureRule::default();
    let (v1, v2) = (-1.0, 0.0);
    let joint = fredholm_det_airy(&[0.0, 40.0], &[v1, v2], &q).unwrap();
    let prod = tracy_widom_cdf(v1).unwrap() * tracy_widom_cdf(v2).unwrap();
    assert!((joint.value - prod).abs() < 1e-4, "{} vs {prod}", joint.value);
}

#[test]
fn two_time_bounds() {
    let q = QuadratureRule::default();
    let (v1, v2) = (-1.5, -0.5);
    let joint = fredholm_det_airy(&[0.0, 0.5], &[v1, v2], &q).unwrap().value;
    let (f1, f2) = (tracy_widom_cdf(v1).unwrap(), tracy_widom_cdf(v2).unwrap());
    // Positively correlated maxima: product <= joint <= min.
    assert!(joint <= f1.min(f2) + 1e-9, "{joint} {f1} {f2}");
    assert!(joint >= f1 * f2 - 1e-9, "{joint} {f1} {f2}");
    let raised = fredholm_det_airy(&[0.0, 0.5], &[v1, v2 + 1.0], &q).unwrap().value;
    assert!(raised > joint);
}

#[test]
fn conjugation_leaves_determinants_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let pts: Vec<(f64, f64)> = (0..3).map(|_| (rng.random_range(-2.0..1.5), rng.random_range(-1.0..1.0))).collect();
        let f: Vec<f64> = (0..3).map(|_| rng.random_range(0.1..10.0)).collect();
        let k = DMatrix::from_fn(3, 3, |i, j| airy_process_kernel(pts[i].0, pts[i].1, pts[j].0, pts[j].1).unwrap());
        let g = DMatrix::from_fn(3, 3, |i, j| f[i] / f[j] * k[(i, j)]);
        assert!((k.determinant() - g.determinant()).abs() < 1e-12);
    }
}

#[test]
fn extended_blocks_are_consistent() {
    let xs = [-1.0, 0.0, 0.7];
    let m = extended_matrix(&xs, 0.3, &xs, 0.3).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(m[(i, j)], m[(j, i)]);
        }
    }
}

#[test]
fn johnstone_error_decays() {
    let xs: Vec<f64> = (0..=80).map(|k| -2.0 + 0.05 * k as f64).collect();
    let err = |n: usize| {
        xs.iter()
            .map(|&x| {
                let (p, a) = johnstone_check(n, n as f64, n as f64, x).unwrap();
                (p - a).abs()
            })
            .fold(0.0, f64::max)
    };
    let e: Vec<f64> = [20, 40, 80].iter().map(|&n| err(n)).collect();
    assert!(e[0] > e[1] && e[1] > e[2]);
    let c: Vec<f64> = [20.0f64, 40.0, 80.0].iter().zip(&e).map(|(n, e)| e * n.powf(2.0 / 3.0)).collect();
    let (lo, hi) = c.iter().fold((f64::MAX, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
    assert!(hi / lo < 2.0, "{c:?}");
}

#[test]
fn johnstone_envelope() {
    for n in [20usize, 40, 80] {
        // X up to 2 keeps the point inside (0, 1) for n >= 20.
        for k in 1..=20 {
            let x = 0.1 * k as f64;
            let (p, a) = johnstone_check(n, n as f64, n as f64, x).unwrap();
            assert!((p - a).abs() <= 2.0 * (n as f64).powf(-2.0 / 3.0) * (-x / 2.0).exp(), "n = {n}, X = {x}");
        }
    }
}

// On one line the scaled finite-n kernel tends to the Airy kernel.
#[test]
fn finite_kernel_tends_to_airy() {
    let s = 0.5;
    let mut errs = Vec::new();
    for n in [40usize, 80] {
        let ctx = KernelContext::new(n).unwrap();
        let frame = ScalingFrame::uniform(s, n).unwrap();
        let l = (s * n as f64) as usize;
        let scale = frame.sigma / (n as f64).powf(2.0 / 3.0);
        let mut worst = 0.0f64;
        for x in [-1.0, 0.0, 1.0] {
            for y in [-1.0, 0.0, 1.0] {
                let u = frame.to_raw(x);
                let v = frame.to_raw(y);
                let kuv = kernel_k(&ctx, l, u, l, v).unwrap();
                let kvu = kernel_k(&ctx, l, v, l, u).unwrap();
                let kx = kernel_k(&ctx, l, u, l, u).unwrap();
                let ky = kernel_k(&ctx, l, v, l, v).unwrap();
                // Conjugation-free comparison: 2x2 determinants and diagonal values.
                let det_n = (kx * ky - kuv * kvu) * scale * scale;
                let ax = airy_process_kernel(x, 0.0, x, 0.0).unwrap();
                let ay = airy_process_kernel(y, 0.0, y, 0.0).unwrap();
                let axy = airy_process_kernel(x, 0.0, y, 0.0).unwrap();
                worst = worst.max((kx * scale - ax).abs()).max((det_n - (ax * ay - axy * axy)).abs());
            }
        }
        errs.push(worst);
    }
    assert!(errs[1] < errs[0], "{errs:?}");
    assert!(errs[1] < 0.1, "{errs:?}");
}
