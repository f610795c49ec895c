use dsos_core::quadrature::GaussLegendre;
use dsos_core::shape::{boundary_profiles, density_rho1, shape_height, solve_shape, support_bounds, surface_grid};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `int_{c_S}^{h} rho_1(y, S) dy` after `y = m - r cos(theta)`, which removes
/// the square-root endpoint.
fn count_below(h: f64, s: f64) -> f64 {
    let (c, d) = support_bounds(s).unwrap();
    let (m, r) = (0.5 * (c + d), 0.5 * (d - c));
    let top = ((m - h) / r).clamp(-1.0, 1.0).acos();
    GaussLegendre::new(200).integrate(0.0, top, |th| density_rho1(m - r * th.cos(), s) * r * th.sin())
}

#[test]
fn height_solves_the_counting_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let (x, y): (f64, f64) = (rng.random_range(0.02..0.98), rng.random_range(0.02..0.98));
        let h = shape_height(x, y).unwrap();
        let s = 1.0 + x.min(y) - x.max(y);
        let err = (count_below(h, s) - x.min(y)).abs();
        assert!(err < 1e-8, "({x}, {y}): residual {err}");
    }
}

#[test]
fn density_has_unit_mass_per_unit_line_length() {
    // line S carries S sites per N on its short side
    for s in [0.2, 0.5, 1.0] {
        let (_, d) = support_bounds(s).unwrap();
        assert!((count_below(d, s) - s).abs() < 1e-10);
    }
}

proptest! {
    #[test]
    fn monotone_in_both_coordinates(x in 0.0f64..0.95, y in 0.0f64..0.95, dx in 0.001f64..0.05) {
        let h = shape_height(x, y).unwrap();
        prop_assert!(shape_height(x + dx, y).unwrap() >= h - 1e-12);
        prop_assert!(shape_height(x, y + dx).unwrap() >= h - 1e-12);
    }

    #[test]
    fn transpose_and_rotation_symmetry(x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
        let h = shape_height(x, y).unwrap();
        prop_assert!((shape_height(y, x).unwrap() - h).abs() < 1e-12);
        prop_assert!((shape_height(1.0 - y, 1.0 - x).unwrap() - (1.0 - h)).abs() < 1e-10);
    }

    #[test]
    fn height_stays_in_line_support(x in 0.01f64..0.99, y in 0.01f64..0.99) {
        let p = solve_shape(x, y).unwrap();
        let (c, d) = support_bounds(1.0 + x.min(y) - x.max(y)).unwrap();
        prop_assert!(p.h >= c - 1e-12 && p.h <= d + 1e-12);
    }
}

#[test]
fn edges_match_profiles() {
    for k in 0..=10 {
        let t = k as f64 / 10.0;
        let b = boundary_profiles(t).unwrap();
        assert!((shape_height(t, 1.0).unwrap() - b.top).abs() < 1e-12);
        assert!((shape_height(1.0, t).unwrap() - b.right).abs() < 1e-12);
        assert!((shape_height(t, 0.0).unwrap() - b.bottom).abs() < 1e-12);
        assert!((shape_height(0.0, t).unwrap() - b.left).abs() < 1e-12);
    }
    assert!(shape_height(1.2, 0.5).is_err());
    assert!(boundary_profiles(-0.1).is_err());
}

#[test]
fn surface_covers_the_square() {
    let g = surface_grid(11).unwrap();
    assert_eq!(g.len(), 121);
    assert_eq!(g[0].h, 0.0);
    assert!((g[120].h - 1.0).abs() < 1e-12);
    // antidiagonal x + y = 1 sits at height 1/2
    for p in g.iter().filter(|p| (p.x + p.y - 1.0).abs() < 1e-12) {
        assert!((p.h - 0.5).abs() < 1e-12);
    }
    assert!(surface_grid(1).is_err());
}
