//! Limit shape of the uniform-height surface.
//!
//! The diagonal through `(x, y)` of the unit square is indexed by
//! `S = 1 + x - y`; along it the heights fill the interval `[c_S, d_S]` with
//! the density [`density_rho1`], and the height at scaled position
//! `t = x / S` is the point below which `tS` particles lie.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::HeightDistribution;

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 2.0) {
        return Err(Error::domain(format!("scaled line S = {s} outside (0, 2)")));
    }
    Ok(())
}

/// `(c_S, d_S) = (1/2 -+ sqrt(S(2-S))/2)`.
pub fn support_bounds(s: f64) -> Result<(f64, f64)> {
    check_s(s)?;
    let half = 0.5 * (s * (2.0 - s)).sqrt();
    Ok((0.5 - half, 0.5 + half))
}

/// Limiting density (per `N`) of heights on line `S`; zero off the open support.
pub fn density_rho1(y: f64, s: f64) -> f64 {
    let Ok((c, d)) = support_bounds(s) else {
        return 0.0;
    };
    if !(y > c && y < d) {
        return 0.0;
    }
    ((d - y) * (y - c)).sqrt() / (PI * y * (1.0 - y))
}

/// Closed form of `int_{c_S}^{h} rho_1` in terms of `v = (2h - 1)/sqrt(S(2-S))`,
/// valid for `0 < S <= 1`.
pub fn shape_count(v: f64, s: f64) -> f64 {
    let v = v.clamp(-1.0, 1.0);
    let r = (1.0 - s).abs();
    let inner = if v.abs() == 1.0 {
        v.signum() * FRAC_PI_2
    } else {
        (r * v / (1.0 - v * v).sqrt()).atan()
    };
    (v.asin() + FRAC_PI_2 - r * (inner + FRAC_PI_2)) / PI
}

/// Interior height with the solver diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapePoint {
    pub x: f64,
    pub y: f64,
    pub s: f64,
    pub t: f64,
    pub v: f64,
    pub h: f64,
    /// Set when the root sits on the edge of the support (no sign change).
    pub boundary: bool,
}

const V_EPS: f64 = 1e-12;

/// Solves the implicit height equation at `(x, y)` in the closed unit square.
pub fn solve_shape(x: f64, y: f64) -> Result<ShapePoint> {
    if !((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y)) {
        return Err(Error::domain(format!("({x}, {y}) outside the unit square")));
    }
    // Lines with S > 1 are the mirror images of lines with S < 1.
    let (a, b) = if x > y { (y, x) } else { (x, y) };
    let s = 1.0 + a - b;
    let dt = (s * (2.0 - s)).sqrt();
    if s <= 0.0 || dt < 1e-300 {
        return Ok(ShapePoint { x, y, s: 1.0 + x - y, t: 0.5, v: 0.0, h: 0.5, boundary: true });
    }
    let t = a / s;
    let target = t * s;
    let f = |v: f64| shape_count(v, s) - target;
    let (mut lo, mut hi) = (-1.0 + V_EPS, 1.0 - V_EPS);
    let (flo, fhi) = (f(lo), f(hi));
    let (v, boundary) = if a == 0.0 || flo >= 0.0 {
        (-1.0, true)
    } else if b == 1.0 || fhi <= 0.0 {
        (1.0, true)
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let fm = f(mid);
            // f is flat near v = +-1, so stop on the bracket width rather than the residual
            if fm == 0.0 || hi - lo <= 1e-15 {
                lo = mid;
                hi = mid;
                break;
            }
            if fm < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (0.5 * (lo + hi), false)
    };
    Ok(ShapePoint {
        x,
        y,
        s: 1.0 + x - y,
        t: x / (1.0 + x - y),
        v,
        h: 0.5 * (1.0 + v * dt),
        boundary,
    })
}

/// Limiting height `h(x, y)`.
pub fn shape_height(x: f64, y: f64) -> Result<f64> {
    solve_shape(x, y).map(|p| p.h)
}

/// Heights along the four edges of the square at coordinate `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryProfiles {
    /// `h(x, 1)`
    pub top: f64,
    /// `h(1, x)`
    pub right: f64,
    /// `h(x, 0)`
    pub bottom: f64,
    /// `h(0, x)`
    pub left: f64,
}

pub fn boundary_profiles(x: f64) -> Result<BoundaryProfiles> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("edge coordinate {x} outside [0, 1]")));
    }
    let up = 0.5 * (1.0 + (x * (2.0 - x)).sqrt());
    let down = 0.5 * (1.0 - (1.0 - x * x).sqrt());
    Ok(BoundaryProfiles {
        top: up,
        right: up,
        bottom: down,
        left: down,
    })
}

/// Support of line `S` for heights with law `d`: the quantiles of `(c_S, d_S)`.
pub fn support_general(s: f64, d: &HeightDistribution) -> Result<(f64, f64)> {
    let (c, dd) = support_bounds(s)?;
    let (lo, hi) = (d.quantile(c), d.quantile(dd));
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::domain(format!(
            "support of line S = {s} is unbounded for {}",
            d.label()
        )));
    }
    Ok((lo, hi))
}

/// Surface sample `(x, y, h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub x: f64,
    pub y: f64,
    pub h: f64,
}

/// Heights on the `resolution x resolution` grid `{k / (resolution - 1)}^2`.
pub fn surface_grid(resolution: usize) -> Result<Vec<SurfacePoint>> {
    if resolution < 2 {
        return Err(Error::invalid("surface resolution must be at least 2"));
    }
    let step = 1.0 / (resolution - 1) as f64;
    let mut out = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            let (x, y) = (j as f64 * step, i as f64 * step);
            out.push(SurfacePoint { x, y, h: shape_height(x, y)? });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_adaptive;

    #[test]
    fn support_examples() {
        assert_eq!(support_bounds(1.0).unwrap(), (0.0, 1.0));
        let (c, d) = support_bounds(0.5).unwrap();
        let r = 3f64.sqrt() / 4.0;
        assert!((c - (0.5 - r)).abs() < 1e-15 && (d - (0.5 + r)).abs() < 1e-15);
        assert_eq!(support_bounds(0.3).unwrap(), support_bounds(1.7).unwrap());
        assert!(support_bounds(0.0).is_err());
        assert!(support_bounds(2.5).is_err());
    }

    #[test]
    fn density_values_and_mass() {
        assert!((density_rho1(0.5, 1.0) - 2.0 / PI).abs() < 1e-15);
        assert_eq!(density_rho1(0.01, 0.5), 0.0);
        for &s in &[0.2, 0.5, 1.0, 1.4] {
            let (c, d) = support_bounds(s).unwrap();
            let (mid, half) = (0.5 * (c + d), 0.5 * (d - c));
            let mass = integrate_adaptive(
                |th| {
                    let y = mid - half * th.cos();
                    density_rho1(y, s) * half * th.sin()
                },
                0.0,
                PI,
                1e-12,
            )
            .unwrap();
            assert!((mass - s.min(2.0 - s)).abs() < 1e-8, "S={s}: {mass}");
            assert!((density_rho1(0.3, s) - density_rho1(0.7, s)).abs() < 1e-14);
        }
    }

    #[test]
    fn count_endpoints() {
        for &s in &[0.1, 0.5, 0.9, 1.0] {
            assert!(shape_count(-1.0, s).abs() < 1e-15);
            assert!((shape_count(1.0, s) - s).abs() < 1e-14);
            assert!((shape_count(0.0, s) - s / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn anti_diagonal_and_corners() {
        for k in 1..20 {
            let x = k as f64 / 20.0;
            assert!((shape_height(x, 1.0 - x).unwrap() - 0.5).abs() < 1e-10);
        }
        assert!((shape_height(1.0, 1.0).unwrap() - 1.0).abs() < 1e-10);
        assert!(shape_height(0.0, 0.0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn edges_match_profiles() {
        for k in 0..=10 {
            let x = k as f64 / 10.0;
            let p = boundary_profiles(x).unwrap();
            assert!((shape_height(x, 1.0).unwrap() - p.top).abs() < 1e-8);
            assert!((shape_height(1.0, x).unwrap() - p.right).abs() < 1e-8);
            assert!((shape_height(x, 0.0).unwrap() - p.bottom).abs() < 1e-8);
            assert!((shape_height(0.0, x).unwrap() - p.left).abs() < 1e-8);
        }
    }

    #[test]
    fn symmetric_and_monotone() {
        let pts: Vec<f64> = (1..20).map(|k| k as f64 / 20.0).collect();
        for &x in &pts {
            let mut prev = 0.0;
            for &y in &pts {
                let h = shape_height(x, y).unwrap();
                assert!((h - shape_height(y, x).unwrap()).abs() < 1e-10);
                assert!(h >= prev);
                prev = h;
            }
        }
    }

    #[test]
    fn general_support() {
        let u = support_general(0.5, &HeightDistribution::Uniform).unwrap();
        assert_eq!(u, support_bounds(0.5).unwrap());
        assert!(support_general(1.0, &HeightDistribution::Exponential).is_err());
        let (lo, hi) = support_general(0.5, &HeightDistribution::Exponential).unwrap();
        let (c, d) = support_bounds(0.5).unwrap();
        assert!((1.0 - (-lo).exp() - c).abs() < 1e-14 && (1.0 - (-hi).exp() - d).abs() < 1e-14);
    }
}
