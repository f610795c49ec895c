//! The extended Airy kernel
//!
//! `K(X, s; Y, t) = int_0^inf e^{(t-s)u} Ai(u+X) Ai(u+Y) du` for `s >= t` and
//! `-int_{-inf}^0` of the same integrand for `s < t`.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::airy::{airy, airy_unchecked, MAX_ARGUMENT};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

const PANEL_NODES: usize = 24;

fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(PANEL_NODES))
}

/// Composite rule on `[a, b]` with panels of length at most one.
fn composite(a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let panels = ((b - a).ceil() as usize).max(1);
    let width = (b - a) / panels as f64;
    let rule = panel_rule();
    let mut u = Vec::with_capacity(panels * PANEL_NODES);
    let mut w = Vec::with_capacity(panels * PANEL_NODES);
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let (up, wp) = rule.on(lo, lo + width);
        u.extend(up);
        w.extend(wp);
    }
    (u, w)
}

/// `int_R e^{d u} Ai(u+x) Ai(u+y) du` for `d > 0`.
pub fn heat_term(x: f64, y: f64, d: f64) -> f64 {
    (4.0 * std::f64::consts::PI * d).powf(-0.5) * (-(x - y).powi(2) / (4.0 * d) - d * (x + y) / 2.0 + d.powi(3) / 12.0).exp()
}

/// Quadrature in `u` for one time difference, valid for arguments `>= xmin`.
struct Plan {
    u: Vec<f64>,
    w: Vec<f64>,
    sign: f64,
    heat: Option<f64>,
}

impl Plan {
    /// `delta = s - t`.
    fn new(delta: f64, xmin: f64) -> Plan {
        if delta > -1.0 {
            // Forward integral over [0, U], with U past the Airy decay of both factors.
            let grow = (-delta).max(0.0);
            let mut upper = (16.0 - xmin).max(2.0);
            while 4.0 / 3.0 * (upper + xmin).powf(1.5) < grow * upper + 40.0 {
                upper += 1.0;
            }
            let upper = upper.min(MAX_ARGUMENT - xmin.max(0.0) - 1.0);
            let (u, mut w) = composite(0.0, upper);
            for (wi, ui) in w.iter_mut().zip(&u) {
                *wi *= (-delta * ui).exp();
            }
            Plan {
                u,
                w,
                sign: 1.0,
                heat: (delta < 0.0).then_some(-delta),
            }
        } else {
            let d = -delta;
            let (u, mut w) = composite(-40.0 / d, 0.0);
            for (wi, ui) in w.iter_mut().zip(&u) {
                *wi *= (d * ui).exp();
            }
            Plan {
                u,
                w,
                sign: -1.0,
                heat: None,
            }
        }
    }

    fn matrix(&self, xs: &[f64], ys: &[f64]) -> DMatrix<f64> {
        let table = |pts: &[f64]| -> Vec<Vec<f64>> {
            pts.par_iter()
                .map(|&x| self.u.iter().map(|&u| airy_unchecked(u + x).0).collect())
                .collect()
        };
        let a = table(xs);
        let b = if xs == ys { a.clone() } else { table(ys) };
        DMatrix::from_fn(xs.len(), ys.len(), |i, j| {
            let mut acc = 0.0;
            for q in 0..self.w.len() {
                acc += self.w[q] * a[i][q] * b[j][q];
            }
            let mut v = self.sign * acc;
            if let Some(d) = self.heat {
                v -= heat_term(xs[i], ys[j], d);
            }
            v
        })
    }
}

fn check_points(pts: &[f64]) -> Result<f64> {
    let mut lo = f64::INFINITY;
    for &x in pts {
        if !x.is_finite() || x.abs() > MAX_ARGUMENT / 4.0 {
            return Err(Error::domain(format!("Airy kernel argument {x} outside [-50, 50]")));
        }
        lo = lo.min(x);
    }
    Ok(lo)
}

/// The Airy kernel `(Ai(x)Ai'(y) - Ai'(x)Ai(y)) / (x - y)`.
pub fn airy_kernel(x: f64, y: f64) -> Result<f64> {
    let (ax, dx) = airy(x)?;
    let (ay, dy) = airy(y)?;
    Ok(closed_form(x, ax, dx, y, ay, dy))
}

fn closed_form(x: f64, ax: f64, dx: f64, y: f64, ay: f64, dy: f64) -> f64 {
    if (x - y).abs() < 1e-7 {
        // Symmetric in (x, y) with d/dx K(x, x) = -Ai(x)^2: the midpoint value is second-order accurate.
        let m = 0.5 * (x + y);
        let (a, d) = airy_unchecked(m);
        return d * d - m * a * a;
    }
    (ax * dy - dx * ay) / (x - y)
}

/// `K(x, s; y, t)` of the extended Airy kernel.
pub fn airy_process_kernel(x: f64, s: f64, y: f64, t: f64) -> Result<f64> {
    if !s.is_finite() || !t.is_finite() {
        return Err(Error::invalid("times must be finite"));
    }
    if s == t {
        check_points(&[x, y])?;
        return airy_kernel(x, y);
    }
    Ok(extended_matrix(&[x], s, &[y], t)?[(0, 0)])
}

/// `K(x, s; y, t)` evaluated by quadrature in every case, including `s = t`.
pub fn airy_process_kernel_quadrature(x: f64, s: f64, y: f64, t: f64) -> Result<f64> {
    let xmin = check_points(&[x, y])?;
    Ok(Plan::new(s - t, xmin).matrix(&[x], &[y])[(0, 0)])
}

/// Kernel block `K(xs_i, s; ys_j, t)`, using the closed form when `s = t`.
pub fn extended_matrix(xs: &[f64], s: f64, ys: &[f64], t: f64) -> Result<DMatrix<f64>> {
    let xmin = check_points(xs)?.min(check_points(ys)?);
    if s == t {
        let ax: Vec<(f64, f64)> = xs.iter().map(|&x| airy_unchecked(x)).collect();
        let ay: Vec<(f64, f64)> = ys.iter().map(|&y| airy_unchecked(y)).collect();
        return Ok(DMatrix::from_fn(xs.len(), ys.len(), |i, j| {
            closed_form(xs[i], ax[i].0, ax[i].1, ys[j], ay[j].0, ay[j].1)
        }));
    }
    Ok(Plan::new(s - t, xmin).matrix(xs, ys))
}

/// Kernel block computed by quadrature for every pair of times.
pub fn extended_matrix_quadrature(xs: &[f64], s: f64, ys: &[f64], t: f64) -> Result<DMatrix<f64>> {
    let xmin = check_points(xs)?.min(check_points(ys)?);
    Ok(Plan::new(s - t, xmin).matrix(xs, ys))
}
