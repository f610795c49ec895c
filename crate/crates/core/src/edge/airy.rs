//! Airy function of the first kind and its derivative.
//!
//! Three regimes: the Maclaurin series on `|x| <= 4.5`, a steepest-descent
//! contour integral for `x > 4.5`, and Taylor continuation of `y'' = x y` from
//! a table of anchors for `x < -4.5`.

#![allow(clippy::excessive_precision)]

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// `Ai(0)`.
pub const AI_ZERO: f64 = 0.355_028_053_887_817_24;
/// `Ai'(0)`.
pub const AI_PRIME_ZERO: f64 = -0.258_819_403_792_806_8;

/// Boundary between the series and the outer regimes.
pub const SERIES_LIMIT: f64 = 4.5;
/// Largest `|x|` accepted.
pub const MAX_ARGUMENT: f64 = 200.0;

const ANCHOR_STEP: f64 = 0.25;

/// `(Ai(x), Ai'(x))`.
pub fn airy(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() || x.abs() > MAX_ARGUMENT {
        return Err(Error::domain(format!(
            "Airy argument {x} outside [-{MAX_ARGUMENT}, {MAX_ARGUMENT}]"
        )));
    }
    Ok(airy_unchecked(x))
}

pub fn airy_ai(x: f64) -> Result<f64> {
    airy(x).map(|p| p.0)
}

pub fn airy_ai_prime(x: f64) -> Result<f64> {
    airy(x).map(|p| p.1)
}

pub(crate) fn airy_unchecked(x: f64) -> (f64, f64) {
    if x.abs() <= SERIES_LIMIT {
        maclaurin(x)
    } else if x > 0.0 {
        contour(x)
    } else {
        continued(x)
    }
}

fn maclaurin(x: f64) -> (f64, f64) {
    let x2 = x * x;
    let x3 = x2 * x;
    // f = sum a_k x^{3k}, g = sum b_k x^{3k+1}; Ai = Ai(0) f + Ai'(0) g.
    let (mut tf, mut tg) = (1.0, x);
    let (mut f, mut g) = (1.0, x);
    let (mut fp, mut gp) = (0.0, 1.0);
    for k in 1..200 {
        let kf = k as f64;
        let dfp = tf * x2 / (3.0 * kf - 1.0);
        let dgp = tg * x2 / (3.0 * kf);
        tf *= x3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        tg *= x3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        f += tf;
        g += tg;
        fp += dfp;
        gp += dgp;
        if tf.abs().max(tg.abs()).max(dfp.abs()).max(dgp.abs()) < 1e-18 {
            break;
        }
    }
    (AI_ZERO * f + AI_PRIME_ZERO * g, AI_ZERO * fp + AI_PRIME_ZERO * gp)
}

fn contour_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let gl = GaussLegendre::new(48);
        let mut t = Vec::new();
        let mut w = Vec::new();
        for p in 0..2 {
            let (a, b) = (0.5 * p as f64, 0.5 * (p + 1) as f64);
            let (tp, wp) = gl.on(a, b);
            t.extend(tp);
            w.extend(wp);
        }
        (t, w)
    })
}

// Ai(x) = exp(-zeta)/pi * int_0^inf exp(-sqrt(x) t^2) cos(t^3/3) dt, through the saddle at sqrt(x).
fn contour(x: f64) -> (f64, f64) {
    let r = x.sqrt();
    let zeta = 2.0 / 3.0 * x * r;
    let upper = (50.0 / r).sqrt();
    let (t, w) = contour_rule();
    let (mut i0, mut i2) = (0.0, 0.0);
    for (&tt, &ww) in t.iter().zip(w) {
        let s = tt * upper;
        let v = ww * (-r * s * s).exp() * (s * s * s / 3.0).cos();
        i0 += v;
        i2 += v * s * s;
    }
    i0 *= upper;
    i2 *= upper;
    let pre = (-zeta).exp() / std::f64::consts::PI;
    (pre * i0, pre * (-r * i0 - i2 / (2.0 * r)))
}

/// One Taylor step of `y'' = x y` from `x0` by `h`.
fn taylor_step(x0: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    let (mut c_prev, mut c_n, mut c_next) = (0.0, y, yp);
    // c_prev = c_{n-1}, c_n, c_next = c_{n+1}
    let mut hp = 1.0;
    let (mut val, mut der) = (0.0, 0.0);
    let scale = y.abs() + yp.abs() + 1e-300;
    let mut quiet = 0;
    for n in 0..120 {
        let nf = n as f64;
        let term = c_n * hp;
        val += term;
        der += c_next * (nf + 1.0) * hp;
        let c_after = (x0 * c_n + c_prev) / ((nf + 1.0) * (nf + 2.0));
        c_prev = c_n;
        c_n = c_next;
        c_next = c_after;
        hp *= h;
        if term.abs() < 1e-18 * scale && (c_n * hp).abs() < 1e-18 * scale {
            quiet += 1;
            if quiet > 2 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (val, der)
}

fn anchors() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let count = ((MAX_ARGUMENT - SERIES_LIMIT) / ANCHOR_STEP).ceil() as usize + 1;
        let mut out = Vec::with_capacity(count);
        let mut cur = maclaurin(-SERIES_LIMIT);
        out.push(cur);
        for k in 0..count - 1 {
            let x0 = -SERIES_LIMIT - k as f64 * ANCHOR_STEP;
            cur = taylor_step(x0, cur.0, cur.1, -ANCHOR_STEP);
            out.push(cur);
        }
        out
    })
}

fn continued(x: f64) -> (f64, f64) {
    let table = anchors();
    let k = (((-SERIES_LIMIT - x) / ANCHOR_STEP).floor() as usize).min(table.len() - 1);
    let x0 = -SERIES_LIMIT - k as f64 * ANCHOR_STEP;
    let (y, yp) = table[k];
    if x == x0 {
        return (y, yp);
    }
    taylor_step(x0, y, yp, x - x0)
}
