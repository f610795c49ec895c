//! Edge scaling frames and the Jacobi-to-Airy expansion.

use serde::{Deserialize, Serialize};

use super::airy::airy_ai;
use crate::error::{Error, Result};
use crate::kernel::{jacobi_eval_log, jacobi_ln_norm, JacobiParams};
use crate::model::HeightDistribution;

/// Maps raw heights and line positions near the top edge of line `S N` to Airy
/// coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFrame {
    pub s: f64,
    pub n: usize,
    pub edge: f64,
    pub sigma: f64,
    pub tau: f64,
    pub density_at_edge: f64,
}

/// `1/2 (1 + sqrt(S(2 - S)))`, the top of the uniform support of line `S N`.
pub fn uniform_edge(s: f64) -> f64 {
    0.5 * (1.0 + (s * (2.0 - s)).sqrt())
}

/// `(sigma, tau)` with `sigma^3 = (1-S)^4 / (16 sqrt(S(2-S)))` and
/// `tau = (1-S)^2 sqrt(S(2-S)) / (2 sigma)`.
pub fn edge_constants(s: f64) -> Result<(f64, f64)> {
    if !(s > 0.0 && s < 2.0) {
        return Err(Error::domain(format!("scaled line {s} outside (0, 2)")));
    }
    if s == 1.0 {
        return Err(Error::domain("degenerate scaling at S = 1, sigma = 0"));
    }
    let r = (s * (2.0 - s)).sqrt();
    let sigma = ((1.0 - s).powi(4) / (16.0 * r)).cbrt();
    let tau = (1.0 - s).powi(2) * r / (2.0 * sigma);
    Ok((sigma, tau))
}

impl ScalingFrame {
    pub fn uniform(s: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("scaling frame needs n >= 1"));
        }
        let (sigma, tau) = edge_constants(s)?;
        Ok(ScalingFrame {
            s,
            n,
            edge: uniform_edge(s),
            sigma,
            tau,
            density_at_edge: 1.0,
        })
    }

    /// Edge `H^{-1}(x0(S))`; heights are stretched by the density there.
    pub fn general(s: f64, n: usize, d: &HeightDistribution) -> Result<Self> {
        let base = Self::uniform(s, n)?;
        let edge = d.quantile(base.edge);
        let h = d.pdf(edge);
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::domain(format!(
                "density of {} at the edge {edge} is {h}, need finite and positive",
                d.label()
            )));
        }
        Ok(ScalingFrame {
            edge,
            density_at_edge: h,
            ..base
        })
    }

    fn height_scale(&self) -> f64 {
        self.density_at_edge * (self.n as f64).powf(2.0 / 3.0) / self.sigma
    }

    /// `X = (x - edge) h(edge) N^{2/3} / sigma`.
    pub fn to_scaled(&self, x: f64) -> f64 {
        (x - self.edge) * self.height_scale()
    }

    pub fn to_raw(&self, big_x: f64) -> f64 {
        self.edge + big_x / self.height_scale()
    }

    /// `s = (S_x - S) N^{1/3} / tau`.
    pub fn line_to_scaled(&self, s_x: f64) -> f64 {
        (s_x - self.s) * (self.n as f64).cbrt() / self.tau
    }

    pub fn scaled_to_line(&self, time: f64) -> f64 {
        self.s + time * self.tau / (self.n as f64).cbrt()
    }
}

pub fn scaling_frame_uniform(s: f64, n: usize) -> Result<ScalingFrame> {
    ScalingFrame::uniform(s, n)
}

pub fn scaling_frame_general(s: f64, n: usize, d: &HeightDistribution) -> Result<ScalingFrame> {
    ScalingFrame::general(s, n, d)
}

/// Variables of the uniform Airy expansion of `P~_n^{(a,b)}` at its largest zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JohnstoneVars {
    pub kappa: f64,
    pub psi: f64,
    pub gamma: f64,
    pub m: f64,
    pub sigma: f64,
}

impl JohnstoneVars {
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 || !(a > -1.0) || !(b > -1.0) {
            return Err(Error::invalid(format!("need n >= 1 and a, b > -1, got {n}, {a}, {b}")));
        }
        let kappa = 2.0 * n as f64 + a + b + 1.0;
        let psi = ((a - b) / kappa).acos();
        let gamma = ((a + b) / kappa).acos();
        let m = (psi + gamma).cos();
        let sigma3 = 2.0 * (psi + gamma).sin().powi(4) / (kappa * kappa * psi.sin() * gamma.sin());
        Ok(JohnstoneVars {
            kappa,
            psi,
            gamma,
            m,
            sigma: sigma3.cbrt(),
        })
    }

    /// Point of `[0, 1]` matching Airy coordinate `X`.
    pub fn point(&self, big_x: f64) -> f64 {
        0.5 * (1.0 - self.m) + 0.5 * self.sigma * big_x
    }
}

/// `(scaled P~_n^{(a,b)}, Ai(X))`. The polynomial is evaluated at
/// `x = (1 - M)/2 + sigma X / 2`, divided by
/// `sqrt(kappa sigma N_n / (2 x^{a+1} (1-x)^{b+1}))` and multiplied by `(-1)^n`,
/// the sign of `P~_n` just right of its largest zero.
pub fn johnstone_check(n: usize, a: f64, b: f64, big_x: f64) -> Result<(f64, f64)> {
    let jv = JohnstoneVars::new(n, a, b)?;
    let x = jv.point(big_x);
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!("X = {big_x} maps to {x}, outside (0, 1)")));
    }
    let p = JacobiParams::new(n, a, b);
    let (ln_p, sign) = jacobi_eval_log(p, x);
    let ln_pre = 0.5
        * ((jv.kappa * jv.sigma).ln() + jacobi_ln_norm(p)? - std::f64::consts::LN_2 - (a + 1.0) * x.ln() - (b + 1.0) * (1.0 - x).ln());
    let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
    let scaled = parity * sign * (ln_p - ln_pre).exp();
    Ok((scaled, airy_ai(big_x)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_line_constants() {
        let f = ScalingFrame::uniform(0.5, 100).unwrap();
        let direct = (0.0625f64 / (16.0 * 0.75f64.sqrt())).powf(1.0 / 3.0);
        assert!((f.sigma - direct).abs() < 1e-15);
        assert!((f.sigma - 0.165_225_269_020_841_2).abs() < 1e-15);
        assert!((f.tau - 0.25 * 0.75f64.sqrt() / (2.0 * f.sigma)).abs() < 1e-15);
        assert!((f.edge - 0.933_012_701_892_219_3).abs() < 1e-15);
    }

    #[test]
    fn degenerate_line() {
        assert!(matches!(ScalingFrame::uniform(1.0, 10), Err(Error::Domain(_))));
        assert!(ScalingFrame::uniform(0.0, 10).is_err());
        assert!(ScalingFrame::uniform(2.0, 10).is_err());
    }

    #[test]
    fn mirror_symmetry() {
        let a = ScalingFrame::uniform(0.3, 50).unwrap();
        let b = ScalingFrame::uniform(1.7, 50).unwrap();
        assert!((a.sigma - b.sigma).abs() < 1e-15 && (a.tau - b.tau).abs() < 1e-15);
        assert!((a.edge - b.edge).abs() < 1e-15);
    }

    #[test]
    fn uniform_and_general_coincide() {
        let a = ScalingFrame::uniform(0.5, 200).unwrap();
        let b = ScalingFrame::general(0.5, 200, &HeightDistribution::Uniform).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exponential_edge() {
        let f = ScalingFrame::general(0.5, 200, &HeightDistribution::Exponential).unwrap();
        let x0 = uniform_edge(0.5);
        assert!((f.edge + (1.0 - x0).ln()).abs() < 1e-13);
        assert!((f.density_at_edge - (1.0 - x0)).abs() < 1e-13);
        assert!((f.edge - 2.703_3).abs() < 1e-4);
    }

    #[test]
    fn round_trip() {
        let f = ScalingFrame::general(0.5, 200, &HeightDistribution::power_law(2.0).unwrap()).unwrap();
        for x in [-3.0, -0.5, 0.0, 1.25] {
            assert!((f.to_scaled(f.to_raw(x)) - x).abs() < 1e-12);
        }
        assert!((f.scaled_to_line(f.line_to_scaled(0.52)) - 0.52).abs() < 1e-14);
    }

    #[test]
    fn symmetric_parameters() {
        let jv = JohnstoneVars::new(30, 7.0, 7.0).unwrap();
        assert_eq!(jv.psi, std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn edge_consistency() {
        let n = 100usize;
        for l in [30usize, 50, 70] {
            let a = (n - l) as f64;
            let jv = JohnstoneVars::new(l, a, a).unwrap();
            let s = l as f64 / n as f64;
            let rel = (0.5 * (1.0 - jv.m) - uniform_edge(s)).abs() / uniform_edge(s);
            assert!(rel < 1e-2, "l = {l}: {rel}");
        }
    }

    #[test]
    fn approaches_airy() {
        let (p, ai) = johnstone_check(80, 80.0, 80.0, 0.0).unwrap();
        assert!((p - ai).abs() < 0.1, "{p} vs {ai}");
        assert!(johnstone_check(5, 1.0, 1.0, 100.0).is_err());
    }
}
