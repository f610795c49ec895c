use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Degree and parameters of `P~_n^{(a,b)}(x) = P_n^{(a,b)}(1 - 2x)` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiParams {
    pub degree: usize,
    pub a: f64,
    pub b: f64,
}

impl JacobiParams {
    pub fn new(degree: usize, a: f64, b: f64) -> Self {
        JacobiParams { degree, a, b }
    }
}

/// Above this value of `n + a + b` evaluation goes through the log form.
const LOG_FORM_THRESHOLD: f64 = 150.0;

struct Recurrence {
    a: f64,
    b: f64,
    z: f64,
}

impl Recurrence {
    fn p1(&self) -> f64 {
        (self.a + 1.0) + 0.5 * (self.a + self.b + 2.0) * (self.z - 1.0)
    }

    /// `P_n = (c_cur * P_{n-1} - c_prev * P_{n-2})`, valid for `n >= 2`.
    fn coefficients(&self, n: usize) -> (f64, f64) {
        let (a, b) = (self.a, self.b);
        let nf = n as f64;
        let s = 2.0 * nf + a + b;
        let c1 = 2.0 * nf * (nf + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * self.z + a * a - b * b);
        let c4 = 2.0 * (nf + a - 1.0) * (nf + b - 1.0) * s;
        (c2 / c1, c4 / c1)
    }
}

/// `P~_m(x)` for every `m <= nmax` by the three-term recurrence in `z = 1 - 2x`.
pub fn jacobi_table(nmax: usize, a: f64, b: f64, x: f64) -> Vec<f64> {
    let rec = Recurrence { a, b, z: 1.0 - 2.0 * x };
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(1.0);
    if nmax == 0 {
        return out;
    }
    out.push(rec.p1());
    for n in 2..=nmax {
        let (cc, cp) = rec.coefficients(n);
        out.push(cc * out[n - 1] - cp * out[n - 2]);
    }
    out
}

/// `(ln |P~_n(x)|, sign)`, with the recurrence rescaled whenever it grows large.
pub fn jacobi_eval_log(p: JacobiParams, x: f64) -> (f64, f64) {
    let rec = Recurrence { a: p.a, b: p.b, z: 1.0 - 2.0 * x };
    let mut prev = 1.0;
    if p.degree == 0 {
        return (0.0, 1.0);
    }
    let mut cur = rec.p1();
    let mut log_scale = 0.0;
    for n in 2..=p.degree {
        let (cc, cp) = rec.coefficients(n);
        let next = cc * cur - cp * prev;
        prev = cur;
        cur = next;
        let m = cur.abs().max(prev.abs());
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            log_scale += m.ln();
            cur /= m;
            prev /= m;
        }
    }
    if cur == 0.0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    (cur.abs().ln() + log_scale, cur.signum())
}

pub fn jacobi_eval(p: JacobiParams, x: f64) -> f64 {
    if p.degree as f64 + p.a + p.b > LOG_FORM_THRESHOLD {
        let (l, s) = jacobi_eval_log(p, x);
        s * l.exp()
    } else {
        jacobi_table(p.degree, p.a, p.b, x)[p.degree]
    }
}

/// `ln` of `N_n^{(a,b)} = int_0^1 x^a (1-x)^b P~_n^2 dx`.
pub fn jacobi_ln_norm(p: JacobiParams) -> Result<f64> {
    let n = p.degree as f64;
    let (a, b) = (p.a, p.b);
    if n + a < 0.0 || n + b < 0.0 || n + a + b < 0.0 || 2.0 * n + a + b + 1.0 <= 0.0 || a <= -1.0 || b <= -1.0 {
        return Err(Error::domain(format!(
            "Jacobi norm undefined for n = {}, a = {a}, b = {b}",
            p.degree
        )));
    }
    Ok(ln_gamma(n + a + 1.0) + ln_gamma(n + b + 1.0)
        - ln_gamma(n + 1.0)
        - ln_gamma(n + a + b + 1.0)
        - (2.0 * n + a + b + 1.0).ln())
}

pub fn jacobi_norm(p: JacobiParams) -> Result<f64> {
    jacobi_ln_norm(p).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;

    #[test]
    fn low_degrees() {
        assert_eq!(jacobi_eval(JacobiParams::new(0, 2.0, 3.0), 0.3), 1.0);
        for a in [0.0, 1.0, 4.0] {
            assert!(jacobi_eval(JacobiParams::new(1, a, a), 0.5).abs() < 1e-15);
            let v = jacobi_eval(JacobiParams::new(1, a, a), 0.2);
            assert!((v - (a + 1.0) * 0.6).abs() < 1e-14);
        }
    }

    #[test]
    fn norms() {
        assert!((jacobi_norm(JacobiParams::new(0, 0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((jacobi_norm(JacobiParams::new(1, 0.0, 0.0)).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(jacobi_norm(JacobiParams::new(0, -2.0, 0.0)).is_err());
    }

    #[test]
    fn log_form_matches_plain() {
        for &(n, a, b) in &[(10, 2.0, 3.0), (60, 40.0, 40.0), (100, 30.0, 10.0)] {
            for &x in &[0.01, 0.3, 0.77] {
                let plain = jacobi_table(n, a, b, x)[n];
                let (l, s) = jacobi_eval_log(JacobiParams::new(n, a, b), x);
                assert!((s * l.exp() - plain).abs() <= 1e-11 * plain.abs());
            }
        }
        // reference value from 50-digit arithmetic
        let (l, s) = jacobi_eval_log(JacobiParams::new(400, 300.0, 300.0), 0.2);
        assert!((l - 204.992_567_331_418_46).abs() < 1e-9 && s == -1.0, "{l}");
    }

    #[test]
    fn orthogonality_by_quadrature() {
        let gl = GaussLegendre::new(64);
        let (xs, ws) = gl.on(0.0, 1.0);
        for a in 0..=5 {
            for b in 0..=5 {
                let (af, bf) = (a as f64, b as f64);
                let tables: Vec<Vec<f64>> = xs.iter().map(|&x| jacobi_table(8, af, bf, x)).collect();
                for j in 0..=8 {
                    for k in 0..=8 {
                        let v: f64 = xs
                            .iter()
                            .zip(&ws)
                            .zip(&tables)
                            .map(|((&x, &w), t)| w * x.powi(a) * (1.0 - x).powi(b) * t[j] * t[k])
                            .sum();
                        let want = if j == k {
                            jacobi_norm(JacobiParams::new(j, af, bf)).unwrap()
                        } else {
                            0.0
                        };
                        assert!((v - want).abs() < 1e-10, "a={a} b={b} j={j} k={k}: {v} vs {want}");
                    }
                }
            }
        }
    }
}
