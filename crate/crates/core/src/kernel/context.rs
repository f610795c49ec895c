use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::jacobi::{jacobi_ln_norm, jacobi_table, JacobiParams};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Precomputed ingredients of the finite-`n` correlation kernel.
///
/// Line `l` carries `n_l = n - |n - l|` particles and the weight
/// `w_l(x) = (x(1-x))^{a_l}` with `a_l = |n - l|`. Values of the kernel are
/// returned in the gauge where a line-to-line transition is the plain
/// interlacing indicator (and its convolution powers); determinants do not
/// depend on the gauge.
#[derive(Debug, Clone, Serialize)]
pub struct KernelContext {
    n: usize,
    shrink_label_offset: usize,
    /// `norms[a][m] = N_m^{(a,a)}` for `m < n - a`.
    norms: Vec<Vec<f64>>,
    /// `ln k!` for `k < 2n`.
    ln_fact: Vec<f64>,
}

impl KernelContext {
    /// Offset between the line labels used here and the labels in which the
    /// shrinking side of the kernel is usually written (`2n + 1 - l` rather
    /// than `2n - l`). Fixed by matching one-point densities against the
    /// rejection sampler at `n = 3`.
    pub const CALIBRATED_OFFSET: usize = 1;

    pub fn new(n: usize) -> Result<Self> {
        Self::with_offset(n, Self::CALIBRATED_OFFSET)
    }

    /// Context with a non-default label offset. Only the calibrated value
    /// yields a kernel with the right particle counts.
    pub fn with_offset(n: usize, offset: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("kernel needs n >= 1"));
        }
        if offset > 1 {
            return Err(Error::invalid(format!("line offset {offset} is out of range")));
        }
        let norms = (0..n)
            .map(|a| {
                (0..n - a)
                    .map(|m| jacobi_ln_norm(JacobiParams::new(m, a as f64, a as f64)).map(f64::exp))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let ln_fact = (0..2 * n).map(|k| ln_gamma(k as f64 + 1.0)).collect();
        Ok(KernelContext {
            n,
            shrink_label_offset: offset,
            norms,
            ln_fact,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_lines(&self) -> usize {
        2 * self.n - 1
    }

    pub fn calibration_offset(&self) -> usize {
        self.shrink_label_offset
    }

    pub fn check_line(&self, l: usize) -> Result<()> {
        if l == 0 || l > self.num_lines() {
            return Err(Error::invalid(format!("line {l} outside 1..={}", self.num_lines())));
        }
        Ok(())
    }

    /// Number of Jacobi terms attached to line `l`.
    pub fn line_size(&self, l: usize) -> usize {
        if l <= self.n {
            l
        } else {
            (2 * self.n + 1).saturating_sub(l + self.shrink_label_offset)
        }
    }

    pub fn weight_exponent(&self, l: usize) -> usize {
        l.abs_diff(self.n)
    }

    pub fn weight(&self, l: usize, x: f64) -> f64 {
        (x * (1.0 - x)).powi(self.weight_exponent(l) as i32)
    }

    /// Upper limit `alpha(s, t)` of the kernel sum for `s >= t`.
    pub fn alpha(&self, s: usize, t: usize) -> usize {
        self.line_size(s).min(self.line_size(t))
    }

    pub fn norm(&self, l: usize, m: usize) -> f64 {
        self.norms[self.weight_exponent(l)][m]
    }

    /// `P~_m^{(a_l, a_l)}(x)` for `m < n_l`.
    pub fn basis(&self, l: usize, x: f64) -> Vec<f64> {
        let size = self.line_size(l);
        if size == 0 {
            return Vec::new();
        }
        let a = self.weight_exponent(l) as f64;
        jacobi_table(size - 1, a, a, x)
    }

    fn ln_fact(&self, k: usize) -> f64 {
        self.ln_fact[k]
    }

    /// Kernel for `s >= t` from precomputed bases at `u` (line `s`) and `v` (line `t`).
    pub(crate) fn down(&self, s: usize, u: f64, bs: &[f64], t: usize, v: f64, bt: &[f64]) -> f64 {
        let (ns, nt) = (self.line_size(s), self.line_size(t));
        let mut acc = 0.0;
        for j in 1..=self.alpha(s, t) {
            let ratio = if s == t {
                1.0
            } else {
                (self.ln_fact(s - j) - self.ln_fact(t - j)).exp()
            };
            acc += ratio * bs[ns - j] * bt[nt - j] / self.norm(t, nt - j);
        }
        let mut g = if (s - t) % 2 == 1 { -acc } else { acc };
        if s <= self.n {
            g *= self.weight(s, u);
        }
        if t > self.n {
            g *= self.weight(t, v);
        }
        g
    }

    /// `int_{x0}^1 (y - x0)^p / p! w_l(y) P~_m(y) dy` for `m < n_l`.
    pub(crate) fn moments(&self, l: usize, x0: f64, p: usize) -> Vec<f64> {
        let size = self.line_size(l);
        let a = self.weight_exponent(l);
        let deg = p + 2 * a + size;
        let gl = GaussLegendre::new(deg / 2 + 2);
        let (ys, ws) = gl.on(x0, 1.0);
        let inv_pf = (-ln_gamma(p as f64 + 1.0)).exp();
        let mut out = vec![0.0; size];
        for (&y, &w) in ys.iter().zip(&ws) {
            let f = w * (y - x0).powi(p as i32) * inv_pf * self.weight(l, y);
            for (o, b) in out.iter_mut().zip(self.basis(l, y)) {
                *o += f * b;
            }
        }
        out
    }

    /// Transition density from `(s, u)` to `(t, v)` for `s < t`.
    pub fn transition(&self, s: usize, u: f64, t: usize, v: f64) -> f64 {
        debug_assert!(s < t);
        let n = self.n;
        let k = t - s;
        let pow = |d: f64, p: usize| d.powi(p as i32) * (-self.ln_fact(p)).exp();
        if t <= n {
            if v > u {
                pow(v - u, k - 1)
            } else {
                0.0
            }
        } else if s >= n {
            if v < u {
                pow(u - v, k - 1)
            } else {
                0.0
            }
        } else {
            let (p, q) = (n - s - 1, t - n - 1);
            let lo = u.max(v);
            let gl = GaussLegendre::new((p + q) / 2 + 2);
            gl.integrate(lo, 1.0, |z| pow(z - u, p) * pow(z - v, q))
        }
    }

    /// Smooth part `int phi K` of the kernel for `s < t`.
    pub(crate) fn propagated(&self, s: usize, u: f64, t: usize, v: f64) -> f64 {
        let n = self.n;
        let k = t - s;
        if t <= n {
            let m = self.moments(t, u, k - 1);
            let b = self.basis(t, v);
            (0..m.len()).map(|i| m[i] * b[i] / self.norm(t, i)).sum()
        } else if s >= n {
            let b = self.basis(s, u);
            let m = self.moments(s, v, k - 1);
            (0..m.len()).map(|i| b[i] * m[i] / self.norm(s, i)).sum()
        } else {
            let e = self.moments(n, u, n - s - 1);
            let f = self.moments(n, v, t - n - 1);
            (0..e.len()).map(|i| e[i] * f[i] / self.norm(n, i)).sum()
        }
    }

    /// `K(s, u; t, v)`.
    pub fn kernel(&self, s: usize, u: f64, t: usize, v: f64) -> Result<f64> {
        self.check_line(s)?;
        self.check_line(t)?;
        for x in [u, v] {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::domain(format!("kernel argument {x} outside [0, 1]")));
            }
        }
        Ok(self.kernel_unchecked(s, u, t, v))
    }

    pub(crate) fn kernel_unchecked(&self, s: usize, u: f64, t: usize, v: f64) -> f64 {
        if s >= t {
            self.down(s, u, &self.basis(s, u), t, v, &self.basis(t, v))
        } else {
            self.propagated(s, u, t, v) - self.transition(s, u, t, v)
        }
    }

    /// One-point density of line `l` at `u`.
    pub fn density(&self, l: usize, u: f64) -> f64 {
        let b = self.basis(l, u);
        self.down(l, u, &b, l, u, &b)
    }
}

/// `K(s, u; t, v)` for a context.
pub fn kernel_k(ctx: &KernelContext, s: usize, u: f64, t: usize, v: f64) -> Result<f64> {
    ctx.kernel(s, u, t, v)
}

/// `k`-point correlation function: `det [K(l_i, x_i; l_j, x_j)]`.
pub fn correlation_rho(ctx: &KernelContext, points: &[(usize, f64)]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::invalid("correlation needs at least one point"));
    }
    let k = points.len();
    let mut m = nalgebra::DMatrix::<f64>::zeros(k, k);
    for (i, &(li, xi)) in points.iter().enumerate() {
        for (j, &(lj, xj)) in points.iter().enumerate() {
            m[(i, j)] = ctx.kernel(li, xi, lj, xj)?;
        }
    }
    Ok(m.determinant())
}
