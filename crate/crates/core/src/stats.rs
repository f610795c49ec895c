//! Empirical distribution functions and Kolmogorov-Smirnov distances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted sample with its right-continuous empirical CDF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ecdf {
    values: Vec<f64>,
}

impl Ecdf {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("empirical CDF of an empty sample"));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::invalid("sample contains NaN"));
        }
        values.sort_by(f64::total_cmp);
        Ok(Ecdf { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Fraction of the sample `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.values.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    /// `(value, cdf)` pairs at each distinct sample value.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let n = self.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &v) in self.values.iter().enumerate() {
            let c = (i + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 = c,
                _ => out.push((v, c)),
            }
        }
        out
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (self.len().max(2) - 1) as f64
    }

    /// `sup |F_n - F|` against a continuous distribution function.
    pub fn ks_distance<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let n = self.len() as f64;
        let mut d = 0.0f64;
        for (i, &v) in self.values.iter().enumerate() {
            let f = cdf(v);
            d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
        }
        d
    }

    /// Fallible variant for distribution functions that can fail.
    pub fn try_ks_distance<F: Fn(f64) -> Result<f64>>(&self, cdf: F) -> Result<f64> {
        let n = self.len() as f64;
        let mut d = 0.0f64;
        for (i, &v) in self.values.iter().enumerate() {
            let f = cdf(v)?;
            d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
        }
        Ok(d)
    }
}

/// Two-sample statistic `sup_x |F_a(x) - F_b(x)|`, exact over ties.
pub fn ks_two_sample(a: &Ecdf, b: &Ecdf) -> f64 {
    let (x, y) = (a.values(), b.values());
    let (na, nb) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Two-sided asymptotic p-value of a one-sample distance `d` at size `n`.
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    let t = d * ((n as f64).sqrt() + 0.12 + 0.11 / (n as f64).sqrt());
    let mut p = 0.0;
    for k in 1..=100 {
        let term = 2.0 * (-1.0f64).powi(k - 1) * (-2.0 * (k as f64 * t).powi(2)).exp();
        p += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    p.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_cdfs_exact() {
        let a = Ecdf::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = Ecdf::new(vec![2.5, 3.5]).unwrap();
        // At x in [2, 2.5): F_a = 1/2, F_b = 0.
        assert_eq!(ks_two_sample(&a, &b), 0.5);
        assert_eq!(ks_two_sample(&a, &a), 0.0);
        let c = Ecdf::new(vec![0.0, 0.0, 1.0]).unwrap();
        let d = Ecdf::new(vec![0.0, 1.0, 1.0]).unwrap();
        assert!((ks_two_sample(&c, &d) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn one_sample_uniform() {
        let e = Ecdf::new(vec![0.25, 0.5, 0.75]).unwrap();
        let d = e.ks_distance(|x| x.clamp(0.0, 1.0));
        assert!((d - 0.25).abs() < 1e-15);
    }

    #[test]
    fn points_merge_ties() {
        let e = Ecdf::new(vec![2.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(e.points(), vec![(1.0, 0.25), (2.0, 0.75), (3.0, 1.0)]);
        assert_eq!(e.eval(2.0), 0.75);
        assert_eq!(e.eval(0.5), 0.0);
    }

    #[test]
    fn empty_rejected() {
        assert!(Ecdf::new(vec![]).is_err());
        assert!(Ecdf::new(vec![f64::NAN]).is_err());
    }
}
