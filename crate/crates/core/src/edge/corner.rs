//! Law of the corner height `x_NN`, the maximum of the whole grid.

use crate::error::{Error, Result};
use crate::model::HeightDistribution;

/// `Pr(x_NN < x) = H(x)^{N^2}`: conditioned on every height lying below `x`,
/// monotonicity has the same probability as without the condition.
pub fn corner_cdf(n: usize, d: &HeightDistribution, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("corner law needs n >= 1"));
    }
    let (lo, hi) = d.support();
    if x.is_nan() || x < lo || x > hi {
        return Err(Error::domain(format!("{x} outside the support [{lo}, {hi}]")));
    }
    let h = d.cdf(x);
    if h <= 0.0 {
        return Ok(0.0);
    }
    Ok((corner_exponent(n) * h.ln()).exp())
}

pub fn corner_exponent(n: usize) -> f64 {
    (n * n) as f64
}

/// `N^2 (1 - x)`, asymptotically `Exp(1)` for uniform heights.
pub fn uniform_corner_scaled(n: usize, x: f64) -> f64 {
    (n * n) as f64 * (1.0 - x)
}

/// `x - 2 log N`, asymptotically Gumbel for exponential heights.
pub fn exponential_corner_scaled(n: usize, x: f64) -> f64 {
    x - 2.0 * (n as f64).ln()
}

pub fn exp1_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -(-x).exp_m1()
    }
}

pub fn gumbel_cdf(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_half() {
        let v = corner_cdf(2, &HeightDistribution::Uniform, 0.5).unwrap();
        assert!((v - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn limits() {
        let n = 2000;
        for x in [0.3, 1.0, 2.5] {
            let u = corner_cdf(n, &HeightDistribution::Uniform, 1.0 - x / (n * n) as f64).unwrap();
            assert!((u - (-x).exp()).abs() < 1e-5);
            let e = corner_cdf(n, &HeightDistribution::Exponential, x + 2.0 * (n as f64).ln()).unwrap();
            assert!((e - gumbel_cdf(x)).abs() < 1e-5);
        }
    }

    #[test]
    fn support_checked() {
        assert!(corner_cdf(3, &HeightDistribution::Uniform, 1.5).is_err());
        assert_eq!(corner_cdf(3, &HeightDistribution::Exponential, 0.0).unwrap(), 0.0);
    }
}
