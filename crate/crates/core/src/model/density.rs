use rand::Rng;

use super::distribution::HeightDistribution;
use super::grid::GridConfig;
use super::normalization::ln_normalization;
use crate::error::{Error, Result};

/// Attempt cap used by [`rejection_sample`].
pub const DEFAULT_MAX_ATTEMPTS: u64 = 1 << 40;

const LOG_UNDERFLOW: f64 = -745.0;

/// `ln` of the joint density, `-inf` off the constraint set.
pub fn log_joint_density(g: &GridConfig, d: &HeightDistribution) -> f64 {
    match g.validate() {
        Ok(true) => {}
        _ => return f64::NEG_INFINITY,
    }
    let mut acc = -ln_normalization(g.n());
    for &x in g.row_major() {
        let p = d.pdf(x);
        if !(p > 0.0) {
            return f64::NEG_INFINITY;
        }
        acc += p.ln();
    }
    acc
}

/// Density of a grid under i.i.d. heights from `d` conditioned on monotonicity.
pub fn joint_density(g: &GridConfig, d: &HeightDistribution) -> f64 {
    let l = log_joint_density(g, d);
    if l < LOG_UNDERFLOW {
        0.0
    } else {
        l.exp()
    }
}

fn draw<R: Rng + ?Sized>(d: &HeightDistribution, rng: &mut R) -> f64 {
    match d {
        HeightDistribution::Uniform => rng.random::<f64>(),
        _ => d.quantile(rng.random::<f64>()),
    }
}

/// One attempt, abandoned at the first violated constraint. Since heights are
/// drawn in row-major order and only compared with their left and upper
/// neighbours, an attempt survives exactly when the full grid is monotone.
fn attempt<R: Rng + ?Sized>(n: usize, d: &HeightDistribution, rng: &mut R, buf: &mut [f64]) -> bool {
    for i in 0..n {
        for j in 0..n {
            let x = draw(d, rng);
            if (j > 0 && !(buf[i * n + j - 1] < x)) || (i > 0 && !(buf[(i - 1) * n + j] < x)) {
                return false;
            }
            buf[i * n + j] = x;
        }
    }
    true
}

/// Attempt counts of a rejection run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RejectionStats {
    pub attempts: u64,
    pub accepted: u64,
}

impl RejectionStats {
    pub fn rate(&self) -> f64 {
        self.accepted as f64 / self.attempts as f64
    }

    /// Runs `attempts` independent attempts and counts the accepted ones.
    pub fn measure<R: Rng + ?Sized>(n: usize, d: &HeightDistribution, attempts: u64, rng: &mut R) -> Self {
        let mut buf = vec![0.0; n * n];
        let accepted = (0..attempts).filter(|_| attempt(n, d, rng, &mut buf)).count() as u64;
        RejectionStats { attempts, accepted }
    }
}

/// Exact sample by drawing `n^2` heights until they are monotone.
pub fn rejection_sample<R: Rng + ?Sized>(n: usize, d: &HeightDistribution, rng: &mut R) -> Result<GridConfig> {
    rejection_sample_capped(n, d, rng, DEFAULT_MAX_ATTEMPTS).map(|(g, _)| g)
}

/// Like [`rejection_sample`] with an explicit attempt cap; also returns the
/// number of attempts used.
pub fn rejection_sample_capped<R: Rng + ?Sized>(
    n: usize,
    d: &HeightDistribution,
    rng: &mut R,
    max_attempts: u64,
) -> Result<(GridConfig, u64)> {
    if n == 0 {
        return Err(Error::invalid("grid size must be positive"));
    }
    if n > 4 {
        log::warn!("rejection sampling at n = {n} accepts with probability {:e}", ln_normalization(n).exp());
    }
    let mut buf = vec![0.0; n * n];
    for k in 1..=max_attempts {
        if attempt(n, d, rng, &mut buf) {
            return Ok((GridConfig::from_row_major(n, buf)?, k));
        }
    }
    Err(Error::ResourceLimit(format!(
        "no acceptance in {max_attempts} attempts at n = {n}; expected acceptance rate {:e}",
        ln_normalization(n).exp()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn density_values() {
        let d = HeightDistribution::Uniform;
        let one = GridConfig::from_rows(1, vec![vec![0.5]]).unwrap();
        assert!((joint_density(&one, &d) - 1.0).abs() < 1e-14);
        let good = GridConfig::from_rows(2, vec![vec![0.1, 0.4], vec![0.3, 0.8]]).unwrap();
        assert!((joint_density(&good, &d) - 12.0).abs() < 1e-12);
        let bad = GridConfig::from_rows(2, vec![vec![0.4, 0.1], vec![0.3, 0.8]]).unwrap();
        assert_eq!(joint_density(&bad, &d), 0.0);
    }

    #[test]
    fn underflow_is_zero() {
        let n = 30;
        let h: Vec<f64> = (0..n * n).map(|k| 1.0 + ((k / n) + (k % n)) as f64 + 1e-3 * k as f64).collect();
        let g = GridConfig::from_row_major(n, h).unwrap();
        assert_eq!(joint_density(&g, &HeightDistribution::Exponential), 0.0);
    }

    #[test]
    fn single_site_always_accepted() {
        let mut rng = stream_rng(1, 0);
        let (g, k) = rejection_sample_capped(1, &HeightDistribution::Exponential, &mut rng, 1).unwrap();
        assert_eq!(k, 1);
        assert!(g.get(0, 0) >= 0.0);
    }

    #[test]
    fn cap_reports_resource_limit() {
        let mut rng = stream_rng(1, 0);
        let err = rejection_sample_capped(4, &HeightDistribution::Uniform, &mut rng, 3).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit(_)));
    }

    #[test]
    fn samples_are_valid() {
        let mut rng = stream_rng(2, 0);
        for _ in 0..200 {
            let g = rejection_sample(3, &HeightDistribution::power_law(2.0).unwrap(), &mut rng).unwrap();
            assert!(g.validate().unwrap());
        }
    }
}
