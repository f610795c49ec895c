use serde::{Deserialize, Serialize};

use super::distribution::HeightDistribution;
use super::grid::GridConfig;
use crate::error::{Error, Result};

/// The grid seen along its `2n - 1` diagonals.
///
/// Line `l` (1-based) collects the sites with `l = n + (j - i)` and holds
/// `n - |l - n|` heights sorted in decreasing order. Lines below the central
/// line `n` nest inside their right neighbour; lines above it nest inside their
/// left neighbour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LinesRepr", into = "LinesRepr")]
pub struct LineSystem {
    n: usize,
    lines: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct LinesRepr {
    n: usize,
    lines: Vec<Vec<f64>>,
}

impl TryFrom<LinesRepr> for LineSystem {
    type Error = Error;

    fn try_from(repr: LinesRepr) -> Result<Self> {
        LineSystem::new(repr.n, repr.lines)
    }
}

impl From<LineSystem> for LinesRepr {
    fn from(ls: LineSystem) -> Self {
        LinesRepr {
            n: ls.n,
            lines: ls.lines,
        }
    }
}

/// Number of sites on line `l` (1-based) of an `n x n` grid.
pub fn line_size(n: usize, l: usize) -> usize {
    n - l.abs_diff(n)
}

impl LineSystem {
    /// Wraps `lines` after checking the cardinalities `1, 2, .., n, .., 2, 1`.
    pub fn new(n: usize, lines: Vec<Vec<f64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("line system needs n >= 1"));
        }
        if lines.len() != 2 * n - 1 {
            return Err(Error::invalid(format!(
                "expected {} lines for n = {n}, got {}",
                2 * n - 1,
                lines.len()
            )));
        }
        for (idx, line) in lines.iter().enumerate() {
            let want = line_size(n, idx + 1);
            if line.len() != want {
                return Err(Error::invalid(format!(
                    "line {} holds {} values, expected {want}",
                    idx + 1,
                    line.len()
                )));
            }
        }
        Ok(LineSystem { n, lines })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Line `l`, 1-based, in decreasing order.
    pub fn line(&self, l: usize) -> &[f64] {
        &self.lines[l - 1]
    }

    pub fn lines(&self) -> &[Vec<f64>] {
        &self.lines
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    /// Largest height on line `l`.
    pub fn line_max(&self, l: usize) -> f64 {
        self.lines[l - 1][0]
    }

    /// Both interlacing chains and strict decrease within every line.
    pub fn interlacing_valid(&self) -> Result<bool> {
        let n = self.n;
        for (idx, line) in self.lines.iter().enumerate() {
            if line.len() != line_size(n, idx + 1) {
                return Err(Error::invalid(format!("line {} has wrong cardinality", idx + 1)));
            }
            if line.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("line {} has a non-finite value", idx + 1)));
            }
            if line.windows(2).any(|w| !(w[0] > w[1])) {
                return Ok(false);
            }
        }
        // Lines l-1 inside l for l <= n, and l+1 inside l for l >= n.
        for l in 1..2 * n - 1 {
            let (outer, inner) = if l < n {
                (&self.lines[l], &self.lines[l - 1])
            } else {
                (&self.lines[l - 1], &self.lines[l])
            };
            for (j, &y) in inner.iter().enumerate() {
                if !(outer[j + 1] < y && y < outer[j]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> LineSystem {
        LineSystem {
            n: self.n,
            lines: self
                .lines
                .iter()
                .map(|line| line.iter().map(|&v| f(v)).collect())
                .collect(),
        }
    }

    pub(crate) fn from_lines_unchecked(n: usize, lines: Vec<Vec<f64>>) -> Self {
        debug_assert_eq!(lines.len(), 2 * n - 1);
        LineSystem { n, lines }
    }
}

pub fn interlacing_valid(ls: &LineSystem) -> Result<bool> {
    ls.interlacing_valid()
}

/// Row index (zero-based) of the first entry of line `l` in decreasing order.
fn top_row(n: usize, l: usize) -> usize {
    if l <= n {
        n - 1
    } else {
        2 * n - 1 - l
    }
}

/// Reads the grid along its diagonals.
pub fn grid_to_lines(g: &GridConfig) -> Result<LineSystem> {
    if !g.validate()? {
        return Err(Error::ConstraintViolation(
            "grid heights are not strictly increasing along rows and columns".into(),
        ));
    }
    Ok(grid_to_lines_unchecked(g))
}

/// Reads the diagonals without checking monotonicity.
pub fn grid_to_lines_unchecked(g: &GridConfig) -> LineSystem {
    let n = g.n();
    let lines = (1..2 * n)
        .map(|l| {
            let top = top_row(n, l);
            (0..line_size(n, l))
                .map(|k| {
                    let i = top - k;
                    let j = i + l - n;
                    g.get(i, j)
                })
                .collect()
        })
        .collect();
    LineSystem::from_lines_unchecked(n, lines)
}

/// Inverse of [`grid_to_lines`].
pub fn lines_to_grid(ls: &LineSystem) -> Result<GridConfig> {
    if !ls.interlacing_valid()? {
        return Err(Error::ConstraintViolation("line system violates interlacing".into()));
    }
    Ok(lines_to_grid_unchecked(ls))
}

/// Writes the lines back without checking interlacing.
pub fn lines_to_grid_unchecked(ls: &LineSystem) -> GridConfig {
    let n = ls.n();
    let mut g = GridConfig::from_row_major(n, vec![0.0; n * n]).expect("n >= 1");
    for l in 1..2 * n {
        let top = top_row(n, l);
        for (k, &y) in ls.line(l).iter().enumerate() {
            let i = top - k;
            g.set(i, i + l - n, y);
        }
    }
    g
}

/// Maps every height through the CDF of `d`.
pub fn cdf_transform(ls: &LineSystem, d: &HeightDistribution) -> Result<LineSystem> {
    let (lo, hi) = d.support();
    for line in ls.lines() {
        if let Some(&bad) = line.iter().find(|&&v| !(v >= lo && v <= hi)) {
            return Err(Error::domain(format!(
                "height {bad} lies outside the support [{lo}, {hi}]"
            )));
        }
    }
    Ok(ls.map(|y| d.cdf(y)))
}

/// Maps every value in `[0, 1]` through the quantile function of `d`.
pub fn inverse_transform(ls: &LineSystem, d: &HeightDistribution) -> Result<LineSystem> {
    for line in ls.lines() {
        if let Some(&bad) = line.iter().find(|&&u| !(0.0..=1.0).contains(&u)) {
            return Err(Error::domain(format!("value {bad} is not a probability")));
        }
    }
    Ok(ls.map(|u| d.quantile(u)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_grid() -> GridConfig {
        GridConfig::from_rows(2, vec![vec![0.1, 0.4], vec![0.3, 0.8]]).unwrap()
    }

    #[test]
    fn two_by_two_mapping() {
        let ls = grid_to_lines(&example_grid()).unwrap();
        assert_eq!(ls.line(1), &[0.3]);
        assert_eq!(ls.line(2), &[0.8, 0.1]);
        assert_eq!(ls.line(3), &[0.4]);
        assert!(ls.interlacing_valid().unwrap());
        assert_eq!(lines_to_grid(&ls).unwrap(), example_grid());
    }

    #[test]
    fn single_site() {
        let g = GridConfig::from_rows(1, vec![vec![0.5]]).unwrap();
        let ls = grid_to_lines(&g).unwrap();
        assert_eq!(ls.lines(), &[vec![0.5]]);
        assert_eq!(lines_to_grid(&ls).unwrap(), g);
    }

    #[test]
    fn interlacing_violation() {
        let ls = LineSystem::new(2, vec![vec![0.05], vec![0.8, 0.1], vec![0.4]]).unwrap();
        assert!(!ls.interlacing_valid().unwrap());
        assert!(matches!(lines_to_grid(&ls), Err(Error::ConstraintViolation(_))));
    }

    #[test]
    fn cardinality_mismatch_rejected() {
        assert!(LineSystem::new(2, vec![vec![0.3], vec![0.8], vec![0.4]]).is_err());
        let json = r#"{"n":2,"lines":[[0.3],[0.8,0.1]]}"#;
        assert!(serde_json::from_str::<LineSystem>(json).is_err());
    }

    #[test]
    fn invalid_grid_rejected() {
        let g = GridConfig::from_rows(2, vec![vec![0.4, 0.1], vec![0.3, 0.8]]).unwrap();
        assert!(matches!(grid_to_lines(&g), Err(Error::ConstraintViolation(_))));
    }

    #[test]
    fn exponential_cdf_transform() {
        let ls = LineSystem::new(1, vec![vec![std::f64::consts::LN_2]]).unwrap();
        let u = cdf_transform(&ls, &HeightDistribution::Exponential).unwrap();
        assert!((u.line(1)[0] - 0.5).abs() < 1e-15);
        let uni = cdf_transform(&ls, &HeightDistribution::Uniform);
        assert!(uni.is_ok());
        assert_eq!(uni.unwrap(), ls);
    }

    #[test]
    fn out_of_support_is_domain_error() {
        let ls = LineSystem::new(1, vec![vec![-0.5]]).unwrap();
        assert!(matches!(
            cdf_transform(&ls, &HeightDistribution::Uniform),
            Err(Error::Domain(_))
        ));
    }
}
