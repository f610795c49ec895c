use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Height field `x[i][j]` on an `n x n` grid, stored row-major.
///
/// Rows are indexed by `i`, columns by `j`, both zero-based here; a valid
/// configuration increases strictly along every row and every column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct GridConfig {
    n: usize,
    heights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    n: usize,
    heights: Vec<Vec<f64>>,
}

impl TryFrom<GridRepr> for GridConfig {
    type Error = Error;

    fn try_from(repr: GridRepr) -> Result<Self> {
        GridConfig::from_rows(repr.n, repr.heights)
    }
}

impl From<GridConfig> for GridRepr {
    fn from(g: GridConfig) -> Self {
        GridRepr {
            n: g.n,
            heights: g.rows(),
        }
    }
}

impl GridConfig {
    pub fn from_rows(n: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("grid size must be positive"));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid(format!(
                "expected a {n}x{n} height array, got {} rows",
                rows.len()
            )));
        }
        Ok(GridConfig {
            n,
            heights: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a grid from a row-major buffer of length `n * n`.
    pub fn from_row_major(n: usize, heights: Vec<f64>) -> Result<Self> {
        if n == 0 || heights.len() != n * n {
            return Err(Error::invalid(format!(
                "row-major buffer of length {} does not match n = {n}",
                heights.len()
            )));
        }
        Ok(GridConfig { n, heights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.heights[i * self.n + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, value: f64) {
        self.heights[i * self.n + j] = value;
    }

    pub fn row_major(&self) -> &[f64] {
        &self.heights
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.heights.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Height in the far corner, the largest entry of a valid grid.
    pub fn corner(&self) -> f64 {
        self.get(self.n - 1, self.n - 1)
    }

    /// Strict row and column monotonicity.
    pub fn validate(&self) -> Result<bool> {
        if let Some(pos) = self.heights.iter().position(|h| !h.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite height at ({}, {})",
                pos / self.n,
                pos % self.n
            )));
        }
        Ok(is_monotone(self.n, &self.heights))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridConfig {
        GridConfig {
            n: self.n,
            heights: self.heights.iter().map(|&h| f(h)).collect(),
        }
    }
}

pub(crate) fn is_monotone(n: usize, h: &[f64]) -> bool {
    for i in 0..n {
        for j in 0..n {
            let x = h[i * n + j];
            if j + 1 < n && !(x < h[i * n + j + 1]) {
                return false;
            }
            if i + 1 < n && !(x < h[(i + 1) * n + j]) {
                return false;
            }
        }
    }
    true
}

/// Returns true iff `g` increases strictly along rows and columns.
pub fn validate_grid(g: &GridConfig) -> Result<bool> {
    g.validate()
}
