//! Exact sampler built from random corank-1 projections.
//!
//! Projecting a Hermitian matrix with spectrum `a_i` (multiplicities `s_i`)
//! onto the complement of a uniformly random unit vector leaves each `a_i`
//! with multiplicity `s_i - 1` and adds one zero eigenvalue; the remaining
//! eigenvalues are the roots of `sum_i q_i / (x - a_i)` with
//! `q ~ Dirichlet(s_1, .., s_m)`. Growing from `diag(0^n, 1^n)` and then
//! shrinking produces every line of a uniform-height configuration.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::model::{lines_to_grid, GridConfig, HeightDistribution, LineSystem};

/// Distinct poles in increasing order with their multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumState {
    poles: Vec<f64>,
    multiplicities: Vec<u32>,
}

impl SpectrumState {
    pub fn new(poles: Vec<f64>, multiplicities: Vec<u32>) -> Result<Self> {
        if poles.is_empty() || poles.len() != multiplicities.len() {
            return Err(Error::invalid("spectrum needs matching, non-empty pole and multiplicity lists"));
        }
        if poles.iter().any(|p| !p.is_finite()) || poles.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("poles must be finite and strictly increasing"));
        }
        if multiplicities.contains(&0) {
            return Err(Error::invalid("multiplicities must be positive"));
        }
        Ok(SpectrumState { poles, multiplicities })
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    /// Dimension of the underlying matrix.
    pub fn dimension(&self) -> u32 {
        self.multiplicities.iter().sum()
    }
}

/// Point of the open probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletWeights(Vec<f64>);

impl DirichletWeights {
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if q.is_empty() || q.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::invalid("Dirichlet weights must be positive"));
        }
        let total: f64 = q.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("Dirichlet weights sum to {total}, not 1")));
        }
        Ok(DirichletWeights(q))
    }

    pub fn q(&self) -> &[f64] {
        &self.0
    }
}

/// Dirichlet draw with integer parameters via normalized Gamma variates.
pub fn dirichlet_sample<R: Rng + ?Sized>(s: &[u32], rng: &mut R) -> Result<DirichletWeights> {
    if s.is_empty() {
        return Err(Error::invalid("Dirichlet parameters must be non-empty"));
    }
    if s.contains(&0) {
        return Err(Error::invalid("Dirichlet parameters must be positive"));
    }
    if s.len() == 1 {
        return Ok(DirichletWeights(vec![1.0]));
    }
    loop {
        let mut g: Vec<f64> = s
            .iter()
            .map(|&k| {
                let dist = Gamma::new(k as f64, 1.0).expect("positive shape");
                dist.sample(rng)
            })
            .collect();
        let total: f64 = g.iter().sum();
        // Gamma variates underflow to zero with negligible probability; redraw.
        if g.iter().all(|&v| v > 0.0) && total.is_finite() {
            g.iter_mut().for_each(|v| *v /= total);
            return Ok(DirichletWeights(g));
        }
    }
}

/// The `m - 1` zeros of `sum q_i / (x - a_i)`, one in each gap of the poles.
pub fn secular_roots(poles: &[f64], q: &DirichletWeights) -> Result<Vec<f64>> {
    let q = q.q();
    if poles.len() != q.len() || poles.len() < 2 {
        return Err(Error::invalid(format!(
            "secular equation needs at least two poles and matching weights, got {} and {}",
            poles.len(),
            q.len()
        )));
    }
    if poles.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("secular equation poles must be distinct and increasing"));
    }
    let f = |x: f64| -> f64 { poles.iter().zip(q).map(|(&a, &w)| w / (x - a)).sum() };
    let mut roots = Vec::with_capacity(poles.len() - 1);
    for i in 0..poles.len() - 1 {
        let (mut lo, mut hi) = (poles[i], poles[i + 1]);
        // f decreases from +inf to -inf on (lo, hi).
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 1e-14 * mid.abs() {
                break;
            }
            let v = f(mid);
            if v.is_nan() {
                return Err(Error::numerical(format!(
                    "secular function is NaN at {mid} in ({}, {})",
                    poles[i],
                    poles[i + 1]
                )));
            }
            if v > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        if !(root > poles[i] && root < poles[i + 1]) {
            return Err(Error::numerical(format!(
                "secular root bracket ({}, {}) collapsed onto a pole",
                poles[i],
                poles[i + 1]
            )));
        }
        roots.push(root);
    }
    Ok(roots)
}

/// Eigenvalues produced by one random projection, ascending.
pub fn corank1_step<R: Rng + ?Sized>(state: &SpectrumState, rng: &mut R) -> Result<Vec<f64>> {
    let q = dirichlet_sample(&state.multiplicities, rng)?;
    secular_roots(&state.poles, &q)
}

const MAX_STEP_RETRIES: usize = 64;

fn well_separated(roots: &[f64], poles: &[f64]) -> bool {
    roots.windows(2).all(|w| w[1] - w[0] >= 1e-13)
        && roots
            .iter()
            .zip(poles.windows(2))
            .all(|(&r, p)| r - p[0] >= 1e-13 * p[0].abs().max(1e-300) && p[1] - r >= 1e-13 * p[1].abs().max(1e-300))
}

/// One step, redrawn when roots land within `1e-13` of each other or of a pole.
fn step<R: Rng + ?Sized>(state: &SpectrumState, rng: &mut R) -> Result<Vec<f64>> {
    let mut last = None;
    for _ in 0..MAX_STEP_RETRIES {
        match corank1_step(state, rng) {
            Ok(roots) if well_separated(&roots, &state.poles) => return Ok(roots),
            Ok(_) => {}
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| {
        Error::numerical(format!(
            "corank-1 step produced nearly coincident roots {MAX_STEP_RETRIES} times (dimension {})",
            state.dimension()
        ))
    }))
}

/// Lines `1..=upto` (ascending order within each line) of the growth phase.
fn growth<R: Rng + ?Sized>(n: usize, upto: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    let mut lines: Vec<Vec<f64>> = Vec::with_capacity(upto);
    let mut prev: Vec<f64> = Vec::new();
    for r in 1..=upto {
        let mult = (n - r + 1) as u32;
        let mut poles = Vec::with_capacity(prev.len() + 2);
        poles.push(0.0);
        poles.extend_from_slice(&prev);
        poles.push(1.0);
        let mut mults = vec![1u32; poles.len()];
        mults[0] = mult;
        *mults.last_mut().expect("two poles") = mult;
        let state = SpectrumState { poles, multiplicities: mults };
        prev = step(&state, rng)?;
        lines.push(prev.clone());
    }
    Ok(lines)
}

/// Uniform-height configuration in line coordinates.
pub fn sample_uniform_config<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<LineSystem> {
    if n == 0 {
        return Err(Error::invalid("grid size must be positive"));
    }
    let mut lines = growth(n, n, rng)?;
    for _ in 1..n {
        let prev = lines.last().expect("central line").clone();
        let state = SpectrumState {
            multiplicities: vec![1; prev.len()],
            poles: prev,
        };
        lines.push(step(&state, rng)?);
    }
    for line in &mut lines {
        line.reverse();
    }
    LineSystem::new(n, lines)
}

/// Largest value on line `l` of a uniform-height configuration.
///
/// For `l <= n` only the growth phase up to line `l` is simulated; the result
/// has the same law as `sample_uniform_config(n).line_max(l)`.
pub fn sample_line_max<R: Rng + ?Sized>(n: usize, l: usize, rng: &mut R) -> Result<f64> {
    if l == 0 || l >= 2 * n {
        return Err(Error::invalid(format!("line {l} out of range for n = {n}")));
    }
    if l <= n {
        let lines = growth(n, l, rng)?;
        Ok(*lines[l - 1].last().expect("non-empty line"))
    } else {
        Ok(sample_uniform_config(n, rng)?.line_max(l))
    }
}

/// Exact sample for heights with law `d`: uniform configuration pushed through
/// the quantile function.
pub fn sample_config<R: Rng + ?Sized>(n: usize, d: &HeightDistribution, rng: &mut R) -> Result<GridConfig> {
    for _ in 0..MAX_STEP_RETRIES {
        let ls = sample_uniform_config(n, rng)?;
        let mapped = if d.is_uniform() { ls } else { ls.map(|u| d.quantile(u)) };
        // The quantile map can round two close values onto one double.
        match lines_to_grid(&mapped) {
            Ok(g) => return Ok(g),
            Err(Error::ConstraintViolation(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::numerical("quantile transform repeatedly produced tied heights"))
}
