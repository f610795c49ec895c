use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::context::KernelContext;
use crate::error::{Error, Result};
use crate::quadrature::{GaussLegendre, QuadratureRule};

/// "No particle of line `line` above `u`".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRequest {
    pub line: usize,
    pub u: f64,
}

/// A converged gap probability together with the discretization used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapEvaluation {
    pub requests: Vec<GapRequest>,
    pub value: f64,
    pub nodes: usize,
    pub change: f64,
}

/// Sorts by line and merges repeated lines (the union of `(u, 1)` intervals).
fn normalize(ctx: &KernelContext, requests: &[GapRequest]) -> Result<Vec<GapRequest>> {
    if requests.is_empty() {
        return Err(Error::invalid("gap probability needs at least one request"));
    }
    let mut out: Vec<GapRequest> = Vec::with_capacity(requests.len());
    for r in requests {
        ctx.check_line(r.line)?;
        if !(0.0..=1.0).contains(&r.u) {
            return Err(Error::domain(format!("threshold {} outside [0, 1]", r.u)));
        }
    }
    let mut sorted = requests.to_vec();
    sorted.sort_by(|a, b| a.line.cmp(&b.line).then(a.u.total_cmp(&b.u)));
    for r in sorted {
        match out.last() {
            Some(last) if last.line == r.line => {}
            _ => out.push(r),
        }
    }
    Ok(out)
}

/// Barycentric weights of Gauss-Legendre nodes.
fn barycentric_weights(t: &[f64], w: &[f64]) -> Vec<f64> {
    t.iter()
        .zip(w)
        .enumerate()
        .map(|(i, (&ti, &wi))| {
            let v = ((1.0 - ti * ti) * wi).sqrt();
            if i % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect()
}

/// Lagrange basis on `nodes` evaluated at `z`.
fn lagrange_row(nodes: &[f64], lambda: &[f64], z: f64, out: &mut [f64]) {
    if let Some(k) = nodes.iter().position(|&x| x == z) {
        out.iter_mut().for_each(|o| *o = 0.0);
        out[k] = 1.0;
        return;
    }
    let mut denom = 0.0;
    for ((o, &x), &l) in out.iter_mut().zip(nodes).zip(lambda) {
        *o = l / (z - x);
        denom += *o;
    }
    out.iter_mut().for_each(|o| *o /= denom);
}

struct Panel {
    a: f64,
    b: f64,
    start: usize,
}

/// One line's interval `(lo, 1)`, cut into panels at the other thresholds.
/// Solutions have derivative jumps there, so each panel gets its own rule.
struct Block {
    line: usize,
    panels: Vec<Panel>,
    x: Vec<f64>,
    w: Vec<f64>,
    basis: Vec<Vec<f64>>,
}

impl Block {
    fn new(ctx: &KernelContext, gl: &GaussLegendre, line: usize, lo: f64, cuts: &[f64]) -> Self {
        let mut ends = vec![lo];
        ends.extend(cuts.iter().copied().filter(|&c| c > lo && c < 1.0));
        ends.push(1.0);
        ends.dedup();
        let mut panels = Vec::with_capacity(ends.len() - 1);
        let (mut x, mut w) = (Vec::new(), Vec::new());
        for e in ends.windows(2) {
            panels.push(Panel {
                a: e[0],
                b: e[1],
                start: x.len(),
            });
            let (px, pw) = gl.on(e[0], e[1]);
            x.extend(px);
            w.extend(pw);
        }
        let basis = x.iter().map(|&xi| ctx.basis(line, xi)).collect();
        Block {
            line,
            panels,
            x,
            w,
            basis,
        }
    }

    fn lo(&self) -> f64 {
        self.panels[0].a
    }
}

/// Polynomial degree of the transition density between `s < t` in either argument.
fn transition_degree(s: usize, t: usize) -> usize {
    t - s - 1
}

/// `int_{lo}^1 phi(x, y) L_b(y) dy` for every piecewise Lagrange basis function `L_b` of `blk`.
fn product_weights(ctx: &KernelContext, s: usize, x: f64, blk: &Block, gl_nodes: &[f64], lambda: &[f64], out: &mut [f64]) {
    let n = ctx.n();
    let t = blk.line;
    let lo = blk.lo();
    out.iter_mut().for_each(|o| *o = 0.0);
    let mut pieces: Vec<(f64, f64)> = Vec::with_capacity(2);
    if t <= n {
        if x < 1.0 {
            pieces.push((x.max(lo), 1.0));
        }
    } else if s >= n {
        if x > lo {
            pieces.push((lo, x.min(1.0)));
        }
    } else if x > lo && x < 1.0 {
        pieces.push((lo, x));
        pieces.push((x, 1.0));
    } else {
        pieces.push((lo, 1.0));
    }
    let deg = transition_degree(s, t) + gl_nodes.len();
    let gl = GaussLegendre::new(deg / 2 + 2);
    let mut row = vec![0.0; gl_nodes.len()];
    for (a, b) in pieces {
        for p in &blk.panels {
            let (a, b) = (a.max(p.a), b.min(p.b));
            if b <= a {
                continue;
            }
            let half = 0.5 * (p.b - p.a);
            let mid = 0.5 * (p.a + p.b);
            let (zs, ws) = gl.on(a, b);
            for (&z, &wz) in zs.iter().zip(&ws) {
                let phi = ctx.transition(s, x, t, z);
                if phi == 0.0 {
                    continue;
                }
                lagrange_row(gl_nodes, lambda, (z - mid) / half, &mut row);
                for (o, &r) in out[p.start..p.start + row.len()].iter_mut().zip(&row) {
                    *o += wz * phi * r;
                }
            }
        }
    }
}

/// `det(1 - K)` on the union of `(u_i, 1)` intervals with `nodes` Gauss points each.
pub fn gap_probability_fixed(ctx: &KernelContext, requests: &[GapRequest], nodes: usize) -> Result<f64> {
    let reqs = normalize(ctx, requests)?;
    if nodes == 0 {
        return Err(Error::invalid("node count must be positive"));
    }
    let gl = GaussLegendre::new(nodes);
    let lambda = barycentric_weights(gl.nodes(), gl.weights());
    let cuts: Vec<f64> = reqs.iter().map(|r| r.u).collect();
    let blocks: Vec<Block> = reqs
        .iter()
        .filter(|r| r.u < 1.0)
        .map(|r| Block::new(ctx, &gl, r.line, r.u, &cuts))
        .collect();
    if blocks.is_empty() {
        return Ok(1.0);
    }
    let size: usize = blocks.iter().map(|b| b.x.len()).sum();
    let mut m = DMatrix::<f64>::identity(size, size);
    let mut row0 = 0;
    for bi in &blocks {
        let mut col0 = 0;
        for bj in &blocks {
            let mut pw = vec![0.0; bj.x.len()];
            let (s, t) = (bi.line, bj.line);
            for (a, &x) in bi.x.iter().enumerate() {
                if s >= t {
                    for (b, &y) in bj.x.iter().enumerate() {
                        let k = ctx.down(s, x, &bi.basis[a], t, y, &bj.basis[b]);
                        m[(row0 + a, col0 + b)] -= k * bj.w[b];
                    }
                } else {
                    product_weights(ctx, s, x, bj, gl.nodes(), &lambda, &mut pw);
                    for (b, &y) in bj.x.iter().enumerate() {
                        let smooth = ctx.propagated(s, x, t, y);
                        m[(row0 + a, col0 + b)] -= smooth * bj.w[b] - pw[b];
                    }
                }
            }
            col0 += bj.x.len();
        }
        row0 += bi.x.len();
    }
    Ok(m.determinant())
}

/// Gap probability `E_0`, refined by node doubling until successive values
/// differ by less than the rule's tolerance.
pub fn gap_probability_e0(ctx: &KernelContext, requests: &[GapRequest], quad: &QuadratureRule) -> Result<GapEvaluation> {
    quad.validate()?;
    let reqs = normalize(ctx, requests)?;
    let mut prev: Option<f64> = None;
    for nodes in quad.schedule() {
        let v = gap_probability_fixed(ctx, &reqs, nodes)?;
        if let Some(p) = prev {
            let change = (v - p).abs();
            if change < quad.tolerance {
                return Ok(GapEvaluation {
                    requests: reqs,
                    value: v.clamp(0.0, 1.0),
                    nodes,
                    change,
                });
            }
        }
        prev = Some(v);
    }
    Err(Error::numerical(format!(
        "gap probability did not settle within {} nodes (last value {:?})",
        quad.max_nodes, prev
    )))
}

/// Joint density of the line maxima: mixed partial derivative of `E_0` in all
/// thresholds, by central differences with one Richardson step.
pub fn max_height_pdf(ctx: &KernelContext, lines: &[usize], thresholds: &[f64], quad: &QuadratureRule) -> Result<f64> {
    if lines.is_empty() || lines.len() != thresholds.len() {
        return Err(Error::invalid("need one threshold per line"));
    }
    let mut seen = lines.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != lines.len() {
        return Err(Error::invalid("lines in a max-height density must be distinct"));
    }
    let base: Vec<GapRequest> = lines
        .iter()
        .zip(thresholds)
        .map(|(&line, &u)| GapRequest { line, u })
        .collect();
    let nodes = gap_probability_e0(ctx, &base, quad)?.nodes;
    let r = lines.len();
    let diff = |h: f64| -> Result<f64> {
        let mut acc = 0.0;
        for mask in 0u32..(1 << r) {
            let mut sign = 1.0;
            let reqs: Vec<GapRequest> = base
                .iter()
                .enumerate()
                .map(|(i, q)| {
                    let up = mask & (1 << i) != 0;
                    if !up {
                        sign = -sign;
                    }
                    let u = if up { q.u + h } else { q.u - h };
                    GapRequest { line: q.line, u: u.clamp(0.0, 1.0) }
                })
                .collect();
            acc += sign * gap_probability_fixed(ctx, &reqs, nodes)?;
        }
        Ok(acc / (2.0 * h).powi(r as i32))
    };
    const STEP: f64 = 1e-4;
    let coarse = diff(STEP)?;
    let fine = diff(0.5 * STEP)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// One-point density table row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub line: usize,
    pub u: f64,
    pub density: f64,
}

/// One-point densities of the given lines on a uniform grid of `points` values.
pub fn density_table(ctx: &KernelContext, lines: &[usize], points: usize) -> Result<Vec<DensityRow>> {
    if points < 2 {
        return Err(Error::invalid("density table needs at least two points"));
    }
    let mut rows = Vec::with_capacity(lines.len() * points);
    for &line in lines {
        ctx.check_line(line)?;
        for k in 0..points {
            let u = k as f64 / (points - 1) as f64;
            rows.push(DensityRow {
                line,
                u,
                density: ctx.density(line, u),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Single-line oracle: the line is a Jacobi ensemble, so
    /// `P(max < u) = det[int_0^u x^{i+j} w] / det[int_0^1 x^{i+j} w]`.
    fn hankel_gap(ctx: &KernelContext, l: usize, u: f64) -> f64 {
        let k = ctx.line_size(l);
        let gl = GaussLegendre::new(40);
        let gram = |hi: f64| {
            let (xs, ws) = gl.on(0.0, hi);
            DMatrix::from_fn(k, k, |i, j| {
                xs.iter()
                    .zip(&ws)
                    .map(|(&x, &w)| w * x.powi((i + j) as i32) * ctx.weight(l, x))
                    .sum::<f64>()
            })
            .determinant()
        };
        gram(u) / gram(1.0)
    }

    #[test]
    fn single_line_matches_hankel_oracle() {
        for n in [2, 3, 5] {
            let ctx = KernelContext::new(n).unwrap();
            for l in 1..2 * n {
                for &u in &[0.2, 0.55, 0.9] {
                    let e = gap_probability_e0(&ctx, &[GapRequest { line: l, u }], &QuadratureRule::default()).unwrap();
                    let want = hankel_gap(&ctx, l, u);
                    assert!((e.value - want).abs() < 1e-10, "n={n} l={l} u={u}: {} vs {want}", e.value);
                }
            }
        }
    }

    #[test]
    fn limits() {
        let ctx = KernelContext::new(3).unwrap();
        let q = QuadratureRule::default();
        let one = gap_probability_e0(&ctx, &[GapRequest { line: 2, u: 1.0 }], &q).unwrap();
        assert_eq!(one.value, 1.0);
        let zero = gap_probability_e0(&ctx, &[GapRequest { line: 4, u: 1e-9 }], &q).unwrap();
        assert!(zero.value < 1e-8);
    }

    // 2 x 2 grid: lines {c}, {d, a}, {b}. P(c < p, b < q) = 12 int ... computed
    // in closed form by integrating the density over the region.
    #[test]
    fn two_line_gap_exact() {
        let ctx = KernelContext::new(2).unwrap();
        let q = QuadratureRule::default();
        // P(max(b, c) < x): a below both, d above both, so integrating 12 over
        // that region gives x^4 + 4 x^3 (1 - x).
        for &x in &[0.3, 0.6, 0.85] {
            let e = gap_probability_e0(
                &ctx,
                &[GapRequest { line: 1, u: x }, GapRequest { line: 3, u: x }],
                &q,
            )
            .unwrap();
            let want = x.powi(4) + 4.0 * x.powi(3) * (1.0 - x);
            assert!((e.value - want).abs() < 1e-10, "{x}: {} vs {want}", e.value);
        }
        // P(max of line 2 < x and c < y) = P(d < x), since c < d: x^4.
        let e = gap_probability_e0(
            &ctx,
            &[GapRequest { line: 1, u: 0.9 }, GapRequest { line: 2, u: 0.7 }],
            &q,
        )
        .unwrap();
        assert!((e.value - 0.7f64.powi(4)).abs() < 1e-10, "{}", e.value);
    }

    #[test]
    fn pdf_integrates_against_gap() {
        let ctx = KernelContext::new(2).unwrap();
        let q = QuadratureRule::default();
        let gl = GaussLegendre::new(24);
        let u0 = 0.4;
        let tail = gl.integrate(u0, 1.0, |u| max_height_pdf(&ctx, &[2], &[u], &q).unwrap());
        let e = gap_probability_e0(&ctx, &[GapRequest { line: 2, u: u0 }], &q).unwrap().value;
        assert!((tail - (1.0 - e)).abs() < 1e-6, "{tail} vs {}", 1.0 - e);
    }
}
