use super::spec::{ExperimentSpec, RunManifest, StreamRecord};
use super::{par_samples, RunReport};
use crate::error::Result;
use crate::kernel::{gap_probability_e0, GapRequest, KernelContext};
use crate::model::{grid_to_lines, line_size, rejection_sample_capped, HeightDistribution, DEFAULT_MAX_ATTEMPTS};
use crate::quadrature::{GaussLegendre, QuadratureRule};
use crate::sampler::sample_uniform_config;
use crate::stats::{ks_two_sample, Ecdf};

const DEFAULT_BINS: usize = 50;
const DEFAULT_REFERENCE: usize = 20_000;

/// All lines of a configuration, concatenated in line order.
type Flat = Vec<f64>;

fn offsets(n: usize) -> Vec<usize> {
    let mut off = vec![0];
    for l in 1..2 * n {
        off.push(off[l - 1] + line_size(n, l));
    }
    off
}

fn histogram(samples: &[Flat], lo: usize, hi: usize, bins: usize) -> Vec<f64> {
    let mut counts = vec![0u64; bins];
    for s in samples {
        for &v in &s[lo..hi] {
            counts[((v * bins as f64) as usize).min(bins - 1)] += 1;
        }
    }
    let scale = bins as f64 / samples.len() as f64;
    counts.into_iter().map(|c| c as f64 * scale).collect()
}

fn gap_frequency(samples: &[Flat], off: &[usize], gaps: &[GapRequest]) -> f64 {
    let hits = samples
        .iter()
        .filter(|s| gaps.iter().all(|g| s[off[g.line - 1]] <= g.u))
        .count();
    hits as f64 / samples.len() as f64
}

/// Compares one-point histograms and gap frequencies from the corank-1 sampler
/// (and a rejection oracle) with the kernel, and cross-checks the two samplers
/// marginal by marginal.
pub fn run_kernel_validate(spec: &ExperimentSpec) -> Result<RunReport> {
    spec.validate()?;
    let n = spec.n;
    let ctx = KernelContext::new(n)?;
    let bins = spec.grid.map(|g| g.points).unwrap_or(DEFAULT_BINS);
    let gaps = if spec.gaps.is_empty() {
        vec![GapRequest { line: n, u: 0.7 }]
    } else {
        spec.gaps.clone()
    };
    let reference = spec.reference_samples.unwrap_or(spec.samples.min(DEFAULT_REFERENCE));
    let mut manifest = RunManifest::new(spec);
    manifest.streams.push(StreamRecord {
        label: "corank1".into(),
        group: 0,
        count: spec.samples as u64,
    });
    manifest.streams.push(StreamRecord {
        label: "rejection".into(),
        group: 1,
        count: reference as u64,
    });

    let flatten = |lines: &[Vec<f64>]| lines.concat();
    let main = par_samples(spec.seed, 0, spec.samples, |rng| {
        Ok(flatten(sample_uniform_config(n, rng)?.lines()))
    })?;
    let oracle = par_samples(spec.seed, 1, reference, |rng| {
        let (g, attempts) = rejection_sample_capped(n, &HeightDistribution::Uniform, rng, DEFAULT_MAX_ATTEMPTS)?;
        Ok((flatten(grid_to_lines(&g)?.lines()), attempts))
    })?;
    let attempts: u64 = oracle.iter().map(|(_, a)| a).sum();
    manifest.put("rejection_acceptance_rate", reference as f64 / attempts as f64);
    let oracle: Vec<Flat> = oracle.into_iter().map(|(f, _)| f).collect();

    let off = offsets(n);
    let gl = GaussLegendre::new(8);
    let width = 1.0 / bins as f64;
    let mut rows = Vec::new();
    let (mut sup_main, mut sup_oracle, mut mass_err): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for l in 1..2 * n {
        let h_main = histogram(&main, off[l - 1], off[l], bins);
        let h_oracle = histogram(&oracle, off[l - 1], off[l], bins);
        let (mut line_main, mut line_oracle): (f64, f64) = (0.0, 0.0);
        let mut mass = 0.0;
        for b in 0..bins {
            let (lo, hi) = (b as f64 * width, (b + 1) as f64 * width);
            let integral = gl.integrate(lo, hi, |u| ctx.density(l, u));
            mass += integral;
            let theory = integral / width;
            line_main = line_main.max((h_main[b] - theory).abs());
            line_oracle = line_oracle.max((h_oracle[b] - theory).abs());
            rows.push(vec![l as f64, lo, hi, h_main[b], h_oracle[b], theory]);
        }
        manifest.put(format!("sup_error:line{l}"), line_main);
        manifest.put(format!("mass:line{l}"), mass);
        mass_err = mass_err.max((mass - line_size(n, l) as f64).abs());
        sup_main = sup_main.max(line_main);
        sup_oracle = sup_oracle.max(line_oracle);
    }
    manifest.put("sup_error", sup_main);
    manifest.put("sup_error_rejection", sup_oracle);
    manifest.put("mass_max_error", mass_err);
    manifest.put("bins", bins as f64);

    let quad = QuadratureRule::default();
    let mut events: Vec<Vec<GapRequest>> = gaps.iter().map(|g| vec![*g]).collect();
    if gaps.len() > 1 {
        events.push(gaps.clone());
    }
    let mut gap_err: f64 = 0.0;
    for ev in &events {
        let key = ev.iter().map(|g| format!("{}@{}", g.line, g.u)).collect::<Vec<_>>().join("+");
        let theory = gap_probability_e0(&ctx, ev, &quad)?;
        let freq = gap_frequency(&main, &off, ev);
        manifest.put(format!("e0:{key}"), theory.value);
        manifest.put(format!("e0_nodes:{key}"), theory.nodes as f64);
        manifest.put(format!("freq:{key}"), freq);
        manifest.put(format!("freq_rejection:{key}"), gap_frequency(&oracle, &off, ev));
        gap_err = gap_err.max((freq - theory.value).abs());
    }
    manifest.put("gap_max_error", gap_err);

    let mut ks: f64 = 0.0;
    for k in 0..n * n {
        let a = Ecdf::new(main.iter().map(|s| s[k]).collect())?;
        let b = Ecdf::new(oracle.iter().map(|s| s[k]).collect())?;
        ks = ks.max(ks_two_sample(&a, &b));
    }
    manifest.put("ks_samplers_max", ks);

    if n >= 2 {
        let c = off[n - 1];
        let spacing = |s: &[Flat]| s.iter().map(|v| (v[c] - v[c + 1]).powi(2)).sum::<f64>() / s.len() as f64;
        manifest.put("central_top_spacing_sq", spacing(&main));
        manifest.put("central_top_spacing_sq_rejection", spacing(&oracle));
    }

    let mut report = RunReport::new(manifest);
    report.extra_tables.push((
        "kernel_bins.csv".into(),
        ["line", "lo", "hi", "mc", "mc_rejection", "kernel"].map(String::from).to_vec(),
        rows,
    ));
    Ok(report)
}
