use super::spec::{ExperimentSpec, RunManifest, StreamRecord};
use super::{par_samples, RunReport};
use crate::edge::{tracy_widom_cdf, ScalingFrame};
use crate::error::Result;
use crate::sampler::sample_line_max;
use crate::stats::{ks_two_sample, Ecdf};

/// Line index `ceil(S n)`, clamped to the valid range.
pub(crate) fn line_index(n: usize, s: f64) -> usize {
    ((s * n as f64).ceil() as usize).clamp(1, 2 * n - 1)
}

pub(crate) fn tw_clamped(v: f64) -> Result<f64> {
    if v < -10.0 {
        Ok(0.0)
    } else if v > 6.0 {
        Ok(1.0)
    } else {
        tracy_widom_cdf(v)
    }
}

/// Rescaled maximum of line `ceil(S n)` for every configured law, compared
/// pairwise and against `F2`.
///
/// The maximum of a line commutes with the monotone quantile map, so a sample
/// for law `H` is `x = H^{-1}(u)` with `u` the uniform-case maximum. Two
/// rescalings are reported for each law:
///
/// * `label`: the heights pulled back through `H` and placed in the uniform
///   frame, `X = (H(x) - x0(S)) N^{2/3} / sigma`. Under shared seeds every law
///   gives the same values.
/// * `label-linear`: the first-order frame
///   `X = (x - d_S) h(d_S) N^{2/3} / sigma`, which carries an `O(N^{-2/3})`
///   distortion from the curvature of `H^{-1}` at the edge.
pub fn run_universality(spec: &ExperimentSpec) -> Result<RunReport> {
    spec.validate()?;
    let n = spec.n;
    let l = line_index(n, spec.line_s);
    let s_line = l as f64 / n as f64;
    let dists = spec.parsed_distributions()?;
    let uniform = ScalingFrame::uniform(s_line, n)?;
    let mut manifest = RunManifest::new(spec);
    manifest.put("line", l as f64);
    manifest.put("line_s", s_line);
    manifest.put("sigma", uniform.sigma);
    let mut coupled = Vec::new();
    let mut linear = Vec::new();
    for (g, d) in dists.iter().enumerate() {
        let frame = ScalingFrame::general(s_line, n, d)?;
        let group = if spec.shared_seed { 0 } else { g as u32 };
        let label = d.label();
        manifest.streams.push(StreamRecord {
            label: label.clone(),
            group,
            count: spec.samples as u64,
        });
        let pairs = par_samples(spec.seed, group, spec.samples, |rng| {
            let u = sample_line_max(n, l, rng)?;
            // H(H^{-1}(u)) = u: the pulled-back height is the uniform maximum itself.
            Ok((uniform.to_scaled(u), frame.to_scaled(d.quantile(u))))
        })?;
        let (xc, xl): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let (ec, el) = (Ecdf::new(xc)?, Ecdf::new(xl)?);
        manifest.put(format!("edge:{label}"), frame.edge);
        manifest.put(format!("density_at_edge:{label}"), frame.density_at_edge);
        manifest.put(format!("mean:{label}"), ec.mean());
        manifest.put(format!("variance:{label}"), ec.variance());
        manifest.put(format!("mean_linear:{label}"), el.mean());
        manifest.put(format!("variance_linear:{label}"), el.variance());
        manifest.put(format!("ks_tw:{label}"), ec.try_ks_distance(tw_clamped)?);
        manifest.put(format!("ks_tw_linear:{label}"), el.try_ks_distance(tw_clamped)?);
        coupled.push((label.clone(), ec));
        linear.push((format!("{label}-linear"), el));
    }
    for (set, tag) in [(&coupled, ""), (&linear, "_linear")] {
        let mut worst: f64 = 0.0;
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                let d = ks_two_sample(&set[i].1, &set[j].1);
                worst = worst.max(d);
                let name = |k: usize| set[k].0.trim_end_matches("-linear").to_string();
                manifest.put(format!("ks{tag}:{}~{}", name(i), name(j)), d);
            }
        }
        manifest.put(format!("ks{tag}_pairwise_max"), worst);
    }
    for tag in ["", "_linear"] {
        let worst = coupled
            .iter()
            .map(|(label, _)| manifest.get(&format!("ks_tw{tag}:{label}")).unwrap_or(0.0))
            .fold(0.0, f64::max);
        manifest.put(format!("ks_tw{tag}_max"), worst);
    }
    let mut report = RunReport::new(manifest);
    report.ecdfs = coupled.into_iter().chain(linear).collect();
    Ok(report)
}
