use super::spec::{ExperimentSpec, RunManifest, StreamRecord};
use super::{par_samples, RunReport};
use crate::edge::{corner_cdf, exp1_cdf, exponential_corner_scaled, gumbel_cdf, uniform_corner_scaled};
use crate::error::Result;
use crate::model::HeightDistribution;
use crate::sampler::sample_line_max;
use crate::stats::Ecdf;

/// Law of the corner height `x_NN` (top of the central line) for every
/// configured distribution: against the exact `H^{N^2}` law and, for uniform and
/// exponential heights, against the `Exp(1)` and Gumbel limits in their own
/// scalings.
pub fn run_corner(spec: &ExperimentSpec) -> Result<RunReport> {
    spec.validate()?;
    let n = spec.n;
    let dists = spec.parsed_distributions()?;
    let mut manifest = RunManifest::new(spec);
    let mut ecdfs = Vec::new();
    for (g, d) in dists.iter().enumerate() {
        let label = d.label();
        let group = if spec.shared_seed { 0 } else { g as u32 };
        manifest.streams.push(StreamRecord {
            label: label.clone(),
            group,
            count: spec.samples as u64,
        });
        let raw = par_samples(spec.seed, group, spec.samples, |rng| {
            Ok(d.quantile(sample_line_max(n, n, rng)?))
        })?;
        let e = Ecdf::new(raw.clone())?;
        manifest.put(
            format!("ks_exact:{label}"),
            e.try_ks_distance(|x| corner_cdf(n, d, x.clamp(d.support().0, d.support().1)))?,
        );
        for &t in &spec.thresholds {
            manifest.put(format!("freq_below:{label}:{t}"), e.eval(t));
            if t >= d.support().0 && t <= d.support().1 {
                manifest.put(format!("cdf_below:{label}:{t}"), corner_cdf(n, d, t)?);
            }
        }
        match d {
            HeightDistribution::Uniform => {
                let scaled = Ecdf::new(raw.iter().map(|&x| uniform_corner_scaled(n, x)).collect())?;
                manifest.put(format!("ks_limit:{label}"), scaled.ks_distance(exp1_cdf));
                ecdfs.push((format!("{label}-scaled"), scaled));
            }
            HeightDistribution::Exponential => {
                let scaled = Ecdf::new(raw.iter().map(|&x| exponential_corner_scaled(n, x)).collect())?;
                manifest.put(format!("ks_limit:{label}"), scaled.ks_distance(gumbel_cdf));
                ecdfs.push((format!("{label}-scaled"), scaled));
            }
            _ => {}
        }
        ecdfs.push((label, e));
    }
    let mut report = RunReport::new(manifest);
    report.ecdfs = ecdfs;
    Ok(report)
}
