use super::spec::{ExperimentSpec, GridSpec, RunManifest, StreamRecord};
use super::{par_samples, RunReport};
use crate::edge::{tracy_widom_cdf, TW_MEAN, TW_MEDIAN, TW_VARIANCE};
use crate::error::{Error, Result};
use crate::sampler::sample_config;

const DEFAULT_TW_GRID: GridSpec = GridSpec {
    lo: -8.0,
    hi: 4.0,
    points: 121,
};

/// `F2` on a grid.
pub fn run_tw_table(spec: &ExperimentSpec) -> Result<RunReport> {
    spec.validate()?;
    let grid = spec.grid.unwrap_or(DEFAULT_TW_GRID);
    let table = grid
        .values()
        .into_iter()
        .map(|v| tracy_widom_cdf(v).map(|f| (v, f)))
        .collect::<Result<Vec<_>>>()?;
    let mut manifest = RunManifest::new(spec);
    manifest.put("median", TW_MEDIAN);
    manifest.put("mean", TW_MEAN);
    manifest.put("variance", TW_VARIANCE);
    let mut report = RunReport::new(manifest);
    report.table = table;
    Ok(report)
}

/// Exact configurations of size `n` under the first configured law.
pub fn run_sample(spec: &ExperimentSpec) -> Result<RunReport> {
    spec.validate()?;
    let dists = spec.parsed_distributions()?;
    let d = dists
        .first()
        .ok_or_else(|| Error::invalid("sample needs a distribution"))?;
    let mut manifest = RunManifest::new(spec);
    manifest.streams.push(StreamRecord {
        label: d.label(),
        group: 0,
        count: spec.samples as u64,
    });
    let configs = par_samples(spec.seed, 0, spec.samples, |rng| sample_config(spec.n, d, rng))?;
    let corner = configs.iter().map(|g| g.corner()).sum::<f64>() / configs.len() as f64;
    manifest.put("mean_corner", corner);
    let mut report = RunReport::new(manifest);
    report.configs = configs;
    Ok(report)
}
