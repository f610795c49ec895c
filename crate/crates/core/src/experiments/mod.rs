//! Reproducible Monte Carlo campaigns comparing samples with the theory, and
//! the file formats they produce.
//!
//! Sample `i` of sub-campaign `g` always draws from stream
//! [`stream_id(g, i)`](crate::rng::stream_id) of the master seed, and results
//! are gathered in index order, so outputs do not depend on the worker count.

mod corner;
mod io;
mod misc;
mod shape;
mod spec;
mod universality;
mod validate;

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::GridConfig;
use crate::rng::{stream_id, stream_rng, StreamRng};
use crate::shape::SurfacePoint;
use crate::stats::Ecdf;

pub use corner::run_corner;
pub use io::{
    read_ecdf_csv, read_json, read_manifest, read_surface_csv, read_tw_csv, write_ecdf_csv, write_json,
    write_surface_csv, write_table_csv, write_tw_csv, ECDF_HEADER, SURFACE_HEADER, TW_HEADER,
};
pub use misc::{run_sample, run_tw_table};
pub use shape::run_shape;
pub use spec::{
    ExperimentKind, ExperimentSpec, GridSpec, RunManifest, RuntimeInfo, StreamRecord, MANIFEST_VERSION, WORKERS_ENV,
};
pub use universality::run_universality;
pub use validate::run_kernel_validate;

/// Output of a campaign. Fields not produced by a given kind stay empty.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub manifest: RunManifest,
    pub runtime: RuntimeInfo,
    /// Empirical laws keyed by label.
    pub ecdfs: Vec<(String, Ecdf)>,
    pub surface: Vec<SurfacePoint>,
    pub table: Vec<(f64, f64)>,
    /// Named numeric tables written as CSV (`name`, header, rows).
    pub extra_tables: Vec<(String, Vec<String>, Vec<Vec<f64>>)>,
    pub configs: Vec<GridConfig>,
}

impl RunReport {
    pub(crate) fn new(manifest: RunManifest) -> Self {
        RunReport {
            manifest,
            runtime: RuntimeInfo {
                wall_seconds: 0.0,
                workers: 1,
                output: None,
            },
            ecdfs: Vec::new(),
            surface: Vec::new(),
            table: Vec::new(),
            extra_tables: Vec::new(),
            configs: Vec::new(),
        }
    }

    pub fn ecdf(&self, label: &str) -> Option<&Ecdf> {
        self.ecdfs.iter().find(|(l, _)| l == label).map(|(_, e)| e)
    }
}

/// Worker count: explicit value, else the environment variable, else all cores.
pub fn resolve_workers(explicit: Option<usize>) -> Result<usize> {
    if let Some(w) = explicit {
        return if w == 0 { Err(Error::invalid("worker count must be positive")) } else { Ok(w) };
    }
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        return match v.trim().parse::<usize>() {
            Ok(w) if w > 0 => Ok(w),
            _ => Err(Error::invalid(format!("{WORKERS_ENV}={v:?} is not a positive integer"))),
        };
    }
    Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Draws `count` independent results, sample `i` on stream `(group, i)`.
pub(crate) fn par_samples<T, F>(seed: u64, group: u32, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut StreamRng) -> Result<T> + Sync,
{
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, stream_id(group, i));
            f(&mut rng)
        })
        .collect()
}

/// File-system safe form of a distribution label.
pub fn label_slug(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '-' })
        .collect()
}

/// Validates and runs a campaign on its own thread pool, then writes its files
/// when the spec names an output directory.
pub fn run(spec: &ExperimentSpec) -> Result<RunReport> {
    spec.validate()?;
    let workers = resolve_workers(spec.workers)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::ResourceLimit(format!("cannot start {workers} workers: {e}")))?;
    let start = Instant::now();
    let mut report = pool.install(|| match spec.kind {
        ExperimentKind::Universality => run_universality(spec),
        ExperimentKind::Shape => run_shape(spec),
        ExperimentKind::KernelValidate => run_kernel_validate(spec),
        ExperimentKind::Corner => run_corner(spec),
        ExperimentKind::TwTable => run_tw_table(spec),
        ExperimentKind::Sample => run_sample(spec),
    })?;
    report.runtime = RuntimeInfo {
        wall_seconds: start.elapsed().as_secs_f64(),
        workers,
        output: spec.output.clone(),
    };
    if let Some(dir) = &spec.output {
        emit(&mut report, dir)?;
    }
    Ok(report)
}

/// Writes `manifest.json`, `runtime.json` and the data files of `report` into `dir`.
pub fn emit(report: &mut RunReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    if report.ecdfs.len() == 1 {
        write_ecdf_csv(&dir.join("ecdf.csv"), &report.ecdfs[0].1)?;
        files.push("ecdf.csv".to_string());
    } else {
        for (label, e) in &report.ecdfs {
            let sub = label_slug(label);
            std::fs::create_dir_all(dir.join(&sub))?;
            write_ecdf_csv(&dir.join(&sub).join("ecdf.csv"), e)?;
            files.push(format!("{sub}/ecdf.csv"));
        }
    }
    if !report.surface.is_empty() {
        write_surface_csv(&dir.join("surface.csv"), &report.surface)?;
        files.push("surface.csv".into());
    }
    if !report.table.is_empty() {
        write_tw_csv(&dir.join("tw.csv"), &report.table)?;
        files.push("tw.csv".into());
    }
    for (name, header, rows) in &report.extra_tables {
        let h: Vec<&str> = header.iter().map(String::as_str).collect();
        write_table_csv(&dir.join(name), &h, rows)?;
        files.push(name.clone());
    }
    if !report.configs.is_empty() {
        write_json(&dir.join("samples.json"), &report.configs)?;
        files.push("samples.json".into());
    }
    files.sort();
    report.manifest.files = files;
    write_json(&dir.join("manifest.json"), &report.manifest)?;
    write_json(&dir.join("runtime.json"), &report.runtime)?;
    Ok(())
}
