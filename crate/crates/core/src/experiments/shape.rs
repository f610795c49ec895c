use super::spec::{ExperimentSpec, RunManifest, StreamRecord};
use super::{par_samples, RunReport};
use crate::error::Result;
use crate::model::lines_to_grid;
use crate::sampler::sample_uniform_config;
use crate::shape::{boundary_profiles, shape_height, surface_grid};

/// Cells closer than this to the boundary are excluded from the Monte Carlo
/// comparison.
pub const INTERIOR_MARGIN: f64 = 0.1;

const DEFAULT_RESOLUTION: usize = 21;

/// Solver surface on a grid; with `samples > 0`, also the Monte Carlo mean of
/// uniform-height grids of size `n`, cell `(i, j)` placed at
/// `((j + 1/2)/n, (i + 1/2)/n)`.
pub fn run_shape(spec: &ExperimentSpec) -> Result<RunReport> {
    spec.validate()?;
    let resolution = spec.grid.map(|g| g.points).unwrap_or(DEFAULT_RESOLUTION);
    let surface = surface_grid(resolution)?;
    let mut manifest = RunManifest::new(spec);
    manifest.put("resolution", resolution as f64);

    let mut anti: f64 = 0.0;
    let mut back: f64 = 0.0;
    for k in 0..resolution {
        let x = k as f64 / (resolution - 1) as f64;
        anti = anti.max((shape_height(x, 1.0 - x)? - 0.5).abs());
        back = back.max((shape_height(x, 1.0)? - boundary_profiles(x)?.top).abs());
    }
    manifest.put("antidiagonal_max_error", anti);
    manifest.put("back_row_max_error", back);

    let mut report_tables = Vec::new();
    if spec.samples > 0 {
        let n = spec.n;
        manifest.streams.push(StreamRecord {
            label: "uniform".into(),
            group: 0,
            count: spec.samples as u64,
        });
        let grids = par_samples(spec.seed, 0, spec.samples, |rng| lines_to_grid(&sample_uniform_config(n, rng)?))?;
        let mut mean = vec![0.0; n * n];
        for g in &grids {
            for (m, v) in mean.iter_mut().zip(g.row_major()) {
                *m += v;
            }
        }
        let mut rows = Vec::with_capacity(n * n);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let (x, y) = ((j as f64 + 0.5) / n as f64, (i as f64 + 0.5) / n as f64);
                let m = mean[i * n + j] / grids.len() as f64;
                let h = shape_height(x, y)?;
                let interior = [x, y].iter().all(|c| (INTERIOR_MARGIN..=1.0 - INTERIOR_MARGIN).contains(c));
                if interior {
                    worst = worst.max((m - h).abs());
                }
                rows.push(vec![x, y, m, h, m - h]);
            }
        }
        manifest.put("mc_max_interior_deviation", worst);
        report_tables.push((
            "mc_surface.csv".to_string(),
            ["x", "y", "h_mc", "h", "deviation"].map(String::from).to_vec(),
            rows,
        ));
    }
    let mut report = RunReport::new(manifest);
    report.surface = surface;
    report.extra_tables = report_tables;
    Ok(report)
}
