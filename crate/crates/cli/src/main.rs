use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dsos_core::experiments::{run, ExperimentKind, ExperimentSpec, GridSpec, RunReport, WORKERS_ENV};
use dsos_core::kernel::GapRequest;

/// Directed solid-on-solid model: exact sampling, kernels, limit shape and
/// edge statistics.
#[derive(Parser, Debug)]
#[command(name = "dsos", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw exact configurations and write them to samples.json.
    Sample(Common),
    /// Limit surface on a grid, optionally against Monte Carlo mean heights.
    Shape {
        #[command(flatten)]
        common: Common,
        /// Surface grid points per side.
        #[arg(long)]
        resolution: Option<usize>,
    },
    /// Compare the finite-n kernel with sampled configurations (n <= 4).
    KernelValidate {
        #[command(flatten)]
        common: Common,
        /// Rejection-sampler reference size.
        #[arg(long)]
        reference_samples: Option<usize>,
        /// Gap event `LINE:U` (no particle of LINE above U); repeatable.
        #[arg(long = "gap", value_parser = parse_gap)]
        gaps: Vec<GapRequest>,
        /// Histogram bins per line.
        #[arg(long)]
        bins: Option<usize>,
    },
    /// Rescaled line maxima for several height laws against Tracy-Widom.
    EdgeFluct {
        #[command(flatten)]
        common: Common,
        /// Use one stream family for every law.
        #[arg(long)]
        shared_seed: bool,
    },
    /// Law of the corner height and its limits.
    Corner {
        #[command(flatten)]
        common: Common,
        /// Raw height probe for Pr(x_NN < t); repeatable.
        #[arg(long = "threshold")]
        thresholds: Vec<f64>,
    },
    /// Tabulate the Tracy-Widom distribution function.
    TwTable {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// JSON experiment spec; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Grid size N.
    #[arg(long)]
    n: Option<usize>,
    /// Monte Carlo sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Height law: uniform, exp, beta:<a> or table:<path>; repeatable.
    #[arg(long = "dist")]
    dists: Vec<String>,
    /// Scaled line position S.
    #[arg(long)]
    line_s: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_gap(s: &str) -> Result<GapRequest, String> {
    let (line, u) = s.split_once(':').ok_or_else(|| format!("expected LINE:U, got '{s}'"))?;
    Ok(GapRequest {
        line: line.trim().parse().map_err(|_| format!("bad line in '{s}'"))?,
        u: u.trim().parse().map_err(|_| format!("bad threshold in '{s}'"))?,
    })
}

impl Common {
    fn spec(&self, kind: ExperimentKind) -> Result<ExperimentSpec> {
        let mut spec = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let spec = ExperimentSpec::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
                if spec.kind != kind {
                    bail!("config is a '{}' spec, not '{}'", spec.kind.name(), kind.name());
                }
                spec
            }
            None => ExperimentSpec::new(kind),
        };
        if let Some(n) = self.n {
            spec.n = n;
        }
        if let Some(m) = self.samples {
            spec.samples = m;
        }
        if !self.dists.is_empty() {
            spec.distributions = self.dists.clone();
        }
        if let Some(s) = self.line_s {
            spec.line_s = s;
        }
        if let Some(seed) = self.seed {
            spec.seed = seed;
        }
        if self.workers.is_some() {
            spec.workers = self.workers;
        }
        if self.out.is_some() {
            spec.output = self.out.clone();
        }
        Ok(spec)
    }
}

fn grid(spec: &mut ExperimentSpec, lo: Option<f64>, hi: Option<f64>, points: Option<usize>, default: GridSpec) {
    if lo.is_some() || hi.is_some() || points.is_some() {
        let base = spec.grid.unwrap_or(default);
        spec.grid = Some(GridSpec {
            lo: lo.unwrap_or(base.lo),
            hi: hi.unwrap_or(base.hi),
            points: points.unwrap_or(base.points),
        });
    }
}

fn build(command: Command) -> Result<ExperimentSpec> {
    Ok(match command {
        Command::Sample(common) => common.spec(ExperimentKind::Sample)?,
        Command::Shape { common, resolution } => {
            let mut spec = common.spec(ExperimentKind::Shape)?;
            grid(&mut spec, None, None, resolution, GridSpec { lo: 0.0, hi: 1.0, points: 21 });
            spec
        }
        Command::KernelValidate {
            common,
            reference_samples,
            gaps,
            bins,
        } => {
            let mut spec = common.spec(ExperimentKind::KernelValidate)?;
            if reference_samples.is_some() {
                spec.reference_samples = reference_samples;
            }
            if !gaps.is_empty() {
                spec.gaps = gaps;
            }
            grid(&mut spec, None, None, bins, GridSpec { lo: 0.0, hi: 1.0, points: 50 });
            spec
        }
        Command::EdgeFluct { common, shared_seed } => {
            let mut spec = common.spec(ExperimentKind::Universality)?;
            spec.shared_seed |= shared_seed;
            spec
        }
        Command::Corner { common, thresholds } => {
            let mut spec = common.spec(ExperimentKind::Corner)?;
            if !thresholds.is_empty() {
                spec.thresholds = thresholds;
            }
            spec
        }
        Command::TwTable { common, lo, hi, points } => {
            let mut spec = common.spec(ExperimentKind::TwTable)?;
            grid(&mut spec, lo, hi, points, GridSpec { lo: -8.0, hi: 4.0, points: 121 });
            spec
        }
    })
}

fn print_report(report: &RunReport) {
    let m = &report.manifest;
    println!("{} (seed {}, {} workers, {:.2} s)", m.spec.kind.name(), m.master_seed, report.runtime.workers, report.runtime.wall_seconds);
    for (key, value) in &m.summary {
        println!("  {key} = {value}");
    }
    match &report.runtime.output {
        Some(dir) => println!("wrote {} files to {}", m.files.len() + 2, dir.display()),
        None => println!("no --out given; nothing written"),
    }
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let spec = build(cli.command)?;
    let report = run(&spec)?;
    print_report(&report);
    Ok(())
}
