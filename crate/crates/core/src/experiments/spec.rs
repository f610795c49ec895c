use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::GapRequest;
use crate::model::HeightDistribution;

/// Version of the manifest layout.
pub const MANIFEST_VERSION: u32 = 1;

/// Environment variable consulted for the default worker count.
pub const WORKERS_ENV: &str = "DSOS_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Universality,
    Shape,
    KernelValidate,
    Corner,
    TwTable,
    Sample,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Universality => "universality",
            ExperimentKind::Shape => "shape",
            ExperimentKind::KernelValidate => "kernel-validate",
            ExperimentKind::Corner => "corner",
            ExperimentKind::TwTable => "tw-table",
            ExperimentKind::Sample => "sample",
        }
    }
}

/// Equally spaced evaluation grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        (0..self.points)
            .map(|k| self.lo + (self.hi - self.lo) * k as f64 / (self.points - 1) as f64)
            .collect()
    }
}

/// Everything needed to reproduce a campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Height laws as descriptors: `uniform`, `exp`, `beta:a`, `table:<path>`.
    #[serde(default = "default_distributions")]
    pub distributions: Vec<String>,
    #[serde(default = "default_line")]
    pub line_s: f64,
    /// Raw height probes (corner) or extra thresholds.
    #[serde(default)]
    pub thresholds: Vec<f64>,
    /// Gap events checked by `kernel-validate`; defaults to the central line at 0.7.
    #[serde(default)]
    pub gaps: Vec<GapRequest>,
    /// Evaluation grid: `v` values for `tw-table`, surface resolution (`points`) for `shape`.
    #[serde(default)]
    pub grid: Option<GridSpec>,
    /// Rejection-oracle sample count in `kernel-validate`.
    #[serde(default)]
    pub reference_samples: Option<usize>,
    /// Reuse one stream family for every height law (quantile coupling).
    #[serde(default)]
    pub shared_seed: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn default_n() -> usize {
    20
}

fn default_samples() -> usize {
    1000
}

fn default_distributions() -> Vec<String> {
    vec!["uniform".into()]
}

fn default_line() -> f64 {
    0.5
}

impl ExperimentSpec {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentSpec {
            kind,
            n: default_n(),
            samples: default_samples(),
            distributions: default_distributions(),
            line_s: default_line(),
            thresholds: Vec::new(),
            gaps: Vec::new(),
            grid: None,
            reference_samples: None,
            shared_seed: false,
            seed: 0,
            workers: None,
            output: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ExperimentSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn parsed_distributions(&self) -> Result<Vec<HeightDistribution>> {
        self.distributions.iter().map(|d| HeightDistribution::parse_descriptor(d)).collect()
    }

    /// Checks the spec before any sampling starts.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("n must be positive"));
        }
        if self.samples == 0 && self.kind != ExperimentKind::TwTable && self.kind != ExperimentKind::Shape {
            return Err(Error::invalid("samples must be positive"));
        }
        if self.workers == Some(0) {
            return Err(Error::invalid("worker count must be positive"));
        }
        if self.distributions.is_empty() {
            return Err(Error::invalid("at least one distribution is required"));
        }
        self.parsed_distributions()?;
        if let Some(g) = &self.grid {
            if g.points < 2 || !(g.lo < g.hi) {
                return Err(Error::invalid("grid needs lo < hi and at least two points"));
            }
        }
        match self.kind {
            ExperimentKind::Universality => {
                if !(self.line_s > 0.0 && self.line_s < 2.0) || self.line_s == 1.0 {
                    return Err(Error::invalid(format!("line_s = {} must lie in (0, 2) minus 1", self.line_s)));
                }
            }
            ExperimentKind::KernelValidate => {
                if self.n > 4 {
                    return Err(Error::invalid("kernel-validate is limited to n <= 4"));
                }
                if self.reference_samples == Some(0) {
                    return Err(Error::invalid("reference_samples must be positive"));
                }
                for g in &self.gaps {
                    if g.line == 0 || g.line >= 2 * self.n || !(0.0..=1.0).contains(&g.u) {
                        return Err(Error::invalid(format!("gap {g:?} out of range for n = {}", self.n)));
                    }
                }
            }
            ExperimentKind::TwTable => {
                if let Some(g) = &self.grid {
                    if g.lo < -10.0 || g.hi > 6.0 {
                        return Err(Error::invalid("Tracy-Widom table grid must lie in [-10, 6]"));
                    }
                }
            }
            ExperimentKind::Shape | ExperimentKind::Corner | ExperimentKind::Sample => {}
        }
        Ok(())
    }

    /// Spec as recorded in the manifest: run-local fields dropped.
    pub(crate) fn echo(&self) -> ExperimentSpec {
        ExperimentSpec {
            workers: None,
            output: None,
            ..self.clone()
        }
    }
}

/// Stream family used for one sub-campaign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamRecord {
    pub label: String,
    pub group: u32,
    pub count: u64,
}

/// Deterministic record of a run: identical for identical `(spec, seed)` whatever
/// the worker count. Timing lives in [`RuntimeInfo`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub format_version: u32,
    pub code_version: String,
    pub spec: ExperimentSpec,
    pub master_seed: u64,
    pub streams: Vec<StreamRecord>,
    pub summary: BTreeMap<String, f64>,
    pub files: Vec<String>,
}

impl RunManifest {
    pub(crate) fn new(spec: &ExperimentSpec) -> Self {
        RunManifest {
            format_version: MANIFEST_VERSION,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            spec: spec.echo(),
            master_seed: spec.seed,
            streams: Vec::new(),
            summary: BTreeMap::new(),
            files: Vec::new(),
        }
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.summary.get(key).copied()
    }

    pub(crate) fn put(&mut self, key: impl Into<String>, value: f64) {
        self.summary.insert(key.into(), value);
    }
}

/// Non-reproducible facts about a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuntimeInfo {
    pub wall_seconds: f64,
    pub workers: usize,
    pub output: Option<PathBuf>,
}
