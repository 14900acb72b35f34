//! JSON config file; command-line flags take precedence over its fields.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rank1_landscape::dynamics::InitDistribution;
use rank1_landscape::{GridSpec, RealVector, Selection, StepSchedule};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub ground_truth: Option<RealVector>,
    pub point: Option<RealVector>,
    pub u0: Option<StartSpec>,
    pub seed: Option<u64>,
    pub schedule: Option<ScheduleSpec>,
    pub max_iters: Option<usize>,
    pub stop_tol: Option<f64>,
    pub selection: Option<Selection>,
    pub eps_zero: Option<f64>,
    pub eps_lp: Option<f64>,
    pub trials: Option<usize>,
    pub tau_succ: Option<f64>,
    pub tau_trap: Option<f64>,
    pub init: Option<InitDistribution>,
    pub n: Option<usize>,
    pub radius: Option<f64>,
    pub samples: Option<usize>,
    #[serde(default)]
    pub grid: GridPatch,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Either `"inv-sqrt-k:0.1"` or `{"kind": "inv-sqrt-k", "c": 0.1}`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ScheduleSpec {
    Text(String),
    Full(StepSchedule),
}

impl ScheduleSpec {
    pub fn resolve(self) -> Result<StepSchedule> {
        match self {
            ScheduleSpec::Text(s) => Ok(s.parse()?),
            ScheduleSpec::Full(s) => Ok(s),
        }
    }
}

/// Starting point of `descend`: an explicit vector or a seeded Gaussian draw.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum StartSpec {
    Point(RealVector),
    Keyword(String),
}

impl std::str::FromStr for StartSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("random") {
            Ok(StartSpec::Keyword("random".into()))
        } else {
            Ok(StartSpec::Point(s.parse()?))
        }
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridPatch {
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub y_min: Option<f64>,
    pub y_max: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
}

impl GridPatch {
    /// Fields of `self` win over `fallback`; the rest come from the default grid.
    pub fn over(self, fallback: GridPatch) -> GridSpec {
        let d = GridSpec::default();
        GridSpec {
            x_min: self.x_min.or(fallback.x_min).unwrap_or(d.x_min),
            x_max: self.x_max.or(fallback.x_max).unwrap_or(d.x_max),
            y_min: self.y_min.or(fallback.y_min).unwrap_or(d.y_min),
            y_max: self.y_max.or(fallback.y_max).unwrap_or(d.y_max),
            nx: self.nx.or(fallback.nx).unwrap_or(d.nx),
            ny: self.ny.or(fallback.ny).unwrap_or(d.ny),
        }
    }
}

/// Flag, then config file, then default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
