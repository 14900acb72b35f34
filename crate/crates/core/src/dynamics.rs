//! Subgradient dynamics: `u_{k+1} = u_k − α_k g_k` with `g_k ∈ ∂f(u_k)`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{LandscapeError, Result};
use crate::exec::Execution;
use crate::objective::objective_unchecked;
use crate::sign::sign0;
use crate::stationarity::{distance_to_ground_truths, project_to_spurious_set};
use crate::tolerance::DEFAULT_EPS_ZERO;
use crate::vector::RealVector;

/// Step sizes `α_k` for `k >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepSchedule {
    /// `c / k`
    InvK { c: f64 },
    /// `c / √k`
    InvSqrtK { c: f64 },
    /// `c · qᵏ`; summable, so only useful as a contrast.
    Geometric { c: f64, q: f64 },
}

impl StepSchedule {
    pub fn step(&self, k: usize) -> f64 {
        let k = k.max(1) as f64;
        match *self {
            StepSchedule::InvK { c } => c / k,
            StepSchedule::InvSqrtK { c } => c / k.sqrt(),
            StepSchedule::Geometric { c, q } => c * q.powf(k),
        }
    }

    pub fn is_summable(&self) -> bool {
        matches!(self, StepSchedule::Geometric { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let (c, q) = match *self {
            StepSchedule::InvK { c } | StepSchedule::InvSqrtK { c } => (c, 0.5),
            StepSchedule::Geometric { c, q } => (c, q),
        };
        if !(c > 0.0 && c.is_finite()) {
            return Err(LandscapeError::InvalidArgument(format!("step constant must be positive, got {c}")));
        }
        if !(q > 0.0 && q < 1.0) {
            return Err(LandscapeError::InvalidArgument(format!("geometric ratio must lie in (0,1), got {q}")));
        }
        Ok(())
    }
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule::InvSqrtK { c: 0.1 }
    }
}

/// `inv-k:C`, `inv-sqrt-k:C` or `geometric:C:Q`.
impl FromStr for StepSchedule {
    type Err = LandscapeError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || LandscapeError::InvalidArgument(format!("cannot parse schedule '{s}'"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |i: usize| -> Result<f64> { parts.get(i).ok_or_else(bad)?.trim().parse().map_err(|_| bad()) };
        let schedule = match (parts[0].to_ascii_lowercase().replace('_', "-").as_str(), parts.len()) {
            ("inv-k", 2) => StepSchedule::InvK { c: num(1)? },
            ("inv-sqrt-k", 2) => StepSchedule::InvSqrtK { c: num(1)? },
            ("geometric", 3) => StepSchedule::Geometric { c: num(1)?, q: num(2)? },
            _ => return Err(bad()),
        };
        schedule.validate()?;
        Ok(schedule)
    }
}

impl fmt::Display for StepSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepSchedule::InvK { c } => write!(f, "inv-k:{c}"),
            StepSchedule::InvSqrtK { c } => write!(f, "inv-sqrt-k:{c}"),
            StepSchedule::Geometric { c, q } => write!(f, "geometric:{c}:{q}"),
        }
    }
}

/// Which element of `∂f(u)` the method steps along.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    /// Free entries of the sign matrix set to 0.
    #[default]
    Midpoint,
    /// Free entries set to `−Sign(u*_i u*_j)`; every point of the spurious
    /// polytope becomes a fixed point.
    AntiAligned,
}

impl FromStr for Selection {
    type Err = LandscapeError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "midpoint" => Ok(Selection::Midpoint),
            "anti-aligned" | "anti_aligned" => Ok(Selection::AntiAligned),
            _ => Err(LandscapeError::InvalidArgument(format!("unknown selection '{s}'"))),
        }
    }
}

/// The selected subgradient, computed without building the full model.
pub fn select_subgradient(u: &[f64], ustar: &[f64], selection: Selection, eps_zero: f64) -> Vec<f64> {
    let n = u.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let r = u[i] * u[j] - ustar[i] * ustar[j];
                    let s = if r.abs() > eps_zero {
                        sign0(r)
                    } else {
                        match selection {
                            Selection::Midpoint => 0.0,
                            Selection::AntiAligned => -sign0(ustar[i] * ustar[j]),
                        }
                    };
                    s * u[j]
                })
                .sum()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescentConfig {
    pub schedule: StepSchedule,
    pub max_iters: usize,
    /// Stop once the distance to `±u*` is at most this.
    pub stop_tol: f64,
    pub selection: Selection,
    pub eps_zero: f64,
}

impl Default for DescentConfig {
    fn default() -> Self {
        Self {
            schedule: StepSchedule::default(),
            max_iters: 20_000,
            stop_tol: 1e-2,
            selection: Selection::Midpoint,
            eps_zero: DEFAULT_EPS_ZERO,
        }
    }
}

impl DescentConfig {
    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        if self.max_iters == 0 {
            return Err(LandscapeError::InvalidArgument("max_iters must be at least 1".into()));
        }
        if !(self.stop_tol >= 0.0) || !(self.eps_zero > 0.0) {
            return Err(LandscapeError::InvalidArgument("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StopReason {
    /// Reached the stopping distance to `±u*`.
    Converged,
    /// The selected subgradient vanished (every entry within `eps_zero`).
    FixedPoint,
    MaxIters,
    /// An iterate overflowed.
    Diverged,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Iterate {
    pub iter: usize,
    pub u: Vec<f64>,
    pub f: f64,
    pub dist_gt: f64,
    pub dist_spurious: f64,
    /// Step that produced this iterate; 0 for the initial point.
    pub step: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub iterates: Vec<Iterate>,
    pub stop: StopReason,
}

impl Trajectory {
    pub fn last(&self) -> &Iterate {
        self.iterates.last().expect("trajectories hold the initial point")
    }
}

/// Distance to the spurious polytope; the polytope is `{0}` when `u* = 0`.
pub fn distance_to_spurious_set(y: &[f64], ustar: &[f64]) -> f64 {
    let norm2 = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if ustar.iter().all(|&x| x == 0.0) {
        return norm2(y);
    }
    match (RealVector::new(y.to_vec()), RealVector::new(ustar.to_vec())) {
        (Ok(y), Ok(s)) => project_to_spurious_set(&y, &s).map_or(f64::NAN, |p| p.distance),
        _ => f64::INFINITY,
    }
}

fn snapshot(iter: usize, u: &[f64], ustar: &[f64], step: f64) -> Iterate {
    Iterate {
        iter,
        u: u.to_vec(),
        f: objective_unchecked(u, ustar),
        dist_gt: distance_to_ground_truths(u, ustar),
        dist_spurious: distance_to_spurious_set(u, ustar),
        step,
    }
}

/// Runs the iteration, handing each accepted iterate to `observe`.
fn iterate<F: FnMut(usize, &[f64], f64)>(
    u0: &[f64],
    ustar: &[f64],
    cfg: &DescentConfig,
    mut observe: F,
) -> (Vec<f64>, usize, StopReason) {
    let mut u = u0.to_vec();
    observe(0, &u, 0.0);
    if distance_to_ground_truths(&u, ustar) <= cfg.stop_tol {
        return (u, 0, StopReason::Converged);
    }
    for k in 1..=cfg.max_iters {
        let g = select_subgradient(&u, ustar, cfg.selection, cfg.eps_zero);
        // rounding leaves ~1e-16 residue on the polytope's relative interior
        if g.iter().all(|x| x.abs() <= cfg.eps_zero) {
            return (u, k - 1, StopReason::FixedPoint);
        }
        let step = cfg.schedule.step(k);
        for (ui, gi) in u.iter_mut().zip(&g) {
            *ui -= step * gi;
        }
        if u.iter().any(|x| !x.is_finite()) {
            return (u, k, StopReason::Diverged);
        }
        observe(k, &u, step);
        if distance_to_ground_truths(&u, ustar) <= cfg.stop_tol {
            return (u, k, StopReason::Converged);
        }
    }
    (u, cfg.max_iters, StopReason::MaxIters)
}

/// Subgradient method from `u0`, recording every iterate.
pub fn run_subgradient(u0: &RealVector, ustar: &RealVector, cfg: &DescentConfig) -> Result<Trajectory> {
    u0.check_same_dim(ustar)?;
    cfg.validate()?;
    let mut iterates = Vec::new();
    let (_, _, stop) = iterate(u0, ustar, cfg, |k, u, step| iterates.push(snapshot(k, u, ustar, step)));
    Ok(Trajectory { iterates, stop })
}

/// Initial-point distribution for [`conjecture_probe`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitDistribution {
    StandardGaussian,
    UniformBox {
        radius: f64,
    },
    Fixed {
        point: RealVector,
    },
    /// Gaussian draws projected onto the spurious polytope (a null set).
    SpuriousPolytope,
}

impl InitDistribution {
    pub fn sample(&self, ustar: &RealVector, rng: &mut impl Rng) -> Result<RealVector> {
        let n = ustar.dim();
        match self {
            InitDistribution::StandardGaussian => RealVector::new((0..n).map(|_| StandardNormal.sample(rng)).collect()),
            InitDistribution::UniformBox { radius } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(LandscapeError::InvalidArgument(format!("box radius must be positive, got {radius}")));
                }
                RealVector::new((0..n).map(|_| rng.random_range(-*radius..=*radius)).collect())
            }
            InitDistribution::Fixed { point } => {
                point.check_same_dim(ustar)?;
                Ok(point.clone())
            }
            InitDistribution::SpuriousPolytope => {
                let y = RealVector::new((0..n).map(|_| StandardNormal.sample(rng)).collect())?;
                Ok(project_to_spurious_set(&y, ustar)?.point)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub descent: DescentConfig,
    pub trials: usize,
    pub tau_succ: f64,
    pub tau_trap: f64,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            descent: DescentConfig::default(),
            trials: 200,
            tau_succ: 1e-2,
            tau_trap: 1e-3,
            seed: 0,
            execution: Execution::Parallel,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TrialStatus {
    Success,
    Trapped,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub initial: RealVector,
    pub final_point: Vec<f64>,
    pub dist_gt: f64,
    pub dist_spurious: f64,
    pub iterations: usize,
    pub stop: StopReason,
    pub status: TrialStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub ground_truth: RealVector,
    pub init: InitDistribution,
    pub schedule: StepSchedule,
    pub schedule_is_summable: bool,
    pub selection: Selection,
    pub max_iters: usize,
    pub tau_succ: f64,
    pub tau_trap: f64,
    pub seed: u64,
    pub trials: usize,
    pub successes: usize,
    pub trapped: usize,
    pub undecided: usize,
    pub outcomes: Vec<TrialOutcome>,
}

impl ConjectureReport {
    pub fn success_fraction(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// Independent runs from random initial points, classified by where they end.
/// Trial `i` draws from `ChaCha8Rng::seed_from_u64(seed ^ i)`.
pub fn conjecture_probe(ustar: &RealVector, init: &InitDistribution, cfg: &ProbeConfig) -> Result<ConjectureReport> {
    if cfg.trials == 0 {
        return Err(LandscapeError::InvalidArgument("trials must be at least 1".into()));
    }
    cfg.descent.validate()?;
    let descent = DescentConfig { stop_tol: cfg.descent.stop_tol.min(cfg.tau_succ), ..cfg.descent };
    let outcomes = cfg
        .execution
        .map_indexed(cfg.trials, |i| -> Result<TrialOutcome> {
            let seed = cfg.seed ^ i as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let initial = init.sample(ustar, &mut rng)?;
            let (last, iterations, stop) = iterate(&initial, ustar, &descent, |_, _, _| {});
            let dist_gt = distance_to_ground_truths(&last, ustar);
            let dist_spurious = distance_to_spurious_set(&last, ustar);
            let status = if dist_gt <= cfg.tau_succ {
                TrialStatus::Success
            } else if dist_spurious <= cfg.tau_trap {
                TrialStatus::Trapped
            } else {
                TrialStatus::Undecided
            };
            Ok(TrialOutcome {
                trial: i,
                seed,
                initial,
                final_point: last,
                dist_gt,
                dist_spurious,
                iterations,
                stop,
                status,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let count = |s: TrialStatus| outcomes.iter().filter(|o| o.status == s).count();
    Ok(ConjectureReport {
        ground_truth: ustar.clone(),
        init: init.clone(),
        schedule: cfg.descent.schedule,
        schedule_is_summable: cfg.descent.schedule.is_summable(),
        selection: cfg.descent.selection,
        max_iters: cfg.descent.max_iters,
        tau_succ: cfg.tau_succ,
        tau_trap: cfg.tau_trap,
        seed: cfg.seed,
        trials: cfg.trials,
        successes: count(TrialStatus::Success),
        trapped: count(TrialStatus::Trapped),
        undecided: count(TrialStatus::Undecided),
        outcomes,
    })
}

/// Uniform 2-D grid; a single node sits at the middle of its range.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { x_min: -2.0, x_max: 2.0, y_min: -2.0, y_max: 2.0, nx: 21, ny: 21 }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max].iter().all(|v| v.is_finite());
        if !finite || self.x_min > self.x_max || self.y_min > self.y_max || self.nx == 0 || self.ny == 0 {
            return Err(LandscapeError::InvalidArgument(format!("invalid grid {self:?}")));
        }
        Ok(())
    }

    fn axis(lo: f64, hi: f64, count: usize, i: usize) -> f64 {
        if count == 1 {
            0.5 * (lo + hi)
        } else {
            lo + (hi - lo) * i as f64 / (count - 1) as f64
        }
    }

    /// Row-major nodes, `x` varying fastest.
    pub fn points(&self) -> Vec<[f64; 2]> {
        let mut pts = Vec::with_capacity(self.nx * self.ny);
        for j in 0..self.ny {
            for i in 0..self.nx {
                pts.push([
                    Self::axis(self.x_min, self.x_max, self.nx, i),
                    Self::axis(self.y_min, self.y_max, self.ny, j),
                ]);
            }
        }
        pts
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowSample {
    pub point: [f64; 2],
    /// Unit negative midpoint subgradient, or zero.
    pub direction: [f64; 2],
}

/// Normalized negative midpoint subgradient on a 2-D grid.
pub fn flow_field(ustar: &RealVector, grid: &GridSpec, eps_zero: f64) -> Result<Vec<FlowSample>> {
    if ustar.dim() != 2 {
        return Err(LandscapeError::DimensionMismatch { expected: 2, found: ustar.dim() });
    }
    grid.validate()?;
    Ok(grid
        .points()
        .into_iter()
        .map(|p| {
            let g = select_subgradient(&p, ustar, Selection::Midpoint, eps_zero);
            let norm = g[0].hypot(g[1]);
            let direction = if norm > 0.0 { [-g[0] / norm, -g[1] / norm] } else { [0.0, 0.0] };
            FlowSample { point: p, direction }
        })
        .collect())
}
