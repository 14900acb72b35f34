mod config;
mod svg;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rank1_landscape::dynamics::{distance_to_spurious_set, InitDistribution, ProbeConfig};
use rank1_landscape::stationarity::distance_to_ground_truths;
use rank1_landscape::tilting::{ScalarFn, DEFAULT_ESCAPE_THRESHOLD};
use rank1_landscape::*;
use serde::Serialize;

use config::{pick, FileConfig, GridPatch, StartSpec};

#[derive(Parser)]
#[command(name = "rank1-landscape", version, about = "Landscape of f(u) = ½‖uuᵀ − u*u*ᵀ‖₁")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// JSON config file; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout if omitted)
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    eps_zero: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    eps_lp: Option<f64>,
}

#[derive(Args, Clone, Default)]
struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    y_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    y_max: Option<f64>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
}

impl GridArgs {
    fn patch(&self) -> GridPatch {
        GridPatch {
            x_min: self.x_min,
            x_max: self.x_max,
            y_min: self.y_min,
            y_max: self.y_max,
            nx: self.nx,
            ny: self.ny,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Certify stationarity (closed form and LP) and classify a point
    Certify {
        #[arg(short = 'u', long = "point", allow_hyphen_values = true)]
        point: Option<RealVector>,
        #[arg(short = 'g', long = "ground-truth", allow_hyphen_values = true)]
        ground_truth: Option<RealVector>,
        #[command(flatten)]
        common: Common,
    },
    /// Batch certify over a planar grid (CSV)
    Landscape {
        #[arg(short = 'g', long = "ground-truth", allow_hyphen_values = true)]
        ground_truth: Option<RealVector>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Render the negative subgradient flow in the plane (SVG)
    Flow {
        #[arg(short = 'g', long = "ground-truth", allow_hyphen_values = true)]
        ground_truth: Option<RealVector>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Run the subgradient method and write the trajectory (CSV)
    Descend {
        #[arg(short = 'g', long = "ground-truth", allow_hyphen_values = true)]
        ground_truth: Option<RealVector>,
        /// Starting point, or `random` for a seeded Gaussian draw
        #[arg(long = "u0", allow_hyphen_values = true)]
        u0: Option<StartSpec>,
        #[arg(short = 's', long)]
        seed: Option<u64>,
        #[command(flatten)]
        descent: DescentArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo probe of where the subgradient method ends up (JSON)
    Conjecture {
        #[arg(short = 'g', long = "ground-truth", allow_hyphen_values = true)]
        ground_truth: Option<RealVector>,
        #[arg(short = 't', long)]
        trials: Option<usize>,
        #[arg(short = 's', long)]
        seed: Option<u64>,
        /// gaussian | box:R | polytope | fixed:x1,x2,...
        #[arg(long)]
        init: Option<String>,
        #[arg(long)]
        tau_succ: Option<f64>,
        #[arg(long)]
        tau_trap: Option<f64>,
        #[command(flatten)]
        descent: DescentArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Mean distance from a Gaussian u* to the spurious polytope (JSON)
    GaussianSep {
        #[arg(short = 'n', long)]
        n: Option<usize>,
        #[arg(short = 't', long)]
        trials: Option<usize>,
        #[arg(short = 's', long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Sampled growth check around the ground truth (JSON)
    GrowthCheck {
        #[arg(short = 'g', long = "ground-truth", allow_hyphen_values = true)]
        ground_truth: Option<RealVector>,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(short = 's', long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Tilting counterexamples
    Tilt {
        #[command(subcommand)]
        command: TiltCommand,
    },
}

#[derive(Args, Clone, Default)]
struct DescentArgs {
    /// inv-k:C | inv-sqrt-k:C | geometric:C:Q
    #[arg(long)]
    schedule: Option<StepSchedule>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    stop_tol: Option<f64>,
    /// midpoint | anti-aligned
    #[arg(long)]
    selection: Option<Selection>,
}

impl DescentArgs {
    fn resolve(&self, file: &mut FileConfig, eps_zero: f64) -> Result<DescentConfig> {
        let d = DescentConfig::default();
        let schedule = match (self.schedule, file.schedule.take()) {
            (Some(s), _) => s,
            (None, Some(spec)) => spec.resolve()?,
            (None, None) => d.schedule,
        };
        let cfg = DescentConfig {
            schedule,
            max_iters: pick(self.max_iters, file.max_iters, d.max_iters),
            stop_tol: pick(self.stop_tol, file.stop_tol, d.stop_tol),
            selection: pick(self.selection, file.selection, d.selection),
            eps_zero,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum TiltCommand {
    /// Value and derivative of the plateau function
    Ex41Eval {
        #[arg(short = 'x', allow_hyphen_values = true)]
        x: f64,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Value and subdifferential interval of the staircase function
    Ex42Eval {
        #[arg(short = 'x', allow_hyphen_values = true)]
        x: f64,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Certify a sharp local minimum of the tilted staircase
    Ex42Certify {
        #[arg(short = 'x', allow_hyphen_values = true)]
        x: f64,
        #[arg(short = 'a', allow_hyphen_values = true)]
        a: f64,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Subgradient method on the tilted plateau function
    Ex41Probe {
        #[arg(short = 'a', allow_hyphen_values = true)]
        a: f64,
        #[arg(short = 'x', long = "x0", allow_hyphen_values = true, default_value_t = 0.0)]
        x0: f64,
        #[arg(long, default_value = "inv-sqrt-k:100")]
        schedule: StepSchedule,
        #[arg(long, default_value_t = 1_000_000)]
        max_iters: usize,
        #[arg(long, default_value_t = DEFAULT_ESCAPE_THRESHOLD)]
        threshold: f64,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Certify a sharp local minimum of the tilted objective in the plane
    Ex43Certify {
        #[arg(short = 'g', long = "ground-truth", allow_hyphen_values = true, default_value = "1,1")]
        ground_truth: RealVector,
        #[arg(short = 'u', long = "point", allow_hyphen_values = true, default_value = "-1,1")]
        point: RealVector,
        #[arg(short = 'a', allow_hyphen_values = true)]
        a: RealVector,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Sample g and its tilt h_a(x) = g(x) − a·x on a uniform grid (CSV)
    Samples {
        #[arg(long = "fn")]
        function: ScalarFn,
        #[arg(short = 'a', allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -3.0)]
        x_min: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 3.0)]
        x_max: f64,
        #[arg(long, default_value_t = 601)]
        count: usize,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
}

/// Closed-form and LP certifiers disagree: a bug, not a user error.
#[derive(Debug)]
struct Disagreement(String);

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "certifier disagreement: {}", self.0)
    }
}

impl std::error::Error for Disagreement {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Disagreement>().is_some() {
        return 2;
    }
    match err.chain().find_map(|e| e.downcast_ref::<LandscapeError>()) {
        Some(
            LandscapeError::NumericalFailure(_)
            | LandscapeError::BisectionFailure { .. }
            | LandscapeError::CurvatureMismatch { .. },
        ) => 3,
        _ => 1,
    }
}

/// `-u0` is not a valid short flag; accept it as `--u0`.
fn normalize_args(args: impl IntoIterator<Item = String>) -> Vec<String> {
    args.into_iter()
        .map(|a| match a.strip_prefix("-u0") {
            Some("") => "--u0".to_string(),
            Some(rest) if rest.starts_with('=') => format!("--u0{rest}"),
            _ => a,
        })
        .collect()
}

struct Setup {
    file: FileConfig,
    out: Option<PathBuf>,
    tol: Tolerances,
}

fn setup(common: &Common) -> Result<Setup> {
    let mut file = FileConfig::load(common.config.as_deref())?;
    let d = Tolerances::default();
    let tol = Tolerances {
        eps_zero: pick(common.eps_zero, file.eps_zero, d.eps_zero),
        eps_lp: pick(common.eps_lp, file.eps_lp, d.eps_lp),
        ..d
    };
    tol.validate()?;
    let out = common.out.clone().or(file.out.take());
    Ok(Setup { file, out, tol })
}

fn require(flag: Option<RealVector>, file: Option<RealVector>, what: &str) -> Result<RealVector> {
    flag.or(file).ok_or_else(|| anyhow!("missing {what}"))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(out, &text)
}

fn emit_csv(out: Option<&Path>, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow!("csv: {e}"))?;
    emit(out, std::str::from_utf8(&bytes)?)
}

/// 17 significant digits, enough to round-trip a double.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// The serialized name of a unit enum variant, e.g. `SPURIOUS`.
fn tag<T: Serialize>(value: &T) -> String {
    match serde_json::to_value(value) {
        Ok(serde_json::Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

#[derive(Serialize)]
struct VerdictJson {
    is_stationary: bool,
    kind: StationarityKind,
    violation: Option<f64>,
    witness: Option<Vec<Vec<f64>>>,
}

impl From<&StationarityVerdict> for VerdictJson {
    fn from(v: &StationarityVerdict) -> Self {
        Self {
            is_stationary: v.is_stationary,
            kind: v.kind,
            violation: v.violation,
            witness: v.witness.as_ref().map(|m| (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()),
        }
    }
}

#[derive(Serialize)]
struct CertifyJson {
    point: RealVector,
    ground_truth: RealVector,
    objective: f64,
    closed_form: VerdictJson,
    lp: VerdictJson,
    certifiers_agree: bool,
    classification: PointClassification,
}

fn cmd_certify(point: Option<RealVector>, ground_truth: Option<RealVector>, common: &Common) -> Result<()> {
    let mut cx = setup(common)?;
    let u = require(point, cx.file.point.take(), "point (-u)")?;
    let s = require(ground_truth, cx.file.ground_truth.take(), "ground truth (-g)")?;
    u.check_same_dim(&s)?;
    let closed = is_stationary_closed_form(&u, &s, cx.tol.eps_zero)?;
    let lp = is_stationary_lp(&u, &s, &cx.tol)?;
    let agree = closed.is_stationary == lp.is_stationary && closed.kind == lp.kind;
    let report = CertifyJson {
        objective: objective(&u, &s)?,
        closed_form: (&closed).into(),
        lp: (&lp).into(),
        certifiers_agree: agree,
        classification: classify_point(&u, &s, &cx.tol)?,
        point: u,
        ground_truth: s,
    };
    emit_json(cx.out.as_deref(), &report)?;
    if !agree {
        return Err(Disagreement(format!("closed form says {}, LP says {}", tag(&closed.kind), tag(&lp.kind))).into());
    }
    Ok(())
}

fn cmd_landscape(ground_truth: Option<RealVector>, grid: &GridArgs, common: &Common) -> Result<()> {
    let mut cx = setup(common)?;
    let s = require(ground_truth, cx.file.ground_truth.take(), "ground truth (-g)")?;
    if s.dim() != 2 {
        bail!(LandscapeError::DimensionMismatch { expected: 2, found: s.dim() });
    }
    let spec = grid.patch().over(cx.file.grid);
    spec.validate()?;
    let header: Vec<String> = ["x", "y", "f", "closed_form", "lp", "agree"].map(String::from).to_vec();
    let mut rows = Vec::new();
    let mut disagreements = 0;
    for p in spec.points() {
        let u = RealVector::new(p.to_vec())?;
        let closed = is_stationary_closed_form(&u, &s, cx.tol.eps_zero)?;
        let lp = is_stationary_lp(&u, &s, &cx.tol)?;
        let agree = closed.is_stationary == lp.is_stationary && closed.kind == lp.kind;
        disagreements += usize::from(!agree);
        rows.push(vec![
            num(p[0]),
            num(p[1]),
            num(objective(&u, &s)?),
            tag(&closed.kind),
            tag(&lp.kind),
            agree.to_string(),
        ]);
    }
    emit_csv(cx.out.as_deref(), &header, &rows)?;
    if disagreements > 0 {
        return Err(Disagreement(format!("{disagreements} of {} grid points", rows.len())).into());
    }
    Ok(())
}

fn cmd_flow(ground_truth: Option<RealVector>, grid: &GridArgs, common: &Common) -> Result<()> {
    let mut cx = setup(common)?;
    let s = require(ground_truth, cx.file.ground_truth.take(), "ground truth (-g)")?;
    let spec = grid.patch().over(cx.file.grid);
    let samples = flow_field(&s, &spec, cx.tol.eps_zero)?;
    emit(cx.out.as_deref(), &svg::render_flow([s[0], s[1]], &spec, &samples))
}

fn cmd_descend(
    ground_truth: Option<RealVector>,
    u0: Option<StartSpec>,
    seed: Option<u64>,
    descent: &DescentArgs,
    common: &Common,
) -> Result<()> {
    let mut cx = setup(common)?;
    let s = require(ground_truth, cx.file.ground_truth.take(), "ground truth (-g)")?;
    let seed = pick(seed, cx.file.seed, 0);
    let cfg = descent.resolve(&mut cx.file, cx.tol.eps_zero)?;
    let start = match u0.or(cx.file.u0.take()).unwrap_or(StartSpec::Keyword("random".into())) {
        StartSpec::Point(p) => p,
        StartSpec::Keyword(k) if k.eq_ignore_ascii_case("random") => {
            InitDistribution::StandardGaussian.sample(&s, &mut ChaCha8Rng::seed_from_u64(seed))?
        }
        StartSpec::Keyword(k) => bail!("unknown starting point '{k}'"),
    };
    let traj = run_subgradient(&start, &s, &cfg)?;
    let n = s.dim();
    let mut header = vec!["iter".to_string()];
    header.extend((1..=n).map(|i| format!("u_{i}")));
    header.extend(["f", "dist_gt", "dist_spurious", "step"].map(String::from));
    let rows: Vec<Vec<String>> = traj
        .iterates
        .iter()
        .map(|it| {
            let mut row = vec![it.iter.to_string()];
            row.extend(it.u.iter().map(|&x| num(x)));
            row.extend([it.f, it.dist_gt, it.dist_spurious, it.step].map(num));
            row
        })
        .collect();
    emit_csv(cx.out.as_deref(), &header, &rows)?;
    let last = traj.last();
    eprintln!(
        "stop: {} after {} iterations, dist_gt {:.3e}, dist_spurious {:.3e}",
        tag(&traj.stop),
        last.iter,
        distance_to_ground_truths(&last.u, &s),
        distance_to_spurious_set(&last.u, &s)
    );
    Ok(())
}

fn parse_init(text: &str) -> Result<InitDistribution> {
    let t = text.trim();
    let (head, rest) = t.split_once(':').unwrap_or((t, ""));
    Ok(match head.to_ascii_lowercase().as_str() {
        "gaussian" | "standard-gaussian" => InitDistribution::StandardGaussian,
        "polytope" | "spurious-polytope" => InitDistribution::SpuriousPolytope,
        "box" => InitDistribution::UniformBox {
            radius: rest.parse().with_context(|| format!("bad box radius in '{text}'"))?,
        },
        "fixed" => InitDistribution::Fixed { point: rest.parse()? },
        _ => bail!("unknown init distribution '{text}' (gaussian | box:R | polytope | fixed:x1,x2,...)"),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_conjecture(
    ground_truth: Option<RealVector>,
    trials: Option<usize>,
    seed: Option<u64>,
    init: Option<&str>,
    tau_succ: Option<f64>,
    tau_trap: Option<f64>,
    descent: &DescentArgs,
    common: &Common,
) -> Result<()> {
    let mut cx = setup(common)?;
    let s = require(ground_truth, cx.file.ground_truth.take(), "ground truth (-g)")?;
    let d = ProbeConfig::default();
    let init = match init {
        Some(text) => parse_init(text)?,
        None => cx.file.init.take().unwrap_or(InitDistribution::StandardGaussian),
    };
    let cfg = ProbeConfig {
        descent: descent.resolve(&mut cx.file, cx.tol.eps_zero)?,
        trials: pick(trials, cx.file.trials, d.trials),
        tau_succ: pick(tau_succ, cx.file.tau_succ, d.tau_succ),
        tau_trap: pick(tau_trap, cx.file.tau_trap, d.tau_trap),
        seed: pick(seed, cx.file.seed, d.seed),
        execution: Execution::Parallel,
    };
    let report = conjecture_probe(&s, &init, &cfg)?;
    eprintln!(
        "successes {}, trapped {}, undecided {} of {}",
        report.successes, report.trapped, report.undecided, report.trials
    );
    emit_json(cx.out.as_deref(), &report)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Certify { point, ground_truth, common } => cmd_certify(point, ground_truth, &common),
        Command::Landscape { ground_truth, grid, common } => cmd_landscape(ground_truth, &grid, &common),
        Command::Flow { ground_truth, grid, common } => cmd_flow(ground_truth, &grid, &common),
        Command::Descend { ground_truth, u0, seed, descent, common } => {
            cmd_descend(ground_truth, u0, seed, &descent, &common)
        }
        Command::Conjecture { ground_truth, trials, seed, init, tau_succ, tau_trap, descent, common } => {
            cmd_conjecture(ground_truth, trials, seed, init.as_deref(), tau_succ, tau_trap, &descent, &common)
        }
        Command::GaussianSep { n, trials, seed, common } => {
            let cx = setup(&common)?;
            let report = gaussian_separation(
                pick(n, cx.file.n, 16),
                pick(trials, cx.file.trials, 100_000),
                pick(seed, cx.file.seed, 0),
                Execution::Parallel,
            )?;
            emit_json(cx.out.as_deref(), &report)
        }
        Command::GrowthCheck { ground_truth, radius, samples, seed, common } => {
            let mut cx = setup(&common)?;
            let s = require(ground_truth, cx.file.ground_truth.take(), "ground truth (-g)")?;
            let report = growth_check(
                &s,
                pick(radius, cx.file.radius, 0.05),
                pick(samples, cx.file.samples, 1000),
                pick(seed, cx.file.seed, 0),
                Execution::Parallel,
            )?;
            emit_json(cx.out.as_deref(), &report)
        }
        Command::Tilt { command } => run_tilt(command),
    }
}

fn run_tilt(command: TiltCommand) -> Result<()> {
    #[derive(Serialize)]
    struct Ex41 {
        x: f64,
        value: f64,
        derivative: f64,
    }
    #[derive(Serialize)]
    struct Ex42 {
        x: f64,
        #[serde(flatten)]
        eval: tilting::ScalarEval,
    }
    #[derive(Serialize)]
    struct Certificate<A: Serialize> {
        x0: A,
        a: A,
        #[serde(flatten)]
        certificate: SharpnessCertificate,
    }

    match command {
        TiltCommand::Ex41Eval { x, out } => {
            let (value, derivative) = eval_ex41(x);
            emit_json(out.as_deref(), &Ex41 { x, value, derivative })
        }
        TiltCommand::Ex42Eval { x, out } => emit_json(out.as_deref(), &Ex42 { x, eval: eval_ex42(x) }),
        TiltCommand::Ex42Certify { x, a, out } => {
            let certificate = certify_sharp_local_min_1d(ScalarFn::Ex42, x, a);
            emit_json(out.as_deref(), &Certificate { x0: x, a, certificate })
        }
        TiltCommand::Ex41Probe { a, x0, schedule, max_iters, threshold, out } => {
            let report = tilt_divergence_probe_ex41(a, x0, &schedule, max_iters, threshold)?;
            emit_json(out.as_deref(), &report)
        }
        TiltCommand::Ex43Certify { ground_truth, point, a, out } => {
            let certificate = certify_sharp_local_min_tilted_f(&ground_truth, &point, &a)?;
            emit_json(out.as_deref(), &Certificate { x0: point, a, certificate })
        }
        TiltCommand::Samples { function, a, x_min, x_max, count, out } => {
            let samples = tilt_samples(function, a, x_min, x_max, count)?;
            let header = ["x", "g", "h_a"].map(String::from).to_vec();
            let rows: Vec<Vec<String>> = samples.iter().map(|s| vec![num(s.x), num(s.g), num(s.h_a)]).collect();
            emit_csv(out.as_deref(), &header, &rows)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(normalize_args(std::env::args())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rewrites_u0() {
        let args = normalize_args(["bin", "descend", "-u0", "random", "-u0=1,2", "-u", "-1,1"].map(String::from));
        assert_eq!(args, ["bin", "descend", "--u0", "random", "--u0=1,2", "-u", "-1,1"]);
    }

    #[test]
    fn negative_vectors_parse() {
        let cli = Cli::try_parse_from(["bin", "certify", "-u", "-1,1", "-g", "1,1"]).unwrap();
        match cli.command {
            Command::Certify { point, .. } => assert_eq!(point.unwrap().as_slice(), &[-1.0, 1.0]),
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Disagreement("x".into()).into()), 2);
        assert_eq!(exit_code(&LandscapeError::NumericalFailure("x".into()).into()), 3);
        assert_eq!(exit_code(&anyhow::Error::from(LandscapeError::ZeroGroundTruth).context("while certifying")), 1);
        assert_eq!(exit_code(&anyhow!("missing point")), 1);
    }

    #[test]
    fn init_specs() {
        assert_eq!(parse_init("gaussian").unwrap(), InitDistribution::StandardGaussian);
        assert_eq!(parse_init("box:2").unwrap(), InitDistribution::UniformBox { radius: 2.0 });
        assert!(matches!(parse_init("fixed:-1,1").unwrap(), InitDistribution::Fixed { .. }));
        assert!(parse_init("cauchy").is_err());
    }
}
