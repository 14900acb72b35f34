//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p rank1-landscape --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rank1_landscape::dynamics::{conjecture_probe, InitDistribution, ProbeConfig};
use rank1_landscape::tilting::DEFAULT_ESCAPE_THRESHOLD;
use rank1_landscape::*;

const EPS_ZERO: f64 = 1e-9;
/// Points with a decisive quantity in `(AMBIGUITY_FLOOR, AMBIGUITY_CEIL]` sit
/// too close to a tolerance boundary for the two certifiers to be compared.
const AMBIGUITY_FLOOR: f64 = 1e-13;
const AMBIGUITY_CEIL: f64 = 10.0 * EPS_ZERO;

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rv(x: Vec<f64>) -> RealVector {
    RealVector::new(x).unwrap()
}

fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

fn within_budget(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn ambiguous(u: &[f64], s: &[f64]) -> bool {
    let in_window = |q: f64| q.abs() > AMBIGUITY_FLOOR && q.abs() <= AMBIGUITY_CEIL;
    let n = u.len();
    let residual = (0..n).flat_map(|i| (0..n).map(move |j| u[i] * u[j] - s[i] * s[j]));
    let margins = (0..n).map(|i| u[i].abs() - s[i].abs());
    let off_support = (0..n).filter(|&i| s[i].abs() <= EPS_ZERO).map(|i| u[i]);
    let hyper: f64 = (0..n).filter(|&i| s[i].abs() > EPS_ZERO).map(|i| s[i].signum() * u[i]).sum();
    let to_gt = (0..n).map(|i| u[i] - s[i]).chain((0..n).map(|i| u[i] + s[i]));
    residual.chain(margins).chain(off_support).chain(to_gt).chain([hyper]).any(in_window)
}

fn ground_truth(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut s = gaussian(rng, n);
    if n >= 3 && rng.random_bool(0.25) {
        let k = rng.random_range(0..n);
        s[k] = 0.0;
    }
    s
}

/// Spurious points `(u, u*)` built by projecting Gaussian draws.
fn spurious_corpus(count: usize, seed: u64) -> Vec<(RealVector, RealVector)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = 2 + i % 5;
            let s = rv(ground_truth(&mut rng, n));
            let y = rv(gaussian(&mut rng, n));
            (project_to_spurious_set(&y, &s).unwrap().point, s)
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut compared, mut agreed, mut excluded, mut stationary) = (0, 0, 0, 0);
    let mut first_disagreement = None;
    for n in 2..=5 {
        for k in 0..1200 {
            let s = ground_truth(&mut rng, n);
            let u: Vec<f64> = match k % 3 {
                0 => (0..n).map(|_| rng.random_range(-2.0..2.0)).collect(),
                1 => {
                    let p = project_to_spurious_set(&rv(gaussian(&mut rng, n)), &rv(s.clone())).unwrap().point;
                    if k % 2 == 0 {
                        p.into_vec()
                    } else {
                        p.iter().map(|x| x + 1e-6 * rng.random_range(-1.0..1.0)).collect()
                    }
                }
                _ => {
                    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                    let noise = if k % 2 == 0 { 0.0 } else { 1e-3 };
                    s.iter().map(|x| sign * x + noise * rng.random_range(-1.0..1.0)).collect()
                }
            };
            if ambiguous(&u, &s) {
                excluded += 1;
                continue;
            }
            let (u, s) = (rv(u), rv(s));
            let closed = is_stationary_closed_form(&u, &s, EPS_ZERO).unwrap();
            let lp = is_stationary_lp(&u, &s, &tol).unwrap();
            compared += 1;
            if closed.is_stationary == lp.is_stationary && closed.kind == lp.kind {
                agreed += 1;
                stationary += closed.is_stationary as usize;
            } else if first_disagreement.is_none() {
                first_disagreement = Some(format!("u = ({u}), u* = ({s})"));
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        agreed == compared && compared >= 4000 && within_budget(elapsed, 30),
        format!(
            "{agreed}/{compared} agree ({stationary} stationary), {excluded} excluded as ambiguous, {elapsed:.2?}{}",
            first_disagreement.map(|d| format!("; first disagreement {d}")).unwrap_or_default()
        ),
    )
}

fn criterion_2(corpus: &[(RealVector, RealVector)]) -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    let mut failures = 0;
    for (u, s) in corpus {
        let target = -s.norm1().powi(2);
        for w in [s.sub(u), s.neg().sub(u)] {
            match second_subderivative(u, s, &w, &tol).map(|v| v.finite()) {
                Ok(Some(v)) => {
                    worst = worst.max((v - target).abs());
                    if (v - target).abs() > 1e-8 {
                        failures += 1;
                    }
                }
                _ => failures += 1,
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        failures == 0 && within_budget(elapsed, 60),
        format!("{} points × 2 directions, {failures} failures, max error {worst:.1e}, {elapsed:.2?}", corpus.len()),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let v = second_subderivative(&rv(vec![0.0, 0.0]), &rv(vec![1.0, 0.0]), &rv(vec![0.0, 1.0]), &Tolerances::default());
    let elapsed = start.elapsed();
    match v {
        Ok(SecondOrderValue::Finite(x)) => {
            check((x - 1.0).abs() <= 1e-10 && within_budget(elapsed, 1), format!("value {x}, {elapsed:.2?}"))
        }
        other => check(false, format!("unexpected {other:?}")),
    }
}

fn criterion_4(corpus: &[(RealVector, RealVector)]) -> Outcome {
    let mut failures = 0;
    let mut worst = f64::NEG_INFINITY;
    for (u, s) in corpus {
        for w in [s.sub(u), s.neg().sub(u)] {
            let df = directional_derivative(u, s, &w, EPS_ZERO).unwrap();
            worst = worst.max(df);
            let member = cone_membership(u, s, &w, EPS_ZERO).unwrap_or(false);
            if df > 1e-9 || !member {
                failures += 1;
            }
        }
    }
    check(failures == 0, format!("{} directions, {failures} failures, max df {worst:.1e}", 2 * corpus.len()))
}

/// `max ⟨sym(S)u, w⟩` over the extreme selections of the free entries.
fn brute_force_support(u: &RealVector, s: &RealVector, w: &[f64]) -> f64 {
    let model = SubdifferentialModel::new(u, s, EPS_ZERO).unwrap();
    let p = model.free_pairs().len();
    let n = u.dim();
    (0u32..(1 << p))
        .map(|mask| {
            let z: Vec<f64> = (0..p).map(|q| if mask & (1 << q) != 0 { 1.0 } else { -1.0 }).collect();
            let sel = model.selection_matrix(&z);
            (0..n).map(|i| w[i] * (0..n).map(|j| sel[(i, j)] * u[j]).sum::<f64>()).sum()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut sharp_failures = 0;
    for i in 0..10_000 {
        let n = 1 + i % 6;
        let s = rv(ground_truth(&mut rng, n));
        if s.is_zero(0.0) {
            continue;
        }
        let w = rv((0..n).map(|_| rng.random_range(-3.0..3.0)).collect());
        let df = directional_derivative(&s, &s, &w, EPS_ZERO).unwrap();
        if df < sharpness_coefficient(&s).unwrap() * w.norm1() - 1e-12 {
            sharp_failures += 1;
        }
    }
    // exact equality on a 1/8 grid where every operation is exact
    let dyadic = |rng: &mut ChaCha8Rng, n: usize| -> Vec<f64> {
        (0..n).map(|_| rng.random_range(-12..=12) as f64 / 8.0).collect()
    };
    let mut exact_failures = 0;
    for i in 0..3000 {
        let n = 1 + i % 3;
        let (u, s, w) = (rv(dyadic(&mut rng, n)), rv(dyadic(&mut rng, n)), dyadic(&mut rng, n));
        let df = directional_derivative(&u, &s, &rv(w.clone()), EPS_ZERO).unwrap();
        if df != brute_force_support(&u, &s, &w) {
            exact_failures += 1;
        }
    }
    check(
        sharp_failures == 0 && exact_failures == 0,
        format!("sharpness failures {sharp_failures}/10000, enumeration mismatches {exact_failures}/3000"),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let g = gaussian_separation(16, 100_000, 6, Execution::Parallel).unwrap();
    let elapsed = start.elapsed();
    let z = (g.mean - g.expected) / g.stderr;
    check(
        z.abs() <= 4.0 && within_budget(elapsed, 10),
        format!("mean {:.4} ± {:.4}, expected {:.4}, z = {z:.2}, {elapsed:.2?}", g.mean, g.stderr, g.expected),
    )
}

fn criterion_7() -> Outcome {
    let s = rv(vec![1.0, 1.0]);
    let r = growth_check(&s, 0.05, 1000, 7, Execution::Parallel).unwrap();
    let beta_ok = r.beta_hat == 0.5 * sharpness_coefficient(&s).unwrap();
    check(
        r.violations == 0 && beta_ok,
        format!(
            "{} violations, β̂ = {}, smallest growth ratio {:.4}",
            r.violations,
            r.beta_hat,
            r.min_ratio.unwrap_or(f64::NAN)
        ),
    )
}

fn criterion_8() -> Outcome {
    let grid = NumericGrid::default();
    let cases = [([-1.0, 1.0], [1.0, 1.0], [2.0, 0.0], -4.0), ([0.0, 0.0], [1.0, 0.0], [0.0, 1.0], 1.0)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (u, s, w, exact) in cases {
        let start = Instant::now();
        let est = second_subderivative_numeric(&rv(u.to_vec()), &rv(s.to_vec()), &rv(w.to_vec()), &grid).unwrap();
        let elapsed = start.elapsed();
        let rel = ((est - exact) / exact).abs();
        pass &= rel <= 0.05 && within_budget(elapsed, 5);
        parts.push(format!("{est:.4} vs {exact} ({:.2}%, {elapsed:.2?})", 100.0 * rel));
    }
    check(pass, parts.join("; "))
}

fn criterion_9() -> Outcome {
    let sched = StepSchedule::InvSqrtK { c: 100.0 };
    let iters = 1_000_000;
    let up = tilt_divergence_probe_ex41(0.01, 3.0, &sched, iters, DEFAULT_ESCAPE_THRESHOLD).unwrap();
    let down = tilt_divergence_probe_ex41(-0.01, -3.0, &sched, iters, DEFAULT_ESCAPE_THRESHOLD).unwrap();
    let still = tilt_divergence_probe_ex41(0.0, 0.0, &sched, iters, DEFAULT_ESCAPE_THRESHOLD).unwrap();
    check(
        up.escaped && up.last > 0.0 && down.escaped && down.last < 0.0 && !still.escaped && still.last == 0.0,
        format!(
            "{sched}: a=+0.01 → {:.1} after {} steps, a=-0.01 → {:.1} after {} steps, a=0 stays at {}",
            up.last, up.iterations, down.last, down.iterations, still.last
        ),
    )
}

fn criterion_10() -> Outcome {
    let pos = (1..=10).all(|k| {
        let c = certify_sharp_local_min_1d(ScalarFn::Ex42, k as f64, 0.45);
        c.certified && (c.modulus - 0.45).abs() <= 1e-15
    });
    let neg = (1..=10).all(|k| !certify_sharp_local_min_1d(ScalarFn::Ex42, k as f64, -0.45).certified);
    check(pos && neg, format!("a=0.45 certifies 1..10: {pos}; a=-0.45 rejects 1..10: {neg}"))
}

fn criterion_11() -> Outcome {
    let s = rv(vec![1.0, 1.0]);
    let u0 = rv(vec![-1.0, 1.0]);
    let base = certify_sharp_local_min_tilted_f(&s, &u0, &rv(vec![-1.0, 1.0])).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    let mut uncertified = 0;
    for _ in 0..100 {
        let a = [rng.random_range(-2.0..0.0), rng.random_range(0.0..2.0)];
        let c = certify_sharp_local_min_tilted_f(&s, &u0, &rv(a.to_vec())).unwrap();
        let formula = (2.0 + a[0]).abs().min(a[0].abs()).min(a[1].abs()).min((2.0 - a[1]).abs());
        uncertified += (!c.certified) as usize;
        worst = worst.max((c.modulus - formula).abs());
    }
    check(
        base.certified && base.modulus == 1.0 && uncertified == 0 && worst <= 1e-12,
        format!(
            "a=(-1,1): modulus {}; 100 random tilts: {uncertified} uncertified, max formula error {worst:.1e}",
            base.modulus
        ),
    )
}

fn criterion_12() -> Outcome {
    let s = rv(vec![1.0, 1.0]);
    let cfg = ProbeConfig {
        descent: DescentConfig {
            schedule: StepSchedule::InvSqrtK { c: 0.1 },
            max_iters: 20_000,
            ..DescentConfig::default()
        },
        trials: 200,
        seed: 12,
        ..ProbeConfig::default()
    };
    let start = Instant::now();
    let a = conjecture_probe(&s, &InitDistribution::StandardGaussian, &cfg).unwrap();
    let elapsed = start.elapsed();
    let b = conjecture_probe(&s, &InitDistribution::StandardGaussian, &cfg).unwrap();
    let consistent = a.successes + a.trapped + a.undecided == a.trials;
    check(
        a == b && consistent && within_budget(elapsed, 120),
        format!(
            "successes {}, trapped {}, undecided {} of {} (deterministic rerun: {}), {elapsed:.2?}",
            a.successes,
            a.trapped,
            a.undecided,
            a.trials,
            a == b
        ),
    )
}

/// Absorbs cancellation in the secant quotient at the smallest steps.
const ROUNDING_SLACK: f64 = 1e-8;

fn criterion_13() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut points, mut failures, mut drawn) = (0, 0, 0);
    let mut worst_ratio = 0.0f64;
    while points < 1000 && drawn < 100_000 {
        drawn += 1;
        let n = rng.random_range(1..=4);
        let u: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let s: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        // stable pattern: no residual entry changes sign for t <= 1e-2
        let min_gap = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (u[i] * u[j] - s[i] * s[j]).abs())
            .fold(f64::INFINITY, f64::min);
        if min_gap <= 0.05 {
            continue;
        }
        points += 1;
        let (u, s, w) = (rv(u), rv(s), rv(w));
        let df = directional_derivative(&u, &s, &w, EPS_ZERO).unwrap();
        let c = 0.5 * w.norm1().powi(2);
        for k in 2..=6 {
            let t = 10f64.powi(-k);
            let err = (finite_difference_slope(&u, &s, &w, t).unwrap() - df).abs();
            if err > c * t + ROUNDING_SLACK {
                failures += 1;
            }
            if c > 0.0 {
                worst_ratio = worst_ratio.max((err - ROUNDING_SLACK).max(0.0) / (c * t));
            }
        }
    }
    check(
        points == 1000 && failures == 0,
        format!(
            "{points} points × 5 step sizes, {failures} failures, max (|error| − rounding)/(C·t) = {worst_ratio:.3}"
        ),
    )
}

fn main() -> ExitCode {
    let corpus = spurious_corpus(1000, 2);
    let criteria: Vec<(&str, Criterion)> = vec![
        ("closed-form and LP stationarity certifiers agree", Box::new(criterion_1)),
        ("spurious curvature equals -‖u*‖₁²", Box::new(|| criterion_2(&corpus))),
        ("positive curvature at the origin", Box::new(criterion_3)),
        ("escape directions are critical", Box::new(|| criterion_4(&corpus))),
        ("sharpness at the ground truth", Box::new(criterion_5)),
        ("Gaussian separation of ground truth and polytope", Box::new(criterion_6)),
        ("local growth around the ground truth", Box::new(criterion_7)),
        ("numeric second-subderivative estimator", Box::new(criterion_8)),
        ("tilted plateau minimizer escapes to infinity", Box::new(criterion_9)),
        ("tilt creates sharp minima at integers", Box::new(criterion_10)),
        ("tilt turns a spurious point into a sharp minimum", Box::new(criterion_11)),
        ("subgradient-method Monte Carlo probe", Box::new(criterion_12)),
        ("finite differences match directional derivatives", Box::new(criterion_13)),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{:>2}] {name}: {}", i + 1, outcome.detail);
        if !outcome.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("all {} acceptance criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
