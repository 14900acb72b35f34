//! Tilted objectives `h_a(x) = g(x) − a·x` and the scalar counterexamples
//! showing that a small tilt can push the minimizer to infinity, create
//! countably many sharp local minima, or turn a spurious stationary point of
//! the factorization objective into a sharp local minimum.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::StepSchedule;
use crate::error::{LandscapeError, Result};
use crate::subdiff::SubdifferentialModel;
use crate::tolerance::DEFAULT_EPS_ZERO;
use crate::vector::RealVector;

pub const DEFAULT_ESCAPE_THRESHOLD: f64 = 1e3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarFn {
    /// `C¹` with a plateau at height `0.5` for `|x| >= 2`.
    Ex41,
    /// Nonsmooth at every integer, with a unique minimizer at 0.
    Ex42,
}

impl FromStr for ScalarFn {
    type Err = LandscapeError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ex41" => Ok(ScalarFn::Ex41),
            "ex42" => Ok(ScalarFn::Ex42),
            _ => Err(LandscapeError::InvalidArgument(format!("unknown scalar function '{s}'"))),
        }
    }
}

/// Value and Fréchet subdifferential `[lo, hi]` of a scalar function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarEval {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Returns `(g(x), g′(x))`.
pub fn eval_ex41(x: f64) -> (f64, f64) {
    if x <= -2.0 {
        (0.5, 0.0)
    } else if x <= -1.0 {
        (-(x + 2.0).powi(2) / 2.0 + 0.5, -x - 2.0)
    } else if x <= 1.0 {
        (x * x / 2.0 - 0.5, x)
    } else if x <= 2.0 {
        (-(x - 2.0).powi(2) / 2.0 + 0.5, -x + 2.0)
    } else {
        (0.5, 0.0)
    }
}

pub fn eval_ex42(x: f64) -> ScalarEval {
    let value = if x <= 0.0 {
        let fl = (-x).floor();
        -(x + fl + 1.0).powi(2) / 2.0 + 0.5 + fl / 2.0
    } else {
        let fl = x.floor();
        -(x - fl - 1.0).powi(2) / 2.0 + 0.5 + fl / 2.0
    };
    let integer = x == x.floor();
    let (lo, hi) = if x == 0.0 {
        (-1.0, 1.0)
    } else if x < 0.0 && integer {
        (-1.0, 0.0)
    } else if x < 0.0 {
        let v = -(x - x.floor());
        (v, v)
    } else if integer {
        (0.0, 1.0)
    } else {
        let v = -(x - x.floor()) + 1.0;
        (v, v)
    };
    ScalarEval { value, lo, hi }
}

impl ScalarFn {
    pub fn eval(self, x: f64) -> ScalarEval {
        match self {
            ScalarFn::Ex41 => {
                let (value, d) = eval_ex41(x);
                ScalarEval { value, lo: d, hi: d }
            }
            ScalarFn::Ex42 => eval_ex42(x),
        }
    }

    /// `h_a(x) = g(x) − a·x`
    pub fn tilted(self, x: f64, a: f64) -> f64 {
        self.eval(x).value - a * x
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessCertificate {
    pub certified: bool,
    /// Largest `m` with `dh_a(x0)(d) >= m·‖d‖₁`; 0 when not certified.
    pub modulus: f64,
}

impl SharpnessCertificate {
    /// From the per-coordinate intervals of `∂h_a(x0)`: sharp iff every
    /// interval has 0 strictly inside it.
    fn from_intervals(intervals: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut modulus = f64::INFINITY;
        for (lo, hi) in intervals {
            if !(lo < 0.0 && 0.0 < hi) {
                return Self { certified: false, modulus: 0.0 };
            }
            modulus = modulus.min(-lo).min(hi);
        }
        Self { certified: true, modulus }
    }
}

/// Sharp-local-minimum test at `x0` for `h_a = g − a·x`:
/// `dh_a(x0)(d) = max{(lo − a)d, (hi − a)d}`.
pub fn certify_sharp_local_min_1d(g: ScalarFn, x0: f64, a: f64) -> SharpnessCertificate {
    let e = g.eval(x0);
    SharpnessCertificate::from_intervals([(e.lo - a, e.hi - a)])
}

/// Sharp-local-minimum test for `h_a(u) = f(u) − aᵀu` at `u0 = ±(−1, 1)` with
/// `u* = (1, 1)`, where `∂f(u0)` is a box.
pub fn certify_sharp_local_min_tilted_f(
    ustar: &RealVector,
    u0: &RealVector,
    a: &RealVector,
) -> Result<SharpnessCertificate> {
    let supported = ustar.as_slice() == [1.0, 1.0] && (u0.as_slice() == [-1.0, 1.0] || u0.as_slice() == [1.0, -1.0]);
    if !supported {
        return Err(LandscapeError::UnsupportedInstance(format!(
            "only u* = (1,1) with u0 = ±(-1,1) is supported, got u* = ({ustar}), u0 = ({u0})"
        )));
    }
    u0.check_same_dim(a)?;
    let model = SubdifferentialModel::new(u0, ustar, DEFAULT_EPS_ZERO)?;
    let center = model.fixed_gradient();
    let mut radius = vec![0.0; u0.dim()];
    for &(i, j) in model.free_pairs() {
        if i != j {
            return Err(LandscapeError::UnsupportedInstance("subdifferential is not a box".into()));
        }
        radius[i] += u0[i].abs();
    }
    Ok(SharpnessCertificate::from_intervals(
        (0..u0.dim()).map(|i| (center[i] - radius[i] - a[i], center[i] + radius[i] - a[i])),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub a: f64,
    pub x0: f64,
    pub schedule: StepSchedule,
    pub max_iters: usize,
    pub escape_threshold: f64,
    pub iterations: usize,
    pub last: f64,
    pub escaped: bool,
}

/// Gradient descent on the tilted plateau function
/// `x ← x − α_k (g′(x) − a)`, stopping once `|x|` passes the threshold.
pub fn tilt_divergence_probe_ex41(
    a: f64,
    x0: f64,
    schedule: &StepSchedule,
    max_iters: usize,
    escape_threshold: f64,
) -> Result<DivergenceReport> {
    schedule.validate()?;
    if !(a.is_finite() && x0.is_finite() && escape_threshold > 0.0) {
        return Err(LandscapeError::InvalidArgument("a, x0 and the threshold must be finite".into()));
    }
    let mut x = x0;
    let mut iterations = 0;
    while iterations < max_iters && x.abs() <= escape_threshold {
        iterations += 1;
        let (_, d) = eval_ex41(x);
        x -= schedule.step(iterations) * (d - a);
    }
    Ok(DivergenceReport {
        a,
        x0,
        schedule: *schedule,
        max_iters,
        escape_threshold,
        iterations,
        last: x,
        escaped: x.abs() > escape_threshold,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TiltSample {
    pub x: f64,
    pub g: f64,
    pub h_a: f64,
}

/// `count` evenly spaced samples of `g` and `h_a` on `[x_min, x_max]`.
pub fn tilt_samples(g: ScalarFn, a: f64, x_min: f64, x_max: f64, count: usize) -> Result<Vec<TiltSample>> {
    if !(x_min.is_finite() && x_max.is_finite() && x_min <= x_max) || count == 0 {
        return Err(LandscapeError::InvalidArgument(format!(
            "invalid sampling range [{x_min}, {x_max}] with {count} points"
        )));
    }
    Ok((0..count)
        .map(|i| {
            let x = if count == 1 {
                0.5 * (x_min + x_max)
            } else {
                x_min + (x_max - x_min) * i as f64 / (count - 1) as f64
            };
            let gx = g.eval(x).value;
            TiltSample { x, g: gx, h_a: gx - a * x }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ex41_branches() {
        assert_eq!(eval_ex41(0.0), (-0.5, 0.0));
        assert_eq!(eval_ex41(3.0), (0.5, 0.0));
        assert_eq!(eval_ex41(1.5), (0.375, 0.5));
        assert_eq!(eval_ex41(-1.5), (0.375, -0.5));
        // branch edges are continuous in value and derivative
        for edge in [-2.0f64, -1.0, 1.0, 2.0] {
            let (l, r) = (eval_ex41(edge), eval_ex41(edge + 1e-12));
            assert!((l.0 - r.0).abs() < 1e-11 && (l.1 - r.1).abs() < 1e-11);
        }
    }

    #[test]
    fn ex42_table() {
        assert_eq!(eval_ex42(0.0), ScalarEval { value: 0.0, lo: -1.0, hi: 1.0 });
        assert_eq!(eval_ex42(1.0), ScalarEval { value: 0.5, lo: 0.0, hi: 1.0 });
        assert_eq!(eval_ex42(-2.5), ScalarEval { value: 1.375, lo: -0.5, hi: -0.5 });
        assert_eq!(eval_ex42(-3.0), ScalarEval { value: 1.5, lo: -1.0, hi: 0.0 });
        assert_eq!(eval_ex42(2.25).lo, 0.75);
    }

    #[test]
    fn ex42_is_continuous_at_integers() {
        for k in -6..=6 {
            let x = k as f64;
            for side in [x - 1e-10, x + 1e-10] {
                assert!((eval_ex42(side).value - eval_ex42(x).value).abs() < 1e-9, "{x}");
            }
        }
    }

    #[test]
    fn certify_1d_examples() {
        let c = certify_sharp_local_min_1d(ScalarFn::Ex42, 3.0, 0.45);
        assert!(c.certified);
        assert_eq!(c.modulus, 0.45);
        assert_eq!(
            certify_sharp_local_min_1d(ScalarFn::Ex42, 3.0, 0.0),
            SharpnessCertificate { certified: false, modulus: 0.0 }
        );
        assert!(!certify_sharp_local_min_1d(ScalarFn::Ex42, -1.0, 0.45).certified);
        assert!(!certify_sharp_local_min_1d(ScalarFn::Ex41, 3.0, 0.45).certified);
        for k in 1..=10 {
            assert!(certify_sharp_local_min_1d(ScalarFn::Ex42, -(k as f64), -0.45).certified);
            assert!(!certify_sharp_local_min_1d(ScalarFn::Ex42, k as f64, -0.45).certified);
        }
    }

    #[test]
    fn certify_tilted_f_examples() {
        let s = RealVector::new(vec![1.0, 1.0]).unwrap();
        let u0 = RealVector::new(vec![-1.0, 1.0]).unwrap();
        let cert =
            |a: [f64; 2]| certify_sharp_local_min_tilted_f(&s, &u0, &RealVector::new(a.to_vec()).unwrap()).unwrap();
        assert_eq!(cert([-1.0, 1.0]), SharpnessCertificate { certified: true, modulus: 1.0 });
        assert_eq!(cert([0.0, 0.0]), SharpnessCertificate { certified: false, modulus: 0.0 });
        assert_eq!(cert([-0.5, 1.5]), SharpnessCertificate { certified: true, modulus: 0.5 });

        // the mirrored spurious point works with the mirrored tilt
        let c = certify_sharp_local_min_tilted_f(&s, &u0.neg(), &RealVector::new(vec![1.0, -1.0]).unwrap()).unwrap();
        assert!(c.certified);

        let other = RealVector::new(vec![0.5, -0.5]).unwrap();
        assert!(matches!(
            certify_sharp_local_min_tilted_f(&s, &other, &s),
            Err(LandscapeError::UnsupportedInstance(_))
        ));
    }

    #[test]
    fn divergence_examples() {
        let sched = StepSchedule::InvSqrtK { c: 100.0 };
        let up = tilt_divergence_probe_ex41(0.01, 3.0, &sched, 1_000_000, DEFAULT_ESCAPE_THRESHOLD).unwrap();
        assert!(up.escaped && up.last > 1e3);
        let down = tilt_divergence_probe_ex41(-0.01, -3.0, &sched, 1_000_000, DEFAULT_ESCAPE_THRESHOLD).unwrap();
        assert!(down.escaped && down.last < -1e3);
        let still = tilt_divergence_probe_ex41(0.0, 0.0, &sched, 1000, DEFAULT_ESCAPE_THRESHOLD).unwrap();
        assert_eq!(still.last, 0.0);
        assert!(!still.escaped);
    }

    #[test]
    fn samples_cover_the_range() {
        let s = tilt_samples(ScalarFn::Ex42, 0.45, -3.0, 3.0, 7).unwrap();
        assert_eq!(s.iter().map(|p| p.x).collect::<Vec<_>>(), vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
        assert_eq!(s[4].h_a, 0.5 - 0.45);
        assert!(tilt_samples(ScalarFn::Ex41, 0.0, 1.0, 0.0, 3).is_err());
    }

    proptest! {
        #[test]
        fn ex41_is_one_weakly_convex(x in -5.0f64..5.0, y in -5.0f64..5.0) {
            let (dx, dy) = (eval_ex41(x).1, eval_ex41(y).1);
            prop_assert!((dx - dy) * (x - y) >= -(x - y).powi(2) - 1e-12);
        }

        #[test]
        fn ex42_is_one_weakly_convex(x in -8.0f64..8.0, y in -8.0f64..8.0, kx in 0usize..4, ky in 0usize..4) {
            // integers are hit on purpose so the interval endpoints are exercised
            let x = if kx == 0 { x.round() } else { x };
            let y = if ky == 0 { y.round() } else { y };
            let (ex, ey) = (eval_ex42(x), eval_ex42(y));
            for v in [ex.lo, ex.hi] {
                for w in [ey.lo, ey.hi] {
                    prop_assert!((v - w) * (x - y) >= -(x - y).powi(2) - 1e-12);
                }
            }
        }

        #[test]
        fn certified_minima_are_genuine(k in 1i32..=10, a in 0.05f64..0.95) {
            let x0 = k as f64;
            let c = certify_sharp_local_min_1d(ScalarFn::Ex42, x0, a);
            prop_assert!(c.certified);
            let h0 = ScalarFn::Ex42.tilted(x0, a);
            for delta in [1e-4, 1e-3, 1e-2] {
                for x in [x0 - delta, x0 + delta] {
                    prop_assert!(ScalarFn::Ex42.tilted(x, a) >= h0 + c.modulus / 2.0 * delta - 1e-12);
                }
            }
        }
    }
}
