//! Stationarity certification.
//!
//! The stationary set of `f` is the polytope
//! `{u : |u_i| <= |u*_i|, Σ Sign(u*_i) u_i = 0}` together with the two ground
//! truths `±u*`. Membership is decided two ways: directly from that closed
//! form, and by an LP that searches the subdifferential for the zero vector.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{LandscapeError, Result};
use crate::exec::Execution;
use crate::sign::sign0;
use crate::subdiff::SubdifferentialModel;
use crate::tolerance::Tolerances;
use crate::vector::RealVector;

pub const BISECTION_TOL: f64 = 1e-12;
pub const BISECTION_MAX_ITERS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StationarityKind {
    GroundTruthPlus,
    GroundTruthMinus,
    Spurious,
    NotStationary,
}

impl StationarityKind {
    pub fn is_ground_truth(self) -> bool {
        matches!(self, StationarityKind::GroundTruthPlus | StationarityKind::GroundTruthMinus)
    }

    /// The kind seen after replacing `u` by `−u`.
    pub fn flipped(self) -> Self {
        match self {
            StationarityKind::GroundTruthPlus => StationarityKind::GroundTruthMinus,
            StationarityKind::GroundTruthMinus => StationarityKind::GroundTruthPlus,
            k => k,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StationarityVerdict {
    pub is_stationary: bool,
    pub kind: StationarityKind,
    /// Symmetric selection matrix `Z` inside the sign boxes with `Z u ≈ 0`.
    pub witness: Option<DMatrix<f64>>,
    /// `min ‖Z u‖_∞` over the sign boxes, when it was computed.
    pub violation: Option<f64>,
}

impl StationarityVerdict {
    fn not_stationary(violation: Option<f64>) -> Self {
        Self { is_stationary: false, kind: StationarityKind::NotStationary, witness: None, violation }
    }
}

fn ground_truth_kind(u: &[f64], ustar: &[f64], eps: f64) -> Option<StationarityKind> {
    let plus = u.iter().zip(ustar).all(|(a, b)| (a - b).abs() <= eps);
    if plus {
        return Some(StationarityKind::GroundTruthPlus);
    }
    let minus = u.iter().zip(ustar).all(|(a, b)| (a + b).abs() <= eps);
    minus.then_some(StationarityKind::GroundTruthMinus)
}

pub(crate) fn ground_truth_is_zero(ustar: &[f64], eps_zero: f64) -> bool {
    ustar.iter().all(|x| x.abs() <= eps_zero)
}

fn sign_vector(ustar: &[f64], eps_zero: f64) -> Vec<f64> {
    ustar.iter().map(|&x| if x.abs() <= eps_zero { 0.0 } else { sign0(x) }).collect()
}

/// Box-and-hyperplane test, without the ground-truth check.
pub(crate) fn on_spurious_polytope(u: &[f64], ustar: &[f64], eps_zero: f64) -> bool {
    let in_box =
        u.iter().zip(ustar).all(
            |(&a, &b)| {
                if b.abs() <= eps_zero {
                    a.abs() <= eps_zero
                } else {
                    a.abs() <= b.abs() + eps_zero
                }
            },
        );
    if !in_box {
        return false;
    }
    let s = sign_vector(ustar, eps_zero);
    let hyper: f64 = s.iter().zip(u).map(|(a, b)| a * b).sum();
    let scale: f64 = 1.0 + u.iter().map(|x| x.abs()).sum::<f64>();
    hyper.abs() <= eps_zero * scale
}

/// Closed-form certificate from the box-and-hyperplane characterization.
pub fn is_stationary_closed_form(u: &RealVector, ustar: &RealVector, eps_zero: f64) -> Result<StationarityVerdict> {
    u.check_same_dim(ustar)?;
    let n = u.dim();

    if ground_truth_is_zero(ustar, eps_zero) {
        // f = ½‖uuᵀ‖₁ has the origin as its only stationary point
        return Ok(if u.is_zero(eps_zero) {
            StationarityVerdict {
                is_stationary: true,
                kind: StationarityKind::GroundTruthPlus,
                witness: Some(DMatrix::zeros(n, n)),
                violation: None,
            }
        } else {
            StationarityVerdict::not_stationary(None)
        });
    }

    if let Some(kind) = ground_truth_kind(u, ustar, eps_zero) {
        return Ok(StationarityVerdict {
            is_stationary: true,
            kind,
            witness: Some(DMatrix::zeros(n, n)),
            violation: None,
        });
    }

    if on_spurious_polytope(u, ustar, eps_zero) {
        let s = sign_vector(ustar, eps_zero);
        let witness = DMatrix::from_fn(n, n, |i, j| -s[i] * s[j]);
        return Ok(StationarityVerdict {
            is_stationary: true,
            kind: StationarityKind::Spurious,
            witness: Some(witness),
            violation: None,
        });
    }
    Ok(StationarityVerdict::not_stationary(None))
}

/// LP certificate: `min ‖Z u‖_∞` over symmetric `Z` in the sign boxes.
pub fn is_stationary_lp(u: &RealVector, ustar: &RealVector, tol: &Tolerances) -> Result<StationarityVerdict> {
    let model = SubdifferentialModel::new(u, ustar, tol.eps_zero)?;
    let zero = vec![0.0; u.dim()];
    let (violation, z) = model.min_distance_inf(&zero, tol.eps_lp)?;
    if violation > tol.eps_lp {
        return Ok(StationarityVerdict::not_stationary(Some(violation)));
    }
    let kind = ground_truth_kind(u, ustar, tol.eps_zero).unwrap_or(if ground_truth_is_zero(ustar, tol.eps_zero) {
        StationarityKind::GroundTruthPlus
    } else {
        StationarityKind::Spurious
    });
    Ok(StationarityVerdict {
        is_stationary: true,
        kind,
        witness: Some(model.selection_matrix(&z)),
        violation: Some(violation),
    })
}

/// Checks a witness: symmetric, inside the sign boxes, and `‖Z u‖_∞ <= eps_lp`.
pub fn witness_is_valid(witness: &DMatrix<f64>, u: &RealVector, ustar: &RealVector, tol: &Tolerances) -> Result<bool> {
    let model = SubdifferentialModel::new(u, ustar, tol.eps_zero)?;
    if model.validate_selection(witness).is_err() {
        return Ok(false);
    }
    let zu = witness * nalgebra::DVector::from_column_slice(u);
    Ok(zu.amax() <= tol.eps_lp)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub point: RealVector,
    pub distance: f64,
}

fn clipped(y: &[f64], bound: &[f64], s: &[f64], lambda: f64) -> Vec<f64> {
    y.iter()
        .zip(bound)
        .zip(s)
        .map(|((&yi, &b), &si)| if b == 0.0 { 0.0 } else { (yi - lambda * si).clamp(-b, b) })
        .collect()
}

fn hyperplane(s: &[f64], x: &[f64]) -> f64 {
    s.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Euclidean projection onto the spurious polytope
/// `{u : |u_i| <= |u*_i|, Σ Sign(u*_i) u_i = 0}`.
///
/// The solution is `clip(y − λ Sign(u*), −|u*|, |u*|)` for the multiplier λ
/// at which the hyperplane is met; `λ ↦ Σ Sign(u*_i) u_i(λ)` is nonincreasing,
/// so λ is found by bisection and then polished on the final linear piece.
pub fn project_to_spurious_set(y: &RealVector, ustar: &RealVector) -> Result<Projection> {
    y.check_same_dim(ustar)?;
    if ustar.iter().all(|&x| x == 0.0) {
        return Err(LandscapeError::ZeroGroundTruth);
    }
    let bound: Vec<f64> = ustar.iter().map(|x| x.abs()).collect();
    let s: Vec<f64> = ustar.iter().map(|&x| sign0(x)).collect();
    let phi = |lambda: f64| hyperplane(&s, &clipped(y, &bound, &s, lambda));

    let reach = y.norm_inf() + ustar.norm_inf() + 1.0;
    let (mut lo, mut hi) = (-reach, reach);
    let mut iterations = 0;
    while hi - lo > BISECTION_TOL && iterations < BISECTION_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        if phi(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let mut lambda = 0.5 * (lo + hi);

    // on the final bracket φ is affine; solve it exactly
    let x = clipped(y, &bound, &s, lambda);
    let free: Vec<usize> = (0..y.dim()).filter(|&i| s[i] != 0.0 && x[i].abs() < bound[i]).collect();
    if !free.is_empty() {
        let clipped_part: f64 = (0..y.dim()).filter(|i| !free.contains(i)).map(|i| s[i] * x[i]).sum();
        let free_part: f64 = free.iter().map(|&i| s[i] * y[i]).sum();
        let exact = (free_part + clipped_part) / free.len() as f64;
        if phi(exact).abs() <= phi(lambda).abs() {
            lambda = exact;
        }
    }

    let point = clipped(y, &bound, &s, lambda);
    let residual = hyperplane(&s, &point);
    if residual.abs() > 1e-9 * (1.0 + ustar.norm1()) {
        return Err(LandscapeError::BisectionFailure { iterations, residual });
    }
    let point = RealVector::new(point)?;
    let distance = point.sub(y).norm2();
    Ok(Projection { point, distance })
}

/// `min(‖y − u*‖₂, ‖y + u*‖₂)`
pub fn distance_to_ground_truths(y: &[f64], ustar: &[f64]) -> f64 {
    let (mut plus, mut minus) = (0.0, 0.0);
    for (a, b) in y.iter().zip(ustar) {
        plus += (a - b) * (a - b);
        minus += (a + b) * (a + b);
    }
    plus.min(minus).sqrt()
}

/// Distance to the whole stationary set: the polytope and `±u*`.
pub fn distance_to_stationary_set(y: &RealVector, ustar: &RealVector) -> Result<f64> {
    let poly = project_to_spurious_set(y, ustar)?.distance;
    Ok(poly.min(distance_to_ground_truths(y, ustar)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianSeparation {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub mean: f64,
    pub stderr: f64,
    /// `√(2n/π)`
    pub expected: f64,
}

/// Monte Carlo estimate of `E[‖u*‖₁/√n]` for standard Gaussian `u*`, the
/// distance from `±u*` to the hyperplane `Sign(u*)ᵀu = 0`.
pub fn gaussian_separation(n: usize, trials: usize, seed: u64, exec: Execution) -> Result<GaussianSeparation> {
    if n == 0 || trials == 0 {
        return Err(LandscapeError::InvalidArgument("n and trials must be at least 1".into()));
    }
    let root_n = (n as f64).sqrt();
    let samples = exec.map_indexed(trials, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i as u64);
        let l1: f64 = (0..n)
            .map(|_| {
                let x: f64 = StandardNormal.sample(&mut rng);
                x.abs()
            })
            .sum();
        l1 / root_n
    });
    let mean = samples.iter().sum::<f64>() / trials as f64;
    let stderr = if trials > 1 {
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (trials - 1) as f64;
        (var / trials as f64).sqrt()
    } else {
        0.0
    };
    Ok(GaussianSeparation { n, trials, seed, mean, stderr, expected: (2.0 * n as f64 / std::f64::consts::PI).sqrt() })
}
