//! First-order analysis: directional derivatives, critical cones at spurious
//! points, and sharpness at the ground truth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LandscapeError, Result};
use crate::exec::Execution;
use crate::objective::objective_unchecked;
use crate::sign::sign0;
use crate::stationarity::{ground_truth_is_zero, is_stationary_closed_form, StationarityKind};
use crate::subdiff::SubdifferentialModel;
use crate::tolerance::DEFAULT_EPS_DIR;
use crate::vector::RealVector;

/// `df(u)(w)`, the support function of `∂f(u)` evaluated at `w`.
pub fn directional_derivative(u: &RealVector, ustar: &RealVector, w: &RealVector, eps_zero: f64) -> Result<f64> {
    u.check_same_dim(w)?;
    Ok(SubdifferentialModel::new(u, ustar, eps_zero)?.support(w))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConeComponent {
    /// `w_j = 0`
    Zero,
    /// `w_j ∈ ℝ`
    Free,
    /// `w_j ∈ sign·ℝ₋`
    HalfLine { sign: f64 },
}

impl ConeComponent {
    pub fn admits(self, wj: f64, tol: f64) -> bool {
        match self {
            ConeComponent::Zero => wj.abs() <= tol,
            ConeComponent::Free => true,
            ConeComponent::HalfLine { sign } => sign * wj <= tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalConeDescriptor {
    pub per_coordinate: Vec<ConeComponent>,
}

impl CriticalConeDescriptor {
    /// The cone `{0}` found at a nonzero ground truth.
    pub fn trivial(n: usize) -> Self {
        Self { per_coordinate: vec![ConeComponent::Zero; n] }
    }

    pub fn contains(&self, w: &[f64], tol: f64) -> bool {
        self.per_coordinate.len() == w.len() && self.per_coordinate.iter().zip(w).all(|(c, &x)| c.admits(x, tol))
    }
}

/// Critical cone `{w : df(u)(w) = 0}` at a spurious stationary point.
///
/// Ground truths are rejected with [`LandscapeError::GroundTruthPoint`]; use
/// [`critical_cone_or_trivial`] to get `{0}` there instead.
pub fn critical_cone(u: &RealVector, ustar: &RealVector, eps_zero: f64) -> Result<CriticalConeDescriptor> {
    let verdict = is_stationary_closed_form(u, ustar, eps_zero)?;
    if !verdict.is_stationary {
        return Err(LandscapeError::NotStationary);
    }
    if ground_truth_is_zero(ustar, eps_zero) {
        return Err(LandscapeError::ZeroGroundTruth);
    }
    if verdict.kind != StationarityKind::Spurious {
        return Err(LandscapeError::GroundTruthPoint);
    }
    if u.is_zero(eps_zero) {
        return Ok(CriticalConeDescriptor { per_coordinate: vec![ConeComponent::Free; u.dim()] });
    }
    let per_coordinate = u
        .iter()
        .zip(ustar.iter())
        .map(|(&uj, &sj)| {
            if sj.abs() <= eps_zero {
                ConeComponent::Zero
            } else if (uj.abs() - sj.abs()).abs() <= eps_zero {
                ConeComponent::HalfLine { sign: sign0(uj) }
            } else {
                ConeComponent::Free
            }
        })
        .collect();
    Ok(CriticalConeDescriptor { per_coordinate })
}

/// Like [`critical_cone`] but returns the trivial cone `{0}` at `±u*`.
pub fn critical_cone_or_trivial(u: &RealVector, ustar: &RealVector, eps_zero: f64) -> Result<CriticalConeDescriptor> {
    match critical_cone(u, ustar, eps_zero) {
        Err(LandscapeError::GroundTruthPoint) => Ok(CriticalConeDescriptor::trivial(u.dim())),
        other => other,
    }
}

pub fn cone_membership(u: &RealVector, ustar: &RealVector, w: &RealVector, eps_zero: f64) -> Result<bool> {
    u.check_same_dim(w)?;
    Ok(critical_cone(u, ustar, eps_zero)?.contains(w, DEFAULT_EPS_DIR))
}

/// `min{α, α·|supp(u*)|/2}` with `α = min_{i ∈ supp} |u*_i|`.
pub fn sharpness_coefficient(ustar: &RealVector) -> Result<f64> {
    let supp: Vec<f64> = ustar.iter().filter(|x| **x != 0.0).map(|x| x.abs()).collect();
    if supp.is_empty() {
        return Err(LandscapeError::ZeroGroundTruth);
    }
    let alpha = supp.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(alpha.min(alpha * supp.len() as f64 / 2.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub ground_truth: RealVector,
    pub radius: f64,
    pub samples: usize,
    pub seed: u64,
    pub beta_hat: f64,
    pub violations: usize,
    /// Smallest `(f(u) − f(u*)) / ‖u − u*‖₁` seen, `None` if every sample hit `u*`.
    pub min_ratio: Option<f64>,
}

/// Samples the ℓ∞ ball of `radius` around `u*` and counts violations of
/// `f(u) − f(u*) ≥ β̂‖u − u*‖₁` with `β̂` half the sharpness coefficient.
pub fn growth_check(
    ustar: &RealVector,
    radius: f64,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<GrowthReport> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(LandscapeError::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let beta_hat = sharpness_coefficient(ustar)? / 2.0;
    let f_star = objective_unchecked(ustar, ustar);
    let results = exec.map_indexed(samples, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ k as u64);
        let u: Vec<f64> = ustar.iter().map(|&s| s + radius * rng.random_range(-1.0..=1.0)).collect();
        let gap = objective_unchecked(&u, ustar) - f_star;
        let dist: f64 = u.iter().zip(ustar.iter()).map(|(a, b)| (a - b).abs()).sum();
        (gap < beta_hat * dist, (dist > 0.0).then(|| gap / dist))
    });
    let violations = results.iter().filter(|r| r.0).count();
    let min_ratio = results.iter().filter_map(|r| r.1).reduce(f64::min);
    Ok(GrowthReport { ground_truth: ustar.clone(), radius, samples, seed, beta_hat, violations, min_ratio })
}
