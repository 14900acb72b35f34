//! Second-order analysis at stationary points.
//!
//! The second subderivative along a critical direction is the LP
//! `max ⟨Q, wwᵀ⟩` over the face of the subdifferential's selection matrices
//! that annihilate `u`. At a spurious point `u ≠ 0` that face collapses to
//! `−Sign(u*u*ᵀ)` on the support of `u*`, and along `w = u* − u` the value is
//! `−‖u*‖₁²`, which is the escape certificate used by the point classifier.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{LandscapeError, Result};
use crate::exec::Execution;
use crate::lp::{solve, BoxEqLp, LpStatus};
use crate::objective::objective_unchecked;
use crate::sign::sign0;
use crate::stationarity::{is_stationary_closed_form, StationarityKind};
use crate::subdiff::SubdifferentialModel;
use crate::tolerance::Tolerances;
use crate::vector::RealVector;

/// A second subderivative value; `+∞` off the critical cone.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SecondOrderValue {
    Finite(f64),
    PosInfinity,
}

impl SecondOrderValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            SecondOrderValue::Finite(v) => Some(v),
            SecondOrderValue::PosInfinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == SecondOrderValue::PosInfinity
    }
}

impl std::fmt::Display for SecondOrderValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SecondOrderValue::Finite(v) => write!(f, "{v}"),
            SecondOrderValue::PosInfinity => f.write_str("+inf"),
        }
    }
}

/// Finite values as JSON numbers, `+∞` as the string `"+inf"`.
impl Serialize for SecondOrderValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SecondOrderValue::Finite(v) => s.serialize_f64(*v),
            SecondOrderValue::PosInfinity => s.serialize_str("+inf"),
        }
    }
}

impl<'de> Deserialize<'de> for SecondOrderValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(SecondOrderValue::Finite(v)),
            Raw::Text(s) if s == "+inf" => Ok(SecondOrderValue::PosInfinity),
            Raw::Text(s) => Err(serde::de::Error::custom(format!("expected a number or \"+inf\", got {s:?}"))),
        }
    }
}

/// `{Q symmetric in the sign boxes : Q u = 0}`, parametrized by the free
/// pairs: `kernel_matrix · z = kernel_rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondOrderFace {
    pub fixed_part: DMatrix<f64>,
    pub free_pairs: Vec<(usize, usize)>,
    pub kernel_matrix: DMatrix<f64>,
    pub kernel_rhs: Vec<f64>,
}

impl SecondOrderFace {
    pub fn from_model(model: &SubdifferentialModel) -> Self {
        Self {
            fixed_part: model.fixed_part().clone(),
            free_pairs: model.free_pairs().to_vec(),
            kernel_matrix: model.free_columns(),
            kernel_rhs: model.fixed_gradient().iter().map(|x| -x).collect(),
        }
    }

    pub fn matrix(&self, z: &[f64]) -> DMatrix<f64> {
        let mut q = self.fixed_part.clone();
        for (&(i, j), &v) in self.free_pairs.iter().zip(z) {
            q[(i, j)] = v;
            q[(j, i)] = v;
        }
        q
    }

    /// `max ⟨Q, wwᵀ⟩` over the face.
    pub fn max_quadratic(&self, w: &[f64], eps_lp: f64) -> Result<f64> {
        let wv = DVector::from_column_slice(w);
        let constant = wv.dot(&(&self.fixed_part * &wv));
        let p = self.free_pairs.len();
        if p == 0 {
            let residual = self.kernel_rhs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if residual > eps_lp {
                return Err(LandscapeError::NumericalFailure(format!(
                    "second-order face is empty (residual {residual:e})"
                )));
            }
            return Ok(constant);
        }
        let objective: Vec<f64> =
            self.free_pairs.iter().map(|&(i, j)| if i == j { w[i] * w[i] } else { 2.0 * w[i] * w[j] }).collect();
        let lp =
            BoxEqLp::new(vec![-1.0; p], vec![1.0; p], self.kernel_matrix.clone(), self.kernel_rhs.clone(), objective)?;
        let res = solve(&lp, eps_lp).into_checked()?;
        if res.status != LpStatus::Optimal {
            return Err(LandscapeError::NumericalFailure(format!("second-order face LP reported {:?}", res.status)));
        }
        Ok(constant + res.value)
    }
}

fn require_stationary(u: &RealVector, ustar: &RealVector, eps_zero: f64) -> Result<StationarityKind> {
    let verdict = is_stationary_closed_form(u, ustar, eps_zero)?;
    if !verdict.is_stationary {
        return Err(LandscapeError::NotStationary);
    }
    Ok(verdict.kind)
}

/// `d²f(u; 0)(w)` at a stationary point `u`.
pub fn second_subderivative(
    u: &RealVector,
    ustar: &RealVector,
    w: &RealVector,
    tol: &Tolerances,
) -> Result<SecondOrderValue> {
    u.check_same_dim(w)?;
    require_stationary(u, ustar, tol.eps_zero)?;
    let model = SubdifferentialModel::new(u, ustar, tol.eps_zero)?;
    if model.support(w) > tol.eps_dir {
        return Ok(SecondOrderValue::PosInfinity);
    }
    let face = SecondOrderFace::from_model(&model);
    Ok(SecondOrderValue::Finite(face.max_quadratic(w, tol.eps_lp)?))
}

/// Closed form at a spurious point `u ≠ 0`: the face is the single matrix
/// `−Sign(u*u*ᵀ)` on `supp(u*)`, so the value is `−(Σ_supp Sign(u*_i) w_i)²`.
pub fn second_subderivative_spurious(
    u: &RealVector,
    ustar: &RealVector,
    w: &RealVector,
    tol: &Tolerances,
) -> Result<SecondOrderValue> {
    u.check_same_dim(w)?;
    if require_stationary(u, ustar, tol.eps_zero)? != StationarityKind::Spurious || u.is_zero(tol.eps_zero) {
        return Err(LandscapeError::NotSpurious);
    }
    let model = SubdifferentialModel::new(u, ustar, tol.eps_zero)?;
    if model.support(w) > tol.eps_dir {
        return Ok(SecondOrderValue::PosInfinity);
    }
    let inner: f64 =
        ustar.iter().zip(w.iter()).filter(|(s, _)| s.abs() > tol.eps_zero).map(|(&s, &x)| sign0(s) * x).sum();
    Ok(SecondOrderValue::Finite(-inner * inner))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EscapeCurvature {
    pub direction: RealVector,
    pub value: f64,
}

/// Escape direction `u* − u` at a spurious point and its curvature
/// `−‖u*‖₁²`, verified against the LP.
pub fn escape_curvature(u: &RealVector, ustar: &RealVector, tol: &Tolerances) -> Result<EscapeCurvature> {
    u.check_same_dim(ustar)?;
    match is_stationary_closed_form(u, ustar, tol.eps_zero)?.kind {
        StationarityKind::Spurious => {}
        _ => return Err(LandscapeError::NotSpurious),
    }
    let direction = ustar.sub(u);
    let expected = -ustar.norm1().powi(2);
    let found = match second_subderivative(u, ustar, &direction, tol)? {
        SecondOrderValue::Finite(v) => v,
        SecondOrderValue::PosInfinity => f64::INFINITY,
    };
    if !((found - expected).abs() <= 1e-9 * expected.abs().max(1.0)) {
        return Err(LandscapeError::CurvatureMismatch { expected, found });
    }
    Ok(EscapeCurvature { direction, value: found })
}

/// Sampling grid for [`second_subderivative_numeric`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericGrid {
    pub t0: f64,
    pub rho: f64,
    /// Levels `k = 0..=levels`.
    pub levels: usize,
    /// Ball radius at `t0` relative to `‖w‖₂`; it shrinks with `t`.
    pub ball_scale: f64,
    pub ball_samples: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for NumericGrid {
    fn default() -> Self {
        Self {
            t0: 1e-2,
            rho: 0.5,
            levels: 12,
            ball_scale: 1e-3,
            ball_samples: 64,
            seed: 0,
            execution: Execution::Parallel,
        }
    }
}

impl NumericGrid {
    fn validate(&self) -> Result<()> {
        let ok = self.t0 > 0.0
            && self.t0.is_finite()
            && self.rho > 0.0
            && self.rho < 1.0
            && self.ball_scale >= 0.0
            && self.ball_scale.is_finite();
        if ok {
            Ok(())
        } else {
            Err(LandscapeError::InvalidArgument(format!("invalid numeric grid {self:?}")))
        }
    }
}

/// Minimum of `[f(u + t w′) − f(u)] / (½t²)` over `t = t0·ρᵏ` and `w′` in a
/// ball around `w` of radius `ball_scale·‖w‖₂·t/t0` (plus `w` itself).
pub fn second_subderivative_numeric(
    u: &RealVector,
    ustar: &RealVector,
    w: &RealVector,
    grid: &NumericGrid,
) -> Result<f64> {
    u.check_same_dim(ustar)?;
    u.check_same_dim(w)?;
    grid.validate()?;
    let n = u.dim();
    let fu = objective_unchecked(u, ustar);
    let delta = grid.ball_scale * w.norm2();
    let per_level = grid.execution.map_indexed(grid.levels + 1, |k| {
        let t = grid.t0 * grid.rho.powi(k as i32);
        let radius = delta * t / grid.t0;
        let quotient = |dir: &[f64]| {
            let x: Vec<f64> = u.iter().zip(dir).map(|(a, d)| a + t * d).collect();
            (objective_unchecked(&x, ustar) - fu) / (0.5 * t * t)
        };
        let mut best = quotient(w);
        if radius > 0.0 {
            let mut rng = ChaCha8Rng::seed_from_u64(grid.seed ^ k as u64);
            let unit = Uniform::new(0.0f64, 1.0).expect("valid range");
            for _ in 0..grid.ball_samples {
                let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
                let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm == 0.0 {
                    continue;
                }
                let r = radius * unit.sample(&mut rng).powf(1.0 / n as f64);
                let dir: Vec<f64> = w.iter().zip(&g).map(|(a, b)| a + r * b / norm).collect();
                best = best.min(quotient(&dir));
            }
        }
        best
    });
    Ok(per_level.into_iter().fold(f64::INFINITY, f64::min))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PointKind {
    GlobalMin,
    SpuriousStationary,
    NotStationary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointClassification {
    pub kind: PointKind,
    pub escape_direction: Option<RealVector>,
    pub curvature: Option<f64>,
    /// Unit-length (ℓ2) direction of negative directional derivative.
    pub descent_direction: Option<RealVector>,
    pub descent_slope: Option<f64>,
}

/// Global minima, spurious points with an escape certificate, and
/// non-stationary points with a verified descent direction.
pub fn classify_point(u: &RealVector, ustar: &RealVector, tol: &Tolerances) -> Result<PointClassification> {
    let verdict = is_stationary_closed_form(u, ustar, tol.eps_zero)?;
    match verdict.kind {
        StationarityKind::GroundTruthPlus | StationarityKind::GroundTruthMinus => Ok(PointClassification {
            kind: PointKind::GlobalMin,
            escape_direction: None,
            curvature: None,
            descent_direction: None,
            descent_slope: None,
        }),
        StationarityKind::Spurious => {
            let esc = escape_curvature(u, ustar, tol)?;
            Ok(PointClassification {
                kind: PointKind::SpuriousStationary,
                escape_direction: Some(esc.direction),
                curvature: Some(esc.value),
                descent_direction: None,
                descent_slope: None,
            })
        }
        StationarityKind::NotStationary => {
            let model = SubdifferentialModel::new(u, ustar, tol.eps_zero)?;
            let (d, slope) = descent_direction(&model, tol)?;
            Ok(PointClassification {
                kind: PointKind::NotStationary,
                escape_direction: None,
                curvature: None,
                descent_direction: Some(d),
                descent_slope: Some(slope),
            })
        }
    }
}

fn unit(v: &[f64]) -> Option<RealVector> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (norm > 0.0).then(|| RealVector::new(v.iter().map(|x| x / norm).collect()).ok()).flatten()
}

/// Negative midpoint subgradient, or the steepest-descent LP when that fails.
pub(crate) fn descent_direction(model: &SubdifferentialModel, tol: &Tolerances) -> Result<(RealVector, f64)> {
    if let Some(d) = unit(&model.midpoint().neg()) {
        let slope = model.support(&d);
        if slope < -tol.eps_dir {
            return Ok((d, slope));
        }
    }
    steepest_descent(model, tol)
}

/// `min σ(d)` s.t. `‖d‖₁ <= 1`, where `σ` is the support function of `∂f(u)`.
/// By minimax duality the optimal value is `−min { ‖g‖_∞ : g ∈ ∂f(u) }`.
pub(crate) fn steepest_descent(model: &SubdifferentialModel, tol: &Tolerances) -> Result<(RealVector, f64)> {
    let n = model.dim();
    let cols = model.free_columns();
    let p = cols.ncols();
    let lin = model.fixed_gradient();
    let reach: Vec<f64> = (0..p).map(|q| cols.column(q).amax()).collect();

    // columns: d⁺ (n) | d⁻ (n) | t (p) | r⁺ (p) | r⁻ (p) | s
    let total = 2 * n + 3 * p + 1;
    let rows = 2 * p + 1;
    let mut a = DMatrix::zeros(rows, total);
    let lower = vec![0.0; total];
    let mut upper = vec![1.0; total];
    for q in 0..p {
        for i in 0..n {
            a[(q, i)] = cols[(i, q)];
            a[(q, n + i)] = -cols[(i, q)];
            a[(p + q, i)] = -cols[(i, q)];
            a[(p + q, n + i)] = cols[(i, q)];
        }
        // a·d − t + r⁺ = 0 and −a·d − t + r⁻ = 0
        a[(q, 2 * n + q)] = -1.0;
        a[(p + q, 2 * n + q)] = -1.0;
        a[(q, 2 * n + p + q)] = 1.0;
        a[(p + q, 2 * n + 2 * p + q)] = 1.0;
        upper[2 * n + q] = reach[q];
        upper[2 * n + p + q] = 2.0 * reach[q];
        upper[2 * n + 2 * p + q] = 2.0 * reach[q];
    }
    for i in 0..2 * n {
        a[(2 * p, i)] = 1.0;
    }
    a[(2 * p, total - 1)] = 1.0;
    let mut rhs = vec![0.0; rows];
    rhs[2 * p] = 1.0;

    let mut c = vec![0.0; total];
    for i in 0..n {
        c[i] = -lin[i];
        c[n + i] = lin[i];
    }
    for q in 0..p {
        c[2 * n + q] = -1.0;
    }
    let lp = BoxEqLp::new(lower, upper, a, rhs, c)?;
    let res = solve(&lp, tol.eps_lp).into_checked()?;
    if res.status != LpStatus::Optimal {
        return Err(LandscapeError::NumericalFailure("steepest-descent LP reported infeasible".into()));
    }
    let d: Vec<f64> = (0..n).map(|i| res.solution[i] - res.solution[n + i]).collect();
    let d = unit(&d).ok_or_else(|| LandscapeError::NumericalFailure("steepest-descent direction vanished".into()))?;
    let slope = model.support(&d);
    if !(slope < -tol.eps_dir) {
        return Err(LandscapeError::NumericalFailure(format!("no descent direction found (best slope {slope:e})")));
    }
    Ok((d, slope))
}
