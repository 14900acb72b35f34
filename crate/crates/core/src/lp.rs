//! Dense bounded-variable primal simplex.
//!
//! Solves `max cᵀx` subject to `A x = b` and `l <= x <= u`, with every bound
//! finite. Phase one starts from artificial columns sized to the initial
//! residual; Bland's rule (smallest eligible index enters, smallest basic index
//! leaves on ties) keeps the method from cycling on degenerate vertices.
//!
//! Problems in this crate have at most a few hundred columns, so the full
//! tableau is kept and updated in place. Basic values are recomputed from the
//! original data with an LU solve after each phase.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{LandscapeError, Result};

pub const DEFAULT_EPS_LP: f64 = crate::tolerance::DEFAULT_EPS_LP;

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-11;

/// `max cᵀx` s.t. `A x = b`, `lower <= x <= upper`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxEqLp {
    lower: Vec<f64>,
    upper: Vec<f64>,
    eq_matrix: DMatrix<f64>,
    eq_rhs: Vec<f64>,
    objective: Vec<f64>,
}

impl BoxEqLp {
    pub fn new(
        lower: Vec<f64>,
        upper: Vec<f64>,
        eq_matrix: DMatrix<f64>,
        eq_rhs: Vec<f64>,
        objective: Vec<f64>,
    ) -> Result<Self> {
        let k = lower.len();
        if upper.len() != k || objective.len() != k || eq_matrix.ncols() != k {
            return Err(LandscapeError::InvalidArgument(format!(
                "LP column counts disagree: bounds {k}/{}, objective {}, matrix {}",
                upper.len(),
                objective.len(),
                eq_matrix.ncols()
            )));
        }
        if eq_matrix.nrows() != eq_rhs.len() {
            return Err(LandscapeError::InvalidArgument(format!(
                "LP has {} equality rows but {} right-hand sides",
                eq_matrix.nrows(),
                eq_rhs.len()
            )));
        }
        let all_finite =
            lower.iter().chain(&upper).chain(&eq_rhs).chain(&objective).chain(eq_matrix.iter()).all(|x| x.is_finite());
        if !all_finite {
            return Err(LandscapeError::InvalidArgument("LP data must be finite".into()));
        }
        if let Some(i) = (0..k).find(|&i| lower[i] > upper[i]) {
            return Err(LandscapeError::InvalidArgument(format!(
                "variable {i} has lower bound {} above upper bound {}",
                lower[i], upper[i]
            )));
        }
        Ok(Self { lower, upper, eq_matrix, eq_rhs, objective })
    }

    /// Box-only problem without equality rows.
    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>, objective: Vec<f64>) -> Result<Self> {
        let k = lower.len();
        Self::new(lower, upper, DMatrix::zeros(0, k), Vec::new(), objective)
    }

    pub fn num_vars(&self) -> usize {
        self.lower.len()
    }

    pub fn num_rows(&self) -> usize {
        self.eq_rhs.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn eq_matrix(&self) -> &DMatrix<f64> {
        &self.eq_matrix
    }

    pub fn eq_rhs(&self) -> &[f64] {
        &self.eq_rhs
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    /// Returns a copy with the objective replaced.
    pub fn with_objective(&self, objective: Vec<f64>) -> Result<Self> {
        Self::new(self.lower.clone(), self.upper.clone(), self.eq_matrix.clone(), self.eq_rhs.clone(), objective)
    }

    /// `‖A x − b‖_∞`
    pub fn residual_norm(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.num_rows() {
            let mut s = -self.eq_rhs[i];
            for j in 0..self.num_vars() {
                s += self.eq_matrix[(i, j)] * x[j];
            }
            worst = worst.max(s.abs());
        }
        worst
    }

    pub fn bound_violation(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&v, (&l, &u))| (l - v).max(v - u).max(0.0))
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    NumericalFailure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub value: f64,
    pub solution: Vec<f64>,
    /// `‖A x − b‖_∞` at `solution`.
    pub residual_norm: f64,
    pub pivots: usize,
}

impl LpResult {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Converts a failed solve into an error; infeasibility stays a status.
    pub fn into_checked(self) -> Result<Self> {
        match self.status {
            LpStatus::NumericalFailure => Err(LandscapeError::NumericalFailure(format!(
                "simplex stopped after {} pivots (residual {:e})",
                self.pivots, self.residual_norm
            ))),
            _ => Ok(self),
        }
    }
}

pub fn solve(lp: &BoxEqLp, eps_lp: f64) -> LpResult {
    Simplex::new(lp).run(eps_lp)
}

struct Simplex<'a> {
    lp: &'a BoxEqLp,
    rows: usize,
    /// Original columns followed by one artificial column per row.
    cols: usize,
    tableau: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    at_upper: Vec<bool>,
    x: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    art_sign: Vec<f64>,
    pivots: usize,
    pivot_cap: usize,
}

enum PhaseOutcome {
    Optimal,
    PivotCap,
}

impl<'a> Simplex<'a> {
    fn new(lp: &'a BoxEqLp) -> Self {
        let k = lp.num_vars();
        let m = lp.num_rows();
        let cols = k + m;

        let mut x = vec![0.0; cols];
        x[..k].copy_from_slice(&lp.lower);
        let mut art_sign = vec![1.0; m];
        let mut lower = lp.lower.clone();
        let mut upper = lp.upper.clone();
        for i in 0..m {
            let mut r = lp.eq_rhs[i];
            for j in 0..k {
                r -= lp.eq_matrix[(i, j)] * x[j];
            }
            art_sign[i] = if r >= 0.0 { 1.0 } else { -1.0 };
            x[k + i] = r.abs();
            lower.push(0.0);
            upper.push(r.abs());
        }

        // B = diag(art_sign), so B⁻¹[A | B] = [diag(art_sign) A | I].
        let mut tableau = vec![0.0; m * cols];
        for i in 0..m {
            for j in 0..k {
                tableau[i * cols + j] = art_sign[i] * lp.eq_matrix[(i, j)];
            }
            tableau[i * cols + k + i] = 1.0;
        }

        let mut is_basic = vec![false; cols];
        let basis: Vec<usize> = (k..cols).collect();
        for &b in &basis {
            is_basic[b] = true;
        }

        Self {
            lp,
            rows: m,
            cols,
            tableau,
            basis,
            is_basic,
            at_upper: vec![false; cols],
            x,
            lower,
            upper,
            art_sign,
            pivots: 0,
            pivot_cap: 10 * (k + m).pow(2).max(1),
        }
    }

    fn t(&self, i: usize, j: usize) -> f64 {
        self.tableau[i * self.cols + j]
    }

    fn run(mut self, eps: f64) -> LpResult {
        let k = self.lp.num_vars();

        if self.rows > 0 {
            let mut phase1 = vec![0.0; self.cols];
            for c in phase1.iter_mut().skip(k) {
                *c = -1.0;
            }
            if let PhaseOutcome::PivotCap = self.optimize(&phase1) {
                return self.finish(LpStatus::NumericalFailure);
            }
            if !self.refresh_basic_values() {
                return self.finish(LpStatus::NumericalFailure);
            }
            if self.lp.residual_norm(&self.x[..k]) > eps {
                return self.finish(LpStatus::Infeasible);
            }
            self.retire_artificials();
        }

        let mut phase2 = vec![0.0; self.cols];
        phase2[..k].copy_from_slice(&self.lp.objective);
        if let PhaseOutcome::PivotCap = self.optimize(&phase2) {
            return self.finish(LpStatus::NumericalFailure);
        }
        if !self.refresh_basic_values() {
            return self.finish(LpStatus::NumericalFailure);
        }
        let sol = &self.x[..k];
        if self.lp.residual_norm(sol) > eps || self.lp.bound_violation(sol) > eps {
            return self.finish(LpStatus::NumericalFailure);
        }
        self.finish(LpStatus::Optimal)
    }

    fn finish(self, status: LpStatus) -> LpResult {
        let k = self.lp.num_vars();
        let solution = self.x[..k].to_vec();
        let value = solution.iter().zip(&self.lp.objective).map(|(a, b)| a * b).sum();
        LpResult { status, value, residual_norm: self.lp.residual_norm(&solution), solution, pivots: self.pivots }
    }

    fn optimize(&mut self, cost: &[f64]) -> PhaseOutcome {
        loop {
            let Some((enter, dir)) = self.entering(cost) else {
                return PhaseOutcome::Optimal;
            };
            if self.pivots >= self.pivot_cap {
                return PhaseOutcome::PivotCap;
            }
            self.pivots += 1;
            self.step(enter, dir);
        }
    }

    /// Smallest-index nonbasic column whose move improves the objective.
    fn entering(&self, cost: &[f64]) -> Option<(usize, f64)> {
        for j in 0..self.cols {
            if self.is_basic[j] || self.upper[j] - self.lower[j] <= 0.0 {
                continue;
            }
            let mut d = cost[j];
            for i in 0..self.rows {
                d -= cost[self.basis[i]] * self.t(i, j);
            }
            if !self.at_upper[j] && d > COST_TOL {
                return Some((j, 1.0));
            }
            if self.at_upper[j] && d < -COST_TOL {
                return Some((j, -1.0));
            }
        }
        None
    }

    fn step(&mut self, enter: usize, dir: f64) {
        let mut theta = self.upper[enter] - self.lower[enter];
        let mut leave: Option<usize> = None;
        for i in 0..self.rows {
            let alpha = self.t(i, enter) * dir;
            let b = self.basis[i];
            let ratio = if alpha > PIVOT_TOL {
                (self.x[b] - self.lower[b]) / alpha
            } else if alpha < -PIVOT_TOL {
                (self.upper[b] - self.x[b]) / -alpha
            } else {
                continue;
            };
            let ratio = ratio.max(0.0);
            let better = match leave {
                _ if ratio < theta => true,
                Some(r) => ratio == theta && b < self.basis[r],
                None => false,
            };
            if better {
                theta = ratio;
                leave = Some(i);
            }
        }

        self.x[enter] += dir * theta;
        for i in 0..self.rows {
            let b = self.basis[i];
            self.x[b] -= dir * theta * self.t(i, enter);
        }

        match leave {
            None => {
                self.at_upper[enter] = dir > 0.0;
                self.x[enter] = if dir > 0.0 { self.upper[enter] } else { self.lower[enter] };
            }
            Some(r) => {
                let out = self.basis[r];
                let alpha = self.t(r, enter) * dir;
                let to_upper = alpha < 0.0;
                self.x[out] = if to_upper { self.upper[out] } else { self.lower[out] };
                self.at_upper[out] = to_upper;
                self.pivot(r, enter);
            }
        }
    }

    fn pivot(&mut self, r: usize, enter: usize) {
        let cols = self.cols;
        let p = self.t(r, enter);
        for j in 0..cols {
            self.tableau[r * cols + j] /= p;
        }
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.t(i, enter);
            if f == 0.0 {
                continue;
            }
            for j in 0..cols {
                self.tableau[i * cols + j] -= f * self.tableau[r * cols + j];
            }
        }
        let out = self.basis[r];
        self.is_basic[out] = false;
        self.is_basic[enter] = true;
        self.at_upper[enter] = false;
        self.basis[r] = enter;
    }

    fn column(&self, j: usize) -> DVector<f64> {
        let k = self.lp.num_vars();
        if j < k {
            self.lp.eq_matrix.column(j).into_owned()
        } else {
            let mut c = DVector::zeros(self.rows);
            c[j - k] = self.art_sign[j - k];
            c
        }
    }

    /// Recomputes `x_B = B⁻¹ (b − N x_N)` from the original data.
    fn refresh_basic_values(&mut self) -> bool {
        if self.rows == 0 {
            return true;
        }
        let mut rhs = DVector::from_column_slice(&self.lp.eq_rhs);
        for j in 0..self.cols {
            if !self.is_basic[j] && self.x[j] != 0.0 {
                rhs -= self.column(j) * self.x[j];
            }
        }
        let mut basis_matrix = DMatrix::zeros(self.rows, self.rows);
        for (i, &b) in self.basis.iter().enumerate() {
            basis_matrix.set_column(i, &self.column(b));
        }
        match basis_matrix.lu().solve(&rhs) {
            Some(xb) if xb.iter().all(|v| v.is_finite()) => {
                for (i, &b) in self.basis.iter().enumerate() {
                    self.x[b] = xb[i];
                }
                true
            }
            _ => false,
        }
    }

    /// Fixes every artificial at zero and pivots basic artificials out where a
    /// structural column can replace them. Rows that admit no replacement are
    /// redundant and keep their (fixed) artificial in the basis.
    fn retire_artificials(&mut self) {
        let k = self.lp.num_vars();
        for j in k..self.cols {
            self.upper[j] = 0.0;
            if !self.is_basic[j] {
                self.x[j] = 0.0;
                self.at_upper[j] = false;
            }
        }
        for r in 0..self.rows {
            if self.basis[r] < k {
                continue;
            }
            let candidate = (0..k)
                .filter(|&j| !self.is_basic[j])
                .max_by(|&a, &b| self.t(r, a).abs().total_cmp(&self.t(r, b).abs()));
            if let Some(j) = candidate {
                if self.t(r, j).abs() > 1e-9 {
                    let out = self.basis[r];
                    self.pivot(r, j);
                    self.x[out] = 0.0;
                }
            }
        }
        let _ = self.refresh_basic_values();
    }
}

/// Minimizer of `‖A x‖_∞` over a box.
#[derive(Clone, Debug, PartialEq)]
pub struct MinNormResult {
    pub status: LpStatus,
    pub value: f64,
    pub minimizer: Vec<f64>,
}

/// `min { ‖A x‖_∞ : lower <= x <= upper }` via the epigraph LP
/// `max −τ` s.t. `A x − τ + p = 0`, `−A x − τ + q = 0`, `p, q >= 0`.
///
/// A value at most `eps_lp` certifies that `0 ∈ A · box`.
pub fn feasibility_min_infinity_norm(
    lower: &[f64],
    upper: &[f64],
    eq_matrix: &DMatrix<f64>,
    eps_lp: f64,
) -> Result<MinNormResult> {
    let k = lower.len();
    let m = eq_matrix.nrows();
    if upper.len() != k || eq_matrix.ncols() != k {
        return Err(LandscapeError::InvalidArgument(format!(
            "box has {k}/{} bounds but matrix has {} columns",
            upper.len(),
            eq_matrix.ncols()
        )));
    }
    if k == 0 && m == 0 {
        return Err(LandscapeError::InvalidArgument("empty box".into()));
    }

    let reach: Vec<f64> = (0..k).map(|j| lower[j].abs().max(upper[j].abs())).collect();
    let row_bound: Vec<f64> = (0..m).map(|i| (0..k).map(|j| eq_matrix[(i, j)].abs() * reach[j]).sum()).collect();
    let tau_max = row_bound.iter().copied().fold(0.0, f64::max);

    // columns: x (k) | τ | p (m) | q (m)
    let total = k + 1 + 2 * m;
    let mut a = DMatrix::zeros(2 * m, total);
    let mut lo = Vec::with_capacity(total);
    let mut hi = Vec::with_capacity(total);
    lo.extend_from_slice(lower);
    hi.extend_from_slice(upper);
    lo.push(0.0);
    hi.push(tau_max);
    for _ in 0..2 {
        for &rb in &row_bound {
            lo.push(0.0);
            hi.push(tau_max + rb);
        }
    }
    for i in 0..m {
        for j in 0..k {
            a[(i, j)] = eq_matrix[(i, j)];
            a[(m + i, j)] = -eq_matrix[(i, j)];
        }
        a[(i, k)] = -1.0;
        a[(m + i, k)] = -1.0;
        a[(i, k + 1 + i)] = 1.0;
        a[(m + i, k + 1 + m + i)] = 1.0;
    }
    let mut c = vec![0.0; total];
    c[k] = -1.0;
    let lp = BoxEqLp::new(lo, hi, a, vec![0.0; 2 * m], c)?;
    let res = solve(&lp, eps_lp).into_checked()?;
    if res.status != LpStatus::Optimal {
        // the epigraph problem is always feasible
        return Err(LandscapeError::NumericalFailure("epigraph LP reported infeasible".into()));
    }
    let minimizer = res.solution[..k].to_vec();
    // report the achieved norm rather than τ, which can only be larger
    let value = (0..m).map(|i| (0..k).map(|j| eq_matrix[(i, j)] * minimizer[j]).sum::<f64>().abs()).fold(0.0, f64::max);
    Ok(MinNormResult { status: LpStatus::Optimal, value, minimizer })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_only_maximum() {
        let lp = BoxEqLp::boxed(vec![-1.0], vec![1.0], vec![1.0]).unwrap();
        let r = solve(&lp, 1e-9);
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.value, 1.0);
        assert_eq!(r.solution, vec![1.0]);
    }

    #[test]
    fn pure_feasibility() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let lp = BoxEqLp::new(vec![-1.0; 2], vec![1.0; 2], a, vec![0.0], vec![0.0; 2]).unwrap();
        let r = solve(&lp, 1e-9);
        assert_eq!(r.status, LpStatus::Optimal);
        assert!(r.residual_norm <= 1e-9);
        assert!(lp.bound_violation(&r.solution) <= 1e-12);
    }

    #[test]
    fn single_feasible_point() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, -1.0]);
        let lp = BoxEqLp::new(vec![-1.0; 2], vec![1.0; 2], a, vec![2.0], vec![1.0, 1.0]).unwrap();
        let r = solve(&lp, 1e-9);
        assert_eq!(r.status, LpStatus::Optimal);
        assert!(r.value.abs() < 1e-12);
        assert!((r.solution[0] - 1.0).abs() < 1e-12 && (r.solution[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_is_reported() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let lp = BoxEqLp::new(vec![-1.0; 2], vec![1.0; 2], a, vec![3.0], vec![0.0; 2]).unwrap();
        assert_eq!(solve(&lp, 1e-9).status, LpStatus::Infeasible);
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 2.0, 2.0]);
        let lp = BoxEqLp::new(vec![-1.0; 2], vec![1.0; 2], a, vec![0.5, 1.0], vec![1.0, 0.0]).unwrap();
        let r = solve(&lp, 1e-9);
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_malformed_problems() {
        assert!(BoxEqLp::boxed(vec![1.0], vec![0.0], vec![0.0]).is_err());
        assert!(BoxEqLp::boxed(vec![0.0], vec![f64::INFINITY], vec![0.0]).is_err());
        assert!(BoxEqLp::new(vec![0.0], vec![1.0], DMatrix::zeros(1, 2), vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn min_infinity_norm_examples() {
        let a = DMatrix::from_row_slice(1, 1, &[1.0]);
        let r = feasibility_min_infinity_norm(&[-1.0], &[1.0], &a, 1e-9).unwrap();
        assert!(r.value <= 1e-12);

        let r = feasibility_min_infinity_norm(&[2.0], &[3.0], &a, 1e-9).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);

        let a = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let r = feasibility_min_infinity_norm(&[-1.0, 1.0], &[1.0, 1.0], &a, 1e-9).unwrap();
        assert!(r.value <= 1e-12);
        assert!((r.minimizer[0] + 1.0).abs() < 1e-12);
    }
}
