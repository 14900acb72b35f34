//! The subdifferential `∂f(u) = (Sign(uuᵀ − u*u*ᵀ) ∩ Sym) · u`.
//!
//! Entries of the residual that are nonzero pin the corresponding entry of the
//! selection matrix to `±1`; zero entries leave a symmetric pair free in
//! `[-1, 1]`. The model stores the pinned part densely and the free pairs as a
//! list, which is all the LP-based certifiers need.

use nalgebra::DMatrix;

use crate::error::{check_dims, LandscapeError, Result};
use crate::lp::{feasibility_min_infinity_norm, LpStatus};
use crate::pattern::{pattern_unchecked, ResidualPattern};
use crate::sign::SignSet;
use crate::vector::RealVector;

const SELECTION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SubdifferentialModel {
    base: RealVector,
    pattern: ResidualPattern,
    fixed: DMatrix<f64>,
    free_pairs: Vec<(usize, usize)>,
}

impl SubdifferentialModel {
    pub fn new(u: &RealVector, ustar: &RealVector, eps_zero: f64) -> Result<Self> {
        u.check_same_dim(ustar)?;
        if !(eps_zero > 0.0) {
            return Err(LandscapeError::InvalidArgument(format!("eps_zero must be positive, got {eps_zero}")));
        }
        Ok(Self::from_pattern(u.clone(), pattern_unchecked(u, ustar, eps_zero)))
    }

    pub fn from_pattern(base: RealVector, pattern: ResidualPattern) -> Self {
        let n = base.dim();
        let fixed = DMatrix::from_fn(n, n, |i, j| pattern.entry(i, j).midpoint());
        let free_pairs = pattern.zero_pairs();
        Self { base, pattern, fixed, free_pairs }
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base_point(&self) -> &RealVector {
        &self.base
    }

    pub fn pattern(&self) -> &ResidualPattern {
        &self.pattern
    }

    /// Pinned `±1` entries, zero where the pair is free.
    pub fn fixed_part(&self) -> &DMatrix<f64> {
        &self.fixed
    }

    pub fn free_pairs(&self) -> &[(usize, usize)] {
        &self.free_pairs
    }

    pub fn fixed_entry(&self, i: usize, j: usize) -> Option<f64> {
        self.pattern.entry(i, j).is_singleton().then(|| self.fixed[(i, j)])
    }

    /// `F u`, the contribution of the pinned entries. This is also the
    /// midpoint selection, which sets every free entry to zero.
    pub fn fixed_gradient(&self) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.fixed[(i, j)] * self.base[j]).sum()).collect()
    }

    /// Gradient response to a unit change of the free pair `p`.
    pub fn free_column(&self, p: usize) -> Vec<f64> {
        let (i, j) = self.free_pairs[p];
        let mut col = vec![0.0; self.dim()];
        if i == j {
            col[i] = self.base[i];
        } else {
            col[i] = self.base[j];
            col[j] = self.base[i];
        }
        col
    }

    /// `n × P` matrix whose columns are [`Self::free_column`].
    pub fn free_columns(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, self.free_pairs.len());
        for p in 0..self.free_pairs.len() {
            m.set_column(p, &nalgebra::DVector::from_vec(self.free_column(p)));
        }
        m
    }

    /// Symmetric selection matrix with free entries set to `z`.
    pub fn selection_matrix(&self, z: &[f64]) -> DMatrix<f64> {
        assert_eq!(z.len(), self.free_pairs.len());
        let mut s = self.fixed.clone();
        for (&(i, j), &v) in self.free_pairs.iter().zip(z) {
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
        s
    }

    pub fn gradient(&self, z: &[f64]) -> RealVector {
        let mut g = self.fixed_gradient();
        for (p, &v) in z.iter().enumerate() {
            if v != 0.0 {
                for (gi, ci) in g.iter_mut().zip(self.free_column(p)) {
                    *gi += v * ci;
                }
            }
        }
        RealVector::new(g).expect("finite gradient")
    }

    pub fn midpoint(&self) -> RealVector {
        RealVector::new(self.fixed_gradient()).expect("finite gradient")
    }

    /// Support function `max { ⟨g, w⟩ : g ∈ ∂f(u) }`.
    ///
    /// Pinned entries contribute linearly; a free diagonal entry contributes
    /// `|u_i w_i|` and a free off-diagonal pair `{i, j}` contributes
    /// `|u_j w_i + u_i w_j|`.
    pub fn support(&self, w: &[f64]) -> f64 {
        let u = &self.base;
        let n = self.dim();
        let mut linear = 0.0;
        for i in 0..n {
            for j in 0..n {
                let f = self.fixed[(i, j)];
                if f != 0.0 {
                    linear += f * u[j] * w[i];
                }
            }
        }
        let free: f64 = self
            .free_pairs
            .iter()
            .map(|&(i, j)| if i == j { (u[i] * w[i]).abs() } else { (u[j] * w[i] + u[i] * w[j]).abs() })
            .sum();
        linear + free
    }

    /// `min ‖g − target‖_∞` over `g ∈ ∂f(u)`, with the minimizing free entries.
    pub fn min_distance_inf(&self, target: &[f64], eps_lp: f64) -> Result<(f64, Vec<f64>)> {
        check_dims(self.dim(), target.len())?;
        let n = self.dim();
        let p = self.free_pairs.len();
        let offset: Vec<f64> = self.fixed_gradient().iter().zip(target).map(|(a, b)| a - b).collect();

        // the constant offset rides along as a column pinned to 1
        let mut a = DMatrix::zeros(n, p + 1);
        a.view_mut((0, 0), (n, p)).copy_from(&self.free_columns());
        for i in 0..n {
            a[(i, p)] = offset[i];
        }
        let mut lower = vec![-1.0; p + 1];
        let mut upper = vec![1.0; p + 1];
        lower[p] = 1.0;
        upper[p] = 1.0;
        let res = feasibility_min_infinity_norm(&lower, &upper, &a, eps_lp)?;
        debug_assert_eq!(res.status, LpStatus::Optimal);
        let mut z = res.minimizer;
        z.truncate(p);
        for v in &mut z {
            *v = v.clamp(-1.0, 1.0);
        }
        Ok((res.value, z))
    }

    /// LP membership test `g ∈ ∂f(u)` up to `eps_lp`.
    pub fn contains(&self, g: &[f64], eps_lp: f64) -> Result<bool> {
        Ok(self.min_distance_inf(g, eps_lp)?.0 <= eps_lp)
    }

    /// Checks that `s` is symmetric and lies in the sign boxes.
    pub fn validate_selection(&self, s: &DMatrix<f64>) -> Result<()> {
        let n = self.dim();
        if s.nrows() != n || s.ncols() != n {
            return Err(LandscapeError::InvalidSelection(format!(
                "expected a {n}x{n} matrix, got {}x{}",
                s.nrows(),
                s.ncols()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let v = s[(i, j)];
                if !v.is_finite() {
                    return Err(LandscapeError::InvalidSelection(format!("entry ({i},{j}) is not finite")));
                }
                if (v - s[(j, i)]).abs() > SELECTION_TOL {
                    return Err(LandscapeError::InvalidSelection(format!("not symmetric at ({i},{j})")));
                }
                let sign = self.pattern.entry(i, j);
                if !sign.contains(v, SELECTION_TOL) {
                    let (lo, hi) = sign.bounds();
                    return Err(LandscapeError::InvalidSelection(format!(
                        "entry ({i},{j}) = {v} outside [{lo}, {hi}]"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// How a single element of `∂f(u)` is picked.
#[derive(Clone, Debug, PartialEq)]
pub enum SelectionRule {
    /// Free entries set to zero, the center of `[-1, 1]`.
    Midpoint,
    /// A caller-supplied symmetric matrix inside the sign boxes.
    Custom(DMatrix<f64>),
}

pub fn subgradient_select(
    u: &RealVector,
    ustar: &RealVector,
    rule: &SelectionRule,
    eps_zero: f64,
) -> Result<RealVector> {
    let model = SubdifferentialModel::new(u, ustar, eps_zero)?;
    select_from_model(&model, rule)
}

pub fn select_from_model(model: &SubdifferentialModel, rule: &SelectionRule) -> Result<RealVector> {
    match rule {
        SelectionRule::Midpoint => Ok(model.midpoint()),
        SelectionRule::Custom(s) => {
            model.validate_selection(s)?;
            let sym = (s + s.transpose()) * 0.5;
            let g = &sym * nalgebra::DVector::from_column_slice(model.base_point());
            RealVector::new(g.iter().copied().collect())
        }
    }
}

/// Selection that fills free entries with `−Sign(u*_i u*_j)`, zero where
/// `u*` vanishes. On the spurious polytope every entry agrees with
/// `−Sign(u*u*ᵀ)`, which annihilates `u`.
pub fn anti_aligned_selection(model: &SubdifferentialModel, ustar: &[f64]) -> DMatrix<f64> {
    let n = model.dim();
    let mut s = model.fixed_part().clone();
    for &(i, j) in model.free_pairs() {
        let v = -SignSet::of(ustar[i] * ustar[j], 0.0).midpoint();
        s[(i, j)] = v;
        s[(j, i)] = v;
    }
    debug_assert_eq!(s.nrows(), n);
    s
}
