use crate::error::{LandscapeError, Result};
use crate::vector::RealVector;

/// `f(u) = ½ Σ_ij |u_i u_j − u*_i u*_j|`.
pub fn objective(u: &RealVector, ustar: &RealVector) -> Result<f64> {
    u.check_same_dim(ustar)?;
    Ok(objective_unchecked(u, ustar))
}

pub(crate) fn objective_unchecked(u: &[f64], ustar: &[f64]) -> f64 {
    let n = u.len();
    let mut diag = 0.0;
    let mut off = 0.0;
    for i in 0..n {
        diag += (u[i] * u[i] - ustar[i] * ustar[i]).abs();
        for j in (i + 1)..n {
            off += (u[i] * u[j] - ustar[i] * ustar[j]).abs();
        }
    }
    // off-diagonal entries appear twice in the full double sum
    0.5 * diag + off
}

/// Dense row-major residual `uuᵀ − u*u*ᵀ`.
pub fn residual_matrix(u: &[f64], ustar: &[f64]) -> Vec<f64> {
    let n = u.len();
    let mut r = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            r[i * n + j] = u[i] * u[j] - ustar[i] * ustar[j];
        }
    }
    r
}

/// Secant slope `(f(u + t w) − f(u)) / t`.
pub fn finite_difference_slope(u: &RealVector, ustar: &RealVector, w: &RealVector, t: f64) -> Result<f64> {
    u.check_same_dim(ustar)?;
    u.check_same_dim(w)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(LandscapeError::InvalidArgument(format!("step t must be positive, got {t}")));
    }
    let moved = u.axpy(t, w);
    Ok((objective_unchecked(&moved, ustar) - objective_unchecked(u, ustar)) / t)
}
