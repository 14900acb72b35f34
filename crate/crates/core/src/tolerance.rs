use serde::{Deserialize, Serialize};

pub const DEFAULT_EPS_ZERO: f64 = 1e-9;
pub const DEFAULT_EPS_LP: f64 = 1e-9;
pub const DEFAULT_EPS_DIR: f64 = 1e-9;

/// Numerical tolerances shared across the analysis routines.
///
/// `eps_zero` classifies residual entries and coordinates as zero, `eps_lp`
/// is the feasibility tolerance of the LP solver, and `eps_dir` decides when
/// a directional derivative counts as zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub eps_zero: f64,
    pub eps_lp: f64,
    pub eps_dir: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { eps_zero: DEFAULT_EPS_ZERO, eps_lp: DEFAULT_EPS_LP, eps_dir: DEFAULT_EPS_DIR }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::Result<()> {
        for (name, v) in [("eps_zero", self.eps_zero), ("eps_lp", self.eps_lp), ("eps_dir", self.eps_dir)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(crate::LandscapeError::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}
