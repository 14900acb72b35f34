use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, LandscapeError, Result};

/// Dense real vector with at least one entry, all finite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RealVector(Vec<f64>);

impl RealVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(LandscapeError::InvalidVector("dimension must be at least 1".into()));
        }
        if let Some(i) = entries.iter().position(|x| !x.is_finite()) {
            return Err(LandscapeError::InvalidVector(format!("entry {} is not finite ({})", i + 1, entries[i])));
        }
        Ok(Self(entries))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "RealVector dimension must be at least 1");
        Self(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn norm1(&self) -> f64 {
        self.0.iter().map(|x| x.abs()).sum()
    }

    pub fn norm2(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_zero(&self, eps: f64) -> bool {
        self.norm_inf() <= eps
    }

    pub fn dot(&self, other: &RealVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn neg(&self) -> RealVector {
        RealVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, s: f64) -> RealVector {
        RealVector(self.0.iter().map(|x| s * x).collect())
    }

    pub fn sub(&self, other: &RealVector) -> RealVector {
        RealVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &RealVector) -> RealVector {
        RealVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self + t * dir`
    pub fn axpy(&self, t: f64, dir: &RealVector) -> RealVector {
        RealVector(self.0.iter().zip(&dir.0).map(|(a, d)| a + t * d).collect())
    }

    pub fn check_same_dim(&self, other: &RealVector) -> Result<()> {
        check_dims(self.dim(), other.dim())
    }
}

impl Deref for RealVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for RealVector {
    type Error = LandscapeError;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        RealVector::new(v)
    }
}

impl From<RealVector> for Vec<f64> {
    fn from(v: RealVector) -> Vec<f64> {
        v.0
    }
}

/// Parses comma-separated reals, e.g. `-1,1` or `0.5, 0.2`.
impl FromStr for RealVector {
    type Err = LandscapeError;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<f64>().map_err(|_| LandscapeError::InvalidVector(format!("cannot parse '{tok}' as a real")))
            })
            .collect::<Result<Vec<_>>>()?;
        RealVector::new(entries)
    }
}

impl fmt::Display for RealVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}
