//! Set-valued sign of a real number.
//!
//! `Sign(x)` is `{+1}` for positive `x`, `{-1}` for negative `x` and the whole
//! interval `[-1, 1]` at zero. Products of these sets are again sign sets, and
//! `Sign(x * y) = Sign(x) * Sign(y)` holds even when a factor is zero.

use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignSet {
    Neg,
    /// The interval `[-1, 1]`.
    Interval,
    Pos,
}

impl SignSet {
    /// Sign of `x`, with `|x| <= eps` treated as zero.
    pub fn of(x: f64, eps: f64) -> SignSet {
        if x > eps {
            SignSet::Pos
        } else if x < -eps {
            SignSet::Neg
        } else {
            SignSet::Interval
        }
    }

    pub fn is_singleton(self) -> bool {
        self != SignSet::Interval
    }

    /// Center of the set; the midpoint selection maps `[-1, 1]` to 0.
    pub fn midpoint(self) -> f64 {
        match self {
            SignSet::Neg => -1.0,
            SignSet::Interval => 0.0,
            SignSet::Pos => 1.0,
        }
    }

    pub fn bounds(self) -> (f64, f64) {
        match self {
            SignSet::Neg => (-1.0, -1.0),
            SignSet::Interval => (-1.0, 1.0),
            SignSet::Pos => (1.0, 1.0),
        }
    }

    pub fn contains(self, v: f64, tol: f64) -> bool {
        let (lo, hi) = self.bounds();
        v >= lo - tol && v <= hi + tol
    }
}

impl Mul for SignSet {
    type Output = SignSet;

    fn mul(self, rhs: SignSet) -> SignSet {
        match (self, rhs) {
            (SignSet::Interval, _) | (_, SignSet::Interval) => SignSet::Interval,
            (a, b) if a == b => SignSet::Pos,
            _ => SignSet::Neg,
        }
    }
}

impl Neg for SignSet {
    type Output = SignSet;

    fn neg(self) -> SignSet {
        match self {
            SignSet::Neg => SignSet::Pos,
            SignSet::Interval => SignSet::Interval,
            SignSet::Pos => SignSet::Neg,
        }
    }
}

/// Single-valued sign with `sign(0) = 0`.
pub fn sign0(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}
