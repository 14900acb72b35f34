//! Combinatorial pattern of the residual `uuᵀ − u*u*ᵀ`.
//!
//! Besides the entrywise sign table, every coordinate is placed in one of the
//! magnitude classes `|u_i| > |u*_i|`, `|u_i| = |u*_i|`, `|u_i| < |u*_i|` and
//! tagged by how the sign of `u_i` relates to the sign of `u*_i`.

use serde::{Deserialize, Serialize};

use crate::error::{LandscapeError, Result};
use crate::sign::SignSet;
use crate::vector::RealVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MagnitudeClass {
    Greater,
    Equal,
    Less,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignTag {
    /// `u_i` and `u*_i` are nonzero with the same sign.
    Agree,
    /// `u_i` is nonzero and its sign differs from that of `u*_i` (or `u*_i = 0`).
    Disagree,
    /// `u_i = 0`.
    Zero,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualPattern {
    dim: usize,
    eps_zero: f64,
    entry_sign: Vec<SignSet>,
    classes: Vec<MagnitudeClass>,
    tags: Vec<SignTag>,
    pub j_greater: Vec<usize>,
    pub j_equal: Vec<usize>,
    pub j_less: Vec<usize>,
}

impl ResidualPattern {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eps_zero(&self) -> f64 {
        self.eps_zero
    }

    pub fn entry(&self, i: usize, j: usize) -> SignSet {
        self.entry_sign[i * self.dim + j]
    }

    pub fn class(&self, i: usize) -> MagnitudeClass {
        self.classes[i]
    }

    pub fn tag(&self, i: usize) -> SignTag {
        self.tags[i]
    }

    /// Unordered index pairs `(i, j)`, `i <= j`, whose residual entry is zero.
    pub fn zero_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                if self.entry(i, j) == SignSet::Interval {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn zero_entry_count(&self) -> usize {
        self.entry_sign.iter().filter(|s| **s == SignSet::Interval).count()
    }
}

pub fn residual_pattern(u: &RealVector, ustar: &RealVector, eps_zero: f64) -> Result<ResidualPattern> {
    u.check_same_dim(ustar)?;
    if !(eps_zero > 0.0) {
        return Err(LandscapeError::InvalidArgument(format!("eps_zero must be positive, got {eps_zero}")));
    }
    Ok(pattern_unchecked(u, ustar, eps_zero))
}

pub(crate) fn pattern_unchecked(u: &[f64], ustar: &[f64], eps_zero: f64) -> ResidualPattern {
    let n = u.len();
    let mut entry_sign = vec![SignSet::Interval; n * n];
    for i in 0..n {
        for j in i..n {
            let s = SignSet::of(u[i] * u[j] - ustar[i] * ustar[j], eps_zero);
            entry_sign[i * n + j] = s;
            entry_sign[j * n + i] = s;
        }
    }

    let mut classes = Vec::with_capacity(n);
    let mut tags = Vec::with_capacity(n);
    let (mut j_greater, mut j_equal, mut j_less) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..n {
        let gap = u[i].abs() - ustar[i].abs();
        let class = if gap > eps_zero {
            j_greater.push(i);
            MagnitudeClass::Greater
        } else if gap < -eps_zero {
            j_less.push(i);
            MagnitudeClass::Less
        } else {
            j_equal.push(i);
            MagnitudeClass::Equal
        };
        classes.push(class);

        let su = SignSet::of(u[i], eps_zero);
        let ss = SignSet::of(ustar[i], eps_zero);
        let tag = if !su.is_singleton() {
            SignTag::Zero
        } else if su == ss {
            SignTag::Agree
        } else {
            SignTag::Disagree
        };
        tags.push(tag);
    }

    ResidualPattern { dim: n, eps_zero, entry_sign, classes, tags, j_greater, j_equal, j_less }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> RealVector {
        RealVector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn spurious_point_pattern() {
        let p = residual_pattern(&v(&[-1.0, 1.0]), &v(&[1.0, 1.0]), 1e-9).unwrap();
        assert_eq!(p.j_equal, vec![0, 1]);
        assert!(p.j_greater.is_empty() && p.j_less.is_empty());
        assert_eq!(p.tag(0), SignTag::Disagree);
        assert_eq!(p.tag(1), SignTag::Agree);
        assert_eq!(p.entry(0, 1), SignSet::Neg);
        assert_eq!(p.entry(0, 0), SignSet::Interval);
        assert_eq!(p.zero_pairs(), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn origin_is_all_less_and_zero_tagged() {
        let p = residual_pattern(&v(&[0.0, 0.0]), &v(&[1.0, 1.0]), 1e-9).unwrap();
        assert_eq!(p.j_less, vec![0, 1]);
        assert!(p.tags.iter().all(|t| *t == SignTag::Zero));
    }

    #[test]
    fn mixed_classes() {
        let p = residual_pattern(&v(&[0.0, 2.0]), &v(&[1.0, 0.0]), 1e-9).unwrap();
        assert_eq!(p.class(0), MagnitudeClass::Less);
        assert_eq!(p.tag(0), SignTag::Zero);
        assert_eq!(p.class(1), MagnitudeClass::Greater);
        assert_eq!(p.j_greater, vec![1]);
    }

    #[test]
    fn partition_and_symmetry() {
        let u = v(&[0.3, -1.0, 2.0, 0.0]);
        let s = v(&[1.0, 1.0, -0.5, 0.0]);
        let p = residual_pattern(&u, &s, 1e-9).unwrap();
        let mut all: Vec<usize> = p.j_greater.iter().chain(&p.j_equal).chain(&p.j_less).copied().collect();
        all.sort();
        assert_eq!(all, vec![0, 1, 2, 3]);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(p.entry(i, j), p.entry(j, i));
            }
        }
    }

    #[test]
    fn equal_and_agree_means_same_coordinate() {
        let u = v(&[1.0, -0.5, 0.25]);
        let s = v(&[1.0, 0.5, 0.25]);
        let p = residual_pattern(&u, &s, 1e-9).unwrap();
        for &i in &p.j_equal {
            if p.tag(i) == SignTag::Agree {
                assert!((u[i] - s[i]).abs() <= 1e-9);
            }
        }
        assert_eq!(p.tag(1), SignTag::Disagree);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(residual_pattern(&v(&[1.0]), &v(&[1.0]), 0.0).is_err());
    }
}
