//! Finite-field interpolation oracle.
//!
//! A dimension of zero at explicit points is a proof of emptiness for
//! generic points in characteristic zero; a positive dimension is only
//! evidence of non-emptiness.

mod matrix;
mod points;

pub use matrix::{monomials, ConditionsMatrix};
pub use points::PointSet;

use serde::Serialize;
use thiserror::Error;

use crate::arith::binom;
use crate::cremona::{cremona_step, CremonaStep};
use crate::systems::{FatPointSystem, SystemError};

pub const DEFAULT_PRIME: u64 = 32003;
pub const DEFAULT_SEED: u64 = 1;

/// The seed from `FPC_SEED`, or [`DEFAULT_SEED`].
pub fn default_seed() -> u64 {
    std::env::var("FPC_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{mults} multiplicities but {points} points")]
    LengthMismatch { mults: usize, points: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {prime} must exceed the degree {t}")]
    PrimeTooSmall { prime: u64, t: i64 },
    #[error("system must have constant entries")]
    NotConstant,
    #[error("degree {0} out of range")]
    DegreeOutOfRange(i64),
    #[error(transparent)]
    System(#[from] SystemError),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub dimension: u64,
    pub t: i64,
    pub monomials: u64,
    /// Shape of the matrix actually reduced.
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Monomials removed up front because a coordinate point kills them.
    pub deleted_columns: usize,
    pub prime: u64,
    pub seed: u64,
}

fn check_prime(prime: u64, t: i64) -> Result<(), OracleError> {
    if !is_prime(prime) {
        return Err(OracleError::NotPrime(prime));
    }
    if (prime as i128) <= t as i128 {
        return Err(OracleError::PrimeTooSmall { prime, t });
    }
    Ok(())
}

/// Dimension of the degree-`t` forms vanishing to order `mults[j]` at the
/// `j`-th point.
pub fn dimension(mults: &[i64], t: i64, pts: &PointSet) -> Result<DimensionReport, OracleError> {
    dimension_with(mults, t, pts, true)
}

/// As [`dimension`], without the coordinate-point column shortcut.
pub fn dimension_full(mults: &[i64], t: i64, pts: &PointSet) -> Result<DimensionReport, OracleError> {
    dimension_with(mults, t, pts, false)
}

fn dimension_with(
    mults: &[i64],
    t: i64,
    pts: &PointSet,
    shortcut: bool,
) -> Result<DimensionReport, OracleError> {
    if mults.len() != pts.len() {
        return Err(OracleError::LengthMismatch {
            mults: mults.len(),
            points: pts.len(),
        });
    }
    check_prime(pts.prime, t)?;
    let mut report = DimensionReport {
        dimension: 0,
        t,
        monomials: 0,
        rows: 0,
        cols: 0,
        rank: 0,
        deleted_columns: 0,
        prime: pts.prime,
        seed: pts.seed,
    };
    if t < 0 {
        return Ok(report);
    }
    if t > 200 {
        return Err(OracleError::DegreeOutOfRange(t));
    }
    let all = monomials(t as u32);
    report.monomials = all.len() as u64;
    let skip: Vec<bool> = (0..mults.len())
        .map(|j| shortcut && j < pts.fundamental)
        .collect();
    let columns: Vec<[u32; 4]> = all
        .iter()
        .filter(|a| {
            (0..mults.len()).all(|j| {
                // x^a vanishes to order m at e_j iff a_j <= t - m
                !skip[j] || (a[j] as i64) <= t - mults[j].max(0)
            })
        })
        .copied()
        .collect();
    report.deleted_columns = all.len() - columns.len();
    let m = ConditionsMatrix::build(mults, &columns, pts, &skip);
    report.rows = m.rows;
    report.cols = m.cols;
    report.rank = if columns.is_empty() { 0 } else { m.rank() };
    report.dimension = (columns.len() - report.rank) as u64;
    Ok(report)
}

/// Convenience wrapper building [`PointSet::generic`] points.
pub fn dimension_generic(
    mults: &[i64],
    t: i64,
    prime: u64,
    seed: u64,
) -> Result<DimensionReport, OracleError> {
    dimension(mults, t, &PointSet::generic(mults.len(), prime, seed))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaReport {
    /// Rigorous lower bound for generic points.
    pub alpha_low: i64,
    /// First degree with a nonzero form at the chosen points.
    pub alpha_est: Option<i64>,
    pub t_max: i64,
    pub prime: u64,
    pub seed: u64,
    /// `(t, dimension)` for every degree evaluated.
    pub probes: Vec<(i64, u64)>,
}

/// Bounds on the least degree of a nonzero form, by bisection on `t`.
///
/// Dimension is monotone in `t` at fixed points (multiply by a linear
/// form), so bisection is exact for the chosen points.
pub fn alpha_bounds(mults: &[i64], pts: &PointSet, t_max: i64) -> Result<AlphaReport, OracleError> {
    check_prime(pts.prime, t_max)?;
    let mut probes = Vec::new();
    let mut probe = |t: i64| -> Result<bool, OracleError> {
        let d = dimension(mults, t, pts)?.dimension;
        probes.push((t, d));
        Ok(d > 0)
    };
    let (mut lo, mut hi) = (0i64, t_max + 1);
    // invariant: dim(t) = 0 for t < lo, dim(hi) > 0 or hi = t_max + 1
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if probe(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    probes.sort();
    Ok(AlphaReport {
        alpha_low: lo,
        alpha_est: (lo <= t_max).then_some(lo),
        t_max,
        prime: pts.prime,
        seed: pts.seed,
        probes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CremonaCrossCheck {
    pub before: FatPointSystem,
    pub after: FatPointSystem,
    pub dim_before: u64,
    pub dim_after: u64,
    pub seed: u64,
    pub attempts: u32,
    pub matched: bool,
}

/// Compares oracle dimensions of a constant system and its Cremona image,
/// retrying with fresh seeds before reporting a mismatch.
pub fn cross_check_cremona(
    s: &FatPointSystem,
    step: &CremonaStep,
    prime: u64,
    seed: u64,
) -> Result<CremonaCrossCheck, OracleError> {
    let (after, _) = cremona_step(s, step)?;
    let (t0, m0) = s.as_constants().ok_or(OracleError::NotConstant)?;
    let (t1, m1) = after.as_constants().ok_or(OracleError::NotConstant)?;
    let mut last = None;
    for attempt in 0..3u32 {
        let sd = seed.wrapping_add(attempt as u64);
        let d0 = dimension(&m0, t0, &PointSet::random(m0.len(), prime, sd))?.dimension;
        let d1 = dimension(&m1, t1, &PointSet::random(m1.len(), prime, sd ^ 0x5eed))?.dimension;
        let rep = CremonaCrossCheck {
            before: s.clone(),
            after: after.clone(),
            dim_before: d0,
            dim_after: d1,
            seed: sd,
            attempts: attempt + 1,
            matched: d0 == d1,
        };
        if rep.matched {
            return Ok(rep);
        }
        last = Some(rep);
    }
    Ok(last.expect("at least one attempt"))
}

/// `binom(t+3, 3)`.
pub fn monomial_count(t: i64) -> i128 {
    binom(t + 3, 3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_conditions() {
        let r = dimension_generic(&[], 6, DEFAULT_PRIME, 1).unwrap();
        assert_eq!(r.dimension as i128, monomial_count(6));
    }

    #[test]
    fn single_point_is_independent() {
        for t in 0..=8 {
            for m in 0..=t {
                let pts = PointSet::random(1, DEFAULT_PRIME, 3);
                let d = dimension(&[m], t, &pts).unwrap().dimension as i128;
                assert_eq!(d, monomial_count(t) - binom(m + 2, 3), "t={t} m={m}");
            }
        }
    }

    #[test]
    fn shortcut_matches_full_matrix() {
        for (mults, t) in [(vec![3, 2, 2, 1, 2], 4), (vec![2; 6], 3), (vec![4, 1, 3], 5)] {
            let pts = PointSet::generic(mults.len(), 101, 9);
            let a = dimension(&mults, t, &pts).unwrap().dimension;
            let b = dimension_full(&mults, t, &pts).unwrap().dimension;
            assert_eq!(a, b, "{mults:?} {t}");
        }
    }

    #[test]
    fn simple_points_alpha() {
        let pts = PointSet::generic(5, DEFAULT_PRIME, 1);
        let a = alpha_bounds(&[1; 5], &pts, 10).unwrap();
        assert_eq!(a.alpha_est, Some(2));
        assert_eq!(a.alpha_low, 2);
    }

    #[test]
    fn guards() {
        assert_eq!(dimension_generic(&[1], 3, 32000, 1), Err(OracleError::NotPrime(32000)));
        assert!(matches!(
            dimension_generic(&[1], 7, 7, 1),
            Err(OracleError::PrimeTooSmall { .. })
        ));
        let pts = PointSet::generic(2, 101, 1);
        assert!(dimension(&[1], 2, &pts).is_err());
        assert_eq!(dimension_generic(&[1], -1, 101, 1).unwrap().dimension, 0);
    }

    #[test]
    fn cremona_cross_check_small() {
        let s = FatPointSystem::constant(12, &[7; 5]);
        let r = cross_check_cremona(&s, &CremonaStep::new([1, 2, 3, 4]).unwrap(), DEFAULT_PRIME, 1).unwrap();
        assert!(r.matched, "{r:?}");
    }
}
