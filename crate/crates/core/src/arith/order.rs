use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::ParamPoly;

/// Answer to "is `p(m) >= 0` for every integer `m >= m0`?".
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Sign {
    Yes,
    /// The smallest `m >= m0` with `p(m) < 0`.
    No { witness: String },
    Unknown,
}

impl Sign {
    pub fn is_yes(&self) -> bool {
        matches!(self, Sign::Yes)
    }

    pub fn witness(&self) -> Option<BigInt> {
        match self {
            Sign::No { witness } => witness.parse().ok(),
            _ => None,
        }
    }

    fn no(w: BigInt) -> Self {
        Sign::No {
            witness: w.to_string(),
        }
    }
}

/// Decides `p(m) >= 0` for all integers `m >= m0`.
///
/// The Taylor shift to `m - m0` gives a sound `Yes` when every shifted
/// coefficient is nonnegative. Degrees up to two are then settled completely;
/// higher degrees only produce a `No` when the leading coefficient is negative
/// and a witness is found.
pub fn nonneg_for_all_ge(p: &ParamPoly, m0: i64) -> Sign {
    let base = BigInt::from(m0);
    let q = p.taylor_shift(&base);
    if q.coeffs().iter().all(|c| !c.is_negative()) {
        return Sign::Yes;
    }
    let at = |x: &BigInt| q.eval(x);
    if at(&BigInt::zero()).is_negative() {
        return Sign::no(base);
    }
    let c = |i| q.coeff(i);
    match q.degree() {
        Some(1) => {
            // b + a x with a < 0, b >= 0
            let (b, a) = (c(0), c(1));
            let x = b.div_floor(&(-a)) + 1;
            Sign::no(x + base)
        }
        Some(2) => {
            let (a, b) = (c(2), c(1));
            if a.is_negative() {
                return Sign::no(first_negative_concave(&q) + base);
            }
            // a > 0 and b < 0: the minimum over integers sits next to -b/2a.
            let two_a = &a * 2;
            let v_floor = (-&b).div_floor(&two_a);
            let candidates = [v_floor.clone(), v_floor + 1];
            let mut neg: Option<BigInt> = None;
            for x in candidates.iter().filter(|x| !x.is_negative()) {
                if at(x).is_negative() {
                    neg = Some(x.clone());
                    break;
                }
            }
            match neg {
                None => Sign::Yes,
                Some(hi) => {
                    // q decreasing on [0, hi]; find the first negative point.
                    let (mut lo, mut hi) = (BigInt::zero(), hi);
                    while &hi - &lo > BigInt::from(1) {
                        let mid: BigInt = (&lo + &hi) / 2;
                        if at(&mid).is_negative() {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    Sign::no(hi + base)
                }
            }
        }
        _ => {
            if q.leading_coeff().is_negative() {
                Sign::no(first_negative_eventually(&q) + base)
            } else {
                Sign::Unknown
            }
        }
    }
}

// {x >= 0 : q(x) >= 0} is an interval containing 0 when q is concave with q(0) >= 0.
fn first_negative_concave(q: &ParamPoly) -> BigInt {
    let mut hi = BigInt::from(1);
    while !q.eval(&hi).is_negative() {
        hi *= 2;
    }
    let mut lo = BigInt::zero();
    while &hi - &lo > BigInt::from(1) {
        let mid: BigInt = (&lo + &hi) / 2;
        if q.eval(&mid).is_negative() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn first_negative_eventually(q: &ParamPoly) -> BigInt {
    let mut hi = BigInt::from(1);
    while !q.eval(&hi).is_negative() {
        hi *= 2;
    }
    // linear scan below the doubling point keeps the witness minimal
    let start = &hi / 2;
    let mut x = start;
    while !q.eval(&x).is_negative() {
        x += 1;
    }
    x
}

/// `p(m) < 0` for every `m >= m0`.
pub fn negative_for_all_ge(p: &ParamPoly, m0: i64) -> bool {
    let shifted = -p - ParamPoly::constant(1);
    nonneg_for_all_ge(&shifted, m0).is_yes()
}

/// `p(m) > q(m)` for every `m >= m0`.
pub fn greater_for_all_ge(p: &ParamPoly, q: &ParamPoly, m0: i64) -> bool {
    let d = p - q - ParamPoly::constant(1);
    nonneg_for_all_ge(&d, m0).is_yes()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ParamPoly {
        ParamPoly::parse(s).unwrap().0
    }

    #[test]
    fn constant_negative() {
        assert_eq!(nonneg_for_all_ge(&p("-15"), 1).witness(), Some(BigInt::from(1)));
    }

    #[test]
    fn positive_after_shift() {
        assert!(nonneg_for_all_ge(&p("8m-3"), 1).is_yes());
    }

    #[test]
    fn linear_root_analysis() {
        // 29 - 4r is fine up to r = 7 and first negative at r = 8
        let s = nonneg_for_all_ge(&p("29-4r"), 5);
        assert_eq!(s.witness(), Some(BigInt::from(8)));
        for r in 5..=20 {
            let v = p("29-4r").eval_i64(r);
            assert_eq!(v.is_negative(), r >= 8);
        }
    }

    #[test]
    fn quadratic_root_analysis() {
        // 300s^2 - 1630s + 1331 >= 0 for s >= 5 but dips below 0 at s = 2
        assert!(nonneg_for_all_ge(&p("300s^2-1630s+1331"), 5).is_yes());
        assert_eq!(
            nonneg_for_all_ge(&p("300s^2-1630s+1331"), 1).witness(),
            Some(BigInt::from(2))
        );
        // (m-10)^2 - 1 is negative only at m = 10
        assert_eq!(
            nonneg_for_all_ge(&p("m^2-20m+99"), 0).witness(),
            Some(BigInt::from(10))
        );
        // m^2 - 20m + 100 touches zero
        assert!(nonneg_for_all_ge(&p("m^2-20m+100"), 0).is_yes());
        assert_eq!(
            nonneg_for_all_ge(&p("-m^2+5m"), 1).witness(),
            Some(BigInt::from(6))
        );
    }

    #[test]
    fn cubic_is_unknown_or_no() {
        assert_eq!(nonneg_for_all_ge(&p("m^3-10m^2+30"), 1), Sign::Unknown);
        assert_eq!(
            nonneg_for_all_ge(&p("-m^3+100"), 1).witness(),
            Some(BigInt::from(5))
        );
    }
}
