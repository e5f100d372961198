//! Lower bound `gamma(n) >= delta(n) = (3*cbrt(6n) + 43/10)/7` for large `n`,
//! by splitting `[8^k, 8^(k+1)]` into intervals.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::Serialize;

use super::ledger::{DeltaFact, GammaBound};
use super::Decimal;
use crate::arith::{cmp_with_cuberoot, cuberoot_term_cmp, CubeCmp, Rat};

/// The exponent at which the interval inequalities are checked.
pub const BULLET_K: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaBullet {
    pub step: usize,
    pub lo: Rat,
    pub hi: Rat,
    pub base_n: u64,
    pub base_bound: Rat,
    pub shift: u32,
    /// `2^-shift * gamma(base)`, a lower bound for `gamma(n) / 2^k` on the interval.
    pub beta: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub from: u64,
    pub k: u32,
    pub bullets: Vec<DeltaBullet>,
    pub fact: Option<DeltaFact>,
    /// Step index and reason of the first failed check.
    pub failure: Option<(usize, String)>,
}

/// `beta >= (3/7)*cbrt(6*hi) + 43/(70*2^k)`, decided exactly.
pub fn delta_bullet_holds(beta: &Rat, hi: &Rat, k: u32) -> bool {
    // cbrt(P/Q) = cbrt(P*Q^2)/Q
    let six_hi = &Rat::int(6) * hi;
    if six_hi.is_negative() {
        return false;
    }
    let (p, q) = (six_hi.numer().clone(), six_hi.denom().clone());
    let a = Rat::new(BigInt::from(3), BigInt::from(7) * &q);
    let b = Rat::new(BigInt::from(43), BigInt::from(70) * BigInt::from(2u32).pow(k));
    let x = p * &q * &q;
    matches!(cmp_with_cuberoot(&a, &b, &x, beta), Ok(CubeCmp::GE))
}

/// `value <= target < value + 10^-digits` where `target = a*cbrt(x)`.
fn sharp_cuberoot(value: &Decimal, a: &Rat, x: i64) -> bool {
    let ulp = Rat::new(1, BigInt::from(10u32).pow(value.digits));
    let x = BigInt::from(x);
    let below = matches!(cuberoot_term_cmp(a, &x, &value.value), Ok(Ordering::Greater | Ordering::Equal));
    let above = matches!(cuberoot_term_cmp(a, &x, &(&value.value + &ulp)), Ok(Ordering::Less));
    below && above
}

fn sharp_rational(value: &Decimal, target: &Rat) -> bool {
    let ulp = Rat::new(1, BigInt::from(10u32).pow(value.digits));
    value.value <= *target && *target < &value.value + &ulp
}

/// Checks the interval cover and every interval inequality, then the
/// decimal constants.
///
/// Each bullet is `(step, lo, hi, base fact, shift)`: for `n` in
/// `[lo*8^k, hi*8^k]`, `gamma(n) >= 2^(k-shift) gamma(base)` since
/// `base*8^(k-shift) <= lo*8^k`, and this beats `delta(hi*8^k)` when the
/// inequality holds at `k`; the right side decreases in `k`.
pub fn verify_delta_cases(
    from: u64,
    bullets: &[(usize, Rat, Rat, GammaBound, u32)],
    constants: Option<&(usize, Decimal, Decimal)>,
) -> DeltaReport {
    let mut report = DeltaReport {
        from,
        k: 0,
        bullets: Vec::new(),
        fact: None,
        failure: None,
    };
    let fail = |mut r: DeltaReport, step: usize, why: String| {
        r.failure = Some((step, why));
        r
    };
    let k = (1..=20u32).find(|&k| 8u64.pow(k) == from);
    let Some(k) = k else {
        return fail(report, 0, format!("{from} is not a power of 8"));
    };
    report.k = k;
    if bullets.is_empty() {
        return fail(report, 0, "no intervals".into());
    }
    let mut expect_lo = Rat::one();
    for (step, lo, hi, g, shift) in bullets {
        if *lo != expect_lo {
            return fail(report, *step, format!("interval starts at {lo}, previous ended at {expect_lo}"));
        }
        if lo >= hi {
            return fail(report, *step, format!("empty interval [{lo}, {hi}]"));
        }
        if *shift > k {
            return fail(report, *step, format!("shift {shift} exceeds k = {k}"));
        }
        // base * 8^-shift <= lo
        let scaled_lo = lo * &Rat::int(BigInt::from(8u32).pow(*shift));
        if Rat::int(g.n) > scaled_lo {
            return fail(
                report,
                *step,
                format!("gamma({}) does not apply from {lo}*8^k with shift {shift}", g.n),
            );
        }
        let beta = &g.bound / &Rat::int(BigInt::from(2u32).pow(*shift));
        if !delta_bullet_holds(&beta, hi, k) {
            return fail(
                report,
                *step,
                format!("{beta} < (3/7)*cbrt({}) + 43/(70*2^{k})", &Rat::int(6) * hi),
            );
        }
        report.bullets.push(DeltaBullet {
            step: *step,
            lo: lo.clone(),
            hi: hi.clone(),
            base_n: g.n,
            base_bound: g.bound.clone(),
            shift: *shift,
            beta,
        });
        expect_lo = hi.clone();
    }
    if expect_lo != Rat::int(8) {
        let last = bullets.last().map(|b| b.0).unwrap_or(0);
        return fail(report, last, format!("intervals end at {expect_lo}, not 8"));
    }
    let Some((step, a, b)) = constants else {
        return fail(report, 0, "missing constants".into());
    };
    if !sharp_cuberoot(a, &Rat::new(3, 7), 6) {
        return fail(report, *step, format!("{} is not the {}-digit truncation of (3/7)*cbrt(6)", a.value, a.digits));
    }
    if !sharp_rational(b, &Rat::new(43, 70)) {
        return fail(report, *step, format!("{} is not the {}-digit truncation of 43/70", b.value, b.digits));
    }
    report.fact = Some(DeltaFact {
        from,
        a: a.value.clone(),
        b: b.value.clone(),
    });
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn printed_inequalities_hold_at_three() {
        for (beta, hi) in [("1", "3/2"), ("63/57", "2"), ("11/9", "3"), ("4/3", "4"), ("3/2", "6"), ("5/3", "8")] {
            assert!(delta_bullet_holds(&r(beta), &r(hi), 3), "{beta} {hi}");
        }
        // at k = 2 the first one already fails
        assert!(!delta_bullet_holds(&r("1"), &r("3/2"), 1));
    }

    #[test]
    fn constants_are_sharp() {
        let d = |s: &str| Decimal {
            value: r(s),
            digits: s.split_once('.').map(|x| x.1.len() as u32).unwrap_or(0),
        };
        assert!(sharp_cuberoot(&d("0.7787"), &Rat::new(3, 7), 6));
        assert!(!sharp_cuberoot(&d("0.7786"), &Rat::new(3, 7), 6));
        assert!(!sharp_cuberoot(&d("0.7788"), &Rat::new(3, 7), 6));
        assert!(sharp_rational(&d("0.6142"), &Rat::new(43, 70)));
        assert!(!sharp_rational(&d("0.6143"), &Rat::new(43, 70)));
    }
}
