use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::ArithError;

/// Exact rational number in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Rat(BigRational::new(num.into(), den))
    }

    pub fn int(n: impl Into<BigInt>) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn pow(&self, e: u32) -> Rat {
        let mut acc = Rat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rat({self})")
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Accepts `p/q`, integers and finite decimals such as `4.3` (stored exactly).
impl FromStr for Rat {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArithError::MalformedRat(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Rat::new(n, d));
        }
        if let Some((ip, fp)) = s.split_once('.') {
            if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let neg = ip.starts_with('-');
            let ip = ip.trim_start_matches(['-', '+']);
            let whole: BigInt = if ip.is_empty() {
                BigInt::zero()
            } else {
                ip.parse().map_err(|_| bad())?
            };
            let frac: BigInt = fp.parse().map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), fp.len());
            let v = Rat::new(whole * &scale + frac, scale);
            return Ok(if neg { -v } else { v });
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rat::int(n))
    }
}

macro_rules! rat_binop {
    ($tr:ident, $m:ident) => {
        impl<'a> $tr<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat(self.0.$m(rhs.0))
            }
        }
    };
}
rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Self {
        Rat::int(v)
    }
}

/// Compares `a * cbrt(x)` against `c` exactly, for `a >= 0` and `x >= 0`.
pub fn cuberoot_term_cmp(a: &Rat, x: &BigInt, c: &Rat) -> Result<Ordering, ArithError> {
    if a.is_negative() || x.is_negative() {
        return Err(ArithError::UnsupportedRadical);
    }
    if c.is_negative() {
        return Ok(Ordering::Greater);
    }
    let lhs = a.pow(3) * Rat::int(x.clone());
    Ok(lhs.cmp(&c.pow(3)))
}

/// Outcome of [`cmp_with_cuberoot`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CubeCmp {
    /// `c >= a*cbrt(x) + b`
    GE,
    /// `c < a*cbrt(x) + b`
    LT,
}

/// Decides `c >= a*cbrt(x) + b` by isolating the radical and cubing.
pub fn cmp_with_cuberoot(a: &Rat, b: &Rat, x: &BigInt, c: &Rat) -> Result<CubeCmp, ArithError> {
    if a.is_negative() || x.is_negative() {
        return Err(ArithError::UnsupportedRadical);
    }
    let rest = c - b;
    if rest.is_negative() {
        return Ok(CubeCmp::LT);
    }
    match cuberoot_term_cmp(a, x, &rest)? {
        Ordering::Greater => Ok(CubeCmp::LT),
        _ => Ok(CubeCmp::GE),
    }
}

/// Rational bracket `[lo, hi]` around `cbrt(x)` with `hi - lo <= 1/den`.
pub fn cuberoot_bracket(x: &BigInt, den: u64) -> (Rat, Rat) {
    // floor(cbrt(x * den^3)) / den
    let d = BigInt::from(den);
    let scaled = x * &d * &d * &d;
    let r = scaled.cbrt();
    let lo = Rat::new(r.clone(), d.clone());
    let hi = if &r * &r * &r == scaled {
        lo.clone()
    } else {
        Rat::new(r + 1, d)
    };
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(r("4.3"), Rat::new(43, 10));
        assert_eq!(r("0.7787"), Rat::new(7787, 10000));
        assert_eq!(r("-2.1"), Rat::new(-21, 10));
        assert_eq!(r("126/57"), Rat::new(42, 19));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("1.".parse::<Rat>().is_err());
    }

    #[test]
    fn cuberoot_examples() {
        let three_sevenths = Rat::new(3, 7);
        let b = Rat::new(43, 560);
        let ge = cmp_with_cuberoot(&three_sevenths, &b, &BigInt::from(9), &Rat::one()).unwrap();
        assert_eq!(ge, CubeCmp::GE);
        let z = cmp_with_cuberoot(&Rat::zero(), &Rat::zero(), &BigInt::from(5), &Rat::zero());
        assert_eq!(z.unwrap(), CubeCmp::GE);
        let last = cmp_with_cuberoot(&three_sevenths, &b, &BigInt::from(48), &Rat::new(5, 3));
        assert_eq!(last.unwrap(), CubeCmp::GE);
        // 2 < cbrt(9) + 0
        let lt = cmp_with_cuberoot(&Rat::one(), &Rat::zero(), &BigInt::from(9), &Rat::int(2));
        assert_eq!(lt.unwrap(), CubeCmp::LT);
    }

    #[test]
    fn rejects_negative_forms() {
        assert!(cmp_with_cuberoot(&Rat::int(-1), &Rat::zero(), &BigInt::from(2), &Rat::one()).is_err());
        assert!(cmp_with_cuberoot(&Rat::one(), &Rat::zero(), &BigInt::from(-2), &Rat::one()).is_err());
    }

    #[test]
    fn bracket_contains_root() {
        let (lo, hi) = cuberoot_bracket(&BigInt::from(390), 1_000_000);
        assert!(lo.pow(3) <= Rat::int(390));
        assert!(hi.pow(3) >= Rat::int(390));
        assert!(&hi - &lo <= Rat::new(1, 1_000_000));
    }
}
