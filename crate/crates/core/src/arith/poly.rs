use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use serde::{Serialize, Serializer};

use super::ArithError;

/// Integer polynomial in a single anonymous parameter.
///
/// `coeffs[i]` is the coefficient of `m^i`. Trailing zeros are always
/// stripped, so the zero polynomial has no coefficients and equality is
/// structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    coeffs: Vec<BigInt>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// `a*m + b`.
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_i64s(&[b, a])
    }

    /// The parameter itself.
    pub fn param() -> Self {
        Self::linear(1, 0)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// The polynomial with its constant term removed.
    pub fn slope_part(&self) -> ParamPoly {
        let mut c = self.coeffs.clone();
        if let Some(first) = c.first_mut() {
            *first = BigInt::zero();
        }
        ParamPoly::new(c)
    }

    /// The constant value, when the polynomial does not depend on the parameter.
    pub fn as_constant(&self) -> Option<BigInt> {
        self.is_constant().then(|| self.constant_term())
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_constant().and_then(|c| c.to_i64())
    }

    pub fn eval(&self, v: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * v + c)
    }

    pub fn eval_i64(&self, v: i64) -> BigInt {
        self.eval(&BigInt::from(v))
    }

    pub fn scale(&self, c: &BigInt) -> ParamPoly {
        ParamPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `p(x + shift)`, computed by repeated synthetic division.
    pub fn taylor_shift(&self, shift: &BigInt) -> ParamPoly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * shift;
                c[j] += t;
            }
        }
        ParamPoly::new(c)
    }

    /// Exact division of every coefficient by `d`, if possible.
    pub fn div_exact(&self, d: &BigInt) -> Option<ParamPoly> {
        if d.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if !(c % d).is_zero() {
                return None;
            }
            out.push(c / d);
        }
        Some(ParamPoly::new(out))
    }

    /// Renders the polynomial using `var` as the parameter name.
    pub fn display_with(&self, var: char) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if i == 0 || !abs.is_one() {
                out.push_str(&abs.to_string());
            }
            if i >= 1 {
                out.push(var);
            }
            if i >= 2 {
                out.push('^');
                out.push_str(&i.to_string());
            }
        }
        out
    }

    /// Parses `a*m^2+b*m+c` style literals. The `*` is optional, any single
    /// ASCII lowercase letter is accepted as the parameter, and the letter
    /// used (if any) is returned alongside the polynomial.
    pub fn parse(text: &str) -> Result<(ParamPoly, Option<char>), ArithError> {
        let bad = |why: &str| ArithError::MalformedPoly {
            text: text.to_string(),
            reason: why.to_string(),
        };
        let bytes = text.as_bytes();
        if bytes.is_empty() {
            return Err(bad("empty literal"));
        }
        let mut var: Option<char> = None;
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut i = 0;
        let mut first = true;
        while i < bytes.len() {
            let mut sign = 1i8;
            match bytes[i] {
                b'+' if !first => i += 1,
                b'-' => {
                    sign = -1;
                    i += 1;
                }
                b'+' => return Err(bad("leading '+'")),
                _ if first => {}
                _ => return Err(bad("expected '+' or '-' between terms")),
            }
            first = false;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coeff: Option<BigInt> = if i > start {
                Some(text[start..i].parse().map_err(|_| bad("bad integer"))?)
            } else {
                None
            };
            if i < bytes.len() && bytes[i] == b'*' {
                if coeff.is_none() {
                    return Err(bad("'*' without a coefficient"));
                }
                i += 1;
                if i >= bytes.len() || !bytes[i].is_ascii_lowercase() {
                    return Err(bad("'*' must be followed by the parameter"));
                }
            }
            let mut power = 0usize;
            if i < bytes.len() && bytes[i].is_ascii_lowercase() {
                let v = bytes[i] as char;
                match var {
                    Some(w) if w != v => return Err(bad("mixed parameter names")),
                    _ => var = Some(v),
                }
                i += 1;
                power = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let ps = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if ps == i {
                        return Err(bad("missing exponent"));
                    }
                    power = text[ps..i].parse().map_err(|_| bad("bad exponent"))?;
                    if power > 64 {
                        return Err(bad("exponent too large"));
                    }
                }
            } else if coeff.is_none() {
                return Err(bad("empty term"));
            }
            let mut c = coeff.unwrap_or_else(BigInt::one);
            if sign < 0 {
                c = -c;
            }
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigInt::zero());
            }
            coeffs[power] += c;
        }
        Ok((ParamPoly::new(coeffs), var))
    }
}

impl Serialize for ParamPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with('m'))
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPoly({})", self.display_with('m'))
    }
}

impl From<i64> for ParamPoly {
    fn from(c: i64) -> Self {
        ParamPoly::constant(c)
    }
}

impl<'a> Add<&'a ParamPoly> for &'a ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ParamPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a ParamPoly> for &'a ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ParamPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a ParamPoly> for &'a ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        if self.is_zero() || rhs.is_zero() {
            return ParamPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ParamPoly::new(out)
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ParamPoly> for ParamPoly {
            type Output = ParamPoly;
            fn $m(self, rhs: ParamPoly) -> ParamPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ParamPoly> for ParamPoly {
            type Output = ParamPoly;
            fn $m(self, rhs: &ParamPoly) -> ParamPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ParamPoly {
        ParamPoly::parse(s).unwrap().0
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p("12m-1").eval_i64(3), BigInt::from(35));
        assert_eq!(p("54n^2+1").eval_i64(1), BigInt::from(55));
        assert_eq!(ParamPoly::zero().eval_i64(1_000_000_000), BigInt::zero());
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(p("12*m-1").to_string(), "12m-1");
        assert_eq!(p("-m-8").to_string(), "-m-8");
        assert_eq!(p("54n^2+1").display_with('n'), "54n^2+1");
        assert_eq!(p("-15").to_string(), "-15");
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("m-m").to_string(), "0");
        assert_eq!(ParamPoly::parse("3r-2").unwrap().1, Some('r'));
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "+3", "3m+", "m-n", "2**m", "3^2", "m^", "12 m"] {
            assert!(ParamPoly::parse(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn taylor_shift_matches_eval() {
        let q = p("3m^2-7m+2");
        let s = q.taylor_shift(&BigInt::from(5));
        for x in -3..10 {
            assert_eq!(s.eval_i64(x), q.eval_i64(x + 5));
        }
    }

    #[test]
    fn slope_part_and_division() {
        assert_eq!(p("4r-2").slope_part(), p("4r"));
        assert_eq!(p("12m-8").div_exact(&BigInt::from(4)), Some(p("3m-2")));
        assert_eq!(p("12m-8").div_exact(&BigInt::from(3)), None);
    }
}
