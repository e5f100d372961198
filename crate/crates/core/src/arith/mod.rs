//! Exact arithmetic: parametric integer polynomials, rationals, and the
//! order decisions the checker needs ("for all m >= m0", cube-root bounds).

mod order;
mod poly;
mod rat;

pub use order::{greater_for_all_ge, negative_for_all_ge, nonneg_for_all_ge, Sign};
pub use poly::ParamPoly;
pub use rat::{cmp_with_cuberoot, cuberoot_bracket, cuberoot_term_cmp, CubeCmp, Rat};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("malformed polynomial literal {text:?}: {reason}")]
    MalformedPoly { text: String, reason: String },
    #[error("malformed rational literal {0:?}")]
    MalformedRat(String),
    #[error("unsupported radical form: coefficient and radicand must be nonnegative")]
    UnsupportedRadical,
}

/// `binom(n, k)` for small arguments, zero when `n < k` or `n < 0`.
pub fn binom(n: i64, k: i64) -> i128 {
    if k < 0 || n < k || n < 0 {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(9, 3), 84);
        assert_eq!(binom(2, 3), 0);
        assert_eq!(binom(18, 3), 816);
        assert_eq!(binom(-1, 3), 0);
    }
}
