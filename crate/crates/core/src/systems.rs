//! Fat-point linear systems `I(m_1, ..., m_n)_t` in projective 3-space and
//! their numerical shadows.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{binom, nonneg_for_all_ge, ArithError, ParamPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("malformed system text: {0}")]
    Syntax(String),
    #[error("position {index} out of range (system has {len} points)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("position {0} used twice")]
    DuplicateIndex(usize),
    #[error("cannot certify the sign of multiplicity {entry} at position {index} for all parameter values >= {m0}")]
    UncertifiedSign { index: usize, entry: String, m0: i64 },
    #[error("system mixes parameter names {0:?} and {1:?}")]
    MixedParameters(char, char),
}

/// A degree together with an ordered multiplicity sequence, both parametric.
///
/// Statements about a system are quantified over every parameter value
/// `>= m0`. Nonpositive multiplicities impose no condition.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FatPointSystem {
    pub degree: ParamPoly,
    pub mults: Vec<ParamPoly>,
    pub m0: i64,
    /// Name used when printing the parameter.
    pub var: char,
}

impl FatPointSystem {
    pub fn new(degree: ParamPoly, mults: Vec<ParamPoly>, m0: i64) -> Self {
        Self {
            degree,
            mults,
            m0,
            var: 'm',
        }
    }

    pub fn with_var(mut self, var: char) -> Self {
        self.var = var;
        self
    }

    /// Constant system from plain integers.
    pub fn constant(degree: i64, mults: &[i64]) -> Self {
        Self::new(
            ParamPoly::constant(degree),
            mults.iter().map(|&m| ParamPoly::constant(m)).collect(),
            1,
        )
    }

    pub fn len(&self) -> usize {
        self.mults.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mults.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.degree.is_constant() && self.mults.iter().all(ParamPoly::is_constant)
    }

    /// Degree and multiplicities as machine integers, for constant systems.
    pub fn as_constants(&self) -> Option<(i64, Vec<i64>)> {
        let d = self.degree.as_i64()?;
        let ms = self.mults.iter().map(ParamPoly::as_i64).collect::<Option<Vec<_>>>()?;
        Some((d, ms))
    }

    /// Same degree and multiplicities; `m0` and the parameter name are ignored.
    pub fn same_entries(&self, other: &FatPointSystem) -> bool {
        self.degree == other.degree && self.mults == other.mults
    }

    /// Substitutes the parameter value `v`.
    pub fn instantiate(&self, v: i64) -> FatPointSystem {
        let at = |p: &ParamPoly| ParamPoly::constant(p.eval_i64(v));
        FatPointSystem {
            degree: at(&self.degree),
            mults: self.mults.iter().map(at).collect(),
            m0: v,
            var: self.var,
        }
    }

    /// Removes every multiplicity that is certified `<= 0` on the whole
    /// parameter range. Entries whose sign changes are refused.
    pub fn drop_nonpositive(&self) -> Result<FatPointSystem, SystemError> {
        let mut kept = Vec::with_capacity(self.mults.len());
        for (i, e) in self.mults.iter().enumerate() {
            if nonneg_for_all_ge(&-e, self.m0).is_yes() {
                continue;
            }
            if nonneg_for_all_ge(e, self.m0).is_yes() {
                kept.push(e.clone());
                continue;
            }
            return Err(SystemError::UncertifiedSign {
                index: i + 1,
                entry: e.display_with(self.var),
                m0: self.m0,
            });
        }
        Ok(FatPointSystem {
            degree: self.degree.clone(),
            mults: kept,
            m0: self.m0,
            var: self.var,
        })
    }

    pub fn check_index(&self, index: usize) -> Result<(), SystemError> {
        if index == 0 || index > self.mults.len() {
            Err(SystemError::IndexOutOfRange {
                index,
                len: self.mults.len(),
            })
        } else {
            Ok(())
        }
    }

    /// `deg=<poly> mults=<list>` without the `system` keyword and `m0`.
    pub fn entries_text(&self) -> String {
        format!(
            "deg={} mults={}",
            self.degree.display_with(self.var),
            format_mult_list(&self.mults, self.var)
        )
    }
}

impl fmt::Display for FatPointSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "system {} m0={}", self.entries_text(), self.m0)
    }
}

impl fmt::Debug for FatPointSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FatPointSystem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for FatPointSystem {
    type Err = SystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut words = s.split_whitespace();
        if words.next() != Some("system") {
            return Err(SystemError::Syntax("expected leading 'system'".into()));
        }
        let mut degree = None;
        let mut mults = None;
        let mut m0 = 1i64;
        let mut var = None;
        for w in words {
            let (key, value) = w
                .split_once('=')
                .ok_or_else(|| SystemError::Syntax(format!("expected key=value, got {w:?}")))?;
            match key {
                "deg" => {
                    let (p, v) = ParamPoly::parse(value)?;
                    merge_var(&mut var, v)?;
                    degree = Some(p);
                }
                "mults" => {
                    let (list, v) = parse_mult_list(value)?;
                    merge_var(&mut var, v)?;
                    mults = Some(list);
                }
                "m0" => {
                    m0 = value
                        .parse()
                        .map_err(|_| SystemError::Syntax(format!("bad m0 {value:?}")))?
                }
                _ => return Err(SystemError::Syntax(format!("unknown key {key:?}"))),
            }
        }
        let degree = degree.ok_or_else(|| SystemError::Syntax("missing deg=".into()))?;
        let mults = mults.ok_or_else(|| SystemError::Syntax("missing mults=".into()))?;
        Ok(FatPointSystem::new(degree, mults, m0).with_var(var.unwrap_or('m')))
    }
}

pub(crate) fn merge_var(acc: &mut Option<char>, v: Option<char>) -> Result<(), SystemError> {
    match (*acc, v) {
        (Some(a), Some(b)) if a != b => Err(SystemError::MixedParameters(a, b)),
        (None, Some(b)) => {
            *acc = Some(b);
            Ok(())
        }
        _ => Ok(()),
    }
}

/// Parses `<poly>[*<count>][,...]`; the empty string is the empty list.
pub fn parse_mult_list(text: &str) -> Result<(Vec<ParamPoly>, Option<char>), SystemError> {
    let mut out = Vec::new();
    let mut var = None;
    if text.is_empty() {
        return Ok((out, var));
    }
    for item in text.split(',') {
        let (poly_text, count) = match item.rsplit_once('*') {
            Some((head, tail)) if !tail.is_empty() && tail.bytes().all(|b| b.is_ascii_digit()) => {
                let n: usize = tail
                    .parse()
                    .map_err(|_| SystemError::Syntax(format!("bad count in {item:?}")))?;
                (head, n)
            }
            _ => (item, 1),
        };
        let (p, v) = ParamPoly::parse(poly_text)?;
        merge_var(&mut var, v)?;
        out.extend(std::iter::repeat_n(p, count));
    }
    Ok((out, var))
}

/// Canonical list form, grouping runs of equal entries as `<poly>*<count>`.
pub fn format_mult_list(mults: &[ParamPoly], var: char) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < mults.len() {
        let mut j = i + 1;
        while j < mults.len() && mults[j] == mults[i] {
            j += 1;
        }
        let text = mults[i].display_with(var);
        if j - i > 1 {
            parts.push(format!("{text}*{}", j - i));
        } else {
            parts.push(text);
        }
        i = j;
    }
    parts.join(",")
}

/// Number of linear conditions imposed by a general point of multiplicity `m`.
pub fn conditions_count(m: i64) -> i128 {
    if m <= 0 {
        0
    } else {
        binom(m + 2, 3)
    }
}

/// `binom(t+3, 3) - 1 - sum of conditions`: the projective virtual dimension.
pub fn projective_vdim(t: i64, mults: &[i64]) -> i128 {
    binom(t + 3, 3) - 1 - mults.iter().map(|&m| conditions_count(m)).sum::<i128>()
}

/// The same count without the projective `-1` (affine cone convention).
pub fn affine_vdim(t: i64, mults: &[i64]) -> i128 {
    projective_vdim(t, mults) + 1
}

/// Parses `7x11,4x2,3` style multiplicity shorthands used on the command line.
pub fn parse_repeat_list(text: &str) -> Result<Vec<i64>, SystemError> {
    let mut out = Vec::new();
    if text.is_empty() {
        return Ok(out);
    }
    for item in text.split(',') {
        let (v, n) = match item.split_once('x') {
            Some((v, n)) => (v, n),
            None => (item, "1"),
        };
        let v: i64 = v
            .parse()
            .map_err(|_| SystemError::Syntax(format!("bad multiplicity {item:?}")))?;
        let n: usize = n
            .parse()
            .map_err(|_| SystemError::Syntax(format!("bad repeat count {item:?}")))?;
        out.extend(std::iter::repeat_n(v, n));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(s: &str) -> FatPointSystem {
        s.parse().unwrap()
    }

    #[test]
    fn conditions() {
        assert_eq!(conditions_count(4), 20);
        assert_eq!(conditions_count(0), 0);
        assert_eq!(conditions_count(-3), 0);
        assert_eq!(conditions_count(7), 84);
    }

    #[test]
    fn vdim_matches_table() {
        assert_eq!(projective_vdim(15, &[4; 57]), -325);
        assert_eq!(projective_vdim(13, &[4; 36]), -161);
        assert_eq!(projective_vdim(11, &[4; 21]), -57);
        assert_eq!(projective_vdim(9, &[4; 11]), -1);
        assert_eq!(projective_vdim(0, &[]), 0);
    }

    #[test]
    fn instantiate_examples() {
        let s = sys("system deg=12m-1 mults=7m*6");
        assert_eq!(s.instantiate(2).as_constants(), Some((23, vec![14; 6])));
        let s = sys("system deg=5r-3 mults=3r-2*5");
        let i = s.instantiate(3);
        assert_eq!(i.as_constants(), Some((12, vec![7; 5])));
        let s = sys("system deg=-15 mults=-m-8*6,-m-4");
        assert_eq!(s.instantiate(9).degree.as_i64(), Some(-15));
    }

    #[test]
    fn drop_examples() {
        let s = sys("system deg=4m-5 mults=3m-2,3m-2,-m-4,-m-4,3m-2,3m-2");
        let d = s.drop_nonpositive().unwrap();
        assert!(d.same_entries(&sys("system deg=4m-5 mults=3m-2*4")));
        let plain = sys("system deg=7 mults=5,3,3");
        assert_eq!(plain.drop_nonpositive().unwrap(), plain);
        let mixed = sys("system deg=7 mults=m-3");
        assert!(matches!(
            mixed.drop_nonpositive(),
            Err(SystemError::UncertifiedSign { index: 1, .. })
        ));
    }

    #[test]
    fn text_form() {
        let s = sys("system deg=12m-1 mults=7m*6");
        assert_eq!(s.to_string(), "system deg=12m-1 mults=7m*6 m0=1");
        let r = sys("system deg=6r-3 mults=4r-2,3r-2*7 m0=5");
        assert_eq!(r.to_string(), "system deg=6r-3 mults=4r-2,3r-2*7 m0=5");
        assert!("system deg=m mults=r".parse::<FatPointSystem>().is_err());
        assert!("system mults=1".parse::<FatPointSystem>().is_err());
    }

    #[test]
    fn repeat_lists() {
        assert_eq!(parse_repeat_list("7x3,2").unwrap(), vec![7, 7, 7, 2]);
        assert!(parse_repeat_list("ax2").is_err());
    }
}
