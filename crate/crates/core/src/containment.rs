//! Deciding `I^(3r-2) ⊂ M^(2r-2) I^r` (and `I^(3r-1) ⊂ M^(2r-1) I^r`) for the
//! ideal `I` of `n` generic simple points, from the proven facts.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{binom, cmp_with_cuberoot, cuberoot_bracket, cuberoot_term_cmp, CubeCmp, ParamPoly, Rat};
use crate::certificates::{AlphaFact, FactLedger, GammaBound};
use crate::cremona::{cremona_step, CremonaStep};
use crate::systems::{projective_vdim, FatPointSystem};

pub const SCHEMA_VERSION: u32 = 1;

/// The unique `s >= 2` with `binom(s,3) < n <= binom(s+1,3)`.
pub fn bracket_s(n: u64) -> u64 {
    let mut s = 2u64;
    while (binom(s as i64 + 1, 3) as u128) < n as u128 {
        s += 1;
    }
    s
}

/// `alpha` of `n` generic simple points: the least `t` with more monomials
/// than points.
pub fn alpha_simple(n: u64) -> u64 {
    let mut t = 0u64;
    while binom(t as i64 + 3, 3) as u128 <= n as u128 {
        t += 1;
    }
    t
}

/// `((s+1)r - 2) / (3r - 2)`.
pub fn ass1_threshold(s: u64, r: u64) -> Rat {
    Rat::new(BigInt::from((s + 1) * r) - 2, BigInt::from(3 * r) - 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Criterion {
    /// `gamma(n) >= ((s+1)r-2)/(3r-2)` from a ledger bound.
    HoldsByAss1 { bound: GammaBound, needed: Rat },
    /// `alpha(I^(3r-2)) >= (s+1)r-2` from an emptiness fact.
    HoldsByAss2 {
        fact: String,
        points: usize,
        multiplicity: i64,
        degree: i64,
        needed: i64,
    },
    Fails,
}

fn solve_multiplicity(m: &ParamPoly, target: i64, m0: i64) -> Option<i64> {
    match m.degree() {
        None => None,
        Some(0) => (m.as_i64()? == target).then_some(m0),
        Some(1) => {
            let a = m.coeff(1);
            let num = BigInt::from(target) - m.constant_term();
            if &num % &a != BigInt::from(0) {
                return None;
            }
            let v: i64 = (num / a).try_into().ok()?;
            (v >= m0).then_some(v)
        }
        _ => None,
    }
}

/// An emptiness fact on `n' <= n` points of multiplicity `3r-2` at a degree
/// of at least `(s+1)r - 3`.
fn ass2_fact(n: u64, r: u64, s: u64, facts: &[AlphaFact]) -> Option<Criterion> {
    let target = 3 * r as i64 - 2;
    let needed = ((s + 1) * r) as i64 - 2;
    for f in facts {
        let sys = &f.system;
        if sys.len() as u64 > n {
            continue;
        }
        let Some(v) = solve_multiplicity(&sys.mults[0], target, sys.m0) else {
            continue;
        };
        let Ok(degree) = i64::try_from(sys.degree.eval_i64(v)) else {
            continue;
        };
        if degree + 1 >= needed {
            return Some(Criterion::HoldsByAss2 {
                fact: f.name.clone(),
                points: sys.len(),
                multiplicity: target,
                degree,
                needed,
            });
        }
    }
    None
}

/// Either condition of the containment criterion, against the ledger.
pub fn criterion(n: u64, r: u64, ledger: &FactLedger) -> Criterion {
    let s = bracket_s(n);
    let needed = ass1_threshold(s, r);
    if let Some(g) = ledger.best_gamma(n) {
        if g.bound >= needed {
            return Criterion::HoldsByAss1 {
                bound: g.clone(),
                needed,
            };
        }
    }
    ass2_fact(n, r, s, &ledger.alpha_facts()).unwrap_or(Criterion::Fails)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Case3Degree {
    pub n: u64,
    /// Least `t` with `binom(t+3,3) >= 20n`.
    pub t: u64,
    /// `binom(t+2,3) - 20n - 1 < 0`: no quartic-point form in degree `t-1`.
    pub expected_count: i128,
    /// `t >= cbrt(120n) - 3` and `t >= 2*cbrt(6n) + 11/5`.
    pub chain_holds: bool,
}

/// `cbrt(120n) - 3 >= 2*cbrt(6n) + 11/5` for every `n >= n0`, checked at `n0`
/// with rational brackets; both sides grow like `cbrt(n)` and the left one
/// faster.
pub fn case3_chain_from(n0: u64) -> bool {
    for den in [1_000u64, 1_000_000, 1_000_000_000] {
        let (lo120, _) = cuberoot_bracket(&BigInt::from(120 * n0), den);
        let (_, hi6) = cuberoot_bracket(&BigInt::from(6 * n0), den);
        if lo120 - Rat::int(3) >= Rat::int(2) * hi6 + Rat::new(11, 5) {
            return true;
        }
    }
    false
}

pub fn case3_degree(n: u64) -> Case3Degree {
    let mut t = 0u64;
    while (binom(t as i64 + 3, 3) as u128) < 20 * n as u128 {
        t += 1;
    }
    let expected_count = binom(t as i64 + 2, 3) - 20 * n as i128 - 1;
    let x = BigInt::from(6 * n);
    let tt = Rat::int(t);
    let cube_ok = BigInt::from(t + 3).pow(3) >= BigInt::from(120 * n);
    let direct = cmp_with_cuberoot(&Rat::int(2), &Rat::new(11, 5), &x, &tt) == Ok(CubeCmp::GE);
    Case3Degree {
        n,
        t,
        expected_count,
        chain_holds: cube_ok && direct,
    }
}

/// `binom(3r+2,3) - 4 binom(r+2,3) - binom(3r,3) - 1`, whose negativity is
/// the emptiness condition quoted for `I(r^{×4}, 3r-2)` in degree `3r-1`.
pub fn laface_ugaglia_margin(r: i64) -> i128 {
    binom(3 * r + 2, 3) - 4 * binom(r + 2, 3) - binom(3 * r, 3) - 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Certified,
    /// Rests on a computer-algebra computation this crate does not redo.
    ExternalComputation,
    OpenGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    Trivial,
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
    Singular,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::Trivial => "trivial",
            Case::Case1 => "case1",
            Case::Case2 => "case2",
            Case::Case3 => "case3",
            Case::Case4 => "case4",
            Case::Case5 => "case5",
            Case::Singular => "singular",
        }
    }
}

/// `alpha(I^(3r-k)) >= r*alpha(I) + 2r - k` for `k = 0, 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Chudnovsky {
    pub k0: u64,
    pub k1: u64,
    pub k2: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContainmentReport {
    pub schema: u32,
    pub n: u64,
    pub r: u64,
    pub status: Status,
    pub case: Case,
    pub facts: Vec<String>,
    pub inequalities: Vec<String>,
    pub chudnovsky: Option<Chudnovsky>,
    pub reason: Option<String>,
}

impl ContainmentReport {
    fn new(n: u64, r: u64, case: Case) -> Self {
        ContainmentReport {
            schema: SCHEMA_VERSION,
            n,
            r,
            status: Status::Certified,
            case,
            facts: Vec::new(),
            inequalities: Vec::new(),
            chudnovsky: None,
            reason: None,
        }
    }

    fn certified(mut self) -> Self {
        self.status = Status::Certified;
        let a = alpha_simple(self.n);
        let base = self.r * a + 2 * self.r;
        self.chudnovsky = Some(Chudnovsky {
            k0: base,
            k1: base - 1,
            k2: base - 2,
        });
        self
    }

    fn gap(mut self, reason: String) -> Self {
        self.status = Status::OpenGap;
        self.reason = Some(reason);
        self
    }

    fn ineq(&mut self, s: String) {
        self.inequalities.push(s);
    }
}

/// Routes `(n, r)` to the argument that covers it.
pub fn dispatch(n: u64, r: u64, ledger: &FactLedger) -> ContainmentReport {
    assert!(n >= 1 && r >= 1, "n and r must be positive");
    if n <= 4 {
        return case5(n, r);
    }
    if r == 1 {
        let mut rep = ContainmentReport::new(n, r, Case::Trivial);
        rep.ineq("I^(1) = I = M^0 I^1".into());
        return rep.certified();
    }
    if r == 2 {
        return match n {
            5 | 6 => {
                let mut rep = ContainmentReport::new(n, r, Case::Singular);
                rep.status = Status::ExternalComputation;
                rep.reason = Some(format!(
                    "I^(4) ⊂ M^2 I^2 for {n} points rests on an ideal-quotient computation over a function field"
                ));
                rep
            }
            7..=64 => case4(n, ledger),
            _ => case3(n),
        };
    }
    if n >= 512 {
        case1(n, r, ledger)
    } else {
        case2(n, r, ledger)
    }
}

fn case5(n: u64, r: u64) -> ContainmentReport {
    let mut rep = ContainmentReport::new(n, r, Case::Case5);
    if n == 1 || r == 1 {
        rep.ineq("n = 1 or r = 1".into());
        return rep.certified();
    }
    // t + p >= (8-n)r + n - 6 >= 4r - 2, the last step is (4-n)(r-1) >= 0
    let lhs = (8 - n as i64) * r as i64 + n as i64 - 6;
    let rhs = 4 * r as i64 - 2;
    rep.ineq(format!("(8-{n})*{r}+{n}-6 = {lhs} >= 4r-2 = {rhs}"));
    if lhs >= rhs {
        rep.facts.push("monomial factorization for fundamental points".into());
        rep.certified()
    } else {
        rep.gap(format!("{lhs} < {rhs}"))
    }
}

fn case4(n: u64, ledger: &FactLedger) -> ContainmentReport {
    let mut rep = ContainmentReport::new(n, 2, Case::Case4);
    let s = bracket_s(n);
    if s == 4 {
        let name = "case4_s4";
        match ledger.get(name).and_then(|f| f.system.as_ref()) {
            Some(sys) if sys.as_constants() == Some((7, vec![4; 7])) => {
                rep.facts.push(name.into());
                rep.ineq("I(4^{×7})_7 = 0, so alpha(I^(4)) >= 8 = 2s".into());
                return rep.certified();
            }
            _ => return rep.gap(format!("fact {name} is not in the ledger")),
        }
    }
    let n0 = binom(s as i64, 3) as u64 + 1;
    let t = 2 * s as i64 - 1;
    let v = projective_vdim(t, &vec![4; n0 as usize]);
    rep.ineq(format!("s = {s}, vdim(4^{{×{n0}}}, {t}) = {v} < 0"));
    if v < 0 && t >= 9 {
        rep.facts.push("expected dimension criterion for quartuple points".into());
        rep.certified()
    } else {
        rep.gap(format!("vdim {v} at degree {t}"))
    }
}

fn case3(n: u64) -> ContainmentReport {
    let mut rep = ContainmentReport::new(n, 2, Case::Case3);
    let s = bracket_s(n);
    let c = case3_degree(n);
    rep.ineq(format!("least t with binom(t+3,3) >= 20n is {}", c.t));
    rep.ineq(format!("binom(t+2,3) - 20n - 1 = {} < 0", c.expected_count));
    rep.ineq(format!("t = {} >= 2s = {}", c.t, 2 * s));
    rep.facts.push("expected dimension criterion for quartuple points".into());
    if c.expected_count < 0 && c.t >= 2 * s && c.chain_holds && case3_chain_from(65) {
        rep.ineq(format!("{} >= cbrt(120n) - 3 >= 2 cbrt(6n) + 11/5", c.t));
        rep.certified()
    } else {
        rep.gap(format!("case3 chain fails at n = {n}"))
    }
}

// (3x + 43/10)(3r-2)/7 - ((x + 21/10)r - 2) = (r-3)(2x - 9/5)/7 as
// polynomials in x and r; both sides have degree <= 1 in each variable, so
// agreement on a 2x2 grid suffices.
fn case1_identity_holds() -> bool {
    let pts = [Rat::int(0), Rat::int(1)];
    pts.iter().all(|x| {
        pts.iter().all(|r| {
            let lhs = (Rat::int(3) * x.clone() + Rat::new(43, 10)) * (Rat::int(3) * r.clone() - Rat::int(2))
                / Rat::int(7)
                - ((x.clone() + Rat::new(21, 10)) * r.clone() - Rat::int(2));
            let rhs = (r.clone() - Rat::int(3)) * (Rat::int(2) * x.clone() - Rat::new(9, 5)) / Rat::int(7);
            lhs == rhs
        })
    })
}

fn case1(n: u64, r: u64, ledger: &FactLedger) -> ContainmentReport {
    let mut rep = ContainmentReport::new(n, r, Case::Case1);
    let Some((fact, delta)) = ledger.delta() else {
        return rep.gap("no delta bound in the ledger".into());
    };
    if n < delta.from {
        return rep.gap(format!("delta bound holds from {} only", delta.from));
    }
    rep.facts.push(fact.name.clone());
    let s = bracket_s(n);
    let x6n = BigInt::from(6 * n);
    rep.ineq(format!("gamma({n}) >= (3 cbrt(6n) + 43/10)/7"));
    if !case1_identity_holds() {
        return rep.gap("denominator-cleared identity fails".into());
    }
    let two_x_ok = cuberoot_term_cmp(&Rat::int(2), &x6n, &Rat::new(9, 5)) != Ok(Ordering::Less);
    rep.ineq(format!("(r-3)(2 cbrt({}) - 9/5) >= 0", 6 * n));
    if !two_x_ok {
        return rep.gap("2 cbrt(6n) < 9/5".into());
    }
    let si = s as i64;
    let quad = 300 * si * si - 1630 * si + 1331;
    rep.ineq(format!("s(s-1)(s-2) - (s-11/10)^3 = ({quad})/1000 >= 0 at s = {s}"));
    let s_ok = cmp_with_cuberoot(&Rat::one(), &Rat::new(11, 10), &x6n, &Rat::int(s)) == Ok(CubeCmp::LT)
        || cuberoot_term_cmp(&Rat::one(), &x6n, &(Rat::int(s) - Rat::new(11, 10))) == Ok(Ordering::Equal);
    rep.ineq(format!("s = {s} <= cbrt(6n) + 11/10"));
    if quad < 0 || s < 5 || !s_ok {
        return rep.gap(format!("s = {s} exceeds cbrt(6n) + 11/10"));
    }
    rep.ineq(format!("((cbrt(6n)+21/10)r-2)/(3r-2) >= {}", ass1_threshold(s, r)));
    rep.certified()
}

fn case2(n: u64, r: u64, ledger: &FactLedger) -> ContainmentReport {
    let mut rep = ContainmentReport::new(n, r, Case::Case2);
    let s = bracket_s(n);
    let needed = ass1_threshold(s, r);
    match criterion(n, r, ledger) {
        Criterion::HoldsByAss1 { bound, needed } => {
            rep.facts.push(bound.provenance.clone());
            rep.ineq(format!("gamma({n}) >= gamma({}) >= {} >= {needed}", bound.n, bound.bound));
            return rep.certified();
        }
        Criterion::HoldsByAss2 {
            fact,
            points,
            multiplicity,
            degree,
            needed,
        } => {
            rep.facts.push(fact);
            rep.ineq(format!(
                "I({multiplicity}^{{×{points}}})_{degree} = 0, so alpha(I^({multiplicity})) >= {} >= {needed}",
                degree + 1
            ));
            return rep.certified();
        }
        Criterion::Fails => {}
    }
    if n == 5 || n == 6 {
        let margin = laface_ugaglia_margin(r as i64);
        let sys = FatPointSystem::new(
            ParamPoly::linear(5, -3),
            vec![ParamPoly::linear(3, -2); 5],
            r as i64,
        );
        let step = CremonaStep::new([1, 2, 3, 4]).expect("distinct");
        let reduced = cremona_step(&sys, &step).ok();
        rep.ineq(format!(
            "I((3r-2)^{{×5}})_{{5r-3}} -> {} by one Cremona step",
            reduced.map(|(s, _)| s.entries_text()).unwrap_or_default()
        ));
        rep.ineq(format!("binom(3r+2,3) - 4 binom(r+2,3) - binom(3r,3) - 1 = {margin}"));
        if margin < 0 {
            rep.facts.push("emptiness criterion for r^{×4}, 3r-2 in degree 3r-1".into());
            return rep.certified();
        }
        let best = ledger
            .best_gamma(n)
            .map(|g| g.bound.to_string())
            .unwrap_or_else(|| "none".into());
        return rep.gap(format!(
            "gamma({n}) >= {best} < {needed}, no alpha fact, and the margin {margin} is not negative"
        ));
    }
    rep.gap(format!("no ledger fact gives gamma({n}) >= {needed} or alpha(I^({})) >= {}", 3 * r - 2, (s + 1) * r - 2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Survey {
    pub n_max: u64,
    pub r_max: u64,
    /// Certified cells per case, in case order.
    pub certified: Vec<(Case, usize)>,
    /// Every cell that is not certified, by `n` then `r`.
    pub exceptions: Vec<ContainmentReport>,
}

/// Dispatches every `(n, r)` with `1 <= n <= n_max`, `1 <= r <= r_max`.
pub fn survey(n_max: u64, r_max: u64, ledger: &FactLedger) -> Survey {
    use rayon::prelude::*;
    let cells: Vec<ContainmentReport> = (1..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| (1..=r_max).map(move |r| (n, r)))
        .map(|(n, r)| dispatch(n, r, ledger))
        .collect();
    let mut counts = std::collections::BTreeMap::new();
    let mut exceptions = Vec::new();
    for c in cells {
        if c.status == Status::Certified {
            *counts.entry(c.case).or_insert(0usize) += 1;
        } else {
            exceptions.push(c);
        }
    }
    Survey {
        n_max,
        r_max,
        certified: counts.into_iter().collect(),
        exceptions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brackets() {
        assert_eq!(bracket_s(1), 2);
        assert_eq!(bracket_s(57), 8);
        assert_eq!(bracket_s(56), 7);
        assert_eq!(bracket_s(512), 15);
        assert_eq!(alpha_simple(1), 1);
        assert_eq!(alpha_simple(4), 2);
        assert_eq!(alpha_simple(10), 3);
    }

    #[test]
    fn case3_examples() {
        assert_eq!(case3_degree(65).t, 18);
        assert_eq!(case3_degree(1).t, 3);
        assert!(case3_degree(65).chain_holds);
        assert!(case3_chain_from(65));
        assert!(!case3_chain_from(40));
    }

    #[test]
    fn margins() {
        assert_eq!(laface_ugaglia_margin(1), 4);
        assert_eq!(laface_ugaglia_margin(3), 40);
        assert_eq!(laface_ugaglia_margin(10), 19);
        assert_eq!(laface_ugaglia_margin(11), -56);
        for r in 1..40i64 {
            assert_eq!(3 * laface_ugaglia_margin(r), (-2 * r.pow(3) + 21 * r * r - 4 * r - 3) as i128);
        }
    }

    #[test]
    fn identity() {
        assert!(case1_identity_holds());
    }
}
