//! The Cremona operation on fat-point systems and the two periodic
//! Cremona patterns whose iteration drives the degree off to infinity.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{negative_for_all_ge, ParamPoly};
use crate::systems::{FatPointSystem, SystemError};

/// Four distinct 1-based positions in a multiplicity sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CremonaStep {
    indices: [usize; 4],
}

impl CremonaStep {
    pub fn new(indices: [usize; 4]) -> Result<Self, SystemError> {
        check_distinct(&indices)?;
        if let Some(&z) = indices.iter().find(|&&i| i == 0) {
            return Err(SystemError::IndexOutOfRange { index: z, len: 0 });
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> [usize; 4] {
        self.indices
    }
}

impl fmt::Display for CremonaStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.indices;
        write!(f, "{a} {b} {c} {d}")
    }
}

fn check_distinct(indices: &[usize]) -> Result<(), SystemError> {
    for (i, a) in indices.iter().enumerate() {
        if indices[..i].contains(a) {
            return Err(SystemError::DuplicateIndex(*a));
        }
    }
    Ok(())
}

/// `k = 2t - (m_a + m_b + m_c + m_d)`.
pub fn cremona_k(s: &FatPointSystem, step: &CremonaStep) -> Result<ParamPoly, SystemError> {
    let mut sum = ParamPoly::zero();
    for &i in &step.indices {
        s.check_index(i)?;
        sum = sum + &s.mults[i - 1];
    }
    Ok(s.degree.scale(&BigInt::from(2)) - sum)
}

/// Applies the Cremona operation: degree and the four selected
/// multiplicities all move by `k`. Returns the new system and `k`.
pub fn cremona_step(
    s: &FatPointSystem,
    step: &CremonaStep,
) -> Result<(FatPointSystem, ParamPoly), SystemError> {
    let k = cremona_k(s, step)?;
    let mut out = s.clone();
    out.degree = &out.degree + &k;
    for &i in &step.indices {
        out.mults[i - 1] = &out.mults[i - 1] + &k;
    }
    Ok((out, k))
}

/// A periodic Cremona pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DivergencePattern {
    /// Cremona on the first four positions, then on the last four.
    Pairs8([usize; 8]),
    /// Three Cremonas sharing the pivot, one per triple, performed twice.
    TriBlock10 { pivot: usize, triples: [[usize; 3]; 3] },
}

impl DivergencePattern {
    pub fn pairs8(indices: [usize; 8]) -> Result<Self, SystemError> {
        check_distinct(&indices)?;
        Ok(DivergencePattern::Pairs8(indices))
    }

    pub fn triblock10(pivot: usize, triples: [[usize; 3]; 3]) -> Result<Self, SystemError> {
        let mut all = vec![pivot];
        all.extend(triples.iter().flatten());
        check_distinct(&all)?;
        Ok(DivergencePattern::TriBlock10 { pivot, triples })
    }

    /// The standard layout `pivot=1 triples=2,3,4;5,6,7;8,9,10`.
    pub fn standard_triblock() -> Self {
        DivergencePattern::TriBlock10 {
            pivot: 1,
            triples: [[2, 3, 4], [5, 6, 7], [8, 9, 10]],
        }
    }

    /// The Cremona steps making up one round of the pattern.
    pub fn round_steps(&self) -> Vec<CremonaStep> {
        match self {
            DivergencePattern::Pairs8(ix) => vec![
                CremonaStep { indices: [ix[0], ix[1], ix[2], ix[3]] },
                CremonaStep { indices: [ix[4], ix[5], ix[6], ix[7]] },
            ],
            DivergencePattern::TriBlock10 { pivot, triples } => {
                let one: Vec<CremonaStep> = triples
                    .iter()
                    .map(|t| CremonaStep { indices: [*pivot, t[0], t[1], t[2]] })
                    .collect();
                one.iter().chain(one.iter()).copied().collect()
            }
        }
    }

    fn indices(&self) -> Vec<usize> {
        match self {
            DivergencePattern::Pairs8(ix) => ix.to_vec(),
            DivergencePattern::TriBlock10 { pivot, triples } => {
                let mut v = vec![*pivot];
                v.extend(triples.iter().flatten());
                v
            }
        }
    }
}

impl fmt::Display for DivergencePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivergencePattern::Pairs8(ix) => {
                write!(f, "pairs8")?;
                for i in ix {
                    write!(f, " {i}")?;
                }
                Ok(())
            }
            DivergencePattern::TriBlock10 { pivot, triples } => {
                let t: Vec<String> = triples
                    .iter()
                    .map(|t| format!("{},{},{}", t[0], t[1], t[2]))
                    .collect();
                write!(f, "triblock10 pivot={pivot} triples={}", t.join(";"))
            }
        }
    }
}

/// Applies one full round of `pattern`, returning every intermediate step.
pub fn apply_round(
    s: &FatPointSystem,
    pattern: &DivergencePattern,
) -> Result<(FatPointSystem, Vec<ReplayedStep>), SystemError> {
    let mut cur = s.clone();
    let mut replay = Vec::new();
    for step in pattern.round_steps() {
        let (next, k) = cremona_step(&cur, &step)?;
        replay.push(ReplayedStep {
            step,
            k,
            after: next.clone(),
        });
        cur = next;
    }
    Ok((cur, replay))
}

/// Applies `steps` in order, returning every intermediate step.
pub fn replay_steps(s: &FatPointSystem, steps: &[CremonaStep]) -> Result<Vec<ReplayedStep>, SystemError> {
    let mut cur = s.clone();
    let mut out = Vec::with_capacity(steps.len());
    for step in steps {
        let (next, k) = cremona_step(&cur, step)?;
        out.push(ReplayedStep {
            step: *step,
            k,
            after: next.clone(),
        });
        cur = next;
    }
    Ok(out)
}

/// Closed form for `n` rounds of [`DivergencePattern::Pairs8`] acting on the
/// degree `t` and the two block sums `s1`, `s2`.
pub fn pairs8_closed_form(
    t: &ParamPoly,
    s1: &ParamPoly,
    s2: &ParamPoly,
    n: u64,
) -> (ParamPoly, ParamPoly, ParamPoly) {
    let n = BigInt::from(n);
    let n2 = &n * &n;
    let c = |x: BigInt| ParamPoly::constant(x);
    let big_t = &(&c(8 * &n2 + 1) * t - &c(2 * &n2 + &n) * s1) - &(&c(2 * &n2 - &n) * s2);
    let big_s1 = &(&c(16 * &n2 - 8 * &n) * t - &c(4 * &n2 - 1) * s1) - &(&c(4 * &n2 - 4 * &n) * s2);
    let big_s2 = &(&c(16 * &n2 + 8 * &n) * t - &c(4 * &n2 + 4 * &n) * s1) - &(&c(4 * &n2 - 1) * s2);
    (big_t, big_s1, big_s2)
}

/// One application of the recurrences driving [`pairs8_closed_form`].
pub fn pairs8_recurrence(
    t: &ParamPoly,
    s1: &ParamPoly,
    s2: &ParamPoly,
) -> (ParamPoly, ParamPoly, ParamPoly) {
    let c = |x: i64| ParamPoly::constant(x);
    (
        &(&c(9) * t - &c(3) * s1) - s2,
        &c(8) * t - &c(3) * s1,
        &(&c(24) * t - &c(8) * s1) - &(&c(3) * s2),
    )
}

/// The system reached from `I(0^10)_1` after `n` rounds of the standard
/// [`DivergencePattern::TriBlock10`].
pub fn triblock10_closed_form(n: u64) -> FatPointSystem {
    let n = n as i64;
    let q = 18 * n * n;
    let mut mults = vec![54 * n * n];
    mults.extend([q - 6 * n; 3]);
    mults.extend([q; 3]);
    mults.extend([q + 6 * n; 3]);
    FatPointSystem::constant(54 * n * n + 1, &mults)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayedStep {
    pub step: CremonaStep,
    pub k: ParamPoly,
    pub after: FatPointSystem,
}

/// Evidence that iterating a pattern sends the degree below zero for every
/// parameter value in range.
#[derive(Debug, Clone, Serialize)]
pub struct DivergenceProof {
    pub pattern: DivergencePattern,
    pub start: FatPointSystem,
    /// The first round, verbatim.
    pub round: Vec<ReplayedStep>,
    /// Degree change over the first round.
    pub drift: ParamPoly,
    /// Second difference of the degree across rounds.
    pub curvature: ParamPoly,
}

impl DivergenceProof {
    /// Degree after `n` full rounds: `t + n*drift + n(n-1)/2*curvature`.
    pub fn degree_after(&self, n: u64) -> ParamPoly {
        let nb = BigInt::from(n);
        let tri = &nb * (&nb - 1) / 2;
        &(&self.start.degree + &self.drift.scale(&nb)) + &self.curvature.scale(&tri)
    }

    /// Smallest round count after which the degree is negative at parameter `v`.
    pub fn rounds_needed(&self, v: i64) -> Option<u64> {
        (0..1_000_000u64).find(|&n| self.degree_after(n).eval_i64(v).is_negative())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivergenceFailure {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("step {step} of the round has parameter-dependent k = {k}")]
    SlopeDrift { step: usize, k: String },
    #[error("third difference of the orbit is nonzero; closed form does not apply")]
    NotQuadratic,
    #[error("replayed round disagrees with the closed-form recurrence: {0}")]
    ClosedFormMismatch(String),
    #[error("degree does not drift downward for all parameter values (leading term {0})")]
    NoDownwardDrift(String),
}

fn combo(a: &FatPointSystem, b: &FatPointSystem, f: impl Fn(&ParamPoly, &ParamPoly) -> ParamPoly) -> FatPointSystem {
    let mut out = a.clone();
    out.degree = f(&a.degree, &b.degree);
    out.mults = a.mults.iter().zip(&b.mults).map(|(x, y)| f(x, y)).collect();
    out
}

fn block_sum(s: &FatPointSystem, ix: &[usize]) -> ParamPoly {
    ix.iter().fold(ParamPoly::zero(), |acc, &i| acc + &s.mults[i - 1])
}

/// Certifies that iterating `pattern` on `s` eventually reaches negative
/// degree for every parameter value `>= s.m0`.
pub fn certify_divergence(
    s: &FatPointSystem,
    pattern: &DivergencePattern,
) -> Result<DivergenceProof, DivergenceFailure> {
    for i in pattern.indices() {
        s.check_index(i)?;
    }
    let (v1, round) = apply_round(s, pattern)?;
    for (i, r) in round.iter().enumerate() {
        if !r.k.slope_part().is_zero() {
            return Err(DivergenceFailure::SlopeDrift {
                step: i + 1,
                k: r.k.display_with(s.var),
            });
        }
    }
    let (v2, _) = apply_round(&v1, pattern)?;
    let (v3, _) = apply_round(&v2, pattern)?;
    // v3 - 3 v2 + 3 v1 - v0 == 0
    let three = BigInt::from(3);
    let d3 = combo(
        &combo(&v3, &v2, |a, b| a - &b.scale(&three)),
        &combo(&v1, s, |a, b| &a.scale(&three) - b),
        |a, b| a + b,
    );
    if !d3.degree.is_zero() || d3.mults.iter().any(|m| !m.is_zero()) {
        return Err(DivergenceFailure::NotQuadratic);
    }
    if let DivergencePattern::Pairs8(ix) = pattern {
        let (a, b) = (&ix[..4], &ix[4..]);
        let (t0, s10, s20) = (s.degree.clone(), block_sum(s, a), block_sum(s, b));
        let rec = pairs8_recurrence(&t0, &s10, &s20);
        let got = (v1.degree.clone(), block_sum(&v1, a), block_sum(&v1, b));
        if rec != got {
            return Err(DivergenceFailure::ClosedFormMismatch(
                "one round vs recurrence".into(),
            ));
        }
        for (n, v) in [(1u64, &v1), (2, &v2), (3, &v3)] {
            let cf = pairs8_closed_form(&t0, &s10, &s20, n);
            if cf != (v.degree.clone(), block_sum(v, a), block_sum(v, b)) {
                return Err(DivergenceFailure::ClosedFormMismatch(format!(
                    "closed form at n={n}"
                )));
            }
        }
    }
    let drift = &v1.degree - &s.degree;
    let curvature = &(&v2.degree - &v1.degree.scale(&BigInt::from(2))) + &s.degree;
    let downward = if curvature.is_zero() {
        negative_for_all_ge(&drift, s.m0)
    } else {
        negative_for_all_ge(&curvature, s.m0)
    };
    if !downward {
        let lead = if curvature.is_zero() { &drift } else { &curvature };
        return Err(DivergenceFailure::NoDownwardDrift(lead.display_with(s.var)));
    }
    Ok(DivergenceProof {
        pattern: pattern.clone(),
        start: s.clone(),
        round,
        drift,
        curvature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(s: &str) -> FatPointSystem {
        s.parse().unwrap()
    }

    fn step(ix: [usize; 4]) -> CremonaStep {
        CremonaStep::new(ix).unwrap()
    }

    #[test]
    fn cremona_examples() {
        let (out, k) = cremona_step(&FatPointSystem::constant(28, &[15; 7]), &step([1, 2, 3, 4])).unwrap();
        assert_eq!(k, ParamPoly::constant(-4));
        assert_eq!(out.as_constants(), Some((24, vec![11, 11, 11, 11, 15, 15, 15])));

        let s = FatPointSystem::constant(7, &[5, 3, 3, 3, 3]);
        let (out, k) = cremona_step(&s, &step([1, 2, 3, 4])).unwrap();
        assert!(k.is_zero());
        assert_eq!(out, s);

        let (out, k) = cremona_step(&sys("system deg=12m-1 mults=7m*6"), &step([1, 2, 3, 4])).unwrap();
        assert_eq!(k, ParamPoly::linear(-4, -2));
        assert!(out.same_entries(&sys("system deg=8m-3 mults=3m-2*4,7m*2")));
    }

    #[test]
    fn step_validation() {
        assert!(CremonaStep::new([1, 2, 2, 3]).is_err());
        assert!(CremonaStep::new([0, 1, 2, 3]).is_err());
        let s = FatPointSystem::constant(3, &[1, 1, 1]);
        assert!(cremona_step(&s, &step([1, 2, 3, 4])).is_err());
    }

    #[test]
    fn pairs8_closed_form_examples() {
        let (t, s1, s2) = (ParamPoly::from_i64s(&[0, 1]), ParamPoly::constant(3), ParamPoly::constant(5));
        assert_eq!(pairs8_closed_form(&t, &s1, &s2, 0), (t.clone(), s1.clone(), s2.clone()));
        assert_eq!(pairs8_closed_form(&t, &s1, &s2, 1), pairs8_recurrence(&t, &s1, &s2));
        // oracle: iterate the two Cremonas three times on (1; 0^8)
        let pat = DivergencePattern::pairs8([1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        let mut cur = FatPointSystem::constant(1, &[0; 8]);
        for _ in 0..3 {
            cur = apply_round(&cur, &pat).unwrap().0;
        }
        let (big_t, _, _) = pairs8_closed_form(&ParamPoly::constant(1), &ParamPoly::zero(), &ParamPoly::zero(), 3);
        assert_eq!(big_t, ParamPoly::constant(73));
        assert_eq!(cur.degree, big_t);
    }

    #[test]
    fn triblock_closed_form_examples() {
        assert_eq!(triblock10_closed_form(0), FatPointSystem::constant(1, &[0; 10]));
        assert_eq!(
            triblock10_closed_form(1).as_constants(),
            Some((55, vec![54, 12, 12, 12, 18, 18, 18, 24, 24, 24]))
        );
        let pat = DivergencePattern::standard_triblock();
        let mut cur = FatPointSystem::constant(1, &[0; 10]);
        for _ in 0..2 {
            cur = apply_round(&cur, &pat).unwrap().0;
        }
        assert_eq!(pat.round_steps().len(), 6);
        assert_eq!(cur, triblock10_closed_form(2));
    }

    #[test]
    fn divergence_for_eight_equal_points() {
        let s = sys("system deg=2m-1 mults=m*8");
        let pat = DivergencePattern::pairs8([1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        let proof = certify_divergence(&s, &pat).unwrap();
        assert_eq!(proof.curvature, ParamPoly::constant(-16));
        // replay explicitly at m = 10 for the predicted number of rounds
        let n = proof.rounds_needed(10).unwrap();
        let mut cur = s.instantiate(10);
        for _ in 0..n {
            cur = apply_round(&cur, &pat).unwrap().0;
        }
        assert!(cur.degree.as_i64().unwrap() < 0);
    }

    #[test]
    fn divergence_triblock() {
        let s = sys("system deg=7m-1 mults=5m,3m*9");
        let proof = certify_divergence(&s, &DivergencePattern::standard_triblock()).unwrap();
        assert!(proof.curvature.constant_term().is_negative());
    }

    #[test]
    fn divergence_failures() {
        // upward drift: 4t > sum
        let s = FatPointSystem::constant(1, &[0; 8]);
        let pat = DivergencePattern::pairs8([1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        assert!(matches!(certify_divergence(&s, &pat), Err(DivergenceFailure::NoDownwardDrift(_))));
        // slope part of k nonzero
        let s = sys("system deg=3m-1 mults=m*8");
        assert!(matches!(certify_divergence(&s, &pat), Err(DivergenceFailure::SlopeDrift { .. })));
    }
}
