//! Proof scripts for emptiness of fat-point systems and lower bounds on
//! Waldschmidt constants, their checker, and the ledger of proven facts.

mod check;
mod delta;
mod ledger;
mod mutate;
mod parse;

pub use check::{check, derive_gamma, CheckOutcome, Verified};
pub use delta::{delta_bullet_holds, verify_delta_cases, DeltaBullet, DeltaReport, BULLET_K};
pub use ledger::{AlphaFact, DeltaFact, Fact, FactLedger, GammaBound, LedgerError};
pub use mutate::{mutate_once, mutation_sites, MutationSite};
pub use parse::{parse, ParseError};

use serde::Serialize;

use crate::arith::{ParamPoly, Rat};
use crate::cremona::{CremonaStep, DivergencePattern};
use crate::systems::FatPointSystem;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Goal {
    /// The degree-`t` piece is zero for every parameter value `>= m0`.
    Empty(FatPointSystem),
    /// `gamma(n) >= bound`.
    Gamma { n: u64, bound: Rat },
    /// `gamma(n) >= delta(n)` for all `n >= from`.
    Delta { from: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Conclusion {
    NegativeDegree,
    ExcessMultiplicity,
    OracleEmpty { prime: u64, seed: u64 },
}

/// A decimal constant kept together with its number of fraction digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decimal {
    pub value: Rat,
    pub digits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Step {
    Cremona {
        step: CremonaStep,
        k: Option<ParamPoly>,
    },
    /// `(from, to)` position pairs.
    Permute(Vec<(usize, usize)>),
    Drop,
    Glue {
        fact: String,
        count: usize,
        at: usize,
    },
    Diverge {
        pattern: DivergencePattern,
        curvature: Option<ParamPoly>,
    },
    Conclude(Conclusion),
    /// The current state must equal this system.
    Expect {
        degree: ParamPoly,
        mults: Vec<ParamPoly>,
    },
    /// `gamma(n * 8^k) >= 2^k gamma(n)` applied to a used fact.
    Scale { fact: String, k: u32 },
    /// One interval of the `delta` case analysis.
    Bullet {
        lo: Rat,
        hi: Rat,
        fact: String,
        shift: u32,
    },
    /// Decimal lower bounds for the two coefficients of `delta`.
    Constants { a: Decimal, b: Decimal },
}

impl Step {
    pub fn kind(&self) -> &'static str {
        match self {
            Step::Cremona { .. } => "cremona",
            Step::Permute(_) => "permute",
            Step::Drop => "drop",
            Step::Glue { .. } => "glue",
            Step::Diverge { .. } => "diverge",
            Step::Conclude(_) => "conclude",
            Step::Expect { .. } => "expect",
            Step::Scale { .. } => "scale",
            Step::Bullet { .. } => "bullet",
            Step::Constants { .. } => "constants",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocatedStep {
    pub line: usize,
    pub step: Step,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub goal: Goal,
    pub goal_line: usize,
    pub uses: Vec<String>,
    pub steps: Vec<LocatedStep>,
    /// Parameter name of the goal system.
    pub var: char,
}
