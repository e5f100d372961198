use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::delta::verify_delta_cases;
use super::ledger::{Fact, FactLedger, GammaBound};
use super::{Certificate, Conclusion, Goal, Step};
use crate::arith::{greater_for_all_ge, negative_for_all_ge, nonneg_for_all_ge, ParamPoly, Rat};
use crate::cremona::{certify_divergence, cremona_step};
use crate::oracle::{dimension_generic, is_prime};
use crate::systems::{format_mult_list, FatPointSystem};

/// One row of the replayed table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub line: usize,
    pub step: String,
    pub k: Option<String>,
    pub state: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verified {
    pub fact: Fact,
    pub trace: Vec<TraceRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CheckOutcome {
    Verified(Verified),
    /// `step` counts lines after the goal from 1; 0 refers to the header.
    Falsified {
        step: usize,
        line: usize,
        reason: String,
    },
}

impl CheckOutcome {
    pub fn is_verified(&self) -> bool {
        matches!(self, CheckOutcome::Verified(_))
    }
}

/// `gamma(n) >= d/c` from emptiness of `(c*m)^{×n}` in degree `d*m - 1` or
/// `d*m` for all large `m`.
pub fn derive_gamma(goal: &FatPointSystem) -> Option<(u64, Rat)> {
    let first = goal.mults.first()?;
    if goal.mults.iter().any(|x| x != first) || first.degree() != Some(1) || !first.constant_term().is_zero() {
        return None;
    }
    let c = first.coeff(1);
    let d = goal.degree.coeff(1);
    let tail = goal.degree.constant_term();
    if goal.degree.degree() != Some(1) || !c.is_positive() || !d.is_positive() {
        return None;
    }
    if !(tail.is_zero() || tail == -BigInt::one()) {
        return None;
    }
    Some((goal.mults.len() as u64, Rat::new(d, c)))
}

struct Run<'a> {
    cert: &'a Certificate,
    ledger: &'a FactLedger,
}

type StepResult<T> = Result<T, String>;

impl Run<'_> {
    fn fact(&self, name: &str) -> StepResult<&Fact> {
        if !self.cert.uses.iter().any(|u| u == name) {
            return Err(format!("fact {name} is not declared with 'use'"));
        }
        self.ledger
            .get(name)
            .ok_or_else(|| format!("fact {name} is not in the ledger"))
    }

    fn gamma_of(&self, name: &str) -> StepResult<&GammaBound> {
        self.fact(name)?
            .gamma
            .as_ref()
            .ok_or_else(|| format!("fact {name} carries no gamma bound"))
    }

    fn glue(&self, s: &FatPointSystem, name: &str, count: usize, at: usize) -> StepResult<FatPointSystem> {
        let fact = self.fact(name)?;
        let block_len = match (&fact.gamma, &fact.system) {
            (Some(g), _) => g.n as usize,
            (None, Some(sys)) => sys.len(),
            _ => return Err(format!("fact {name} cannot be glued")),
        };
        let start = at - 1;
        let end = start + count * block_len;
        if end > s.len() {
            return Err(format!(
                "glue needs positions {at}..{end} but the system has {} points",
                s.len()
            ));
        }
        let mut replaced = Vec::with_capacity(count);
        for b in 0..count {
            let block = &s.mults[start + b * block_len..start + (b + 1) * block_len];
            let new = match &fact.gamma {
                Some(g) => glue_gamma(block, g, s.m0, s.var)?,
                None => {
                    let sys = fact.system.as_ref().expect("checked above");
                    if sys.m0 > s.m0 {
                        return Err(format!("fact {name} holds only from {}={}", s.var, sys.m0));
                    }
                    if block != sys.mults.as_slice() {
                        return Err(format!(
                            "block {} does not match fact {name} multiplicities {}",
                            format_mult_list(block, s.var),
                            format_mult_list(&sys.mults, s.var)
                        ));
                    }
                    &sys.degree + &ParamPoly::constant(1)
                }
            };
            replaced.push(new);
        }
        let mut out = s.clone();
        out.mults.splice(start..end, replaced);
        Ok(out)
    }
}

// From gamma(n) >= p/q, a block of n equal multiplicities M is empty below
// degree ceil(pM/q).
fn glue_gamma(block: &[ParamPoly], g: &GammaBound, m0: i64, var: char) -> StepResult<ParamPoly> {
    let m = &block[0];
    if block.iter().any(|x| x != m) {
        return Err(format!(
            "gamma glue needs equal multiplicities, got {}",
            format_mult_list(block, var)
        ));
    }
    if !nonneg_for_all_ge(&(m - &ParamPoly::constant(1)), m0).is_yes() {
        return Err(format!("multiplicity {} is not positive for all {var} >= {m0}", m.display_with(var)));
    }
    let (p, q) = (g.bound.numer(), g.bound.denom());
    let pm = m.scale(p);
    let slope = pm
        .slope_part()
        .div_exact(q)
        .ok_or_else(|| format!("{}*({})/{} is not integral in {var}", p, m.display_with(var), q))?;
    let c = pm.constant_term();
    let ceil = Integer::div_ceil(&c, q);
    Ok(&slope + &ParamPoly::constant(ceil))
}

fn show(s: &FatPointSystem) -> String {
    format!(
        "deg={} mults={}",
        s.degree.display_with(s.var),
        format_mult_list(&s.mults, s.var)
    )
}

/// Replays `cert` against the facts in `ledger`.
pub fn check(cert: &Certificate, ledger: &FactLedger) -> CheckOutcome {
    let falsified = |step: usize, line: usize, reason: String| CheckOutcome::Falsified { step, line, reason };
    for u in &cert.uses {
        if !ledger.contains(u) {
            return falsified(0, cert.goal_line, format!("used fact {u} is not in the ledger"));
        }
        if *u == cert.name {
            return falsified(0, cert.goal_line, "certificate uses itself".into());
        }
    }
    let run = Run { cert, ledger };
    let result = match &cert.goal {
        Goal::Empty(s) => check_empty(&run, s),
        Goal::Gamma { n, bound } => check_gamma(&run, *n, bound),
        Goal::Delta { from } => check_delta(&run, *from),
    };
    match result {
        Ok((system, gamma, delta, trace)) => CheckOutcome::Verified(Verified {
            fact: Fact {
                name: cert.name.clone(),
                provenance: cert.name.clone(),
                uses: cert.uses.clone(),
                system,
                gamma,
                delta,
            },
            trace,
        }),
        Err((i, reason)) => {
            let line = if i == 0 { cert.goal_line } else { cert.steps[i - 1].line };
            falsified(i, line, reason)
        }
    }
}

type Outcome = Result<
    (
        Option<FatPointSystem>,
        Option<GammaBound>,
        Option<super::ledger::DeltaFact>,
        Vec<TraceRow>,
    ),
    (usize, String),
>;

fn check_empty(run: &Run, goal: &FatPointSystem) -> Outcome {
    let mut state = goal.clone();
    let mut trace = vec![TraceRow {
        line: run.cert.goal_line,
        step: "goal".into(),
        k: None,
        state: Some(show(&state)),
    }];
    let mut concluded = false;
    for (idx, ls) in run.cert.steps.iter().enumerate() {
        let i = idx + 1;
        if concluded {
            return Err((i, "step after the conclusion".into()));
        }
        let mut row = TraceRow {
            line: ls.line,
            step: ls.step.kind().into(),
            k: None,
            state: None,
        };
        match &ls.step {
            Step::Expect { degree, mults } => {
                if state.degree != *degree || state.mults != *mults {
                    let want = FatPointSystem::new(degree.clone(), mults.clone(), state.m0).with_var(state.var);
                    return Err((i, format!("state is {}, table says {}", show(&state), show(&want))));
                }
                continue;
            }
            Step::Cremona { step, k } => {
                let (next, got) = cremona_step(&state, step).map_err(|e| (i, e.to_string()))?;
                if let Some(k) = k {
                    if *k != got {
                        return Err((
                            i,
                            format!(
                                "k is {}, table says {}",
                                got.display_with(state.var),
                                k.display_with(state.var)
                            ),
                        ));
                    }
                }
                row.step = format!("cremona {step}");
                row.k = Some(got.display_with(state.var));
                state = next;
            }
            Step::Permute(pairs) => {
                state = permute(&state, pairs).map_err(|e| (i, e))?;
            }
            Step::Drop => {
                state = state.drop_nonpositive().map_err(|e| (i, e.to_string()))?;
            }
            Step::Glue { fact, count, at } => {
                state = run.glue(&state, fact, *count, *at).map_err(|e| (i, e))?;
                row.step = format!("glue {fact} x{count} at {at}");
            }
            Step::Diverge { pattern, curvature } => {
                let proof = certify_divergence(&state, pattern).map_err(|e| (i, e.to_string()))?;
                if let Some(c) = curvature {
                    if *c != proof.curvature {
                        return Err((
                            i,
                            format!(
                                "curvature is {}, certificate says {}",
                                proof.curvature.display_with(state.var),
                                c.display_with(state.var)
                            ),
                        ));
                    }
                }
                row.step = format!("diverge {pattern}");
                row.k = Some(format!(
                    "drift {} curvature {}",
                    proof.drift.display_with(state.var),
                    proof.curvature.display_with(state.var)
                ));
                concluded = true;
            }
            Step::Conclude(c) => {
                conclude(&state, c).map_err(|e| (i, e))?;
                row.step = format!("conclude {}", conclusion_name(c));
                concluded = true;
            }
            other => return Err((i, format!("{} steps do not apply to emptiness goals", other.kind()))),
        }
        if !concluded {
            row.state = Some(show(&state));
        }
        trace.push(row);
    }
    if !concluded {
        return Err((run.cert.steps.len(), "no conclusion reached".into()));
    }
    let gamma = derive_gamma(goal).map(|(n, bound)| GammaBound {
        n,
        bound,
        provenance: run.cert.name.clone(),
    });
    Ok((Some(goal.clone()), gamma, None, trace))
}

fn conclusion_name(c: &Conclusion) -> &'static str {
    match c {
        Conclusion::NegativeDegree => "negative-degree",
        Conclusion::ExcessMultiplicity => "excess-multiplicity",
        Conclusion::OracleEmpty { .. } => "oracle-empty",
    }
}

fn conclude(s: &FatPointSystem, c: &Conclusion) -> StepResult<()> {
    match c {
        Conclusion::NegativeDegree => {
            if negative_for_all_ge(&s.degree, s.m0) {
                Ok(())
            } else {
                Err(format!("degree {} is not negative for all {} >= {}", s.degree.display_with(s.var), s.var, s.m0))
            }
        }
        Conclusion::ExcessMultiplicity => {
            // a form of degree t cannot vanish to order > t at a point
            if s.mults.iter().any(|m| greater_for_all_ge(m, &s.degree, s.m0)) {
                Ok(())
            } else {
                Err(format!("no multiplicity exceeds the degree in {}", show(s)))
            }
        }
        Conclusion::OracleEmpty { prime, seed } => {
            let (t, mults) = s
                .as_constants()
                .ok_or_else(|| "oracle conclusions need a constant system".to_string())?;
            if !is_prime(*prime) {
                return Err(format!("{prime} is not prime"));
            }
            let r = dimension_generic(&mults, t, *prime, *seed).map_err(|e| e.to_string())?;
            if r.dimension == 0 {
                Ok(())
            } else {
                Err(format!("oracle dimension is {} at prime {prime} seed {seed}", r.dimension))
            }
        }
    }
}

fn permute(s: &FatPointSystem, pairs: &[(usize, usize)]) -> StepResult<FatPointSystem> {
    let mut from: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let mut to: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    for &i in from.iter().chain(&to) {
        s.check_index(i).map_err(|e| e.to_string())?;
    }
    from.sort_unstable();
    to.sort_unstable();
    if from.windows(2).any(|w| w[0] == w[1]) || from != to {
        return Err("permutation is not a bijection".into());
    }
    let mut out = s.clone();
    for &(a, b) in pairs {
        out.mults[b - 1] = s.mults[a - 1].clone();
    }
    Ok(out)
}

fn check_gamma(run: &Run, n: u64, bound: &Rat) -> Outcome {
    let mut state: Option<(u64, Rat, String)> = None;
    let mut trace = Vec::new();
    for (idx, ls) in run.cert.steps.iter().enumerate() {
        let i = idx + 1;
        match &ls.step {
            Step::Scale { fact, k } => {
                if state.is_some() {
                    return Err((i, "only one scale step is allowed".into()));
                }
                let g = run.gamma_of(fact).map_err(|e| (i, e))?;
                let factor = 8u64
                    .checked_pow(*k)
                    .and_then(|f| f.checked_mul(g.n))
                    .ok_or_else(|| (i, "scaled point count overflows".to_string()))?;
                let b = &g.bound * &Rat::int(BigInt::from(2u32).pow(*k));
                trace.push(TraceRow {
                    line: ls.line,
                    step: format!("scale {fact} by 8^{k}"),
                    k: None,
                    state: Some(format!("gamma({factor}) >= {b}")),
                });
                state = Some((factor, b, fact.clone()));
            }
            other => return Err((i, format!("{} steps do not apply to gamma goals", other.kind()))),
        }
    }
    let last = run.cert.steps.len();
    let (got_n, got_b, _) = state.ok_or((last, "no scale step".to_string()))?;
    if got_n != n || got_b != *bound {
        return Err((last, format!("derived gamma({got_n}) >= {got_b}, goal states gamma({n}) >= {bound}")));
    }
    let gamma = GammaBound {
        n,
        bound: bound.clone(),
        provenance: run.cert.name.clone(),
    };
    Ok((None, Some(gamma), None, trace))
}

fn check_delta(run: &Run, from: u64) -> Outcome {
    let mut bullets = Vec::new();
    let mut constants = None;
    for (idx, ls) in run.cert.steps.iter().enumerate() {
        let i = idx + 1;
        match &ls.step {
            Step::Bullet { lo, hi, fact, shift } => {
                let g = run.gamma_of(fact).map_err(|e| (i, e))?;
                bullets.push((i, lo.clone(), hi.clone(), g.clone(), *shift));
            }
            Step::Constants { a, b } => {
                if constants.is_some() {
                    return Err((i, "constants given twice".into()));
                }
                constants = Some((i, a.clone(), b.clone()));
            }
            other => return Err((i, format!("{} steps do not apply to delta goals", other.kind()))),
        }
    }
    let report = verify_delta_cases(from, &bullets, constants.as_ref());
    if let Some((i, reason)) = &report.failure {
        return Err((*i, reason.clone()));
    }
    let trace = report
        .bullets
        .iter()
        .map(|b| TraceRow {
            line: run.cert.steps[b.step - 1].line,
            step: format!("bullet [{}, {}]", b.lo, b.hi),
            k: None,
            state: Some(format!("beta {} from gamma({}) >= {}", b.beta, b.base_n, b.base_bound)),
        })
        .collect();
    let delta = report.fact.clone();
    Ok((None, None, delta, trace))
}
