use std::fmt;

use thiserror::Error;

use super::{Certificate, Conclusion, Decimal, Goal, LocatedStep, Step};
use crate::arith::{ParamPoly, Rat};
use crate::cremona::{CremonaStep, DivergencePattern};
use crate::systems::{merge_var, parse_mult_list, FatPointSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token { text: &line[s..i], column: s + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &line[s..], column: s + 1 });
    }
    out
}

struct Cursor<'a> {
    line: usize,
    toks: Vec<Token<'a>>,
    pos: usize,
    var: Option<char>,
}

impl<'a> Cursor<'a> {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .or(self.toks.last())
            .map(|t| t.column)
            .unwrap_or(1)
    }

    fn next(&mut self, what: &str) -> Result<&'a str, ParseError> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.text)
            }
            None => Err(self.err(self.here(), format!("expected {what}"))),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.toks.get(self.pos) {
            Some(t) => Err(self.err(t.column, format!("unexpected {:?}", t.text))),
            None => Ok(()),
        }
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        let col = self.here();
        let t = self.next("a position")?;
        parse_index(t).ok_or_else(|| self.err(col, format!("expected a position, got {t:?}")))
    }

    /// Next token as `key=value`.
    fn keyed(&mut self, key: &str) -> Result<(&'a str, usize), ParseError> {
        let col = self.here();
        let t = self.next(&format!("{key}="))?;
        match t.split_once('=') {
            Some((k, v)) if k == key => Ok((v, col + key.len() + 1)),
            _ => Err(self.err(col, format!("expected {key}=..., got {t:?}"))),
        }
    }

    fn optional_keyed(&mut self, key: &str) -> Option<(&'a str, usize)> {
        let t = self.toks.get(self.pos)?;
        let (k, v) = t.text.split_once('=')?;
        if k != key {
            return None;
        }
        self.pos += 1;
        Some((v, t.column + key.len() + 1))
    }

    fn poly(&mut self, text: &str, column: usize) -> Result<ParamPoly, ParseError> {
        let (p, v) = ParamPoly::parse(text).map_err(|e| self.err(column, e.to_string()))?;
        merge_var(&mut self.var, v).map_err(|e| self.err(column, e.to_string()))?;
        Ok(p)
    }

    fn mults(&mut self, text: &str, column: usize) -> Result<Vec<ParamPoly>, ParseError> {
        let (list, v) = parse_mult_list(text).map_err(|e| self.err(column, e.to_string()))?;
        merge_var(&mut self.var, v).map_err(|e| self.err(column, e.to_string()))?;
        Ok(list)
    }

    fn int<T: std::str::FromStr>(&self, text: &str, column: usize, what: &str) -> Result<T, ParseError> {
        text.parse()
            .map_err(|_| self.err(column, format!("expected {what}, got {text:?}")))
    }

    fn rat(&self, text: &str, column: usize) -> Result<Rat, ParseError> {
        text.parse().map_err(|_| self.err(column, format!("malformed rational {text:?}")))
    }
}

fn parse_index(t: &str) -> Option<usize> {
    t.parse::<usize>().ok().filter(|&i| i >= 1)
}

fn is_name(s: &str) -> bool {
    !s.is_empty()
        && s
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-' || b == b'.')
}

fn decimal(cur: &Cursor, text: &str, column: usize) -> Result<Decimal, ParseError> {
    let digits = match text.split_once('.') {
        Some((_, f)) => f.len() as u32,
        None => 0,
    };
    Ok(Decimal {
        value: cur.rat(text, column)?,
        digits,
    })
}

/// Parses the line-oriented certificate format.
pub fn parse(text: &str) -> Result<Certificate, ParseError> {
    let mut name: Option<String> = None;
    let mut goal: Option<(Goal, usize)> = None;
    let mut uses = Vec::new();
    let mut steps = Vec::new();
    let mut var = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor {
            line: line_no,
            toks,
            pos: 0,
            var,
        };
        let head_col = cur.here();
        let head = cur.next("a keyword")?;
        if name.is_none() && head != "cert" {
            return Err(cur.err(head_col, "expected 'cert <name>' first"));
        }
        match head {
            "cert" => {
                if name.is_some() {
                    return Err(cur.err(head_col, "second 'cert' line"));
                }
                let col = cur.here();
                let n = cur.next("a certificate name")?;
                if !is_name(n) {
                    return Err(cur.err(col, format!("bad name {n:?}")));
                }
                name = Some(n.to_string());
            }
            "goal" => {
                if goal.is_some() {
                    return Err(cur.err(head_col, "second 'goal' line"));
                }
                if !steps.is_empty() {
                    return Err(cur.err(head_col, "goal must precede the steps"));
                }
                goal = Some((parse_goal(&mut cur)?, line_no));
            }
            "use" => {
                let col = cur.here();
                let n = cur.next("a fact name")?;
                if !is_name(n) {
                    return Err(cur.err(col, format!("bad fact name {n:?}")));
                }
                uses.push(n.to_string());
            }
            "expect" => {
                if goal.is_none() {
                    return Err(cur.err(head_col, "expect before goal"));
                }
                let (d, dc) = cur.keyed("deg")?;
                let degree = cur.poly(d, dc)?;
                let (m, mc) = cur.keyed("mults")?;
                let mults = cur.mults(m, mc)?;
                steps.push(LocatedStep {
                    line: line_no,
                    step: Step::Expect { degree, mults },
                });
            }
            "step" => {
                if goal.is_none() {
                    return Err(cur.err(head_col, "step before goal"));
                }
                let step = parse_step(&mut cur)?;
                steps.push(LocatedStep { line: line_no, step });
            }
            other => return Err(cur.err(head_col, format!("unknown keyword {other:?}"))),
        }
        cur.finish()?;
        var = cur.var;
    }
    let eof = |msg: &str| ParseError {
        line: last_line.max(1),
        column: 1,
        message: msg.to_string(),
    };
    let name = name.ok_or_else(|| eof("empty certificate"))?;
    let (goal, goal_line) = goal.ok_or_else(|| eof("missing goal"))?;
    let var = var.unwrap_or('m');
    let goal = match goal {
        Goal::Empty(s) => Goal::Empty(s.with_var(var)),
        g => g,
    };
    Ok(Certificate {
        name,
        goal,
        goal_line,
        uses,
        steps,
        var,
    })
}

fn parse_goal(cur: &mut Cursor) -> Result<Goal, ParseError> {
    let col = cur.here();
    match cur.next("goal kind")? {
        "empty" => {
            let (d, dc) = cur.keyed("deg")?;
            let degree = cur.poly(d, dc)?;
            let (m, mc) = cur.keyed("mults")?;
            let mults = cur.mults(m, mc)?;
            let m0 = match cur.optional_keyed("m0") {
                Some((v, c)) => cur.int(v, c, "an integer")?,
                None => 1,
            };
            if m0 < 0 {
                return Err(cur.err(col, "m0 must be nonnegative"));
            }
            Ok(Goal::Empty(FatPointSystem::new(degree, mults, m0)))
        }
        "gamma" => {
            let c = cur.here();
            let n: u64 = cur.int(cur.toks.get(cur.pos).map(|t| t.text).unwrap_or(""), c, "a point count")?;
            cur.pos += 1;
            let c = cur.here();
            if cur.next("'>='")? != ">=" {
                return Err(cur.err(c, "expected '>='"));
            }
            let c = cur.here();
            let b = cur.next("a bound")?;
            let bound = cur.rat(b, c)?;
            if n == 0 || bound.is_negative() || bound.is_zero() {
                return Err(cur.err(c, "gamma goals need n >= 1 and a positive bound"));
            }
            Ok(Goal::Gamma { n, bound })
        }
        "delta" => {
            let (v, c) = cur.keyed("from")?;
            Ok(Goal::Delta {
                from: cur.int(v, c, "an integer")?,
            })
        }
        other => Err(cur.err(col, format!("unknown goal kind {other:?}"))),
    }
}

fn parse_step(cur: &mut Cursor) -> Result<Step, ParseError> {
    let col = cur.here();
    let kind = cur.next("step kind")?;
    match kind {
        "cremona" => {
            let mut ix = [0usize; 4];
            for slot in ix.iter_mut() {
                let c = cur.here();
                match cur.toks.get(cur.pos) {
                    Some(t) if !t.text.contains('=') => *slot = cur.index()?,
                    _ => return Err(cur.err(c, "cremona takes exactly four positions")),
                }
            }
            if let Some(t) = cur.toks.get(cur.pos) {
                if parse_index(t.text).is_some() {
                    return Err(cur.err(t.column, "cremona takes exactly four positions"));
                }
            }
            let step = CremonaStep::new(ix).map_err(|e| cur.err(col, e.to_string()))?;
            let k = match cur.optional_keyed("k") {
                Some((v, c)) => Some(cur.poly(v, c)?),
                None => None,
            };
            Ok(Step::Cremona { step, k })
        }
        "permute" => {
            let c = cur.here();
            let spec = cur.next("a permutation")?;
            let mut pairs = Vec::new();
            for item in spec.split(',') {
                let (a, b) = item
                    .split_once("->")
                    .ok_or_else(|| cur.err(c, format!("expected i->j, got {item:?}")))?;
                let (a, b) = (parse_index(a), parse_index(b));
                match (a, b) {
                    (Some(a), Some(b)) => pairs.push((a, b)),
                    _ => return Err(cur.err(c, format!("bad positions in {item:?}"))),
                }
            }
            Ok(Step::Permute(pairs))
        }
        "drop" => Ok(Step::Drop),
        "glue" => {
            let (f, fc) = cur.keyed("fact")?;
            if !is_name(f) {
                return Err(cur.err(fc, format!("bad fact name {f:?}")));
            }
            let (n, nc) = cur.keyed("count")?;
            let count: usize = cur.int(n, nc, "a count")?;
            let (a, ac) = cur.keyed("at")?;
            let at = parse_index(a).ok_or_else(|| cur.err(ac, "expected a position"))?;
            if count == 0 {
                return Err(cur.err(nc, "count must be positive"));
            }
            Ok(Step::Glue {
                fact: f.to_string(),
                count,
                at,
            })
        }
        "diverge" => {
            let c = cur.here();
            let pattern = match cur.next("pattern kind")? {
                "pairs8" => {
                    let mut ix = [0usize; 8];
                    for slot in ix.iter_mut() {
                        *slot = cur.index()?;
                    }
                    DivergencePattern::pairs8(ix).map_err(|e| cur.err(c, e.to_string()))?
                }
                "triblock10" => {
                    let (p, pc) = cur.keyed("pivot")?;
                    let pivot = parse_index(p).ok_or_else(|| cur.err(pc, "expected a position"))?;
                    let (t, tc) = cur.keyed("triples")?;
                    let groups: Vec<&str> = t.split(';').collect();
                    if groups.len() != 3 {
                        return Err(cur.err(tc, "expected three triples"));
                    }
                    let mut triples = [[0usize; 3]; 3];
                    for (g, slot) in groups.iter().zip(triples.iter_mut()) {
                        let ix: Vec<Option<usize>> = g.split(',').map(parse_index).collect();
                        if ix.len() != 3 || ix.iter().any(Option::is_none) {
                            return Err(cur.err(tc, format!("bad triple {g:?}")));
                        }
                        for (s, i) in slot.iter_mut().zip(ix) {
                            *s = i.unwrap_or_default();
                        }
                    }
                    DivergencePattern::triblock10(pivot, triples).map_err(|e| cur.err(c, e.to_string()))?
                }
                other => return Err(cur.err(c, format!("unknown pattern {other:?}"))),
            };
            let curvature = match cur.optional_keyed("curvature") {
                Some((v, c)) => Some(cur.poly(v, c)?),
                None => None,
            };
            Ok(Step::Diverge { pattern, curvature })
        }
        "conclude" => {
            let c = cur.here();
            match cur.next("conclusion kind")? {
                "negative-degree" => Ok(Step::Conclude(Conclusion::NegativeDegree)),
                "excess-multiplicity" => Ok(Step::Conclude(Conclusion::ExcessMultiplicity)),
                "oracle-empty" => {
                    let (p, pc) = cur.keyed("prime")?;
                    let prime = cur.int(p, pc, "a prime")?;
                    let (s, sc) = cur.keyed("seed")?;
                    let seed = cur.int(s, sc, "a seed")?;
                    Ok(Step::Conclude(Conclusion::OracleEmpty { prime, seed }))
                }
                other => Err(cur.err(c, format!("unknown conclusion {other:?}"))),
            }
        }
        "scale" => {
            let (f, fc) = cur.keyed("fact")?;
            if !is_name(f) {
                return Err(cur.err(fc, format!("bad fact name {f:?}")));
            }
            let (k, kc) = cur.keyed("k")?;
            Ok(Step::Scale {
                fact: f.to_string(),
                k: cur.int(k, kc, "an exponent")?,
            })
        }
        "bullet" => {
            let (lo, lc) = cur.keyed("lo")?;
            let lo = cur.rat(lo, lc)?;
            let (hi, hc) = cur.keyed("hi")?;
            let hi = cur.rat(hi, hc)?;
            let (f, fc) = cur.keyed("fact")?;
            if !is_name(f) {
                return Err(cur.err(fc, format!("bad fact name {f:?}")));
            }
            let (s, sc) = cur.keyed("shift")?;
            Ok(Step::Bullet {
                lo,
                hi,
                fact: f.to_string(),
                shift: cur.int(s, sc, "a shift")?,
            })
        }
        "constants" => {
            let (a, ac) = cur.keyed("a")?;
            let a = decimal(cur, a, ac)?;
            let (b, bc) = cur.keyed("b")?;
            let b = decimal(cur, b, bc)?;
            Ok(Step::Constants { a, b })
        }
        other => Err(cur.err(col, format!("unknown step kind {other:?}"))),
    }
}
