//! Monomial ideals of fat points supported on coordinate points, and the
//! factorization behind `I^(3r-2) ⊂ M^(2r-2) I^r` for at most four of them.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(vars: usize) -> Self {
        Monomial(vec![0; vars])
    }

    pub fn var(vars: usize, j: usize) -> Self {
        let mut e = vec![0; vars];
        e[j] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Minimal generators of a monomial ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialIdealBasis {
    pub gens: Vec<Monomial>,
}

impl MonomialIdealBasis {
    pub fn new(gens: Vec<Monomial>) -> Self {
        let mut gens = gens;
        gens.sort();
        gens.dedup();
        let keep: Vec<Monomial> = gens
            .iter()
            .filter(|g| !gens.iter().any(|h| h != *g && h.divides(g)))
            .cloned()
            .collect();
        Self { gens: keep }
    }

    /// The maximal ideal `(x_0, ..., x_N)`.
    pub fn maximal(vars: usize) -> Self {
        Self::new((0..vars).map(|j| Monomial::var(vars, j)).collect())
    }

    /// The ideal of the first `n` coordinate points: `x_j` for `j >= n` and
    /// `x_j x_k` for `j < k < n`.
    pub fn fundamental_points(n: usize, vars: usize) -> Self {
        let mut gens: Vec<Monomial> = (n..vars).map(|j| Monomial::var(vars, j)).collect();
        for j in 0..n {
            for k in j + 1..n {
                gens.push(Monomial::var(vars, j).mul(&Monomial::var(vars, k)));
            }
        }
        Self::new(gens)
    }

    pub fn contains(&self, x: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(x))
    }
}

/// All degree-`t` monomials in `vars` variables.
pub fn all_monomials(t: u32, vars: usize) -> Vec<Monomial> {
    fn rec(t: u32, vars: usize, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == vars {
            prefix.push(t);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in (0..=t).rev() {
            prefix.push(a);
            rec(t - a, vars, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if vars > 0 {
        rec(t, vars, &mut Vec::new(), &mut out);
    }
    out
}

/// Degree-`t` part of `I(m^{×n})` for the first `n` coordinate points of
/// `P^N`: monomials with `a_k <= t - m` for `k < n`.
pub fn symbolic_power_generators(n: usize, m: u32, t: u32, big_n: usize) -> Vec<Monomial> {
    let cap = t as i64 - m as i64;
    all_monomials(t, big_n + 1)
        .into_iter()
        .filter(|x| x.0[..n].iter().all(|&a| a as i64 <= cap))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    /// `r` factors, each a generator of `I`.
    pub y: Vec<Monomial>,
    pub z: Monomial,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Case5Failure {
    #[error("{0} is not in the symbolic power")]
    NotInSymbolicPower(Monomial),
    #[error("cannot extract {needed} pairs from the first block of {x}")]
    Pairing { x: Monomial, needed: u32 },
    #[error("cofactor of {x} has degree {deg} < {need}")]
    ShortCofactor { x: Monomial, deg: u32, need: u32 },
}

/// Splits `x` in the degree-`t` part of `I^(3r-2)` into `r` generators of
/// `I` and a cofactor of degree at least `2r - 2`.
pub fn case5_factorize(x: &Monomial, n: usize, r: u32) -> Result<Factorization, Case5Failure> {
    let vars = x.0.len();
    let t = x.degree() as i64;
    let m = 3 * r as i64 - 2;
    if x.0[..n].iter().any(|&a| a as i64 > t - m) {
        return Err(Case5Failure::NotInSymbolicPower(x.clone()));
    }
    let mut rest = x.0.clone();
    let mut y = Vec::new();
    // single variables outside the first block, one per variable per pass
    while (y.len() as u32) < r {
        let before = y.len();
        for (j, e) in rest.iter_mut().enumerate().skip(n) {
            if *e > 0 && (y.len() as u32) < r {
                *e -= 1;
                y.push(Monomial::var(vars, j));
            }
        }
        if y.len() == before {
            break;
        }
    }
    let needed = r - y.len() as u32;
    for _ in 0..needed {
        let mut idx: Vec<usize> = (0..n).filter(|&j| rest[j] > 0).collect();
        idx.sort_by_key(|&j| std::cmp::Reverse(rest[j]));
        if idx.len() < 2 {
            return Err(Case5Failure::Pairing { x: x.clone(), needed });
        }
        let (a, b) = (idx[0], idx[1]);
        rest[a] -= 1;
        rest[b] -= 1;
        y.push(Monomial::var(vars, a).mul(&Monomial::var(vars, b)));
    }
    let z = Monomial(rest);
    let need = 2 * r - 2;
    if z.degree() < need {
        return Err(Case5Failure::ShortCofactor {
            x: x.clone(),
            deg: z.degree(),
            need,
        });
    }
    Ok(Factorization { y, z })
}

/// Whether `x` lies in the product of the given ideals, by depth-first
/// search over generator choices with memoized dead ends.
pub fn member_of_product(x: &Monomial, factors: &[MonomialIdealBasis]) -> bool {
    let min_deg: Vec<u32> = factors
        .iter()
        .map(|f| f.gens.iter().map(Monomial::degree).min().unwrap_or(u32::MAX))
        .collect();
    let mut tail = vec![0u64; factors.len() + 1];
    for i in (0..factors.len()).rev() {
        tail[i] = tail[i + 1] + min_deg[i] as u64;
    }
    let mut dead = HashSet::new();
    dfs(x, 0, factors, &tail, &mut dead)
}

fn dfs(
    x: &Monomial,
    i: usize,
    factors: &[MonomialIdealBasis],
    tail: &[u64],
    dead: &mut HashSet<(usize, Monomial)>,
) -> bool {
    if i == factors.len() {
        return true;
    }
    if (x.degree() as u64) < tail[i] || dead.contains(&(i, x.clone())) {
        return false;
    }
    for g in &factors[i].gens {
        if g.divides(x) && dfs(&x.div(g), i + 1, factors, tail, dead) {
            return true;
        }
    }
    dead.insert((i, x.clone()));
    false
}

/// `r` copies of `I` followed by `2r - 2` copies of `M`.
pub fn containment_factors(n: usize, r: u32, big_n: usize) -> Vec<MonomialIdealBasis> {
    let i = MonomialIdealBasis::fundamental_points(n, big_n + 1);
    let m = MonomialIdealBasis::maximal(big_n + 1);
    let mut f = vec![i; r as usize];
    f.extend(std::iter::repeat_n(m, (2 * r).saturating_sub(2) as usize));
    f
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Case5Report {
    pub n: usize,
    pub r: u32,
    pub t_max: u32,
    pub generators: usize,
    pub factorized: usize,
    pub members: usize,
    pub failures: Vec<String>,
}

impl Case5Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.factorized == self.generators && self.members == self.generators
    }
}

/// Checks every monomial of `I^(3r-2)` in degrees up to `t_max` against both
/// the constructive factorization and brute-force product membership.
pub fn verify_case5(n: usize, r: u32, t_max: u32) -> Case5Report {
    const BIG_N: usize = 3;
    let factors = containment_factors(n, r, BIG_N);
    let results: Vec<(bool, bool, Option<String>)> = (0..=t_max)
        .into_par_iter()
        .flat_map_iter(|t| symbolic_power_generators(n, (3 * r).saturating_sub(2), t, BIG_N))
        .map(|x| {
            let fac = case5_factorize(&x, n, r);
            let mem = member_of_product(&x, &factors);
            let mut problem = None;
            match &fac {
                Ok(f) => {
                    let prod = f.y.iter().fold(f.z.clone(), |acc, y| acc.mul(y));
                    let i = &factors[0];
                    if prod != x || !f.y.iter().all(|y| i.gens.contains(y)) || f.y.len() != r as usize {
                        problem = Some(format!("{x}: factorization does not recompose"));
                    }
                }
                Err(e) => problem = Some(e.to_string()),
            }
            if fac.is_ok() != mem {
                problem = Some(format!("{x}: construction and search disagree"));
            }
            (fac.is_ok() && problem.is_none(), mem, problem)
        })
        .collect();
    Case5Report {
        n,
        r,
        t_max,
        generators: results.len(),
        factorized: results.iter().filter(|r| r.0).count(),
        members: results.iter().filter(|r| r.1).count(),
        failures: results.into_iter().filter_map(|r| r.2).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn generators_examples() {
        let g = symbolic_power_generators(2, 2, 2, 3);
        assert_eq!(g, vec![mono(&[0, 0, 2, 0]), mono(&[0, 0, 1, 1]), mono(&[0, 0, 0, 2])]);
        assert!(symbolic_power_generators(4, 7, 6, 3).is_empty());
        assert_eq!(symbolic_power_generators(1, 1, 1, 3).len(), 3);
    }

    #[test]
    fn point_ideal_generators() {
        let i = MonomialIdealBasis::fundamental_points(2, 4);
        assert_eq!(i.gens.len(), 3);
        assert!(i.contains(&mono(&[1, 1, 0, 0])));
        assert!(!i.contains(&mono(&[3, 0, 0, 0])));
    }

    #[test]
    fn factorize_examples() {
        let f = case5_factorize(&mono(&[1, 1, 2, 1]), 2, 2).unwrap();
        assert_eq!(f.y, vec![Monomial::var(4, 2), Monomial::var(4, 3)]);
        assert_eq!(f.z, mono(&[1, 1, 1, 0]));
        let f = case5_factorize(&mono(&[0, 0, 7, 0]), 2, 3).unwrap();
        assert_eq!(f.z, mono(&[0, 0, 4, 0]));
        assert!(matches!(
            case5_factorize(&mono(&[1, 1, 1, 1]), 4, 2),
            Err(Case5Failure::NotInSymbolicPower(_))
        ));
    }

    #[test]
    fn membership_examples() {
        let f = containment_factors(2, 2, 3);
        assert!(member_of_product(&mono(&[1, 1, 2, 1]), &f));
        let m = vec![MonomialIdealBasis::maximal(4)];
        assert!(!member_of_product(&Monomial::one(4), &m));
        // x_j is a generator exactly when j lies outside the first block
        let i3 = vec![MonomialIdealBasis::fundamental_points(3, 4); 3];
        assert!(member_of_product(&mono(&[0, 0, 0, 3]), &i3));
        assert!(!member_of_product(&mono(&[0, 0, 3, 0]), &i3));
        let i3 = vec![MonomialIdealBasis::fundamental_points(2, 4); 3];
        assert!(member_of_product(&mono(&[0, 0, 3, 0]), &i3));
        assert!(!member_of_product(&mono(&[0, 0, 2, 0]), &i3));
    }

    #[test]
    fn small_case5_runs() {
        assert!(verify_case5(2, 2, 10).passed());
        assert!(verify_case5(1, 4, 12).passed());
    }
}
