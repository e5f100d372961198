use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::arith::Rat;
use crate::systems::FatPointSystem;

/// `gamma(n) >= bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaBound {
    pub n: u64,
    pub bound: Rat,
    pub provenance: String,
}

/// `gamma(n) >= delta(n) >= a*cbrt(n) + b` for `n >= from`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaFact {
    pub from: u64,
    pub a: Rat,
    pub b: Rat,
}

/// A verified statement together with the certificate that proved it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fact {
    pub name: String,
    pub provenance: String,
    pub uses: Vec<String>,
    /// Proven empty, when the certificate had an emptiness goal.
    pub system: Option<FatPointSystem>,
    pub gamma: Option<GammaBound>,
    pub delta: Option<DeltaFact>,
}

/// An emptiness fact whose multiplicities are all equal, usable as a lower
/// bound on the initial degree of a symbolic power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaFact {
    pub name: String,
    pub system: FatPointSystem,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LedgerError {
    #[error("fact {0} already recorded")]
    Duplicate(String),
    #[error("fact {fact} depends on {missing}, which is not recorded")]
    MissingDependency { fact: String, missing: String },
    #[error("fact {0} depends on itself")]
    SelfReference(String),
}

/// Append-only store of proven facts. Every dependency must already be
/// present when a fact is inserted, so the dependency graph stays acyclic.
#[derive(Debug, Clone, Default, Serialize)]
pub struct FactLedger {
    facts: BTreeMap<String, Fact>,
    order: Vec<String>,
}

impl FactLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, fact: Fact) -> Result<(), LedgerError> {
        if self.facts.contains_key(&fact.name) {
            return Err(LedgerError::Duplicate(fact.name));
        }
        for u in &fact.uses {
            if *u == fact.name {
                return Err(LedgerError::SelfReference(fact.name));
            }
            if !self.facts.contains_key(u) {
                return Err(LedgerError::MissingDependency {
                    fact: fact.name.clone(),
                    missing: u.clone(),
                });
            }
        }
        self.order.push(fact.name.clone());
        self.facts.insert(fact.name.clone(), fact);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Fact> {
        self.facts.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.facts.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// Facts in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = &Fact> {
        self.order.iter().map(|n| &self.facts[n])
    }

    /// Every recorded gamma bound, sorted by `n` then by name.
    pub fn gamma_bounds(&self) -> Vec<&GammaBound> {
        let mut v: Vec<(&String, &GammaBound)> = self
            .facts
            .iter()
            .filter_map(|(k, f)| f.gamma.as_ref().map(|g| (k, g)))
            .collect();
        v.sort_by(|a, b| a.1.n.cmp(&b.1.n).then(a.0.cmp(b.0)));
        v.into_iter().map(|(_, g)| g).collect()
    }

    /// Best bound on `gamma(n)`, using `gamma(n) >= gamma(n')` for `n' <= n`.
    pub fn best_gamma(&self, n: u64) -> Option<&GammaBound> {
        self.facts
            .values()
            .filter_map(|f| f.gamma.as_ref())
            .filter(|g| g.n <= n)
            .max_by(|a, b| a.bound.cmp(&b.bound).then(b.n.cmp(&a.n)))
    }

    /// `gamma(n_base * 8^k) >= 2^k gamma(n_base)`, from the best bound for
    /// `n_base`. Nothing is recorded.
    pub fn scale_bound(&self, n_base: u64, k: u32) -> Option<GammaBound> {
        let g = self.best_gamma(n_base)?;
        Some(GammaBound {
            n: n_base.checked_mul(8u64.checked_pow(k)?)?,
            bound: &g.bound * &Rat::int(BigInt::from(2u32).pow(k)),
            provenance: format!("{} scaled by 8^{k}", g.provenance),
        })
    }

    pub fn alpha_facts(&self) -> Vec<AlphaFact> {
        self.iter()
            .filter_map(|f| {
                let s = f.system.as_ref()?;
                let first = s.mults.first()?;
                s.mults.iter().all(|m| m == first).then(|| AlphaFact {
                    name: f.name.clone(),
                    system: s.clone(),
                })
            })
            .collect()
    }

    pub fn delta(&self) -> Option<(&Fact, &DeltaFact)> {
        self.iter().find_map(|f| f.delta.as_ref().map(|d| (f, d)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma_fact(name: &str, n: u64, b: Rat, uses: &[&str]) -> Fact {
        Fact {
            name: name.into(),
            provenance: name.into(),
            uses: uses.iter().map(|s| s.to_string()).collect(),
            system: None,
            gamma: Some(GammaBound {
                n,
                bound: b,
                provenance: name.into(),
            }),
            delta: None,
        }
    }

    #[test]
    fn dag_is_enforced() {
        let mut l = FactLedger::new();
        assert!(matches!(
            l.insert(gamma_fact("a", 1, Rat::one(), &["b"])),
            Err(LedgerError::MissingDependency { .. })
        ));
        assert!(matches!(
            l.insert(gamma_fact("a", 1, Rat::one(), &["a"])),
            Err(LedgerError::SelfReference(_))
        ));
        l.insert(gamma_fact("a", 1, Rat::one(), &[])).unwrap();
        assert!(matches!(
            l.insert(gamma_fact("a", 1, Rat::one(), &[])),
            Err(LedgerError::Duplicate(_))
        ));
    }

    #[test]
    fn best_and_scaled_bounds() {
        let mut l = FactLedger::new();
        l.insert(gamma_fact("one", 1, Rat::one(), &[])).unwrap();
        l.insert(gamma_fact("five", 5, Rat::new(5, 3), &[])).unwrap();
        assert_eq!(l.best_gamma(4).unwrap().bound, Rat::one());
        assert_eq!(l.best_gamma(7).unwrap().bound, Rat::new(5, 3));
        assert!(l.best_gamma(0).is_none());
        let s = l.scale_bound(5, 2).unwrap();
        assert_eq!((s.n, s.bound), (320, Rat::new(20, 3)));
        let s = l.scale_bound(1, 2).unwrap();
        assert_eq!((s.n, s.bound), (64, Rat::int(4)));
        let s = l.scale_bound(5, 0).unwrap();
        assert_eq!((s.n, s.bound), (5, Rat::new(5, 3)));
    }
}
