//! The shipped certificate corpus and batch verification in dependency order.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::certificates::{check, parse, Certificate, CheckOutcome, FactLedger, ParseError};

macro_rules! embed {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../corpus/", $name, ".cert")))),*]
    };
}

const EMBEDDED: &[(&str, &str)] = embed![
    "vargamma_n1",
    "vargamma_n2",
    "vargamma_n3",
    "vargamma_n4",
    "vargamma_n5",
    "vargamma_n6",
    "vargamma_n7",
    "vargamma_n8",
    "vargamma_n12",
    "vargamma_n14",
    "vargamma_n16",
    "vargamma_n17",
    "vargamma_n21",
    "vargamma_n24",
    "vargamma_n30",
    "vargamma_n35",
    "nicegamma_56",
    "nicegamma_64",
    "nicegamma_112",
    "nicegamma_136",
    "nicegamma_168",
    "nicegamma_240",
    "nicegamma_320",
    "gamma512",
    "case2_s4_r3",
    "case2_s5",
    "case2_s6_r3",
    "case4_s4",
    "singular_n11_m7",
    "singular_n11_m10",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusFile {
    /// File name without the `.cert` extension.
    pub file: String,
    pub text: String,
}

pub fn embedded() -> Vec<CorpusFile> {
    EMBEDDED
        .iter()
        .map(|(f, t)| CorpusFile {
            file: f.to_string(),
            text: t.to_string(),
        })
        .collect()
}

pub fn load_file(path: &Path) -> std::io::Result<CorpusFile> {
    let text = std::fs::read_to_string(path)?;
    let file = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(CorpusFile { file, text })
}

/// All `*.cert` files of a directory, sorted by name.
pub fn load_dir(dir: &Path) -> std::io::Result<Vec<CorpusFile>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "cert"))
        .collect();
    paths.sort();
    paths.iter().map(|p| load_file(p)).collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("{file}: {error}")]
    Parse { file: String, error: ParseError },
    #[error("{file}: certificate {name} is defined twice")]
    Duplicate { file: String, name: String },
    #[error("{file}: certificate {name} uses {missing}, which no file defines")]
    MissingDependency { file: String, name: String, missing: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct CertResult {
    pub file: String,
    pub name: String,
    pub outcome: CheckOutcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusReport {
    /// In checking order: by dependency depth, then by name.
    pub results: Vec<CertResult>,
    pub ledger: FactLedger,
}

impl CorpusReport {
    pub fn all_verified(&self) -> bool {
        self.results.iter().all(|r| r.outcome.is_verified())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CertResult> {
        self.results.iter().filter(|r| !r.outcome.is_verified())
    }
}

/// Parses every file, orders certificates by their `use` lines and checks
/// them level by level, in parallel within a level. A certificate on a
/// dependency cycle, or depending on a failed one, is reported as falsified.
pub fn verify_files(files: &[CorpusFile]) -> Result<CorpusReport, CorpusError> {
    verify_files_with(files, FactLedger::new())
}

/// As [`verify_files`], starting from facts already proven.
pub fn verify_files_with(files: &[CorpusFile], base: FactLedger) -> Result<CorpusReport, CorpusError> {
    let mut certs: BTreeMap<String, (String, Certificate)> = BTreeMap::new();
    for f in files {
        let cert = parse(&f.text).map_err(|error| CorpusError::Parse {
            file: f.file.clone(),
            error,
        })?;
        if certs.contains_key(&cert.name) || base.contains(&cert.name) {
            return Err(CorpusError::Duplicate {
                file: f.file.clone(),
                name: cert.name,
            });
        }
        certs.insert(cert.name.clone(), (f.file.clone(), cert));
    }
    for (name, (file, cert)) in &certs {
        if let Some(missing) = cert.uses.iter().find(|u| !certs.contains_key(*u) && !base.contains(u)) {
            return Err(CorpusError::MissingDependency {
                file: file.clone(),
                name: name.clone(),
                missing: missing.clone(),
            });
        }
    }

    let mut ledger = base;
    let mut results = Vec::new();
    let mut done: BTreeSet<String> = BTreeSet::new();
    let mut failed: BTreeSet<String> = BTreeSet::new();
    loop {
        let ready: Vec<&String> = certs
            .keys()
            .filter(|n| !done.contains(*n))
            .filter(|n| {
                certs[*n]
                    .1
                    .uses
                    .iter()
                    .all(|u| done.contains(u) || !certs.contains_key(u))
            })
            .collect();
        if ready.is_empty() {
            break;
        }
        let snapshot = &ledger;
        let failed_ref = &failed;
        let outcomes: Vec<(String, CheckOutcome)> = ready
            .par_iter()
            .map(|name| {
                let cert = &certs[*name].1;
                let outcome = match cert.uses.iter().find(|u| failed_ref.contains(*u)) {
                    Some(bad) => CheckOutcome::Falsified {
                        step: 0,
                        line: cert.goal_line,
                        reason: format!("depends on {bad}, which was not verified"),
                    },
                    None => check(cert, snapshot),
                };
                ((*name).clone(), outcome)
            })
            .collect();
        for (name, outcome) in outcomes {
            match &outcome {
                CheckOutcome::Verified(v) => {
                    if let Err(e) = ledger.insert(v.fact.clone()) {
                        failed.insert(name.clone());
                        results.push(CertResult {
                            file: certs[&name].0.clone(),
                            name: name.clone(),
                            outcome: CheckOutcome::Falsified {
                                step: 0,
                                line: certs[&name].1.goal_line,
                                reason: e.to_string(),
                            },
                        });
                        done.insert(name);
                        continue;
                    }
                }
                CheckOutcome::Falsified { .. } => {
                    failed.insert(name.clone());
                }
            }
            results.push(CertResult {
                file: certs[&name].0.clone(),
                name: name.clone(),
                outcome,
            });
            done.insert(name);
        }
    }
    for (name, (file, cert)) in &certs {
        if !done.contains(name) {
            results.push(CertResult {
                file: file.clone(),
                name: name.clone(),
                outcome: CheckOutcome::Falsified {
                    step: 0,
                    line: cert.goal_line,
                    reason: "dependency cycle".into(),
                },
            });
        }
    }
    Ok(CorpusReport { results, ledger })
}

/// Checks the shipped corpus.
pub fn verify_embedded() -> CorpusReport {
    verify_files(&embedded()).expect("shipped corpus parses and is closed under 'use'")
}

/// The ledger proven by the shipped corpus.
pub fn embedded_ledger() -> FactLedger {
    verify_embedded().ledger
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(name: &str, text: &str) -> CorpusFile {
        CorpusFile {
            file: name.into(),
            text: text.into(),
        }
    }

    #[test]
    fn missing_and_cyclic_dependencies() {
        let a = file("a", "cert a\ngoal empty deg=m-1 mults=m\nuse b\nstep conclude excess-multiplicity\n");
        assert!(matches!(verify_files(std::slice::from_ref(&a)), Err(CorpusError::MissingDependency { .. })));
        let b = file("b", "cert b\ngoal empty deg=m-1 mults=m\nuse a\nstep conclude excess-multiplicity\n");
        let r = verify_files(&[a, b]).unwrap();
        assert_eq!(r.results.len(), 2);
        assert!(r.results.iter().all(|x| !x.outcome.is_verified()));
    }

    #[test]
    fn failure_propagates() {
        let a = file("a", "cert a\ngoal empty deg=m mults=m\nstep conclude excess-multiplicity\n");
        let b = file("b", "cert b\ngoal empty deg=m-1 mults=m\nuse a\nstep conclude excess-multiplicity\n");
        let r = verify_files(&[a, b]).unwrap();
        assert_eq!(r.failures().count(), 2);
        assert!(r.ledger.is_empty());
    }
}
