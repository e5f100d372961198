//! The `fpc` command line. Kept in the library so tests can drive it.
//!
//! Exit codes: 0 success, 1 a certificate was falsified, 2 bad input,
//! configuration or a missing dependency.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::Rat;
use crate::certificates::{CheckOutcome, FactLedger};
use crate::containment::{dispatch, survey, SCHEMA_VERSION};
use crate::corpus::{self, CorpusFile, CorpusReport};
use crate::cremona::{cremona_step, CremonaStep};
use crate::errata::{errata, Erratum};
use crate::monomials::verify_case5;
use crate::oracle::{self, alpha_bounds, cross_check_cremona, is_prime, PointSet, DEFAULT_PRIME};
use crate::systems::{parse_repeat_list, FatPointSystem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "fpc", version, about = "Checks emptiness certificates for fat-point systems in P^3")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Prime field for the interpolation oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    /// Point seed; defaults to FPC_SEED or 1.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory of .cert files used instead of the built-in corpus.
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check certificates in dependency order and print the resulting ledger.
    Verify {
        /// Certificate files or directories; the corpus when omitted.
        files: Vec<PathBuf>,
        /// Resolve `use` lines against the built-in corpus as well.
        #[arg(long)]
        with_builtin: bool,
    },
    /// Print the facts proven by the corpus.
    Ledger,
    /// Decide the containment for one `(n, r)`.
    Containment {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
    },
    /// Exhaustive monomial check for at most four points.
    Case5 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u32,
        /// Largest degree checked; 4r+2 by default.
        #[arg(long)]
        tmax: Option<u32>,
    },
    /// Dimension of the forms of degree t with the given multiplicities.
    Dim {
        /// e.g. 7x11 or 4x3,2
        #[arg(long)]
        mults: String,
        #[arg(long)]
        t: i64,
        /// Where to write the JSON report; standard error when omitted.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Least degree of a nonzero form with the given multiplicities.
    Alpha {
        #[arg(long)]
        mults: String,
        #[arg(long)]
        tmax: i64,
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Dispatch every cell of an `(n, r)` grid.
    Survey {
        #[arg(long)]
        n_max: u64,
        #[arg(long)]
        r_max: u64,
    },
    /// Apply one Cremona step to a system.
    Cremona {
        /// e.g. 12m-1
        #[arg(long)]
        deg: String,
        /// e.g. 7m*6 or 15,15,15,15,15
        #[arg(long)]
        mults: String,
        /// Four 1-based positions, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<usize>,
        /// Compare oracle dimensions before and after (constant systems).
        #[arg(long)]
        check: bool,
    },
}

/// Validated global settings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub prime: u64,
    pub seed: u64,
    pub t_max: Option<i64>,
    pub corpus: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(args: &ConfigArgs, t_max: Option<i64>) -> Result<Self, String> {
        if !is_prime(args.prime) {
            return Err(format!("{} is not prime", args.prime));
        }
        if let Some(t) = t_max {
            if (args.prime as i128) <= t as i128 {
                return Err(format!("prime {} must exceed the largest degree {t}", args.prime));
            }
        }
        Ok(Self {
            prime: args.prime,
            seed: args.seed.unwrap_or_else(oracle::default_seed),
            t_max,
            corpus: args.corpus.clone(),
            format: args.format,
        })
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

// Broken pipes and the like are not worth a distinct exit code.
macro_rules! say {
    ($w:expr, $($t:tt)*) => {{ let _ = writeln!($w, $($t)*); }};
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let t_max = match &cli.command {
        Command::Dim { t, .. } => Some(*t),
        Command::Alpha { tmax, .. } => Some(*tmax),
        _ => None,
    };
    let mut io = Io { out, err };
    let cfg = match RunConfig::new(&cli.config, t_max) {
        Ok(c) => c,
        Err(e) => {
            say!(io.err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    match cli.command {
        Command::Verify { files, with_builtin } => cmd_verify(&cfg, &files, with_builtin, &mut io),
        Command::Ledger => cmd_ledger(&cfg, &mut io),
        Command::Containment { n, r } => cmd_containment(&cfg, n, r, &mut io),
        Command::Case5 { n, r, tmax } => cmd_case5(&cfg, n, r, tmax, &mut io),
        Command::Dim { mults, t, sidecar } => cmd_dim(&cfg, &mults, t, sidecar.as_deref(), &mut io),
        Command::Alpha { mults, tmax, sidecar } => cmd_alpha(&cfg, &mults, tmax, sidecar.as_deref(), &mut io),
        Command::Survey { n_max, r_max } => cmd_survey(&cfg, n_max, r_max, &mut io),
        Command::Cremona { deg, mults, at, check } => cmd_cremona(&cfg, &deg, &mults, &at, check, &mut io),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize")
}

fn load_paths(paths: &[PathBuf]) -> std::io::Result<Vec<CorpusFile>> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            files.extend(corpus::load_dir(p)?);
        } else {
            files.push(corpus::load_file(p)?);
        }
    }
    Ok(files)
}

fn corpus_files(cfg: &RunConfig) -> std::io::Result<Vec<CorpusFile>> {
    match &cfg.corpus {
        Some(dir) => corpus::load_dir(dir),
        None => Ok(corpus::embedded()),
    }
}

/// Verifies the configured corpus, reporting problems on `err`.
fn build_report(cfg: &RunConfig, files: &[PathBuf], with_builtin: bool, io: &mut Io) -> Result<CorpusReport, i32> {
    let loaded = if files.is_empty() {
        corpus_files(cfg)
    } else {
        load_paths(files)
    };
    let loaded = loaded.map_err(|e| {
        say!(io.err, "error: {e}");
        EXIT_INPUT
    })?;
    let base = if with_builtin {
        let rep = corpus::verify_files(&corpus::embedded()).map_err(|e| {
            say!(io.err, "error: built-in corpus: {e}");
            EXIT_INPUT
        })?;
        // Only facts not redefined by the given files.
        let mut keep = FactLedger::new();
        let names: Vec<String> = loaded
            .iter()
            .filter_map(|f| crate::certificates::parse(&f.text).ok().map(|c| c.name))
            .collect();
        for fact in rep.ledger.iter() {
            if !names.contains(&fact.name) && fact.uses.iter().all(|u| keep.contains(u)) {
                keep.insert(fact.clone()).expect("dependencies inserted first");
            }
        }
        keep
    } else {
        FactLedger::new()
    };
    corpus::verify_files_with(&loaded, base).map_err(|e| {
        say!(io.err, "error: {e}");
        EXIT_INPUT
    })
}

fn ledger_lines(ledger: &FactLedger) -> Vec<String> {
    let mut lines = Vec::new();
    let mut gammas: Vec<_> = ledger.iter().filter_map(|f| f.gamma.as_ref().map(|g| (g, &f.name))).collect();
    gammas.sort_by_key(|(g, _)| g.n);
    for (g, name) in gammas {
        lines.push(format!("b({}) = {}  [{name}]", g.n, g.bound));
    }
    if let Some((f, d)) = ledger.delta() {
        lines.push(format!(
            "gamma(n) >= (3 cbrt(6n) + 43/10)/7 >= {} cbrt(n) + {} for n >= {}  [{}]",
            decimal(&d.a),
            decimal(&d.b),
            d.from,
            f.name
        ));
    }
    for a in ledger.alpha_facts() {
        lines.push(format!("empty {}  [{}]", a.system.entries_text(), a.name));
    }
    lines
}

/// Exact decimal form when the denominator divides a power of ten.
fn decimal(r: &Rat) -> String {
    use num_bigint::BigInt;
    use num_traits::Zero;
    let mut scale = BigInt::from(1);
    for digits in 0..=30usize {
        if (&scale % r.denom()).is_zero() {
            let v = r.numer() * (&scale / r.denom());
            let sign = if v < BigInt::zero() { "-" } else { "" };
            let s = format!("{:0>w$}", v.magnitude().to_string(), w = digits + 1);
            let (int, frac) = s.split_at(s.len() - digits);
            return if digits == 0 { format!("{sign}{int}") } else { format!("{sign}{int}.{frac}") };
        }
        scale *= 10;
    }
    r.to_string()
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    schema: u32,
    verified: bool,
    report: &'a CorpusReport,
    errata: &'a [Erratum],
}

fn cmd_verify(cfg: &RunConfig, files: &[PathBuf], with_builtin: bool, io: &mut Io) -> i32 {
    let report = match build_report(cfg, files, with_builtin, io) {
        Ok(r) => r,
        Err(code) => return code,
    };
    for r in report.failures() {
        if let CheckOutcome::Falsified { step, line, reason } = &r.outcome {
            say!(io.err, "{}:{line}: {} falsified at step {step}: {reason}", r.file, r.name);
        }
    }
    let notes = match errata(&report.ledger, cfg.prime, cfg.seed) {
        Ok(n) => n,
        Err(e) => {
            say!(io.err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let ok = report.all_verified();
    match cfg.format {
        Format::Json => say!(
            io.out,
            "{}",
            json(&VerifyJson {
                schema: SCHEMA_VERSION,
                verified: ok,
                report: &report,
                errata: &notes,
            })
        ),
        Format::Text => {
            for r in &report.results {
                let tag = if r.outcome.is_verified() { "ok" } else { "FALSIFIED" };
                say!(io.out, "{tag:>9}  {}", r.name);
            }
            say!(io.out, "\nledger:");
            for l in ledger_lines(&report.ledger) {
                say!(io.out, "  {l}");
            }
            say!(io.out, "\nerrata:");
            for e in &notes {
                say!(io.out, "  [{}] {}: printed {}; computed {}", e.id, e.topic, e.printed, e.computed);
                say!(io.out, "      {}", e.note);
            }
            let failed = report.failures().count();
            say!(io.out, "\n{} certificates, {} falsified", report.results.len(), failed);
        }
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_FALSIFIED
    }
}

fn cmd_ledger(cfg: &RunConfig, io: &mut Io) -> i32 {
    let report = match build_report(cfg, &[], false, io) {
        Ok(r) => r,
        Err(code) => return code,
    };
    match cfg.format {
        Format::Json => say!(io.out, "{}", json(&report.ledger)),
        Format::Text => {
            for l in ledger_lines(&report.ledger) {
                say!(io.out, "{l}");
            }
        }
    }
    if report.all_verified() {
        EXIT_OK
    } else {
        EXIT_FALSIFIED
    }
}

fn ledger_for(cfg: &RunConfig, io: &mut Io) -> Result<FactLedger, i32> {
    let report = build_report(cfg, &[], false, io)?;
    if !report.all_verified() {
        say!(io.err, "warning: some certificates were falsified; their facts are not used");
    }
    Ok(report.ledger)
}

fn cmd_containment(cfg: &RunConfig, n: u64, r: u64, io: &mut Io) -> i32 {
    if n == 0 || r == 0 {
        say!(io.err, "error: n and r must be positive");
        return EXIT_INPUT;
    }
    let ledger = match ledger_for(cfg, io) {
        Ok(l) => l,
        Err(c) => return c,
    };
    let rep = dispatch(n, r, &ledger);
    match cfg.format {
        Format::Json => say!(io.out, "{}", json(&rep)),
        Format::Text => {
            say!(io.out, "n={n} r={r}: {:?} by {}", rep.status, rep.case.name());
            for f in &rep.facts {
                say!(io.out, "  uses {f}");
            }
            for i in &rep.inequalities {
                say!(io.out, "  {i}");
            }
            if let Some(c) = &rep.chudnovsky {
                say!(io.out, "  alpha(I^(k)) bounds for k = {}, {}, {}", c.k0, c.k1, c.k2);
            }
            if let Some(why) = &rep.reason {
                say!(io.out, "  {why}");
            }
        }
    }
    EXIT_OK
}

fn cmd_case5(cfg: &RunConfig, n: usize, r: u32, tmax: Option<u32>, io: &mut Io) -> i32 {
    if !(1..=4).contains(&n) || r == 0 {
        say!(io.err, "error: need 1 <= n <= 4 and r >= 1");
        return EXIT_INPUT;
    }
    let rep = verify_case5(n, r, tmax.unwrap_or(4 * r + 2));
    match cfg.format {
        Format::Json => say!(io.out, "{}", json(&rep)),
        Format::Text => {
            say!(
                io.out,
                "n={n} r={r} t<={}: {} generators, {} factorized, {} members",
                rep.t_max,
                rep.generators,
                rep.factorized,
                rep.members
            );
            for f in &rep.failures {
                say!(io.out, "  {f}");
            }
        }
    }
    if rep.passed() {
        EXIT_OK
    } else {
        EXIT_FALSIFIED
    }
}

fn write_sidecar<T: Serialize>(path: Option<&Path>, v: &T, io: &mut Io) -> i32 {
    let text = json(v);
    match path {
        Some(p) => match std::fs::write(p, text + "\n") {
            Ok(()) => EXIT_OK,
            Err(e) => {
                say!(io.err, "error: {}: {e}", p.display());
                EXIT_INPUT
            }
        },
        None => {
            say!(io.err, "{text}");
            EXIT_OK
        }
    }
}

fn parse_mults(text: &str, io: &mut Io) -> Result<Vec<i64>, i32> {
    parse_repeat_list(text).map_err(|e| {
        say!(io.err, "error: {e}");
        EXIT_INPUT
    })
}

fn cmd_dim(cfg: &RunConfig, mults: &str, t: i64, sidecar: Option<&Path>, io: &mut Io) -> i32 {
    let mults = match parse_mults(mults, io) {
        Ok(m) => m,
        Err(c) => return c,
    };
    match oracle::dimension_generic(&mults, t, cfg.prime, cfg.seed) {
        Ok(rep) => {
            say!(io.out, "{}", rep.dimension);
            write_sidecar(sidecar, &rep, io)
        }
        Err(e) => {
            say!(io.err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn cmd_alpha(cfg: &RunConfig, mults: &str, tmax: i64, sidecar: Option<&Path>, io: &mut Io) -> i32 {
    let mults = match parse_mults(mults, io) {
        Ok(m) => m,
        Err(c) => return c,
    };
    let pts = PointSet::generic(mults.len(), cfg.prime, cfg.seed);
    match alpha_bounds(&mults, &pts, tmax) {
        Ok(rep) => {
            say!(io.out, "{}", rep.alpha_low);
            if rep.alpha_est.is_none() {
                say!(io.err, "note: no nonzero form up to degree {tmax}");
            }
            write_sidecar(sidecar, &rep, io)
        }
        Err(e) => {
            say!(io.err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn cmd_survey(cfg: &RunConfig, n_max: u64, r_max: u64, io: &mut Io) -> i32 {
    let ledger = match ledger_for(cfg, io) {
        Ok(l) => l,
        Err(c) => return c,
    };
    let s = survey(n_max, r_max, &ledger);
    match cfg.format {
        Format::Json => say!(io.out, "{}", json(&s)),
        Format::Text => {
            say!(io.out, "grid n<={n_max} r<={r_max}");
            for (case, count) in &s.certified {
                say!(io.out, "  {:<8} {count}", case.name());
            }
            say!(io.out, "exceptions: {}", s.exceptions.len());
            for e in &s.exceptions {
                say!(
                    io.out,
                    "  n={} r={} {:?} ({}): {}",
                    e.n,
                    e.r,
                    e.status,
                    e.case.name(),
                    e.reason.as_deref().unwrap_or("")
                );
            }
        }
    }
    EXIT_OK
}

#[derive(Serialize)]
struct CremonaJson {
    before: FatPointSystem,
    k: String,
    after: FatPointSystem,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<oracle::CremonaCrossCheck>,
}

fn cmd_cremona(cfg: &RunConfig, deg: &str, mults: &str, at: &[usize], check: bool, io: &mut Io) -> i32 {
    let text = format!("system deg={deg} mults={mults}");
    let s: FatPointSystem = match text.parse() {
        Ok(s) => s,
        Err(e) => {
            say!(io.err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let step = match <[usize; 4]>::try_from(at).map_err(|_| "need four positions".to_string()).and_then(|a| {
        CremonaStep::new(a).map_err(|e| e.to_string())
    }) {
        Ok(s) => s,
        Err(e) => {
            say!(io.err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let (after, k) = match cremona_step(&s, &step) {
        Ok(x) => x,
        Err(e) => {
            say!(io.err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let oracle = if check {
        match cross_check_cremona(&s, &step, cfg.prime, cfg.seed) {
            Ok(c) => Some(c),
            Err(e) => {
                say!(io.err, "error: {e}");
                return EXIT_INPUT;
            }
        }
    } else {
        None
    };
    let k = k.display_with(s.var);
    match cfg.format {
        Format::Json => say!(
            io.out,
            "{}",
            json(&CremonaJson {
                before: s,
                k,
                after,
                oracle: oracle.clone(),
            })
        ),
        Format::Text => {
            say!(io.out, "k={k}");
            say!(io.out, "{}", after.entries_text());
            if let Some(c) = &oracle {
                say!(io.out, "oracle: dim before {}, after {} (seed {})", c.dim_before, c.dim_after, c.seed);
            }
        }
    }
    match oracle {
        Some(c) if !c.matched => EXIT_FALSIFIED,
        _ => EXIT_OK,
    }
}
