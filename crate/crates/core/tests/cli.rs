use std::path::Path;

use fpc_core::cli::{run, EXIT_FALSIFIED, EXIT_INPUT, EXIT_OK};

fn fpc(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["fpc"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn corpus_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus"))
}

/// A scratch copy of the shipped corpus.
fn copy_corpus() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for e in std::fs::read_dir(corpus_dir()).unwrap() {
        let p = e.unwrap().path();
        std::fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    dir
}

#[test]
fn pristine_corpus_verifies() {
    let (code, out, _) = fpc(&["verify"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("b(8) = 2"));
    assert!(out.contains("b(12) = 42/19"));
    assert!(out.contains("0.7787 cbrt(n) + 0.6142 for n >= 512"));
    assert!(out.contains("[five-point-bound]"));
    assert!(out.contains("30 certificates, 0 falsified"));
}

#[test]
fn corpus_directory_is_equivalent() {
    let dir = corpus_dir().to_str().unwrap();
    let (code, out, _) = fpc(&["--corpus", dir, "ledger"]);
    let (_, builtin, _) = fpc(&["ledger"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, builtin);
}

#[test]
fn mutated_entry_exits_one() {
    let dir = copy_corpus();
    let p = dir.path().join("vargamma_n12.cert");
    let text = std::fs::read_to_string(&p).unwrap();
    std::fs::write(&p, text.replacen("k=-28m-4", "k=-28m-5", 1)).unwrap();
    let (code, out, err) = fpc(&["verify", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_FALSIFIED);
    assert!(err.contains("vargamma_n12"), "{err}");
    assert!(out.contains("FALSIFIED  vargamma_n12"));
}

#[test]
fn missing_dependency_exits_two() {
    let dir = copy_corpus();
    std::fs::remove_file(dir.path().join("vargamma_n5.cert")).unwrap();
    let (code, _, err) = fpc(&["verify", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("vargamma_n5"), "{err}");
}

#[test]
fn single_file_with_builtin_dependencies() {
    let file = corpus_dir().join("vargamma_n12.cert");
    let f = file.to_str().unwrap();
    let (code, _, _) = fpc(&["verify", f]);
    assert_eq!(code, EXIT_INPUT);
    let (code, out, _) = fpc(&["verify", "--with-builtin", f]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("1 certificates, 0 falsified"));
}

#[test]
fn unparsable_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cert"), "cert bad\nstep cremona 1 2 3\n").unwrap();
    let (code, _, err) = fpc(&["verify", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("bad"));
}

#[test]
fn config_is_validated() {
    assert_eq!(fpc(&["dim", "--mults", "7x11", "--t", "15", "--prime", "32000"]).0, EXIT_INPUT);
    assert_eq!(fpc(&["dim", "--mults", "2x3", "--t", "20", "--prime", "13"]).0, EXIT_INPUT);
    assert_eq!(fpc(&["dim", "--mults", "7y11", "--t", "15"]).0, EXIT_INPUT);
    assert_eq!(fpc(&["frobnicate"]).0, EXIT_INPUT);
    assert_eq!(fpc(&["--help"]).0, EXIT_OK);
}

#[test]
fn dim_prints_one_integer_and_a_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let side = dir.path().join("dim.json");
    let (code, out, _) = fpc(&["dim", "--mults", "7x11", "--t", "15", "--sidecar", side.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "0\n");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(side).unwrap()).unwrap();
    assert_eq!(v["rank"], v["cols"]);
    assert_eq!(v["seed"], 1);
    assert_eq!(v["prime"], 32003);

    let (_, out, err) = fpc(&["dim", "--mults", "", "--t", "3"]);
    assert_eq!(out, "20\n");
    assert!(err.contains("\"monomials\": 20"));
}

#[test]
fn alpha_of_eleven_points() {
    let (code, out, err) = fpc(&["alpha", "--mults", "7x11", "--tmax", "20"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "16\n");
    assert!(err.contains("\"alpha_est\": 16"));
}

#[test]
fn containment_reports() {
    let (code, out, _) = fpc(&["containment", "--n", "57", "--r", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("Certified by case4"));
    assert!(out.contains("-325"));
    let (_, out, _) = fpc(&["--format", "json", "containment", "--n", "5", "--r", "2"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["status"], "external-computation");
    assert_eq!(fpc(&["containment", "--n", "0", "--r", "2"]).0, EXIT_INPUT);
}

#[test]
fn survey_small_grids() {
    let (_, out, _) = fpc(&["survey", "--n-max", "1", "--r-max", "1"]);
    assert!(out.contains("exceptions: 0"));
    let (_, out, _) = fpc(&["--format", "json", "survey", "--n-max", "4", "--r-max", "20"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["certified"], serde_json::json!([["case5", 80]]));
}

#[test]
fn case5_command() {
    let (code, out, _) = fpc(&["case5", "--n", "2", "--r", "2", "--tmax", "10"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("n=2 r=2 t<=10"));
    assert_eq!(fpc(&["case5", "--n", "5", "--r", "2"]).0, EXIT_INPUT);
}

#[test]
fn cremona_command() {
    let (code, out, _) = fpc(&["cremona", "--deg", "12m-1", "--mults", "7m*6", "--at", "1,2,3,4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "k=-4m-2\ndeg=8m-3 mults=3m-2*4,7m*2\n");
    let (code, out, _) = fpc(&["cremona", "--deg", "12", "--mults", "7*5", "--at", "1,2,3,4", "--check"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("oracle: dim before 45, after 45"));
    assert_eq!(fpc(&["cremona", "--deg", "12", "--mults", "7*5", "--at", "1,2,2,4"]).0, EXIT_INPUT);
    assert_eq!(fpc(&["cremona", "--deg", "12", "--mults", "7*3", "--at", "1,2,3,4"]).0, EXIT_INPUT);
}
