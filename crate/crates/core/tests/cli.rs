use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn dpoisson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpoisson")).args(args).output().unwrap()
}

const TWISTED: &str = "\
[bracket]
family = kks, L = 2
[involution]
kind = phi_minus
[form]
style = identity, d = 3
[checks]
check = jacobi_ring
check = well_defined, max_word_len = 2
check = equivariance
";

#[test]
fn twisted_kks_job_passes() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "t.job", TWISTED);
    let json = dir.path().join("r.json");
    let out = dpoisson(&["induce-twisted", "--spec", &spec, "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["jacobi_ring", "well_defined", "equivariance"]);
    assert!(report["checks"][0]["scope"].as_str().unwrap().starts_with("twisted"));
    assert!(report["engine_version"].is_string());
}

#[test]
fn phi_plus_adaptedness_fails_with_exit_1() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "p.job",
        "[bracket]\nfamily = kks, L = 2\n[involution]\nkind = phi_plus\n[checks]\nseed = 1\ncheck = phi_adapted\n",
    );
    let out = dpoisson(&["check-bracket", "--spec", &spec, "--json", "-"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let c = &report["checks"][0];
    assert_eq!(c["passed"], false);
    assert!(c["counterexample"]["inputs"].as_str().unwrap().contains("a="));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL phi_adapted"));
}

#[test]
fn centralizer_job_passes() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "c.job",
        "[form]\nstyle = theta, N = 3, kind = orthogonal\n[checks]\ncheck = prop_f10, L = 2, max_word_len = 2\n",
    );
    let out = dpoisson(&["centralizer", "--spec", &spec]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "b.job", "[form]\ng = [[1/0]]\n");
    let out = dpoisson(&["run", "--spec", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 7"));
    let missing = dpoisson(&["run", "--spec", "/nonexistent/x.job"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn reports_are_reproducible_and_seed_overridable() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "s.job",
        "[bracket]\nfamily = kks, L = 3\n[involution]\nkind = phi_minus\n[checks]\nseed = 4\ncheck = double_jacobi, samples = 30\n",
    );
    let run = |seed: Option<&str>| {
        let mut args = vec!["check-bracket", "--spec", spec.as_str(), "--json", "-", "--threads", "1"];
        if let Some(s) = seed {
            args.extend(["--seed", s]);
        }
        dpoisson(&args).stdout
    };
    assert_eq!(run(None), run(None));
    let overridden = String::from_utf8(run(Some("17"))).unwrap();
    assert!(overridden.contains("\"seed\": 17"));
}

#[test]
fn shipped_jobs_parse() {
    let jobs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../jobs");
    for entry in fs::read_dir(jobs).unwrap() {
        let text = fs::read_to_string(entry.unwrap().path()).unwrap();
        dpoisson::job::JobSpec::parse(&text).unwrap();
    }
}
