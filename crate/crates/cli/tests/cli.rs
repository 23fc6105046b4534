use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn natural(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_natural")).args(args).output().expect("binary runs")
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn stdlib(file: &str) -> String {
    root().join("stdlib").join(file).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn temp_file(src: &str) -> tempfile::NamedTempFile {
    let f = tempfile::Builder::new().suffix(".nat").tempfile().unwrap();
    std::fs::write(f.path(), src).unwrap();
    f
}

fn negative_fixtures() -> Vec<(PathBuf, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/negative");
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "nat"))
        .map(|p| {
            let src = std::fs::read_to_string(&p).unwrap();
            let rule = src.lines().next().and_then(|l| l.strip_prefix("-- expect: ")).expect("expect header").trim().to_string();
            (p, rule)
        })
        .collect();
    out.sort();
    out
}

#[test]
fn stdlib_checks() {
    let files: Vec<String> = ["basics.nat", "functor.nat", "dull.nat", "types.nat", "pointed.nat"].map(stdlib).into();
    let args: Vec<&str> = ["check"].into_iter().chain(files.iter().map(String::as_str)).collect();
    let o = natural(&args);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    // One line per file, in the order given.
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), files.len());
    for (line, f) in lines.iter().zip(&files) {
        assert!(line.starts_with(&format!("{f}: ok")), "{line}");
    }
}

#[test]
fn intro_of_a_plain_variable_is_rejected() {
    let f = temp_file("postulate A : Type ;\npostulate x : A ;\neq up(x) == up(~x) : %(A) ;\n");
    let o = natural(&["check", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn missing_file_is_an_io_error() {
    let o = natural(&["check", "/definitely/not/here.nat"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot read"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&natural(&["frobnicate"])), 2);
    assert_eq!(code(&natural(&["check"])), 2);
    assert_eq!(code(&natural(&["props", "--suite", "no-such-suite", "--count", "1"])), 2);
}

#[test]
fn negative_fixtures_fail_with_their_rule() {
    let fixtures = negative_fixtures();
    assert!(fixtures.len() >= 10);
    for (path, rule) in fixtures {
        let o = natural(&["check", "--format", "json", path.to_str().unwrap()]);
        assert_eq!(code(&o), 1, "{}", path.display());
        let first: serde_json::Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
        assert_eq!(first["rule"], rule.as_str(), "{}", path.display());
    }
}

#[test]
fn json_diagnostics_have_a_fixed_schema() {
    let f = temp_file("postulate A : Type ;\npostulate x : A ;\npostulate y : A ;\neq x == y : A ;\ncheck z : A ;\n");
    let path = f.path().to_str().unwrap();
    let o = natural(&["check", "--format", "json", path]);
    assert_eq!(code(&o), 1);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    for v in &lines {
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(keys, ["col", "file", "line", "message", "rule"]);
        assert_eq!(v["file"], path);
    }
    assert_eq!((lines[0]["line"].as_u64(), lines[0]["rule"].as_str()), (Some(4), Some("conv")));
    assert_eq!((lines[1]["line"].as_u64(), lines[1]["rule"].as_str()), (Some(5), Some("scope")));
    assert_eq!(stdout(&natural(&["check", "--format", "json", path])), stdout(&o));
}

#[test]
fn normalize_prints_normal_forms() {
    let run = |file: &str, name: &str| {
        let o = natural(&["normalize", &stdlib(file), name]);
        assert_eq!(code(&o), 0);
        stdout(&o).trim().to_string()
    };
    assert_eq!(run("basics.nat", "beta"), "~x");
    assert_eq!(run("basics.nat", "lam_ok"), "fun (y : A) => y");
    assert_eq!(run("functor.nat", "fid_p"), "p");
    let o = natural(&["normalize", &stdlib("basics.nat"), "no_such_def"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("error[scope]"));
}

#[test]
fn type_in_type_can_be_turned_off() {
    let f = temp_file("check Type : Type ;\n");
    let path = f.path().to_str().unwrap();
    assert_eq!(code(&natural(&["check", path])), 0);
    assert_eq!(code(&natural(&["check", "--type-in-type", path])), 0);
    let o = natural(&["check", "--type-in-type=off", path]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("error[univ]"));
}

#[test]
fn fuel_bounds_conversion() {
    let o = natural(&["check", "--fuel", "1", &stdlib("basics.nat")]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("conversion fuel exhausted"));
}

#[test]
fn model_reports_verdicts() {
    let o = natural(&["model", &stdlib("pointed.nat"), &stdlib("basics.nat")]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    let pointed: Vec<&str> = text.lines().filter(|l| l.contains("pointed.nat")).collect();
    assert_eq!(pointed.iter().filter(|l| l.contains(" eq equal")).count(), 16);
    assert_eq!(pointed.iter().filter(|l| l.contains("modeleq unequal")).count(), 3);
    assert!(text.lines().any(|l| l.contains("basics.nat") && l.contains("skipped (the universe)")));
    assert!(!text.contains("VIOLATION"));
}

#[test]
fn model_requires_files_to_check() {
    let f = temp_file("postulate b : PB ;\neq b == ~b : PB ;\n");
    let o = natural(&["model", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("error[conv]"));
}

#[test]
fn props_output_is_deterministic() {
    let args = ["props", "--seed", "3", "--count", "30"];
    let a = natural(&args);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&natural(&args)));
    assert_eq!(stdout(&a).lines().count(), 14);
    let json = natural(&["props", "--seed", "3", "--count", "30", "--suite", "zc-split", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&json).trim()).unwrap();
    assert_eq!((v["suite"].as_str(), v["passed"].as_u64(), v["ok"].as_bool()), (Some("zc-split"), Some(30), Some(true)));
}
