//! Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
//! any fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use natural_core::driver::{check_source, model_report, Checked};
use natural_core::finmodel::{eval_ctx, eval_type, Val, Verdict};
use natural_core::kernel::{Checker, Config};
use natural_core::props::{roundtrip_at, run_suite, suite, Outcome, RunOptions};
use natural_core::syntax::Term;

fn natural(args: &[&str]) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_natural")).args(args).output().expect("binary runs");
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn stdlib_files() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../stdlib");
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
}

fn reports() -> Vec<(PathBuf, natural_core::driver::FileReport)> {
    stdlib_files()
        .into_iter()
        .map(|p| {
            let src = std::fs::read_to_string(&p).unwrap();
            (p, check_source(&src, Config::default()))
        })
        .collect()
}

fn cli_on_stdlib(cmd: &str) -> (i32, String) {
    let files: Vec<String> = stdlib_files().iter().map(|p| p.display().to_string()).collect();
    let args: Vec<&str> = [cmd].into_iter().chain(files.iter().map(String::as_str)).collect();
    natural(&args)
}

fn suites_pass(names: &[&str], at_least: usize) -> (bool, String) {
    let opts = RunOptions::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for name in names {
        let r = run_suite(&suite(name).expect("known suite"), &opts);
        let good = r.ok() && r.passed >= at_least;
        ok &= good;
        parts.push(format!("{name} {}/{}", r.passed, r.target));
        if let Some(c) = &r.failure {
            parts.push(format!("counterexample: {}", c.dump.replace('\n', " | ")));
        }
    }
    (ok, parts.join(", "))
}

fn definitional_corpus() -> (bool, String) {
    let (code, _) = cli_on_stdlib("check");
    let eqs: usize = reports()
        .iter()
        .map(|(_, r)| r.decls.iter().filter(|d| matches!(d.result, Ok(Checked::Eq { .. }))).count())
        .sum();
    (code == 0 && eqs >= 25, format!("check exit {code}, {eqs} eq declarations"))
}

fn syntactic_lemmas() -> (bool, String) {
    suites_pass(&["zc-idempotent", "zc-split", "zero-prefix", "zero-weaken", "zero-subst", "dull-fixpoint"], 10_000)
}

fn admissibility() -> (bool, String) {
    suites_pass(&["pre-counit", "pre-unit", "dull-subst", "subst"], 500)
}

fn oracle_soundness() -> (bool, String) {
    let (code, _) = cli_on_stdlib("model");
    let mut equal = 0;
    let mut violations = 0;
    for (_, r) in reports() {
        for line in model_report(&r) {
            violations += usize::from(line.violation());
            equal += usize::from(line.asserted && line.verdict == Ok(Verdict::Equal));
        }
    }
    // Boolean functions over the one-point base, enumerated by hand: a base
    // element is a fibre map 2 -> 2 fixing true, a fibre element any 2 -> 2.
    let maps: Vec<[bool; 2]> = [true, false].iter().flat_map(|&a| [true, false].map(|b| [a, b])).collect();
    let expected = (maps.iter().filter(|m| m[0]).count(), maps.len());
    let t = eval_type(&eval_ctx(&[]).unwrap(), &Term::pi("_", Term::bool(), Term::bool())).unwrap();
    let fibres: Vec<usize> = t.fibre.values().map(Vec::len).collect();
    let got = (t.base[&Val::Star].len(), fibres[0]);
    let cards = got == expected && expected == (2, 4) && fibres.iter().all(|&n| n == got.1);
    let (gen_ok, gen) = suites_pass(&["model-soundness"], 500);
    (
        code == 0 && violations == 0 && equal >= 15 && cards && gen_ok,
        format!("model exit {code}, {equal} corpus equations equal, {violations} violations, |base| {} |fibre| {}, {gen}", got.0, got.1),
    )
}

fn negative_tests() -> (bool, String) {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/negative");
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    let mut good = 0;
    let mut bad = Vec::new();
    for p in &files {
        let src = std::fs::read_to_string(p).unwrap();
        let rule = src.lines().next().and_then(|l| l.strip_prefix("-- expect: ")).unwrap_or("?").trim();
        let (code, out) = natural(&["check", p.to_str().unwrap()]);
        if code == 1 && out.contains(&format!("error[{rule}]")) {
            good += 1;
        } else {
            bad.push(p.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    let detail = if bad.is_empty() { String::new() } else { format!(", mismatches {bad:?}") };
    (good >= 10 && bad.is_empty(), format!("{good}/{} fixtures rejected with their rule{detail}", files.len()))
}

fn roundtrip() -> (bool, String) {
    let checker = Checker::default();
    let mut corpus = 0;
    let mut broken = 0;
    for (_, r) in reports() {
        for d in &r.decls {
            let terms = match &d.result {
                Ok(Checked::Def { term, ty, .. }) | Ok(Checked::Check { term, ty }) => vec![(term, ty)],
                Ok(Checked::Eq { lhs, rhs, ty }) | Ok(Checked::ModelEq { lhs, rhs, ty }) => vec![(lhs, ty), (rhs, ty)],
                _ => vec![],
            };
            for (t, ty) in terms {
                corpus += 1;
                broken += usize::from(roundtrip_at(&checker, &d.env, t, ty) != Outcome::Pass);
            }
        }
    }
    let (ok, gen) = suites_pass(&["roundtrip"], 10_000);
    (ok && broken == 0 && corpus > 0, format!("corpus {}/{corpus}, {gen}", corpus - broken))
}

type Criterion = (&'static str, fn() -> (bool, String));

fn main() {
    let start = Instant::now();
    let criteria: [Criterion; 6] = [
        ("definitional corpus", definitional_corpus),
        ("syntactic lemmas", syntactic_lemmas),
        ("admissibility", admissibility),
        ("oracle soundness", oracle_soundness),
        ("negative tests", negative_tests),
        ("round-trip", roundtrip),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = run();
        all &= ok;
        println!("criterion {} ({name}): {} [{:.1}s] {detail}", i + 1, if ok { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64());
    }
    println!("acceptance: {} in {:.1}s", if all { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64());
    if !all {
        std::process::exit(1);
    }
}
