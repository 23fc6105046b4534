use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use natural_core::driver::{check_source, model_report, normalize_def, FileReport};
use natural_core::finmodel::Verdict;
use natural_core::kernel::{Config, Diagnostic, DEFAULT_FUEL};
use natural_core::props::{run_suite, suite, suites, RunOptions, SuiteReport};

#[derive(Parser, Debug)]
#[command(name = "natural", version, about = "Checker for type theory with the natural modality")]
struct Cli {
    /// `Type : Type`. Pass `--type-in-type=off` to disable it.
    #[arg(long, global = true, value_name = "on|off", num_args = 0..=1, require_equals = true, default_value = "on", default_missing_value = "on")]
    type_in_type: Toggle,
    /// Head-reduction steps allowed per kernel call.
    #[arg(long, global = true, default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Instances per property suite; each suite has its own default.
    #[arg(long, global = true)]
    count: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every declaration of each file.
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Print the normal form of a definition's body.
    Normalize { path: PathBuf, name: String },
    /// Run the generative property suites.
    Props {
        /// Run only the named suites.
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
    /// Evaluate every `eq` and `modeleq` in the finite model.
    Model {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

#[derive(Serialize)]
struct JsonDiagnostic<'a> {
    file: &'a str,
    line: u32,
    col: u32,
    rule: &'static str,
    message: String,
}

/// What one file contributes to the output, and how bad it went. Text of
/// I/O failures (code 2) goes to stderr.
struct FileOutput {
    text: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = Config { type_in_type: matches!(cli.type_in_type, Toggle::On), fuel: cli.fuel };
    let code = match &cli.command {
        Command::Check { paths } => per_file(paths, |file, src| check_file(file, src, config, cli.format)),
        Command::Normalize { path, name } => normalize(path, name, config, cli.format),
        Command::Props { suites } => props(&cli, suites, config),
        Command::Model { paths } => per_file(paths, |file, src| model_file(file, src, config, cli.format)),
    };
    ExitCode::from(code)
}

/// Runs `f` on every file concurrently and prints the results in input
/// order. The exit code is the worst one seen.
fn per_file(paths: &[PathBuf], f: impl Fn(&str, &str) -> FileOutput + Sync) -> u8 {
    let outputs: Vec<FileOutput> = std::thread::scope(|s| {
        let handles: Vec<_> = paths
            .iter()
            .map(|p| {
                let f = &f;
                s.spawn(move || {
                    let file = p.display().to_string();
                    match std::fs::read_to_string(p) {
                        Ok(src) => f(&file, &src),
                        Err(e) => FileOutput { text: format!("{file}: cannot read: {e}\n"), code: 2 },
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("file worker panicked")).collect()
    });
    let mut code = 0;
    for out in outputs {
        if out.code == 2 {
            eprint!("{}", out.text);
        } else {
            print!("{}", out.text);
        }
        code = code.max(out.code);
    }
    code
}

fn diagnostic_line(file: &str, d: &Diagnostic, format: Format) -> String {
    let span = d.span.unwrap_or_default();
    match format {
        Format::Text => format!("{file}:{span}: error[{}]: {}\n", d.rule, render_body(d)),
        Format::Json => {
            let j = JsonDiagnostic { file, line: span.line, col: span.col, rule: d.rule.name(), message: render_body(d) };
            format!("{}\n", serde_json::to_string(&j).expect("plain data serializes"))
        }
    }
}

/// The rendered diagnostic without its leading rule name.
fn render_body(d: &Diagnostic) -> String {
    let full = d.render();
    full.strip_prefix(&format!("{}: ", d.rule)).map(str::to_string).unwrap_or(full)
}

fn diagnostics(file: &str, report: &FileReport, format: Format) -> String {
    report.diagnostics().map(|d| diagnostic_line(file, d, format)).collect()
}

fn check_file(file: &str, src: &str, config: Config, format: Format) -> FileOutput {
    let report = check_source(src, config);
    if report.ok() {
        let text = match format {
            Format::Text => format!("{file}: ok ({} declarations)\n", report.decls.len()),
            Format::Json => String::new(),
        };
        FileOutput { text, code: 0 }
    } else {
        FileOutput { text: diagnostics(file, &report, format), code: 1 }
    }
}

fn model_file(file: &str, src: &str, config: Config, format: Format) -> FileOutput {
    let report = check_source(src, config);
    if !report.ok() {
        return FileOutput { text: diagnostics(file, &report, format), code: 1 };
    }
    let mut text = String::new();
    let mut code = 0;
    for line in model_report(&report) {
        let kind = if line.asserted { "eq" } else { "modeleq" };
        let verdict = match &line.verdict {
            Ok(v) => v.to_string(),
            Err(e) => format!("error: {e}"),
        };
        let violation = line.violation();
        if violation {
            code = 1;
        }
        match format {
            Format::Text => {
                let flag = if violation { " VIOLATION" } else { "" };
                let _ = writeln!(text, "{file}:{}: {kind} {verdict}{flag}", line.span);
            }
            Format::Json => {
                let v = serde_json::json!({
                    "file": file,
                    "line": line.span.line,
                    "col": line.span.col,
                    "kind": kind,
                    "verdict": match &line.verdict {
                        Ok(Verdict::Equal) => "equal",
                        Ok(Verdict::Unequal) => "unequal",
                        Ok(Verdict::Skipped(_)) => "skipped",
                        Err(_) => "error",
                    },
                    "message": verdict,
                    "violation": violation,
                });
                let _ = writeln!(text, "{v}");
            }
        }
    }
    FileOutput { text, code }
}

fn normalize(path: &PathBuf, name: &str, config: Config, format: Format) -> u8 {
    let file = path.display().to_string();
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{file}: cannot read: {e}");
            return 2;
        }
    };
    let report = check_source(&src, config);
    if !report.ok() {
        print!("{}", diagnostics(&file, &report, format));
        return 1;
    }
    match normalize_def(&report, name, config) {
        Ok(nf) => {
            match format {
                Format::Text => println!("{nf}"),
                Format::Json => println!("{}", serde_json::json!({ "file": file, "name": name, "normal_form": nf.to_string() })),
            }
            0
        }
        Err(d) => {
            print!("{}", diagnostic_line(&file, &d, format));
            1
        }
    }
}

fn props(cli: &Cli, names: &[String], config: Config) -> u8 {
    let chosen = if names.is_empty() {
        suites()
    } else {
        let mut out = Vec::new();
        for n in names {
            match suite(n) {
                Some(s) => out.push(s),
                None => {
                    let known: Vec<_> = suites().iter().map(|s| s.name).collect();
                    eprintln!("unknown suite `{n}`; known suites: {}", known.join(", "));
                    return 2;
                }
            }
        }
        out
    };
    let opts = RunOptions { seed: cli.seed, count: cli.count, config, ..RunOptions::default() };
    let mut code = 0;
    for s in &chosen {
        let r = run_suite(s, &opts);
        if !r.ok() {
            code = 1;
        }
        print!("{}", suite_line(&r, cli.format));
    }
    code
}

fn suite_line(r: &SuiteReport, format: Format) -> String {
    match format {
        Format::Json => {
            let failure = r.failure.as_ref().map(|c| {
                serde_json::json!({ "index": c.index, "size": c.size, "original_size": c.original_size, "dump": c.dump })
            });
            let v = serde_json::json!({
                "suite": r.name,
                "ok": r.ok(),
                "target": r.target,
                "passed": r.passed,
                "discarded": r.discarded,
                "counterexample": failure,
            });
            format!("{v}\n")
        }
        Format::Text => {
            let mut s = format!(
                "{}: {} ({} passed, {} discarded)\n",
                r.name,
                if r.ok() { "ok" } else { "FAILED" },
                r.passed,
                r.discarded
            );
            match &r.failure {
                Some(c) => {
                    let _ = writeln!(s, "  counterexample (instance {}, size {}, first seen at size {}):", c.index, c.size, c.original_size);
                    for line in c.dump.lines() {
                        let _ = writeln!(s, "    {line}");
                    }
                }
                None if r.passed < r.target => {
                    let _ = writeln!(s, "  gave up: only {} of {} instances generated", r.passed, r.target);
                }
                None => {}
            }
            s
        }
    }
}
