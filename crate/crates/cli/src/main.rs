//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a check fails (a formula is invalid, a
//! trace or demo does not verify, a construction is improper), 2 on usage,
//! file or parse errors.

mod repl;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value as Json};

use cttqe::construction::{as_expr, classify, encode, ground_value, Properness};
use cttqe::demos::run_demo;
use cttqe::rewrite::{Delta, NormalizeOptions, RewriteError, Rewriter};
use cttqe::semantics::{
    check_valid, parse_assignment, parse_model, quoted_atoms, valuate_with, Assignment, EpsBound,
    EvalOptions, Model, Sampler, Verdict,
};
use cttqe::stdlib::Theory;
use cttqe::surface::theory_file::load_theory;
use cttqe::surface::{parse_expr_in, ParseContext, ParseError};
use cttqe::trace::{check_trace, parse_trace, TraceReport};
use cttqe::Expr;

#[derive(Parser)]
#[command(
    name = "cttqe",
    version,
    about = "Type theory with quotation and evaluation"
)]
struct Cli {
    /// Theory file extending the standard theory.
    #[arg(long, global = true, value_name = "FILE")]
    theory: Option<PathBuf>,
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and typecheck a theory, model or trace file.
    Check { file: PathBuf },
    /// Print the type of an expression.
    Typeof { expr: String },
    /// Print the construction literal of an eval-free expression.
    Encode { expr: String },
    /// Decode a construction back into the expression it represents.
    Decode { expr: String },
    /// Rewrite an expression to normal form.
    Normalize {
        expr: String,
        /// Maximum number of rewrite steps.
        #[arg(long)]
        fuel: Option<usize>,
        /// Print every step with its rule and position.
        #[arg(long)]
        steps: bool,
        /// Also unfold opaque definitions such as T, F and the connectives.
        #[arg(long)]
        unfold: bool,
    },
    /// Evaluate an expression in a finite model.
    Eval {
        expr: String,
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Variable values, as `x:i=1`.
        #[arg(long = "assign", value_name = "VAR=VALUE")]
        assign: Vec<String>,
        /// Depth bound for quantifying over constructions.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Check that a formula holds in a model under sampled assignments.
    Valid {
        expr: String,
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Depth bound for constructions.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Check an equational derivation.
    Trace { file: PathBuf },
    /// Run a worked example.
    Demo {
        #[arg(value_parser = ["lem", "make-implication", "induction", "polydiff"])]
        name: String,
    },
    /// Interactive loop reading commands from standard input.
    Repl,
}

/// What a command produced.
pub struct Outcome {
    pub code: u8,
    pub text: Vec<String>,
    pub result: Json,
    pub steps: Vec<Json>,
}

impl Outcome {
    fn ok(text: Vec<String>, result: Json) -> Self {
        Outcome {
            code: 0,
            text,
            result,
            steps: Vec::new(),
        }
    }

    fn failed(text: Vec<String>, result: Json) -> Self {
        Outcome {
            code: 1,
            text,
            result,
            steps: Vec::new(),
        }
    }
}

/// A usage, file or parse error.
pub struct Fatal(pub String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    ok: bool,
    exit_code: u8,
    result: &'a Json,
    steps: &'a [Json],
    timings: Timings,
}

#[derive(Serialize)]
struct Timings {
    elapsed_us: u128,
}

fn read(path: &Path) -> Result<String, Fatal> {
    std::fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn load(theory: &Option<PathBuf>) -> Result<Theory, Fatal> {
    match theory {
        None => Ok(Theory::standard()),
        Some(p) => {
            let text = read(p)?;
            let name = p.display().to_string();
            Ok(load_theory(&text, Some(&name), Theory::standard_ref())?)
        }
    }
}

pub fn parse(text: &str, theory: &Theory) -> Result<Expr, Fatal> {
    parse_expr_in(text, &ParseContext::new(theory).with_file("<expr>"))
        .map_err(|e| Fatal(diagnostic(text, &e)))
}

/// The error message followed by the offending line with a caret underline.
pub fn diagnostic(text: &str, e: &ParseError) -> String {
    let Some(line) = text.lines().nth(e.span.line.saturating_sub(1)) else {
        return e.to_string();
    };
    let pad = " ".repeat(e.span.column.saturating_sub(1));
    let marks = "^".repeat(e.span.length.max(1));
    format!("{e}\n  {line}\n  {pad}{marks}")
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Typeof { .. } => "typeof",
        Command::Encode { .. } => "encode",
        Command::Decode { .. } => "decode",
        Command::Normalize { .. } => "normalize",
        Command::Eval { .. } => "eval",
        Command::Valid { .. } => "valid",
        Command::Trace { .. } => "trace",
        Command::Demo { .. } => "demo",
        Command::Repl => "repl",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let name = command_name(&cli.command);
    let outcome = run(&cli);
    let elapsed = start.elapsed().as_micros();
    match outcome {
        Ok(o) => {
            if cli.json {
                let report = Report {
                    command: name,
                    ok: o.code == 0,
                    exit_code: o.code,
                    result: &o.result,
                    steps: &o.steps,
                    timings: Timings {
                        elapsed_us: elapsed,
                    },
                };
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializable")
                );
            } else {
                for line in &o.text {
                    println!("{line}");
                }
            }
            ExitCode::from(o.code)
        }
        Err(Fatal(msg)) => {
            if cli.json {
                let report = json!({
                    "command": name,
                    "ok": false,
                    "exit_code": 2,
                    "error": msg,
                    "timings": { "elapsed_us": elapsed },
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializable")
                );
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Fatal> {
    let theory = load(&cli.theory)?;
    match &cli.command {
        Command::Check { file } => check_file(file, &theory),
        Command::Typeof { expr } => {
            let e = parse(expr, &theory)?;
            let ty = e.ty().to_string();
            Ok(Outcome::ok(vec![ty.clone()], json!({ "type": ty })))
        }
        Command::Encode { expr } => encode_cmd(&parse(expr, &theory)?),
        Command::Decode { expr } => decode_cmd(&parse(expr, &theory)?),
        Command::Normalize {
            expr,
            fuel,
            steps,
            unfold,
        } => {
            let e = parse(expr, &theory)?;
            let opts = NormalizeOptions {
                fuel: fuel.unwrap_or_else(NormalizeOptions::default_fuel),
                delta: if *unfold {
                    Delta::All
                } else {
                    Delta::Transparent
                },
                ..NormalizeOptions::default()
            };
            normalize_cmd(&e, &theory, &opts, *steps)
        }
        Command::Eval {
            expr,
            model,
            assign,
            depth,
        } => {
            let m = parse_model(&read(model)?, &theory)?;
            let e = parse(expr, &theory)?;
            eval_cmd(&e, &m, assign, *depth)
        }
        Command::Valid { expr, model, depth } => {
            let m = parse_model(&read(model)?, &theory)?;
            let e = parse(expr, &theory)?;
            valid_cmd(&e, &m, *depth)
        }
        Command::Trace { file } => {
            let text = read(file)?;
            let t = parse_trace(&text, &theory, Some(&file.display().to_string()))?;
            Ok(trace_outcome(&t, &check_trace(&t, &theory)))
        }
        Command::Demo { name } => {
            let out = run_demo(name)?;
            let result = json!({ "demo": out.name, "lines": out.lines, "verified": out.ok });
            Ok(if out.ok {
                Outcome::ok(out.lines, result)
            } else {
                Outcome::failed(out.lines, result)
            })
        }
        Command::Repl => {
            let stdin = std::io::stdin();
            let stdout = std::io::stdout();
            repl::run(&theory, stdin.lock(), stdout.lock())?;
            Ok(Outcome::ok(Vec::new(), Json::Null))
        }
    }
}

fn check_file(file: &Path, theory: &Theory) -> Result<Outcome, Fatal> {
    let text = read(file)?;
    let name = file.display().to_string();
    let line = match file.extension().and_then(|e| e.to_str()) {
        Some("trace") => {
            let t = parse_trace(&text, theory, Some(&name))?;
            format!(
                "{name}: trace with {} steps at type {}",
                t.steps.len(),
                t.start.ty()
            )
        }
        Some("model") => {
            let m = parse_model(&text, theory)?;
            format!("{name}: model with {} individuals", m.iota_size())
        }
        _ => {
            let t = load_theory(&text, Some(&name), theory)?;
            let added = t.constants().count() - theory.constants().count();
            format!("{name}: {added} constants")
        }
    };
    Ok(Outcome::ok(vec![line.clone()], json!({ "summary": line })))
}

pub fn encode_cmd(e: &Expr) -> Result<Outcome, Fatal> {
    let c = encode(e)?;
    let lit = as_expr(&c).to_string();
    Ok(Outcome::ok(
        vec![lit.clone()],
        json!({ "construction": lit }),
    ))
}

pub fn decode_cmd(e: &Expr) -> Result<Outcome, Fatal> {
    let c = ground_value(e).ok_or_else(|| Fatal(format!("{e} does not denote a construction")))?;
    Ok(match classify(&c) {
        Properness::Proper { ty, expr } => Outcome::ok(
            vec![expr.to_string(), format!("  : {ty}")],
            json!({ "proper": true, "expr": expr.to_string(), "type": ty.to_string() }),
        ),
        Properness::Improper { path, reason } => {
            let line = format!("improper construction at {path:?}: {reason}");
            Outcome::failed(
                vec![line],
                json!({ "proper": false, "path": path, "reason": reason }),
            )
        }
    })
}

pub fn normalize_cmd(
    e: &Expr,
    theory: &Theory,
    opts: &NormalizeOptions,
    show_steps: bool,
) -> Result<Outcome, Fatal> {
    let rw = Rewriter::new(theory)
        .with_delta(opts.delta)
        .with_rules(opts.rules);
    let (report, exhausted) = match rw.normalize(e, opts.fuel) {
        Ok(r) => (r, false),
        Err(RewriteError::FuelExhausted(r)) => (*r, true),
        Err(other) => return Err(other.into()),
    };
    let mut text = Vec::new();
    let mut steps = Vec::new();
    let mut cur = e.clone();
    for s in &report.steps {
        cur = rw.contract_at(&cur, &s.path, s.rule)?;
        steps.push(json!({ "rule": s.rule.name(), "path": s.path, "expr": cur.to_string() }));
        if show_steps {
            text.push(format!("{} at {:?}: {}", s.rule, s.path, cur));
        }
    }
    let result = report.result.to_string();
    let mut out = if exhausted {
        text.push(format!("fuel exhausted after {} steps", report.fuel_used));
        text.push(result.clone());
        Outcome::failed(
            text,
            json!({ "expr": result, "normal": false, "fuel_used": report.fuel_used }),
        )
    } else {
        text.push(result.clone());
        Outcome::ok(
            text,
            json!({ "expr": result, "normal": true, "fuel_used": report.fuel_used }),
        )
    };
    out.steps = steps;
    Ok(out)
}

fn eps_options(e: &Expr, depth: Option<usize>) -> EvalOptions {
    let eps_bound = depth.map(|depth| {
        let mut atoms = Vec::new();
        quoted_atoms(e, &mut atoms);
        EpsBound { depth, atoms }
    });
    EvalOptions {
        eps_bound,
        ..EvalOptions::default()
    }
}

pub fn eval_cmd(
    e: &Expr,
    m: &Model,
    assign: &[String],
    depth: Option<usize>,
) -> Result<Outcome, Fatal> {
    let mut phi = Assignment::new();
    for a in assign {
        let (v, val) = parse_assignment(a, m).map_err(Fatal)?;
        phi = phi.update(v, val);
    }
    let r = valuate_with(e, m, &phi, &eps_options(e, depth))?;
    let mut text = vec![r.value.to_string()];
    if r.approximate {
        text.push("(approximate: constructions were enumerated up to the depth bound)".into());
    }
    Ok(Outcome::ok(
        text,
        json!({ "value": r.value.to_string(), "approximate": r.approximate }),
    ))
}

pub fn valid_cmd(e: &Expr, m: &Model, depth: usize) -> Result<Outcome, Fatal> {
    if *e.ty() != cttqe::Type::Omicron {
        return Err(Fatal(format!("{e} is not a formula")));
    }
    let verdict = check_valid(e, m, &Sampler::with_depth(depth))?;
    Ok(match verdict {
        Verdict::Holds {
            samples,
            exhaustive,
            approximate,
        } => {
            let how = match (exhaustive, approximate) {
                (true, false) => "all assignments",
                (true, true) => "all assignments, constructions bounded",
                (false, _) => "sampled assignments, constructions bounded",
            };
            Outcome::ok(
                vec![format!("holds on {samples} assignments ({how})")],
                json!({ "holds": true, "samples": samples, "exhaustive": exhaustive, "approximate": approximate }),
            )
        }
        Verdict::Fails { assignment } => {
            let binding: Vec<String> = assignment
                .iter()
                .map(|(v, val)| format!("{v} = {val}"))
                .collect();
            let mut text = vec!["fails under".to_string()];
            text.extend(binding.iter().map(|b| format!("  {b}")));
            Outcome::failed(text, json!({ "holds": false, "counterexample": binding }))
        }
    })
}

pub fn trace_outcome(t: &cttqe::trace::EqTrace, report: &TraceReport) -> Outcome {
    let mut text = vec![format!("1. {}", t.start)];
    for (i, s) in t.steps.iter().enumerate() {
        text.push(format!("{}. {} | {}", i + 2, s.justification, s.expr));
    }
    match report {
        TraceReport::Verified => {
            text.push(format!("verified {} steps", t.steps.len()));
            Outcome::ok(
                text,
                json!({ "verified": true, "final": t.last().to_string() }),
            )
        }
        TraceReport::FailedAtStep { index, reason } => {
            text.push(format!("step {index} failed: {reason}"));
            Outcome::failed(
                text,
                json!({ "verified": false, "failed_at": index, "reason": reason.to_string() }),
            )
        }
    }
}
