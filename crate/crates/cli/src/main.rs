use std::fmt::Display;
use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use jex_core::lax::{from_lax, to_lax};
use jex_core::parse::{
    is_declaration_keyword, parse_derive, parse_expr, parse_file, parse_lax_prop, parse_prop, Decl, ParseError,
};
use jex_core::print::{expr_to_string_in, prop_to_string, Style};
use jex_core::reduce::DEFAULT_FUEL;
use jex_core::syntax::{Context, JudgmentKind};
use serde_json::{json, Value};

use jex::fuzz::{self, FuzzConfig, Suite};
use jex::session::{self, Outcome, Session, Status};

const OK: u8 = 0;
const FAILED: u8 = 1;
const SYNTAX: u8 = 2;
const COUNTEREXAMPLE: u8 = 3;
const FUEL: u8 = 4;

#[derive(Parser)]
#[command(name = "jex", version, about = "Type checker and normalizer for judgmental existence")]
struct Cli {
    /// Print Unicode symbols instead of ASCII.
    #[arg(long, global = true)]
    unicode: bool,
    /// Print `φ → ∃ψ` as `φ ⊸ ψ`.
    #[arg(long, global = true)]
    resugar: bool,
    /// Machine-readable output (check and fuzz).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every declaration of a source file.
    Check {
        /// Source file, or `-` for standard input.
        file: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
    },
    /// Normalize a single expression, or the `normalize` lines of a source file.
    Normalize {
        file: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
    },
    /// Show every reduction step of a closed or open expression.
    Trace {
        expr: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
    },
    /// Translate between propositions and lax-logic propositions.
    #[command(group(ArgGroup::new("direction").required(true)))]
    Translate {
        #[arg(long, group = "direction")]
        to_lax: bool,
        #[arg(long, group = "direction")]
        from_lax: bool,
        prop: String,
    },
    /// Run a derivation builder: trunc-intro, trunc-elim, lax-i..lax-iii, prop-1L..prop-6.
    Derive {
        builder: String,
        #[arg(allow_hyphen_values = true, num_args = 0..)]
        args: Vec<String>,
    },
    Fuzz(FuzzArgs),
}

#[derive(Args)]
/// Check a property over generated well-typed samples.
struct FuzzArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    count: u64,
    #[arg(long, value_parser = |s: &str| s.parse::<Suite>())]
    suite: Suite,
    #[arg(long, value_enum, default_value_t = KindArg::Both)]
    kind: KindArg,
    #[arg(long, default_value_t = 10_000)]
    fuel: usize,
    #[arg(long, default_value_t = 12)]
    max_depth: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    True,
    Just,
    Both,
}

impl KindArg {
    fn kinds(self) -> Vec<JudgmentKind> {
        match self {
            KindArg::True => vec![JudgmentKind::Relevant],
            KindArg::Just => vec![JudgmentKind::Irrelevant],
            KindArg::Both => JudgmentKind::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("{0}:{1}")]
    Syntax(String, ParseError),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Syntax(..) => SYNTAX,
            CliError::Io(..) | CliError::Failed(_) => FAILED,
        }
    }
}

/// Writes a line to stdout. A closed pipe is not an error worth reporting.
fn say(line: impl Display) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn read_source(file: &str) -> Result<String, CliError> {
    let mut text = String::new();
    let res = if file == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(file).map(|t| text = t)
    };
    res.map_err(|e| CliError::Io(file.to_string(), e))?;
    Ok(text)
}

fn source_name(file: &str) -> String {
    if file == "-" { "<stdin>".into() } else { file.into() }
}

fn syntax(origin: &str) -> impl Fn(ParseError) -> CliError + '_ {
    move |e| CliError::Syntax(origin.to_string(), e)
}

/// Whether `text` is a source file rather than a lone expression: its first
/// word, after comments, is a declaration keyword.
fn is_program(text: &str) -> bool {
    let first = text
        .lines()
        .map(|l| l.split("--").next().unwrap_or_default().trim())
        .find(|l| !l.is_empty())
        .unwrap_or_default();
    let word: String = first.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
    is_declaration_keyword(&word)
}

fn worst(outcomes: &[Outcome]) -> u8 {
    if outcomes.iter().any(|o| o.status == Status::Failed) {
        FAILED
    } else if outcomes.iter().any(|o| o.status == Status::FuelExhausted) {
        FUEL
    } else {
        OK
    }
}

fn outcome_json(o: &Outcome) -> Value {
    json!({
        "position": o.pos.to_string(),
        "command": o.command,
        "status": o.status.label(),
        "summary": o.summary,
        "judgment": o.judgment,
        "steps": o.steps,
        "message": o.message,
        "output": o.detail,
    })
}

fn summary_line(outcomes: &[Outcome]) -> String {
    let failed = outcomes.iter().filter(|o| o.status != Status::Ok).count();
    let total = session::plural(outcomes.len(), "declaration");
    if failed == 0 {
        format!("{total}, all ok")
    } else {
        format!("{total}, {failed} failed")
    }
}

fn run_program(decls: &[Decl], style: Style, fuel: usize) -> Vec<Outcome> {
    let mut s = Session::new(style, fuel);
    decls.iter().map(|d| s.run(d)).collect()
}

fn check(file: &str, fuel: usize, style: Style, as_json: bool) -> Result<u8, CliError> {
    let name = source_name(file);
    let src = parse_file(&read_source(file)?).map_err(syntax(&name))?;
    let outcomes = run_program(&src.decls, style, fuel);
    let code = worst(&outcomes);
    if as_json {
        let status = match code {
            OK => "ok",
            FUEL => "fuel-exhausted",
            _ => "failed",
        };
        let doc = json!({
            "file": name,
            "status": status,
            "declarations": outcomes.iter().map(outcome_json).collect::<Vec<_>>(),
        });
        say(serde_json::to_string_pretty(&doc).expect("json values serialize"));
    } else {
        for o in &outcomes {
            for l in o.render() {
                say(l);
            }
        }
        say(summary_line(&outcomes));
    }
    Ok(code)
}

fn normalize(file: &str, fuel: usize, style: Style) -> Result<u8, CliError> {
    let name = source_name(file);
    let text = read_source(file)?;
    if !is_program(&text) {
        // A lone expression may mention free names; reduction does not care.
        let e = parse_expr(&text).map_err(syntax(&name))?;
        let scope = e.free_vars();
        return Ok(match jex_core::reduce::normalize(&e, fuel) {
            Ok(n) => {
                let steps = session::plural(n.trace.len(), "step");
                say(format!("{} ({steps})", expr_to_string_in(&n.value, &scope, style)));
                OK
            }
            Err(f) => {
                say(format!("{f}"));
                FUEL
            }
        });
    }
    let decls = parse_file(&text).map_err(syntax(&name))?.decls;
    let outcomes = run_program(&decls, style, fuel);
    for o in &outcomes {
        if o.command == "normalize" || o.status != Status::Ok {
            for l in o.render() {
                say(l);
            }
        }
    }
    Ok(worst(&outcomes))
}

fn trace(expr: &str, fuel: usize, style: Style) -> Result<u8, CliError> {
    let e = parse_expr(expr).map_err(syntax("<expression>"))?;
    let (trace, exhausted) = match jex_core::reduce::normalize(&e, fuel) {
        Ok(n) => (n.trace, false),
        Err(f) => (f.trace, true),
    };
    for l in session::trace_lines(&e, &trace, &e.free_vars(), style) {
        say(l);
    }
    if exhausted {
        say(format!("fuel exhausted after {}", session::plural(trace.len(), "step")));
        return Ok(FUEL);
    }
    say(session::plural(trace.len(), "step"));
    Ok(OK)
}

fn translate(to: bool, text: &str, style: Style) -> Result<u8, CliError> {
    if to {
        let p = parse_prop(text).map_err(syntax("<proposition>"))?;
        say(to_lax(&p));
    } else {
        let p = parse_lax_prop(text).map_err(syntax("<proposition>"))?;
        say(prop_to_string(&from_lax(&p), style));
    }
    Ok(OK)
}

fn derive(builder: &str, args: &[String], style: Style) -> Result<u8, CliError> {
    let req = parse_derive(builder, &args.join(" ")).map_err(syntax("<arguments>"))?;
    let lines = session::derive_lines(&req, &Context::new(), style).map_err(CliError::Failed)?;
    for l in lines {
        say(l);
    }
    Ok(OK)
}

fn fuzz(args: &FuzzArgs, as_json: bool) -> u8 {
    let cfg = FuzzConfig {
        suite: args.suite,
        seed: args.seed,
        count: args.count,
        kinds: args.kind.kinds(),
        fuel: args.fuel,
        max_depth: args.max_depth,
    };
    let report = fuzz::run(&cfg);
    let program = report.counterexample.as_ref().map(|f| fuzz::counterexample_program(cfg.suite, f));
    if as_json {
        let doc = json!({
            "suite": cfg.suite.name(),
            "seed": cfg.seed,
            "count": cfg.count,
            "status": if report.failures() == 0 { "ok" } else { "counterexample" },
            "kinds": report.kinds.iter().map(|k| json!({
                "kind": k.kind.to_string(),
                "samples": k.samples,
                "failures": k.failing_seeds.len(),
                "failing_seeds": k.failing_seeds,
            })).collect::<Vec<_>>(),
            "counterexample": report.counterexample.as_ref().map(|f| json!({
                "seed": f.seed,
                "kind": f.kind.to_string(),
                "reason": f.reason,
                "program": program,
            })),
        });
        say(serde_json::to_string_pretty(&doc).expect("json values serialize"));
    } else {
        let end = cfg.seed.saturating_add(cfg.count);
        say(format!("{} over seeds {}..{}", cfg.suite, cfg.seed, end));
        for k in &report.kinds {
            let mut line = format!("{:<5} {} samples, {}", k.kind.to_string(), k.samples, session::plural(k.failing_seeds.len(), "failure"));
            if let Some(first) = k.failing_seeds.first() {
                line.push_str(&format!(" (first at seed {first})"));
            }
            say(line);
        }
        if let Some(p) = program {
            say("shrunk counterexample:");
            say(p.trim_end());
        }
    }
    if report.failures() == 0 { OK } else { COUNTEREXAMPLE }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style { unicode: cli.unicode, resugar: cli.resugar };
    let result = match &cli.command {
        Command::Check { file, fuel } => check(file, *fuel, style, cli.json),
        Command::Normalize { file, fuel } => normalize(file, *fuel, style),
        Command::Trace { expr, fuel } => trace(expr, *fuel, style),
        Command::Translate { to_lax, prop, .. } => translate(*to_lax, prop, style),
        Command::Derive { builder, args } => derive(builder, args, style),
        Command::Fuzz(args) => Ok(fuzz(args, cli.json)),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
