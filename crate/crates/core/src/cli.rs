//! Command-line front end. [`run`] takes the arguments and output streams so
//! it can be driven from tests; the binary only forwards to it.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cfg::{chain_bound, parse, parse_with_fuel, Grammar, SemValue};
use crate::error::Error;
use crate::handlers::{run_with_fuel, FuelOutcome};
use crate::regex::structural::match_structural;
use crate::regex::{derivative, dmatch_run, dmatch_run_with_fuel, has_no_star, nullable, parse_regex, ParseTree};
use crate::value::Value;

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_NONE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FUEL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "freeparse", version, about = "Regex matching and CFG parsing with effect-based parsers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print every parse tree of INPUT for REGEX.
    Match {
        regex: String,
        input: String,
        #[arg(long, value_enum, default_value_t = Engine::Derivative)]
        engine: Engine,
        /// Recursive-call budget; required by the structural engine when the regex has a star.
        #[arg(long)]
        fuel: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print REGEX and its derivative by each character of STRING in turn.
    Derive { regex: String, string: String },
    /// Print the left-recursion links and chain bound of a grammar file.
    CfgCheck { path: String },
    /// Print every parse of all of INPUT from START.
    CfgParse {
        path: String,
        start: String,
        input: String,
        /// Recursive-call budget replacing the computed one; allows cyclic grammars.
        #[arg(long)]
        fuel: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, clap::Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Sexpr)]
    format: Format,
    /// Print at most this many results.
    #[arg(long)]
    max_results: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Structural,
    Derivative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Sexpr,
    JsonLines,
}

/// Runs one command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_FOUND };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Match { regex, input, engine, fuel, output } => {
            cmd_match(&regex, &input, engine, fuel, &output, out, err)
        }
        Command::Derive { regex, string } => cmd_derive(&regex, &string, out),
        Command::CfgCheck { path } => cmd_cfg_check(&path, out),
        Command::CfgParse { path, start, input, fuel, output } => {
            cmd_cfg_parse(&path, &start, &input, fuel, &output, out, err)
        }
    };
    match result {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CyclicGrammar(_) => EXIT_NONE,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

type CmdResult = Result<i32, Failure>;

fn exhausted() -> Failure {
    Failure { code: EXIT_FUEL, message: "fuel exhausted".into() }
}

fn cmd_match(
    regex: &str,
    input: &str,
    engine: Engine,
    fuel: Option<usize>,
    output: &OutputArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let r = parse_regex(regex)?;
    let trees: Vec<ParseTree> = match (engine, fuel) {
        (Engine::Derivative, None) => dmatch_run(&r, input)?,
        (Engine::Derivative, Some(fuel)) => match dmatch_run_with_fuel(&r, input, fuel)? {
            FuelOutcome::Done(rs) => trees_of(rs)?,
            FuelOutcome::Exhausted => return Err(exhausted()),
        },
        (Engine::Structural, None) if !has_no_star(&r) => {
            writeln!(err, "warning: the structural matcher may not terminate on a star; pass --fuel")?;
            return Ok(EXIT_USAGE);
        }
        (Engine::Structural, fuel) => {
            let call = Value::pair(r.into(), Value::str(input));
            match run_with_fuel(&match_structural(), &call, fuel.unwrap_or(0), None)? {
                FuelOutcome::Done(rs) => trees_of(rs)?,
                FuelOutcome::Exhausted => return Err(exhausted()),
            }
        }
    };
    let lines: Vec<String> = trees
        .iter()
        .map(|t| match output.format {
            Format::Sexpr => t.to_string(),
            Format::JsonLines => t.to_json().to_string(),
        })
        .collect();
    emit(&lines, output, out, err)
}

fn trees_of(rs: Vec<(Value, String)>) -> Result<Vec<ParseTree>, Failure> {
    rs.into_iter()
        .map(|(v, _)| match v {
            Value::TreeV(t) => Ok(t),
            other => Err(Error::Shape { expected: "TreeV", got: other.to_string() }.into()),
        })
        .collect()
}

fn emit(lines: &[String], output: &OutputArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let shown = output.max_results.map_or(lines.len(), |m| m.min(lines.len()));
    for line in &lines[..shown] {
        writeln!(out, "{line}")?;
    }
    if shown < lines.len() {
        writeln!(err, "showing {shown} of {} results", lines.len())?;
    }
    Ok(if lines.is_empty() { EXIT_NONE } else { EXIT_FOUND })
}

fn cmd_derive(regex: &str, string: &str, out: &mut dyn Write) -> CmdResult {
    let mut r = parse_regex(regex)?;
    writeln!(out, "{r}")?;
    for c in string.chars() {
        r = derivative(&r, c);
        writeln!(out, "{r}")?;
    }
    let verdict = if nullable(&r).is_some() { "yes" } else { "no" };
    writeln!(out, "nullable: {verdict}")?;
    Ok(EXIT_FOUND)
}

fn load_grammar(path: &str) -> Result<Grammar, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure { code: EXIT_USAGE, message: format!("cannot read {path}: {e}") })?;
    Ok(Grammar::parse(&text)?)
}

fn cmd_cfg_check(path: &str, out: &mut dyn Write) -> CmdResult {
    let g = load_grammar(path)?;
    let report = chain_bound(&g);
    for l in &report.links {
        writeln!(out, "link: {l}")?;
    }
    match (&report.bound, &report.cycle) {
        (Some(b), _) => {
            writeln!(out, "bound: {b}")?;
            Ok(EXIT_FOUND)
        }
        (None, cycle) => {
            let names: Vec<&str> = cycle.iter().flatten().map(|n| n.name()).collect();
            writeln!(out, "cyclic: {}", names.join(" -> "))?;
            Ok(EXIT_NONE)
        }
    }
}

fn cmd_cfg_parse(
    path: &str,
    start: &str,
    input: &str,
    fuel: Option<usize>,
    output: &OutputArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let g = load_grammar(path)?;
    let a = g.nonterminal(start)?;
    let parses: Vec<(SemValue, String)> = match fuel {
        None => parse(&g, &a, input)?,
        Some(fuel) => match parse_with_fuel(&g, &a, input, fuel)? {
            FuelOutcome::Done(rs) => rs
                .into_iter()
                .map(|(v, rest)| match v {
                    Value::NodeV(n) => Ok((n, rest)),
                    other => Err(Failure::from(Error::Shape { expected: "NodeV", got: other.to_string() })),
                })
                .collect::<Result<_, _>>()?,
            FuelOutcome::Exhausted => return Err(exhausted()),
        },
    };
    let lines: Vec<String> = parses
        .iter()
        .filter(|(_, rest)| rest.is_empty())
        .map(|(v, _)| match output.format {
            Format::Sexpr => v.to_string(),
            Format::JsonLines => v.to_json().to_string(),
        })
        .collect();
    emit(&lines, output, out, err)
}
