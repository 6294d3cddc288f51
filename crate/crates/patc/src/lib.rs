//! The `patc` command line: checking, compiling, evaluating and normalizing
//! programs with algebraic patterns, and running the property suites.
//!
//! Results go to `out`; diagnostics go to `err` as `file:line:col: level:
//! message`. Exit codes: 0 success, 1 a check or evaluation failed, 2 usage,
//! I/O or parse errors.

mod check;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use patalg::compiler::{compile_case, DecisionTree, FreshSupply};
use patalg::normalize::{dnf, format_dnf, nnf, to_ndnf};
use patalg::oracle::{run_suite, suites_named, SuiteConfig, SUITES};
use patalg::semantics::{eval_with, EvalOutcome, Expression, DEFAULT_FUEL};
use patalg::syntax::{parse_mapped, parse_pattern, parse_values, validate, Program, SourceMap};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "patc", version, about = "Order-independent pattern matching with algebraic patterns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report non-wellformed cases, overlapping clauses and, as notes,
    /// values that fall through to a default clause.
    Check {
        file: PathBuf,
        /// Also infer and check the types of all definitions.
        #[arg(long)]
        typed: bool,
        /// Use the data declarations when deciding overlap.
        #[arg(long, conflicts_with = "untyped")]
        type_aware_overlap: bool,
        /// Admit undeclared constructors; skips exhaustiveness.
        #[arg(long, conflicts_with = "typed")]
        untyped: bool,
    },
    /// Print a decision tree per definition.
    Compile {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write to this file instead of standard output.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        #[arg(long)]
        untyped: bool,
    },
    /// Evaluate a definition applied to values, or `main`.
    Eval {
        file: PathBuf,
        /// Definition to call; `main` when omitted.
        #[arg(long)]
        entry: Option<String>,
        /// Comma-separated argument values.
        #[arg(long, default_value = "")]
        args: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        #[arg(long)]
        untyped: bool,
    },
    /// Print a normal form of a pattern.
    Norm {
        #[arg(long)]
        pattern: String,
        #[arg(long, value_enum, default_value_t = Stage::Ndnf)]
        stage: Stage,
    },
    /// Run the seeded property suites.
    Fuzz {
        #[arg(long, default_value_t = SuiteConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = SuiteConfig::default().depth)]
        depth: usize,
        #[arg(long, default_value_t = SuiteConfig::default().cases)]
        cases: usize,
        #[arg(long, default_value = "all", value_parser = suite_name)]
        suite: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Stage {
    Nnf,
    Dnf,
    Ndnf,
}

fn suite_name(s: &str) -> Result<String, String> {
    suites_named(s).map(|_| s.to_string()).map_err(|_| format!("expected `all` or one of {}", SUITES.join(", ")))
}

/// Runs `patc` with `args` (the program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Check { file, typed, type_aware_overlap, untyped } => {
            load(&file, untyped, err).map(|(prog, map, name)| {
                let opts = check::Options { typed, type_aware_overlap, untyped };
                check::check(&prog, &map, &name, opts, out, err)
            })
        }
        Command::Compile { file, format, output, untyped } => {
            load(&file, untyped, err).map(|(prog, map, name)| compile(&prog, &map, &name, format, output, out, err))
        }
        Command::Eval { file, entry, args, fuel, untyped } => {
            load(&file, untyped, err).map(|(prog, _, name)| evaluate(&prog, &name, entry, &args, fuel, out, err))
        }
        Command::Norm { pattern, stage } => Ok(norm(&pattern, stage, out, err)),
        Command::Fuzz { seed, depth, cases, suite } => Ok(fuzz(SuiteConfig { seed, depth, cases }, &suite, out, err)),
    };
    result.unwrap_or_else(|code| code)
}

/// Reads, parses and validates a program. `Err` carries the exit code after
/// the diagnostics have been written.
fn load(file: &PathBuf, untyped: bool, err: &mut dyn Write) -> Result<(Program, SourceMap, String), i32> {
    let name = file.display().to_string();
    let src = fs::read_to_string(file).map_err(|e| {
        let _ = writeln!(err, "{name}: error: cannot read file: {e}");
        EXIT_USAGE
    })?;
    let (prog, map) = parse_mapped(&src).map_err(|e| {
        let _ = writeln!(err, "{name}:{}: error: {}", e.pos, e.message);
        EXIT_USAGE
    })?;
    let diags = validate(&prog, &map, untyped);
    if !diags.is_empty() {
        for d in &diags {
            let _ = writeln!(err, "{name}:{}: error: {}", d.pos, d.message);
        }
        return Err(EXIT_FAIL);
    }
    Ok((prog, map, name))
}

fn tree_of(body: &Expression) -> Result<DecisionTree, patalg::compiler::CompileError> {
    match body {
        Expression::Case(case) => compile_case(case, &mut FreshSupply::new()),
        other => Ok(DecisionTree::Leaf(other.clone())),
    }
}

fn compile(
    prog: &Program,
    map: &SourceMap,
    name: &str,
    format: Format,
    output: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let mut items: Vec<(String, Vec<String>, DecisionTree)> = Vec::new();
    let mut failed = false;
    let bodies = prog
        .defs
        .iter()
        .zip(&map.defs)
        .map(|(d, span)| (d.name.clone(), d.params.clone(), &d.body, span.pos))
        .chain(prog.main.iter().zip(&map.main).map(|(m, span)| ("main".to_string(), vec![], m, span.pos)));
    for (def, params, body, pos) in bodies {
        match tree_of(body) {
            Ok(tree) => items.push((def, params, tree)),
            Err(e) => {
                let _ = writeln!(err, "{name}:{pos}: error: cannot compile `{def}`: {e}");
                failed = true;
            }
        }
    }
    if failed {
        return EXIT_FAIL;
    }
    let text = match format {
        Format::Text => items
            .iter()
            .map(|(def, params, tree)| {
                // `main` is a keyword, so no definition shares its name.
                if def == "main" {
                    format!("main := {tree};\n")
                } else {
                    format!("def {def}({}) := {tree};\n", params.join(", "))
                }
            })
            .collect::<String>(),
        Format::Json => {
            let rows: Vec<String> = items
                .iter()
                .map(|(def, params, tree)| {
                    format!(
                        "  {{\"def\":{},\"params\":{},\"tree\":{}}}",
                        serde_json::to_string(def).expect("string serializes"),
                        serde_json::to_string(params).expect("strings serialize"),
                        tree.to_json()
                    )
                })
                .collect();
            if rows.is_empty() {
                "[]\n".to_string()
            } else {
                format!("[\n{}\n]\n", rows.join(",\n"))
            }
        }
    };
    match output {
        Some(path) => match fs::write(&path, text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "{}: error: cannot write file: {e}", path.display());
                EXIT_USAGE
            }
        },
        None => {
            let _ = write!(out, "{text}");
            EXIT_OK
        }
    }
}

fn evaluate(
    prog: &Program,
    name: &str,
    entry: Option<String>,
    args: &str,
    fuel: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let values = match parse_values(args) {
        Ok(vs) => vs,
        Err(e) => {
            let _ = writeln!(err, "--args:{}: error: {}", e.pos, e.message);
            return EXIT_USAGE;
        }
    };
    let expr = match entry {
        Some(f) => {
            let Some(def) = prog.def(&f) else {
                let _ = writeln!(err, "{name}: error: no definition named `{f}`");
                return EXIT_USAGE;
            };
            if def.params.len() != values.len() {
                let _ = writeln!(
                    err,
                    "{name}: error: `{f}` expects {} arguments, got {}",
                    def.params.len(),
                    values.len()
                );
                return EXIT_USAGE;
            }
            Expression::call(f, values.iter().map(Expression::from_value).collect())
        }
        None => match &prog.main {
            Some(m) if values.is_empty() => m.clone(),
            Some(_) => {
                let _ = writeln!(err, "{name}: error: `main` takes no arguments");
                return EXIT_USAGE;
            }
            None => {
                let _ = writeln!(err, "{name}: error: no `main`; pass --entry");
                return EXIT_USAGE;
            }
        },
    };
    match eval_with(&expr, &prog.defs_map(), fuel) {
        EvalOutcome::Value(v) => {
            let _ = writeln!(out, "{v}");
            EXIT_OK
        }
        other => {
            let _ = writeln!(err, "{name}: error: evaluation {other}");
            EXIT_FAIL
        }
    }
}

fn norm(pattern: &str, stage: Stage, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let p = match parse_pattern(pattern) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "--pattern:{}: error: {}", e.pos, e.message);
            return EXIT_USAGE;
        }
    };
    let text = match stage {
        Stage::Nnf => nnf(&p).to_string(),
        Stage::Dnf => format_dnf(&dnf(&nnf(&p))),
        Stage::Ndnf => to_ndnf(&p).to_string(),
    };
    let _ = writeln!(out, "{text}");
    EXIT_OK
}

fn fuzz(cfg: SuiteConfig, suite: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let names = match suites_named(suite) {
        Ok(names) => names,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut code = EXIT_OK;
    for n in names {
        match run_suite(n, &cfg) {
            Ok(report) => {
                let _ = writeln!(out, "{report}");
                if !report.passed() {
                    code = EXIT_FAIL;
                }
            }
            Err(e) => {
                let _ = writeln!(err, "error: suite {n}: {e}");
                return EXIT_USAGE;
            }
        }
    }
    code
}
