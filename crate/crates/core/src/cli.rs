//! The `vetgate` command line.
//!
//! Exit codes: 0 when every check passes, 1 when data fails validation (or
//! benchmark implementations disagree), 2 for usage and IO errors.

use std::ffi::OsString;
use std::fs;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{self, Implementation, Scenario, ScenarioId, DEFAULT_N, DEFAULT_REPS, DEFAULT_WARMUP};
use crate::dsl::{eval_rule, parse_rule};
use crate::engine::CheckOutcome;
use crate::ingest::{parse_column, read_csv};
use crate::schema::{validate, Schema};
use crate::value::TypeTag;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "vetgate", version, about = "Validate values and tables with compact rules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check each column of a CSV file against a schema of rules.
    Validate {
        /// Schema file of `column = "rule"` lines.
        #[arg(long)]
        schema: PathBuf,
        /// CSV file with a header row.
        data: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Report data columns that the schema does not mention.
        #[arg(long)]
        strict: bool,
    },
    /// Check literal values against a single rule.
    Rule {
        #[arg(long)]
        rule: String,
        /// Element type; inferred from the values when omitted.
        #[arg(long = "type", value_enum)]
        ty: Option<CellType>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(allow_hyphen_values = true)]
        values: Vec<String>,
    },
    /// Time the engine against a materializing baseline.
    Bench {
        /// Length of the long-vector scenarios.
        #[arg(long, default_value_t = DEFAULT_N, value_parser = positive)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_REPS, value_parser = positive)]
        reps: usize,
        #[arg(long, default_value_t = DEFAULT_WARMUP)]
        warmup: usize,
        /// Run one scenario, by id or by its S1..S4 prefix.
        #[arg(long)]
        scenario: Option<ScenarioId>,
        /// Write every timing record to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the per-group summary to this CSV file.
        #[arg(long)]
        summary_out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CellType {
    Bool,
    Int,
    Float,
    Str,
}

impl From<CellType> for TypeTag {
    fn from(t: CellType) -> Self {
        match t {
            CellType::Bool => TypeTag::Bool,
            CellType::Int => TypeTag::Int,
            CellType::Float => TypeTag::Float,
            CellType::Str => TypeTag::Str,
        }
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// An error already formatted for stderr, with its exit code.
struct Exit(i32, String);

fn usage(msg: impl Into<String>) -> Exit {
    Exit(EXIT_USAGE, msg.into())
}

/// Whether to emit ANSI color on stdout.
pub fn color_enabled() -> bool {
    std::env::var_os("VETGATE_NO_COLOR").is_none() && std::io::stdout().is_terminal()
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = if color { e.render().ansi().to_string() } else { e.render().to_string() };
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate {
            schema,
            data,
            format,
            strict,
        } => cmd_validate(&schema, &data, format, strict, color, out),
        Command::Rule {
            rule,
            ty,
            format,
            values,
        } => cmd_rule(&rule, &values, ty.map(TypeTag::from), format, out),
        Command::Bench {
            n,
            reps,
            warmup,
            scenario,
            out: records_path,
            summary_out,
        } => cmd_bench(n, reps, warmup, scenario, records_path.as_deref(), summary_out.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "vetgate: {msg}");
            code
        }
    }
}

fn read_text(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn cmd_validate(
    schema_path: &Path,
    data_path: &Path,
    format: Format,
    strict: bool,
    color: bool,
    out: &mut dyn Write,
) -> Result<i32, Exit> {
    let mut schema = Schema::parse(&read_text(schema_path)?)
        .map_err(|e| usage(format!("{}: {e}", schema_path.display())))?;
    schema.allow_extra_columns = !strict;
    let table = read_csv(&read_text(data_path)?).map_err(|e| usage(format!("{}: {e}", data_path.display())))?;
    let report = validate(&schema, &table, &data_path.display().to_string());
    let text = match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.render_text(color),
    };
    out.write_all(text.as_bytes())
        .map_err(|e| usage(format!("cannot write report: {e}")))?;
    Ok(if report.passed { EXIT_OK } else { EXIT_FAIL })
}

#[derive(Serialize)]
struct RuleReport<'a> {
    rule: &'a str,
    values: usize,
    passed: bool,
    message: Option<&'a str>,
}

fn cmd_rule(
    rule: &str,
    values: &[String],
    hint: Option<TypeTag>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, Exit> {
    let parsed = parse_rule(rule).map_err(|e| usage(format!("invalid rule {e}\n{}", e.diagram(rule))))?;
    let x = parse_column(values, hint).map_err(|e| usage(e.to_string()))?;
    let outcome = eval_rule(&x, &parsed);
    let text = match format {
        Format::Text => format!("{}\n", outcome),
        Format::Json => {
            let report = RuleReport {
                rule,
                values: values.len(),
                passed: outcome.is_ok(),
                message: outcome.message(),
            };
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
    };
    out.write_all(text.as_bytes())
        .map_err(|e| usage(format!("cannot write result: {e}")))?;
    Ok(match outcome {
        CheckOutcome::Ok => EXIT_OK,
        CheckOutcome::Fail(_) => EXIT_FAIL,
    })
}

fn cmd_bench(
    n: usize,
    reps: usize,
    warmup: usize,
    scenario: Option<ScenarioId>,
    records_path: Option<&Path>,
    summary_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, Exit> {
    let ids: Vec<ScenarioId> = match scenario {
        Some(id) => vec![id],
        None => ScenarioId::ALL.to_vec(),
    };
    // open outputs first so a bad path fails before any timing
    let create = |p: &Path| fs::File::create(p).map_err(|e| usage(format!("cannot write {}: {e}", p.display())));
    let records_file = records_path.map(create).transpose()?;
    let summary_file = summary_path.map(create).transpose()?;

    let scenarios: Vec<Scenario> = ids.into_iter().map(|id| Scenario::new(id, n)).collect();
    let records = match bench::run_benchmark(&scenarios, &Implementation::ALL, reps, warmup) {
        Ok(r) => r,
        Err(e @ bench::BenchError::Disagreement { .. }) => return Err(Exit(EXIT_FAIL, e.to_string())),
        Err(e) => return Err(usage(e.to_string())),
    };
    let summary = bench::summarize(&records).map_err(|e| usage(e.to_string()))?;
    let io_err = |e: std::io::Error| usage(format!("cannot write benchmark output: {e}"));
    if let Some(f) = records_file {
        bench::write_records(std::io::BufWriter::new(f), &records).map_err(io_err)?;
    }
    if let Some(f) = summary_file {
        bench::write_summary(std::io::BufWriter::new(f), &summary).map_err(io_err)?;
    }
    bench::write_summary(&mut *out, &summary).map_err(io_err)?;
    Ok(EXIT_OK)
}
