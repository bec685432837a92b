//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation errors present, 2 usage, I/O or
//! parse failure. Diagnostics go to `stderr`; artifacts go to files or
//! `stdout`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Parser, Subcommand};

use crate::audit::{parse_audit, parse_date, scaffold_audit_on, serialize_audit, validate, OutcomeScale};
use crate::benchmark::{canonical_benchmark, load_benchmark, Benchmark};
use crate::layout::{layout, LayoutError};
use crate::report::{diff, summarize, ReportError, ReportFormat};
use crate::svg::render_svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "syscard",
    version,
    about = "Audit systems against an accountability benchmark and render system cards"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a blank audit with one unevaluated entry per criterion
    Init {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "unnamed system")]
        system: String,
        #[arg(long, default_value = "likert5")]
        scale: OutcomeScale,
        #[arg(long)]
        benchmark: Option<PathBuf>,
        /// Audit date (YYYY-MM-DD); defaults to today
        #[arg(long, value_parser = parse_date_arg)]
        date: Option<NaiveDate>,
    },
    /// Check an audit against the benchmark
    Validate {
        file: PathBuf,
        /// Treat incomplete or unjustified entries as errors
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        benchmark: Option<PathBuf>,
    },
    /// Render the system card as SVG
    Render {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        benchmark: Option<PathBuf>,
    },
    /// Print an outcome summary
    Report {
        file: PathBuf,
        #[arg(long, default_value = "text")]
        format: ReportFormat,
        #[arg(long)]
        benchmark: Option<PathBuf>,
    },
    /// Compare two audits entry by entry
    Diff {
        old: PathBuf,
        new: PathBuf,
        #[arg(long, default_value = "text")]
        format: ReportFormat,
    },
    /// Show or export the benchmark
    Benchmark {
        #[command(subcommand)]
        action: BenchmarkAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum BenchmarkAction {
    /// Print the criteria as a table
    Show {
        #[arg(long)]
        benchmark: Option<PathBuf>,
    },
    /// Write the benchmark as JSON
    Export {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        benchmark: Option<PathBuf>,
    },
}

fn parse_date_arg(s: &str) -> Result<NaiveDate, String> {
    parse_date(s).map_err(|e| e.to_string())
}

/// A failed command: exit code plus message for stderr.
struct Failure(i32, String);

impl Failure {
    fn io(path: &Path, err: std::io::Error) -> Self {
        Failure(EXIT_FAILURE, format!("{}: {err}", path.display()))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

fn load_bench(path: Option<&Path>) -> Result<Benchmark, Failure> {
    match path {
        None => Ok(canonical_benchmark()),
        Some(p) => load_benchmark(&read(p)?).map_err(|e| Failure(EXIT_FAILURE, format!("{}: {e}", p.display()))),
    }
}

fn load_audit(path: &Path) -> Result<crate::audit::AuditDocument, Failure> {
    parse_audit(&read(path)?).map_err(|e| Failure(EXIT_FAILURE, format!("{}: {e}", path.display())))
}

fn benchmark_table(b: &Benchmark) -> String {
    let width = b.aspects().iter().map(|a| a.name.chars().count()).max().unwrap_or(0);
    let mut s = format!("{} {} ({} criteria)\n", b.id(), b.version(), b.len());
    for category in b.categories() {
        s.push_str(&format!("\n{}\n", category.name));
        for aspect in b.aspects() {
            for c in b.cell_by_index(category.index, aspect.index) {
                s.push_str(&format!("  {}  {:<width$}  {}\n", c.code, aspect.name, c.name));
            }
        }
    }
    s
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let emit =
        |w: &mut dyn Write, text: &str| w.write_all(text.as_bytes()).map_err(|e| Failure(EXIT_FAILURE, e.to_string()));
    match command {
        Command::Init { out: path, system, scale, benchmark, date } => {
            let b = load_bench(benchmark.as_deref())?;
            let date = date.unwrap_or_else(|| chrono::Local::now().date_naive());
            let doc = scaffold_audit_on(&b, &system, scale, date);
            write(&path, &serialize_audit(&doc))?;
            emit(err, &format!("wrote {} ({} entries)\n", path.display(), doc.entries.len()))?;
            Ok(EXIT_OK)
        }
        Command::Validate { file, strict, benchmark } => {
            let b = load_bench(benchmark.as_deref())?;
            let doc = load_audit(&file)?;
            let report = validate(&doc, &b, strict);
            emit(err, &format!("{report}\n"))?;
            Ok(if report.is_valid() { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Render { file, out: path, benchmark } => {
            let b = load_bench(benchmark.as_deref())?;
            let doc = load_audit(&file)?;
            match layout::<f64>(&b, &doc) {
                Ok(l) => {
                    write(&path, &render_svg(&l))?;
                    emit(err, &format!("wrote {}\n", path.display()))?;
                    Ok(EXIT_OK)
                }
                Err(LayoutError::Invalid(report)) => {
                    emit(err, &format!("{report}\n"))?;
                    Ok(EXIT_INVALID)
                }
                Err(e) => Err(Failure(EXIT_FAILURE, e.to_string())),
            }
        }
        Command::Report { file, format, benchmark } => {
            let b = load_bench(benchmark.as_deref())?;
            let doc = load_audit(&file)?;
            match summarize(&doc, &b) {
                Ok(summary) => {
                    emit(out, &summary.render(format))?;
                    Ok(EXIT_OK)
                }
                Err(ReportError::Invalid(report)) => {
                    emit(err, &format!("{report}\n"))?;
                    Ok(EXIT_INVALID)
                }
                Err(e) => Err(Failure(EXIT_FAILURE, e.to_string())),
            }
        }
        Command::Diff { old, new, format } => {
            let a = load_audit(&old)?;
            let b = load_audit(&new)?;
            let d = diff(&a, &b).map_err(|e| Failure(EXIT_FAILURE, e.to_string()))?;
            emit(out, &d.render(format))?;
            Ok(EXIT_OK)
        }
        Command::Benchmark { action: BenchmarkAction::Show { benchmark } } => {
            let b = load_bench(benchmark.as_deref())?;
            emit(out, &benchmark_table(&b))?;
            Ok(EXIT_OK)
        }
        Command::Benchmark { action: BenchmarkAction::Export { out: path, benchmark } } => {
            let b = load_bench(benchmark.as_deref())?;
            match path {
                Some(p) => {
                    write(&p, &b.to_json())?;
                    emit(err, &format!("wrote {}\n", p.display()))?;
                }
                None => emit(out, &b.to_json())?,
            }
            Ok(EXIT_OK)
        }
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_FAILURE
                }
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure(code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("syscard").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_command_is_usage_error() {
        let (code, _, err) = run_args(&["frobnicate"]);
        assert_eq!(code, EXIT_FAILURE);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        assert_eq!(run_args(&["validate", "x.json", "--lenient"]).0, EXIT_FAILURE);
        assert_eq!(run_args(&["report", "x.json", "--format", "pdf"]).0, EXIT_FAILURE);
        assert_eq!(run_args(&["init", "--out", "x", "--date", "2024-02-30"]).0, EXIT_FAILURE);
    }

    #[test]
    fn missing_file_is_failure() {
        let (code, _, err) = run_args(&["validate", "/nonexistent/audit.json"]);
        assert_eq!(code, EXIT_FAILURE);
        assert!(err.starts_with("error: /nonexistent/audit.json"));
    }

    #[test]
    fn help_succeeds() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("benchmark"));
    }

    #[test]
    fn benchmark_show_lists_all() {
        let (code, out, _) = run_args(&["benchmark", "show"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("sab-v1 1.0 (56 criteria)"));
        assert!(out.contains("C345  System  Mechanism, Feedback"));
    }
}
