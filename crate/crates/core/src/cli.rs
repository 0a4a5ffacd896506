//! The `nfr4` command line: parse, check, analyze, report.
//!
//! Exit codes: 0 success, 1 `check` found errors (or warnings under
//! `--strict`), 2 model invalid for analysis, 3 analysis precondition
//! violated (no NFRs), 64 bad usage, 66 input unreadable.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Read;

use clap::{Parser, ValueEnum};

use crate::analysis::{
    build_traceability_matrix, compute_mcr, rank_criticality, score_checklist, AnalysisError, ChecklistSubject,
    ThresholdMode,
};
use crate::dsl::parse;
use crate::lint::{validate_structure, Diagnostic, Severity};
use crate::model::Model;
use crate::report::{self, ReportBundle, TableOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID_MODEL: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_NO_INPUT: i32 = 66;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Parse and validate structure.
    Check,
    /// Completeness (MCR) and checklist validation metric.
    Metrics,
    /// NFR x goal traceability table.
    Matrix,
    /// Criticality scores and the critical set.
    Critical,
    /// Everything above in one document.
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Markdown,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(name = "nfr4", version, about = "Four-layer non-functional requirements analysis")]
pub struct CliConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Model file (`.nfr4`), or `-` for standard input.
    pub input_path: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// `mean`, `top_k=K` or `absolute=T`.
    #[arg(long = "mode", default_value = "mean")]
    pub threshold_mode: ThresholdMode,
    /// Treat warnings as failures.
    #[arg(long)]
    pub strict: bool,
    /// Print the goal legend below the matrix (default).
    #[arg(long, overrides_with = "no_legend")]
    legend: bool,
    #[arg(long = "no-legend", overrides_with = "legend")]
    no_legend: bool,
}

impl CliConfig {
    pub fn new(command: Command, input_path: impl Into<String>) -> Self {
        CliConfig {
            command,
            input_path: input_path.into(),
            format: OutputFormat::Text,
            threshold_mode: ThresholdMode::Mean,
            strict: false,
            legend: true,
            no_legend: false,
        }
    }

    pub fn show_legend(&self) -> bool {
        !self.no_legend
    }

    pub fn with_legend(mut self, on: bool) -> Self {
        self.legend = on;
        self.no_legend = !on;
        self
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn exit(code: i32, stdout: String, stderr: String) -> Self {
        Outcome { code, stdout, stderr }
    }
}

/// Parse `args` (including the program name) and run.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match CliConfig::try_parse_from(args) {
        Ok(config) => run(&config),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome::exit(EXIT_USAGE, String::new(), text)
            } else {
                Outcome::exit(EXIT_OK, text, String::new())
            }
        }
    }
}

pub fn run(config: &CliConfig) -> Outcome {
    let source = if config.input_path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        std::fs::read(&config.input_path).map(|b| String::from_utf8_lossy(&b).into_owned())
    };
    match source {
        Ok(text) => run_source(config, &text),
        Err(e) => Outcome::exit(
            EXIT_NO_INPUT,
            String::new(),
            format!("error: cannot read {}: {e}\n", config.input_path),
        ),
    }
}

fn input_name(config: &CliConfig) -> &str {
    if config.input_path == "-" {
        "<stdin>"
    } else {
        &config.input_path
    }
}

fn format_diagnostic(name: &str, d: &Diagnostic) -> String {
    let loc = d.source_line.map(|l| format!("{name}:{l}")).unwrap_or_else(|| name.to_string());
    format!("{loc}: {}[{}]: {}\n", d.severity, d.rule_id, d.message)
}

/// Run against already-loaded source text.
pub fn run_source(config: &CliConfig, source: &str) -> Outcome {
    let name = input_name(config);
    let mut model = match parse(source) {
        Ok(m) => m,
        Err(errors) => {
            let stderr = errors.0.iter().map(|e| format!("{name}:{e}\n")).collect();
            let code = if config.command == Command::Check {
                EXIT_CHECK_FAILED
            } else {
                EXIT_INVALID_MODEL
            };
            return Outcome::exit(code, String::new(), stderr);
        }
    };
    model.source_path = Some(config.input_path.clone());

    let diagnostics = validate_structure(&model);
    let errors = diagnostics.iter().filter(|d| d.severity == Severity::Error).count();
    let warnings = diagnostics.len() - errors;
    let gated = errors > 0 || (config.strict && warnings > 0);

    if config.command == Command::Check {
        let stderr: String = diagnostics.iter().map(|d| format_diagnostic(name, d)).collect();
        let stdout = format!("{name}: {errors} error(s), {warnings} warning(s)\n");
        let code = if gated { EXIT_CHECK_FAILED } else { EXIT_OK };
        return Outcome::exit(code, stdout, stderr);
    }

    if gated {
        let mut stderr: String = diagnostics.iter().map(|d| format_diagnostic(name, d)).collect();
        let _ = writeln!(stderr, "error: {name} fails structural checks; run `nfr4 check` for details");
        return Outcome::exit(EXIT_INVALID_MODEL, String::new(), stderr);
    }

    match analyze(config, &model) {
        Ok(stdout) => Outcome::exit(EXIT_OK, stdout, String::new()),
        Err(e) => {
            let code = match e {
                AnalysisError::InvalidModel(_) => EXIT_INVALID_MODEL,
                _ => EXIT_PRECONDITION,
            };
            Outcome::exit(code, String::new(), format!("error: {name}: {e}\n"))
        }
    }
}

fn analyze(config: &CliConfig, model: &Model) -> Result<String, AnalysisError> {
    let mode = config.threshold_mode;
    let json = config.format == OutputFormat::Json;
    match config.command {
        Command::Check => unreachable!("handled before analysis"),
        Command::Metrics => {
            let completeness = compute_mcr(model)?;
            let checklist = score_checklist(model, &ChecklistSubject::WholeModel)?;
            if json {
                return Ok(report::metrics_json(&completeness, &checklist));
            }
            Ok(format!(
                "{}\nvalidation: {}\n",
                completeness.formula_line(),
                report::validation_line(&checklist)
            ))
        }
        Command::Matrix => {
            let matrix = build_traceability_matrix(model)?;
            let criticality = rank_criticality(&matrix, mode)?;
            if json {
                return Ok(report::matrix_json(&matrix));
            }
            report::render_matrix_table(
                &matrix,
                &criticality,
                TableOptions {
                    legend: config.show_legend(),
                },
            )
        }
        Command::Critical => {
            let matrix = build_traceability_matrix(model)?;
            let criticality = rank_criticality(&matrix, mode)?;
            if json {
                return Ok(report::criticality_json(&criticality));
            }
            Ok(report::render_criticality(&matrix, &criticality))
        }
        Command::Report => {
            let bundle = ReportBundle::build(model, mode)?;
            Ok(match config.format {
                OutputFormat::Json => report::export_json(&bundle),
                OutputFormat::Text => report::render_summary(&bundle, report::Format::Text),
                OutputFormat::Markdown => report::render_summary(&bundle, report::Format::Markdown),
            })
        }
    }
}
