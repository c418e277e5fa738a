use std::fmt;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

/// Outcome class of a command; the discriminant is the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass = 0,
    Failed = 3,
    Unresolved = 4,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Failed => "failed",
            Status::Unresolved => "unresolved",
        })
    }
}

/// Input that could not be used: unreadable files, malformed JSON, bad
/// parameters. Exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub fn input_error(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub summary: String,
    pub report: Value,
    /// Extra lines for text output.
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str, status: Status, summary: impl Into<String>, report: impl Serialize) -> Self {
        let report = serde_json::to_value(report).expect("reports serialize to JSON");
        Report { command: command.to_string(), status, summary: summary.into(), report, lines: Vec::new() }
    }

    pub fn with_lines(mut self, lines: Vec<String>) -> Self {
        self.lines = lines;
        self
    }
}

/// What a command produced: a report, or a raw artifact for `gen`.
pub enum Output {
    Report(Report),
    Artifact(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn emit(out: &mut impl Write, output: &Output, format: Format) -> std::io::Result<i32> {
    match output {
        Output::Artifact(text) => {
            writeln!(out, "{text}")?;
            Ok(0)
        }
        Output::Report(r) => {
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(r).expect("reports serialize to JSON"))?,
                Format::Text => {
                    for line in &r.lines {
                        writeln!(out, "{line}")?;
                    }
                    writeln!(out, "{}: {}", r.status, r.summary)?;
                }
            }
            Ok(r.status as i32)
        }
    }
}
