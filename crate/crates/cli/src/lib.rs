//! Command implementations behind the `gaudinqq` binary. Each command maps
//! input text and [`Settings`] to an [`Outcome`]: a JSON report, a pass
//! flag and human-readable summary lines.

pub mod commands;
pub mod scenario;

use std::fmt;

use serde_json::Value;

pub use commands::{cmd_orbit, cmd_report, cmd_solve, cmd_verify, cmd_wronskian};
pub use scenario::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Solve,
    Verify,
    Orbit,
    Wronskian,
    Report,
}

/// Command-line overrides.
#[derive(Clone, Debug)]
pub struct Settings {
    pub mode: Option<Mode>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub weyl_cap: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            mode: None,
            tol: None,
            seed: None,
            weyl_cap: gaudinqq::cartan::DEFAULT_WEYL_CAP,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Malformed input, anchored at a line when possible.
    Config { line: Option<usize>, message: String },
    /// Well-formed input outside what a command supports.
    Refused(String),
    /// A computation failed.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } | CliError::Refused(_) => 2,
            CliError::Failed(_) => 1,
        }
    }

    pub(crate) fn from_core(e: gaudinqq::Error) -> Self {
        use gaudinqq::Error as E;
        match e {
            E::WeylGroupTooLarge { .. } | E::NotTypeA(_) => CliError::Refused(e.to_string()),
            E::InvalidCartan(_) | E::InvalidProblem(_) | E::Format(_) => CliError::Config {
                line: None,
                message: e.to_string(),
            },
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { line: Some(l), message } => write!(f, "line {l}: {message}"),
            CliError::Config { line: None, message } => write!(f, "{message}"),
            CliError::Refused(m) => write!(f, "refused: {m}"),
            CliError::Failed(m) => write!(f, "failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
    pub summary: Vec<String>,
}

impl Outcome {
    /// Pretty JSON with a trailing newline. Object keys are sorted, so equal
    /// reports serialize to equal bytes.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("serializable");
        s.push('\n');
        s
    }
}

pub fn run(command: Command, text: &str, settings: &Settings) -> Result<Outcome, CliError> {
    match command {
        Command::Solve => cmd_solve(&Scenario::parse(text)?, settings),
        Command::Report => cmd_report(&Scenario::parse(text)?, settings),
        Command::Verify => cmd_verify(text, settings),
        Command::Orbit => cmd_orbit(text, settings),
        Command::Wronskian => cmd_wronskian(text, settings),
    }
}
