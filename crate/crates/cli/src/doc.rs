use std::fmt;

use cdo_core::parse::render_diagnostic;
use cdo_core::Error;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "cdo-result/1";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    /// A core error, rendered against the expression that caused it.
    Input { input: String, error: Error },
    Core(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "error: {msg}"),
            CliError::Input { input, error } => f.write_str(&render_diagnostic(input, error)),
            CliError::Core(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

/// Attaches the offending input to parse errors.
pub fn with_input<T>(input: &str, r: Result<T, Error>) -> Result<T, CliError> {
    r.map_err(|error| match error {
        Error::Parse { .. } => CliError::Input { input: input.to_string(), error },
        other => CliError::Core(other),
    })
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: Value,
}

#[derive(Debug, Clone)]
pub struct Document {
    pub command: String,
    pub params: Map<String, Value>,
    pub payload: Value,
    pub checks: Vec<Check>,
}

impl Document {
    pub fn new(command: &str, params: Value, payload: Value) -> Self {
        let params = match params {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        Self { command: command.into(), params, payload, checks: Vec::new() }
    }

    pub fn check(mut self, name: &str, passed: bool, residual: Value) -> Self {
        self.checks.push(Check { name: name.into(), passed, residual });
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render(&self) -> String {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "verdict": if c.passed { "pass" } else { "fail" }, "residual": c.residual}))
            .collect();
        let v = json!({
            "schema": SCHEMA,
            "command": self.command,
            "params": Value::Object(self.params.clone()),
            "payload": self.payload,
            "checks": checks,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }
}
