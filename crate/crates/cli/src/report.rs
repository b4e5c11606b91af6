use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

pub fn usage(msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(msg.to_string())
}

/// `{"schema": 1, "command", "config", "results", "verdict", "wall_time_ms"}`
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub config: Value,
    pub results: Value,
    pub verdict: bool,
    pub wall_time_ms: u128,
}

impl Report {
    pub fn new(command: &str, config: Value, results: impl Serialize, verdict: bool, started: Instant) -> Self {
        Report {
            schema: 1,
            command: command.to_string(),
            config,
            results: serde_json::to_value(results).expect("reports serialize"),
            verdict,
            wall_time_ms: started.elapsed().as_millis(),
        }
    }

    pub fn emit(&self, out: Option<&Path>) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("reports serialize");
        match out {
            Some(path) => std::fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
            None => {
                println!("{text}");
                Ok(())
            }
        }
    }
}
