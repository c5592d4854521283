//! `manifest.txt`: what was run, with which effective settings, producing
//! which files. The body is itself a valid config file, so
//! `--config <dir>/manifest.txt` replays the run.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::CliError;

pub const FILE_NAME: &str = "manifest.txt";

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub timestamp: String,
    pub command_line: String,
    pub settings: Vec<(String, String)>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, settings: &[(String, String)]) -> Self {
        Self {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            command_line: command_line(),
            settings: settings.to_vec(),
            outputs: Vec::new(),
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str(
            "# qwalk-epi run manifest; replay with `qwalk-epi <command> --config manifest.txt`\n",
        );
        let _ = writeln!(s, "command = {}", self.command);
        let _ = writeln!(s, "tool_version = {}", self.tool_version);
        let _ = writeln!(s, "timestamp = {}", self.timestamp);
        let _ = writeln!(s, "command_line = {}", self.command_line);
        for (k, v) in &self.settings {
            let _ = writeln!(s, "{k} = {v}");
        }
        for o in &self.outputs {
            let _ = writeln!(s, "output = {o}");
        }
        s
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let path = dir.join(FILE_NAME);
        std::fs::write(&path, self.render()).map_err(|e| CliError::io(&path, e))
    }
}

fn command_line() -> String {
    std::env::args()
        .map(|a| {
            if a.is_empty() || a.contains(char::is_whitespace) {
                format!("'{a}'")
            } else {
                a
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}
