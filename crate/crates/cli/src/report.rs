use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// The machine-readable part of a report. Depends only on the command and
/// its inputs, so it is byte-identical across runs.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Verdict {
    pub command: String,
    pub input_digest: String,
    pub status: String,
    pub exit_code: u8,
    pub facts: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub input_digest: String,
    pub summary: String,
    pub verdict: Verdict,
    pub text: String,
}

impl RunReport {
    pub fn new(
        command: &str,
        input_digest: String,
        holds: bool,
        summary: impl Into<String>,
    ) -> Self {
        let (status, exit_code) = if holds { ("true", 0) } else { ("false", 1) };
        RunReport {
            command: command.to_string(),
            input_digest: input_digest.clone(),
            summary: summary.into(),
            verdict: Verdict {
                command: command.to_string(),
                input_digest,
                status: status.to_string(),
                exit_code,
                facts: BTreeMap::new(),
            },
            text: String::new(),
        }
    }

    pub fn failure(command: &str, input_digest: String, err: &crate::error::CliError) -> Self {
        let mut r = RunReport::new(command, input_digest, false, err.to_string());
        r.verdict.status = err.status().to_string();
        r.verdict.exit_code = err.exit_code();
        r.fact("error", err.to_string());
        r
    }

    pub fn fact(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.verdict.facts.insert(key.to_string(), value.into());
        self
    }

    pub fn line(&mut self, s: impl AsRef<str>) -> &mut Self {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
        self
    }

    pub fn exit_code(&self) -> u8 {
        self.verdict.exit_code
    }

    pub fn verdict_json(&self) -> String {
        serde_json::to_string_pretty(&self.verdict).expect("plain values serialize")
    }

    /// Summary, human text, then the verdict block.
    pub fn render(&self) -> String {
        let mut s = format!("{}: {}\n", self.command, self.summary);
        s.push_str(&self.text);
        s.push_str("verdict:\n");
        s.push_str(&self.verdict_json());
        s.push('\n');
        s
    }
}
