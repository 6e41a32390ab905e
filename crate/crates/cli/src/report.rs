use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::commands::Command;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// What a command produced, before formatting.
pub struct Outcome {
    pub result: Value,
    pub err_bound: Option<f64>,
    pub tail: Option<f64>,
    pub pass: Option<bool>,
    pub text: String,
    pub csv: Option<String>,
}

impl Outcome {
    pub fn new(result: impl Serialize, text: String) -> Self {
        Self {
            result: serde_json::to_value(result).expect("report serializes"),
            err_bound: None,
            tail: None,
            pass: None,
            text,
            csv: None,
        }
    }

    pub fn err_bound(mut self, e: f64) -> Self {
        self.err_bound = Some(e);
        self
    }

    pub fn tail(mut self, t: f64) -> Self {
        self.tail = Some(t);
        self
    }

    pub fn pass(mut self, p: bool) -> Self {
        self.pass = Some(p);
        self
    }

    pub fn csv(mut self, c: String) -> Self {
        self.csv = Some(c);
        self
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    params: Value,
    result: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    err_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tail: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pass: Option<bool>,
    elapsed_ms: Option<f64>,
}

pub fn render(cmd: &Command, out: &Outcome, format: Format, elapsed_ms: Option<f64>) -> Result<String, String> {
    match format {
        Format::Json => {
            let env = Envelope {
                command: cmd.name(),
                params: cmd.params(),
                result: &out.result,
                err_bound: out.err_bound,
                tail: out.tail,
                pass: out.pass,
                elapsed_ms,
            };
            let mut s = serde_json::to_string_pretty(&env).map_err(|e| e.to_string())?;
            s.push('\n');
            Ok(s)
        }
        Format::Text => {
            let mut s = out.text.clone();
            if let Some(ms) = elapsed_ms {
                s.push_str(&format!("elapsed: {ms:.1} ms\n"));
            }
            Ok(s)
        }
        Format::Csv => out
            .csv
            .clone()
            .ok_or_else(|| format!("CSV output is not available for `{}`", cmd.name())),
    }
}
