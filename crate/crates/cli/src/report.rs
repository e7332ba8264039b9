use std::fmt;

use serde::Serialize;
use serde_json::Value;
use uag_core::Error;

/// A rendered command result: pretty JSON plus a plain-text view.
pub struct Report {
    pub json: String,
    pub text: String,
}

impl Report {
    pub fn new<T: Serialize>(value: &T, text: String) -> Result<Self, CliError> {
        let value = serde_json::to_value(value).map_err(|e| CliError::Io(e.to_string()))?;
        let mut json = String::new();
        write_json(&value, 0, &mut json);
        Ok(Report { json, text })
    }
}

/// Indented JSON, except that arrays of numbers stay on one line.
fn write_json(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize, out: &mut String| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Array(items) if items.iter().all(|i| i.is_number() || i.is_boolean() || i.is_null()) => {
            out.push_str(&v.to_string());
        }
        Value::Array(items) if !items.is_empty() => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(indent + 2, out);
                write_json(item, indent + 2, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                pad(indent + 2, out);
                out.push_str(&Value::from(k.as_str()).to_string());
                out.push_str(": ");
                write_json(item, indent + 2, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push('}');
        }
        _ => out.push_str(&v.to_string()),
    }
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    /// A core error tied to one input file.
    InFile(String, Error),
    Config(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) | CliError::InFile(_, e) => match e {
                Error::Syntax { .. }
                | Error::DuplicateSymbol(_)
                | Error::NegativeArity { .. }
                | Error::UnknownIdentifier(_)
                | Error::ArityMismatch { .. }
                | Error::InvalidVariables(_)
                | Error::InvalidTable { .. } => 2,
                Error::Capacity { .. } => 3,
                Error::Unresolved { .. } => 4,
                Error::Precondition(_)
                | Error::NotHomomorphism(_)
                | Error::IncompatiblePartition(_)
                | Error::ImageEscapes { .. } => 5,
            },
            CliError::Config(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::InFile(path, e) => write!(f, "{path}: {e}"),
            CliError::Config(m) => write!(f, "configuration: {m}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

/// Line-oriented text output.
#[derive(Default)]
pub struct Text(String);

impl Text {
    pub fn line(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.0.push_str(&format!("{key}: {value}\n"));
        self
    }

    pub fn raw(&mut self, s: &str) -> &mut Self {
        self.0.push_str(s);
        if !s.ends_with('\n') {
            self.0.push('\n');
        }
        self
    }

    pub fn finish(&mut self) -> String {
        std::mem::take(&mut self.0)
    }
}

pub fn point(p: &[u32]) -> String {
    let inner: Vec<String> = p.iter().map(|v| v.to_string()).collect();
    format!("({})", inner.join(","))
}

pub fn points(ps: &[Vec<u32>]) -> String {
    let all: Vec<String> = ps.iter().map(|p| point(p)).collect();
    format!("{{{}}}", all.join(", "))
}
