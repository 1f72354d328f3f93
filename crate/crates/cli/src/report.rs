use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use cosheaf::io::{self, IoError};
use cosheaf::{CanonicalForm, Ring};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Failures that stop a job, each with its exit status.
#[derive(Debug)]
pub enum CliError {
    /// An input file could not be read or an output file written.
    Io(String),
    /// Malformed input or out-of-range parameters.
    Parse(String),
    /// Well-formed input violating a structural invariant.
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }

    pub fn invariant(e: impl fmt::Display) -> CliError {
        CliError::Invariant(e.to_string())
    }

    pub fn from_io(path: &Path, e: IoError) -> CliError {
        match e {
            IoError::Parse { line, column, message } => {
                CliError::Parse(format!("{}:{line}:{column}: {message}", path.display()))
            }
            IoError::Invalid(m) => CliError::Parse(format!("{}: {m}", path.display())),
            other => CliError::Invariant(format!("{}: {other}", path.display())),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "io: {m}"),
            CliError::Parse(m) => write!(f, "parse: {m}"),
            CliError::Invariant(m) => write!(f, "invariant violated: {m}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    /// Some diagnostic answered Unknown or Inconclusive.
    Unknown,
    /// A computed object failed a check it must pass.
    Violation,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Violation => 3,
            Status::Unknown => 4,
        }
    }
}

/// The outcome of one job. Contains nothing that varies between runs on
/// the same inputs and parameters.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    /// SHA-256 over the command, its parameters and the input bytes.
    pub input_digest: String,
    pub parameters: BTreeMap<String, String>,
    pub status: Status,
    pub result: Value,
    /// Human-readable rendering of `result`.
    #[serde(skip)]
    pub lines: Vec<String>,
    /// Printed verbatim instead of the report (used for emitted files).
    #[serde(skip)]
    pub raw: Option<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        self.raw.clone().unwrap_or_else(|| io::to_json(self))
    }

    pub fn to_text(&self) -> String {
        if let Some(raw) = &self.raw {
            return raw.clone();
        }
        let mut out = format!("command: {}\ninput: sha256:{}\n", self.command, self.input_digest);
        if !self.parameters.is_empty() {
            let ps: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out += &format!("parameters: {}\n", ps.join(", "));
        }
        for l in &self.lines {
            out += l;
            out.push('\n');
        }
        out += &format!("status: {}\n", serde_json::to_value(self.status).unwrap().as_str().unwrap());
        out
    }
}

/// Collects what a report's digest covers.
pub struct Job {
    command: String,
    parameters: BTreeMap<String, String>,
    hasher: Sha256,
}

impl Job {
    pub fn new(command: impl Into<String>) -> Job {
        let command = command.into();
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        Job { command, parameters: BTreeMap::new(), hasher }
    }

    pub fn param(&mut self, key: &str, value: impl fmt::Display) -> &mut Job {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn input(&mut self, bytes: &[u8]) {
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    /// Reads a file and adds its bytes to the digest.
    pub fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.input(text.as_bytes());
        Ok(text)
    }

    pub fn finish(self, status: Status, result: Value, lines: Vec<String>) -> Report {
        let mut hasher = self.hasher;
        for (k, v) in &self.parameters {
            hasher.update(format!("\0{k}={v}").as_bytes());
        }
        let input_digest = format!("{:x}", hasher.finalize());
        Report { command: self.command, input_digest, parameters: self.parameters, status, result, lines, raw: None }
    }
}

/// `Z^2 + Z/3`, `F5`, `0`, with the ring's own symbol.
pub fn show(m: &CanonicalForm, ring: Ring) -> String {
    if m.is_zero() {
        return "0".into();
    }
    let sym = match ring {
        Ring::Integers => "Z".to_string(),
        Ring::Rationals => "Q".to_string(),
        Ring::PrimeField(p) => format!("F{p}"),
    };
    let mut parts = Vec::new();
    match m.free_rank {
        0 => {}
        1 => parts.push(sym.clone()),
        n => parts.push(format!("{sym}^{n}")),
    }
    parts.extend(m.torsion_factors.iter().map(|d| format!("{sym}/{d}")));
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modules_print_with_the_ring_symbol() {
        let m = CanonicalForm { free_rank: 2, torsion_factors: vec![3.into()] };
        assert_eq!(show(&m, Ring::Integers), "Z^2 + Z/3");
        assert_eq!(show(&CanonicalForm { free_rank: 1, torsion_factors: vec![] }, Ring::PrimeField(5)), "F5");
        assert_eq!(show(&CanonicalForm::zero(), Ring::Rationals), "0");
    }

    #[test]
    fn digest_depends_on_inputs_and_parameters() {
        let digest = |input: &[u8], p: &str| {
            let mut j = Job::new("x");
            j.param("p", p);
            j.input(input);
            j.finish(Status::Ok, Value::Null, vec![]).input_digest
        };
        assert_eq!(digest(b"a", "1"), digest(b"a", "1"));
        assert_ne!(digest(b"a", "1"), digest(b"b", "1"));
        assert_ne!(digest(b"a", "1"), digest(b"a", "2"));
    }

    #[test]
    fn exit_codes_are_distinct() {
        let codes = [Status::Ok.exit_code(), Status::Violation.exit_code(), Status::Unknown.exit_code()];
        let errors = [CliError::Io(String::new()).exit_code(), CliError::Parse(String::new()).exit_code()];
        let mut all: Vec<u8> = codes.iter().chain(&errors).copied().collect();
        all.sort();
        assert_eq!(all, vec![0, 1, 2, 3, 4]);
    }
}
