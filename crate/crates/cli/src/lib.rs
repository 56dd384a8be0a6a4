//! JSON front end for `kolrank-core`. A [`Request`] names a command and a
//! payload; [`run`] returns a [`Report`] or a [`CliError`] with an exit code.

use serde::Serialize;
use serde_json::{json, Value};

pub mod request;
mod run;

pub use request::{Caps, Command, Request, SCHEMA_VERSION};
pub use run::run;

/// Which object of the underlying theory a report computes a shadow of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shadow {
    /// Dimension polynomial of a lattice of leaders.
    KolchinPolynomial,
    BinomialDecomposition,
    /// Ordinal upper bound read off a polynomial.
    RankUpperBound,
    /// Explicit chain of types realising rank at least `η`.
    UrankChain,
    /// Growth of free words in a noncommutative setting.
    NonRankedness,
    /// Finite-field analogue of the invertibility set.
    InvQuadruples,
    /// Self-checks; no mathematical object.
    Plumbing,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: Command,
    pub input: Value,
    pub shadow: Shadow,
    pub result: Value,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    /// Malformed input: bad JSON, unknown fields, unparsable values.
    #[error("schema error: {0}")]
    Schema(String),
    /// Well-formed input the algorithms reject.
    #[error("{kind}: {message}")]
    Domain { kind: String, message: String },
}

impl CliError {
    pub fn domain(kind: &str, message: impl Into<String>) -> Self {
        CliError::Domain {
            kind: kind.to_string(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Domain { .. } => 3,
        }
    }

    pub fn kind(&self) -> &str {
        match self {
            CliError::Schema(_) => "SchemaError",
            CliError::Domain { kind, .. } => kind,
        }
    }

    pub fn to_json(&self) -> Value {
        let message = match self {
            CliError::Schema(m) => m.clone(),
            CliError::Domain { message, .. } => message.clone(),
        };
        json!({
            "schema_version": SCHEMA_VERSION,
            "error": { "kind": self.kind(), "message": message },
            "exit_code": self.exit_code(),
        })
    }
}

/// Parses a request document and runs it.
pub fn run_json(text: &str) -> Result<Report, CliError> {
    let req: Request = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
    run(&req)
}

/// Renders a value as one newline-terminated JSON document.
pub fn render(value: &impl Serialize, pretty: bool) -> String {
    let mut s = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("reports serialize");
    s.push('\n');
    s
}
