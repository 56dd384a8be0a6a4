//! Request envelope and per-command payload schemas.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use kolrank_core::Ordinal;

/// Version of the payload and report schemas in `schemas/`.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Dimpoly,
    Decompose,
    Rank,
    Chain,
    Ncgrowth,
    Probe,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dimpoly => "dimpoly",
            Command::Decompose => "decompose",
            Command::Rank => "rank",
            Command::Chain => "chain",
            Command::Ncgrowth => "ncgrowth",
            Command::Probe => "probe",
            Command::Verify => "verify",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Enumeration limits. Anything above them is refused unless `allow_large`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Largest word length / order enumerated by brute force.
    pub t_max: usize,
    /// Largest alphabet for free-monoid enumeration.
    pub max_letters: usize,
    /// Largest `t` at which the lattice point counter runs.
    pub max_oracle_t: u64,
    /// Largest `|X|` for field probes.
    pub max_set_size: usize,
    /// Largest number of leaders in one coordinate (inclusion–exclusion is exponential).
    pub max_leaders: usize,
    pub allow_large: bool,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            t_max: 14,
            max_letters: 3,
            max_oracle_t: 64,
            max_set_size: 200,
            max_leaders: 16,
            allow_large: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Request {
    pub command: Command,
    #[serde(default = "empty_object")]
    pub payload: serde_json::Value,
    #[serde(default)]
    pub caps: Caps,
}

fn empty_object() -> serde_json::Value {
    serde_json::Value::Object(Default::default())
}

/// An ordinal given either as text (`"w*2+3"`) or as `{"cnf": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrdinalInput {
    Text(String),
    Cnf(Ordinal),
    Finite(u64),
}

impl OrdinalInput {
    pub fn resolve(&self) -> Result<Ordinal, kolrank_core::ordinal::OrdinalError> {
        match self {
            OrdinalInput::Text(s) => Ordinal::from_str(s),
            OrdinalInput::Cnf(o) => Ok(o.clone()),
            OrdinalInput::Finite(n) => Ok(Ordinal::finite(*n)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainPayload {
    pub m: usize,
    pub eta: OrdinalInput,
    #[serde(default)]
    pub samples: Vec<OrdinalInput>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NcgrowthPayload {
    pub m: usize,
    /// Words as index strings, e.g. `"2,1"`; `""` is the empty word.
    #[serde(default)]
    pub leaders: Vec<String>,
    #[serde(default = "default_t_max")]
    pub t_max: usize,
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
    /// Optional words to test for pairwise incomparability.
    #[serde(default)]
    pub incomparable_check: Option<Vec<String>>,
}

fn default_t_max() -> usize {
    12
}

fn default_max_degree() -> usize {
    6
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaInput {
    One(u64),
    /// `"all"` for every nonzero `α`, or a decimal number.
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberQuery {
    pub a: u64,
    pub b: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyQuery {
    pub a: u64,
    pub b: u64,
    pub z: String,
    pub threshold: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbePayload {
    pub p: u64,
    /// `qr`, `all`, `lo..hi`, `lo..=hi`, or a comma list.
    pub set: String,
    #[serde(default = "default_alpha")]
    pub alpha: AlphaInput,
    /// Named subsets `Y_z`, written like `set`.
    #[serde(default)]
    pub families: BTreeMap<String, String>,
    #[serde(default)]
    pub fiber: Option<FiberQuery>,
    #[serde(default)]
    pub family_query: Option<FamilyQuery>,
    #[serde(default)]
    pub orbit_limit: Option<usize>,
    /// Include the quadruples themselves (single `α` only).
    #[serde(default)]
    pub list_quadruples: bool,
}

fn default_alpha() -> AlphaInput {
    AlphaInput::Text("all".to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyPayload {
    /// A suite name or `"all"`.
    #[serde(default = "default_suite")]
    pub suite: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub cases: Option<usize>,
}

fn default_suite() -> String {
    "all".to_string()
}
