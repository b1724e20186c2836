//! JSON report documents and DOT export.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;
use sha2::{Digest, Sha256};

use crate::algebra::Algebra;
use crate::ideals::IdealLattice;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputHash {
    pub path: PathBuf,
    /// Hex SHA-256 of the file contents, or `null` when unreadable.
    pub sha256: Option<String>,
}

/// The document every command prints. Rationals are strings `p/q`; the
/// only field that varies between identical runs is `elapsed_ms`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub command: String,
    pub inputs: Vec<InputHash>,
    pub results: Json,
    pub elapsed_ms: u64,
}

impl ReportDoc {
    pub fn new(command: &str, inputs: &[PathBuf], results: Json, elapsed: Duration) -> ReportDoc {
        ReportDoc {
            command: command.to_string(),
            inputs: inputs.iter().map(|p| hash_input(p)).collect(),
            results,
            elapsed_ms: elapsed.as_millis() as u64,
        }
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The document with the timing field zeroed, for comparisons.
    pub fn without_timing(&self) -> ReportDoc {
        ReportDoc {
            elapsed_ms: 0,
            ..self.clone()
        }
    }
}

fn hash_input(path: &Path) -> InputHash {
    InputHash {
        path: path.to_path_buf(),
        sha256: std::fs::read(path)
            .ok()
            .map(|bytes| hex::encode(Sha256::digest(bytes))),
    }
}

/// The Hasse diagram of an ideal lattice: one node per ideal, an edge from
/// each ideal to every ideal covering it.
pub fn ideal_dot(a: &Algebra, lattice: &IdealLattice) -> String {
    let mut out = String::from("digraph ideals {\n  rankdir=BT;\n");
    for (k, i) in lattice.ideals.iter().enumerate() {
        let label = i.describe(a).replace('"', "\\\"");
        out.push_str(&format!("  I{k} [label=\"{label}\"];\n"));
    }
    for (lo, hi) in &lattice.covers {
        out.push_str(&format!("  I{lo} -> I{hi};\n"));
    }
    out.push_str("}\n");
    out
}
