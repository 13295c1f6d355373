use serde::Serialize;
use sha2::{Digest, Sha256};

use nilflow::liealg::LieAlgebra;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Command output with the provenance fields every report carries.
#[derive(Serialize)]
pub struct Report<T: Serialize> {
    #[serde(flatten)]
    pub body: T,
    pub tool_version: &'static str,
    pub seed: u64,
    pub algebra_hash: String,
}

impl<T: Serialize> Report<T> {
    pub fn new(body: T, seed: u64, algebras: &[&LieAlgebra]) -> Self {
        Report {
            body,
            tool_version: TOOL_VERSION,
            seed,
            algebra_hash: algebra_hash(algebras),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// SHA-256 of the canonical JSON serialization; several algebras are
/// hashed as their serializations joined by newlines.
pub fn algebra_hash(algebras: &[&LieAlgebra]) -> String {
    let mut h = Sha256::new();
    for (i, g) in algebras.iter().enumerate() {
        if i > 0 {
            h.update(b"\n");
        }
        h.update(g.to_json().as_bytes());
    }
    hex::encode(h.finalize())
}
