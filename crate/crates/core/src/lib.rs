//! Region proposal toolkit built from scratch: a proposal network (RPN) and a
//! hard-negative proposal network (nRPN) co-trained by exchanging each
//! other's mistakes, an IoU-weighted overlap loss, synthetic dataset
//! generation, and a recall evaluation harness.

pub mod cli;
pub mod data;
pub mod eval;
pub mod geometry;
pub mod labeling;
pub mod losses;
pub mod nn;
pub mod rng;
pub mod training;

use sha2::{Digest, Sha256};

/// Content hash of any serializable config: sha256 of its canonical JSON.
pub fn config_hash<T: serde::Serialize>(value: &T) -> String {
    let json = serde_json::to_string(value).expect("config serializes");
    let mut hasher = Sha256::new();
    hasher.update(json.as_bytes());
    hex::encode(&hasher.finalize()[..8])
}

/// Identity stamped into every output file so runs are traceable and
/// reproducible from their artifacts alone.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub tool_version: String,
    pub config_hash: String,
    pub seed: u64,
}

impl Provenance {
    pub fn new(config_hash: String, seed: u64) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash,
            seed,
        }
    }

    /// Comment line for CSV and image headers.
    pub fn comment_line(&self) -> String {
        format!(
            "# nrpn v{} config_hash={} seed={}",
            self.tool_version, self.config_hash, self.seed
        )
    }

    pub fn for_tests(seed: u64) -> Self {
        Self::new("test".to_string(), seed)
    }
}
