//! Synthetic desk-scale dataset generation and dataset file I/O.
//!
//! Directory layout: `manifest.json`, `annotations.jsonl` (one JSON object
//! per image: image_id, width, height, boxes), and `images/` holding one
//! binary PGM per image. Regenerating from a manifest is bit-identical.

mod gen;
mod io;
mod pgm;

pub use gen::{generate_synthetic_dataset, regenerate, GenConfig};
pub use io::{load_dataset, save_dataset};
pub use pgm::{read_pgm, write_pgm};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::BoxXYXY;
use crate::nn::Tensor;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("invalid generator config: {0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{file} line {line}: {msg}")]
    Annotation {
        file: String,
        line: usize,
        msg: String,
    },
    #[error("record {image_id}: {msg}")]
    BadRecord { image_id: String, msg: String },
}

fn io_err(path: &std::path::Path, source: std::io::Error) -> DataError {
    DataError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// One image with its ground-truth boxes (single "object" class).
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub image_id: String,
    /// Grayscale image, shape (1, H, W), values k/255 for integer k.
    pub image: Tensor,
    pub gts: Vec<BoxXYXY>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub format_version: u32,
    pub tool_version: String,
    pub config_hash: String,
    pub split: String,
    pub n: usize,
    pub image_size: usize,
    pub size_mix: [f64; 3],
    pub objects_per_image: [usize; 2],
    pub distractors_per_image: [usize; 2],
    pub seed: u64,
    pub stride_divisor: usize,
}

impl DatasetManifest {
    pub fn comment_line(&self) -> String {
        format!(
            "# nrpn v{} config_hash={} seed={}",
            self.tool_version, self.config_hash, self.seed
        )
    }
}

pub const MANIFEST_FORMAT_VERSION: u32 = 1;
