//! Dataset directory I/O: manifest.json + annotations.jsonl + images/*.pgm,
//! with save -> load an exact round trip.

use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{io_err, read_pgm, write_pgm, DataError, DatasetManifest, SampleRecord};
use crate::geometry::BoxXYXY;
use crate::nn::Tensor;

#[derive(Debug, Serialize, Deserialize)]
struct AnnotationRow {
    image_id: String,
    width: usize,
    height: usize,
    boxes: Vec<[f64; 4]>,
}

fn pgm_comment(manifest: &DatasetManifest) -> String {
    format!(
        "nrpn v{} config_hash={} seed={}",
        manifest.tool_version, manifest.config_hash, manifest.seed
    )
}

pub fn save_dataset(
    manifest: &DatasetManifest,
    samples: &[SampleRecord],
    dir: &Path,
) -> Result<(), DataError> {
    let images_dir = dir.join("images");
    fs::create_dir_all(&images_dir).map_err(|e| io_err(&images_dir, e))?;

    let manifest_path = dir.join("manifest.json");
    let mut manifest_json = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    manifest_json.push('\n');
    fs::write(&manifest_path, manifest_json).map_err(|e| io_err(&manifest_path, e))?;

    let mut annotations = String::new();
    for sample in samples {
        let (_, h, w) = sample.image.dims3().expect("image is (1,H,W)");
        let row = AnnotationRow {
            image_id: sample.image_id.clone(),
            width: w,
            height: h,
            boxes: sample
                .gts
                .iter()
                .map(|b| [b.x1, b.y1, b.x2, b.y2])
                .collect(),
        };
        annotations.push_str(&serde_json::to_string(&row).expect("row serializes"));
        annotations.push('\n');

        let pixels: Vec<u8> = sample
            .image
            .iter()
            .map(|&v| (v * 255.0).round().clamp(0.0, 255.0) as u8)
            .collect();
        let path = images_dir.join(format!("{}.pgm", sample.image_id));
        write_pgm(&path, w, h, &pixels, &pgm_comment(manifest))?;
    }
    let ann_path = dir.join("annotations.jsonl");
    fs::write(&ann_path, annotations).map_err(|e| io_err(&ann_path, e))
}

pub fn load_dataset(dir: &Path) -> Result<(DatasetManifest, Vec<SampleRecord>), DataError> {
    let manifest_path = dir.join("manifest.json");
    let raw = fs::read_to_string(&manifest_path).map_err(|e| io_err(&manifest_path, e))?;
    let manifest: DatasetManifest = serde_json::from_str(&raw).map_err(|e| DataError::Annotation {
        file: manifest_path.display().to_string(),
        line: e.line(),
        msg: e.to_string(),
    })?;

    let ann_path = dir.join("annotations.jsonl");
    let file = fs::File::open(&ann_path).map_err(|e| io_err(&ann_path, e))?;
    let mut samples = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| io_err(&ann_path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row: AnnotationRow =
            serde_json::from_str(&line).map_err(|e| DataError::Annotation {
                file: ann_path.display().to_string(),
                line: i + 1,
                msg: e.to_string(),
            })?;
        samples.push(load_record(dir, row)?);
    }
    Ok((manifest, samples))
}

fn load_record(dir: &Path, row: AnnotationRow) -> Result<SampleRecord, DataError> {
    let bad = |msg: String| DataError::BadRecord {
        image_id: row.image_id.clone(),
        msg,
    };

    let mut gts = Vec::with_capacity(row.boxes.len());
    for b in &row.boxes {
        let gt = BoxXYXY::try_new(b[0], b[1], b[2], b[3])
            .map_err(|e| bad(format!("invalid box: {e}")))?;
        if gt.area() <= 0.0 {
            return Err(bad(format!("degenerate box {b:?}")));
        }
        if gt.x1 < 0.0 || gt.y1 < 0.0 || gt.x2 > row.width as f64 || gt.y2 > row.height as f64 {
            return Err(bad(format!(
                "box {b:?} outside image bounds {}x{}",
                row.width, row.height
            )));
        }
        gts.push(gt);
    }

    let image_path = dir.join("images").join(format!("{}.pgm", row.image_id));
    if !image_path.exists() {
        return Err(bad(format!("missing image file {}", image_path.display())));
    }
    let (w, h, pixels) = read_pgm(&image_path)?;
    if w != row.width || h != row.height {
        return Err(bad(format!(
            "image is {w}x{h} but annotation says {}x{}",
            row.width, row.height
        )));
    }
    let data: Vec<f64> = pixels.iter().map(|&v| v as f64 / 255.0).collect();
    Ok(SampleRecord {
        image_id: row.image_id,
        image: Tensor::from_vec(&[1, h, w], data).expect("pgm size"),
        gts,
    })
}
