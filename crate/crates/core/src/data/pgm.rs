//! Binary PGM (P5, maxval 255) reader and writer. Hand-rolled so the header
//! bytes are fully under our control: identical inputs must produce
//! byte-identical files.

use std::fs;
use std::path::Path;

use super::{io_err, DataError};

/// Writes a grayscale image; `comment` (without leading '#') is embedded as a
/// header comment line for provenance.
pub fn write_pgm(path: &Path, width: usize, height: usize, pixels: &[u8], comment: &str) -> Result<(), DataError> {
    assert_eq!(pixels.len(), width * height, "pixel buffer size");
    let mut bytes = format!("P5\n# {comment}\n{width} {height}\n255\n").into_bytes();
    bytes.extend_from_slice(pixels);
    fs::write(path, bytes).map_err(|e| io_err(path, e))
}

/// Reads a P5 PGM with maxval 255; comment lines are skipped.
pub fn read_pgm(path: &Path) -> Result<(usize, usize, Vec<u8>), DataError> {
    let raw = fs::read(path).map_err(|e| io_err(path, e))?;
    let bad = |msg: &str| DataError::BadRecord {
        image_id: path.display().to_string(),
        msg: msg.to_string(),
    };

    if raw.len() < 2 || &raw[..2] != b"P5" {
        return Err(bad("not a binary PGM (missing P5 magic)"));
    }
    let mut pos = 2;
    let mut fields = Vec::with_capacity(3);
    while fields.len() < 3 {
        // skip whitespace and comment lines
        while pos < raw.len() {
            match raw[pos] {
                b' ' | b'\t' | b'\r' | b'\n' => pos += 1,
                b'#' => {
                    while pos < raw.len() && raw[pos] != b'\n' {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while pos < raw.len() && raw[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("malformed PGM header"));
        }
        let field: usize = std::str::from_utf8(&raw[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("malformed PGM header field"))?;
        fields.push(field);
    }
    let (width, height, maxval) = (fields[0], fields[1], fields[2]);
    if maxval != 255 {
        return Err(bad("only maxval 255 is supported"));
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    if raw.len() < pos || raw.len() - pos != width * height {
        return Err(bad(&format!(
            "raster has {} bytes, header promises {}",
            raw.len().saturating_sub(pos),
            width * height
        )));
    }
    Ok((width, height, raw[pos..].to_vec()))
}
