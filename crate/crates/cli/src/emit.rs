//! Deterministic artifact writers: CSV tables, JSON summaries, PGM heatmaps.
//!
//! Every writer produces the same bytes for the same inputs: fixed field
//! order, fixed float formatting, no timestamps, no map iteration.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::RunError;

/// One float formatting for all CSV data cells.
fn cell(v: f64) -> String {
    format!("{v:.12e}")
}

/// Matrix CSV with a site-index header row and column:
///
/// ```text
/// q/r,-2,-1,0,1,2
/// -2,...,...
/// ```
pub fn write_matrix_csv(path: &Path, sites: &[i64], matrix: &Array2<f64>) -> Result<(), RunError> {
    assert_eq!(matrix.dim(), (sites.len(), sites.len()));
    let mut out = String::new();
    out.push_str("q/r");
    for r in sites {
        out.push(',');
        out.push_str(&r.to_string());
    }
    out.push('\n');
    for (qi, q) in sites.iter().enumerate() {
        out.push_str(&q.to_string());
        for ri in 0..sites.len() {
            out.push(',');
            out.push_str(&cell(matrix[[qi, ri]]));
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Column-oriented CSV: a header and rows of (label, values…).
pub fn write_table_csv(
    path: &Path,
    header: &[&str],
    rows: &[(String, Vec<f64>)],
) -> Result<(), RunError> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for (label, values) in rows {
        out.push_str(label);
        for v in values {
            out.push(',');
            out.push_str(&cell(*v));
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Sidecar metadata for a heatmap.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HeatmapMeta {
    /// Value mapped to full white; pixels are `round(255·v/max_value)`.
    pub max_value: f64,
    /// Set when the input was identically zero and the image is all black.
    pub all_zero: bool,
}

/// Render a non-negative matrix as an 8-bit binary PGM (row-major), scaled
/// so the largest entry is white. The scale factor lands in a `<path>.json`
/// sidecar; an all-zero matrix produces a black image and a warning flag.
pub fn emit_heatmap(matrix: &Array2<f64>, path: &Path) -> Result<HeatmapMeta, RunError> {
    if matrix.iter().any(|v| !v.is_finite()) {
        return Err(RunError::Numeric(biphoton_fourier::Error::InvalidArgument(
            "heatmap input contains non-finite entries".into(),
        )));
    }
    let (rows, cols) = matrix.dim();
    let max_value = matrix.iter().cloned().fold(0.0f64, f64::max);
    let all_zero = max_value == 0.0;
    let mut bytes = Vec::with_capacity(64 + rows * cols);
    bytes.extend_from_slice(format!("P5\n{cols} {rows}\n255\n").as_bytes());
    for q in 0..rows {
        for r in 0..cols {
            let v = if all_zero { 0.0 } else { matrix[[q, r]] / max_value };
            bytes.push((255.0 * v).round() as u8);
        }
    }
    let mut f = fs::File::create(path)?;
    f.write_all(&bytes)?;
    let meta = HeatmapMeta { max_value, all_zero };
    let sidecar = PathBuf::from(format!("{}.json", path.display()));
    write_json(&sidecar, &meta)?;
    Ok(meta)
}

/// Pretty JSON plus a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), RunError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
