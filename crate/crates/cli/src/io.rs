//! File input and atomic output.

use std::fs;
use std::io::Write;
use std::path::Path;

use nfold_core::linalg::{parse_matrix, write_matrix, Matrix};
use nfold_core::nfold::parse_stencil;
use nfold_core::{IntMat, IntVec, NFoldStencil};
use serde_json::Value;
use tempfile::NamedTempFile;

use crate::failure::{Failure, Outcome};

pub fn read_text(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: nfold_core::Result<T>) -> Outcome<T> {
    r.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Outcome<IntMat> {
    in_file(path, parse_matrix(&read_text(path)?))
}

/// A vector stored as a single row or a single column.
pub fn read_vector(path: &Path) -> Outcome<IntVec> {
    let m = read_matrix(path)?;
    vector_of(&m).ok_or_else(|| Failure::Usage(format!("{}: expected one row or one column", path.display())))
}

fn vector_of(m: &IntMat) -> Option<IntVec> {
    match (m.rows(), m.cols()) {
        (1, _) => Some(IntVec::new(m.row(0).to_vec())),
        (_, 1) => Some(m.column(0)),
        _ => None,
    }
}

pub fn read_stencil(path: &Path) -> Outcome<NFoldStencil> {
    in_file(path, parse_stencil(&read_text(path)?))
}

pub fn read_json(path: &Path) -> Outcome<Value> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Outcome<()> {
    let fail = |e: std::io::Error| Failure::Internal(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

/// Sends `contents` to `out`, or to standard output.
pub fn emit(out: Option<&Path>, contents: &str) -> Outcome<()> {
    match out {
        Some(path) => write_atomic(path, contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Internal(format!("cannot write to standard output: {e}")))
        }
    }
}

pub fn emit_json(out: Option<&Path>, value: &Value) -> Outcome<()> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    emit(out, &text)
}

/// A vector in the matrix text format, as one row.
pub fn vector_text(x: &IntVec) -> String {
    write_matrix(&Matrix::new(1, x.len(), x.as_slice().to_vec()).expect("row shape"))
}
