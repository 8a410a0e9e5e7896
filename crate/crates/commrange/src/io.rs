//! Matrix files, JSON reports and boundary CSV.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use commrange_core::matcore::{ComplexMatrix, HermitianMatrix};
use commrange_core::nrange::RangeBoundary;
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("cannot write output: {0}")]
    Write(#[from] io::Error),
    #[error("cannot encode CSV: {0}")]
    Csv(#[from] csv::Error),
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read { path: path.to_owned(), source })?;
    serde_json::from_str(&text).map_err(|source| IoError::Parse { path: path.to_owned(), source })
}

/// A matrix file `{ "dim": n, "re": [[..]], "im": [[..]] }`.
pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, IoError> {
    read_json(path)
}

/// A matrix file whose contents must be Hermitian.
pub fn read_hermitian(path: &Path) -> Result<HermitianMatrix, IoError> {
    read_json(path)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize infallibly");
    s.push('\n');
    s
}

/// Columns `theta,re,im`, one row per support point.
pub fn boundary_csv(boundary: &RangeBoundary) -> Result<String, IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["theta", "re", "im"])?;
    for (theta, z) in boundary.angles.iter().zip(&boundary.points) {
        w.serialize((theta, z.re, z.im))?;
    }
    let bytes = w.into_inner().map_err(|e| IoError::Write(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV of floats is ASCII"))
}

/// Writes to `out`, or to stdout when absent.
pub fn write_output(out: Option<&Path>, contents: &str) -> Result<(), IoError> {
    match out {
        Some(p) => fs::write(p, contents)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use commrange_core::nrange::range_boundary;

    #[test]
    fn csv_header_and_rows() {
        let b = range_boundary(&ComplexMatrix::zeros(2), 8).unwrap();
        let text = boundary_csv(&b).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "theta,re,im");
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[1], "0.0,0.0,0.0");
    }

    #[test]
    fn hermitian_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.json");
        let a = HermitianMatrix::diagonal(&[1.0, -2.0]);
        fs::write(&path, to_json(&a)).unwrap();
        assert_eq!(read_hermitian(&path).unwrap(), a);
        assert!(matches!(read_hermitian(&dir.path().join("missing.json")), Err(IoError::Read { .. })));
        fs::write(&path, "{\"dim\": 2}").unwrap();
        assert!(matches!(read_hermitian(&path), Err(IoError::Parse { .. })));
    }
}
