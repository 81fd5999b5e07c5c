//! Matrix JSON: `{"dim": n, "rows": [[...], ...]}` with finite entries.

use std::fs;
use std::path::Path;

use opmono_core::{Matrix, SpdMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub rows: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &Matrix) -> Self {
        Self {
            dim: m.dim(),
            rows: m.rows(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix, String> {
        if self.rows.len() != self.dim {
            return Err(format!("dim is {} but {} rows given", self.dim, self.rows.len()));
        }
        Matrix::from_rows(&self.rows).map_err(|e| e.to_string())
    }
}

fn input_error(path: &Path, reason: impl ToString) -> CliError {
    CliError::Input {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    }
}

pub fn read_matrix(path: &Path) -> CliResult<Matrix> {
    let text = fs::read_to_string(path).map_err(|e| input_error(path, e))?;
    let json: MatrixJson = serde_json::from_str(&text).map_err(|e| input_error(path, e))?;
    json.to_matrix().map_err(|e| input_error(path, e))
}

/// Reads and validates a positive-definite input.
pub fn read_spd(path: &Path) -> CliResult<SpdMatrix> {
    SpdMatrix::new(read_matrix(path)?).map_err(|e| input_error(path, e))
}

pub fn to_json(m: &Matrix) -> String {
    serde_json::to_string(&MatrixJson::from_matrix(m)).expect("finite matrix serializes")
}

pub fn write_matrix(path: &Path, m: &Matrix) -> CliResult<()> {
    fs::write(path, to_json(m) + "\n").map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = Matrix::from_rows(&[[2.0, 0.5], [0.5, 1.0 / 3.0]]).unwrap();
        let back: MatrixJson = serde_json::from_str(&to_json(&m)).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            r#"{"dim": 2, "rows": [[1, 0]]}"#,
            r#"{"dim": 2, "rows": [[1, 0], [0]]}"#,
            r#"{"dim": 1, "rows": [[NaN]]}"#,
            r#"{"dim": 1, "rows": [[1e999]]}"#,
            r#"{"dim": 1, "rows": [[1]], "extra": 0}"#,
        ] {
            let parsed = serde_json::from_str::<MatrixJson>(bad)
                .map_err(|e| e.to_string())
                .and_then(|j| j.to_matrix());
            assert!(parsed.is_err(), "{bad}");
        }
    }
}
