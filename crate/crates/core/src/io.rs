//! File formats: complex-matrix JSON, real CSV grids and plain value lists.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// `{"n_rows":R,"n_cols":C,"re":[[...]],"im":[[...]],"meta":{...}}`,
/// arrays row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrixJson {
    pub n_rows: usize,
    pub n_cols: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    #[serde(default)]
    pub meta: Value,
}

impl ComplexMatrixJson {
    pub fn from_matrix(m: &ComplexMatrix, meta: Value) -> Self {
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            m.row_iter().map(|r| r.iter().map(f).collect()).collect()
        };
        Self { n_rows: m.nrows(), n_cols: m.ncols(), re: rows(|z| z.re), im: rows(|z| z.im), meta }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let shape_ok = |a: &Vec<Vec<f64>>| a.len() == self.n_rows && a.iter().all(|r| r.len() == self.n_cols);
        if self.n_rows == 0 || self.n_cols == 0 || !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::Format(format!(
                "complex matrix arrays do not match declared shape {}x{}",
                self.n_rows, self.n_cols
            )));
        }
        Ok(ComplexMatrix::from_fn(self.n_rows, self.n_cols, |i, j| {
            Complex64::new(self.re[i][j], self.im[i][j])
        }))
    }
}

pub fn matrix_to_json(m: &ComplexMatrix, meta: Value) -> Result<String> {
    let mut s = serde_json::to_string(&ComplexMatrixJson::from_matrix(m, meta))?;
    s.push('\n');
    Ok(s)
}

pub fn matrix_from_json(text: &str) -> Result<(ComplexMatrix, Value)> {
    let parsed: ComplexMatrixJson = serde_json::from_str(text)?;
    Ok((parsed.to_matrix()?, parsed.meta))
}

/// Parses a real CSV grid; `#` lines and blank lines are skipped.
pub fn parse_csv(text: &str) -> Result<DMatrix<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("bad number {:?}", f.trim()),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected {} columns, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Format("CSV has no data rows".into()));
    }
    let (r, c) = (rows.len(), rows[0].len());
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

pub fn format_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for r in m.row_iter() {
        let fields: Vec<String> = r.iter().map(|v| v.to_string()).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// One value per line.
pub fn format_values(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v}\n")).collect()
}

pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let m = parse_csv(text)?;
    if m.ncols() != 1 {
        return Err(Error::Format(format!("expected one value per line, found {} columns", m.ncols())));
    }
    Ok(m.iter().cloned().collect())
}

/// Reads a signal from `.json` (complex-matrix format) or CSV (real).
pub fn read_signal(path: &Path) -> Result<ComplexMatrix> {
    let text = fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        Ok(matrix_from_json(&text)?.0)
    } else {
        Ok(crate::linalg::to_complex(&parse_csv(&text)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_layout_is_row_major() {
        let m = ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.5),
                Complex64::new(2.0, 0.0),
                Complex64::new(3.0, 0.0),
                Complex64::new(0.1, -0.25),
            ],
        );
        let text = matrix_to_json(&m, json!({"kind": "test"})).unwrap();
        assert_eq!(
            text,
            "{\"n_rows\":2,\"n_cols\":2,\"re\":[[1.0,2.0],[3.0,0.1]],\"im\":[[0.5,0.0],[0.0,-0.25]],\"meta\":{\"kind\":\"test\"}}\n"
        );
        let (back, meta) = matrix_from_json(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(meta["kind"], "test");
    }

    #[test]
    fn json_rejects_shape_mismatch() {
        let bad = r#"{"n_rows":2,"n_cols":1,"re":[[1.0]],"im":[[0.0]]}"#;
        assert!(matches!(matrix_from_json(bad), Err(Error::Format(_))));
    }

    #[test]
    fn csv_grid_and_values() {
        let m = parse_csv("# header\n1,2,3\n4, 5 ,6\n\n").unwrap();
        assert_eq!(m.shape(), (2, 3));
        assert_eq!(m[(1, 1)], 5.0);
        assert_eq!(parse_csv(&format_csv(&m)).unwrap(), m);
        assert!(parse_csv("1,2\n3\n").is_err());
        assert_eq!(parse_values(&format_values(&[0.1, 1e-300, -2.5])).unwrap(), vec![0.1, 1e-300, -2.5]);
        assert!(parse_values("1,2\n").is_err());
    }
}
