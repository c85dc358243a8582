//! JSON matrix files: `{"m": 2, "n": 2, "re": [[..]], "im": [[..]]}`.
//!
//! `re` and `im` are `(mn) x (mn)` row-major nested arrays. Floats are
//! written in shortest round-trip form, so a write/read cycle is lossless.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bipartite::{validate_with, BipartiteState, ValidateOptions};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub m: usize,
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_state(s: &BipartiteState) -> Self {
        let z = s.matrix();
        let d = z.rows();
        let (re, im) = (0..d)
            .map(|i| z.row(i).iter().map(|c| (c.re, c.im)).unzip())
            .unzip();
        MatrixFile {
            m: s.dim_a(),
            n: s.dim_b(),
            re,
            im,
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let d = self
            .m
            .checked_mul(self.n)
            .ok_or_else(|| Error::Shape("m*n overflows".into()))?;
        for (name, part) in [("re", &self.re), ("im", &self.im)] {
            if part.len() != d {
                return Err(Error::Shape(format!(
                    "`{name}` has {} rows, expected {d} for (m, n) = ({}, {})",
                    part.len(),
                    self.m,
                    self.n
                )));
            }
            if let Some((i, row)) = part.iter().enumerate().find(|(_, r)| r.len() != d) {
                return Err(Error::Shape(format!(
                    "`{name}` row {i} has {} entries, expected {d}",
                    row.len()
                )));
            }
        }
        let data = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| C64::new(self.re[i][j], self.im[i][j]))
            .collect();
        ComplexMatrix::from_row_major(d, d, data)
    }

    pub fn to_state(&self, opts: ValidateOptions) -> Result<BipartiteState> {
        validate_with(self.to_matrix()?, self.m, self.n, opts)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!(
                "matrix file, line {} column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serialises")
    }
}

pub fn read_matrix_file(path: &Path) -> Result<MatrixFile> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    MatrixFile::parse(&text)
}

pub fn load_state(path: &Path, opts: ValidateOptions) -> Result<BipartiteState> {
    read_matrix_file(path)?.to_state(opts)
}

pub fn write_state(path: &Path, s: &BipartiteState) -> Result<()> {
    fs::write(path, MatrixFile::from_state(s).to_json())?;
    Ok(())
}
