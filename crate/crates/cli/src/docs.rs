//! JSON document formats: tuples, Dirac operators, vectors, point lists.
//!
//! Complex numbers are `[re, im]` pairs throughout; matrices are row-major
//! nested arrays. Documents written by the CLI reparse to bit-identical
//! matrices (f64 round-trips through serde_json exactly).

use diraclab::dirac::{CommutingTuple, DiracPair};
use diraclab::mat::{c, CMatrix, CVector, C64};
use serde::{Deserialize, Serialize};

pub type ComplexPair = [f64; 2];

/// A commuting tuple on disk: `d` matrices, each `n×n` of `[re, im]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TupleDocument {
    pub d: usize,
    pub n: usize,
    pub matrices: Vec<Vec<Vec<ComplexPair>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comm_tol: Option<f64>,
}

/// A Dirac operator on disk: the full `(n·2^d)×(n·2^d)` matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiracDocument {
    pub d: usize,
    pub n: usize,
    #[serde(rename = "D")]
    pub dirac: Vec<Vec<ComplexPair>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sa_tol: Option<f64>,
}

/// Either input document; distinguished by its fields.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum InputDocument {
    Tuple(TupleDocument),
    Dirac(DiracDocument),
}

fn rows_to_matrix(rows: &[Vec<ComplexPair>], nrows: usize, ncols: usize) -> Result<CMatrix, String> {
    if rows.len() != nrows {
        return Err(format!("matrix has {} rows, expected {nrows}", rows.len()));
    }
    let mut m = CMatrix::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(format!("row {i} has {} entries, expected {ncols}", row.len()));
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            m[(i, j)] = c(re, im);
        }
    }
    Ok(m)
}

fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<ComplexPair>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

impl TupleDocument {
    pub fn to_tuple(&self) -> Result<CommutingTuple, TupleLoadError> {
        if self.matrices.len() != self.d {
            return Err(TupleLoadError::Shape(format!(
                "document declares d = {} but carries {} matrices",
                self.d,
                self.matrices.len()
            )));
        }
        let mut matrices = Vec::with_capacity(self.d);
        for (k, rows) in self.matrices.iter().enumerate() {
            matrices.push(
                rows_to_matrix(rows, self.n, self.n)
                    .map_err(|e| TupleLoadError::Shape(format!("matrix {}: {e}", k + 1)))?,
            );
        }
        match self.comm_tol {
            Some(tol) => CommutingTuple::with_tolerance(matrices, tol),
            None => CommutingTuple::new(matrices),
        }
        .map_err(TupleLoadError::Contract)
    }

    pub fn from_tuple(tuple: &CommutingTuple) -> Self {
        Self {
            d: tuple.d(),
            n: tuple.n(),
            matrices: tuple.matrices().iter().map(matrix_to_rows).collect(),
            comm_tol: Some(tuple.comm_tol()),
        }
    }
}

/// Shape problems are input errors (exit 2); a failed commutativity or
/// self-adjointness contract is a contract failure (exit 1).
#[derive(Debug)]
pub enum TupleLoadError {
    Shape(String),
    Contract(diraclab::dirac::DiracError),
}

impl DiracDocument {
    pub fn to_pair(&self) -> Result<DiracPair, TupleLoadError> {
        let size = self.n * (1usize << self.d);
        let m = rows_to_matrix(&self.dirac, size, size).map_err(TupleLoadError::Shape)?;
        DiracPair::from_matrix(self.d, self.n, m, self.sa_tol).map_err(TupleLoadError::Contract)
    }
}

/// A vector in `H` on disk.
pub fn parse_vector(text: &str) -> Result<CVector, String> {
    let pairs: Vec<ComplexPair> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    Ok(CVector::from_iterator(pairs.len(), pairs.iter().map(|&[re, im]| c(re, im))))
}

/// A list of complex d-vectors on disk.
pub fn parse_points(text: &str) -> Result<Vec<Vec<C64>>, String> {
    let raw: Vec<Vec<ComplexPair>> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    Ok(raw
        .into_iter()
        .map(|p| p.into_iter().map(|[re, im]| c(re, im)).collect())
        .collect())
}

pub fn vector_to_json(v: &CVector) -> serde_json::Value {
    serde_json::json!(v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
}

pub fn point_to_json(p: &[C64]) -> serde_json::Value {
    serde_json::json!(p.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
}
