//! Small dense matrices over a [`FieldCtx`].

use std::fmt;
use std::sync::Arc;

use crate::fields::{FieldCtx, FieldElem};

/// Row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Arc<FieldCtx>,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(field: &Arc<FieldCtx>, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: Arc::clone(field),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Arc<FieldCtx>, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a `rows x columns.len()` matrix; each column must have `rows` entries.
    pub fn from_columns(field: &Arc<FieldCtx>, rows: usize, columns: &[Vec<FieldElem>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has the wrong length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_rows(field: &Arc<FieldCtx>, rows: &[Vec<FieldElem>]) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {i} has the wrong length");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElem::is_zero)
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let v = (0..self.cols).fold(f.zero(), |acc, l| {
                    f.add(&acc, &f.mul(self.get(i, l), rhs.get(l, j)))
                });
                out.set(i, j, v);
            }
        }
        out
    }

    /// Applies `x -> x^p` to every entry.
    pub fn frobenius_twist(&self) -> Matrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = self.field.frobenius(v);
        }
        out
    }

    /// Rank by Gauss-Jordan elimination on a copy.
    pub fn rank(&self) -> usize {
        let f = &self.field;
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let Some(pivot) = (rank..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            if pivot != rank {
                for j in 0..a.cols {
                    a.data.swap(pivot * a.cols + j, rank * a.cols + j);
                }
            }
            let inv = f.inv(a.get(rank, col)).expect("pivot is nonzero");
            for j in col..a.cols {
                let v = f.mul(a.get(rank, j), &inv);
                a.set(rank, j, v);
            }
            for r in 0..a.rows {
                if r == rank || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in col..a.cols {
                    let v = f.sub(a.get(r, j), &f.mul(&factor, a.get(rank, j)));
                    a.set(r, j, v);
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("[{}]", self.get(i, j)))
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}
