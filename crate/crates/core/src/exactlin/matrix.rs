use std::fmt;

use crate::error::{Error, Result};
use crate::exactlin::field::Field;
use crate::exactlin::subspace::Subspace;

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Output of [`Matrix::rref`].
#[derive(Debug, Clone, PartialEq)]
pub struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix {
            field: field.clone(),
            rows: nrows,
            cols,
            data,
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, cols, rows)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.mul_add(&out.data[idx], a, other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.mul_add(&acc, a, b))
            })
            .collect())
    }

    /// Reduced row-echelon form with rank and pivot columns.
    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let (rank, pivots) = m.rref_in_place();
        Rref {
            matrix: m,
            rank,
            pivots,
        }
    }

    /// Gauss-Jordan elimination in place; returns `(rank, pivots)`.
    pub fn rref_in_place(&mut self) -> (usize, Vec<usize>) {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !f.is_zero(&self.data[i * cols + c])) else {
                continue;
            };
            if pr != r {
                for j in c..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(&self.data[r * cols + c]).expect("pivot is nonzero");
            if !f.is_one(&inv) {
                for j in c..cols {
                    self.data[r * cols + j] = f.mul(&self.data[r * cols + j], &inv);
                }
            }
            let pivot_row: Vec<F::Elem> = self.data[r * cols + c..(r + 1) * cols].to_vec();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.data[i * cols + c].clone();
                if f.is_zero(&factor) {
                    continue;
                }
                let neg = f.neg(&factor);
                for (off, pv) in pivot_row.iter().enumerate() {
                    let idx = i * cols + c + off;
                    self.data[idx] = f.mul_add(&self.data[idx], &neg, pv);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (r, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Right kernel `{x : self * x = 0}` as a canonical subspace.
    pub fn kernel_basis(&self) -> Subspace<F> {
        let f = &self.field;
        let Rref {
            matrix, pivots, ..
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let vectors: Vec<Vec<F::Elem>> = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = vec![f.zero(); self.cols];
                x[free] = f.one();
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = f.neg(matrix.get(i, free));
                }
                x
            })
            .collect();
        Subspace::from_vectors(f, self.cols, vectors).expect("kernel vectors have ambient length")
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Self::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, f.one());
        }
        let (_, pivots) = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Self::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> Result<F::Elem> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        Ok(det_square(&self.field, self.rows, self.data.clone()))
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| *self.get(i, j) == self.field.neg(self.get(j, i)))
            })
    }
}

/// Determinant of an `n x n` row-major buffer by elimination.
pub fn det_square<F: Field>(f: &F, n: usize, mut a: Vec<F::Elem>) -> F::Elem {
    let mut det = f.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !f.is_zero(&a[i * n + c])) else {
            return f.zero();
        };
        if pr != c {
            for j in 0..n {
                a.swap(pr * n + j, c * n + j);
            }
            det = f.neg(&det);
        }
        let piv = a[c * n + c].clone();
        det = f.mul(&det, &piv);
        let inv = f.inv(&piv).expect("nonzero pivot");
        for i in c + 1..n {
            let factor = f.mul(&a[i * n + c], &inv);
            if f.is_zero(&factor) {
                continue;
            }
            let neg = f.neg(&factor);
            for j in c..n {
                let v = a[c * n + j].clone();
                a[i * n + j] = f.mul_add(&a[i * n + j], &neg, &v);
            }
        }
    }
    det
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "Matrix {}x{} over {}", self.rows, self.cols, self.field.ctx())?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|x| self.field.format_elem(x)).collect();
            writeln!(out, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
