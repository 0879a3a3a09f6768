use crate::error::NumericError;
use crate::numeric::{DenseMatrix, LinearOperator, Point};
use crate::scalar::Scalar;

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    offsets: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> SparseMatrix<T> {
    pub fn from_csr(
        rows: usize,
        cols: usize,
        offsets: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<T>,
    ) -> Result<Self, NumericError> {
        if offsets.len() != rows + 1 {
            return Err(NumericError::SparseLayout(format!("expected {} offsets, got {}", rows + 1, offsets.len())));
        }
        if offsets[0] != 0 || offsets[rows] != values.len() || indices.len() != values.len() {
            return Err(NumericError::SparseLayout("final offset must equal the value count".into()));
        }
        for r in 0..rows {
            if offsets[r] > offsets[r + 1] {
                return Err(NumericError::SparseLayout(format!("offsets decrease at row {r}")));
            }
            let cols_in_row = &indices[offsets[r]..offsets[r + 1]];
            if cols_in_row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(NumericError::SparseLayout(format!("column indices not strictly increasing in row {r}")));
            }
            if cols_in_row.last().is_some_and(|&c| c >= cols) {
                return Err(NumericError::SparseLayout(format!("column index out of range in row {r}")));
            }
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite_value()) {
            return Err(NumericError::NonFinite(i));
        }
        Ok(Self { rows, cols, offsets, indices, values })
    }

    /// Builds from per-row `(column, value)` lists already sorted by column.
    pub fn from_rows(cols: usize, rows: &[Vec<(usize, T)>]) -> Result<Self, NumericError> {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        offsets.push(0);
        for row in rows {
            for (c, v) in row {
                indices.push(*c);
                values.push(v.clone());
            }
            offsets.push(indices.len());
        }
        Self::from_csr(rows.len(), cols, offsets, indices, values)
    }

    pub fn from_dense(m: &DenseMatrix<T>) -> Self {
        let rows: Vec<Vec<(usize, T)>> = (0..m.rows())
            .map(|i| m.row(i).iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect())
            .collect();
        Self::from_rows(m.cols(), &rows).expect("dense matrix yields a valid layout")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, &T)> {
        let span = self.offsets[r]..self.offsets[r + 1];
        self.indices[span.clone()].iter().copied().zip(&self.values[span])
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (c, v) in self.row(r) {
                d.set(r, c, v.clone());
            }
        }
        d
    }

    pub fn matvec(&self, v: &Point<T>) -> Point<T> {
        assert_eq!(self.cols, v.dim(), "dimension mismatch");
        let out = (0..self.rows)
            .map(|r| self.row(r).fold(T::zero(), |acc, (c, a)| acc + a.clone() * v[c].clone()))
            .collect();
        Point::from_vec_unchecked(out)
    }

    pub fn matvec_transpose(&self, v: &Point<T>) -> Point<T> {
        assert_eq!(self.rows, v.dim(), "dimension mismatch");
        let mut out = vec![T::zero(); self.cols];
        for r in 0..self.rows {
            for (c, a) in self.row(r) {
                out[c] = out[c].clone() + a.clone() * v[r].clone();
            }
        }
        Point::from_vec_unchecked(out)
    }
}

impl<T: Scalar> LinearOperator<T> for SparseMatrix<T> {
    fn nrows(&self) -> usize {
        self.rows
    }

    fn ncols(&self) -> usize {
        self.cols
    }

    fn apply(&self, v: &Point<T>) -> Point<T> {
        self.matvec(v)
    }

    fn apply_transpose(&self, v: &Point<T>) -> Point<T> {
        self.matvec_transpose(v)
    }
}
