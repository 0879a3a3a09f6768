use crate::error::NumericError;
use crate::numeric::{LinearOperator, Point};
use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, NumericError> {
        if data.len() != rows * cols {
            return Err(NumericError::Shape { expected: rows * cols, got: data.len() });
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite_value()) {
            return Err(NumericError::NonFinite(i));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self, NumericError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(NumericError::Shape { expected: c, got: row.len() });
            }
            data.extend(row.iter().cloned());
        }
        Self::from_row_major(r, c, data)
    }

    /// Convenience for tests and fixed examples.
    pub fn from_f64_rows(rows: &[&[f64]]) -> Result<Self, NumericError> {
        let rows: Vec<Vec<T>> = rows.iter().map(|r| r.iter().map(|&v| T::from_f64_lossy(v)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v.clone() * c.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k).clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * other.get(k, j).clone();
                }
            }
        }
        out
    }

    /// `[[a, b], [c, d]]` from four blocks of compatible shapes.
    pub fn block2x2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows, "dimension mismatch");
        assert_eq!(c.rows, d.rows, "dimension mismatch");
        assert_eq!(a.cols, c.cols, "dimension mismatch");
        assert_eq!(b.cols, d.cols, "dimension mismatch");
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut out = Self::zeros(rows, cols);
        for (r0, c0, m) in [(0, 0, a), (0, a.cols, b), (a.rows, 0, c), (a.rows, a.cols, d)] {
            for i in 0..m.rows {
                for j in 0..m.cols {
                    out.set(r0 + i, c0 + j, m.get(i, j).clone());
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &Point<T>) -> Point<T> {
        assert_eq!(self.cols, v.dim(), "dimension mismatch");
        let x = v.as_slice();
        let out = (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect();
        Point::from_vec_unchecked(out)
    }

    pub fn matvec_transpose(&self, v: &Point<T>) -> Point<T> {
        assert_eq!(self.rows, v.dim(), "dimension mismatch");
        let mut out = vec![T::zero(); self.cols];
        for i in 0..self.rows {
            let vi = v[i].clone();
            if vi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o = o.clone() + a.clone() * vi.clone();
            }
        }
        Point::from_vec_unchecked(out)
    }

    pub fn to_f64(&self) -> DenseMatrix<f64> {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::to_f64_lossy).collect() }
    }
}

impl<T: Scalar> LinearOperator<T> for DenseMatrix<T> {
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matvec_examples() {
        let id = DenseMatrix::<f64>::identity(3);
        let v = Point::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(id.matvec(&v), v);

        let a = DenseMatrix::<f64>::from_f64_rows(&[&[7.0, 6.0], &[1.0, 0.0]]).unwrap();
        let v = Point::new(vec![-1.0, -7.0]).unwrap();
        assert_eq!(a.matvec(&v).as_slice(), &[-49.0, -1.0]);

        let z = DenseMatrix::<f64>::zeros(2, 4);
        let v = Point::new(vec![3.0, -1.0, 2.5, 9.0]).unwrap();
        assert!(z.matvec(&v).is_zero());
    }

    #[test]
    fn shape_and_finiteness_checked() {
        assert!(DenseMatrix::<f64>::from_row_major(2, 2, vec![1.0; 3]).is_err());
        assert!(DenseMatrix::<f64>::from_row_major(1, 2, vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn matvec_dimension_mismatch_panics() {
        let a = DenseMatrix::<f64>::identity(2);
        let _ = a.matvec(&Point::zeros(3));
    }

    #[test]
    fn transpose_matvec_agrees() {
        let a = DenseMatrix::<f64>::from_f64_rows(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]]).unwrap();
        let v = Point::new(vec![1.0, -1.0]).unwrap();
        assert_eq!(a.matvec_transpose(&v), a.transpose().matvec(&v));
    }
}
