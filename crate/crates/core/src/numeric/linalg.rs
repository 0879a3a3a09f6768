//! Small dense factorizations: LU with partial pivoting (any ordered field),
//! Householder QR for tall least-squares problems, and a 1-norm condition
//! estimate.

use crate::error::NumericError;
use crate::numeric::DenseMatrix;
use crate::scalar::{Real, Scalar};

/// `P A = L U` with unit lower-triangular `L`, packed into one matrix.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    n: usize,
    packed: Vec<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> Lu<T> {
    pub fn factor(a: &DenseMatrix<T>) -> Result<Self, NumericError> {
        assert!(a.is_square(), "LU needs a square matrix");
        let n = a.rows();
        let mut m = a.data().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = m[k * n + k].abs();
            for i in k + 1..n {
                let v = m[i * n + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best.is_zero() {
                return Err(NumericError::Singular);
            }
            if p != k {
                for j in 0..n {
                    m.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = m[k * n + k].clone();
            for i in k + 1..n {
                let f = m[i * n + k].clone() / pivot.clone();
                if f.is_zero() {
                    m[i * n + k] = f;
                    continue;
                }
                for j in k + 1..n {
                    let v = m[i * n + j].clone() - f.clone() * m[k * n + j].clone();
                    m[i * n + j] = v;
                }
                m[i * n + k] = f;
            }
        }
        Ok(Self { n, packed: m, perm })
    }

    fn at(&self, i: usize, j: usize) -> &T {
        &self.packed[i * self.n + j]
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        assert_eq!(b.len(), n, "dimension mismatch");
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for i in 0..n {
            let mut s = x[i].clone();
            for (j, xj) in x.iter().enumerate().take(i) {
                s = s - self.at(i, j).clone() * xj.clone();
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i].clone();
            for (j, xj) in x.iter().enumerate().skip(i + 1) {
                s = s - self.at(i, j).clone() * xj.clone();
            }
            x[i] = s / self.at(i, i).clone();
        }
        x
    }

    /// Solves `Aᵀ x = b`.
    pub fn solve_transpose(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        assert_eq!(b.len(), n, "dimension mismatch");
        // Aᵀ = Uᵀ Lᵀ P, so solve Uᵀ w = b, Lᵀ v = w, x = Pᵀ v.
        let mut w = b.to_vec();
        for i in 0..n {
            let mut s = w[i].clone();
            for (j, wj) in w.iter().enumerate().take(i) {
                s = s - self.at(j, i).clone() * wj.clone();
            }
            w[i] = s / self.at(i, i).clone();
        }
        for i in (0..n).rev() {
            let mut s = w[i].clone();
            for (j, wj) in w.iter().enumerate().skip(i + 1) {
                s = s - self.at(j, i).clone() * wj.clone();
            }
            w[i] = s;
        }
        let mut x = vec![T::zero(); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = w[i].clone();
        }
        x
    }
}

/// Solves `A x = b` by LU with partial pivoting.
pub fn solve<T: Scalar>(a: &DenseMatrix<T>, b: &[T]) -> Result<Vec<T>, NumericError> {
    Ok(Lu::factor(a)?.solve(b))
}

pub fn norm1<T: Real>(a: &DenseMatrix<T>) -> T {
    (0..a.cols()).map(|j| (0..a.rows()).fold(T::zero(), |s, i| s + a.get(i, j).abs())).fold(T::zero(), T::max)
}

/// Hager's estimate of `‖A⁻¹‖₁` from solves with `A` and `Aᵀ`.
pub fn inverse_norm1_estimate<T: Real>(
    n: usize,
    solve: impl Fn(&[T]) -> Vec<T>,
    solve_t: impl Fn(&[T]) -> Vec<T>,
) -> T {
    let mut x = vec![T::one() / T::from_usize(n).unwrap(); n];
    let mut est = T::zero();
    for _ in 0..5 {
        let y = solve(&x);
        est = y.iter().fold(T::zero(), |s, v| s + v.abs());
        let xi: Vec<T> = y.iter().map(|v| if *v >= T::zero() { T::one() } else { -T::one() }).collect();
        let z = solve_t(&xi);
        let (jmax, zmax) =
            z.iter().enumerate().fold((0, T::zero()), |(bj, bv), (j, v)| if v.abs() > bv { (j, v.abs()) } else { (bj, bv) });
        let ztx = z.iter().zip(&x).fold(T::zero(), |s, (a, b)| s + *a * *b);
        if zmax <= ztx {
            break;
        }
        x = vec![T::zero(); n];
        x[jmax] = T::one();
    }
    est
}

/// 1-norm condition estimate of a square matrix; infinite when singular.
pub fn condition_estimate<T: Real>(a: &DenseMatrix<T>) -> T {
    match Lu::factor(a) {
        Ok(lu) => {
            let inv = inverse_norm1_estimate(a.rows(), |b| lu.solve(b), |b| lu.solve_transpose(b));
            norm1(a) * inv
        }
        Err(_) => T::infinity(),
    }
}

/// Householder QR of a tall `n × m` matrix given by its columns.
#[derive(Debug, Clone)]
pub struct Qr<T> {
    n: usize,
    m: usize,
    /// Reflector vectors, one per column, each of length `n - k`.
    reflectors: Vec<Vec<T>>,
    /// Upper-triangular factor, row-major `m × m`.
    r: Vec<T>,
}

impl<T: Real> Qr<T> {
    pub fn factor(columns: &[&[T]]) -> Self {
        let m = columns.len();
        let n = columns.first().map_or(0, |c| c.len());
        assert!(m <= n, "QR expects a tall matrix");
        let mut a: Vec<Vec<T>> = columns.iter().map(|c| c.to_vec()).collect();
        let mut reflectors = Vec::with_capacity(m);
        let mut r = vec![T::zero(); m * m];
        for k in 0..m {
            let x = &a[k][k..];
            let alpha = x.iter().fold(T::zero(), |s, v| s + *v * *v).sqrt();
            let mut v = x.to_vec();
            let sign = if v[0] >= T::zero() { T::one() } else { -T::one() };
            v[0] = v[0] + sign * alpha;
            let vnorm_sq = v.iter().fold(T::zero(), |s, t| s + *t * *t);
            if vnorm_sq > T::zero() {
                for col in a.iter_mut().skip(k) {
                    let seg = &mut col[k..];
                    let proj = seg.iter().zip(&v).fold(T::zero(), |s, (p, q)| s + *p * *q);
                    let f = (proj + proj) / vnorm_sq;
                    for (s, q) in seg.iter_mut().zip(&v) {
                        *s = *s - f * *q;
                    }
                }
            }
            for (i, row) in r.chunks_mut(m).enumerate().take(k + 1) {
                row[k] = a[k][i];
            }
            reflectors.push(v);
        }
        Self { n, m, reflectors, r }
    }

    pub fn r(&self) -> DenseMatrix<T> {
        DenseMatrix::from_row_major(self.m, self.m, self.r.clone()).expect("finite factor")
    }

    /// `Qᵀ b`, first `m` entries.
    fn qt_apply(&self, b: &[T]) -> Vec<T> {
        assert_eq!(b.len(), self.n, "dimension mismatch");
        let mut y = b.to_vec();
        for (k, v) in self.reflectors.iter().enumerate() {
            let vnorm_sq = v.iter().fold(T::zero(), |s, t| s + *t * *t);
            if vnorm_sq.is_zero() {
                continue;
            }
            let seg = &mut y[k..];
            let proj = seg.iter().zip(v).fold(T::zero(), |s, (p, q)| s + *p * *q);
            let f = (proj + proj) / vnorm_sq;
            for (s, q) in seg.iter_mut().zip(v) {
                *s = *s - f * *q;
            }
        }
        y.truncate(self.m);
        y
    }

    fn r_at(&self, i: usize, j: usize) -> T {
        self.r[i * self.m + j]
    }

    pub fn solve_r(&self, b: &[T]) -> Result<Vec<T>, NumericError> {
        let m = self.m;
        let mut x = b.to_vec();
        for i in (0..m).rev() {
            let d = self.r_at(i, i);
            if d.is_zero() {
                return Err(NumericError::Singular);
            }
            let mut s = x[i];
            for j in i + 1..m {
                s = s - self.r_at(i, j) * x[j];
            }
            x[i] = s / d;
        }
        Ok(x)
    }

    fn solve_r_transpose(&self, b: &[T]) -> Vec<T> {
        let m = self.m;
        let mut x = b.to_vec();
        for i in 0..m {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.r_at(j, i) * x[j];
            }
            x[i] = s / self.r_at(i, i);
        }
        x
    }

    /// `argmin_c ‖A c − b‖`.
    pub fn least_squares(&self, b: &[T]) -> Result<Vec<T>, NumericError> {
        self.solve_r(&self.qt_apply(b))
    }

    /// 1-norm condition estimate of the triangular factor.
    pub fn r_condition_estimate(&self) -> T {
        if (0..self.m).any(|i| self.r_at(i, i).is_zero()) {
            return T::infinity();
        }
        let inv = inverse_norm1_estimate(
            self.m,
            |b| self.solve_r(b).expect("nonsingular"),
            |b| self.solve_r_transpose(b),
        );
        norm1(&self.r()) * inv
    }
}
