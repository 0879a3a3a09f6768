use std::path::Path;
use std::sync::Arc;

use crate::error::{NumericError, ProblemError};
use crate::numeric::spectral::{POWER_MAX_ITER, POWER_TOL};
use crate::numeric::{spectral_norm, symmetric_eigenvalues, DenseMatrix, Point, SparseMatrix};
use crate::problems::libsvm::{parse_libsvm, LabeledSparseData};
use crate::problems::{ProblemInstance, ProxSpec};

/// `eᵘ / (1 + eᵘ)` without overflow.
pub fn logistic(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + eᵘ)` without overflow.
pub fn softplus(u: f64) -> f64 {
    u.max(0.0) + (-u.abs()).exp().ln_1p()
}

/// Sparse logistic regression `min Σ log(1 + exp([Kx]ᵢ)) + λ‖x‖₁` as the
/// inclusion with `F(x) = Kᵀσ(Kx)` and `g = λ‖·‖₁`.
pub fn logistic_instance(data: &LabeledSparseData, lambda: f64, name: &str) -> Result<ProblemInstance<f64>, ProblemError> {
    if !(lambda >= 0.0) {
        return Err(ProblemError::Invalid("lambda must be nonnegative".into()));
    }
    let k = Arc::new(data.k.clone());
    let lip = squared_spectral_norm(&k)? / 4.0;
    let (kf, ko, kj) = (Arc::clone(&k), Arc::clone(&k), Arc::clone(&k));
    let inst = ProblemInstance::new(
        name,
        data.features,
        move |x: &Point<f64>| {
            let u = kf.matvec(x);
            let s = Point::from_f64(&u.iter().map(|&v| logistic(v)).collect::<Vec<_>>()).expect("finite");
            kf.matvec_transpose(&s)
        },
        ProxSpec::l1(lambda)?,
        lip,
    )?
    .with_objective(move |x: &Point<f64>| {
        ko.matvec(x).iter().map(|&u| softplus(u)).sum::<f64>() + lambda * x.iter().map(|v| v.abs()).sum::<f64>()
    })
    .with_jacobian(move |x: &Point<f64>| {
        let u = kj.matvec(x);
        let n = kj.cols();
        let mut jac = DenseMatrix::zeros(n, n);
        for r in 0..kj.rows() {
            let s = logistic(u[r]);
            let w = s * (1.0 - s);
            let row: Vec<(usize, f64)> = kj.row(r).map(|(c, v)| (c, *v)).collect();
            for &(i, vi) in &row {
                for &(j, vj) in &row {
                    jac.set(i, j, jac.get(i, j) + w * vi * vj);
                }
            }
        }
        jac
    });
    Ok(inst)
}

/// Up to this many features `‖K‖²` comes from the eigenvalues of the Gram
/// matrix `KᵀK`; beyond it, from power iteration.
pub const GRAM_FEATURE_LIMIT: usize = 2048;

fn squared_spectral_norm(k: &SparseMatrix<f64>) -> Result<f64, ProblemError> {
    let n = k.cols();
    if n > GRAM_FEATURE_LIMIT {
        let norm = spectral_norm(k, POWER_TOL, POWER_MAX_ITER)?;
        return Ok(norm * norm);
    }
    let mut gram = DenseMatrix::zeros(n, n);
    for r in 0..k.rows() {
        let row: Vec<(usize, f64)> = k.row(r).map(|(c, v)| (c, *v)).collect();
        for &(i, vi) in &row {
            for &(j, vj) in &row {
                gram.set(i, j, gram.get(i, j) + vi * vj);
            }
        }
    }
    let top = symmetric_eigenvalues(&gram).last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Err(NumericError::ZeroMatrix.into());
    }
    Ok(top)
}

pub fn load_logistic(path: &Path, lambda: f64) -> Result<ProblemInstance<f64>, ProblemError> {
    let bytes = std::fs::read(path).map_err(|source| ProblemError::Io { path: path.display().to_string(), source })?;
    let data = parse_libsvm(&bytes, None)?;
    logistic_instance(&data, lambda, &format!("logistic:{}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_sample_values() {
        let data = parse_libsvm(b"+1 1:2\n", None).unwrap();
        let inst = logistic_instance(&data, 0.0, "t").unwrap();
        assert!((inst.lipschitz() - 1.0).abs() < 1e-12);
        let f0 = inst.eval_f_quiet(&Point::zeros(1));
        assert!((f0[0] + 1.0).abs() < 1e-15);
        let x = Point::new(vec![0.3]).unwrap();
        let expected = -2.0 * logistic(-0.6);
        assert!((inst.eval_f_quiet(&x)[0] - expected).abs() < 1e-15);
    }

    #[test]
    fn stable_helpers() {
        assert_eq!(logistic(0.0), 0.5);
        assert!(logistic(-800.0) >= 0.0 && logistic(800.0) == 1.0);
        assert!((softplus(0.0) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(softplus(1000.0), 1000.0);
    }
}
