use super::report::{fmt_point, CounterexampleReport};
use crate::lyapunov::lyapunov_value;
use crate::numeric::linalg::Lu;
use crate::numeric::{spectral_norm, DenseMatrix, Point};
use crate::problems::{ProblemInstance, ProxSpec};
use crate::scalar::Scalar;
use crate::solvers::{step_resolvent_eg, tseng_step};
use crate::Rational;

/// Relative agreement required between the float and exact pipelines.
const FLOAT_AGREEMENT: f64 = 1e-9;
const B2_RADIUS: f64 = 1.132596;
const B2_RADIUS_TOL: f64 = 1e-5;
const B2_FLOAT_STEPS: usize = 50;

fn q(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

fn qp(v: &[(i64, i64)]) -> Point<Rational> {
    Point::new(v.iter().map(|&(n, d)| q(n, d)).collect()).expect("rationals are finite")
}

fn b1_blocks() -> DenseMatrix<f64> {
    let a = DenseMatrix::from_f64_rows(&[&[7.0, 6.0], &[1.0, 0.0]]).expect("finite");
    let z = DenseMatrix::zeros(2, 2);
    DenseMatrix::block2x2(&z, &a, &a.transpose().scale(&-1.0), &z)
}

/// `F(x, y) = (Ay, −Aᵀx)` with `A = [[7, 6], [1, 0]]` and the indicator of
/// `[−7, 6]² × [1, 8]²`.
pub fn b1_instance<T: Scalar>() -> ProblemInstance<T> {
    let j = b1_blocks();
    let l = spectral_norm(&j, 1e-12, 10_000).expect("nonzero matrix");
    let conv = |v: &[f64]| v.iter().map(|&x| T::from_f64_lossy(x)).collect::<Vec<T>>();
    let jt = DenseMatrix::from_row_major(4, 4, conv(j.data())).expect("finite");
    let prox = ProxSpec::boxed(conv(&[-7.0, -7.0, 1.0, 1.0]), conv(&[6.0, 6.0, 8.0, 8.0])).expect("ordered box");
    ProblemInstance::affine("counterexample-b1", jt, Point::zeros(4), prox, T::from_f64_lossy(l)).expect("valid instance")
}

fn rel_err(approx: &Point<f64>, exact: &Point<Rational>) -> f64 {
    let e = exact.to_f64();
    approx.dist(&e) / e.norm().max(f64::MIN_POSITIVE)
}

fn rel_err_scalar(approx: f64, exact: &Rational) -> f64 {
    let e = exact.to_f64_lossy();
    (approx - e).abs() / e.abs().max(f64::MIN_POSITIVE)
}

/// Two Tseng steps on the box-constrained bilinear instance, where `𝒱` increases.
pub fn verify_tseng_counterexample() -> CounterexampleReport {
    let inst = b1_instance::<Rational>();
    let gamma = q(1, 10);
    let z0 = qp(&[(-1, 1), (-7, 1), (-1, 1), (7, 1)]);
    let s0 = tseng_step(&inst, &gamma, &z0);
    let s1 = tseng_step(&inst, &gamma, &s0.z_next);
    let v0 = lyapunov_value(&gamma, &z0, &s0.zbar, &s0.z_next, &s0.fz, &s0.fzbar);
    let v1 = lyapunov_value(&gamma, &s0.z_next, &s1.zbar, &s1.z_next, &s1.fz, &s1.fzbar);

    let mut rep = CounterexampleReport::new("tseng-b1", v0.clone(), v1.clone());
    let expected = [
        ("zbar0", qp(&[(-9, 2), (-69, 10), (1, 1), (32, 5)]), &s0.zbar),
        ("z1", qp(&[(-277, 50), (-71, 10), (-36, 25), (43, 10)]), &s0.z_next),
        ("zbar1", qp(&[(-7, 1), (-1739, 250), (1, 1), (1, 1)]), &s1.zbar),
    ];
    for (name, want, got) in &expected {
        rep.check(*name, fmt_point(want), fmt_point(got), want == *got);
    }
    rep.check_exact("V0", &q(1662, 1), &v0);
    rep.check_exact("V1", &q(1187246, 625), &v1);
    rep.check("V1 > V0", "true", rep.monotonicity_violated, rep.monotonicity_violated);
    rep.iterates = vec![
        ("z0".into(), z0.clone()),
        ("zbar0".into(), s0.zbar.clone()),
        ("z1".into(), s0.z_next.clone()),
        ("zbar1".into(), s1.zbar.clone()),
        ("z2".into(), s1.z_next.clone()),
    ];

    let finst = b1_instance::<f64>();
    let fz0 = z0.to_f64();
    let f0 = tseng_step(&finst, &0.1, &fz0);
    let f1 = tseng_step(&finst, &0.1, &f0.z_next);
    let fv0 = lyapunov_value(&0.1, &fz0, &f0.zbar, &f0.z_next, &f0.fz, &f0.fzbar);
    let fv1 = lyapunov_value(&0.1, &f0.z_next, &f1.zbar, &f1.z_next, &f1.fz, &f1.fzbar);
    let errs = [
        ("float zbar0", rel_err(&f0.zbar, &s0.zbar)),
        ("float z1", rel_err(&f0.z_next, &s0.z_next)),
        ("float zbar1", rel_err(&f1.zbar, &s1.zbar)),
        ("float z2", rel_err(&f1.z_next, &s1.z_next)),
        ("float V0", rel_err_scalar(fv0, &v0)),
        ("float V1", rel_err_scalar(fv1, &v1)),
    ];
    for (name, e) in errs {
        rep.check(format!("{name} relative error"), format!("<= {FLOAT_AGREEMENT:e}"), format!("{e:e}"), e <= FLOAT_AGREEMENT);
    }
    rep
}

fn b2_matrices<T: Scalar>() -> (DenseMatrix<T>, DenseMatrix<T>) {
    let a = DenseMatrix::from_f64_rows(&[&[0.0, 9.0], &[-9.0, 0.0]]).expect("finite");
    let b = DenseMatrix::from_f64_rows(&[&[0.0, -4.0], &[4.0, 0.0]]).expect("finite");
    (a, b)
}

/// `C = (I + γB)⁻¹(I − γA(I + γB)⁻¹(I − γA))`, the one-step map `zᵏ ↦ zᵏ⁺¹`.
pub fn b2_iteration_matrix<T: Scalar>(gamma: &T) -> DenseMatrix<T> {
    let (a, b) = b2_matrices::<T>();
    let id = DenseMatrix::<T>::identity(2);
    let lu = Lu::factor(&id.add(&b.scale(gamma))).expect("I + γB is invertible for skew B");
    let resolve = |m: &DenseMatrix<T>| {
        let mt = m.transpose();
        let cols: Vec<Vec<T>> = (0..m.cols()).map(|j| lu.solve(mt.row(j))).collect();
        DenseMatrix::from_rows(&cols).expect("finite").transpose()
    };
    let inner = resolve(&id.sub(&a.scale(gamma)));
    resolve(&id.sub(&a.scale(gamma).matmul(&inner)))
}

/// Largest modulus among the roots of `λ² − tr(M)λ + det(M)`.
pub fn spectral_radius_2x2(m: &DenseMatrix<f64>) -> f64 {
    assert!(m.rows() == 2 && m.cols() == 2, "2 × 2 matrix expected");
    let tr = m.get(0, 0) + m.get(1, 1);
    let det = m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0);
    let disc = tr * tr - 4.0 * det;
    if disc < 0.0 {
        det.sqrt()
    } else {
        let s = disc.sqrt();
        ((tr + s) / 2.0).abs().max(((tr - s) / 2.0).abs())
    }
}

/// Two resolvent-extragradient steps where `T` is linear monotone but not a
/// subdifferential: `𝒱` increases and the iterates diverge.
pub fn verify_resolvent_counterexample() -> CounterexampleReport {
    let (a, b) = b2_matrices::<Rational>();
    let gamma = q(1, 10);
    let z0 = qp(&[(10, 1), (10, 1)]);
    let (zbar0, z1) = step_resolvent_eg(&a, &b, &gamma, &z0).expect("invertible resolvent");
    let (zbar1, z2) = step_resolvent_eg(&a, &b, &gamma, &z1).expect("invertible resolvent");
    let v0 = lyapunov_value(&gamma, &z0, &zbar0, &z1, &a.matvec(&z0), &a.matvec(&zbar0));
    let v1 = lyapunov_value(&gamma, &z1, &zbar1, &z2, &a.matvec(&z1), &a.matvec(&zbar1));

    let mut rep = CounterexampleReport::new("resolvent-b2", v0.clone(), v1.clone());
    let expected = [
        ("zbar0", qp(&[(215, 29), (465, 29)]), &zbar0),
        ("z1", qp(&[(3245, 1682), (26745, 1682)]), &z1),
        ("zbar1", qp(&[(-447965, 97556), (1899785, 97556)]), &zbar1),
        ("z2", qp(&[(-53118995, 5658248), (87834005, 5658248)]), &z2),
    ];
    for (name, want, got) in &expected {
        rep.check(*name, fmt_point(want), fmt_point(got), want == *got);
    }
    rep.check_exact("V0", &q(5875000, 841), &v0);
    rep.check_exact("V1", &q(12676046875, 1414562), &v1);
    rep.check("V1 > V0", "true", rep.monotonicity_violated, rep.monotonicity_violated);

    let c = b2_iteration_matrix(&gamma).to_f64();
    let radius = spectral_radius_2x2(&c);
    rep.check(
        "spectral radius of C",
        format!("{B2_RADIUS} ± {B2_RADIUS_TOL:e}"),
        format!("{radius:.9}"),
        (radius - B2_RADIUS).abs() <= B2_RADIUS_TOL,
    );

    let (fa, fb) = b2_matrices::<f64>();
    let mut z = z0.to_f64();
    let mut norms = vec![z.norm()];
    let mut float_iterates = Vec::new();
    for _ in 0..B2_FLOAT_STEPS {
        let (zb, zn) = step_resolvent_eg(&fa, &fb, &0.1, &z).expect("invertible resolvent");
        float_iterates.push(zb);
        z = zn;
        float_iterates.push(z.clone());
        norms.push(z.norm());
    }
    let increasing = norms.windows(2).all(|w| w[1] > w[0]);
    rep.check(
        format!("norm strictly increasing over {B2_FLOAT_STEPS} float steps"),
        "true",
        format!("{increasing} (final norm {:.6e})", norms[B2_FLOAT_STEPS]),
        increasing,
    );
    let exact = [&zbar0, &z1, &zbar1, &z2];
    let worst = exact.iter().zip(&float_iterates).map(|(e, f)| rel_err(f, e)).fold(0.0, f64::max);
    rep.check("float iterates relative error", format!("<= {FLOAT_AGREEMENT:e}"), format!("{worst:e}"), worst <= FLOAT_AGREEMENT);

    rep.iterates = vec![
        ("z0".into(), z0),
        ("zbar0".into(), zbar0),
        ("z1".into(), z1),
        ("zbar1".into(), zbar1),
        ("z2".into(), z2),
    ];
    rep
}
