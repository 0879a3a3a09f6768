mod common;

use flexkit::directions::{aa_direction, newton_reg_direction, safeguard, superlin_ratio, AndersonDirections, AndersonKind, DirectionBuffer, NewtonDirections, SuperlinTracker};
use flexkit::problems::rng::SeedStream;
use flexkit::solvers::{run_flex, run_proxflex, SolverConfig};
use flexkit::{DenseMatrix, Point64, ProblemInstance, ProxSpec};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn point(v: &[f64]) -> Point64 {
    Point64::new(v.to_vec()).unwrap()
}

fn to_vec(p: &Point64) -> DVector<f64> {
    DVector::from_column_slice(p.as_slice())
}

/// A buffer filled from `m + 1` random points under the affine residual `r = Mz + b`.
fn affine_buffer(rng: &mut SeedStream, n: usize, m: usize) -> (DirectionBuffer<f64>, DMatrix<f64>, DMatrix<f64>) {
    let mat = DMatrix::from_fn(n, n, |i, j| if i == j { 2.0 } else { 0.0 } + 0.5 * rng.standard_normal());
    let b = DVector::from_fn(n, |_, _| rng.standard_normal());
    let mut buf = DirectionBuffer::new(m);
    let mut s = DMatrix::zeros(n, m);
    let mut y = DMatrix::zeros(n, m);
    let mut prev: Option<(DVector<f64>, DVector<f64>)> = None;
    for k in 0..=m {
        let z = DVector::from_fn(n, |_, _| rng.standard_normal());
        let r = &mat * &z + &b;
        buf.push(&Point64::new(z.as_slice().to_vec()).unwrap(), &Point64::new(r.as_slice().to_vec()).unwrap());
        if let Some((zp, rp)) = prev {
            s.set_column(k - 1, &(&z - zp));
            y.set_column(k - 1, &(&r - rp));
        }
        prev = Some((z, r));
    }
    (buf, s, y)
}

proptest! {
    #[test]
    fn safeguard_respects_the_bound(d in prop::collection::vec(-10.0f64..10.0, 4), r in prop::collection::vec(-10.0f64..10.0, 4), bound in 0.01f64..10.0) {
        let (d, r) = (point(&d), point(&r));
        let out = safeguard(&d, &r, bound);
        prop_assert!(out.norm() <= bound * r.norm() * (1.0 + 1e-12));
        if d.norm() <= bound * r.norm() {
            prop_assert_eq!(out, d);
        } else {
            // Parallel to d with the same orientation.
            prop_assert!((out.dot(&d) - out.norm() * d.norm()).abs() <= 1e-9 * d.norm_sq());
        }
    }

    #[test]
    fn anderson_types_agree_when_secants_match(z0 in prop::collection::vec(-3.0f64..3.0, 3), z1 in prop::collection::vec(-3.0f64..3.0, 3), c in prop::collection::vec(-1.0f64..1.0, 3)) {
        // r(z) = z + c gives s = y.
        let (z0, z1, c) = (point(&z0), point(&z1), point(&c));
        prop_assume!(z0.dist(&z1) > 1e-3);
        let mut buf = DirectionBuffer::new(1);
        buf.push(&z0, &z0.add(&c));
        buf.push(&z1, &z1.add(&c));
        let r = z1.add(&c);
        let d1 = aa_direction(&buf, &r, AndersonKind::TypeI);
        let d2 = aa_direction(&buf, &r, AndersonKind::TypeII);
        prop_assert!(!d1.fallback && !d2.fallback);
        prop_assert!(d1.d.dist(&d2.d) <= 1e-12 * (1.0 + r.norm()));
    }
}

#[test]
fn anderson_matches_dense_multisecant_oracle() {
    let mut rng = SeedStream::new(21, 0);
    for trial in 0..20 {
        let (n, m) = (3 + trial % 4, 1 + trial % 3);
        let (buf, s, y) = affine_buffer(&mut rng, n, m);
        let r = DVector::from_fn(n, |_, _| rng.standard_normal());
        let rp = Point64::new(r.as_slice().to_vec()).unwrap();
        let diff = &s - &y;
        let type1 = -&r - &diff * (s.transpose() * &y).lu().solve(&(s.transpose() * &r)).unwrap();
        let type2 = -&r - &diff * (y.transpose() * &y).cholesky().unwrap().solve(&(y.transpose() * &r));
        for (kind, oracle) in [(AndersonKind::TypeI, type1), (AndersonKind::TypeII, type2)] {
            let d = aa_direction(&buf, &rp, kind);
            assert!(!d.fallback);
            assert!((to_vec(&d.d) - &oracle).norm() <= 1e-9 * (1.0 + oracle.norm()), "{kind:?} n={n} m={m}");
        }
    }
}

#[test]
fn anderson_type2_rank_one_expansion() {
    let mut rng = SeedStream::new(5, 1);
    let (buf, s, y) = affine_buffer(&mut rng, 4, 1);
    let r = point(&[0.3, -1.0, 2.0, 0.5]);
    let (s, y) = (Point64::new(s.as_slice().to_vec()).unwrap(), Point64::new(y.as_slice().to_vec()).unwrap());
    let expected = r.neg().sub(&s.sub(&y).scale(&(y.dot(&r) / y.dot(&y))));
    let d = aa_direction(&buf, &r, AndersonKind::TypeII);
    assert!(d.d.dist(&expected) <= 1e-12 * expected.norm());
}

#[test]
fn buffer_evicts_oldest_and_restarts_on_repeats() {
    let mut buf = DirectionBuffer::<f64>::new(2);
    for k in 0..5 {
        buf.push(&point(&[k as f64, 0.0]), &point(&[0.0, k as f64 * k as f64]));
    }
    assert_eq!(buf.len(), 2);
    let oldest = buf.pairs().next().unwrap();
    assert_eq!(oldest.1, &point(&[0.0, 5.0]));
    buf.push(&point(&[4.0, 0.0]), &point(&[1.0, 1.0]));
    assert!(buf.is_empty());
    assert_eq!(buf.restarts(), 1);
}

#[test]
fn newton_examples() {
    let ident = ProblemInstance::affine("id", DenseMatrix::identity(3), Point64::zeros(3), ProxSpec::Zero, 1.0).unwrap();
    let z = point(&[1.0, -2.0, 0.5]);
    for c in [0.1, 1.0, 4.0] {
        let step = newton_reg_direction(&ident, &z, c).unwrap();
        assert!(step.d.dist(&z.scale(&(-1.0 / (c * z.norm() + 1.0)))) <= 1e-14);
    }
    assert!(newton_reg_direction(&ident, &Point64::zeros(3), 1.0).unwrap().d.is_zero());

    let mut rng = SeedStream::new(9, 0);
    for seed in 0..10 {
        let case = common::quadmm(4, 1e-2, seed);
        let jac = case.inst.jacobian(&case.start).unwrap();
        let sigma_min = DMatrix::from_row_slice(8, 8, jac.data()).singular_values().min();
        let z = common::random_point(&mut rng, 8, 2.0);
        let d = newton_reg_direction(&case.inst, &z, 1.0).unwrap().d;
        assert!(d.norm() <= case.inst.eval_f_quiet(&z).norm() / sigma_min * (1.0 + 1e-10));
    }
}

#[test]
fn newton_ratios_vanish_on_strongly_monotone_problem() {
    let case = common::quadmm(6, 1.0, 4);
    let cfg = SolverConfig { residual_tolerance: 1e-12, ..SolverConfig::default() };
    let t = run_flex(&case.inst, &cfg, &mut NewtonDirections::new(1.0), &case.start).unwrap();
    let ratios: Vec<f64> = t.records.iter().filter_map(|r| r.direction_ratio).collect();
    assert!(ratios.len() >= 3, "{ratios:?}");
    assert!(ratios[ratios.len() - 1] < 1e-2, "{ratios:?}");
    assert!(ratios.windows(2).rev().take(2).all(|w| w[1] < w[0]), "{ratios:?}");

    let mut tracker = SuperlinTracker::new();
    assert_eq!(superlin_ratio(&mut tracker, 0.0, 3.0), 0.0);
    assert_eq!(superlin_ratio(&mut tracker, 3.0, 3.0), 1.0);
    assert_eq!(tracker.ratios(), &[0.0, 1.0]);
}

#[test]
fn fallbacks_never_abort_runs() {
    // No Jacobian: every Newton request falls back to −r.
    let m = DenseMatrix::from_f64_rows(&[&[1.0, 2.0], &[-2.0, 1.0]]).unwrap();
    let inst = ProblemInstance::new("nojac", 2, move |z: &Point64| m.matvec(z), ProxSpec::Zero, 5f64.sqrt()).unwrap();
    let cfg = SolverConfig { max_iterations: 100, residual_tolerance: 0.0, ..SolverConfig::default() };
    let t = run_flex(&inst, &cfg, &mut NewtonDirections::new(1.0), &point(&[1.0, 1.0])).unwrap();
    assert_eq!(t.records.len(), 100);
    assert!(t.fallbacks() > 0);

    // A constant residual makes every y zero and the inner systems singular.
    let flat = ProblemInstance::new("flat", 2, |_: &Point64| point(&[1.0, -1.0]), ProxSpec::Zero, 1.0).unwrap();
    for kind in [AndersonKind::TypeI, AndersonKind::TypeII] {
        let mut p = AndersonDirections::new(kind, 3);
        let t = run_proxflex(&flat, &cfg, &mut p, &point(&[0.5, 0.5])).unwrap();
        assert_eq!(t.records.len(), 100);
        assert!(t.fallbacks() > 0, "{kind:?}");
    }
}
