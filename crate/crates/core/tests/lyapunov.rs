mod common;

use flexkit::lyapunov::{lyapunov_v, t1, t2};
use flexkit::problems::rng::SeedStream;
use flexkit::problems::QuadraticMinimax;
use flexkit::solvers::{run_eg, SolverConfig};
use flexkit::Point64;

#[test]
fn lyapunov_dominates_step_lengths() {
    let cases = common::regularized_cases(20);
    let mut rng = SeedStream::new(17, 0);
    for i in 0..1_000 {
        let case = &cases[i % cases.len()];
        let l = *case.inst.lipschitz();
        let gamma = (0.05 + 0.9 * rng.uniform()) / l;
        let z = common::random_point(&mut rng, case.inst.dim(), 2.0);
        let zbar = t1(&case.inst, &gamma, &z);
        let zplus = t2(&case.inst, &gamma, &z, Some(&zbar));
        let v = lyapunov_v(&case.inst, &gamma, &z, &zbar, &zplus);
        let bound = (1.0 - gamma * l) / (gamma * gamma) * (zplus.dist_sq(&zbar) + zplus.dist_sq(&z));
        assert!(v >= bound - 1e-10 * (1.0 + bound), "{}: 𝒱 = {v} < {bound}", case.label);
        assert!(v >= -1e-12, "{}: 𝒱 = {v}", case.label);
    }
}

#[test]
fn lyapunov_vanishes_at_solutions() {
    for seed in 0..10 {
        for omega in [0.0, 1e-3, 1.0] {
            let inst = QuadraticMinimax::generate(4, omega, seed).unwrap().instance().unwrap();
            let zs = inst.known_solution().unwrap().clone();
            let gamma = 0.9 / inst.lipschitz();
            let zbar = t1(&inst, &gamma, &zs);
            let v = lyapunov_v(&inst, &gamma, &zs, &zbar, &t2(&inst, &gamma, &zs, Some(&zbar)));
            assert!(v.abs() <= 1e-16 * (1.0 + zs.norm_sq()), "{v}");
        }
    }
}

#[test]
fn lyapunov_reduces_to_squared_operator_norm_without_regularizer() {
    let mut rng = SeedStream::new(4, 1);
    for case in common::mixed_cases(24).iter().filter(|c| c.inst.prox_spec().is_zero()) {
        for _ in 0..50 {
            let gamma = 0.9 / case.inst.lipschitz();
            let z = common::random_point(&mut rng, case.inst.dim(), 3.0);
            let zbar = t1(&case.inst, &gamma, &z);
            let v = lyapunov_v(&case.inst, &gamma, &z, &zbar, &t2(&case.inst, &gamma, &z, Some(&zbar)));
            let f2 = case.inst.eval_f_quiet(&z).norm_sq();
            assert!((v - f2).abs() <= 1e-10 * (1.0 + f2), "{}: {v} vs {f2}", case.label);
        }
    }
}

#[test]
fn residual_measures_are_ordered_along_extragradient() {
    let cases = [common::quadmm(6, 0.0, 2), common::quadmm(5, 1e-2, 3), common::quadmm_l1(5, 4, 0.1), common::quadmm_l1(3, 5, 0.5)];
    for case in &cases {
        let cfg = SolverConfig { max_iterations: 400, residual_tolerance: 0.0, ..SolverConfig::default() };
        let trace = run_eg(&case.inst, &cfg, &case.start).unwrap();
        for (prev, rec) in trace.records.iter().zip(&trace.records[1..]) {
            let tangent = rec.tangent_residual.unwrap();
            let tseng = rec.tseng_residual.unwrap();
            assert!(rec.natural_residual <= tangent + 1e-10, "{}: k={}", case.label, rec.k);
            assert!(tangent <= tseng + 1e-10, "{}: k={}", case.label, rec.k);
            assert!(tseng * tseng <= prev.v + 1e-8, "{}: k={}", case.label, rec.k);
        }
    }
}

#[test]
fn operators_fix_solutions() {
    let inst = QuadraticMinimax::generate(3, 1e-2, 8).unwrap().instance().unwrap();
    let zs: Point64 = inst.known_solution().unwrap().clone();
    let gamma = 0.5 / inst.lipschitz();
    assert!(t1(&inst, &gamma, &zs).dist(&zs) <= 1e-15);
    assert!(t2(&inst, &gamma, &zs, None).dist(&zs) <= 1e-15);
}
