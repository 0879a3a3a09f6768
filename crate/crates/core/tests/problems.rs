mod common;

use flexkit::problems::rng::SeedStream;
use flexkit::problems::{gen_bilinear_game, parse_libsvm, logistic_instance, project_simplex, BilinearGame, CournotNash, QuadraticMinimax};
use flexkit::solvers::{run_eg, SolverConfig};
use flexkit::{Point64, ProxSpec};
use proptest::prelude::*;

fn probe_monotone_lipschitz(case: &common::Case, pairs: usize, seed: u64) {
    let mut rng = SeedStream::new(seed, 9);
    let n = case.inst.dim();
    let l = *case.inst.lipschitz();
    for _ in 0..pairs {
        let u = common::random_point(&mut rng, n, 3.0);
        let v = common::random_point(&mut rng, n, 3.0);
        let du = u.sub(&v);
        let df = case.inst.eval_f_quiet(&u).sub(&case.inst.eval_f_quiet(&v));
        assert!(df.dot(&du) >= -1e-10 * du.norm_sq(), "{}: monotonicity fails", case.label);
        assert!(df.norm() <= (l + 1e-6) * du.norm(), "{}: Lipschitz bound fails", case.label);
    }
}

#[test]
fn generated_instances_are_monotone_and_lipschitz() {
    for case in common::mixed_cases(12) {
        probe_monotone_lipschitz(&case, 1_000, 5);
    }
    probe_monotone_lipschitz(&common::quadmm(20, 1e-4, 1), 1_000, 6);
}

#[test]
fn logistic_instance_is_monotone_and_lipschitz() {
    let mut text = String::new();
    for i in 0..40 {
        let label = if i % 3 == 0 { "+1" } else { "-1" };
        text.push_str(&format!("{label} 1:{} 3:{} 4:{}\n", (i % 5) as f64 - 2.0, (i % 7) as f64 * 0.5, 1.0 + (i % 2) as f64));
    }
    let data = parse_libsvm(text.as_bytes(), None).unwrap();
    let inst = logistic_instance(&data, 1.0 / 40.0, "small").unwrap();
    let case = common::Case { label: "logistic".into(), start: Point64::zeros(4), inst };
    probe_monotone_lipschitz(&case, 1_000, 7);
}

fn prox_specs() -> Vec<(ProxSpec<f64>, usize)> {
    vec![
        (ProxSpec::Zero, 4),
        (ProxSpec::l1(0.7).unwrap(), 4),
        (ProxSpec::boxed(vec![-1.0, 0.0, 2.0], vec![1.0, 0.5, 3.0]).unwrap(), 3),
        (ProxSpec::simplex_product(vec![3, 2]).unwrap(), 5),
    ]
}

proptest! {
    #[test]
    fn prox_is_nonexpansive(seed in any::<u64>(), t in 0.01f64..5.0) {
        let mut rng = SeedStream::new(seed, 2);
        for (spec, n) in prox_specs() {
            let u = common::random_point(&mut rng, n, 4.0);
            let v = common::random_point(&mut rng, n, 4.0);
            let d = spec.eval(&u, &t).dist(&spec.eval(&v, &t));
            prop_assert!(d <= u.dist(&v) + 1e-12, "{spec:?}: {d} > {}", u.dist(&v));
        }
    }

    #[test]
    fn simplex_blocks_are_distributions(v in prop::collection::vec(-10.0f64..10.0, 6)) {
        let spec = ProxSpec::simplex_product(vec![2, 4]).unwrap();
        let p = spec.eval(&Point64::new(v).unwrap(), &1.0);
        for block in [&p.as_slice()[..2], &p.as_slice()[2..]] {
            prop_assert!(block.iter().all(|&x| x >= 0.0));
            prop_assert!((block.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }

    /// The projection `p` of `v` is characterized by `⟨v − p, q − p⟩ ≤ 0` for
    /// every vertex `q` of the simplex.
    #[test]
    fn simplex_projection_satisfies_variational_inequality(v in prop::collection::vec(-5.0f64..5.0, 1..=5)) {
        let p = project_simplex(&v);
        for vertex in 0..v.len() {
            let ip: f64 = (0..v.len()).map(|i| (v[i] - p[i]) * ((i == vertex) as u8 as f64 - p[i])).sum();
            prop_assert!(ip <= 1e-12, "{ip}");
        }
    }

    /// Brute force over a fine grid around the soft-threshold value.
    #[test]
    fn l1_prox_minimizes_its_objective(v in -5.0f64..5.0, w in 0.0f64..3.0, t in 0.1f64..2.0) {
        let spec = ProxSpec::l1(w).unwrap();
        let x = spec.eval(&Point64::new(vec![v]).unwrap(), &t)[0];
        let obj = |y: f64| t * w * y.abs() + 0.5 * (y - v) * (y - v);
        for k in -200..=200 {
            let y = x + k as f64 * 1e-3;
            prop_assert!(obj(x) <= obj(y) + 1e-15);
        }
    }
}

#[test]
fn eg_counts_two_f_and_two_prox_per_iteration() {
    for case in common::mixed_cases(8) {
        for k in [1usize, 5, 17] {
            let cfg = SolverConfig { max_iterations: k, residual_tolerance: 0.0, ..SolverConfig::default() };
            let t = run_eg(&case.inst, &cfg, &case.start).unwrap();
            if t.records.len() == k {
                assert_eq!(t.counts.f_evals, 2 * k as u64, "{}", case.label);
                assert_eq!(t.counts.prox_evals, 2 * k as u64, "{}", case.label);
            }
        }
    }
}

#[test]
fn quadratic_minimax_examples() {
    for n in [1, 4, 9] {
        let g = QuadraticMinimax::generate(n, 0.0, 3).unwrap();
        assert!(g.a.data().iter().chain(g.b.data()).all(|&x| x == 0.0));
        let inst = g.instance().unwrap();
        assert!(inst.eval_f_quiet(inst.known_solution().unwrap()).is_zero());
    }
    // The shift makes A/ω positive definite with smallest eigenvalue at least 1.
    let g = QuadraticMinimax::generate(2, 1.0, 7).unwrap();
    let a = nalgebra::DMatrix::from_row_slice(2, 2, g.a.data());
    assert!(a.symmetric_eigenvalues().min() >= 1.0 - 1e-12);
    assert!((g.lambda_min_a - a.symmetric_eigenvalues().min()).abs() < 1e-12);
}

#[test]
fn quadratic_minimax_lipschitz_matches_svd_oracle() {
    for seed in 0..5 {
        let g = QuadraticMinimax::generate(6, 1e-3, seed).unwrap();
        let m = g.operator_matrix();
        let oracle = nalgebra::DMatrix::from_row_slice(12, 12, m.data()).singular_values().max();
        assert!((g.instance().unwrap().lipschitz() - oracle).abs() <= 1e-10 * oracle);
    }
}

#[test]
fn bilinear_game_examples() {
    let g = BilinearGame::generate(4, 2).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(*g.a.get(i, j), -*g.a.get(j, i));
        }
    }
    let inst = gen_bilinear_game(2, 1).unwrap();
    let m = BilinearGame::generate(2, 1).unwrap().operator_matrix();
    let oracle = nalgebra::DMatrix::from_row_slice(4, 4, m.data()).singular_values().max();
    assert!((inst.lipschitz() - oracle).abs() <= 1e-10 * oracle);
    let mut rng = SeedStream::new(3, 0);
    for _ in 0..50 {
        let z = common::random_point(&mut rng, 4, 1.0);
        let w = common::random_point(&mut rng, 4, 1.0);
        let s = inst.eval_f_quiet(&z).dot(&z.sub(&w)) + inst.eval_f_quiet(&w).dot(&w.sub(&z));
        assert!(s.abs() < 1e-12, "{s}");
    }
}

#[test]
fn cournot_draws_satisfy_validity_conditions() {
    for seed in 0..30 {
        let g = CournotNash::generate(5, seed).unwrap();
        for i in 0..5 {
            assert!(g.b[i] >= -2.0 * g.a[i] * g.capacity[i]);
            assert!(g.m[i] > g.b[i]);
            assert!(g.d[i] > -g.a[i]);
        }
        assert!(g.d.windows(2).all(|w| w[0] <= w[1]));
        assert!(g.a.windows(2).all(|w| w[0] >= w[1]));
        // Row i is dᵢ off the diagonal and 2(aᵢ + dᵢ) on it.
        let m = g.operator_matrix();
        assert_eq!(*m.get(1, 0), g.d[1]);
        assert_eq!(*m.get(2, 2), 2.0 * (g.a[2] + g.d[2]));
    }
}

#[test]
fn generators_are_deterministic() {
    let a = QuadraticMinimax::generate(5, 1e-4, 11).unwrap();
    let b = QuadraticMinimax::generate(5, 1e-4, 11).unwrap();
    assert_eq!(a.c, b.c);
    assert_eq!(a.x_star, b.x_star);
    assert_ne!(a.c, QuadraticMinimax::generate(5, 1e-4, 12).unwrap().c);
    assert_eq!(CournotNash::generate(4, 3).unwrap().m, CournotNash::generate(4, 3).unwrap().m);
}
