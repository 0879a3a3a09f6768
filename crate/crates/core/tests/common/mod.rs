#![allow(dead_code)]

use flexkit::problems::rng::SeedStream;
use flexkit::problems::{BilinearGame, CournotNash, QuadraticMinimax};
use flexkit::{Instance64, Point64, ProblemInstance, ProxSpec};

/// A generated instance with a feasible start point.
pub struct Case {
    pub label: String,
    pub inst: Instance64,
    pub start: Point64,
}

pub fn quadmm(n: usize, omega: f64, seed: u64) -> Case {
    Case {
        label: format!("quadmm n={n} omega={omega} seed={seed}"),
        inst: QuadraticMinimax::generate(n, omega, seed).unwrap().instance().unwrap(),
        start: Point64::zeros(2 * n),
    }
}

pub fn bilinear(n: usize, seed: u64) -> Case {
    Case {
        label: format!("bilinear n={n} seed={seed}"),
        inst: BilinearGame::generate(n, seed).unwrap().instance().unwrap(),
        start: Point64::new(vec![1.0 / n as f64; 2 * n]).unwrap(),
    }
}

pub fn cournot(n: usize, seed: u64) -> Case {
    Case {
        label: format!("cournot n={n} seed={seed}"),
        inst: CournotNash::generate(n, seed).unwrap().instance().unwrap(),
        start: Point64::zeros(n),
    }
}

/// A mix of every generated family at small sizes.
pub fn mixed_cases(count: u64) -> Vec<Case> {
    (0..count)
        .map(|i| match i % 4 {
            0 => quadmm(3 + (i as usize % 5), 0.0, i),
            1 => quadmm(3 + (i as usize % 5), 1e-2, i),
            2 => bilinear(2 + (i as usize % 4), i),
            _ => cournot(2 + (i as usize % 4), i),
        })
        .collect()
}

pub fn random_point(rng: &mut SeedStream, n: usize, scale: f64) -> Point64 {
    Point64::new((0..n).map(|_| scale * rng.standard_normal()).collect()).unwrap()
}

/// An affine quadratic-minimax operator with a nonzero offset and `g = λ‖·‖₁`.
pub fn quadmm_l1(n: usize, seed: u64, weight: f64) -> Case {
    let g = QuadraticMinimax::generate(n, 0.0, seed).unwrap();
    let lip = *g.instance().unwrap().lipschitz();
    let offset = Point64::new((0..2 * n).map(|i| ((i % 5) as f64 - 2.0) * 0.3).collect()).unwrap();
    Case {
        label: format!("quadmm-l1 n={n} seed={seed}"),
        inst: ProblemInstance::affine("quadmm-l1", g.operator_matrix(), offset, ProxSpec::l1(weight).unwrap(), lip).unwrap(),
        start: Point64::zeros(2 * n),
    }
}

/// The same operator restricted to the box `[−1, 1]ⁿ`.
pub fn quadmm_box(n: usize, seed: u64) -> Case {
    let g = QuadraticMinimax::generate(n, 1e-2, seed).unwrap();
    let lip = *g.instance().unwrap().lipschitz();
    let offset = Point64::new((0..2 * n).map(|i| (i % 3) as f64 - 1.0).collect()).unwrap();
    let prox = ProxSpec::boxed(vec![-1.0; 2 * n], vec![1.0; 2 * n]).unwrap();
    Case {
        label: format!("quadmm-box n={n} seed={seed}"),
        inst: ProblemInstance::affine("quadmm-box", g.operator_matrix(), offset, prox, lip).unwrap(),
        start: Point64::zeros(2 * n),
    }
}

/// Generated instances together with L1 and box-constrained variants.
pub fn regularized_cases(count: u64) -> Vec<Case> {
    let mut cases = mixed_cases(count);
    for i in 0..count / 2 {
        cases.push(quadmm_l1(2 + i as usize % 4, i, 0.05 + 0.1 * i as f64));
        cases.push(quadmm_box(2 + i as usize % 4, i));
    }
    cases
}
