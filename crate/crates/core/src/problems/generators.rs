//! Synthetic problem families: quadratic minimax, bilinear simplex game and
//! Cournot–Nash equilibrium.

use crate::error::ProblemError;
use crate::numeric::{dense_spectral_norm, symmetric_eigenvalues, DenseMatrix, Point};
use crate::problems::rng::SeedStream;
use crate::problems::{ProblemInstance, ProxSpec};

const STREAM_SOLUTION: u64 = 0;
const STREAM_A: u64 = 1;
const STREAM_B: u64 = 2;
const STREAM_C: u64 = 3;
const STREAM_GAME: u64 = 4;
const STREAM_MARKET: u64 = 5;

/// Maximum number of rejected market draws before giving up.
pub const COURNOT_MAX_ATTEMPTS: usize = 10_000;

fn gaussian_matrix(stream: &mut SeedStream, n: usize, std_dev: f64) -> DenseMatrix<f64> {
    let data = (0..n * n).map(|_| stream.normal(0.0, std_dev)).collect();
    DenseMatrix::from_row_major(n, n, data).expect("finite samples")
}

/// Symmetrizes `S` and shifts it by `(|λ_min| + 1) I`. Returns the shifted
/// matrix and its smallest eigenvalue.
fn shifted_symmetric(s: &DenseMatrix<f64>) -> (DenseMatrix<f64>, f64) {
    let sym = s.add(&s.transpose()).scale(&0.5);
    let lmin = symmetric_eigenvalues(&sym)[0];
    let n = sym.rows();
    let shifted = sym.add(&DenseMatrix::identity(n).scale(&(lmin.abs() + 1.0)));
    (shifted, lmin + lmin.abs() + 1.0)
}

/// Data for `min_x max_y ½(x−x★)ᵀA(x−x★) + (x−x★)ᵀC(y−y★) − ½(y−y★)ᵀB(y−y★)`.
#[derive(Debug, Clone)]
pub struct QuadraticMinimax {
    pub n: usize,
    pub omega: f64,
    pub seed: u64,
    pub x_star: Vec<f64>,
    pub y_star: Vec<f64>,
    pub a: DenseMatrix<f64>,
    pub b: DenseMatrix<f64>,
    pub c: DenseMatrix<f64>,
    /// Smallest eigenvalues of the shifted symmetric matrices behind `A` and `B`.
    pub lambda_min_a: f64,
    pub lambda_min_b: f64,
}

impl QuadraticMinimax {
    pub fn generate(n: usize, omega: f64, seed: u64) -> Result<Self, ProblemError> {
        if n == 0 {
            return Err(ProblemError::Invalid("n must be at least 1".into()));
        }
        if !(omega >= 0.0 && omega.is_finite()) {
            return Err(ProblemError::Invalid("omega must be nonnegative".into()));
        }
        let mut sol = SeedStream::new(seed, STREAM_SOLUTION);
        let x_star: Vec<f64> = (0..n).map(|_| sol.standard_normal()).collect();
        let y_star: Vec<f64> = (0..n).map(|_| sol.standard_normal()).collect();
        let sd = 1.0 / (n as f64).sqrt();
        let (sa, lambda_min_a) = shifted_symmetric(&gaussian_matrix(&mut SeedStream::new(seed, STREAM_A), n, sd));
        let (sb, lambda_min_b) = shifted_symmetric(&gaussian_matrix(&mut SeedStream::new(seed, STREAM_B), n, sd));
        let c = gaussian_matrix(&mut SeedStream::new(seed, STREAM_C), n, sd);
        Ok(Self { n, omega, seed, x_star, y_star, a: sa.scale(&omega), b: sb.scale(&omega), c, lambda_min_a, lambda_min_b })
    }

    /// `[[A, C], [−Cᵀ, B]]`.
    pub fn operator_matrix(&self) -> DenseMatrix<f64> {
        DenseMatrix::block2x2(&self.a, &self.c, &self.c.transpose().scale(&-1.0), &self.b)
    }

    pub fn solution(&self) -> Point<f64> {
        Point::new(self.x_star.iter().chain(&self.y_star).copied().collect()).expect("finite")
    }

    pub fn instance(&self) -> Result<ProblemInstance<f64>, ProblemError> {
        let j = self.operator_matrix();
        let lip = dense_spectral_norm(&j);
        let z_star = self.solution();
        let offset = j.matvec(&z_star).neg();
        let name = format!("quadmm:n={},omega={},seed={}", self.n, self.omega, self.seed);
        let mut inst = ProblemInstance::affine(name, j, offset, ProxSpec::Zero, lip)?;
        if self.omega > 0.0 {
            inst = inst.with_strong_monotonicity(self.omega * self.lambda_min_a.min(self.lambda_min_b));
        }
        Ok(inst.with_solution_unchecked(z_star))
    }
}

pub fn gen_quadratic_minimax(n: usize, omega: f64, seed: u64) -> Result<ProblemInstance<f64>, ProblemError> {
    QuadraticMinimax::generate(n, omega, seed)?.instance()
}

/// `min_{x∈Δ} max_{y∈Δ} xᵀAy` with skew-symmetric payoff `A = S − Sᵀ`.
#[derive(Debug, Clone)]
pub struct BilinearGame {
    pub n: usize,
    pub seed: u64,
    pub a: DenseMatrix<f64>,
}

impl BilinearGame {
    pub fn generate(n: usize, seed: u64) -> Result<Self, ProblemError> {
        if n == 0 {
            return Err(ProblemError::Invalid("n must be at least 1".into()));
        }
        let s = gaussian_matrix(&mut SeedStream::new(seed, STREAM_GAME), n, 1.0);
        Ok(Self { n, seed, a: s.sub(&s.transpose()) })
    }

    /// `[[0, A], [−Aᵀ, 0]]`.
    pub fn operator_matrix(&self) -> DenseMatrix<f64> {
        let z = DenseMatrix::zeros(self.n, self.n);
        DenseMatrix::block2x2(&z, &self.a, &self.a.transpose().scale(&-1.0), &z)
    }

    pub fn instance(&self) -> Result<ProblemInstance<f64>, ProblemError> {
        let j = self.operator_matrix();
        // n = 1 gives A = 0; any positive constant is then a valid Lipschitz bound.
        let lip = match dense_spectral_norm(&j) {
            0.0 => 1.0,
            l => l,
        };
        let name = format!("bilinear:n={},seed={}", self.n, self.seed);
        ProblemInstance::affine(name, j, Point::zeros(2 * self.n), ProxSpec::simplex_product(vec![self.n, self.n])?, lip)
    }
}

pub fn gen_bilinear_game(n: usize, seed: u64) -> Result<ProblemInstance<f64>, ProblemError> {
    BilinearGame::generate(n, seed)?.instance()
}

/// Oligopoly with concave-quadratic costs `aᵢz² + bᵢz`, capacities `Tᵢ`, and
/// inverse demand `mᵢ − dᵢ Σ z`.
#[derive(Debug, Clone)]
pub struct CournotNash {
    pub n: usize,
    pub seed: u64,
    pub capacity: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub m: Vec<f64>,
    pub d: Vec<f64>,
    /// Number of draws needed before acceptance.
    pub attempts: usize,
}

impl CournotNash {
    pub fn generate(n: usize, seed: u64) -> Result<Self, ProblemError> {
        if n == 0 {
            return Err(ProblemError::Invalid("n must be at least 1".into()));
        }
        let mut s = SeedStream::new(seed, STREAM_MARKET);
        for attempt in 1..=COURNOT_MAX_ATTEMPTS {
            let m: Vec<f64> = (0..n).map(|_| s.uniform_in(150.0, 250.0)).collect();
            let b: Vec<f64> = (0..n).map(|_| s.uniform_in(30.0, 50.0)).collect();
            let capacity: Vec<f64> = (0..n).map(|_| s.uniform_in(3.0, 7.0)).collect();
            let mut d: Vec<f64> = (0..n).map(|_| s.uniform_in(5.0, 20.0)).collect();
            d.sort_by(f64::total_cmp);
            let u: Vec<f64> = (0..n).map(|_| s.uniform_in(-10.0, -5.0)).collect();
            let mut a: Vec<f64> = d.iter().zip(&u).map(|(di, ui)| di / ui).collect();
            a.sort_by(|x, y| y.total_cmp(x));
            let valid = (0..n).all(|i| !(b[i] < -2.0 * a[i] * capacity[i] || m[i] <= b[i] || d[i] <= -a[i]));
            if valid {
                return Ok(Self { n, seed, capacity, a, b, m, d, attempts: attempt });
            }
        }
        Err(ProblemError::RejectionLimit(COURNOT_MAX_ATTEMPTS))
    }

    /// Row `i` is `dᵢ` off the diagonal and `2(aᵢ + dᵢ)` on it.
    pub fn operator_matrix(&self) -> DenseMatrix<f64> {
        let n = self.n;
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, if i == j { 2.0 * (self.a[i] + self.d[i]) } else { self.d[i] });
            }
        }
        a
    }

    pub fn instance(&self) -> Result<ProblemInstance<f64>, ProblemError> {
        let mat = self.operator_matrix();
        let lip = dense_spectral_norm(&mat);
        let offset = Point::new(self.b.iter().zip(&self.m).map(|(b, m)| b - m).collect())?;
        let prox = ProxSpec::boxed(vec![0.0; self.n], self.capacity.clone())?;
        let name = format!("cournot:n={},seed={}", self.n, self.seed);
        ProblemInstance::affine(name, mat, offset, prox, lip)
    }
}

pub fn gen_cournot_nash(n: usize, seed: u64) -> Result<ProblemInstance<f64>, ProblemError> {
    CournotNash::generate(n, seed)?.instance()
}
