//! Seeded random streams for the data generators.
//!
//! The generator is ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded from a
//! 64-bit seed, with independent sub-streams selected by the ChaCha stream
//! id. Uniforms take the top 53 bits of each 64-bit output and normals use
//! Box–Muller, so the same seed yields the same data on every platform.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

pub struct SeedStream {
    rng: ChaCha20Rng,
    spare_normal: Option<f64>,
}

impl SeedStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, spare_normal: None }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        self.spare_normal = Some(r * s);
        r * c
    }

    pub fn normal(&mut self, mean: f64, std_dev: f64) -> f64 {
        mean + std_dev * self.standard_normal()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = {
            let mut s = SeedStream::new(7, 1);
            (0..5).map(|_| s.uniform()).collect()
        };
        let b: Vec<f64> = {
            let mut s = SeedStream::new(7, 1);
            (0..5).map(|_| s.uniform()).collect()
        };
        let c: Vec<f64> = {
            let mut s = SeedStream::new(7, 2);
            (0..5).map(|_| s.uniform()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().all(|&u| (0.0..1.0).contains(&u)));
    }

    #[test]
    fn normal_moments_are_plausible() {
        let mut s = SeedStream::new(42, 0);
        let xs: Vec<f64> = (0..20_000).map(|_| s.standard_normal()).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.03, "{mean}");
        assert!((var - 1.0).abs() < 0.05, "{var}");
    }
}
