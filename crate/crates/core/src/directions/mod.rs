//! Candidate directions `dᵏ` for the line-search solvers.
//!
//! A provider sees every accepted iterate through [`DirectionProvider::observe`]
//! and is then asked for a direction at that iterate. Providers never fail:
//! when an inner system is unusable they return `−r` and flag the fallback.

mod anderson;
mod newton;

pub use anderson::{AndersonDirections, AndersonKind, DirectionBuffer, PushOutcome, aa_direction, CONDITION_LIMIT};
pub use newton::{newton_reg_direction, NewtonDirections, NewtonStep};

use crate::numeric::Point;
use crate::problems::ProblemInstance;
use crate::scalar::Real;

/// Inputs available to a provider at iterate `zᵏ`.
pub struct DirectionRequest<'a, T: Real> {
    pub iteration: usize,
    pub instance: &'a ProblemInstance<T>,
    pub gamma: T,
    pub z: &'a Point<T>,
    /// `R_γ(zᵏ)`, which is `F(zᵏ)` when `g = 0`.
    pub r: &'a Point<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Direction<T> {
    pub d: Point<T>,
    pub fallback: bool,
}

impl<T: Real> Direction<T> {
    pub fn plain(d: Point<T>) -> Self {
        Self { d, fallback: false }
    }

    pub fn fallback(r: &Point<T>) -> Self {
        Self { d: r.neg(), fallback: true }
    }
}

pub trait DirectionProvider<T: Real>: Send {
    fn name(&self) -> &str;

    /// Called once per accepted iterate, before [`direction`](Self::direction).
    fn observe(&mut self, _z: &Point<T>, _r: &Point<T>) {}

    fn direction(&mut self, request: &DirectionRequest<'_, T>) -> Direction<T>;

    fn reset(&mut self) {}
}

impl<T: Real, P: DirectionProvider<T> + ?Sized> DirectionProvider<T> for Box<P> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn observe(&mut self, z: &Point<T>, r: &Point<T>) {
        (**self).observe(z, r)
    }

    fn direction(&mut self, request: &DirectionRequest<'_, T>) -> Direction<T> {
        (**self).direction(request)
    }

    fn reset(&mut self) {
        (**self).reset()
    }
}

/// `dᵏ = 0`: the line-search solvers then follow the nominal extragradient step.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroDirection;

impl<T: Real> DirectionProvider<T> for ZeroDirection {
    fn name(&self) -> &str {
        "none"
    }

    fn direction(&mut self, request: &DirectionRequest<'_, T>) -> Direction<T> {
        Direction::plain(Point::zeros(request.z.dim()))
    }
}

/// `dᵏ = −R_γ(zᵏ)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NegativeResidual;

impl<T: Real> DirectionProvider<T> for NegativeResidual {
    fn name(&self) -> &str {
        "residual"
    }

    fn direction(&mut self, request: &DirectionRequest<'_, T>) -> Direction<T> {
        Direction::plain(request.r.neg())
    }
}

/// Scales `d` onto the ball of radius `D‖r‖` when it lies outside.
pub fn safeguard<T: Real>(d: &Point<T>, r: &Point<T>, bound: T) -> Point<T> {
    assert!(bound > T::zero(), "safeguard bound must be positive");
    let radius = bound * r.norm();
    let nd = d.norm();
    if nd <= radius {
        d.clone()
    } else {
        d.scale(&(radius / nd))
    }
}

/// Wraps a provider so that every direction satisfies `‖d‖ ≤ D‖r‖`.
pub struct Safeguarded<P> {
    inner: P,
    bound: f64,
}

impl<P> Safeguarded<P> {
    pub fn new(inner: P, bound: f64) -> Self {
        assert!(bound > 0.0, "safeguard bound must be positive");
        Self { inner, bound }
    }

    pub fn into_inner(self) -> P {
        self.inner
    }
}

impl<T: Real, P: DirectionProvider<T>> DirectionProvider<T> for Safeguarded<P> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn observe(&mut self, z: &Point<T>, r: &Point<T>) {
        self.inner.observe(z, r)
    }

    fn direction(&mut self, request: &DirectionRequest<'_, T>) -> Direction<T> {
        let out = self.inner.direction(request);
        Direction { d: safeguard(&out.d, request.r, T::from_f64_lossy(self.bound)), fallback: out.fallback }
    }

    fn reset(&mut self) {
        self.inner.reset()
    }
}

/// Rolling record of trial-to-current merit ratios.
#[derive(Debug, Clone, Default)]
pub struct SuperlinTracker {
    ratios: Vec<f64>,
}

impl SuperlinTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    pub fn last(&self) -> Option<f64> {
        self.ratios.last().copied()
    }

    pub fn clear(&mut self) {
        self.ratios.clear();
    }
}

/// Records `v_trial / v_current`; a zero current value records 0.
pub fn superlin_ratio(tracker: &mut SuperlinTracker, v_trial: f64, v_current: f64) -> f64 {
    let ratio = if v_current > 0.0 { (v_trial / v_current).max(0.0) } else { 0.0 };
    tracker.ratios.push(ratio);
    ratio
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[f64]) -> Point<f64> {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn safeguard_cases() {
        let r = p(&[10.0, 0.0]);
        let d = p(&[3.0, 4.0]);
        assert_eq!(safeguard(&d, &r, 1.0), d);
        let d = p(&[6.0, 8.0]);
        let out = safeguard(&d, &p(&[5.0, 0.0]), 1.0);
        assert!((out.norm() - 5.0).abs() < 1e-15);
        assert!((out[0] * d[1] - out[1] * d[0]).abs() < 1e-15);
        assert!(safeguard(&d, &p(&[0.0, 0.0]), 3.0).is_zero());
    }

    #[test]
    fn ratio_cases() {
        let mut t = SuperlinTracker::new();
        assert_eq!(superlin_ratio(&mut t, 0.0, 2.0), 0.0);
        assert_eq!(superlin_ratio(&mut t, 2.0, 2.0), 1.0);
        assert_eq!(superlin_ratio(&mut t, 2.0, 0.0), 0.0);
        assert_eq!(t.ratios(), &[0.0, 1.0, 0.0]);
    }
}
