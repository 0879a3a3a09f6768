use std::collections::VecDeque;

use super::{Direction, DirectionProvider, DirectionRequest};
use crate::numeric::linalg::{condition_estimate, Lu, Qr};
use crate::numeric::{DenseMatrix, Point};
use crate::scalar::{lit, Real};

/// Condition estimate above which the inner `m × m` system is treated as singular.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Relative size below which a step `s` is considered degenerate.
const DEGENERATE_STEP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AndersonKind {
    TypeI,
    TypeII,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PushOutcome {
    /// First point seen since construction or restart.
    Seeded,
    Pushed,
    /// Pushed and the oldest pair dropped.
    Evicted,
    /// `s ≈ 0`; the pairs were cleared and the new point kept as the seed.
    Restarted,
}

/// Limited-memory secant pairs `sⁱ = zⁱ⁺¹ − zⁱ`, `yⁱ = rⁱ⁺¹ − rⁱ`, oldest first.
#[derive(Debug, Clone)]
pub struct DirectionBuffer<T> {
    memory: usize,
    s: VecDeque<Point<T>>,
    y: VecDeque<Point<T>>,
    last: Option<(Point<T>, Point<T>)>,
    restarts: usize,
}

impl<T: Real> DirectionBuffer<T> {
    pub fn new(memory: usize) -> Self {
        assert!(memory >= 1, "memory must be at least 1");
        Self { memory, s: VecDeque::with_capacity(memory), y: VecDeque::with_capacity(memory), last: None, restarts: 0 }
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn restarts(&self) -> usize {
        self.restarts
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Point<T>, &Point<T>)> {
        self.s.iter().zip(self.y.iter())
    }

    pub fn push(&mut self, z_new: &Point<T>, r_new: &Point<T>) -> PushOutcome {
        let Some((z_old, r_old)) = self.last.replace((z_new.clone(), r_new.clone())) else {
            return PushOutcome::Seeded;
        };
        let s = z_new.sub(&z_old);
        if s.norm() < lit::<T>(DEGENERATE_STEP) * (T::one() + z_new.norm()) {
            self.clear_pairs();
            self.restarts += 1;
            return PushOutcome::Restarted;
        }
        self.s.push_back(s);
        self.y.push_back(r_new.sub(&r_old));
        if self.s.len() > self.memory {
            self.s.pop_front();
            self.y.pop_front();
            PushOutcome::Evicted
        } else {
            PushOutcome::Pushed
        }
    }

    pub fn clear_pairs(&mut self) {
        self.s.clear();
        self.y.clear();
    }

    /// Drops pairs and the seed point.
    pub fn reset(&mut self) {
        self.clear_pairs();
        self.last = None;
    }
}

/// `d = −H r` with the type-I or type-II multisecant inverse.
///
/// Never forms `H`; the inner system is solved by LU (type-I) or as a
/// least-squares problem by QR (type-II).
pub fn aa_direction<T: Real>(buffer: &DirectionBuffer<T>, r: &Point<T>, kind: AndersonKind) -> Direction<T> {
    let m = buffer.len();
    if m == 0 {
        return Direction::plain(r.neg());
    }
    let n = r.dim();
    // A tall `Y` is needed for the least-squares form.
    let skip = m.saturating_sub(n);
    let s: Vec<&Point<T>> = buffer.s.iter().skip(skip).collect();
    let y: Vec<&Point<T>> = buffer.y.iter().skip(skip).collect();
    let m = s.len();
    let limit = lit::<T>(CONDITION_LIMIT);
    let coeffs = match kind {
        AndersonKind::TypeI => {
            let mut data = Vec::with_capacity(m * m);
            for si in &s {
                for yj in &y {
                    data.push(si.dot(yj));
                }
            }
            let Ok(sty) = DenseMatrix::from_row_major(m, m, data) else {
                return Direction::fallback(r);
            };
            let cond = condition_estimate(&sty);
            if !(cond <= limit) {
                return Direction::fallback(r);
            }
            let Ok(lu) = Lu::factor(&sty) else {
                return Direction::fallback(r);
            };
            let rhs: Vec<T> = s.iter().map(|si| si.dot(r)).collect();
            lu.solve(&rhs)
        }
        AndersonKind::TypeII => {
            let cols: Vec<&[T]> = y.iter().map(|c| c.as_slice()).collect();
            let qr = Qr::factor(&cols);
            let cond = qr.r_condition_estimate();
            if !(cond <= limit) {
                return Direction::fallback(r);
            }
            match qr.least_squares(r.as_slice()) {
                Ok(c) => c,
                Err(_) => return Direction::fallback(r),
            }
        }
    };
    let mut d = r.neg();
    for ((si, yi), c) in s.iter().zip(&y).zip(&coeffs) {
        d = d.axpy(&-*c, &si.sub(yi));
    }
    if d.all_finite() {
        Direction::plain(d)
    } else {
        Direction::fallback(r)
    }
}

/// Anderson acceleration as a direction provider.
#[derive(Debug, Clone)]
pub struct AndersonDirections<T> {
    kind: AndersonKind,
    buffer: DirectionBuffer<T>,
    fallbacks: usize,
}

impl<T: Real> AndersonDirections<T> {
    pub fn new(kind: AndersonKind, memory: usize) -> Self {
        Self { kind, buffer: DirectionBuffer::new(memory), fallbacks: 0 }
    }

    pub fn type1(memory: usize) -> Self {
        Self::new(AndersonKind::TypeI, memory)
    }

    pub fn type2(memory: usize) -> Self {
        Self::new(AndersonKind::TypeII, memory)
    }

    pub fn buffer(&self) -> &DirectionBuffer<T> {
        &self.buffer
    }

    pub fn fallbacks(&self) -> usize {
        self.fallbacks
    }
}

impl<T: Real> DirectionProvider<T> for AndersonDirections<T> {
    fn name(&self) -> &str {
        match self.kind {
            AndersonKind::TypeI => "aa1",
            AndersonKind::TypeII => "aa2",
        }
    }

    fn observe(&mut self, z: &Point<T>, r: &Point<T>) {
        self.buffer.push(z, r);
    }

    fn direction(&mut self, request: &DirectionRequest<'_, T>) -> Direction<T> {
        let out = aa_direction(&self.buffer, request.r, self.kind);
        if out.fallback {
            self.fallbacks += 1;
        }
        out
    }

    fn reset(&mut self) {
        self.buffer.reset();
        self.fallbacks = 0;
    }
}
