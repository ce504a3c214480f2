//! Caputo fractional initial value problems.
//!
//! The integrator is the fractional Adams-Bashforth-Moulton predictor-corrector
//! on a uniform grid. A classical RK4 integrator and the Mittag-Leffler series
//! are provided as independent references for validation.

mod abm;
mod classical;
mod gamma;
mod mittag_leffler;
mod weights;

pub use abm::{solve_caputo_abm, AbmWeights};
pub use classical::solve_classical_reference;
pub use gamma::{gamma, ln_gamma};
pub use mittag_leffler::mittag_leffler;
pub use weights::{corrector_weights, predictor_weights};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};

/// Caputo derivative order, restricted to `0 < alpha <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder<T>(T);

impl<T: Real> FractionalOrder<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if alpha > T::zero() && alpha <= T::one() {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidOrder(alpha.to_f64().unwrap_or(f64::NAN)))
        }
    }

    /// The integer-order case.
    pub fn one() -> Self {
        Self(T::one())
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }
}

/// How much of the solution history enters the convolution sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "length")]
pub enum MemoryPolicy {
    /// Every past grid point.
    Full,
    /// Only the most recent `length` grid points (short-memory principle).
    Window(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    pub step_size: T,
    pub t_end: T,
    pub memory: MemoryPolicy,
    pub corrector_iterations: usize,
}

impl<T: Real> SolverConfig<T> {
    pub const DEFAULT_STEP: f64 = 0.05;

    /// Full memory, one corrector pass, default step size of 0.05 ms.
    pub fn new(t_end: T) -> Result<Self> {
        Self::with_step(lit(Self::DEFAULT_STEP), t_end)
    }

    pub fn with_step(step_size: T, t_end: T) -> Result<Self> {
        let cfg = Self {
            step_size,
            t_end,
            memory: MemoryPolicy::Full,
            corrector_iterations: 1,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn memory(mut self, memory: MemoryPolicy) -> Result<Self> {
        self.memory = memory;
        self.validate()?;
        Ok(self)
    }

    pub fn corrector_iterations(mut self, iterations: usize) -> Result<Self> {
        self.corrector_iterations = iterations;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if !(self.step_size > T::zero()) || !self.step_size.is_finite() {
            return bad("step_size must be positive and finite");
        }
        if !(self.t_end > T::zero()) || !self.t_end.is_finite() {
            return bad("t_end must be positive and finite");
        }
        if self.step_size > self.t_end {
            return bad("step_size must not exceed t_end");
        }
        if let MemoryPolicy::Window(len) = self.memory {
            if len < 2 {
                return bad("memory window length must be at least 2");
            }
        }
        if self.corrector_iterations == 0 {
            return bad("corrector_iterations must be positive");
        }
        Ok(())
    }

    /// Number of steps taken; the grid has `steps() + 1` points.
    pub fn steps(&self) -> usize {
        let ratio = (self.t_end / self.step_size).to_f64().unwrap_or(0.0);
        // Tolerate representation error in t_end / h.
        (ratio + 1e-9).floor() as usize
    }
}

/// Right-hand side `f(t, y)` of `D^alpha y = f(t, y)`.
///
/// Implementations must be deterministic and free of internal mutable state.
pub trait VectorField<T> {
    fn eval(&self, t: T, y: &[T], dy: &mut [T]);
}

impl<T, F> VectorField<T> for F
where
    F: Fn(T, &[T], &mut [T]),
{
    #[inline]
    fn eval(&self, t: T, y: &[T], dy: &mut [T]) {
        self(t, y, dy)
    }
}

/// Solution on a uniform grid `t_k = k h`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    step_size: T,
    dim: usize,
    times: Vec<T>,
    data: Vec<T>,
    alpha: FractionalOrder<T>,
}

impl<T: Real> Trajectory<T> {
    pub(crate) fn with_capacity(
        step_size: T,
        dim: usize,
        points: usize,
        alpha: FractionalOrder<T>,
    ) -> Self {
        Self {
            step_size,
            dim,
            times: Vec::with_capacity(points),
            data: Vec::with_capacity(points * dim),
            alpha,
        }
    }

    /// Wrap samples on the grid `t_k = k h`; `data` is row-major with `dim`
    /// columns.
    pub fn from_samples(step_size: T, dim: usize, data: Vec<T>, alpha: FractionalOrder<T>) -> Self {
        assert!(dim > 0 && data.len().is_multiple_of(dim), "sample count must be a multiple of dim");
        let times = (0..data.len() / dim).map(|k| from_usize::<T>(k) * step_size).collect();
        Self { step_size, dim, times, data, alpha }
    }

    pub(crate) fn push(&mut self, y: &[T]) {
        debug_assert_eq!(y.len(), self.dim);
        self.times.push(from_usize::<T>(self.times.len()) * self.step_size);
        self.data.extend_from_slice(y);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn step_size(&self) -> T {
        self.step_size
    }

    pub fn alpha(&self) -> FractionalOrder<T> {
        self.alpha
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn t_end(&self) -> T {
        *self.times.last().unwrap_or(&T::zero())
    }

    pub fn state(&self, k: usize) -> &[T] {
        &self.data[k * self.dim..(k + 1) * self.dim]
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = &[T]> + '_ {
        self.data.chunks_exact(self.dim.max(1))
    }

    /// Time series of a single state component.
    pub fn component(&self, i: usize) -> Vec<T> {
        assert!(i < self.dim, "component {i} out of range for dimension {}", self.dim);
        self.states().map(|y| y[i]).collect()
    }

    /// Index of the first grid point with `t >= t_min`.
    pub fn index_at_or_after(&self, t_min: T) -> usize {
        self.times.partition_point(|&t| t < t_min)
    }
}
