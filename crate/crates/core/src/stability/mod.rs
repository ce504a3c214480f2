//! Equilibria of the neuron model, their Jacobian spectra, and the Matignon
//! test for commensurate fractional systems.
//!
//! An equilibrium `x*` of `D^α x = f(x)` is asymptotically stable iff every
//! eigenvalue of `∂f/∂x(x*)` satisfies `|arg λ| > απ/2`.

pub mod linalg;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use linalg::{eigenvalues, SquareMatrix};

use crate::error::{Error, Result};
use crate::fde::{FractionalOrder, VectorField};
use crate::model::{NeuronParams, NeuronState, PinskyRinzel, RateFunctionSet, STATE_DIM};
use crate::scalar::{from_usize, lit, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    AsymptoticallyStable,
    Unstable,
}

impl Verdict {
    pub fn is_stable(self) -> bool {
        self == Verdict::AsymptoticallyStable
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::AsymptoticallyStable => "asymptotically_stable",
            Verdict::Unstable => "unstable",
        }
    }
}

/// `απ/2`
pub fn matignon_threshold<T: Real>(alpha: FractionalOrder<T>) -> T {
    alpha.value() * T::FRAC_PI_2()
}

/// Smallest principal `|arg λ|` over the spectrum; `λ = 0` counts as zero.
pub fn min_abs_arg<T: Real>(spectrum: &[Complex<T>]) -> T {
    spectrum
        .iter()
        .map(|l| if l.re == T::zero() && l.im == T::zero() { T::zero() } else { l.im.atan2(l.re).abs() })
        .fold(T::infinity(), T::min)
}

pub fn matignon_test<T: Real>(spectrum: &[Complex<T>], alpha: FractionalOrder<T>) -> Verdict {
    if !spectrum.is_empty() && min_abs_arg(spectrum) > matignon_threshold(alpha) {
        Verdict::AsymptoticallyStable
    } else {
        Verdict::Unstable
    }
}

/// Central-difference Jacobian of `f` at `x` with per-component step
/// `max(step, step·|x_j|)`.
pub fn central_difference_jacobian<T, F>(f: F, x: &[T], step: T) -> SquareMatrix<T>
where
    T: Real,
    F: Fn(&[T], &mut [T]),
{
    let n = x.len();
    let mut jac = SquareMatrix::zeros(n);
    let mut probe = x.to_vec();
    let mut plus = vec![T::zero(); n];
    let mut minus = vec![T::zero(); n];
    let two = lit::<T>(2.0);
    for j in 0..n {
        let delta = step.max(step * x[j].abs());
        probe[j] = x[j] + delta;
        f(&probe, &mut plus);
        probe[j] = x[j] - delta;
        f(&probe, &mut minus);
        probe[j] = x[j];
        for i in 0..n {
            jac[(i, j)] = (plus[i] - minus[i]) / (two * delta);
        }
    }
    jac
}

/// Jacobian of the order-scaled model vector field.
pub fn numerical_jacobian<T: Real>(model: &PinskyRinzel<T>, state: &NeuronState<T>) -> SquareMatrix<T> {
    central_difference_jacobian(
        |y, out| model.eval(T::zero(), y, out),
        &state.to_array(),
        lit(1e-6),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions<T> {
    pub tolerance: T,
    pub max_iterations: usize,
    pub max_halvings: usize,
}

impl<T: Real> Default for NewtonOptions<T> {
    fn default() -> Self {
        let floor = T::epsilon() * lit(1e3);
        Self { tolerance: lit::<T>(1e-10).max(floor), max_iterations: 200, max_halvings: 30 }
    }
}

/// Outcome of a Newton solve. When `converged` is false `point` is the best
/// iterate seen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium<T> {
    pub point: NeuronState<T>,
    pub residual_norm: T,
    pub iterations: usize,
    pub converged: bool,
}

impl<T: Real> Equilibrium<T> {
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                iterations: self.iterations,
                residual: self.residual_norm.to_f64().unwrap_or(f64::NAN),
            })
        }
    }
}

fn sup_norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| if x.is_nan() { T::nan() } else { m.max(x.abs()) })
}

fn residual<T: Real>(model: &PinskyRinzel<T>, y: &[T]) -> T {
    let mut out = [T::zero(); STATE_DIM];
    model.eval(T::zero(), y, &mut out);
    sup_norm(&out)
}

/// Damped Newton on the numerator of the vector field, so the located point
/// does not depend on the order. Convergence is judged on the order-scaled
/// residual.
pub fn find_equilibrium<T: Real>(
    model: &PinskyRinzel<T>,
    seed: &NeuronState<T>,
    options: &NewtonOptions<T>,
) -> Result<Equilibrium<T>> {
    if !seed.is_finite() {
        return Err(Error::InvalidArgument("equilibrium seed must be finite".into()));
    }
    let numerator = |y: &[T], out: &mut [T]| model.numerator(y, out);
    let mut x = seed.to_array();
    let mut fx = [T::zero(); STATE_DIM];
    numerator(&x, &mut fx);
    let mut fnorm = sup_norm(&fx);
    let mut best = (x, residual(model, &x));
    let half = lit::<T>(0.5);

    for iteration in 0..=options.max_iterations {
        let res = residual(model, &x);
        if res < best.1 || best.1.is_nan() {
            best = (x, res);
        }
        if res < options.tolerance {
            return Ok(Equilibrium {
                point: NeuronState::from_slice(&x),
                residual_norm: res,
                iterations: iteration,
                converged: true,
            });
        }
        if iteration == options.max_iterations || !fnorm.is_finite() {
            break;
        }
        let jac = central_difference_jacobian(numerator, &x, lit(1e-6));
        let rhs: Vec<T> = fx.iter().map(|v| -*v).collect();
        let Some(dx) = jac.solve(&rhs) else { break };

        let mut lambda = T::one();
        let mut trial = x;
        let mut ft = [T::zero(); STATE_DIM];
        let mut accepted = false;
        for _ in 0..=options.max_halvings {
            for d in 0..STATE_DIM {
                trial[d] = x[d] + lambda * dx[d];
            }
            numerator(&trial, &mut ft);
            let tn = sup_norm(&ft);
            if tn.is_finite() && tn < fnorm {
                accepted = true;
                break;
            }
            lambda = lambda * half;
        }
        if !accepted {
            break;
        }
        x = trial;
        fx = ft;
        fnorm = sup_norm(&fx);
    }
    Ok(Equilibrium {
        point: NeuronState::from_slice(&best.0),
        residual_norm: best.1,
        iterations: options.max_iterations,
        converged: false,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport<T> {
    pub point: NeuronState<T>,
    pub residual_norm: T,
    pub converged: bool,
    pub jacobian: SquareMatrix<T>,
    pub spectrum: Vec<Complex<T>>,
    pub min_abs_arg: T,
    pub verdict: Verdict,
    pub alpha: FractionalOrder<T>,
}

impl<T: Real> EquilibriumReport<T> {
    /// Linearize at `point` regardless of whether it is a root.
    pub fn at_point(model: &PinskyRinzel<T>, point: &NeuronState<T>) -> Result<Self> {
        let jacobian = numerical_jacobian(model, point);
        let spectrum = eigenvalues(&jacobian)?;
        let alpha = model.alpha();
        Ok(Self {
            point: *point,
            residual_norm: residual(model, &point.to_array()),
            converged: false,
            min_abs_arg: min_abs_arg(&spectrum),
            verdict: matignon_test(&spectrum, alpha),
            jacobian,
            spectrum,
            alpha,
        })
    }

    /// Newton from `seed`, then linearize. Unconverged solves are reported
    /// with the best iterate and an unstable verdict.
    pub fn analyze(model: &PinskyRinzel<T>, seed: &NeuronState<T>, options: &NewtonOptions<T>) -> Result<Self> {
        let eq = find_equilibrium(model, seed, options)?;
        let mut report = Self::at_point(model, &eq.point)?;
        report.converged = eq.converged;
        report.residual_norm = eq.residual_norm;
        if !eq.converged {
            report.verdict = Verdict::Unstable;
        }
        Ok(report)
    }
}

/// Scanned injection current.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanParameter {
    ISapp,
    IDapp,
}

impl ScanParameter {
    pub fn apply<T: Real>(self, params: &mut NeuronParams<T>, value: T) {
        match self {
            ScanParameter::ISapp => params.i_sapp = value,
            ScanParameter::IDapp => params.i_dapp = value,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScanParameter::ISapp => "i_sapp",
            ScanParameter::IDapp => "i_dapp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Seeding {
    /// Each cell starts from the previous converged point; sequential.
    WarmStart,
    /// Each cell starts from the given seed; cells run in parallel.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanCell<T> {
    pub value: T,
    pub verdict: Verdict,
    pub residual_norm: T,
    pub min_abs_arg: T,
    pub converged: bool,
    pub point: NeuronState<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StableIntervalReport<T> {
    pub parameter: ScanParameter,
    pub range: (T, T),
    pub increment: T,
    pub threshold: T,
    pub cells: Vec<ScanCell<T>>,
    pub stable_intervals: Vec<(T, T)>,
}

impl<T: Real> StableIntervalReport<T> {
    pub fn failed_cells(&self) -> impl Iterator<Item = &ScanCell<T>> {
        self.cells.iter().filter(|c| !c.converged)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSpec<T> {
    pub parameter: ScanParameter,
    pub lo: T,
    pub hi: T,
    pub increment: T,
    pub seeding: Seeding,
}

impl<T: Real> ScanSpec<T> {
    pub fn grid(&self) -> Result<Vec<T>> {
        if !(self.increment > T::zero()) || !(self.lo < self.hi) {
            return Err(Error::InvalidArgument(format!(
                "scan needs increment > 0 and lo < hi, got increment={}, lo={}, hi={}",
                self.increment, self.lo, self.hi
            )));
        }
        let cells = ((self.hi - self.lo) / self.increment + lit(1e-9)).floor().to_usize().unwrap_or(0);
        Ok((0..=cells).map(|k| self.lo + from_usize::<T>(k) * self.increment).collect())
    }
}

fn scan_cell<T: Real>(
    base: &NeuronParams<T>,
    alpha: FractionalOrder<T>,
    gates: RateFunctionSet,
    parameter: ScanParameter,
    value: T,
    seed: &NeuronState<T>,
    options: &NewtonOptions<T>,
) -> ScanCell<T> {
    let mut params = *base;
    parameter.apply(&mut params, value);
    let model = PinskyRinzel::new(params, alpha, gates);
    match EquilibriumReport::analyze(&model, seed, options) {
        Ok(r) => ScanCell {
            value,
            verdict: r.verdict,
            residual_norm: r.residual_norm,
            min_abs_arg: r.min_abs_arg,
            converged: r.converged,
            point: r.point,
        },
        Err(_) => ScanCell {
            value,
            verdict: Verdict::Unstable,
            residual_norm: T::nan(),
            min_abs_arg: T::nan(),
            converged: false,
            point: *seed,
        },
    }
}

/// Matignon verdict on an injection-current grid, merged into maximal stable
/// intervals.
pub fn scan_stable_intervals<T: Real>(
    spec: &ScanSpec<T>,
    base: &NeuronParams<T>,
    alpha: FractionalOrder<T>,
    gates: RateFunctionSet,
    seed: &NeuronState<T>,
    options: &NewtonOptions<T>,
) -> Result<StableIntervalReport<T>> {
    let grid = spec.grid()?;
    let cell = |value: T, seed: &NeuronState<T>| scan_cell(base, alpha, gates, spec.parameter, value, seed, options);
    let cells: Vec<ScanCell<T>> = match spec.seeding {
        Seeding::Fixed => grid.par_iter().map(|&v| cell(v, seed)).collect(),
        Seeding::WarmStart => {
            let mut out = Vec::with_capacity(grid.len());
            let mut current = *seed;
            for &v in &grid {
                let c = cell(v, &current);
                current = if c.converged { c.point } else { *seed };
                out.push(c);
            }
            out
        }
    };
    Ok(StableIntervalReport {
        parameter: spec.parameter,
        range: (spec.lo, spec.hi),
        increment: spec.increment,
        threshold: matignon_threshold(alpha),
        stable_intervals: stable_runs(&cells),
        cells,
    })
}

fn stable_runs<T: Real>(cells: &[ScanCell<T>]) -> Vec<(T, T)> {
    let mut runs = Vec::new();
    let mut open: Option<(T, T)> = None;
    for c in cells {
        match (c.verdict.is_stable(), open.as_mut()) {
            (true, Some(run)) => run.1 = c.value,
            (true, None) => open = Some((c.value, c.value)),
            (false, Some(_)) => runs.extend(open.take()),
            (false, None) => {}
        }
    }
    runs.extend(open);
    runs
}
