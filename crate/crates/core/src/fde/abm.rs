use super::gamma::gamma;
use super::weights::{corrector_interior_weight, corrector_start_weight, predictor_lag_weight};
use super::{FractionalOrder, MemoryPolicy, SolverConfig, Trajectory, VectorField};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, Real};

/// Lag-indexed weight tables for a fixed order and grid length.
///
/// Away from `j = 0` both weight families depend only on the lag `n - j`,
/// so they are tabulated once per solve.
#[derive(Debug, Clone)]
pub struct AbmWeights<T> {
    alpha: T,
    predictor: Vec<T>,
    corrector: Vec<T>,
}

impl<T: Real> AbmWeights<T> {
    pub fn new(alpha: FractionalOrder<T>, max_lag: usize) -> Self {
        let a = alpha.value();
        Self {
            alpha: a,
            predictor: (0..=max_lag).map(|k| predictor_lag_weight(a, k)).collect(),
            corrector: (0..=max_lag).map(|k| corrector_interior_weight(a, k)).collect(),
        }
    }

    /// `b_{j,n+1}`
    #[inline]
    pub fn predictor(&self, n: usize, j: usize) -> T {
        self.predictor[n - j]
    }

    /// `a_{j,n+1}`
    #[inline]
    pub fn corrector(&self, n: usize, j: usize) -> T {
        if j == 0 {
            corrector_start_weight(self.alpha, n)
        } else {
            self.corrector[n - j]
        }
    }
}

/// Integrate `D^α y = f(t, y)`, `y(0) = y0`, with the fractional
/// Adams-Bashforth-Moulton predictor-corrector (PECE, optionally with extra
/// corrector passes).
pub fn solve_caputo_abm<T, F>(
    rhs: &F,
    y0: &[T],
    alpha: FractionalOrder<T>,
    config: &SolverConfig<T>,
) -> Result<Trajectory<T>>
where
    T: Real,
    F: VectorField<T> + ?Sized,
{
    config.validate()?;
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteState { step: 0 });
    }
    let dim = y0.len();
    let steps = config.steps();
    let h = config.step_size;
    let a = alpha.value();
    let weights = AbmWeights::new(alpha, steps);
    let predictor_scale = h.powf(a) / gamma(a + T::one());
    let corrector_scale = h.powf(a) / gamma(a + T::one() + T::one());

    let mut traj = Trajectory::with_capacity(h, dim, steps + 1, alpha);
    traj.push(y0);

    // f(t_j, y_j), row-major
    let mut history = Vec::with_capacity((steps + 1) * dim);
    let mut f = vec![T::zero(); dim];
    rhs.eval(T::zero(), y0, &mut f);
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteState { step: 0 });
    }
    history.extend_from_slice(&f);

    let mut pred_sum = vec![T::zero(); dim];
    let mut corr_sum = vec![T::zero(); dim];
    let mut y = vec![T::zero(); dim];

    for n in 0..steps {
        let first = match config.memory {
            MemoryPolicy::Full => 0,
            MemoryPolicy::Window(len) => (n + 1).saturating_sub(len),
        };
        pred_sum.iter_mut().for_each(|v| *v = T::zero());
        corr_sum.iter_mut().for_each(|v| *v = T::zero());
        for j in first..=n {
            let b = weights.predictor(n, j);
            let c = weights.corrector(n, j);
            let fj = &history[j * dim..(j + 1) * dim];
            for d in 0..dim {
                pred_sum[d] = pred_sum[d] + b * fj[d];
                corr_sum[d] = corr_sum[d] + c * fj[d];
            }
        }

        for d in 0..dim {
            y[d] = y0[d] + predictor_scale * pred_sum[d];
        }
        let t_next = from_usize::<T>(n + 1) * h;
        for _ in 0..config.corrector_iterations {
            rhs.eval(t_next, &y, &mut f);
            for d in 0..dim {
                y[d] = y0[d] + corrector_scale * (f[d] + corr_sum[d]);
            }
        }
        rhs.eval(t_next, &y, &mut f);
        if y.iter().chain(f.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState { step: n + 1 });
        }
        history.extend_from_slice(&f);
        traj.push(&y);
    }
    Ok(traj)
}
