use super::{FractionalOrder, SolverConfig, Trajectory, VectorField};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};

/// Classical fixed-step RK4 on the same grid as [`super::solve_caputo_abm`].
///
/// Reference for the `alpha = 1` limit; the memory policy is ignored.
pub fn solve_classical_reference<T, F>(
    rhs: &F,
    y0: &[T],
    config: &SolverConfig<T>,
) -> Result<Trajectory<T>>
where
    T: Real,
    F: VectorField<T> + ?Sized,
{
    config.validate()?;
    let dim = y0.len();
    let steps = config.steps();
    let h = config.step_size;
    let half = lit::<T>(0.5);
    let sixth = lit::<T>(1.0 / 6.0);
    let two = lit::<T>(2.0);

    let mut traj = Trajectory::with_capacity(h, dim, steps + 1, FractionalOrder::one());
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteState { step: 0 });
    }
    traj.push(y0);

    let mut y = y0.to_vec();
    let mut k1 = vec![T::zero(); dim];
    let mut k2 = vec![T::zero(); dim];
    let mut k3 = vec![T::zero(); dim];
    let mut k4 = vec![T::zero(); dim];
    let mut tmp = vec![T::zero(); dim];

    for n in 0..steps {
        let t = from_usize::<T>(n) * h;
        rhs.eval(t, &y, &mut k1);
        for d in 0..dim {
            tmp[d] = y[d] + half * h * k1[d];
        }
        rhs.eval(t + half * h, &tmp, &mut k2);
        for d in 0..dim {
            tmp[d] = y[d] + half * h * k2[d];
        }
        rhs.eval(t + half * h, &tmp, &mut k3);
        for d in 0..dim {
            tmp[d] = y[d] + h * k3[d];
        }
        rhs.eval(t + h, &tmp, &mut k4);
        for d in 0..dim {
            y[d] = y[d] + sixth * h * (k1[d] + two * k2[d] + two * k3[d] + k4[d]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState { step: n + 1 });
        }
        traj.push(&y);
    }
    Ok(traj)
}
