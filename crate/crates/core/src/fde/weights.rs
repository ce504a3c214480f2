use super::FractionalOrder;
use crate::scalar::{from_usize, Real};

/// Rectangle-rule predictor weights `b_j = (n+1-j)^α - (n-j)^α`, `j = 0..=n`.
pub fn predictor_weights<T: Real>(alpha: FractionalOrder<T>, n: usize) -> Vec<T> {
    let a = alpha.value();
    (0..=n)
        .map(|j| {
            let k = from_usize::<T>(n - j);
            (k + T::one()).powf(a) - k.powf(a)
        })
        .collect()
}

/// Trapezoid-rule corrector weights `a_0 .. a_n` (without the `Γ(α+2)` factor).
///
/// `a_0 = n^(α+1) - (n-α)(n+1)^α` and, for `1 <= j <= n`,
/// `a_j = (n-j+2)^(α+1) + (n-j)^(α+1) - 2(n-j+1)^(α+1)`.
pub fn corrector_weights<T: Real>(alpha: FractionalOrder<T>, n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(corrector_start_weight(alpha.value(), n));
    out.extend((1..=n).map(|j| corrector_interior_weight(alpha.value(), n - j)));
    out
}

#[inline]
pub(crate) fn corrector_start_weight<T: Real>(alpha: T, n: usize) -> T {
    let nf = from_usize::<T>(n);
    let ap1 = alpha + T::one();
    nf.powf(ap1) - (nf - alpha) * (nf + T::one()).powf(alpha)
}

/// Interior corrector weight as a function of the lag `k = n - j`.
#[inline]
pub(crate) fn corrector_interior_weight<T: Real>(alpha: T, k: usize) -> T {
    let kf = from_usize::<T>(k);
    let ap1 = alpha + T::one();
    let two = T::one() + T::one();
    (kf + two).powf(ap1) + kf.powf(ap1) - two * (kf + T::one()).powf(ap1)
}

/// Predictor weight as a function of the lag `k = n - j`.
#[inline]
pub(crate) fn predictor_lag_weight<T: Real>(alpha: T, k: usize) -> T {
    let kf = from_usize::<T>(k);
    (kf + T::one()).powf(alpha) - kf.powf(alpha)
}
