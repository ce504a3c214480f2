use super::gamma::ln_gamma;
use super::FractionalOrder;
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};

const MAX_TERMS: usize = 10_000;

/// One-parameter Mittag-Leffler function `E_α(z) = Σ z^k / Γ(αk + 1)`.
///
/// Plain power series, summed until a term falls below `1e-14` relative to
/// the partial sum. Adequate for `|z| <= 10`; cancellation grows with `|z|`
/// for negative arguments.
pub fn mittag_leffler<T: Real>(alpha: FractionalOrder<T>, z: T) -> Result<T> {
    if z == T::zero() {
        return Ok(T::one());
    }
    let a = alpha.value();
    let ln_abs_z = z.abs().ln();
    let negative = z < T::zero();
    let tol = lit::<T>(1e-14);

    let mut sum = T::one();
    let mut prev_mag = T::infinity();
    for k in 1..MAX_TERMS {
        let kf = from_usize::<T>(k);
        let mag = (kf * ln_abs_z - ln_gamma(a * kf + T::one())).exp();
        let term = if negative && k % 2 == 1 { -mag } else { mag };
        sum = sum + term;
        // Terms grow until k ~ |z|^(1/α) before decaying; only stop on the tail.
        if mag < prev_mag && mag <= tol * sum.abs() {
            return Ok(sum);
        }
        prev_mag = mag;
    }
    Err(Error::ConvergenceFailure { terms: MAX_TERMS })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(a: f64) -> FractionalOrder<f64> {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn integer_order_is_exponential() {
        let e = mittag_leffler(order(1.0), 1.0).unwrap();
        assert!((e - std::f64::consts::E).abs() < 1e-13);
        let inv = mittag_leffler(order(1.0), -1.0).unwrap();
        assert!((inv - 0.367_879_441_171_442_3).abs() < 1e-13);
        let big = mittag_leffler(order(1.0), -10.0).unwrap();
        assert!((big - (-10.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn zero_argument() {
        for &a in &[0.1, 0.5, 0.95, 1.0] {
            assert_eq!(mittag_leffler(order(a), 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn half_order_closed_form() {
        // E_{1/2}(-x) = exp(x^2) erfc(x); mpmath reference values.
        let cases = [(0.5, 0.615_690_344_192_925_9), (1.0, 0.427_583_576_155_807_0), (2.0, 0.255_395_676_310_505_7)];
        for (x, expect) in cases {
            let got = mittag_leffler(order(0.5), -x).unwrap();
            assert!((got - expect).abs() < 1e-12, "x = {x}: {got} vs {expect}");
        }
    }
}
