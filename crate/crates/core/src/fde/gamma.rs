use crate::scalar::{lit, Real};

// Lanczos approximation, g = 7, n = 9.
const G: f64 = 7.0;
const COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum<T: Real>(x: T) -> T {
    let mut acc = lit::<T>(COEFFS[0]);
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        acc = acc + lit::<T>(c) / (x + lit(i as f64));
    }
    acc
}

/// Euler's gamma function.
pub fn gamma<T: Real>(x: T) -> T {
    let half = lit::<T>(0.5);
    if x < half {
        // Reflection: Γ(x) Γ(1 - x) = π / sin(πx)
        T::PI() / ((T::PI() * x).sin() * gamma(T::one() - x))
    } else {
        let x = x - T::one();
        let t = x + lit::<T>(G) + half;
        let sqrt_two_pi = (lit::<T>(2.0) * T::PI()).sqrt();
        sqrt_two_pi * t.powf(x + half) * (-t).exp() * lanczos_sum(x)
    }
}

/// Natural log of `|Γ(x)|` for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> T {
    let half = lit::<T>(0.5);
    if x < half {
        let pi = T::PI();
        return (pi / (pi * x).sin().abs()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let t = x + lit::<T>(G) + half;
    let ln_sqrt_two_pi = lit::<T>(0.918_938_533_204_672_8);
    ln_sqrt_two_pi + (x + half) * t.ln() - t + lanczos_sum(x).ln()
}
