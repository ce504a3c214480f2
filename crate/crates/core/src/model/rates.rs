//! Voltage- and calcium-dependent rate functions.
//!
//! All voltage arguments named `v` are in shifted coordinates, i.e. the
//! membrane potential minus [`NeuronParams::voltage_offset`].

use serde::{Deserialize, Serialize};

use super::NeuronParams;
use crate::scalar::{lit, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateKind {
    AlphaM,
    BetaM,
    AlphaN,
    BetaN,
    AlphaH,
    BetaH,
    AlphaS,
    BetaS,
}

/// Which closed forms drive the `c`, `q` gates and the calcium factor χ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateFunctionSet {
    /// Fitted smooth replacements (`C_∞`, `τ_C`, `q_∞`, `τ_q`, sinusoidal χ).
    #[default]
    Smooth,
    /// Original piecewise forms with Heaviside switches and `min` caps.
    NonSmooth,
}

/// Gates with a voltage-dependent steady state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    M,
    N,
    H,
    S,
}

impl Gate {
    fn rates(self) -> (RateKind, RateKind) {
        match self {
            Gate::M => (RateKind::AlphaM, RateKind::BetaM),
            Gate::N => (RateKind::AlphaN, RateKind::BetaN),
            Gate::H => (RateKind::AlphaH, RateKind::BetaH),
            Gate::S => (RateKind::AlphaS, RateKind::BetaS),
        }
    }
}

/// `x / (exp(x / k) - 1)`, with the removable singularity at `x = 0` filled in.
#[inline]
fn exprel_ratio<T: Real>(x: T, k: T) -> T {
    let u = x / k;
    if u.abs() < lit(1e-6) {
        k * (T::one() - u / lit(2.0) + u * u / lit(12.0))
    } else {
        k * u / u.exp_m1()
    }
}

impl RateKind {
    /// Evaluate at a shifted potential `v`.
    pub fn eval<T: Real>(self, v: T) -> T {
        let one = T::one();
        match self {
            RateKind::AlphaM => lit::<T>(0.32) * exprel_ratio(lit::<T>(-46.9) - v, lit(4.0)),
            RateKind::BetaM => lit::<T>(0.28) * exprel_ratio(v + lit(19.9), lit(5.0)),
            RateKind::AlphaN => lit::<T>(0.016) * exprel_ratio(lit::<T>(-24.9) - v, lit(5.0)),
            RateKind::BetaN => lit::<T>(0.25) * (lit::<T>(-1.0) - lit::<T>(0.025) * v).exp(),
            RateKind::AlphaH => lit::<T>(0.128) * ((lit::<T>(-43.0) - v) / lit(18.0)).exp(),
            RateKind::BetaH => lit::<T>(4.0) / (one + ((lit::<T>(-20.0) - v) / lit(5.0)).exp()),
            RateKind::AlphaS => lit::<T>(1.6) / (one + (lit::<T>(-0.072) * (v - lit(5.0))).exp()),
            RateKind::BetaS => lit::<T>(0.02) * exprel_ratio(v + lit(8.9), lit(5.0)),
        }
    }
}

/// Rate `kind` at membrane potential `voltage` (model coordinates).
pub fn rate<T: Real>(kind: RateKind, voltage: T, params: &NeuronParams<T>) -> T {
    kind.eval(voltage - params.voltage_offset)
}

/// Steady state `α / (α + β)` and time constant `1 / (α + β)` of a gate.
pub fn gate_steady_and_tau<T: Real>(gate: Gate, voltage: T, params: &NeuronParams<T>) -> (T, T) {
    let (a, b) = gate.rates();
    let alpha = rate(a, voltage, params);
    let beta = rate(b, voltage, params);
    steady_and_tau(alpha, beta)
}

#[inline]
pub fn steady_and_tau<T: Real>(alpha: T, beta: T) -> (T, T) {
    let total = alpha + beta;
    (alpha / total, T::one() / total)
}

/// Smooth calcium-system gates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothCaGates<T> {
    pub c_inf: T,
    pub tau_c: T,
    pub q_inf: T,
    pub tau_q: T,
    pub chi: T,
}

/// Smooth closed forms at shifted dendritic potential `v` and calcium `ca`.
pub fn smooth_ca_gates<T: Real>(v: T, ca: T) -> SmoothCaGates<T> {
    // (1 + e^x)^(-0.00925) through a stable softplus; e^x overflows f32 at rest.
    let x = (lit::<T>(-10.1) - v) / lit(0.1016);
    let softplus = x.max(T::zero()) + (-x.abs()).exp().ln_1p();
    SmoothCaGates {
        c_inf: (lit::<T>(-0.00925) * softplus).exp(),
        tau_c: lit::<T>(3.627) * (lit::<T>(0.03704) * v).exp(),
        q_inf: lit::<T>(0.7894) * (lit::<T>(0.0002726) * ca).exp()
            - lit::<T>(0.7292) * (lit::<T>(-0.01672) * ca).exp(),
        tau_q: lit::<T>(657.9) * (lit::<T>(-0.02023) * ca).exp()
            + lit::<T>(301.8) * (lit::<T>(-0.002381) * ca).exp(),
        chi: smooth_chi(ca),
    }
}

#[inline]
fn smooth_chi<T: Real>(ca: T) -> T {
    lit::<T>(1.073) * (lit::<T>(0.003453) * ca + lit(0.08095)).sin()
        + lit::<T>(0.08408) * (lit::<T>(0.01634) * ca - lit(2.34)).sin()
        + lit::<T>(0.01811) * (lit::<T>(0.0348) * ca - lit(0.9918)).sin()
}

/// Piecewise calcium-system rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonSmoothCaGates<T> {
    pub alpha_c: T,
    pub beta_c: T,
    pub alpha_q: T,
    pub beta_q: T,
    pub chi: T,
}

/// Right-continuous Heaviside step: `H(0) = 1`.
#[inline]
fn heaviside<T: Real>(x: T) -> T {
    if x >= T::zero() {
        T::one()
    } else {
        T::zero()
    }
}

/// Piecewise forms at shifted dendritic potential `v` and calcium `ca`.
pub fn nonsmooth_ca_gates<T: Real>(v: T, ca: T) -> NonSmoothCaGates<T> {
    let on = heaviside(v + lit(10.0));
    let off = T::one() - on;
    let decay = lit::<T>(2.0) * ((lit::<T>(-53.5) - v) / lit(27.0)).exp();
    let rise = ((v + lit(50.0)) / lit(11.0) - (v + lit(53.5)) / lit(27.0)).exp() / lit(18.975);
    let alpha_c = off * rise + on * decay;
    NonSmoothCaGates {
        alpha_c,
        beta_c: off * (decay - alpha_c),
        alpha_q: (lit::<T>(0.00002) * ca).min(lit(0.01)),
        beta_q: lit(0.001),
        chi: (ca / lit(250.0)).min(T::one()),
    }
}
