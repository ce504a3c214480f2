//! Two-compartment Pinsky-Rinzel CA3 pyramidal cell with Caputo time derivatives.
//!
//! State layout is `(V_s, V_d, h, n, s, c, q, Ca)`. The sodium activation `m`
//! is instantaneous (`m_∞(V_s)`) and not part of the state.

mod params;
mod rates;

pub use params::{
    canonical_initial_state, canonical_params, idx, NeuronParams, NeuronState, STATE_DIM,
    STATE_NAMES,
};
pub use rates::{
    gate_steady_and_tau, nonsmooth_ca_gates, rate, smooth_ca_gates, steady_and_tau, Gate,
    NonSmoothCaGates, RateFunctionSet, RateKind, SmoothCaGates,
};

use crate::fde::{FractionalOrder, VectorField};
use crate::scalar::{lit, Real};

/// Ionic and coupling currents, µA/cm².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentBreakdown<T> {
    pub leak_s: T,
    pub na: T,
    pub kdr: T,
    pub leak_d: T,
    pub ca: T,
    pub kca: T,
    pub kahp: T,
    /// Dendrite-to-soma coupling current `g_c (V_d - V_s)`; `I_DS = -I_SD`.
    pub sd: T,
}

impl<T: Real> CurrentBreakdown<T> {
    pub const NAMES: [&'static str; 8] =
        ["ILeakS", "INa", "IKDR", "ILeakD", "ICa", "IKCa", "IKAHP", "ISD"];

    pub fn to_array(&self) -> [T; 8] {
        [self.leak_s, self.na, self.kdr, self.leak_d, self.ca, self.kca, self.kahp, self.sd]
    }
}

/// Membrane capacitance `τ^α / R_m` of the fractional (Curie-law) capacitor.
pub fn capacitance<T: Real>(alpha: FractionalOrder<T>, params: &NeuronParams<T>) -> T {
    params.tau_m.powf(alpha.value()) / params.r_m
}

#[inline]
fn calcium_factor<T: Real>(v_d_shifted: T, ca: T, gates: RateFunctionSet) -> T {
    match gates {
        RateFunctionSet::Smooth => smooth_ca_gates(v_d_shifted, ca).chi,
        RateFunctionSet::NonSmooth => nonsmooth_ca_gates(v_d_shifted, ca).chi,
    }
}

/// Evaluate every membrane current at `state`.
pub fn currents<T: Real>(
    state: &NeuronState<T>,
    params: &NeuronParams<T>,
    gates: RateFunctionSet,
) -> CurrentBreakdown<T> {
    let (m_inf, _) = gate_steady_and_tau(Gate::M, state.v_s, params);
    let chi = calcium_factor(state.v_d - params.voltage_offset, state.ca, gates);
    CurrentBreakdown {
        leak_s: params.g_l * (state.v_s - params.v_l),
        na: params.g_na * m_inf * m_inf * state.h * (state.v_s - params.v_na),
        kdr: params.g_kdr * state.n * (state.v_s - params.v_k),
        leak_d: params.g_l * (state.v_d - params.v_l),
        ca: params.g_ca * state.s * state.s * (state.v_d - params.v_ca),
        kca: params.g_kc * state.c * chi * (state.v_d - params.v_k),
        kahp: params.g_kahp * state.q * (state.v_d - params.v_k),
        sd: params.g_c * (state.v_d - state.v_s),
    }
}

/// Vector field numerator: every component of `C_m D^α V` for the potentials
/// and of `D^α x` for the gates and calcium, i.e. the right-hand side before
/// the voltage rows are divided by the capacitance.
fn unscaled_rhs<T: Real>(
    y: &[T],
    params: &NeuronParams<T>,
    gates: RateFunctionSet,
    out: &mut [T],
) {
    let state = NeuronState::from_slice(y);
    let i = currents(&state, params, gates);
    let p = params.p;
    let one_minus_p = T::one() - p;
    let vs_shift = state.v_s - params.voltage_offset;
    let vd_shift = state.v_d - params.voltage_offset;

    out[idx::VS] = -i.leak_s - i.na - i.kdr + i.sd / p + params.i_sapp / p;
    out[idx::VD] = -i.leak_d - i.ca - i.kca - i.kahp - params.i_syn / one_minus_p - i.sd / one_minus_p
        + params.i_dapp / one_minus_p;

    let relax = |a: RateKind, b: RateKind, v: T, x: T| a.eval(v) * (T::one() - x) - b.eval(v) * x;
    out[idx::H] = relax(RateKind::AlphaH, RateKind::BetaH, vs_shift, state.h);
    out[idx::N] = relax(RateKind::AlphaN, RateKind::BetaN, vs_shift, state.n);
    out[idx::S] = relax(RateKind::AlphaS, RateKind::BetaS, vd_shift, state.s);

    match gates {
        RateFunctionSet::Smooth => {
            let g = smooth_ca_gates(vd_shift, state.ca);
            out[idx::C] = (g.c_inf - state.c) / g.tau_c;
            out[idx::Q] = (g.q_inf - state.q) / g.tau_q;
        }
        RateFunctionSet::NonSmooth => {
            let g = nonsmooth_ca_gates(vd_shift, state.ca);
            out[idx::C] = g.alpha_c * (T::one() - state.c) - g.beta_c * state.c;
            out[idx::Q] = g.alpha_q * (T::one() - state.q) - g.beta_q * state.q;
        }
    }
    out[idx::CA] = lit::<T>(-0.13) * i.ca - lit::<T>(0.075) * state.ca;
}

/// Right-hand side of the fractional system, `D^α y = rhs(t, y)`.
pub fn rhs<T: Real>(
    _t: T,
    state: &NeuronState<T>,
    params: &NeuronParams<T>,
    alpha: FractionalOrder<T>,
    gates: RateFunctionSet,
) -> [T; STATE_DIM] {
    let mut out = [T::zero(); STATE_DIM];
    PinskyRinzel::new(*params, alpha, gates).eval(T::zero(), &state.to_array(), &mut out);
    out
}

/// The model bound to one parameter set, order and gate variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinskyRinzel<T> {
    params: NeuronParams<T>,
    alpha: FractionalOrder<T>,
    gates: RateFunctionSet,
    inv_capacitance: T,
}

impl<T: Real> PinskyRinzel<T> {
    pub fn new(params: NeuronParams<T>, alpha: FractionalOrder<T>, gates: RateFunctionSet) -> Self {
        let inv_capacitance = T::one() / capacitance(alpha, &params);
        Self { params, alpha, gates, inv_capacitance }
    }

    pub fn params(&self) -> &NeuronParams<T> {
        &self.params
    }

    pub fn alpha(&self) -> FractionalOrder<T> {
        self.alpha
    }

    pub fn gates(&self) -> RateFunctionSet {
        self.gates
    }

    pub fn capacitance(&self) -> T {
        T::one() / self.inv_capacitance
    }

    pub fn currents(&self, y: &[T]) -> CurrentBreakdown<T> {
        currents(&NeuronState::from_slice(y), &self.params, self.gates)
    }

    /// The vector field before the voltage rows are divided by `C_m`. Its
    /// zeros are those of the full field and do not depend on the order.
    pub fn numerator(&self, y: &[T], out: &mut [T]) {
        unscaled_rhs(y, &self.params, self.gates, out);
    }
}

impl<T: Real> VectorField<T> for PinskyRinzel<T> {
    #[inline]
    fn eval(&self, _t: T, y: &[T], dy: &mut [T]) {
        unscaled_rhs(y, &self.params, self.gates, dy);
        dy[idx::VS] = dy[idx::VS] * self.inv_capacitance;
        dy[idx::VD] = dy[idx::VD] * self.inv_capacitance;
    }
}
