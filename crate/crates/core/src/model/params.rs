use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Index of each component in the flat 8-vector representation.
pub mod idx {
    pub const VS: usize = 0;
    pub const VD: usize = 1;
    pub const H: usize = 2;
    pub const N: usize = 3;
    pub const S: usize = 4;
    pub const C: usize = 5;
    pub const Q: usize = 6;
    pub const CA: usize = 7;
}

/// Number of state variables.
pub const STATE_DIM: usize = 8;

/// Component names in storage order.
pub const STATE_NAMES: [&str; STATE_DIM] = ["Vs", "Vd", "h", "n", "s", "c", "q", "Ca"];

/// Somatic and dendritic potentials, five gating variables and calcium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeuronState<T> {
    pub v_s: T,
    pub v_d: T,
    pub h: T,
    pub n: T,
    pub s: T,
    pub c: T,
    pub q: T,
    pub ca: T,
}

impl<T: Real> NeuronState<T> {
    pub fn from_slice(y: &[T]) -> Self {
        assert_eq!(y.len(), STATE_DIM, "neuron state has {STATE_DIM} components");
        Self {
            v_s: y[0],
            v_d: y[1],
            h: y[2],
            n: y[3],
            s: y[4],
            c: y[5],
            q: y[6],
            ca: y[7],
        }
    }

    pub fn to_array(&self) -> [T; STATE_DIM] {
        [self.v_s, self.v_d, self.h, self.n, self.s, self.c, self.q, self.ca]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// Checks finiteness and that the gates start inside `[0, 1]`.
    pub fn validate_initial(&self) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::InvalidArgument("initial state must be finite".into()));
        }
        for (name, g) in [("h", self.h), ("n", self.n), ("s", self.s), ("c", self.c), ("q", self.q)] {
            if g < T::zero() || g > T::one() {
                return Err(Error::InvalidArgument(format!("gate {name} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Model parameters. Conductances in mS/cm², potentials in mV, currents in µA/cm².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeuronParams<T> {
    pub g_l: T,
    pub g_na: T,
    pub g_kdr: T,
    pub g_ca: T,
    pub g_kahp: T,
    pub g_kc: T,
    pub v_na: T,
    pub v_ca: T,
    pub v_k: T,
    pub v_l: T,
    /// Somatic fraction of the membrane area.
    pub p: T,
    /// Soma-dendrite coupling conductance.
    pub g_c: T,
    pub i_sapp: T,
    pub i_dapp: T,
    pub i_syn: T,
    pub r_m: T,
    pub tau_m: T,
    /// Shift subtracted from the membrane potential before evaluating rate functions.
    pub voltage_offset: T,
}

impl<T: Real> NeuronParams<T> {
    /// Reversal potentials relative to rest with the rate functions shifted by 60 mV.
    pub fn canonical() -> Self {
        Self {
            g_l: lit(0.1),
            g_na: lit(30.0),
            g_kdr: lit(15.0),
            g_ca: lit(10.0),
            g_kahp: lit(0.8),
            g_kc: lit(15.0),
            v_na: lit(120.0),
            v_ca: lit(140.0),
            v_k: lit(-15.0),
            v_l: lit(0.0),
            p: lit(0.5),
            g_c: lit(2.1),
            i_sapp: lit(2.5),
            i_dapp: lit(0.0),
            i_syn: lit(0.0),
            r_m: lit(10.0),
            tau_m: lit(30.0),
            voltage_offset: lit(60.0),
        }
    }

    /// Alternate preset with absolute reversal potentials and unshifted rate
    /// functions. Equivalent to [`Self::canonical`] up to a -60 mV shift of
    /// every potential.
    pub fn absolute_potentials() -> Self {
        Self {
            v_na: lit(60.0),
            v_ca: lit(80.0),
            v_k: lit(-75.0),
            v_l: lit(-60.0),
            voltage_offset: lit(0.0),
            ..Self::canonical()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("g_l", self.g_l),
            ("g_na", self.g_na),
            ("g_kdr", self.g_kdr),
            ("g_ca", self.g_ca),
            ("g_kahp", self.g_kahp),
            ("g_kc", self.g_kc),
            ("v_na", self.v_na),
            ("v_ca", self.v_ca),
            ("v_k", self.v_k),
            ("v_l", self.v_l),
            ("p", self.p),
            ("g_c", self.g_c),
            ("i_sapp", self.i_sapp),
            ("i_dapp", self.i_dapp),
            ("i_syn", self.i_syn),
            ("r_m", self.r_m),
            ("tau_m", self.tau_m),
            ("voltage_offset", self.voltage_offset),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite")));
            }
        }
        for (name, g) in fields.iter().take(6).chain(std::iter::once(&("g_c", self.g_c))) {
            if *g < T::zero() {
                return Err(Error::InvalidParams(format!("{name} must be non-negative")));
            }
        }
        if !(self.p > T::zero() && self.p < T::one()) {
            return Err(Error::InvalidParams("p must lie in (0, 1)".into()));
        }
        if !(self.r_m > T::zero()) {
            return Err(Error::InvalidParams("r_m must be positive".into()));
        }
        if !(self.tau_m > T::zero()) {
            return Err(Error::InvalidParams("tau_m must be positive".into()));
        }
        Ok(())
    }
}

impl<T: Real> Default for NeuronParams<T> {
    fn default() -> Self {
        Self::canonical()
    }
}

/// Canonical parameter set.
pub fn canonical_params<T: Real>() -> NeuronParams<T> {
    NeuronParams::canonical()
}

/// Canonical initial condition, in the coordinates of [`canonical_params`].
pub fn canonical_initial_state<T: Real>() -> NeuronState<T> {
    NeuronState {
        v_s: lit(-4.6),
        v_d: lit(-4.5),
        h: lit(0.999),
        n: lit(0.001),
        s: lit(0.009),
        c: lit(0.007),
        q: lit(0.01),
        ca: lit(0.2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_values() {
        let p = canonical_params::<f64>();
        assert_eq!(p.g_kahp, 0.8);
        assert_eq!(p.g_c, 2.1);
        assert_eq!(p.g_na, 30.0);
        assert_eq!(p.v_k, -15.0);
        assert_eq!(p.voltage_offset, 60.0);
        assert!(p.validate().is_ok());
        let y0 = canonical_initial_state::<f64>();
        assert_eq!(y0.ca, 0.2);
        assert_eq!(y0.to_array(), [-4.6, -4.5, 0.999, 0.001, 0.009, 0.007, 0.01, 0.2]);
        assert!(y0.validate_initial().is_ok());
    }

    #[test]
    fn absolute_preset_is_shifted_canonical() {
        let a = NeuronParams::<f64>::absolute_potentials();
        let c = NeuronParams::<f64>::canonical();
        assert_eq!(a.v_na - c.v_na, -60.0);
        assert_eq!(a.v_ca - c.v_ca, -60.0);
        assert_eq!(a.v_k - c.v_k, -60.0);
        assert_eq!(a.v_l - c.v_l, -60.0);
        assert_eq!(a.voltage_offset, 0.0);
    }

    #[test]
    fn rejects_bad_params() {
        let mut p = canonical_params::<f64>();
        p.p = 1.0;
        assert!(matches!(p.validate(), Err(Error::InvalidParams(_))));
        let mut p = canonical_params::<f64>();
        p.g_na = -1.0;
        assert!(p.validate().is_err());
        let mut p = canonical_params::<f64>();
        p.r_m = 0.0;
        assert!(p.validate().is_err());
        let mut p = canonical_params::<f64>();
        p.i_sapp = f64::NAN;
        assert!(p.validate().is_err());
    }

    #[test]
    fn rejects_gates_outside_unit_interval() {
        let mut y = canonical_initial_state::<f64>();
        y.q = 1.2;
        assert!(y.validate_initial().is_err());
    }
}
