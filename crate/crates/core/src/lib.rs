//! Fractional-order (Caputo) Pinsky-Rinzel neuron model.
//!
//! The numerical code is generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases below fix it to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod analysis;
pub mod error;
pub mod fde;
pub mod model;
pub mod scalar;
pub mod stability;

pub use error::{Error, Result};

pub type Order = fde::FractionalOrder<f64>;
pub type Solver = fde::SolverConfig<f64>;
pub type Trajectory = fde::Trajectory<f64>;
pub type Params = model::NeuronParams<f64>;
pub type State = model::NeuronState<f64>;
pub type Model = model::PinskyRinzel<f64>;
pub type Spikes = analysis::SpikeTrain<f64>;
pub type Bifurcation = analysis::BifurcationScan<f64>;
pub type EquilibriumReport = stability::EquilibriumReport<f64>;
pub type StableIntervals = stability::StableIntervalReport<f64>;
pub type Matrix = stability::SquareMatrix<f64>;
