//! Flat run configuration.
//!
//! Every key lives at the top level of a TOML file. Command-line flags and
//! `--set key=value` pairs are merged over the file before deserializing, so
//! both paths share one schema and one set of error messages.

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use fracpr::analysis::{BifurcationParameter, StepRule};
use fracpr::fde::{FractionalOrder, MemoryPolicy, SolverConfig};
use fracpr::model::{NeuronParams, NeuronState, RateFunctionSet};
use fracpr::stability::{ScanParameter, Seeding};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Simulate,
    Bifurcate,
    StabilityScan,
    Equilibrium,
    SpikeMetrics,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Bifurcate => "bifurcate",
            Command::StabilityScan => "stability-scan",
            Command::Equilibrium => "equilibrium",
            Command::SpikeMetrics => "spike-metrics",
        }
    }
}

/// Scanned quantity, shared by `bifurcate` and `stability-scan`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Param {
    Alpha,
    ISapp,
    IDapp,
    GC,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,

    pub alpha: f64,
    pub step_size: f64,
    pub t_end: f64,
    /// History length in grid points; 0 keeps the full history.
    pub window: usize,
    pub corrector_iterations: usize,
    pub gates: RateFunctionSet,
    pub currents: bool,

    pub g_l: f64,
    pub g_na: f64,
    pub g_kdr: f64,
    pub g_ca: f64,
    pub g_kahp: f64,
    pub g_kc: f64,
    pub v_na: f64,
    pub v_ca: f64,
    pub v_k: f64,
    pub v_l: f64,
    pub p: f64,
    pub g_c: f64,
    pub i_sapp: f64,
    pub i_dapp: f64,
    pub i_syn: f64,
    pub r_m: f64,
    pub tau_m: f64,
    pub voltage_offset: f64,

    /// Initial state and Newton seed, `[Vs, Vd, h, n, s, c, q, Ca]`.
    pub initial_state: [f64; 8],

    pub param: Param,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub increment: f64,
    pub seeding: Seeding,
    pub step_rule: StepRule,
    pub transient_cut: f64,
    /// Peak threshold in mV; NaN selects the post-transient mean + 10 mV.
    pub threshold: f64,
    pub bin_width: f64,
    pub periodic_tolerance: f64,
    pub transient_window: f64,
    pub transient_tolerance: f64,

    /// Trajectory CSV read by `spike-metrics`; empty simulates instead.
    pub input: String,
    /// Output CSV; `-` writes to stdout.
    pub output: String,
    /// Worker threads; 0 uses the environment default.
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = NeuronParams::<f64>::canonical();
        let y0 = fracpr::model::canonical_initial_state::<f64>().to_array();
        Self {
            command: Command::Simulate,
            alpha: 1.0,
            step_size: 0.05,
            t_end: 1000.0,
            window: 0,
            corrector_iterations: 1,
            gates: RateFunctionSet::Smooth,
            currents: false,
            g_l: p.g_l,
            g_na: p.g_na,
            g_kdr: p.g_kdr,
            g_ca: p.g_ca,
            g_kahp: p.g_kahp,
            g_kc: p.g_kc,
            v_na: p.v_na,
            v_ca: p.v_ca,
            v_k: p.v_k,
            v_l: p.v_l,
            p: p.p,
            g_c: p.g_c,
            i_sapp: p.i_sapp,
            i_dapp: p.i_dapp,
            i_syn: p.i_syn,
            r_m: p.r_m,
            tau_m: p.tau_m,
            voltage_offset: p.voltage_offset,
            initial_state: y0,
            param: Param::Alpha,
            from: 0.7,
            to: 1.0,
            steps: 150,
            increment: 0.001,
            seeding: Seeding::WarmStart,
            step_rule: StepRule::Fixed,
            transient_cut: 500.0,
            threshold: f64::NAN,
            bin_width: 0.5,
            periodic_tolerance: 0.1,
            transient_window: 100.0,
            transient_tolerance: 1.0,
            input: String::new(),
            output: "-".into(),
            jobs: 0,
        }
    }
}

fn config_error(key: &str, message: impl Into<String>) -> CliError {
    CliError::Config { key: key.to_string(), message: message.into() }
}

/// Interpret a `--set` value as TOML, falling back to a bare string.
pub fn parse_value(raw: &str) -> Value {
    let wrapped = format!("v = {raw}");
    match wrapped.parse::<Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(raw.to_string())),
        Err(_) => Value::String(raw.to_string()),
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        let table: Table = text.parse().map_err(|e: toml::de::Error| config_error("<file>", e.message().to_string()))?;
        Self::from_table(table)
    }

    /// Deserialize and validate. Errors name the first offending key.
    pub fn from_table(table: Table) -> Result<Self, CliError> {
        let known = Table::try_from(RunConfig::default()).expect("default config serializes");
        if let Some(key) = table.keys().find(|k| !known.contains_key(*k)) {
            return Err(config_error(key, "unknown key"));
        }
        for (key, value) in &table {
            let mut single = Table::new();
            single.insert(key.clone(), value.clone());
            if let Err(e) = RunConfig::deserialize(Value::Table(single)) {
                return Err(config_error(key, e.to_string()));
            }
        }
        let cfg = RunConfig::deserialize(Value::Table(table)).map_err(|e| config_error("<file>", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        FractionalOrder::new(self.alpha).map_err(|e| config_error("alpha", e.to_string()))?;
        self.solver_config().map_err(|e| config_error(self.solver_key(), e.to_string()))?;
        self.params().validate().map_err(|e| {
            let msg = e.to_string();
            let key = PARAM_KEYS.iter().find(|k| msg.contains(&format!("{k} must"))).copied().unwrap_or("params");
            config_error(key, msg)
        })?;
        if self.initial_state.iter().any(|v| !v.is_finite()) {
            return Err(config_error("initial_state", "must be finite"));
        }
        if !(self.transient_cut >= 0.0) {
            return Err(config_error("transient_cut", "must be >= 0"));
        }
        if !(self.bin_width > 0.0) {
            return Err(config_error("bin_width", "must be > 0"));
        }
        match self.command {
            Command::Bifurcate => {
                if self.steps == 0 {
                    return Err(config_error("steps", "must be >= 1"));
                }
                if !(self.from <= self.to) {
                    return Err(config_error("from", "must not exceed `to`"));
                }
                if self.transient_cut >= self.t_end {
                    return Err(config_error("transient_cut", "must be below t_end"));
                }
            }
            Command::StabilityScan => {
                self.scan_parameter()?;
                if !(self.increment > 0.0) {
                    return Err(config_error("increment", "must be > 0"));
                }
                if !(self.from < self.to) {
                    return Err(config_error("from", "must be below `to`"));
                }
            }
            Command::SpikeMetrics => {
                if self.input.is_empty() && self.transient_cut >= self.t_end {
                    return Err(config_error("transient_cut", "must be below t_end"));
                }
            }
            Command::Simulate | Command::Equilibrium => {}
        }
        Ok(())
    }

    fn solver_key(&self) -> &'static str {
        if !(self.step_size > 0.0) || self.step_size > self.t_end {
            "step_size"
        } else if !(self.t_end > 0.0) {
            "t_end"
        } else if self.window == 1 {
            "window"
        } else {
            "corrector_iterations"
        }
    }

    pub fn order(&self) -> FractionalOrder<f64> {
        FractionalOrder::new(self.alpha).expect("validated")
    }

    pub fn solver_config(&self) -> fracpr::Result<SolverConfig<f64>> {
        let memory = if self.window == 0 { MemoryPolicy::Full } else { MemoryPolicy::Window(self.window) };
        SolverConfig::with_step(self.step_size, self.t_end)?
            .memory(memory)?
            .corrector_iterations(self.corrector_iterations)
    }

    pub fn params(&self) -> NeuronParams<f64> {
        NeuronParams {
            g_l: self.g_l,
            g_na: self.g_na,
            g_kdr: self.g_kdr,
            g_ca: self.g_ca,
            g_kahp: self.g_kahp,
            g_kc: self.g_kc,
            v_na: self.v_na,
            v_ca: self.v_ca,
            v_k: self.v_k,
            v_l: self.v_l,
            p: self.p,
            g_c: self.g_c,
            i_sapp: self.i_sapp,
            i_dapp: self.i_dapp,
            i_syn: self.i_syn,
            r_m: self.r_m,
            tau_m: self.tau_m,
            voltage_offset: self.voltage_offset,
        }
    }

    pub fn initial(&self) -> NeuronState<f64> {
        NeuronState::from_slice(&self.initial_state)
    }

    pub fn threshold(&self) -> Option<f64> {
        (!self.threshold.is_nan()).then_some(self.threshold)
    }

    pub fn bifurcation_parameter(&self) -> BifurcationParameter {
        match self.param {
            Param::Alpha => BifurcationParameter::Alpha,
            Param::ISapp => BifurcationParameter::ISapp,
            Param::IDapp => BifurcationParameter::IDapp,
            Param::GC => BifurcationParameter::Gc,
        }
    }

    pub fn scan_parameter(&self) -> Result<ScanParameter, CliError> {
        match self.param {
            Param::ISapp => Ok(ScanParameter::ISapp),
            Param::IDapp => Ok(ScanParameter::IDapp),
            _ => Err(config_error("param", "stability-scan accepts i-sapp or i-dapp")),
        }
    }

    /// `steps` evenly spaced values from `from` to `to` inclusive.
    pub fn sweep_values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.from];
        }
        let span = self.to - self.from;
        (0..self.steps).map(|k| self.from + span * k as f64 / (self.steps - 1) as f64).collect()
    }
}

const PARAM_KEYS: [&str; 18] = [
    "g_l", "g_na", "g_kdr", "g_ca", "g_kahp", "g_kc", "v_na", "v_ca", "v_k", "v_l", "p", "g_c", "i_sapp", "i_dapp",
    "i_syn", "r_m", "tau_m", "voltage_offset",
];
