use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{default_threshold, detect_peaks};
use crate::error::{Error, Result};
use crate::fde::{solve_caputo_abm, FractionalOrder, SolverConfig};
use crate::model::{idx, NeuronParams, NeuronState, PinskyRinzel, RateFunctionSet};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BifurcationParameter {
    Alpha,
    ISapp,
    IDapp,
    Gc,
}

impl BifurcationParameter {
    pub fn name(self) -> &'static str {
        match self {
            BifurcationParameter::Alpha => "alpha",
            BifurcationParameter::ISapp => "i_sapp",
            BifurcationParameter::IDapp => "i_dapp",
            BifurcationParameter::Gc => "g_c",
        }
    }
}

/// How the step size follows the order in an `alpha` scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepRule {
    #[default]
    Fixed,
    /// `h(α) = h₀^{1/α}`, which keeps `h^α` at the configured `h₀`. The
    /// explicit predictor loses stability at low order otherwise.
    ConstantHAlpha,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationSetup<T> {
    pub base: NeuronParams<T>,
    pub alpha: FractionalOrder<T>,
    pub gates: RateFunctionSet,
    pub initial: NeuronState<T>,
    pub solver: SolverConfig<T>,
    pub step_rule: StepRule,
    pub transient_cut: T,
    /// Peak threshold on `V_s`; `None` uses the post-transient mean + 10 mV.
    pub threshold: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationCell<T> {
    pub value: T,
    pub peaks: Vec<T>,
    pub failure: Option<String>,
}

impl<T: Real> BifurcationCell<T> {
    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }

    pub fn distinct_peaks(&self, bin: T) -> usize {
        distinct_values(&self.peaks, bin)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationScan<T> {
    pub parameter: BifurcationParameter,
    pub cells: Vec<BifurcationCell<T>>,
}

/// Number of occupied bins of width `bin`.
pub fn distinct_values<T: Real>(values: &[T], bin: T) -> usize {
    let mut keys: Vec<i64> = values.iter().filter_map(|v| (*v / bin).floor().to_i64()).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.len()
}

/// Evaluate independent cells in parallel, keeping input order. A cell's
/// error is recorded on that cell only.
pub fn scan_cells<T, F>(values: &[T], cell: F) -> Vec<BifurcationCell<T>>
where
    T: Real,
    F: Fn(T) -> Result<Vec<T>> + Sync,
{
    values
        .par_iter()
        .map(|&value| match cell(value) {
            Ok(peaks) => BifurcationCell { value, peaks, failure: None },
            Err(e) => BifurcationCell { value, peaks: Vec::new(), failure: Some(e.to_string()) },
        })
        .collect()
}

fn run_cell<T: Real>(parameter: BifurcationParameter, value: T, setup: &BifurcationSetup<T>) -> Result<Vec<T>> {
    let mut params = setup.base;
    let mut alpha = setup.alpha;
    let mut solver = setup.solver;
    match parameter {
        BifurcationParameter::Alpha => {
            alpha = FractionalOrder::new(value)?;
            if setup.step_rule == StepRule::ConstantHAlpha {
                solver.step_size = solver.step_size.powf(T::one() / value);
                solver.validate()?;
            }
        }
        BifurcationParameter::ISapp => params.i_sapp = value,
        BifurcationParameter::IDapp => params.i_dapp = value,
        BifurcationParameter::Gc => params.g_c = value,
    }
    params.validate()?;
    let model = PinskyRinzel::new(params, alpha, setup.gates);
    let traj = solve_caputo_abm(&model, &setup.initial.to_array(), alpha, &solver)?;
    let threshold = setup
        .threshold
        .unwrap_or_else(|| default_threshold(&traj, idx::VS, setup.transient_cut));
    Ok(detect_peaks(&traj, idx::VS, threshold).after(setup.transient_cut).values)
}

/// Post-transient `V_s` peak values for each parameter value. Every cell
/// restarts from `setup.initial`.
pub fn bifurcation_scan<T: Real>(
    parameter: BifurcationParameter,
    values: &[T],
    setup: &BifurcationSetup<T>,
) -> Result<BifurcationScan<T>> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("bifurcation scan needs at least one value".into()));
    }
    setup.solver.validate()?;
    if !(setup.transient_cut >= T::zero() && setup.transient_cut < setup.solver.t_end) {
        return Err(Error::InvalidConfig(format!(
            "transient_cut must lie in [0, t_end), got {}",
            setup.transient_cut
        )));
    }
    Ok(BifurcationScan { parameter, cells: scan_cells(values, |v| run_cell(parameter, v, setup)) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{canonical_initial_state, canonical_params};

    fn logistic_tail(r: f64) -> Result<Vec<f64>> {
        let mut x = 0.3;
        for _ in 0..5000 {
            x = r * x * (1.0 - x);
        }
        Ok((0..256)
            .map(|_| {
                x = r * x * (1.0 - x);
                x
            })
            .collect())
    }

    #[test]
    fn period_doubling_cascade() {
        let cells = scan_cells(&[2.8, 3.2, 3.5], logistic_tail);
        let counts: Vec<usize> = cells.iter().map(|c| c.distinct_peaks(1e-3)).collect();
        assert_eq!(counts, vec![1, 2, 4]);
        let chaotic = scan_cells(&[3.9], logistic_tail);
        assert!(chaotic[0].distinct_peaks(1e-3) > 50);
    }

    #[test]
    fn failures_stay_in_their_cell() {
        let cells = scan_cells(&[1.0, -1.0, 2.0], |v: f64| {
            if v < 0.0 {
                Err(Error::NonFiniteState { step: 3 })
            } else {
                Ok(vec![v])
            }
        });
        assert_eq!(cells.iter().filter(|c| c.failed()).count(), 1);
        assert_eq!(cells[2].peaks, vec![2.0]);
    }

    #[test]
    fn binning() {
        assert_eq!(distinct_values(&[0.1, 0.2, 0.6, 0.61, -0.1], 0.5), 3);
        assert_eq!(distinct_values::<f64>(&[], 0.5), 0);
    }

    fn setup(t_end: f64) -> BifurcationSetup<f64> {
        BifurcationSetup {
            base: canonical_params(),
            alpha: FractionalOrder::one(),
            gates: RateFunctionSet::Smooth,
            initial: canonical_initial_state(),
            solver: SolverConfig::with_step(0.05, t_end).unwrap(),
            step_rule: StepRule::ConstantHAlpha,
            transient_cut: 50.0,
            threshold: None,
        }
    }

    #[test]
    fn scan_is_order_independent() {
        let s = setup(120.0);
        let a = bifurcation_scan(BifurcationParameter::ISapp, &[0.5, 2.5, 1.5], &s).unwrap();
        let b = bifurcation_scan(BifurcationParameter::ISapp, &[2.5, 1.5, 0.5], &s).unwrap();
        assert_eq!(a.cells[0], b.cells[2]);
        assert_eq!(a.cells[1], b.cells[0]);
        assert_eq!(a.cells[2], b.cells[1]);
    }

    #[test]
    fn silent_cell_has_no_peaks() {
        let s = BifurcationSetup { threshold: Some(30.0), ..setup(200.0) };
        let scan = bifurcation_scan(BifurcationParameter::ISapp, &[-2.0], &s).unwrap();
        assert!(scan.cells[0].peaks.is_empty());
    }

    #[test]
    fn invalid_alpha_marks_cell() {
        let scan = bifurcation_scan(BifurcationParameter::Alpha, &[1.5, 1.0], &setup(60.0)).unwrap();
        assert!(scan.cells[0].failed());
        assert!(!scan.cells[1].failed());
    }

    #[test]
    fn transient_cut_checked() {
        let s = BifurcationSetup { transient_cut: 200.0, ..setup(100.0) };
        assert!(bifurcation_scan(BifurcationParameter::ISapp, &[1.0], &s).is_err());
    }
}
