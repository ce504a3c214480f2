use fracpr::analysis::{
    attractor_section, bifurcation_scan, default_threshold, detect_peaks, estimate_transient, periodicity_test,
    refractory_periods, BifurcationSetup, Periodicity,
};
use fracpr::fde::{solve_caputo_abm, FractionalOrder};
use fracpr::model::{idx, CurrentBreakdown, PinskyRinzel, STATE_DIM, STATE_NAMES};
use fracpr::stability::{scan_stable_intervals, EquilibriumReport, NewtonOptions, ScanSpec};
use fracpr::Trajectory;

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::output::{num, RunOutput, Table};

/// Run one command. A `Compute` error carries the partial output with it.
pub fn execute(cfg: &RunConfig) -> Result<RunOutput, (RunOutput, CliError)> {
    let plain = |r: Result<RunOutput, CliError>| r.map_err(|e| (RunOutput::default(), e));
    match cfg.command {
        Command::Simulate => plain(simulate(cfg)),
        Command::Bifurcate => plain(bifurcate(cfg)),
        Command::StabilityScan => plain(stability_scan(cfg)),
        Command::Equilibrium => equilibrium(cfg),
        Command::SpikeMetrics => plain(spike_metrics(cfg)),
    }
}

fn model(cfg: &RunConfig) -> PinskyRinzel<f64> {
    PinskyRinzel::new(cfg.params(), cfg.order(), cfg.gates)
}

fn run_trajectory(cfg: &RunConfig) -> Result<Trajectory, CliError> {
    let solver = cfg.solver_config()?;
    Ok(solve_caputo_abm(&model(cfg), &cfg.initial_state, cfg.order(), &solver)?)
}

fn simulate(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let traj = run_trajectory(cfg)?;
    let m = model(cfg);
    let mut header = vec!["t"];
    header.extend(STATE_NAMES);
    if cfg.currents {
        header.extend(CurrentBreakdown::<f64>::NAMES);
    }
    let mut table = Table::new(&header);
    for (t, y) in traj.times().iter().zip(traj.states()) {
        let mut row: Vec<String> = std::iter::once(*t).chain(y.iter().copied()).map(num).collect();
        if cfg.currents {
            row.extend(m.currents(y).to_array().into_iter().map(num));
        }
        table.line(row);
    }
    Ok(RunOutput {
        table,
        summary: vec![("samples".into(), traj.len().to_string()), ("capacitance".into(), num(m.capacitance()))],
        failed_cells: Vec::new(),
    })
}

fn bifurcate(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let setup = BifurcationSetup {
        base: cfg.params(),
        alpha: cfg.order(),
        gates: cfg.gates,
        initial: cfg.initial(),
        solver: cfg.solver_config()?,
        step_rule: cfg.step_rule,
        transient_cut: cfg.transient_cut,
        threshold: cfg.threshold(),
    };
    let parameter = cfg.bifurcation_parameter();
    let scan = bifurcation_scan(parameter, &cfg.sweep_values(), &setup)?;
    let mut table = Table::new(&["param", "peak_value"]);
    let mut failed = Vec::new();
    let mut distinct_max = 0;
    for cell in &scan.cells {
        if let Some(reason) = &cell.failure {
            failed.push(format!("{}={} {reason}", parameter.name(), num(cell.value)));
            continue;
        }
        distinct_max = distinct_max.max(cell.distinct_peaks(cfg.bin_width));
        for &peak in &cell.peaks {
            table.line([num(cell.value), num(peak)]);
        }
    }
    Ok(RunOutput {
        table,
        summary: vec![
            ("param".into(), parameter.name().into()),
            ("cells".into(), scan.cells.len().to_string()),
            ("max_distinct_peaks".into(), distinct_max.to_string()),
        ],
        failed_cells: failed,
    })
}

fn stability_scan(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let spec = ScanSpec {
        parameter: cfg.scan_parameter()?,
        lo: cfg.from,
        hi: cfg.to,
        increment: cfg.increment,
        seeding: cfg.seeding,
    };
    let report =
        scan_stable_intervals(&spec, &cfg.params(), cfg.order(), cfg.gates, &cfg.initial(), &NewtonOptions::default())?;
    let mut table = Table::new(&["param", "verdict", "residual", "min_arg", "threshold"]);
    for c in &report.cells {
        table.line([num(c.value), c.verdict.as_str().to_string(), num(c.residual_norm), num(c.min_abs_arg), num(report.threshold)]);
    }
    let intervals: Vec<String> = report.stable_intervals.iter().map(|(a, b)| format!("[{}, {}]", num(*a), num(*b))).collect();
    Ok(RunOutput {
        table,
        summary: vec![
            ("param".into(), spec.parameter.name().into()),
            ("cells".into(), report.cells.len().to_string()),
            ("unconverged_cells".into(), report.failed_cells().count().to_string()),
            ("stable_intervals".into(), if intervals.is_empty() { "none".into() } else { intervals.join(" ") }),
        ],
        failed_cells: Vec::new(),
    })
}

fn equilibrium(cfg: &RunConfig) -> Result<RunOutput, (RunOutput, CliError)> {
    let report = EquilibriumReport::analyze(&model(cfg), &cfg.initial(), &NewtonOptions::default())
        .map_err(|e| (RunOutput::default(), e.into()))?;
    let mut table = Table::new(&["component", "value"]);
    for (name, v) in STATE_NAMES.iter().zip(report.point.to_array()) {
        table.line([name.to_string(), num(v)]);
    }
    table.blank();
    table.line(["eig_re", "eig_im"]);
    for l in &report.spectrum {
        table.line([num(l.re), num(l.im)]);
    }
    let out = RunOutput {
        table,
        summary: vec![
            ("residual".into(), num(report.residual_norm)),
            ("converged".into(), report.converged.to_string()),
            ("min_abs_arg".into(), num(report.min_abs_arg)),
            ("threshold".into(), num(cfg.alpha * std::f64::consts::FRAC_PI_2)),
            ("verdict".into(), report.verdict.as_str().into()),
        ],
        failed_cells: Vec::new(),
    };
    if report.converged {
        Ok(out)
    } else {
        let msg = format!("Newton did not converge; best residual {:e}", report.residual_norm);
        Err((out, CliError::Compute(msg)))
    }
}

fn read_trajectory(path: &str, alpha: FractionalOrder<f64>) -> Result<Trajectory, CliError> {
    let bad = |message: String| CliError::Config { key: "input".into(), message };
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(format!("{path}: {e}")))?;
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let column = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| bad(format!("{path}: missing column {name}")))
    };
    let t_col = column("t")?;
    let cols: Vec<usize> = STATE_NAMES.iter().map(|n| column(n)).collect::<Result<_, _>>()?;
    let mut times = Vec::new();
    let mut data = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let field = |i: usize| record[i].trim().parse::<f64>().map_err(|e| bad(format!("{path}: {e}")));
        times.push(field(t_col)?);
        for &c in &cols {
            data.push(field(c)?);
        }
    }
    if times.len() < 3 {
        return Err(bad(format!("{path}: need at least three samples")));
    }
    Ok(Trajectory::from_samples(times[1] - times[0], STATE_DIM, data, alpha))
}

fn spike_metrics(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let traj = if cfg.input.is_empty() { run_trajectory(cfg)? } else { read_trajectory(&cfg.input, cfg.order())? };
    if cfg.transient_cut >= traj.t_end() {
        return Err(CliError::Config { key: "transient_cut".into(), message: "must be below the trajectory end".into() });
    }
    let threshold = cfg.threshold().unwrap_or_else(|| default_threshold(&traj, idx::VS, cfg.transient_cut));
    let spikes = detect_peaks(&traj, idx::VS, threshold).after(cfg.transient_cut);
    let isi = spikes.intervals();
    let mean_isi = if isi.is_empty() { f64::NAN } else { isi.iter().sum::<f64>() / isi.len() as f64 };
    let (periodic, period, cv) = match periodicity_test(&spikes, cfg.periodic_tolerance) {
        Ok(Periodicity::Periodic { period, cv }) => (1.0, period, cv),
        Ok(Periodicity::Aperiodic { cv }) => (0.0, f64::NAN, cv),
        Err(_) => (f64::NAN, f64::NAN, spikes.isi_cv().unwrap_or(f64::NAN)),
    };
    let transient = estimate_transient(&traj, idx::VS, cfg.transient_window, cfg.transient_tolerance).ok();
    let refractory = refractory_periods(&traj, idx::VS, &spikes);
    let refractory_mean =
        if refractory.is_empty() { f64::NAN } else { refractory.iter().sum::<f64>() / refractory.len() as f64 };
    let section = attractor_section(&traj, cfg.transient_cut);
    let (vd_min, vd_max) =
        section.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, vd)| (lo.min(vd), hi.max(vd)));
    let distinct = fracpr::analysis::distinct_values(&spikes.values, cfg.bin_width);

    let mut table = Table::new(&["metric", "value"]);
    let rows = [
        ("threshold", threshold),
        ("spikes", spikes.len() as f64),
        ("mean_isi", mean_isi),
        ("isi_cv", cv),
        ("periodic", periodic),
        ("period", period),
        ("distinct_peaks", distinct as f64),
        ("t_transient", transient.map_or(f64::NAN, |t| t.t_transient)),
        ("transient_converged", transient.map_or(f64::NAN, |t| f64::from(u8::from(t.converged)))),
        ("refractory_mean", refractory_mean),
        ("vd_min", vd_min),
        ("vd_max", vd_max),
    ];
    for (k, v) in rows {
        table.line([k.to_string(), num(v)]);
    }
    Ok(RunOutput { table, summary: vec![("samples".into(), traj.len().to_string())], failed_cells: Vec::new() })
}
