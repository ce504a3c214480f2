//! Acceptance checks, one line per criterion.
//!
//! Run a subset by passing criterion numbers:
//! `cargo test -p fracpr --test acceptance -- 1 7 8`.

use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};

use fracpr::analysis::{
    bifurcation_scan, default_threshold, detect_peaks, periodicity_test, BifurcationParameter,
    BifurcationSetup, Periodicity, StepRule,
};
use fracpr::fde::{
    mittag_leffler, predictor_weights, solve_caputo_abm, solve_classical_reference, FractionalOrder,
    MemoryPolicy, SolverConfig,
};
use fracpr::model::{canonical_initial_state, canonical_params, idx, NeuronState, PinskyRinzel, RateFunctionSet};
use fracpr::stability::{
    central_difference_jacobian, find_equilibrium, matignon_test, scan_stable_intervals, EquilibriumReport,
    NewtonOptions, ScanParameter, ScanSpec, Seeding, SquareMatrix, Verdict,
};
use fracpr::{Params, Trajectory};

type Check = fn() -> (bool, String);

const SMOOTH: RateFunctionSet = RateFunctionSet::Smooth;

const EPS1: [f64; 8] = [1.0225, 0.9267, 0.9950, 0.0088, 0.0149, 0.0117, 0.0456, 0.5355];
const EPS2: [f64; 8] = [2.6161, 2.4916, 0.9929, 0.0239, 0.0170, 0.0132, 0.0448, 0.6876];
const SPEC1: [(f64, f64); 8] = [
    (-3.3066, 0.0),
    (-2.4601, 0.0),
    (-1.0242, 0.0),
    (-0.3830, 0.0),
    (-0.3123, 0.0),
    (-0.0749, 0.0),
    (0.0007, 0.0005),
    (0.0007, -0.0005),
];
const SPEC2: [(f64, f64); 8] = [
    (-3.2804, 0.0),
    (-2.3217, 0.0),
    (-0.9954, 0.0),
    (-0.3453, 0.0),
    (-0.2856, 0.0),
    (-0.0748, 0.0),
    (0.0039, 0.0),
    (-0.0000, 0.0),
];

fn order(a: f64) -> FractionalOrder<f64> {
    FractionalOrder::new(a).unwrap()
}

fn params(i_sapp: f64) -> Params {
    let mut p = canonical_params();
    p.i_sapp = i_sapp;
    p
}

fn simulate(alpha: f64, i_sapp: f64, t_end: f64) -> Trajectory {
    let a = order(alpha);
    let model = PinskyRinzel::new(params(i_sapp), a, SMOOTH);
    let cfg = SolverConfig::with_step(0.05, t_end).unwrap();
    solve_caputo_abm(&model, &canonical_initial_state::<f64>().to_array(), a, &cfg).unwrap()
}

fn decay(_t: f64, y: &[f64], dy: &mut [f64]) {
    dy[0] = -y[0];
}

fn oracle_error(alpha: f64, h: f64, exact: impl Fn(f64) -> f64) -> f64 {
    let cfg = SolverConfig::with_step(h, 2.0).unwrap();
    let traj = solve_caputo_abm(&decay, &[1.0], order(alpha), &cfg).unwrap();
    traj.times().iter().zip(traj.states()).map(|(&t, y)| (y[0] - exact(t)).abs()).fold(0.0, f64::max)
}

fn ml(alpha: f64) -> impl Fn(f64) -> f64 {
    move |t| mittag_leffler(order(alpha), -t.powf(alpha)).unwrap()
}

fn solver_oracle() -> (bool, String) {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [0.8, 0.95, 1.0] {
        let e = oracle_error(a, 1e-3, ml(a));
        ok &= e < 1e-4;
        parts.push(format!("a={a}: {e:.2e}"));
    }
    let e_exp = oracle_error(1.0, 1e-3, |t| (-t).exp());
    ok &= e_exp < 1e-4;
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 10.0;
    (ok, format!("max error {}; vs exp {e_exp:.2e}; {secs:.2} s", parts.join(", ")))
}

fn convergence_order() -> (bool, String) {
    let ratio = oracle_error(0.95, 0.02, ml(0.95)) / oracle_error(0.95, 0.01, ml(0.95));
    (ratio >= 1.8, format!("error ratio h=0.02/h=0.01 at a=0.95: {ratio:.3}"))
}

/// Split sorted intervals at the largest consecutive ratio; returns the
/// ratio of the two group medians.
fn bimodality(mut isi: Vec<f64>) -> Option<f64> {
    isi.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cut = (1..isi.len()).max_by(|&i, &j| (isi[i] / isi[i - 1]).partial_cmp(&(isi[j] / isi[j - 1])).unwrap())?;
    let median = |v: &[f64]| v[v.len() / 2];
    let (short, long) = isi.split_at(cut);
    (!short.is_empty() && !long.is_empty()).then(|| median(long) / median(short))
}

fn firing_modes() -> (bool, String) {
    let regular = detect_peaks(&simulate(1.0, 2.5, 500.0), idx::VS, 30.0).after(100.0);
    let cv = regular.isi_cv().unwrap_or(f64::NAN);
    let regular_ok = regular.len() >= 20 && cv < 0.2;
    let burst = detect_peaks(&simulate(1.0, 0.75, 1500.0), idx::VS, 30.0).after(100.0);
    let ratio = bimodality(burst.intervals()).unwrap_or(0.0);
    let burst_ok = ratio > 3.0;
    (
        regular_ok && burst_ok,
        format!(
            "I_Sapp=2.5: {} spikes in [100,500], ISI CV {cv:.3} ({}); I_Sapp=0.75: ISI mode ratio {ratio:.2} ({})",
            regular.len(),
            if regular_ok { "ok" } else { "needs >=20 and CV<0.2" },
            if burst_ok { "ok" } else { "needs >3" },
        ),
    )
}

fn fractional_periodic() -> (bool, String) {
    let traj = simulate(0.95, 0.75, 2000.0);
    let thr = default_threshold(&traj, idx::VS, 400.0);
    let spikes = detect_peaks(&traj, idx::VS, thr).after(400.0);
    let big = detect_peaks(&traj, idx::VS, 30.0).after(400.0);
    let burst_period = {
        let isi = big.intervals();
        let long: Vec<f64> = isi.iter().copied().filter(|&d| d > 20.0).collect();
        if long.is_empty() { f64::NAN } else { long.iter().sum::<f64>() / long.len() as f64 }
    };
    match periodicity_test(&spikes, 0.1) {
        Ok(Periodicity::Periodic { period, cv }) => (
            (period - 67.0).abs() <= 5.0,
            format!("periodic, period {period:.2} (CV {cv:.3}); expected 67 +/- 5"),
        ),
        Ok(Periodicity::Aperiodic { cv }) => (
            false,
            format!("aperiodic ISI CV {cv:.3} over {} peaks; inter-burst interval {burst_period:.1} ms", spikes.len()),
        ),
        Err(e) => (false, format!("{e}; inter-burst interval {burst_period:.1} ms")),
    }
}

fn fractional_chaotic() -> (bool, String) {
    let traj = simulate(0.95, 2.5, 4000.0);
    let thr = default_threshold(&traj, idx::VS, 500.0);
    let spikes = detect_peaks(&traj, idx::VS, thr).after(500.0);
    let verdict = periodicity_test(&spikes, 0.1);
    let start = traj.index_at_or_after(500.0);
    let vd = traj.component(idx::VD);
    let (lo, hi) = vd[start..].iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let aperiodic = matches!(verdict, Ok(Periodicity::Aperiodic { .. }));
    let confined = lo >= -10.0 && hi <= 55.0;
    (aperiodic && confined, format!("{verdict:?}; V_d range [{lo:.2}, {hi:.2}]"))
}

fn bifurcation_structure() -> (bool, String) {
    let values: Vec<f64> = (0..150).map(|k| 0.7 + 0.3 * k as f64 / 149.0).collect();
    let setup = BifurcationSetup {
        base: params(2.5),
        alpha: FractionalOrder::one(),
        gates: SMOOTH,
        initial: canonical_initial_state(),
        solver: SolverConfig::with_step(0.05, 1500.0).unwrap().memory(MemoryPolicy::Window(2000)).unwrap(),
        step_rule: StepRule::ConstantHAlpha,
        transient_cut: 500.0,
        threshold: None,
    };
    let scan = bifurcation_scan(BifurcationParameter::Alpha, &values, &setup).unwrap();
    let failed = scan.cells.iter().filter(|c| c.failed()).count();
    let low: Vec<usize> = scan.cells.iter().filter(|c| c.value <= 0.90).map(|c| c.distinct_peaks(0.5)).collect();
    let high_max = scan.cells.iter().filter(|c| c.value >= 0.94).map(|c| c.distinct_peaks(0.5)).max().unwrap_or(0);
    let low_bad = scan.cells.iter().filter(|c| c.value <= 0.90 && (c.failed() || c.distinct_peaks(0.5) > 4)).count();
    let low_max = low.iter().copied().max().unwrap_or(0);
    (
        low_bad == 0 && high_max >= 10,
        format!(
            "a<=0.90: {low_bad}/{} cells exceed 4 distinct peaks (max {low_max}); a>=0.94: max {high_max}; failed cells {failed}",
            low.len()
        ),
    )
}

fn sorted_spectrum(mut s: Vec<Complex<f64>>) -> Vec<Complex<f64>> {
    s.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    s
}

fn spectrum_distance(ours: &[Complex<f64>], reference: &[(f64, f64)]) -> f64 {
    let theirs = sorted_spectrum(reference.iter().map(|&(r, i)| Complex::new(r, i)).collect());
    sorted_spectrum(ours.to_vec()).iter().zip(&theirs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

fn equilibria() -> (bool, String) {
    let opts = NewtonOptions::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, i_sapp, reference, spec) in [("eps1", 0.75, EPS1, SPEC1), ("eps2", 2.5, EPS2, SPEC2)] {
        let model = PinskyRinzel::new(params(i_sapp), order(0.95), SMOOTH);
        let eq = find_equilibrium(&model, &canonical_initial_state(), &opts).unwrap();
        let ours = eq.point.to_array();
        let dev = ours.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let at_reference = EquilibriumReport::at_point(&model, &NeuronState::from_slice(&reference)).unwrap();
        let spec_dev = spectrum_distance(&at_reference.spectrum, &spec);
        let point_ok = dev <= 0.05;
        let residual_ok = eq.converged && eq.residual_norm < 1e-10;
        let spec_ok = spec_dev <= 0.05;
        ok &= point_ok && residual_ok && spec_ok;
        parts.push(format!(
            "{label}: point dev {dev:.3} ({}), ours V_s={:.4} V_d={:.4} residual {:.1e} ({}), reference-point residual {:.2e}, spectrum dev {spec_dev:.4} ({})",
            pass_word(point_ok),
            ours[0],
            ours[1],
            eq.residual_norm,
            pass_word(residual_ok),
            at_reference.residual_norm,
            pass_word(spec_ok),
        ));
    }
    (ok, parts.join("; "))
}

fn matignon_verdicts() -> (bool, String) {
    let opts = NewtonOptions::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, i_sapp, reference) in [("eps1", 0.75, EPS1), ("eps2", 2.5, EPS2)] {
        let model = PinskyRinzel::new(params(i_sapp), order(0.95), SMOOTH);
        let at_reference = EquilibriumReport::at_point(&model, &NeuronState::from_slice(&reference)).unwrap();
        let ours = EquilibriumReport::analyze(&model, &canonical_initial_state(), &opts).unwrap();
        ok &= at_reference.verdict == Verdict::Unstable && ours.verdict == Verdict::Unstable;
        parts.push(format!(
            "{label}: reference point {} (min|arg| {:.3}), Newton point {} (min|arg| {:.3}); threshold {:.3}",
            at_reference.verdict.as_str(),
            at_reference.min_abs_arg,
            ours.verdict.as_str(),
            ours.min_abs_arg,
            0.95 * std::f64::consts::FRAC_PI_2,
        ));
    }
    (ok, parts.join("; "))
}

fn stable_intervals() -> (bool, String) {
    let start = Instant::now();
    let opts = NewtonOptions::default();
    let mut ok = true;
    let mut parts = Vec::new();
    let scans = [
        ("I_Sapp (I_Dapp=0)", ScanParameter::ISapp, 0.0, (-1.2579, 0.0268)),
        ("I_Dapp (I_Sapp=2.5)", ScanParameter::IDapp, 2.5, (-4.0, -2.5471)),
        ("I_Dapp (I_Sapp=0.75)", ScanParameter::IDapp, 0.75, (-4.0, -0.7449)),
    ];
    for (label, parameter, i_sapp, want) in scans {
        let spec = ScanSpec { parameter, lo: -4.0, hi: 4.0, increment: 0.001, seeding: Seeding::WarmStart };
        let report =
            scan_stable_intervals(&spec, &params(i_sapp), order(0.95), SMOOTH, &canonical_initial_state(), &opts)
                .unwrap();
        let found = &report.stable_intervals;
        let hit = found.len() == 1 && (found[0].0 - want.0).abs() <= 0.05 && (found[0].1 - want.1).abs() <= 0.05;
        ok &= hit;
        let shown: Vec<String> = found.iter().map(|(a, b)| format!("[{a:.4}, {b:.4}]")).collect();
        parts.push(format!(
            "{label}: {} vs [{}, {}] ({}, {} unconverged)",
            shown.join(" "),
            want.0,
            want.1,
            pass_word(hit),
            report.failed_cells().count()
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 300.0;
    (ok, format!("{}; {secs:.1} s", parts.join("; ")))
}

fn property_suites() -> (bool, String) {
    let mut failures = Vec::new();

    let telescoping = [0.1, 0.5, 0.95, 1.0].iter().all(|&a| {
        [0usize, 1, 10, 1000, 10_000].iter().all(|&n| {
            let s: f64 = predictor_weights(order(a), n).iter().sum();
            let want = ((n + 1) as f64).powf(a);
            ((s - want) / want).abs() < 1e-12
        })
    });
    if !telescoping {
        failures.push("telescoping");
    }

    let cfg = SolverConfig::with_step(0.01, 10.0).unwrap();
    let abm = solve_caputo_abm(&decay, &[1.0], FractionalOrder::one(), &cfg).unwrap();
    let rk = solve_classical_reference(&decay, &[1.0], &cfg).unwrap();
    if abm.states().zip(rk.states()).any(|(a, b)| (a[0] - b[0]).abs() >= 1e-4) {
        failures.push("integer-order reduction");
    }

    let model = PinskyRinzel::new(params(2.5), order(0.9), SMOOTH);
    let full = SolverConfig::with_step(0.05, 50.0).unwrap();
    let win = full.memory(MemoryPolicy::Window(full.steps() + 1)).unwrap();
    let y0 = canonical_initial_state::<f64>().to_array();
    if solve_caputo_abm(&model, &y0, order(0.9), &full).unwrap() != solve_caputo_abm(&model, &y0, order(0.9), &win).unwrap() {
        failures.push("window bit-identity");
    }

    let opts = NewtonOptions::default();
    let eq = |a: f64| {
        find_equilibrium(&PinskyRinzel::new(params(0.0), order(a), SMOOTH), &canonical_initial_state(), &opts).unwrap()
    };
    let (e8, e95) = (eq(0.8), eq(0.95));
    let same = e8.converged
        && e95.converged
        && e8.point.to_array().iter().zip(e95.point.to_array()).all(|(x, y)| (x - y).abs() < 1e-8);
    if !same {
        failures.push("equilibrium order-independence");
    }

    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let monotone = (0..100).all(|_| {
        let n = rng.gen_range(1..=8);
        let spec: Vec<Complex<f64>> =
            (0..n).map(|_| Complex::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0))).collect();
        let a1: f64 = rng.gen_range(0.05..=1.0);
        let a2 = a1 * rng.gen_range(0.01..1.0);
        !matignon_test(&spec, order(a1)).is_stable() || matignon_test(&spec, order(a2)).is_stable()
    });
    if !monotone {
        failures.push("Matignon monotonicity");
    }

    let a: Vec<f64> = (0..64).map(|k| ((k * 29 % 23) as f64 - 11.0) / 4.0).collect();
    let m = SquareMatrix::from_row_major(8, a.clone());
    let jac = central_difference_jacobian(|x, out: &mut [f64]| out.copy_from_slice(&m.mul_vec(x)), &[1.0, -2.0, 0.5, 3.0, 0.0, -0.25, 4.0, 2.0], 1e-6);
    if jac.as_slice().iter().zip(&a).any(|(x, y)| (x - y).abs() >= 1e-8) {
        failures.push("linear Jacobian");
    }

    (
        failures.is_empty(),
        if failures.is_empty() { "all six suites hold".to_string() } else { format!("failing: {}", failures.join(", ")) },
    )
}

fn pass_word(ok: bool) -> &'static str {
    if ok { "pass" } else { "FAIL" }
}

fn main() {
    let checks: [(&str, &str, Check); 10] = [
        ("1", "solver oracle", solver_oracle),
        ("2", "convergence order", convergence_order),
        ("3", "integer-order firing modes", firing_modes),
        ("4", "fractional periodic regime", fractional_periodic),
        ("5", "fractional chaotic regime", fractional_chaotic),
        ("6", "bifurcation structure", bifurcation_structure),
        ("7", "equilibria", equilibria),
        ("8", "Matignon verdicts", matignon_verdicts),
        ("9", "stable intervals", stable_intervals),
        ("10", "property suites", property_suites),
    ];
    let wanted: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, check) in checks {
        if !wanted.is_empty() && !wanted.iter().any(|w| w == id) {
            continue;
        }
        let start = Instant::now();
        let (ok, detail) = check();
        println!(
            "{} criterion {id:>2} {name}: {detail} [{:.1} s]",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!ok);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
