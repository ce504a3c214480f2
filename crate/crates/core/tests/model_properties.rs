use fracpr::analysis::detect_peaks;
use fracpr::fde::{solve_caputo_abm, FractionalOrder, SolverConfig};
use fracpr::model::{canonical_initial_state, canonical_params, idx, PinskyRinzel, RateFunctionSet};

fn run(alpha: f64, i_sapp: f64, gates: RateFunctionSet, t_end: f64) -> fracpr::Trajectory {
    let mut p = canonical_params();
    p.i_sapp = i_sapp;
    let a = FractionalOrder::new(alpha).unwrap();
    let model = PinskyRinzel::new(p, a, gates);
    let cfg = SolverConfig::with_step(0.05, t_end).unwrap();
    solve_caputo_abm(&model, &canonical_initial_state::<f64>().to_array(), a, &cfg).unwrap()
}

#[test]
fn smooth_and_step_calcium_gates_spike_alike() {
    let count = |gates| detect_peaks(&run(1.0, 2.5, gates, 500.0), idx::VS, 30.0).len() as f64;
    let smooth = count(RateFunctionSet::Smooth);
    let step = count(RateFunctionSet::NonSmooth);
    println!("spikes in [0, 500]: smooth {smooth}, non-smooth {step}");
    assert!(smooth >= 10.0);
    assert!((smooth - step).abs() <= 0.1 * smooth.max(step));
}

#[test]
fn gates_stay_in_unit_interval() {
    let traj = run(0.95, 2.5, RateFunctionSet::Smooth, 2000.0);
    for y in traj.states() {
        for k in [idx::H, idx::N, idx::S, idx::C, idx::Q] {
            assert!((-0.05..=1.05).contains(&y[k]), "gate {k} = {}", y[k]);
        }
    }
}

#[test]
fn capacitance_preserving_rescale_is_exact() {
    for (alpha, tau_factor, r_factor) in [(1.0, 2.0, 2.0), (1.0, 0.25, 0.25), (0.5, 4.0, 2.0)] {
        let a = FractionalOrder::new(alpha).unwrap();
        let p = canonical_params::<f64>();
        let mut q = p;
        q.tau_m *= tau_factor;
        q.r_m *= r_factor;
        let cfg = SolverConfig::with_step(0.001, 2.0).unwrap();
        let y0 = canonical_initial_state::<f64>().to_array();
        let x = solve_caputo_abm(&PinskyRinzel::new(p, a, RateFunctionSet::Smooth), &y0, a, &cfg).unwrap();
        let y = solve_caputo_abm(&PinskyRinzel::new(q, a, RateFunctionSet::Smooth), &y0, a, &cfg).unwrap();
        assert_eq!(x, y, "alpha {alpha}");
    }
}
