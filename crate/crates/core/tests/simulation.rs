//! Limit-cycle measurement on the reference ring family.

use std::f64::consts::PI;
use std::path::PathBuf;

use ringhopf::hopf;
use ringhopf::phases;
use ringhopf::simulate::{self, CycleOptions};
use ringhopf::{io, AdmissibleOdeFamily};

fn family() -> AdmissibleOdeFamily {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/reference_family.json");
    io::load(path).unwrap()
}

fn options(h: f64) -> CycleOptions {
    CycleOptions {
        h: Some(h),
        ..CycleOptions::default()
    }
}

#[test]
fn period_converges_in_step_size() {
    let f = family();
    let coarse = simulate::find_limit_cycle_with(&f, 0.1, &options(1e-3)).unwrap();
    let fine = simulate::find_limit_cycle_with(&f, 0.1, &options(5e-4)).unwrap();
    let rel = (coarse.period - fine.period).abs() / fine.period;
    assert!(rel < 1e-6, "relative change {rel:e}");
}

#[test]
fn measured_phase_differences_close_the_ring() {
    let f = family();
    for lambda in [0.01, 0.05, 0.1] {
        let m = simulate::find_limit_cycle(&f, lambda, None, 1e-3).unwrap();
        assert!(
            m.closure_residual().abs() < 1e-3,
            "lambda {lambda}: {}",
            m.closure_residual()
        );
        assert_eq!(m.phase_diffs.len(), 3);
    }
}

#[test]
fn phases_approach_prediction_near_onset() {
    let f = family();
    let profile = phases::phase_shifts(&f.base, 1.0, false).unwrap();
    let expected = [
        1.25 * PI,
        2.0 * PI - 0.5f64.atan(),
        PI - (1.0f64 / 3.0).atan(),
    ];
    for (t, e) in profile.theta.iter().zip(expected) {
        assert!((t - e).abs() < 1e-12);
    }
    let near = simulate::find_limit_cycle(&f, 0.01, None, 1e-3).unwrap();
    let far = simulate::find_limit_cycle(&f, 0.1, None, 1e-3).unwrap();
    let near_err = simulate::compare_predicted(&near, &profile).max;
    let far_err = simulate::compare_predicted(&far, &profile).max;
    assert!(near_err < far_err, "{near_err} vs {far_err}");
    assert!(near_err < 0.05 * 2.0 * PI);
}

#[test]
fn sweep_is_independent_of_job_count() {
    let f = family();
    let lambdas = [0.1, 0.05, 0.08, -0.05];
    let opts = CycleOptions::default();
    let serial = simulate::branch_sweep(&f, &lambdas, &opts, 1);
    let parallel = simulate::branch_sweep(&f, &lambdas, &opts, 3);
    assert_eq!(serial, parallel);
    let order: Vec<f64> = serial.iter().map(|r| r.lambda).collect();
    assert_eq!(order, vec![-0.05, 0.05, 0.08, 0.1]);
    // Below onset the equilibrium is stable.
    assert!(serial[0].result.is_err());
    assert!(serial[1..].iter().all(|r| r.result.is_ok()));
}

#[test]
fn pair_crosses_with_unit_speed() {
    let check = hopf::crossing_check(&family(), 0.0, 1e-4).unwrap();
    assert!(check.crosses());
    // J + lambda I moves every eigenvalue right at unit speed.
    assert!((check.derivative_estimate - 1.0).abs() < 1e-8);
    assert!(check.rho_derivative.abs() < 1e-8);
}
