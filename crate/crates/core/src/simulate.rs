//! Fixed-step RK4 integration of the ring ODE family, limit-cycle detection
//! and per-node phase extraction.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::phases::PhaseProfile;
use crate::ring::AdmissibleOdeFamily;
use crate::spectra::{self, arg_positive};

/// Integration aborts once `|x|` exceeds this.
pub const DIVERGENCE_NORM: f64 = 1e6;
/// Samples per predicted period for the default step.
pub const STEPS_PER_PERIOD: f64 = 4000.0;

/// Sampled solution on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub lambda: f64,
    /// Integrator step.
    pub h: f64,
    /// Integrator steps taken.
    pub steps: usize,
    /// Steps between recorded samples.
    pub stride: usize,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Values of node `j` at every sample.
    pub fn node(&self, j: usize) -> Vec<f64> {
        self.states.iter().map(|x| x[j]).collect()
    }
}

/// Reusable RK4 stepper for one family.
struct Rk4<'a> {
    family: &'a AdmissibleOdeFamily,
    k: [Vec<f64>; 4],
    tmp: Vec<f64>,
}

impl<'a> Rk4<'a> {
    fn new(family: &'a AdmissibleOdeFamily) -> Self {
        let n = family.n();
        Rk4 {
            family,
            k: [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]],
            tmp: vec![0.0; n],
        }
    }

    fn step(&mut self, x: &mut [f64], h: f64) {
        let f = self.family;
        let [k1, k2, k3, k4] = &mut self.k;
        let tmp = &mut self.tmp;
        f.vector_field(x, k1);
        for i in 0..x.len() {
            tmp[i] = x[i] + 0.5 * h * k1[i];
        }
        f.vector_field(tmp, k2);
        for i in 0..x.len() {
            tmp[i] = x[i] + 0.5 * h * k2[i];
        }
        f.vector_field(tmp, k3);
        for i in 0..x.len() {
            tmp[i] = x[i] + h * k3[i];
        }
        f.vector_field(tmp, k4);
        for i in 0..x.len() {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
}

fn check_state(x: &[f64], t: f64) -> Result<()> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !norm.is_finite() || norm > DIVERGENCE_NORM {
        return Err(Error::Diverged { t, norm });
    }
    Ok(())
}

fn check_args(family: &AdmissibleOdeFamily, x0: &[f64], t_end: f64, h: f64) -> Result<()> {
    if x0.len() != family.n() {
        return Err(Error::Dimension(format!(
            "initial state has {} entries for n = {}",
            x0.len(),
            family.n()
        )));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::OutOfRange(format!("step must be positive, got {h}")));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    if let Some(index) = x0.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { field: "x0", index });
    }
    Ok(())
}

/// Integrate from `x0` over `[0, t_end]`, recording every step.
pub fn integrate(
    family: &AdmissibleOdeFamily,
    x0: &[f64],
    t_end: f64,
    h: f64,
) -> Result<Trajectory> {
    integrate_strided(family, x0, t_end, h, 1)
}

/// As [`integrate`], recording every `stride`-th step (and the initial state).
pub fn integrate_strided(
    family: &AdmissibleOdeFamily,
    x0: &[f64],
    t_end: f64,
    h: f64,
    stride: usize,
) -> Result<Trajectory> {
    check_args(family, x0, t_end, h)?;
    let stride = stride.max(1);
    let steps = ((t_end / h).round() as usize).max(1);
    let mut rk = Rk4::new(family);
    let mut x = x0.to_vec();
    let mut times = Vec::with_capacity(steps / stride + 1);
    let mut states = Vec::with_capacity(steps / stride + 1);
    times.push(0.0);
    states.push(x.clone());
    for i in 1..=steps {
        rk.step(&mut x, h);
        let t = i as f64 * h;
        check_state(&x, t)?;
        if i % stride == 0 {
            times.push(t);
            states.push(x.clone());
        }
    }
    Ok(Trajectory {
        times,
        states,
        lambda: family.lambda,
        h,
        steps,
        stride,
    })
}

/// Advance without recording; returns the final state.
fn advance(family: &AdmissibleOdeFamily, x: &mut [f64], t_span: f64, h: f64) -> Result<()> {
    let steps = (t_span / h).round() as usize;
    let mut rk = Rk4::new(family);
    for i in 1..=steps {
        rk.step(x, h);
        if i % 256 == 0 || i == steps {
            check_state(x, i as f64 * h)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleOptions {
    /// Transient discarded before measuring; default `30 / |lambda|`.
    pub settle_time: Option<f64>,
    /// Bound on the relative spread of measured periods and on amplitude drift.
    pub tol: f64,
    /// Integrator step; default predicted period / 4000.
    pub h: Option<f64>,
    /// Periods integrated after settling.
    pub window_periods: usize,
    pub min_cycles: usize,
    /// Starting state; default `0.1 sqrt|lambda| Re(u)` for the critical eigenvector `u`.
    pub x0: Option<Vec<f64>>,
    /// Added to the default starting state (seeded jitter from callers).
    pub jitter: Option<Vec<f64>>,
    /// Node amplitude below which the orbit counts as collapsed onto the equilibrium.
    pub min_amplitude: f64,
}

impl Default for CycleOptions {
    fn default() -> Self {
        CycleOptions {
            settle_time: None,
            tol: 1e-3,
            h: None,
            window_periods: 40,
            min_cycles: 10,
            x0: None,
            jitter: None,
            min_amplitude: 1e-8,
        }
    }
}

fn ser_complex_vec<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
    pairs.serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleMeasurement {
    pub lambda: f64,
    pub period: f64,
    /// `c_j = (2/W) int x_j(t) exp(-2 pi i t / T) dt` over the final window.
    #[serde(serialize_with = "ser_complex_vec")]
    pub fundamental_coeffs: Vec<Complex64>,
    pub amplitudes: Vec<f64>,
    /// `arg(c_j / c_{j+1})` in `[0, 2 pi)`.
    pub phase_diffs: Vec<f64>,
    pub cycles_used: usize,
    /// `(max - min) / mean` of the individual periods.
    pub period_spread: f64,
    pub h: f64,
}

impl CycleMeasurement {
    /// `sum Delta_j` reduced to `(-pi, pi]`.
    pub fn closure_residual(&self) -> f64 {
        crate::phases::theta_sum_residual(&self.phase_diffs)
    }
}

/// Upward zero crossings of `v - mean(v)`, linearly interpolated.
fn upward_crossings(times: &[f64], v: &[f64]) -> Vec<f64> {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let mut out = Vec::new();
    for i in 1..v.len() {
        let (y0, y1) = (v[i - 1] - mean, v[i] - mean);
        if y0 < 0.0 && y1 >= 0.0 {
            let s = y0 / (y0 - y1);
            out.push(times[i - 1] + s * (times[i] - times[i - 1]));
        }
    }
    out
}

/// `int_{t0}^{t1} v(t) exp(-i w t) dt` by the trapezoid rule on the grid,
/// with the end segments cut at `t0` and `t1` by linear interpolation.
fn fourier_integral(times: &[f64], v: &[f64], t0: f64, t1: f64, w: f64) -> Complex64 {
    let g = |t: f64, x: f64| Complex64::from_polar(x, -w * t);
    let interp = |i: usize, t: f64| {
        let s = (t - times[i]) / (times[i + 1] - times[i]);
        v[i] + s * (v[i + 1] - v[i])
    };
    let seg = |ta: f64, xa: f64, tb: f64, xb: f64| (g(ta, xa) + g(tb, xb)) * (0.5 * (tb - ta));
    let i0 = times.partition_point(|&t| t <= t0) - 1;
    let i1 = times.partition_point(|&t| t < t1) - 1;
    let x0 = interp(i0, t0);
    let x1 = interp(i1, t1);
    if i0 == i1 {
        return seg(t0, x0, t1, x1);
    }
    let mut sum = seg(t0, x0, times[i0 + 1], v[i0 + 1]);
    for i in i0 + 1..i1 {
        sum += seg(times[i], v[i], times[i + 1], v[i + 1]);
    }
    sum + seg(times[i1], v[i1], t1, x1)
}

/// Period and fundamental coefficients of a settled oscillation.
pub fn measure_cycle(
    traj: &Trajectory,
    tol: f64,
    min_cycles: usize,
    min_amplitude: f64,
) -> Result<CycleMeasurement> {
    let n = traj.states.first().map_or(0, Vec::len);
    let nodes: Vec<Vec<f64>> = (0..n).map(|j| traj.node(j)).collect();
    // Half the peak-to-peak range; unlike a deviation from the sample mean it
    // is unbiased when the slice does not span whole periods.
    let peak = |v: &[f64]| {
        let (lo, hi) = v
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| {
                (l.min(x), h.max(x))
            });
        0.5 * (hi - lo)
    };
    let amp1 = peak(&nodes[0]);
    if amp1 < min_amplitude {
        return Err(Error::NoCycle(format!(
            "trajectory converged to the equilibrium (node 1 amplitude {amp1:e})"
        )));
    }
    let crossings = upward_crossings(&traj.times, &nodes[0]);
    if crossings.len() < min_cycles + 1 {
        return Err(Error::NoCycle(format!(
            "only {} upward crossings of node 1, need {}",
            crossings.len(),
            min_cycles + 1
        )));
    }
    let periods: Vec<f64> = crossings.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = periods.iter().sum::<f64>() / periods.len() as f64;
    let (lo, hi) = periods
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &p| {
            (l.min(p), h.max(p))
        });
    let spread = (hi - lo) / mean;
    if spread >= tol {
        return Err(Error::NoCycle(format!(
            "period spread {spread:e} exceeds tolerance {tol:e}; not settled"
        )));
    }
    let half = nodes[0].len() / 2;
    let (first, second) = (peak(&nodes[0][..half]), peak(&nodes[0][half..]));
    let drift = (second - first).abs() / second.max(first);
    if drift >= tol {
        return Err(Error::NoCycle(format!(
            "amplitude drifts by {drift:e} across the window; not settled"
        )));
    }
    let cycles = periods.len();
    let (t0, t1) = (crossings[0], crossings[cycles]);
    let width = t1 - t0;
    let period = width / cycles as f64;
    let w = 2.0 * PI / period;
    let coeffs: Vec<Complex64> = nodes
        .iter()
        .map(|v| fourier_integral(&traj.times, v, t0, t1, w) * (2.0 / width))
        .collect();
    let amplitudes: Vec<f64> = coeffs.iter().map(|z| z.norm()).collect();
    let phase_diffs = (0..n)
        .map(|j| arg_positive(coeffs[j] / coeffs[(j + 1) % n]))
        .collect();
    Ok(CycleMeasurement {
        lambda: traj.lambda,
        period,
        fundamental_coeffs: coeffs,
        amplitudes,
        phase_diffs,
        cycles_used: cycles,
        period_spread: spread,
        h: traj.h,
    })
}

/// Critical eigenvalue (largest real part with positive imaginary part)
/// of the family's linearisation at `lambda`.
fn critical_eigenvalue(family: &AdmissibleOdeFamily, lambda: f64) -> Result<Complex64> {
    let s = spectra::eigenvalues(&family.jacobian_params(lambda))?;
    s.eigenvalues
        .iter()
        .filter(|z| z.im > 0.0)
        .copied()
        .max_by(|x, y| x.re.total_cmp(&y.re))
        .ok_or_else(|| Error::NoCycle("linearisation has no complex eigenvalue".into()))
}

/// Integrate the family at `lambda`, discard the transient and measure the
/// periodic orbit.
pub fn find_limit_cycle(
    family: &AdmissibleOdeFamily,
    lambda: f64,
    settle_time: Option<f64>,
    tol: f64,
) -> Result<CycleMeasurement> {
    find_limit_cycle_with(
        family,
        lambda,
        &CycleOptions {
            settle_time,
            tol,
            ..CycleOptions::default()
        },
    )
}

pub fn find_limit_cycle_with(
    family: &AdmissibleOdeFamily,
    lambda: f64,
    opts: &CycleOptions,
) -> Result<CycleMeasurement> {
    let fam = family.at_lambda(lambda);
    let mu = critical_eigenvalue(family, lambda)?;
    let period_pred = 2.0 * PI / mu.im;
    let h = opts.h.unwrap_or(period_pred / STEPS_PER_PERIOD);
    let settle = match opts.settle_time {
        Some(t) => t,
        None if lambda != 0.0 => 30.0 / lambda.abs(),
        None => {
            return Err(Error::OutOfRange(
                "settle time is required at lambda = 0".into(),
            ))
        }
    };
    let mut x = match &opts.x0 {
        Some(x0) => x0.clone(),
        None => {
            let u = spectra::eigenvector_for(&fam.jacobian_params(lambda), mu)?;
            let scale = 0.1 * lambda.abs().sqrt();
            u.entries.iter().map(|z| scale * z.re).collect()
        }
    };
    if let Some(j) = &opts.jitter {
        for (xi, ji) in x.iter_mut().zip(j) {
            *xi += ji;
        }
    }
    check_args(&fam, &x, period_pred, h)?;
    if settle > 0.0 {
        advance(&fam, &mut x, settle, h)?;
    }
    log::debug!("lambda {lambda}: settled for {settle}, h = {h:e}");
    let window = opts.window_periods.max(opts.min_cycles + 2) as f64 * period_pred;
    let traj = integrate(&fam, &x, window, h)?;
    measure_cycle(&traj, opts.tol, opts.min_cycles, opts.min_amplitude)
}

/// Which side of the bifurcation carried the branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchMeasurement {
    pub requested_lambda: f64,
    pub lambda: f64,
    /// True when the cycle was found at `-requested_lambda`.
    pub flipped: bool,
    pub measurement: CycleMeasurement,
}

/// Try `lambda`; if no stable cycle appears (subcritical branch), retry at
/// `-lambda`.
pub fn find_branch(
    family: &AdmissibleOdeFamily,
    lambda: f64,
    opts: &CycleOptions,
) -> Result<BranchMeasurement> {
    match find_limit_cycle_with(family, lambda, opts) {
        Ok(m) => Ok(BranchMeasurement {
            requested_lambda: lambda,
            lambda,
            flipped: false,
            measurement: m,
        }),
        Err(first @ (Error::NoCycle(_) | Error::Diverged { .. })) => {
            log::info!(
                "no cycle at lambda = {lambda} ({first}); trying {}",
                -lambda
            );
            match find_limit_cycle_with(family, -lambda, opts) {
                Ok(m) => Ok(BranchMeasurement {
                    requested_lambda: lambda,
                    lambda: -lambda,
                    flipped: true,
                    measurement: m,
                }),
                Err(_) => Err(first),
            }
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub result: std::result::Result<CycleMeasurement, String>,
}

/// Measure the cycle at every `lambda`, running up to `jobs` integrations
/// at once. Rows come back sorted by `lambda`.
pub fn branch_sweep(
    family: &AdmissibleOdeFamily,
    lambdas: &[f64],
    opts: &CycleOptions,
    jobs: usize,
) -> Vec<SweepRow> {
    let mut sorted = lambdas.to_vec();
    sorted.sort_by(f64::total_cmp);
    let run = |lambda: f64| SweepRow {
        lambda,
        result: find_limit_cycle_with(family, lambda, opts).map_err(|e| e.to_string()),
    };
    let jobs = jobs.clamp(1, sorted.len().max(1));
    if jobs == 1 {
        return sorted.into_iter().map(run).collect();
    }
    let chunk = sorted.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        let handles: Vec<_> = sorted
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|&l| run(l)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseComparison {
    /// Circular distance between measured and predicted phase shift, per edge.
    pub distances: Vec<f64>,
    pub max: f64,
    pub mean: f64,
}

pub fn circular_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

pub fn compare_phases(measured: &[f64], predicted: &[f64]) -> PhaseComparison {
    let distances: Vec<f64> = measured
        .iter()
        .zip(predicted)
        .map(|(&m, &p)| circular_distance(m, p))
        .collect();
    let max = distances.iter().copied().fold(0.0, f64::max);
    let mean = if distances.is_empty() {
        0.0
    } else {
        distances.iter().sum::<f64>() / distances.len() as f64
    };
    PhaseComparison {
        distances,
        max,
        mean,
    }
}

pub fn compare_predicted(
    measurement: &CycleMeasurement,
    profile: &PhaseProfile,
) -> PhaseComparison {
    compare_phases(&measurement.phase_diffs, &profile.theta)
}
