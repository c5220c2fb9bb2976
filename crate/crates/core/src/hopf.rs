//! Hopf conditions.
//!
//! For three nodes the eigenvalues are `tau, +-i omega` exactly when
//! `a1 a2 + a1 a3 + a2 a3 > 0` and
//! `(a1 + a2)(a1 + a3)(a2 + a3) = b1 b2 b3`; then `tau = a1 + a2 + a3` and
//! `omega^2 = a1 a2 + a1 a3 + a2 a3`. For general `n` the imaginary pair is
//! read off the computed spectrum.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{AdmissibleOdeFamily, RingParams};
use crate::spectra::{self, Spectrum, MULTIPLICITY_REL_TOL, PAIR_TOL};

/// Relative tolerance for the product identity.
pub const PRODUCT_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HopfFlags {
    /// `omega^2 > 0`.
    pub positivity: bool,
    pub product_identity: bool,
    /// `tau < 0`: the Hopf pair is the first eigenvalue to cross.
    pub first_bifurcation: bool,
    /// `tau != 0`.
    pub marginal_excluded: bool,
    pub pairwise_sums_negative: bool,
    pub coupling_product_negative: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopfReport {
    pub omega_sq: f64,
    /// Positive square root of `omega_sq` when it is positive.
    pub omega: Option<f64>,
    pub product_lhs: f64,
    pub product_rhs: f64,
    pub trace: f64,
    pub pairwise_sums: [f64; 3],
    pub rel_tol: f64,
    pub flags: HopfFlags,
}

impl HopfReport {
    pub fn is_hopf(&self) -> bool {
        self.flags.positivity && self.flags.product_identity
    }
}

/// `(a1 + a2)(a1 + a3)(a2 + a3)`.
fn product_lhs(a: &[f64]) -> f64 {
    (a[0] + a[1]) * (a[0] + a[2]) * (a[1] + a[2])
}

pub fn hopf_conditions_3(params: &RingParams, rel_tol: f64) -> Result<HopfReport> {
    params.ensure_valid()?;
    if params.n() != 3 {
        return Err(Error::NotThreeNodes(params.n()));
    }
    let (a, b) = (params.a(), params.b());
    let omega_sq = a[0] * a[1] + a[0] * a[2] + a[1] * a[2];
    let lhs = product_lhs(a);
    let rhs = b[0] * b[1] * b[2];
    let trace = a[0] + a[1] + a[2];
    let pairwise_sums = [a[0] + a[1], a[0] + a[2], a[1] + a[2]];
    let product_identity = (lhs - rhs).abs() <= rel_tol * 1f64.max(lhs.abs()).max(rhs.abs());
    let positivity = omega_sq > 0.0;
    Ok(HopfReport {
        omega_sq,
        omega: positivity.then(|| omega_sq.sqrt()),
        product_lhs: lhs,
        product_rhs: rhs,
        trace,
        pairwise_sums,
        rel_tol,
        flags: HopfFlags {
            positivity,
            product_identity,
            first_bifurcation: trace < 0.0,
            marginal_excluded: trace != 0.0,
            pairwise_sums_negative: pairwise_sums.iter().all(|&s| s < 0.0),
            coupling_product_negative: rhs < 0.0,
        },
    })
}

/// The `b3` that makes the product identity exact for given `a`, `b1`, `b2`.
pub fn solve_b3(a: [f64; 3], b1: f64, b2: f64) -> Result<f64> {
    if b1 == 0.0 || b2 == 0.0 {
        return Err(Error::Precondition("b1 and b2 must be nonzero".into()));
    }
    Ok(product_lhs(&a) / (b1 * b2))
}

/// Build a ring with `+-i omega` in its spectrum: `a_2..a_n` and
/// `b_2..b_n` are given, `a_1` makes `A(i omega)` real and `b_1` sets
/// `c = -A(i omega)`.
pub fn hopf_ring_through(a_rest: &[f64], omega: f64, b_rest: &[f64]) -> Result<RingParams> {
    if a_rest.len() != b_rest.len() {
        return Err(Error::Dimension(
            "a_rest and b_rest differ in length".into(),
        ));
    }
    if !(omega > 0.0) {
        return Err(Error::OutOfRange(format!(
            "omega must be positive, got {omega}"
        )));
    }
    let iw = Complex64::new(0.0, omega);
    let r = spectra::a_product(a_rest, iw);
    if r.im == 0.0 {
        return Err(Error::Precondition(
            "no real a_1 places the pair on the axis".into(),
        ));
    }
    let a1 = omega * r.re / r.im;
    let mut a = vec![a1];
    a.extend_from_slice(a_rest);
    let c = -spectra::a_product(&a, iw).re;
    let rest_prod: f64 = b_rest.iter().product();
    if rest_prod == 0.0 {
        return Err(Error::Precondition("b_rest must be nonzero".into()));
    }
    let n = a.len();
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let mut b = vec![sign * c / rest_prod];
    b.extend_from_slice(b_rest);
    RingParams::new(a, b)
}

/// Which couplings are negative when `b1 b2 b3 < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "class")]
pub enum CouplingClass {
    AllNegative,
    /// `index` is the (0-based) negative coupling; relabelling by
    /// `shift = index` moves it to position 1.
    OneNegative {
        index: usize,
    },
    /// Even number of negative couplings; cannot happen at a stable Hopf point.
    EvenNegative {
        count: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignConstraintReport {
    pub pairwise_sums: [f64; 3],
    pub coupling_product: f64,
    pub pairwise_sums_negative: bool,
    pub coupling_product_negative: bool,
    pub class: CouplingClass,
}

impl SignConstraintReport {
    pub fn holds(&self) -> bool {
        self.pairwise_sums_negative && self.coupling_product_negative
    }
}

/// Sign constraints at a Hopf point reached from a stable equilibrium.
pub fn sign_constraints(params: &RingParams) -> Result<SignConstraintReport> {
    let report = hopf_conditions_3(params, PRODUCT_REL_TOL)?;
    if !report.is_hopf() {
        return Err(Error::Precondition("not a Hopf point".into()));
    }
    if !report.flags.first_bifurcation {
        return Err(Error::Precondition(format!(
            "trace {} is not negative",
            report.trace
        )));
    }
    let negatives: Vec<usize> = (0..3).filter(|&j| params.b()[j] < 0.0).collect();
    let class = match negatives.len() {
        3 => CouplingClass::AllNegative,
        1 => CouplingClass::OneNegative {
            index: negatives[0],
        },
        count => CouplingClass::EvenNegative { count },
    };
    Ok(SignConstraintReport {
        pairwise_sums: report.pairwise_sums,
        coupling_product: report.product_rhs,
        pairwise_sums_negative: report.flags.pairwise_sums_negative,
        coupling_product_negative: report.flags.coupling_product_negative,
        class,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImaginaryPair {
    /// Present when exactly one simple conjugate pair sits on the axis.
    pub omega: Option<f64>,
    /// Positive imaginary parts of every on-axis pair.
    pub pairs: Vec<f64>,
    /// A zero eigenvalue sits alongside the pair.
    pub zero_eigenvalue: bool,
    pub multiplicity_violation: bool,
    pub warnings: Vec<String>,
}

pub fn detect_imaginary_pair(spectrum: &Spectrum, tol: f64) -> ImaginaryPair {
    let on_axis = |z: &&Complex64| z.re.abs() <= tol;
    let mut pairs: Vec<f64> = spectrum
        .eigenvalues
        .iter()
        .filter(on_axis)
        .filter(|z| z.im > PAIR_TOL)
        .map(|z| z.im)
        .collect();
    pairs.sort_by(f64::total_cmp);
    // Merge numerically repeated pairs into one entry, tracking multiplicity.
    let mut distinct: Vec<(f64, usize)> = Vec::new();
    for w in pairs {
        match distinct.last_mut() {
            Some((v, m)) if (w - *v).abs() < MULTIPLICITY_REL_TOL * (1.0 + w) => *m += 1,
            _ => distinct.push((w, 1)),
        }
    }
    let zero_count = spectrum
        .eigenvalues
        .iter()
        .filter(on_axis)
        .filter(|z| z.im.abs() <= PAIR_TOL && z.re.abs() <= tol)
        .count();
    let multiplicity_violation = distinct.iter().any(|&(_, m)| m > 1);
    let mut warnings = Vec::new();
    if zero_count > 0 && !distinct.is_empty() {
        warnings.push(format!(
            "additional eigenvalue 0 on the imaginary axis (multiplicity {zero_count}): 0:1 resonance"
        ));
    }
    if distinct.len() > 1 {
        warnings.push(format!(
            "{} distinct imaginary pairs on the axis",
            distinct.len()
        ));
    }
    if multiplicity_violation {
        warnings.push("imaginary eigenvalue is not simple".into());
    }
    let omega = match distinct.as_slice() {
        [(w, 1)] => Some(*w),
        _ => None,
    };
    ImaginaryPair {
        omega,
        pairs: distinct.iter().map(|&(w, _)| w).collect(),
        zero_eigenvalue: zero_count > 0,
        multiplicity_violation,
        warnings,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingCheck {
    pub lambda0: f64,
    pub h: f64,
    /// `lambda0 - h, lambda0, lambda0 + h`.
    pub lambdas: [f64; 3],
    /// Real part of the tracked eigenvalue at each sampled lambda.
    pub sigma: [f64; 3],
    /// Imaginary part of the tracked eigenvalue at each sampled lambda.
    pub rho: [f64; 3],
    /// Central difference of `sigma`.
    pub derivative_estimate: f64,
    /// Central difference of `rho`.
    pub rho_derivative: f64,
}

impl CrossingCheck {
    pub fn crosses(&self) -> bool {
        self.derivative_estimate != 0.0
    }
}

/// Track the upper imaginary eigenvalue of the family through `lambda0 +- h`.
pub fn crossing_check(family: &AdmissibleOdeFamily, lambda0: f64, h: f64) -> Result<CrossingCheck> {
    if !(h > 0.0) {
        return Err(Error::OutOfRange(format!(
            "step h must be positive, got {h}"
        )));
    }
    let centre = spectra::eigenvalues(&family.jacobian_params(lambda0))?;
    let pair = detect_imaginary_pair(&centre, spectra::AXIS_TOL);
    let omega = pair.omega.ok_or_else(|| {
        Error::Precondition(format!("no simple imaginary pair at lambda = {lambda0}"))
    })?;
    let mu0 = Complex64::new(0.0, omega);
    let tracked = nearest(&centre.eigenvalues, mu0);
    for (k, z) in centre.eigenvalues.iter().enumerate() {
        if k != tracked && (z - centre.eigenvalues[tracked]).norm() <= 10.0 * h {
            return Err(Error::AmbiguousTracking(format!(
                "eigenvalue {z} within 10h of the tracked pair"
            )));
        }
    }
    let mu0 = centre.eigenvalues[tracked];
    let mut path = [mu0; 3];
    for (slot, lambda) in [(0, lambda0 - h), (2, lambda0 + h)] {
        let s = spectra::eigenvalues(&family.jacobian_params(lambda))?;
        let k = nearest(&s.eigenvalues, mu0);
        let best = (s.eigenvalues[k] - mu0).norm();
        let runner_up = s
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, z)| (z - mu0).norm())
            .fold(f64::INFINITY, f64::min);
        if runner_up <= best {
            return Err(Error::AmbiguousTracking(format!(
                "two eigenvalues equally close to {mu0} at lambda = {lambda}"
            )));
        }
        path[slot] = s.eigenvalues[k];
    }
    Ok(CrossingCheck {
        lambda0,
        h,
        lambdas: [lambda0 - h, lambda0, lambda0 + h],
        sigma: path.map(|z| z.re),
        rho: path.map(|z| z.im),
        derivative_estimate: (path[2].re - path[0].re) / (2.0 * h),
        rho_derivative: (path[2].im - path[0].im) / (2.0 * h),
    })
}

fn nearest(values: &[Complex64], target: Complex64) -> usize {
    (0..values.len())
        .min_by(|&i, &j| {
            (values[i] - target)
                .norm()
                .total_cmp(&(values[j] - target).norm())
        })
        .expect("non-empty spectrum")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(a: &[f64], b: &[f64]) -> RingParams {
        RingParams::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn reference_hopf_points() {
        let r = hopf_conditions_3(
            &ring(&[1.0, -2.0, -3.0], &[1.0, 1.0, -10.0]),
            PRODUCT_REL_TOL,
        )
        .unwrap();
        assert_eq!(r.omega_sq, 1.0);
        assert_eq!(r.product_lhs, -10.0);
        assert_eq!(r.product_rhs, -10.0);
        assert_eq!(r.trace, -4.0);
        assert_eq!(r.omega, Some(1.0));
        assert!(r.is_hopf() && r.flags.first_bifurcation && r.flags.marginal_excluded);

        let r = hopf_conditions_3(
            &ring(&[0.0, -2.0, -3.0], &[1.0, 1.0, -30.0]),
            PRODUCT_REL_TOL,
        )
        .unwrap();
        assert_eq!((r.omega_sq, r.product_lhs, r.trace), (6.0, -30.0, -5.0));
        assert!(r.is_hopf());
    }

    #[test]
    fn circulant_is_not_hopf() {
        let r = hopf_conditions_3(&ring(&[-1.0; 3], &[1.0; 3]), PRODUCT_REL_TOL).unwrap();
        assert_eq!(r.omega_sq, 3.0);
        assert_eq!(r.product_lhs, -8.0);
        assert!(r.flags.positivity && !r.flags.product_identity && !r.is_hopf());
    }

    #[test]
    fn wrong_size() {
        let p = ring(&[0.0; 4], &[1.0; 4]);
        assert!(matches!(
            hopf_conditions_3(&p, 1e-9),
            Err(Error::NotThreeNodes(4))
        ));
    }

    #[test]
    fn solve_b3_makes_identity_exact() {
        let a = [-1.0, -2.0, -3.0];
        let b3 = solve_b3(a, 0.5, 2.0).unwrap();
        let r = hopf_conditions_3(&ring(&a, &[0.5, 2.0, b3]), PRODUCT_REL_TOL).unwrap();
        assert!(r.is_hopf());
        assert!(solve_b3(a, 0.0, 1.0).is_err());
    }

    #[test]
    fn sign_constraint_examples() {
        let s = sign_constraints(&ring(&[1.0, -2.0, -3.0], &[1.0, 1.0, -10.0])).unwrap();
        assert_eq!(s.pairwise_sums, [-1.0, -2.0, -5.0]);
        assert!(s.holds());
        assert_eq!(s.class, CouplingClass::OneNegative { index: 2 });

        let s = sign_constraints(&ring(&[1.0, -2.0, -3.0], &[-1.0, -1.0, -10.0])).unwrap();
        assert_eq!(s.class, CouplingClass::AllNegative);

        assert!(matches!(
            sign_constraints(&ring(&[-1.0; 3], &[1.0; 3])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn imaginary_pair_detection() {
        let c = Complex64::new;
        let s = Spectrum::from_eigenvalues(vec![c(-4.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]);
        let p = detect_imaginary_pair(&s, 1e-8);
        assert_eq!(p.omega, Some(1.0));
        assert!(p.warnings.is_empty());

        let s = Spectrum::from_eigenvalues(vec![
            c(3.0, 0.0),
            c(0.0, 1.0),
            c(0.0, -1.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
        ]);
        let p = detect_imaginary_pair(&s, 1e-8);
        assert_eq!(p.omega, Some(1.0));
        assert!(p.zero_eigenvalue);
        assert!(p.warnings[0].contains("0:1"));

        let h = 3f64.sqrt() / 2.0;
        let s = Spectrum::from_eigenvalues(vec![c(1.0, 0.0), c(-0.5, h), c(-0.5, -h)]);
        assert_eq!(detect_imaginary_pair(&s, 1e-8).omega, None);

        let s =
            Spectrum::from_eigenvalues(vec![c(0.0, 1.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, -1.0)]);
        let p = detect_imaginary_pair(&s, 1e-8);
        assert_eq!(p.omega, None);
        assert!(p.multiplicity_violation);
    }

    #[test]
    fn crossing_for_diagonal_shift() {
        let f = AdmissibleOdeFamily::new(ring(&[1.0, -2.0, -3.0], &[1.0, 1.0, -10.0]));
        let c = crossing_check(&f, 0.0, 1e-4).unwrap();
        assert!((c.derivative_estimate - 1.0).abs() < 1e-6);
        assert!(c.rho_derivative.abs() < 1e-6);
        let c = crossing_check(&f, 0.0, 1e-2).unwrap();
        assert!((c.derivative_estimate - 1.0).abs() < 1e-4);
        assert!(crossing_check(&f, 0.5, 1e-4).is_err());
        assert!(crossing_check(&f, 0.0, 0.0).is_err());
    }

    #[test]
    fn ring_through_pair() {
        let p = hopf_ring_through(&[-1.0, -2.0, 0.5, -0.7], 1.3, &[1.0, -2.0, 0.5, 1.5]).unwrap();
        let s = spectra::eigenvalues(&p).unwrap();
        assert!(s.contains(Complex64::new(0.0, 1.3), 1e-10));
        assert!(s.contains(Complex64::new(0.0, -1.3), 1e-10));
    }
}
