//! Detection and removal of repeated eigenvalues and `k:1` resonances by
//! perturbing the couplings only.
//!
//! The characteristic polynomial is `p = A + c` with `A` fixed by the
//! diagonal and `c` the signed coupling product. A degeneracy occurs only at
//! finitely many values of `c`, so moving `b_1` (which moves `c` linearly)
//! to the middle of the widest gap between those values removes it.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::RealPoly;
use crate::ring::RingParams;
use crate::spectra::{self, Spectrum, MULTIPLICITY_REL_TOL, PAIR_TOL};

/// Relative threshold for accepting `-A(lambda_i)` as real.
pub const REAL_VALUE_REL_TOL: f64 = 1e-9;
/// Default tolerance for matching `k i omega` against the spectrum.
pub const RESONANCE_TOL: f64 = 1e-8;
pub const DEFAULT_K_MAX: u32 = 5;
/// `c` this close (relative) to a forbidden value counts as sitting on it.
pub const COINCIDENCE_REL_TOL: f64 = 1e-12;

fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn ser_complex_vec<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
    pairs.serialize(s)
}

/// Why a coupling product is forbidden.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ForbiddenSource {
    /// `c = 0` decouples the ring.
    ZeroProduct,
    /// `lambda` is a root of `p'`; `c = -A(lambda)` makes it a double root.
    CriticalPoint {
        #[serde(serialize_with = "ser_complex")]
        lambda: Complex64,
    },
    /// `lambda` and `k lambda` are both roots at `c = -A(lambda)`.
    Ratio {
        k: u32,
        #[serde(serialize_with = "ser_complex")]
        lambda: Complex64,
    },
    /// Root of the polynomial returned by [`resonance_poly`].
    ResonancePoly {
        k: u32,
        #[serde(serialize_with = "ser_complex")]
        lambda: Complex64,
    },
    /// `c = -A(0)` puts 0 in the spectrum.
    ZeroEigenvalue,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ForbiddenSet {
    pub values: Vec<f64>,
    pub sources: Vec<ForbiddenSource>,
}

impl ForbiddenSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Add `value` unless it already appears (to within rounding).
    pub fn insert(&mut self, value: f64, source: ForbiddenSource) {
        let dup = self
            .values
            .iter()
            .any(|&v| (v - value).abs() <= 1e-12 * (1.0 + value.abs()));
        if !dup {
            self.values.push(value);
            self.sources.push(source);
        }
    }

    fn extend(&mut self, other: ForbiddenSet) {
        for (v, s) in other.values.into_iter().zip(other.sources) {
            self.insert(v, s);
        }
    }

    /// Distance from `c` to the closest forbidden value.
    pub fn distance(&self, c: f64) -> f64 {
        self.values
            .iter()
            .map(|v| (v - c).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Eigenvalues that coincide to within the gap tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    #[serde(serialize_with = "ser_complex")]
    pub center: Complex64,
    #[serde(serialize_with = "ser_complex_vec")]
    pub members: Vec<Complex64>,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Resonance {
    /// `+-i omega` and `+-i k omega` are both eigenvalues.
    KToOne { k: u32, omega: f64 },
    /// 0 is an eigenvalue alongside `+-i omega`.
    ZeroToOne { omega: f64 },
    /// `mu` and `k mu` are both eigenvalues (`mu` off the imaginary axis).
    Ratio {
        k: u32,
        #[serde(serialize_with = "ser_complex")]
        mu: Complex64,
    },
}

/// A degeneracy present before perturbation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Degeneracy {
    ZeroCoupling {
        index: usize,
    },
    Multiple {
        cluster: Cluster,
    },
    /// The coupling product equals a forbidden value to rounding accuracy.
    ForbiddenProduct {
        value: f64,
    },
    Resonance {
        resonance: Resonance,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationResult {
    pub original: RingParams,
    pub perturbed: RingParams,
    /// `max_j |b_j - b'_j|`.
    pub delta: f64,
    /// Smallest pairwise eigenvalue distance after perturbation.
    pub achieved_gap: f64,
    pub removed: Vec<Degeneracy>,
    pub forbidden: ForbiddenSet,
    /// Coupling product before and after.
    pub c_before: f64,
    pub c_after: f64,
    /// Distance from `c_after` to the nearest forbidden value.
    pub margin: f64,
}

impl PerturbationResult {
    fn identity(params: &RingParams, gap: f64) -> Self {
        let c = params.coupling_constant();
        PerturbationResult {
            original: params.clone(),
            perturbed: params.clone(),
            delta: 0.0,
            achieved_gap: gap,
            removed: Vec::new(),
            forbidden: ForbiddenSet::default(),
            c_before: c,
            c_after: c,
            margin: f64::INFINITY,
        }
    }
}

/// Default gap tolerance for a spectrum.
pub fn default_gap_tol(spectrum: &Spectrum) -> f64 {
    MULTIPLICITY_REL_TOL * (1.0 + spectrum.spectral_radius())
}

pub fn detect_multiple(spectrum: &Spectrum, gap_tol: f64) -> Vec<Cluster> {
    let eig = &spectrum.eigenvalues;
    let n = eig.len();
    // Union-find over pairs closer than gap_tol.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eig[i] - eig[j]).norm() < gap_tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut clusters: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for (i, &z) in eig.iter().enumerate() {
        let root = find(&mut parent, i);
        match clusters.iter_mut().find(|(r, _)| *r == root) {
            Some((_, m)) => m.push(z),
            None => clusters.push((root, vec![z])),
        }
    }
    clusters
        .into_iter()
        .filter(|(_, m)| m.len() > 1)
        .map(|(_, members)| {
            let center = members.iter().sum::<Complex64>() / members.len() as f64;
            Cluster {
                center,
                multiplicity: members.len(),
                members,
            }
        })
        .collect()
}

fn a_poly(params: &RingParams) -> RealPoly {
    RealPoly::from_shifted_factors(params.a())
}

/// `-A(lambda)` for each root, kept only when it is real.
fn real_values(
    a: &RealPoly,
    roots: &[Complex64],
    set: &mut ForbiddenSet,
    source: impl Fn(Complex64) -> ForbiddenSource,
) {
    for &lambda in roots {
        let v = a.eval_complex(lambda);
        if v.im.abs() < REAL_VALUE_REL_TOL * (1.0 + v.norm()) {
            set.insert(-v.re, source(lambda));
        }
    }
}

/// Coupling products at which `p = A + c` has a repeated root.
pub fn multiplicity_forbidden_set(params: &RingParams) -> Result<ForbiddenSet> {
    params.ensure_valid()?;
    let a = a_poly(params);
    let roots = a.derivative().roots()?;
    let mut set = ForbiddenSet::default();
    real_values(&a, &roots, &mut set, |lambda| {
        ForbiddenSource::CriticalPoint { lambda }
    });
    Ok(set)
}

/// `Q(x) = A'(x) (A(kx) - A(x)) - A'(kx) (k - 1) A(x)`, which does not
/// depend on the couplings.
pub fn resonance_poly(params: &RingParams, k: u32) -> Result<RealPoly> {
    if k < 2 {
        return Err(Error::OutOfRange(format!(
            "resonance order k must be >= 2, got {k}"
        )));
    }
    params.ensure_valid()?;
    let k = k as f64;
    let a = a_poly(params);
    let da = a.derivative();
    let first = da.mul(&a.compose_scale(k).sub(&a));
    let second = da.compose_scale(k).mul(&a).scale(k - 1.0);
    Ok(first.sub(&second))
}

/// `(A(kx) - A(x)) / x`: its roots are exactly the nonzero `lambda` for which
/// some `c` makes both `lambda` and `k lambda` eigenvalues.
pub fn ratio_poly(params: &RingParams, k: u32) -> Result<RealPoly> {
    if k < 2 {
        return Err(Error::OutOfRange(format!(
            "resonance order k must be >= 2, got {k}"
        )));
    }
    params.ensure_valid()?;
    let a = a_poly(params);
    let diff = a.compose_scale(k as f64).sub(&a);
    // The constant term cancels exactly, so dividing by x is a shift.
    Ok(RealPoly::new(diff.coeffs()[1..].to_vec()))
}

/// Coupling products giving a `k:1` resonance for some `2 <= k <= k_max`,
/// or a zero eigenvalue.
pub fn resonance_forbidden_set(params: &RingParams, k_max: u32) -> Result<ForbiddenSet> {
    if k_max < 2 {
        return Err(Error::OutOfRange(format!(
            "k_max must be >= 2, got {k_max}"
        )));
    }
    let a = a_poly(params);
    let mut set = ForbiddenSet::default();
    set.insert(-a.eval(0.0), ForbiddenSource::ZeroEigenvalue);
    for k in 2..=k_max {
        let ratio_roots = ratio_poly(params, k)?.roots()?;
        real_values(&a, &ratio_roots, &mut set, |lambda| {
            ForbiddenSource::Ratio { k, lambda }
        });
        let q = resonance_poly(params, k)?;
        if !q.is_zero() {
            let q_roots = q.roots()?;
            real_values(&a, &q_roots, &mut set, |lambda| {
                ForbiddenSource::ResonancePoly { k, lambda }
            });
        }
    }
    Ok(set)
}

/// Imaginary `k:1` resonances (`2 <= k <= k_max`) and the `0:1` flag.
pub fn detect_resonance(spectrum: &Spectrum, k_max: u32, tol: f64) -> Vec<Resonance> {
    let omegas: Vec<f64> = spectrum
        .eigenvalues
        .iter()
        .filter(|z| z.re.abs() <= tol && z.im > PAIR_TOL.max(tol))
        .map(|z| z.im)
        .collect();
    let has_zero = spectrum.contains(Complex64::new(0.0, 0.0), tol);
    let mut found = Vec::new();
    for &omega in &omegas {
        for k in 2..=k_max {
            if spectrum.contains(Complex64::new(0.0, k as f64 * omega), tol) {
                found.push(Resonance::KToOne { k, omega });
            }
        }
        if has_zero {
            found.push(Resonance::ZeroToOne { omega });
        }
    }
    found
}

/// Pairs `mu, k mu` in the spectrum with `mu` nonzero and off the imaginary
/// axis; `rel_tol` scales with `|k mu|`.
pub fn detect_eigenvalue_ratios(spectrum: &Spectrum, k_max: u32, rel_tol: f64) -> Vec<Resonance> {
    let mut found = Vec::new();
    for &mu in &spectrum.eigenvalues {
        if mu.norm() <= rel_tol || mu.re.abs() <= rel_tol {
            continue;
        }
        for k in 2..=k_max {
            let target = mu * k as f64;
            if spectrum.contains(target, rel_tol * (1.0 + target.norm())) {
                found.push(Resonance::Ratio { k, mu });
            }
        }
    }
    found
}

struct Adjustment {
    perturbed: RingParams,
    /// Zero couplings that were replaced.
    removed: Vec<Degeneracy>,
    c_after: f64,
}

/// Replace zero couplings by `+epsilon / 2`, then move `b_1` by at most
/// `epsilon / 2` so that `c` lands in the middle of the widest
/// forbidden-free part of its reachable interval.
fn adjust_coupling_product(
    params: &RingParams,
    epsilon: f64,
    forbidden: &ForbiddenSet,
) -> Adjustment {
    let half = 0.5 * epsilon;
    let mut removed = Vec::new();
    let mut b = params.b().to_vec();
    for (index, bj) in b.iter_mut().enumerate() {
        if *bj == 0.0 {
            *bj = half;
            removed.push(Degeneracy::ZeroCoupling { index });
        }
    }
    let n = b.len();
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    // c = slope * b_1
    let slope = sign * b[1..].iter().product::<f64>();
    let c0 = slope * b[0];
    let reach = half * slope.abs();
    let (lo, hi) = (c0 - reach, c0 + reach);
    let mut cuts: Vec<f64> = forbidden
        .values
        .iter()
        .copied()
        .chain(std::iter::once(0.0))
        .filter(|v| *v > lo && *v < hi)
        .collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    let (mut best_lo, mut best_hi) = (lo, lo);
    for w in cuts.windows(2) {
        if w[1] - w[0] > best_hi - best_lo {
            best_lo = w[0];
            best_hi = w[1];
        }
    }
    let target = 0.5 * (best_lo + best_hi);
    let b1 = (target / slope).clamp(b[0] - half, b[0] + half);
    b[0] = b1;
    Adjustment {
        perturbed: params.with_b(b),
        removed,
        c_after: slope * b1,
    }
}

fn finish(
    params: &RingParams,
    adjustment: Adjustment,
    forbidden: ForbiddenSet,
    epsilon: f64,
    clean: impl Fn(&Spectrum) -> bool,
    before: Vec<Degeneracy>,
) -> Result<PerturbationResult> {
    let Adjustment {
        perturbed,
        mut removed,
        c_after,
    } = adjustment;
    let spectrum = spectra::eigenvalues(&perturbed)?;
    let margin = forbidden.distance(c_after).min(c_after.abs());
    if !clean(&spectrum) {
        return Err(Error::BudgetInsufficient {
            epsilon,
            nearest: margin,
        });
    }
    let delta = params
        .b()
        .iter()
        .zip(perturbed.b())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    removed.extend(before);
    log::debug!(
        "coupling product {} -> {c_after}, margin {margin:e}",
        params.coupling_constant()
    );
    Ok(PerturbationResult {
        original: params.clone(),
        achieved_gap: spectrum.min_gap(),
        perturbed,
        delta,
        removed,
        forbidden,
        c_before: params.coupling_constant(),
        c_after,
        margin,
    })
}

/// Clusters closer than `gap_tol`, or failing that, a coupling product
/// sitting on a multiplicity forbidden value.
fn multiplicity_degeneracies(
    params: &RingParams,
    spectrum: &Spectrum,
    gap_tol: f64,
    forbidden: &ForbiddenSet,
) -> Vec<Degeneracy> {
    let clusters = detect_multiple(spectrum, gap_tol);
    if !clusters.is_empty() {
        return clusters
            .into_iter()
            .map(|cluster| Degeneracy::Multiple { cluster })
            .collect();
    }
    // An exactly repeated root comes back from the root finder split by
    // about sqrt(eps), which can exceed gap_tol; catch it through c instead.
    let c = params.coupling_constant();
    forbidden
        .values
        .iter()
        .zip(&forbidden.sources)
        .filter(|(_, s)| matches!(s, ForbiddenSource::CriticalPoint { .. }))
        .find(|(&f, _)| (c - f).abs() <= COINCIDENCE_REL_TOL * (1.0 + f.abs()))
        .map(|(&value, _)| vec![Degeneracy::ForbiddenProduct { value }])
        .unwrap_or_default()
}

pub fn remove_multiple(params: &RingParams, epsilon: f64) -> Result<PerturbationResult> {
    remove_multiple_with(params, epsilon, None)
}

/// As [`remove_multiple`] with an explicit gap tolerance
/// (default `1e-7 (1 + spectral radius)`).
pub fn remove_multiple_with(
    params: &RingParams,
    epsilon: f64,
    gap_tol: Option<f64>,
) -> Result<PerturbationResult> {
    check_epsilon(epsilon)?;
    params.ensure_valid()?;
    let spectrum = spectra::eigenvalues(params)?;
    let gap_tol = gap_tol.unwrap_or_else(|| default_gap_tol(&spectrum));
    let has_zero = params.b().contains(&0.0);
    let forbidden = multiplicity_forbidden_set(params)?;
    let before = multiplicity_degeneracies(params, &spectrum, gap_tol, &forbidden);
    if before.is_empty() && !has_zero {
        return Ok(PerturbationResult::identity(params, spectrum.min_gap()));
    }
    let adjustment = adjust_coupling_product(params, epsilon, &forbidden);
    finish(
        params,
        adjustment,
        forbidden,
        epsilon,
        |s| s.min_gap() > gap_tol,
        before,
    )
}

/// Clear `k:1` resonances for `2 <= k <= k_max` (imaginary pairs and the
/// general `mu, k mu` case), zero eigenvalues and repeated eigenvalues with
/// one adjustment of `b_1`.
pub fn remove_resonances(
    params: &RingParams,
    k_max: u32,
    epsilon: f64,
) -> Result<PerturbationResult> {
    remove_resonances_with(params, k_max, epsilon, RESONANCE_TOL)
}

pub fn remove_resonances_with(
    params: &RingParams,
    k_max: u32,
    epsilon: f64,
    tol: f64,
) -> Result<PerturbationResult> {
    check_epsilon(epsilon)?;
    if k_max < 2 {
        return Err(Error::OutOfRange(format!(
            "k_max must be >= 2, got {k_max}"
        )));
    }
    params.ensure_valid()?;
    let spectrum = spectra::eigenvalues(params)?;
    let gap_tol = default_gap_tol(&spectrum);
    let found_in = |s: &Spectrum| {
        let mut r = detect_resonance(s, k_max, tol);
        r.extend(detect_eigenvalue_ratios(s, k_max, gap_tol));
        r
    };
    let multiplicity = multiplicity_forbidden_set(params)?;
    let mut before = multiplicity_degeneracies(params, &spectrum, gap_tol, &multiplicity);
    before.extend(
        found_in(&spectrum)
            .into_iter()
            .map(|resonance| Degeneracy::Resonance { resonance }),
    );
    let has_zero = params.b().contains(&0.0);
    if before.is_empty() && !has_zero {
        return Ok(PerturbationResult::identity(params, spectrum.min_gap()));
    }
    let mut forbidden = resonance_forbidden_set(params, k_max)?;
    forbidden.extend(multiplicity);
    let adjustment = adjust_coupling_product(params, epsilon, &forbidden);
    finish(
        params,
        adjustment,
        forbidden,
        epsilon,
        |s| found_in(s).is_empty() && s.min_gap() > gap_tol,
        before,
    )
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "epsilon must be positive, got {epsilon}"
        )))
    }
}
