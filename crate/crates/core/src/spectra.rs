//! Characteristic polynomials, eigenvalues and eigenvectors of ring
//! Jacobians, plus exact-polynomial spectra of integer adjacency matrices.
//!
//! Expanding `det(J - x I)` along the first row gives
//! `p(x) = A(x) + c` with `A(x) = prod_j (a_j - x)` and
//! `c = (-1)^(n+1) b_1 ... b_n`. The root finder works on this product form
//! directly, so `p` and `p'` are never formed from expanded coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{aberth, AberthOptions, Evaluate, RealPoly};
use crate::ring::{AdjacencyMatrix, RingParams};

/// Imaginary parts below this are treated as real when pairing roots.
pub const PAIR_TOL: f64 = 1e-8;
/// Default distance from the imaginary axis accepted as "purely imaginary".
pub const AXIS_TOL: f64 = 1e-8;
/// Relative closeness below which two roots count as one repeated root.
pub const MULTIPLICITY_REL_TOL: f64 = 1e-7;
/// Eigenvector closure product must equal 1 within this.
pub const CLOSURE_TOL: f64 = 1e-8;
/// Unpaired roots with relative imaginary part below this are taken as real.
const SPLIT_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharPoly {
    pub n: usize,
    pub a_factors: Vec<f64>,
    pub c: f64,
    /// Expanded coefficients of `p`, ascending.
    pub coefficients: RealPoly,
}

impl CharPoly {
    /// `A(x) = prod_j (a_j - x)` as expanded coefficients.
    pub fn a_poly(&self) -> RealPoly {
        RealPoly::from_shifted_factors(&self.a_factors)
    }

    /// `p(z)` from the product form.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        RingPoly::new(&self.a_factors, self.c)
            .eval_with_derivative(z)
            .0
    }
}

pub fn char_poly(params: &RingParams) -> CharPoly {
    let a_factors = params.a().to_vec();
    let c = params.coupling_constant();
    let coefficients = RealPoly::from_shifted_factors(&a_factors).add(&RealPoly::constant(c));
    CharPoly {
        n: params.n(),
        a_factors,
        c,
        coefficients,
    }
}

/// `A(z)` in product form.
pub fn a_product(a: &[f64], z: Complex64) -> Complex64 {
    a.iter().map(|&aj| Complex64::new(aj, 0.0) - z).product()
}

/// Product-form evaluator of `p(x) = prod (a_j - x) + c`.
struct RingPoly<'a> {
    a: &'a [f64],
    c: f64,
}

impl<'a> RingPoly<'a> {
    fn new(a: &'a [f64], c: f64) -> Self {
        RingPoly { a, c }
    }
}

impl Evaluate for RingPoly<'_> {
    fn degree(&self) -> usize {
        self.a.len()
    }

    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &aj in self.a {
            let f = Complex64::new(aj, 0.0) - z;
            dp = dp * f - p;
            p *= f;
        }
        (p + self.c, dp)
    }

    fn root_radius(&self) -> f64 {
        // Cauchy bound from the expanded (monic-normalised) coefficients.
        let coeffs = RealPoly::from_shifted_factors(self.a).add(&RealPoly::constant(self.c));
        coeffs.root_radius()
    }

    fn residual_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.a.iter().map(|aj| aj.abs() + r).product::<f64>() + self.c.abs()
    }
}

/// Eigenvalues with the bookkeeping the Hopf and genericity checks need.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Sorted lexicographically by `(re, im)`.
    pub eigenvalues: Vec<Complex64>,
    /// `|p(mu)|` for each eigenvalue.
    pub residuals: Vec<f64>,
    /// How many computed roots (including itself) each eigenvalue merges with.
    pub multiplicity: Vec<usize>,
    pub pair_tolerance: f64,
    /// Trace of the matrix (sum of eigenvalues).
    pub tau: f64,
    /// Smallest positive imaginary part among pairs within [`AXIS_TOL`] of the axis.
    pub omega: Option<f64>,
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.eigenvalues.iter().map(|z| [z.re, z.im]).collect();
        let mut s = serializer.serialize_struct("Spectrum", 6)?;
        s.serialize_field("eigenvalues", &pairs)?;
        s.serialize_field("residuals", &self.residuals)?;
        s.serialize_field("multiplicity", &self.multiplicity)?;
        s.serialize_field("pair_tolerance", &self.pair_tolerance)?;
        s.serialize_field("tau", &self.tau)?;
        s.serialize_field("omega", &self.omega)?;
        s.end()
    }
}

impl Spectrum {
    fn from_roots(roots: Vec<Complex64>, tau: f64, residual: impl Fn(Complex64) -> f64) -> Self {
        let mut eigenvalues = symmetrize_conjugates(roots, PAIR_TOL);
        eigenvalues.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        let residuals = eigenvalues.iter().map(|&z| residual(z)).collect();
        let multiplicity = eigenvalues
            .iter()
            .map(|&z| {
                eigenvalues
                    .iter()
                    .filter(|&&w| (z - w).norm() < MULTIPLICITY_REL_TOL * (1.0 + z.norm()))
                    .count()
            })
            .collect();
        let omega = eigenvalues
            .iter()
            .filter(|z| z.im > PAIR_TOL && z.re.abs() <= AXIS_TOL)
            .map(|z| z.im)
            .min_by(f64::total_cmp);
        Spectrum {
            eigenvalues,
            residuals,
            multiplicity,
            pair_tolerance: PAIR_TOL,
            tau,
            omega,
        }
    }

    /// Build a spectrum from an explicit eigenvalue list (residuals unknown, set to 0).
    pub fn from_eigenvalues(eigenvalues: Vec<Complex64>) -> Self {
        let tau = eigenvalues.iter().map(|z| z.re).sum();
        Spectrum::from_roots(eigenvalues, tau, |_| 0.0)
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn is_simple(&self) -> bool {
        self.multiplicity.iter().all(|&m| m == 1)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Smallest distance between two eigenvalues (infinite for n < 2).
    pub fn min_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for (i, x) in self.eigenvalues.iter().enumerate() {
            for y in &self.eigenvalues[i + 1..] {
                gap = gap.min((x - y).norm());
            }
        }
        gap
    }

    pub fn contains(&self, target: Complex64, tol: f64) -> bool {
        self.eigenvalues.iter().any(|z| (z - target).norm() <= tol)
    }
}

/// Pair roots of a real polynomial into conjugates and symmetrise each pair.
///
/// Pairs are matched closest-first, and only when the partner sits much
/// closer to the conjugate than either root sits to the real axis. A
/// repeated real root comes back split into two slightly complex roots that
/// fail that test; such leftovers with small imaginary part are made real.
fn symmetrize_conjugates(mut roots: Vec<Complex64>, tol: f64) -> Vec<Complex64> {
    let n = roots.len();
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for i in (0..n).filter(|&i| roots[i].im > 0.0) {
        for j in (0..n).filter(|&j| roots[j].im < 0.0) {
            let d = (roots[i] - roots[j].conj()).norm();
            if d <= 0.5 * roots[i].im.min(-roots[j].im) {
                candidates.push((d, i, j));
            }
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut used = vec![false; n];
    for (_, i, j) in candidates {
        if used[i] || used[j] {
            continue;
        }
        used[i] = true;
        used[j] = true;
        let mut avg = (roots[i] + roots[j].conj()) * 0.5;
        if avg.im <= tol {
            avg.im = 0.0;
        }
        roots[i] = avg;
        roots[j] = avg.conj();
    }
    for (z, _) in roots.iter_mut().zip(&used).filter(|(_, u)| !**u) {
        if z.im.abs() <= tol.max(SPLIT_REL_TOL * (1.0 + z.norm())) {
            z.im = 0.0;
        }
    }
    roots
}

pub fn eigenvalues(params: &RingParams) -> Result<Spectrum> {
    params.ensure_valid()?;
    let poly = RingPoly::new(params.a(), params.coupling_constant());
    let found = aberth(&poly, &AberthOptions::default())?;
    Ok(Spectrum::from_roots(found.roots, params.trace(), |z| {
        poly.eval_with_derivative(z).0.norm()
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenvector {
    pub entries: Vec<Complex64>,
    pub eigenvalue: Complex64,
    /// `|u_j|`.
    pub moduli: Vec<f64>,
    /// `arg u_j` in `[0, 2 pi)`.
    pub arguments: Vec<f64>,
    /// `prod_j (mu - a_j) / b_j`, which equals 1 at an eigenvalue.
    pub closure: Complex64,
}

impl Serialize for Eigenvector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<[f64; 2]> = self.entries.iter().map(|z| [z.re, z.im]).collect();
        let mut s = serializer.serialize_struct("Eigenvector", 5)?;
        s.serialize_field("entries", &entries)?;
        s.serialize_field("eigenvalue", &[self.eigenvalue.re, self.eigenvalue.im])?;
        s.serialize_field("moduli", &self.moduli)?;
        s.serialize_field("arguments", &self.arguments)?;
        s.serialize_field("closure", &[self.closure.re, self.closure.im])?;
        s.end()
    }
}

/// Argument normalised to `[0, 2 pi)`.
pub fn arg_positive(z: Complex64) -> f64 {
    let t = z.im.atan2(z.re);
    if t < 0.0 {
        let w = t + 2.0 * PI;
        // -0.0 and tiny negatives round up to exactly 2 pi.
        if w >= 2.0 * PI {
            0.0
        } else {
            w
        }
    } else {
        t
    }
}

/// Eigenvector with `u_1 = 1` from `u_{j+1} = (mu - a_j) / b_j u_j`.
pub fn eigenvector_for(params: &RingParams, mu: Complex64) -> Result<Eigenvector> {
    params.ensure_valid()?;
    params.ensure_nonzero_couplings()?;
    let n = params.n();
    let ratio = |j: usize| (mu - params.a()[j]) / params.b()[j];
    let mut entries = Vec::with_capacity(n);
    let mut u = Complex64::new(1.0, 0.0);
    entries.push(u);
    for j in 0..n - 1 {
        u *= ratio(j);
        entries.push(u);
    }
    let closure = u * ratio(n - 1);
    let deviation = (closure - 1.0).norm();
    if !(deviation <= CLOSURE_TOL) {
        return Err(Error::NotAnEigenvalue { mu, deviation });
    }
    Ok(Eigenvector {
        moduli: entries.iter().map(|z| z.norm()).collect(),
        arguments: entries.iter().map(|&z| arg_positive(z)).collect(),
        entries,
        eigenvalue: mu,
        closure,
    })
}

/// `max_j |(J u - mu u)_j|`.
pub fn eigen_residual(params: &RingParams, mu: Complex64, u: &[Complex64]) -> f64 {
    let n = params.n();
    (0..n)
        .map(|j| (u[j] * params.a()[j] + u[(j + 1) % n] * params.b()[j] - u[j] * mu).norm())
        .fold(0.0, f64::max)
}

/// `det(x I - A)` with exact integer coefficients (Faddeev–LeVerrier).
pub fn adjacency_char_poly(adj: &AdjacencyMatrix) -> Result<Vec<i128>> {
    let n = adj.n();
    let a: Vec<Vec<i128>> = adj
        .rows()
        .iter()
        .map(|r| r.iter().map(|&v| i128::from(v)).collect())
        .collect();
    let overflow =
        || Error::OutOfRange("adjacency characteristic polynomial overflows i128".into());
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    let mut m = vec![vec![0i128; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s: i128 = 0;
                for l in 0..n {
                    s = s
                        .checked_add(a[i][l].checked_mul(m[l][j]).ok_or_else(overflow)?)
                        .ok_or_else(overflow)?;
                }
                next[i][j] = s;
            }
            next[i][i] = next[i][i]
                .checked_add(coeffs[n - k + 1])
                .ok_or_else(overflow)?;
        }
        m = next;
        let mut trace: i128 = 0;
        for i in 0..n {
            for l in 0..n {
                trace = trace
                    .checked_add(a[i][l].checked_mul(m[l][i]).ok_or_else(overflow)?)
                    .ok_or_else(overflow)?;
            }
        }
        debug_assert_eq!(trace % k as i128, 0);
        coeffs[n - k] = -trace / k as i128;
    }
    Ok(coeffs)
}

/// Split off every integer root of a monic integer polynomial by exact
/// synthetic division. Returns the integer roots (with multiplicity) and
/// the remaining quotient.
fn deflate_integer_roots(coeffs: &[i128]) -> (Vec<i128>, Vec<i128>) {
    let mut rest = coeffs.to_vec();
    let mut roots = Vec::new();
    while rest.len() > 1 && rest[0] == 0 {
        roots.push(0);
        rest.remove(0);
    }
    if rest.len() <= 1 {
        return (roots, rest);
    }
    let bound = 1 + rest.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
    let c0 = rest[0].unsigned_abs();
    let mut candidates = Vec::new();
    let mut d: u128 = 1;
    while d <= c0.min(bound) {
        if c0.is_multiple_of(d) {
            candidates.push(d as i128);
            candidates.push(-(d as i128));
        }
        d += 1;
    }
    for r in candidates {
        loop {
            if rest.len() <= 1 {
                break;
            }
            match synthetic_division(&rest, r) {
                Some(q) => {
                    roots.push(r);
                    rest = q;
                }
                None => break,
            }
        }
    }
    (roots, rest)
}

/// Quotient of `p / (x - r)` if `r` is an exact root, `None` otherwise
/// (including on overflow).
fn synthetic_division(coeffs: &[i128], r: i128) -> Option<Vec<i128>> {
    let deg = coeffs.len() - 1;
    let mut q = vec![0i128; deg];
    let mut carry: i128 = 0;
    for i in (0..=deg).rev() {
        let v = coeffs[i].checked_add(carry.checked_mul(r)?)?;
        if i == 0 {
            return (v == 0).then_some(q);
        }
        q[i - 1] = v;
        carry = v;
    }
    None
}

pub fn adjacency_spectrum(adj: &AdjacencyMatrix) -> Result<Spectrum> {
    let exact = adjacency_char_poly(adj)?;
    let poly = RealPoly::new(exact.iter().map(|&c| c as f64).collect());
    let (integer_roots, rest) = deflate_integer_roots(&exact);
    let mut roots: Vec<Complex64> = integer_roots
        .iter()
        .map(|&r| Complex64::new(r as f64, 0.0))
        .collect();
    let rest = RealPoly::new(rest.iter().map(|&c| c as f64).collect());
    if rest.degree() > 0 {
        roots.extend(rest.roots()?);
    }
    let trace = adj
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| f64::from(r[i]))
        .sum();
    Ok(Spectrum::from_roots(roots, trace, |z| {
        poly.eval_complex(z).norm()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(a: &[f64], b: &[f64]) -> RingParams {
        RingParams::new(a.to_vec(), b.to_vec()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_spectrum(s: &Spectrum, expected: &[Complex64], tol: f64) {
        assert_eq!(s.len(), expected.len());
        let mut used = vec![false; expected.len()];
        for z in &s.eigenvalues {
            let k = (0..expected.len())
                .filter(|&k| !used[k])
                .min_by(|&i, &j| {
                    (z - expected[i])
                        .norm()
                        .total_cmp(&(z - expected[j]).norm())
                })
                .unwrap();
            assert!((z - expected[k]).norm() < tol, "{z} vs {:?}", expected);
            used[k] = true;
        }
    }

    #[test]
    fn char_poly_examples() {
        let p = char_poly(&ring(&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0]));
        assert_eq!(p.coefficients.coeffs(), &[1.0, 0.0, 0.0, -1.0]);

        // (1 - x)(-2 - x)(-3 - x) - 10 = -(x + 4)(x^2 + 1)
        let p = char_poly(&ring(&[1.0, -2.0, -3.0], &[1.0, 1.0, -10.0]));
        assert_eq!(p.c, -10.0);
        assert_eq!(p.coefficients.coeffs(), &[-4.0, -1.0, -4.0, -1.0]);
        // p(0) = det J = a_1 a_2 a_3 + b_1 b_2 b_3
        assert_eq!(p.coefficients.eval(0.0), 6.0 - 10.0);
        assert_eq!(p.coefficients.leading(), -1.0);
        // p(-4) = 0
        assert_eq!(p.eval(c(-4.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn ring_eigenvalues() {
        let s = eigenvalues(&ring(&[1.0, -2.0, -3.0], &[1.0, 1.0, -10.0])).unwrap();
        assert_spectrum(&s, &[c(-4.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)], 1e-12);
        assert_eq!(s.omega.map(|w| (w - 1.0).abs() < 1e-12), Some(true));
        assert!(s.is_simple());
        assert_eq!(s.tau, -4.0);

        let s = eigenvalues(&ring(&[0.0, -2.0, -3.0], &[1.0, 1.0, -30.0])).unwrap();
        let r6 = 6f64.sqrt();
        assert_spectrum(&s, &[c(-5.0, 0.0), c(0.0, r6), c(0.0, -r6)], 1e-12);

        let s = eigenvalues(&ring(&[0.0; 3], &[1.0; 3])).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert_spectrum(&s, &[c(1.0, 0.0), c(-0.5, h), c(-0.5, -h)], 1e-12);
        assert_eq!(s.omega, None);
    }

    #[test]
    fn sorted_and_conjugate() {
        let s = eigenvalues(&ring(
            &[0.3, -1.2, 2.5, 0.7, -0.4],
            &[1.1, -0.6, 2.0, 0.9, 1.3],
        ))
        .unwrap();
        for w in s.eigenvalues.windows(2) {
            assert!((w[0].re, w[0].im) <= (w[1].re, w[1].im));
        }
        for z in &s.eigenvalues {
            if z.im != 0.0 {
                assert!(s.eigenvalues.contains(&z.conj()));
            }
        }
    }

    #[test]
    fn split_double_root_not_paired_with_complex_root() {
        // Raw roots here include -0.6776 + 1.2e-8 i and -0.6776 - 4.6e-9 i.
        let a = [
            -2.0581495144440627,
            2.6825103864235142,
            -2.3161064520812973,
            -0.08549882865852876,
            -2.2115455343620005,
        ];
        let b = [
            3.547911520717053,
            -1.058554385679476,
            0.3370622402333261,
            -1.8973733372517672,
            2.87415837611567,
        ];
        let s = eigenvalues(&ring(&a, &b)).unwrap();
        let sum: f64 = s.eigenvalues.iter().map(|z| z.re).sum();
        assert!((sum - s.tau).abs() < 1e-9, "{:?}", s.eigenvalues);
        assert_eq!(s.eigenvalues.iter().filter(|z| z.im == 0.0).count(), 3);
        for z in &s.eigenvalues {
            assert!(s.eigenvalues.contains(&z.conj()));
        }
    }

    #[test]
    fn triple_zero() {
        let s = eigenvalues(&ring(&[0.0; 3], &[0.0, 1.0, 1.0])).unwrap();
        assert!(s.eigenvalues.iter().all(|z| z.norm() < 1e-7));
        assert_eq!(s.multiplicity, vec![3, 3, 3]);
    }

    #[test]
    fn reference_eigenvectors() {
        let p = ring(&[1.0, -2.0, -3.0], &[1.0, 1.0, -10.0]);
        let v = eigenvector_for(&p, c(0.0, 1.0)).unwrap();
        let expected = [c(1.0, 0.0), c(-1.0, 1.0), c(-3.0, 1.0)];
        for (u, e) in v.entries.iter().zip(expected) {
            assert!((u - e).norm() < 1e-15);
        }
        assert!(eigen_residual(&p, c(0.0, 1.0), &v.entries) < 1e-14);

        let v = eigenvector_for(&p, c(-4.0, 0.0)).unwrap();
        assert_eq!(v.entries, vec![c(1.0, 0.0), c(-5.0, 0.0), c(10.0, 0.0)]);
        assert!(eigen_residual(&p, c(-4.0, 0.0), &v.entries) < 1e-14);
        assert_eq!(v.arguments, vec![0.0, PI, 0.0]);
    }

    #[test]
    fn eigenvector_errors() {
        let p = ring(&[0.0; 3], &[0.0, 1.0, 1.0]);
        assert!(matches!(
            eigenvector_for(&p, c(0.0, 1.0)),
            Err(Error::ZeroCoupling { index: 0 })
        ));
        let p = ring(&[1.0, -2.0, -3.0], &[1.0, 1.0, -10.0]);
        assert!(matches!(
            eigenvector_for(&p, c(0.0, 2.0)),
            Err(Error::NotAnEigenvalue { .. })
        ));
    }

    #[test]
    fn arg_range() {
        assert_eq!(arg_positive(c(1.0, 0.0)), 0.0);
        assert_eq!(arg_positive(c(1.0, -0.0)), 0.0);
        assert_eq!(arg_positive(c(0.0, -1.0)), 1.5 * PI);
        assert!(arg_positive(c(1.0, -1e-300)) < 2.0 * PI);
    }

    #[test]
    fn adjacency_examples() {
        let five = AdjacencyMatrix::new(vec![
            vec![1, 1, 0, 1, 0],
            vec![1, 1, 0, 0, 1],
            vec![0, 2, 0, 0, 1],
            vec![0, 1, 1, 0, 1],
            vec![1, 0, 1, 0, 1],
        ])
        .unwrap();
        // x^2 (x - 3)(x^2 + 1) = x^5 - 3x^4 + x^3 - 3x^2
        assert_eq!(
            adjacency_char_poly(&five).unwrap(),
            vec![0, 0, -3, 1, -3, 1]
        );
        let s = adjacency_spectrum(&five).unwrap();
        assert_spectrum(
            &s,
            &[
                c(3.0, 0.0),
                c(0.0, 1.0),
                c(0.0, -1.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
            ],
            1e-12,
        );

        let s = adjacency_spectrum(&AdjacencyMatrix::identity(3)).unwrap();
        assert_eq!(s.eigenvalues, vec![c(1.0, 0.0); 3]);
        assert_eq!(s.multiplicity, vec![3, 3, 3]);
    }

    #[test]
    fn integer_deflation() {
        // (x - 2)^2 (x + 3)(x^2 + 1)
        let p = [12, -8, 11, -7, -1, 1];
        let (mut roots, rest) = deflate_integer_roots(&p);
        roots.sort();
        assert_eq!(roots, vec![-3, 2, 2]);
        assert_eq!(rest, vec![1, 0, 1]);
        assert_eq!(synthetic_division(&p, 5), None);
    }

    #[test]
    fn spectrum_json_pairs() {
        let s = eigenvalues(&ring(&[1.0, -2.0, -3.0], &[1.0, 1.0, -10.0])).unwrap();
        let v: serde_json::Value = serde_json::to_value(&s).unwrap();
        let first = &v["eigenvalues"][0];
        assert!((first[0].as_f64().unwrap() + 4.0).abs() < 1e-12);
        assert_eq!(v["residuals"].as_array().unwrap().len(), 3);
    }
}
