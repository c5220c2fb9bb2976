//! Real polynomials and an Aberth–Ehrlich simultaneous root finder.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Real polynomial with coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

impl RealPoly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        RealPoly { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        RealPoly::new(vec![c])
    }

    /// `prod_j (r_j - x)`.
    pub fn from_shifted_factors(roots: &[f64]) -> Self {
        let mut p = RealPoly::constant(1.0);
        for &r in roots {
            p = p.mul(&RealPoly::new(vec![r, -1.0]));
        }
        p
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn add(&self, other: &RealPoly) -> RealPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len)
            .map(|i| self.coeffs.get(i).unwrap_or(&0.0) + other.coeffs.get(i).unwrap_or(&0.0))
            .collect();
        RealPoly::new(c)
    }

    pub fn sub(&self, other: &RealPoly) -> RealPoly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> RealPoly {
        RealPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &RealPoly) -> RealPoly {
        let mut c = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in other.coeffs.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        RealPoly::new(c)
    }

    pub fn derivative(&self) -> RealPoly {
        if self.coeffs.len() == 1 {
            return RealPoly::constant(0.0);
        }
        RealPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect(),
        )
    }

    /// `x -> p(k x)`.
    pub fn compose_scale(&self, k: f64) -> RealPoly {
        let mut pow = 1.0;
        let c = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c * pow;
                pow *= k;
                v
            })
            .collect();
        RealPoly::new(c)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// All complex roots (with multiplicity).
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        if self.is_zero() {
            return Err(Error::Precondition("roots of the zero polynomial".into()));
        }
        // Exact zero roots are peeled off so they come back exactly.
        let zeros = self.coeffs.iter().take_while(|&&c| c == 0.0).count();
        let reduced = RealPoly::new(self.coeffs[zeros..].to_vec());
        let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
        if reduced.degree() > 0 {
            roots.extend(aberth(&reduced, &AberthOptions::default())?.roots);
        }
        Ok(roots)
    }
}

/// Anything the root finder can evaluate together with its derivative.
pub trait Evaluate {
    fn degree(&self) -> usize;

    /// `(p(z), p'(z))`.
    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64);

    /// Radius of a disc that contains every root.
    fn root_radius(&self) -> f64;

    /// Rounding-error scale of an evaluation at `z`; residuals are judged
    /// against it.
    fn residual_scale(&self, z: Complex64) -> f64;
}

impl Evaluate for RealPoly {
    fn degree(&self) -> usize {
        RealPoly::degree(self)
    }

    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    fn root_radius(&self) -> f64 {
        let lead = self.leading().abs();
        let bound = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .fold(0.0_f64, |m, c| m.max(c.abs() / lead));
        1.0 + bound
    }

    fn residual_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.abs())
    }
}

#[derive(Debug, Clone)]
pub struct AberthOptions {
    pub max_iterations: usize,
    /// Relative step size below which a root is considered converged.
    pub step_tol: f64,
    /// Accept the result if `|p(z)| <= residual_tol * residual_scale(z)` for every root.
    pub residual_tol: f64,
    pub polish_steps: usize,
}

impl Default for AberthOptions {
    fn default() -> Self {
        AberthOptions {
            max_iterations: 800,
            step_tol: 4.0 * f64::EPSILON,
            residual_tol: 1e-10,
            polish_steps: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AberthRoots {
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

/// Simultaneous Aberth–Ehrlich iteration followed by per-root Newton polishing.
pub fn aberth<P: Evaluate + ?Sized>(poly: &P, opts: &AberthOptions) -> Result<AberthRoots> {
    let n = poly.degree();
    if n == 0 {
        return Ok(AberthRoots {
            roots: vec![],
            residuals: vec![],
            iterations: 0,
        });
    }
    let radius = poly.root_radius();
    // Offset angle breaks the symmetry with real-coefficient conjugate pairs.
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    let mut iterations = 0;
    while iterations < opts.max_iterations && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = poly.eval_with_derivative(z[i]);
            if p == Complex64::new(0.0, 0.0) {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d == Complex64::new(0.0, 0.0) {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                // Stationary point of p: nudge off it.
                let nudge = f64::EPSILON.sqrt() * (1.0 + z[i].norm());
                z[i] += Complex64::new(nudge, nudge);
                continue;
            }
            z[i] -= step;
            if step.norm() <= opts.step_tol * (1.0 + z[i].norm()) {
                done[i] = true;
            }
        }
    }

    for root in z.iter_mut() {
        for _ in 0..opts.polish_steps {
            let (p, dp) = poly.eval_with_derivative(*root);
            if dp == Complex64::new(0.0, 0.0) {
                break;
            }
            let candidate = *root - p / dp;
            if poly.eval_with_derivative(candidate).0.norm() < p.norm() {
                *root = candidate;
            } else {
                break;
            }
        }
    }

    let residuals: Vec<f64> = z
        .iter()
        .map(|&r| poly.eval_with_derivative(r).0.norm())
        .collect();
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    // Residuals below the rounding level of an evaluation on the unit circle
    // are accepted outright; this covers roots at the origin, whose own
    // scale shrinks with them.
    let floor = f64::EPSILON * poly.residual_scale(Complex64::new(1.0, 0.0));
    let bad = z
        .iter()
        .zip(&residuals)
        .any(|(&r, &res)| !(res <= opts.residual_tol * poly.residual_scale(r) || res <= floor));
    if bad {
        return Err(Error::NoConvergence {
            iterations,
            worst_residual: worst,
        });
    }
    Ok(AberthRoots {
        roots: z,
        residuals,
        iterations,
    })
}
