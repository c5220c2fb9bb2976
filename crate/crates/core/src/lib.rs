//! Hopf bifurcation in fully inhomogeneous unidirectional rings with
//! one-dimensional node spaces.
//!
//! The crate covers the whole pipeline: exact Hopf conditions for three
//! nodes, ring spectra and eigenvectors for any `n`, per-edge phase shifts
//! and their quadrant classification, removal of repeated eigenvalues and
//! `k:1` resonances by perturbing couplings only, and RK4 simulation that
//! measures the phase relations of the bifurcating periodic orbit.

// `!(x > 0.0)` is used on purpose so that NaN takes the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod genericity;
pub mod hopf;
pub mod io;
pub mod phases;
pub mod poly;
pub mod ring;
pub mod simulate;
pub mod spectra;

pub use error::{Error, Result};
pub use genericity::{ForbiddenSet, PerturbationResult};
pub use hopf::{CrossingCheck, HopfReport};
pub use phases::{Case, PhaseProfile, RatioLocation, WaveClass};
pub use ring::{AdjacencyMatrix, AdmissibleOdeFamily, LambdaAction, RingParams};
pub use simulate::{CycleMeasurement, Trajectory};
pub use spectra::{CharPoly, Eigenvector, Spectrum};

pub use num_complex::Complex64;
