//! Phase shifts of the linearised eigenfunction and their classification.
//!
//! At an eigenvalue `i omega` the eigenvector satisfies
//! `u_{j+1} / u_j = (i omega - a_j) / b_j`, so the phase shift from node
//! `j` to node `j + 1` is `theta_j = 2 pi - arg((i omega - a_j) / b_j)`.
//! The quadrant of that ratio depends only on the signs of `a_j`, `b_j` and
//! `omega`, which is what the case tables enumerate.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hopf::{self, PRODUCT_REL_TOL};
use crate::ring::RingParams;
use crate::spectra::{self, arg_positive};

/// Relative tolerance for treating a diagonal entry as zero (Case C).
pub const ZERO_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    pub fn of(x: f64) -> Option<Sign> {
        if x > 0.0 {
            Some(Sign::Pos)
        } else if x < 0.0 {
            Some(Sign::Neg)
        } else {
            None
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Neg => -1.0,
            Sign::Pos => 1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Neg => "-",
            Sign::Pos => "+",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Which of `+-i omega` the eigenfunction uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OmegaSign {
    Pos,
    Neg,
}

impl OmegaSign {
    pub fn of(omega: f64) -> OmegaSign {
        if omega < 0.0 {
            OmegaSign::Neg
        } else {
            OmegaSign::Pos
        }
    }

    pub fn value(self) -> f64 {
        match self {
            OmegaSign::Pos => 1.0,
            OmegaSign::Neg => -1.0,
        }
    }
}

impl fmt::Display for OmegaSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OmegaSign::Pos => "omega>0",
            OmegaSign::Neg => "omega<0",
        })
    }
}

impl Serialize for OmegaSign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.value() as i8)
    }
}

/// Open quadrant of a nonzero complex number, or one of the two
/// imaginary half-axes (the ratio is never real).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RatioLocation {
    Quadrant(u8),
    AxisHalfPi,
    AxisThreeHalvesPi,
}

impl RatioLocation {
    /// Complex conjugation: quadrants 1 <-> 4, 2 <-> 3, pi/2 <-> 3pi/2.
    pub fn conjugate(self) -> Self {
        match self {
            RatioLocation::Quadrant(q) => RatioLocation::Quadrant(5 - q),
            RatioLocation::AxisHalfPi => RatioLocation::AxisThreeHalvesPi,
            RatioLocation::AxisThreeHalvesPi => RatioLocation::AxisHalfPi,
        }
    }

    /// Classify an angle in `[0, 2 pi)`; angles within `tol` of an axis
    /// snap to it. Real-axis angles fall into the quadrant above them.
    pub fn of_angle(theta: f64, tol: f64) -> Self {
        if (theta - PI / 2.0).abs() <= tol {
            RatioLocation::AxisHalfPi
        } else if (theta - 1.5 * PI).abs() <= tol {
            RatioLocation::AxisThreeHalvesPi
        } else {
            RatioLocation::Quadrant(((theta / (PI / 2.0)).floor() as u8).min(3) + 1)
        }
    }

    pub fn of(z: Complex64, tol: f64) -> Self {
        Self::of_angle(arg_positive(z), tol)
    }
}

impl fmt::Display for RatioLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioLocation::Quadrant(q) => write!(f, "{q}"),
            RatioLocation::AxisHalfPi => f.write_str("pi/2"),
            RatioLocation::AxisThreeHalvesPi => f.write_str("3pi/2"),
        }
    }
}

impl Serialize for RatioLocation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Location of `(i omega - a) / b` from the signs alone.
pub fn quadrant_of_ratio(a: f64, b: f64, omega_sign: OmegaSign) -> Result<RatioLocation> {
    let b_sign = Sign::of(b).ok_or(Error::ZeroCoupling { index: 0 })?;
    let loc = match (Sign::of(a), b_sign) {
        (Some(Sign::Neg), Sign::Pos) => RatioLocation::Quadrant(1),
        (Some(Sign::Pos), Sign::Pos) => RatioLocation::Quadrant(2),
        (Some(Sign::Neg), Sign::Neg) => RatioLocation::Quadrant(3),
        (Some(Sign::Pos), Sign::Neg) => RatioLocation::Quadrant(4),
        (None, Sign::Pos) => RatioLocation::AxisHalfPi,
        (None, Sign::Neg) => RatioLocation::AxisThreeHalvesPi,
    };
    Ok(match omega_sign {
        OmegaSign::Pos => loc,
        OmegaSign::Neg => loc.conjugate(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    /// All `a_j < 0`.
    A,
    /// One `a_j > 0`, the other two negative.
    B,
    /// One `a_j = 0`, the other two negative.
    C,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl Case {
    /// Representative signs of `(a_1, a_2, a_3)` after relabelling; `0.0`
    /// stands for the zero entry in Case C.
    pub fn a_signs(self) -> [f64; 3] {
        match self {
            Case::A => [-1.0, -1.0, -1.0],
            Case::B => [1.0, -1.0, -1.0],
            Case::C => [0.0, -1.0, -1.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseClassification {
    pub case: Case,
    /// Relabelling shift that puts the distinguished node first.
    pub shift: usize,
    pub relabeled: RingParams,
}

pub fn classify_case(params: &RingParams) -> Result<CaseClassification> {
    classify_case_with_tol(params, ZERO_REL_TOL)
}

pub fn classify_case_with_tol(
    params: &RingParams,
    zero_rel_tol: f64,
) -> Result<CaseClassification> {
    let report = hopf::hopf_conditions_3(params, PRODUCT_REL_TOL)?;
    if !report.is_hopf() {
        return Err(Error::Precondition("not a Hopf point".into()));
    }
    let a = params.a();
    let scale = a.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let is_zero = |x: f64| x.abs() < zero_rel_tol * scale;
    let zeros: Vec<usize> = (0..3).filter(|&j| is_zero(a[j])).collect();
    let positives: Vec<usize> = (0..3).filter(|&j| !is_zero(a[j]) && a[j] > 0.0).collect();
    if zeros.len() + positives.len() >= 2 {
        return Err(Error::Precondition(
            "two diagonal entries are non-negative, which forces omega = 0".into(),
        ));
    }
    let (case, shift) = match (zeros.as_slice(), positives.as_slice()) {
        ([], []) => (Case::A, 0),
        ([], [j]) => (Case::B, *j),
        ([j], []) => (Case::C, *j),
        _ => unreachable!(),
    };
    let relabeled = params.cyclic_relabel(shift)?;
    if case != Case::A && !(relabeled.a()[1] < 0.0 && relabeled.a()[2] < 0.0) {
        return Err(Error::Precondition(format!(
            "case {case}: remaining diagonal entries must both be negative"
        )));
    }
    Ok(CaseClassification {
        case,
        shift,
        relabeled,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveClass {
    /// All ratios in quadrant 2, or all in quadrant 3.
    Rotating,
    Standing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseProfile {
    /// The (signed) frequency whose eigenvector was used.
    pub omega: f64,
    pub omega_sign: OmegaSign,
    /// `theta_j` in `[0, 2 pi)`, phase shift from node j to node j + 1.
    pub theta: Vec<f64>,
    /// Location of `(i omega - a_j) / b_j` (sign lemma).
    pub ratio_quadrant: Vec<RatioLocation>,
    /// Location of `theta_j` itself, the conjugate of the ratio's location.
    pub theta_quadrant: Vec<RatioLocation>,
    /// Three-node rings only.
    pub case_label: Option<Case>,
    pub wave_class: WaveClass,
}

/// Phase shifts at the eigenvalue `i omega`. Unless `force` is set, `i omega`
/// must be an eigenvalue (eigenvector closure within tolerance).
pub fn phase_shifts(params: &RingParams, omega: f64, force: bool) -> Result<PhaseProfile> {
    params.ensure_valid()?;
    params.ensure_nonzero_couplings()?;
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::OutOfRange(format!(
            "omega must be nonzero, got {omega}"
        )));
    }
    let iw = Complex64::new(0.0, omega);
    if !force {
        spectra::eigenvector_for(params, iw)?;
    }
    let omega_sign = OmegaSign::of(omega);
    let a = params.a();
    let scale = a.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let mut theta = Vec::with_capacity(params.n());
    let mut ratio_quadrant = Vec::with_capacity(params.n());
    for (j, (&aj, &bj)) in a.iter().zip(params.b()).enumerate() {
        let ratio = (iw - aj) / bj;
        let t = 2.0 * PI - arg_positive(ratio);
        theta.push(if t >= 2.0 * PI { t - 2.0 * PI } else { t });
        let a_snapped = if aj.abs() < ZERO_REL_TOL * scale {
            0.0
        } else {
            aj
        };
        ratio_quadrant.push(
            quadrant_of_ratio(a_snapped, bj, omega_sign)
                .map_err(|_| Error::ZeroCoupling { index: j })?,
        );
    }
    let theta_quadrant = ratio_quadrant.iter().map(|q| q.conjugate()).collect();
    let case_label = if params.n() == 3 {
        classify_case(params).ok().map(|c| c.case)
    } else {
        None
    };
    let mut profile = PhaseProfile {
        omega,
        omega_sign,
        theta,
        ratio_quadrant,
        theta_quadrant,
        case_label,
        wave_class: WaveClass::Standing,
    };
    profile.wave_class = wave_classification(&profile);
    Ok(profile)
}

pub fn wave_classification(profile: &PhaseProfile) -> WaveClass {
    let all = |q: u8| {
        profile
            .ratio_quadrant
            .iter()
            .all(|&r| r == RatioLocation::Quadrant(q))
    };
    if all(2) || all(3) {
        WaveClass::Rotating
    } else {
        WaveClass::Standing
    }
}

/// `theta_1 + ... + theta_n` reduced to `(-pi, pi]`.
pub fn theta_sum_residual(theta: &[f64]) -> f64 {
    let s = theta.iter().sum::<f64>().rem_euclid(2.0 * PI);
    if s > PI {
        s - 2.0 * PI
    } else {
        s
    }
}

/// Coupling sign patterns in table order.
pub const TABLE_ROWS: [[Sign; 3]; 4] = [
    [Sign::Neg, Sign::Neg, Sign::Neg],
    [Sign::Neg, Sign::Pos, Sign::Pos],
    [Sign::Pos, Sign::Neg, Sign::Pos],
    [Sign::Pos, Sign::Pos, Sign::Neg],
];

use RatioLocation::{AxisHalfPi as H, AxisThreeHalvesPi as T, Quadrant as Q};

/// Published quadrant classification, transcribed cell for cell in the
/// order of [`TABLE_ROWS`].
fn reference_table(case: Case, omega_sign: OmegaSign) -> [[RatioLocation; 3]; 4] {
    match (case, omega_sign) {
        (Case::A, OmegaSign::Pos) => [
            [Q(3), Q(3), Q(3)],
            [Q(3), Q(1), Q(1)],
            [Q(1), Q(3), Q(1)],
            [Q(1), Q(1), Q(3)],
        ],
        (Case::B, OmegaSign::Pos) => [
            [Q(4), Q(3), Q(3)],
            [Q(4), Q(1), Q(1)],
            [Q(2), Q(3), Q(1)],
            [Q(2), Q(3), Q(1)],
        ],
        (Case::C, OmegaSign::Pos) => [
            [T, Q(3), Q(3)],
            [T, Q(1), Q(1)],
            [H, Q(3), Q(1)],
            [H, Q(3), Q(1)],
        ],
        (Case::A, OmegaSign::Neg) => [
            [Q(2), Q(2), Q(2)],
            [Q(2), Q(4), Q(4)],
            [Q(4), Q(2), Q(4)],
            [Q(4), Q(4), Q(2)],
        ],
        (Case::B, OmegaSign::Neg) => [
            [Q(1), Q(2), Q(2)],
            [Q(1), Q(4), Q(4)],
            [Q(3), Q(2), Q(4)],
            [Q(3), Q(2), Q(4)],
        ],
        (Case::C, OmegaSign::Neg) => [
            [H, Q(2), Q(2)],
            [H, Q(4), Q(4)],
            [T, Q(2), Q(4)],
            [T, Q(2), Q(4)],
        ],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub table: String,
    pub row: String,
    pub reference: [RatioLocation; 3],
    pub lemma: [RatioLocation; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub case: Case,
    pub omega_sign: OmegaSign,
    pub b_signs: [Sign; 3],
    /// Computed from the sign lemma.
    pub quadrants: [RatioLocation; 3],
    /// Published cell values, for the four rows the tables list.
    pub reference: Option<[RatioLocation; 3]>,
    pub discrepancy: Option<Discrepancy>,
    pub warning: Option<String>,
}

fn pattern_label(signs: &[Sign; 3]) -> String {
    format!("({},{},{})", signs[0], signs[1], signs[2])
}

pub fn table_lookup(case: Case, b_signs: [Sign; 3], omega_sign: OmegaSign) -> TableRow {
    let a = case.a_signs();
    let quadrants = [0, 1, 2].map(|j| {
        quadrant_of_ratio(a[j], b_signs[j].value(), omega_sign).expect("couplings are nonzero")
    });
    let row_index = TABLE_ROWS.iter().position(|r| *r == b_signs);
    let reference = row_index.map(|i| reference_table(case, omega_sign)[i]);
    let discrepancy = reference.filter(|r| *r != quadrants).map(|r| Discrepancy {
        table: format!("Case {case}, {omega_sign}"),
        row: pattern_label(&b_signs),
        reference: r,
        lemma: quadrants,
    });
    let negatives = b_signs.iter().filter(|&&s| s == Sign::Neg).count();
    let warning = (negatives % 2 == 0).then(|| {
        format!(
            "coupling pattern {} has positive product; excluded at a Hopf point from a stable equilibrium",
            pattern_label(&b_signs)
        )
    });
    TableRow {
        case,
        omega_sign,
        b_signs,
        quadrants,
        reference,
        discrepancy,
        warning,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadrantTable {
    pub case: Case,
    pub omega_sign: OmegaSign,
    pub rows: Vec<TableRow>,
}

impl QuadrantTable {
    pub fn title(&self) -> String {
        format!("Case {}, {}", self.case, self.omega_sign)
    }
}

/// The three case tables for one sign of omega, regenerated from the lemma.
pub fn quadrant_tables(omega_sign: OmegaSign) -> Vec<QuadrantTable> {
    [Case::A, Case::B, Case::C]
        .into_iter()
        .map(|case| QuadrantTable {
            case,
            omega_sign,
            rows: TABLE_ROWS
                .iter()
                .map(|&signs| table_lookup(case, signs, omega_sign))
                .collect(),
        })
        .collect()
}
