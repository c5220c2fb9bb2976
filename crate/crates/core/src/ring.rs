//! Ring linearisation data and the admissible ODE families built on it.
//!
//! Node `j` of a unidirectional ring reads its own state and the state of
//! node `j + 1` (indices mod n), so the Jacobian has `a_j` on the diagonal,
//! `b_j` on the superdiagonal and `b_n` in the bottom-left corner.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::JsonDocument;

pub const MIN_NODES: usize = 3;

/// Diagonal and coupling entries of a ring Jacobian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RingDoc", into = "RingDoc")]
pub struct RingParams {
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[doc(hidden)]
pub struct RingDoc {
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TryFrom<RingDoc> for RingParams {
    type Error = Error;

    fn try_from(doc: RingDoc) -> Result<Self> {
        if doc.a.len() != doc.n || doc.b.len() != doc.n {
            return Err(Error::Dimension(format!(
                "n = {} but a has {} entries and b has {}",
                doc.n,
                doc.a.len(),
                doc.b.len()
            )));
        }
        RingParams::new(doc.a, doc.b)
    }
}

impl From<RingParams> for RingDoc {
    fn from(p: RingParams) -> Self {
        RingDoc {
            n: p.a.len(),
            a: p.a,
            b: p.b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    pub enough_nodes: bool,
    /// `(field, index)` of every non-finite entry.
    pub non_finite: Vec<(String, usize)>,
    /// Indices (0-based) of zero couplings.
    pub zero_couplings: Vec<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.enough_nodes && self.non_finite.is_empty()
    }

    pub fn has_warnings(&self) -> bool {
        !self.zero_couplings.is_empty()
    }
}

impl RingParams {
    /// Only the lengths are checked here; see [`RingParams::validate`].
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Dimension(format!(
                "a has {} entries but b has {}",
                a.len(),
                b.len()
            )));
        }
        Ok(RingParams { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn validate(&self) -> ValidationReport {
        let mut non_finite = Vec::new();
        for (field, values) in [("a", &self.a), ("b", &self.b)] {
            for (i, v) in values.iter().enumerate() {
                if !v.is_finite() {
                    non_finite.push((field.to_string(), i));
                }
            }
        }
        ValidationReport {
            n: self.n(),
            enough_nodes: self.n() >= MIN_NODES,
            non_finite,
            zero_couplings: (0..self.n()).filter(|&i| self.b[i] == 0.0).collect(),
        }
    }

    /// Errors unless the ring has at least three nodes and finite entries.
    pub fn ensure_valid(&self) -> Result<()> {
        if self.n() < MIN_NODES {
            return Err(Error::TooFewNodes(self.n()));
        }
        for (field, values) in [("a", &self.a), ("b", &self.b)] {
            if let Some(index) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { field, index });
            }
        }
        Ok(())
    }

    pub fn ensure_nonzero_couplings(&self) -> Result<()> {
        match self.b.iter().position(|&b| b == 0.0) {
            Some(index) => Err(Error::ZeroCoupling { index }),
            None => Ok(()),
        }
    }

    /// Renumber nodes so that new node `j` is old node `j + shift`,
    /// keeping the cyclic order.
    pub fn cyclic_relabel(&self, shift: usize) -> Result<Self> {
        let n = self.n();
        if shift >= n {
            return Err(Error::OutOfRange(format!(
                "shift {shift} must be below n = {n}"
            )));
        }
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        a.rotate_left(shift);
        b.rotate_left(shift);
        Ok(RingParams { a, b })
    }

    /// Rescale time by `delta`: every Jacobian entry (and so every
    /// eigenvalue) is multiplied by `delta`.
    pub fn time_rescale(&self, delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::OutOfRange(format!(
                "time scale must be positive and finite, got {delta}"
            )));
        }
        Ok(RingParams {
            a: self.a.iter().map(|x| x * delta).collect(),
            b: self.b.iter().map(|x| x * delta).collect(),
        })
    }

    /// Shift every diagonal entry by `lambda`, i.e. `J + lambda I`.
    pub fn shifted(&self, lambda: f64) -> Self {
        RingParams {
            a: self.a.iter().map(|x| x + lambda).collect(),
            b: self.b.clone(),
        }
    }

    pub(crate) fn with_b(&self, b: Vec<f64>) -> Self {
        debug_assert_eq!(b.len(), self.n());
        RingParams {
            a: self.a.clone(),
            b,
        }
    }

    /// Signed coupling product `c = (-1)^(n+1) b_1 ... b_n`.
    pub fn coupling_constant(&self) -> f64 {
        let prod: f64 = self.b.iter().product();
        if self.n() % 2 == 1 {
            prod
        } else {
            -prod
        }
    }

    /// Trace of the Jacobian, `a_1 + ... + a_n`.
    pub fn trace(&self) -> f64 {
        self.a.iter().sum()
    }

    /// Dense row-major Jacobian.
    pub fn jacobian(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut m = vec![vec![0.0; n]; n];
        for j in 0..n {
            m[j][j] = self.a[j];
            m[j][(j + 1) % n] = self.b[j];
        }
        m
    }
}

/// How the bifurcation parameter enters the Jacobian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum LambdaAction {
    /// `J + lambda I`.
    #[default]
    DiagonalShift,
    /// `b_index -> b_index * (1 + lambda)`, everything else fixed.
    CouplingScale { index: usize },
}

/// `x_j' = (a_j + lambda) x_j + b_j x_{j+1} + g_j x_j^3` (for the default
/// diagonal-shift action).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilyDoc", into = "FamilyDoc")]
pub struct AdmissibleOdeFamily {
    pub base: RingParams,
    pub cubic: Vec<f64>,
    pub lambda: f64,
    pub action: LambdaAction,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[doc(hidden)]
pub struct FamilyDoc {
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    #[serde(default)]
    cubic: Option<Vec<f64>>,
    #[serde(default)]
    lambda: f64,
    #[serde(default)]
    action: LambdaAction,
}

impl TryFrom<FamilyDoc> for AdmissibleOdeFamily {
    type Error = Error;

    fn try_from(doc: FamilyDoc) -> Result<Self> {
        let base = RingParams::try_from(RingDoc {
            n: doc.n,
            a: doc.a,
            b: doc.b,
        })?;
        let cubic = doc.cubic.unwrap_or_else(|| vec![-1.0; base.n()]);
        let family = AdmissibleOdeFamily {
            base,
            cubic,
            lambda: doc.lambda,
            action: doc.action,
        };
        family.check()?;
        Ok(family)
    }
}

impl From<AdmissibleOdeFamily> for FamilyDoc {
    fn from(f: AdmissibleOdeFamily) -> Self {
        FamilyDoc {
            n: f.base.n(),
            a: f.base.a,
            b: f.base.b,
            cubic: Some(f.cubic),
            lambda: f.lambda,
            action: f.action,
        }
    }
}

impl AdmissibleOdeFamily {
    /// Diagonal-shift family with cubic coefficient `-1` on every node.
    pub fn new(base: RingParams) -> Self {
        let n = base.n();
        AdmissibleOdeFamily {
            base,
            cubic: vec![-1.0; n],
            lambda: 0.0,
            action: LambdaAction::DiagonalShift,
        }
    }

    pub fn with_cubic(mut self, cubic: Vec<f64>) -> Result<Self> {
        self.cubic = cubic;
        self.check()?;
        Ok(self)
    }

    pub fn linear(base: RingParams) -> Self {
        let n = base.n();
        AdmissibleOdeFamily {
            cubic: vec![0.0; n],
            ..Self::new(base)
        }
    }

    pub fn with_action(mut self, action: LambdaAction) -> Result<Self> {
        self.action = action;
        self.check()?;
        Ok(self)
    }

    pub fn at_lambda(&self, lambda: f64) -> Self {
        AdmissibleOdeFamily {
            lambda,
            ..self.clone()
        }
    }

    fn check(&self) -> Result<()> {
        if self.cubic.len() != self.base.n() {
            return Err(Error::Dimension(format!(
                "cubic has {} entries for n = {}",
                self.cubic.len(),
                self.base.n()
            )));
        }
        if let LambdaAction::CouplingScale { index } = self.action {
            if index >= self.base.n() {
                return Err(Error::OutOfRange(format!(
                    "coupling index {index} out of range"
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// Linearisation at the origin for parameter value `lambda`.
    pub fn jacobian_params(&self, lambda: f64) -> RingParams {
        match self.action {
            LambdaAction::DiagonalShift => self.base.shifted(lambda),
            LambdaAction::CouplingScale { index } => {
                let mut b = self.base.b.clone();
                b[index] *= 1.0 + lambda;
                self.base.with_b(b)
            }
        }
    }

    /// Evaluate the vector field at `x` for the family's current `lambda`.
    pub fn vector_field(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n();
        let p = &self.base;
        let (shift, scaled) = match self.action {
            LambdaAction::DiagonalShift => (self.lambda, None),
            LambdaAction::CouplingScale { index } => (0.0, Some(index)),
        };
        for j in 0..n {
            let next = x[(j + 1) % n];
            let mut b = p.b[j];
            if scaled == Some(j) {
                b *= 1.0 + self.lambda;
            }
            out[j] = (p.a[j] + shift) * x[j] + b * next + self.cubic[j] * x[j] * x[j] * x[j];
        }
    }
}

/// Integer adjacency matrix; `rows[i][j]` counts arrows from node `j` to node `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AdjacencyDoc", into = "AdjacencyDoc")]
pub struct AdjacencyMatrix {
    rows: Vec<Vec<u32>>,
}

pub const ADJACENCY_CONVENTION: &str = "rows[i][j] is the number of arrows from node j to node i";

#[derive(Serialize, Deserialize)]
#[doc(hidden)]
pub struct AdjacencyDoc {
    n: usize,
    rows: Vec<Vec<u32>>,
    #[serde(default)]
    convention: Option<String>,
}

impl TryFrom<AdjacencyDoc> for AdjacencyMatrix {
    type Error = Error;

    fn try_from(doc: AdjacencyDoc) -> Result<Self> {
        if doc.rows.len() != doc.n {
            return Err(Error::Dimension(format!(
                "n = {} but {} rows given",
                doc.n,
                doc.rows.len()
            )));
        }
        AdjacencyMatrix::new(doc.rows)
    }
}

impl From<AdjacencyMatrix> for AdjacencyDoc {
    fn from(m: AdjacencyMatrix) -> Self {
        AdjacencyDoc {
            n: m.rows.len(),
            rows: m.rows,
            convention: Some(ADJACENCY_CONVENTION.to_string()),
        }
    }
}

impl AdjacencyMatrix {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row {i} has {} entries, expected {n}",
                rows[i].len()
            )));
        }
        Ok(AdjacencyMatrix { rows })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
            .collect();
        AdjacencyMatrix { rows }
    }
}

macro_rules! json_document {
    ($ty:ty, $raw:ty) => {
        impl JsonDocument for $ty {
            type Raw = $raw;

            fn from_raw(raw: $raw) -> Result<Self> {
                <$ty>::try_from(raw)
            }
        }
    };
}

json_document!(RingParams, RingDoc);
json_document!(AdmissibleOdeFamily, FamilyDoc);
json_document!(AdjacencyMatrix, AdjacencyDoc);
