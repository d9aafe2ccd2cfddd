//! Top-level verifiers and the two/three-interval case classifiers.
//!
//! `verify_orthogonality` and `verify_completeness` decide whether a
//! periodic candidate spectrum actually is a spectrum for an interval
//! union; `tiles_decision` decides tiling of the integers by the cell set;
//! the two classifiers replay the published case analyses on verified
//! pairs and emit machine-checkable branch reports.

mod branches;
mod spectrum;
mod tiling;
mod verify;

pub use branches::{circle_relation, classify_three_intervals, classify_two_intervals};
pub use spectrum::PeriodicSpectrum;
pub use tiling::{tiles_cells, tiles_decision, TilesOutcome, TilingCertificate, DEFAULT_P_MAX};
pub use verify::{k_cycle, verify_completeness, verify_orthogonality, Completeness};

use serde::Serialize;

use crate::embedding::EmbeddingError;
use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("expected a union of {expected} intervals, got {got}")]
    WrongIntervalCount { expected: usize, got: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("pair is not spectral: {stage} failed")]
    NotSpectral { stage: &'static str },
    #[error("circle relation requires nonzero radii")]
    ZeroRadius,
    #[error("greedy tiling window exceeded the {0}-cell cap")]
    WindowExceeded(u64),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

/// Relation between the two circles `alpha (e^{2 pi i t} - 1)` and
/// `beta (e^{2 pi i s} - 1)` at the given parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CircleRelation {
    Coincident,
    SharedPoint,
    Distinct,
}

/// Which branch of the case analysis fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// The spectrum is presented as the integer lattice (period 1).
    LambdaIsZ,
    /// Two intervals, `phi(0) = phi(lambda_3)`: the period-2 branch.
    #[serde(rename = "Case1")]
    CaseOne,
    /// Two intervals, `beta = 0`: the spectrum collapses to the integers.
    BetaZero,
    /// Two intervals, coincident circles: the spectrum collapses to the
    /// integers.
    CoincidentCircles,
    /// Three intervals, `dim V(dZ)` is 2 or 3: tiling follows from the
    /// known restricted results.
    BckmRoute,
    /// Three intervals forced into the equal-thirds family.
    ThreeEqualIntervals,
    /// Three intervals, `dim V(dZ) = 1` and `dim V(Lambda \ dZ) = 3`: the
    /// case the analysis leaves open; hands off to the Vandermonde system.
    Exceptional,
    /// The embedded spectrum spans fewer dimensions than intervals.
    DegenerateRank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Conclusion {
    TilingCertified,
    Degenerate,
    Exceptional,
    NotSpectral,
}

/// One named exact value backing a branch decision.
#[derive(Debug, Clone, Serialize)]
pub struct Evidence {
    pub name: String,
    pub value: serde_json::Value,
}

impl Evidence {
    pub fn new(name: &str, value: serde_json::Value) -> Self {
        Evidence {
            name: name.to_string(),
            value,
        }
    }
}

/// Outcome of replaying a case analysis on a verified spectral pair. The
/// evidence carries every exact quantity needed to replay the decision.
#[derive(Debug, Clone)]
pub struct BranchReport {
    pub branch: Branch,
    pub evidence: Vec<Evidence>,
    pub conclusion: Conclusion,
    pub certificate: Option<TilingCertificate>,
}

impl BranchReport {
    /// Single JSON object with keys `branch`, `evidence`, `conclusion`;
    /// a tiling certificate is an evidence entry.
    pub fn to_json(&self) -> serde_json::Value {
        let mut evidence: Vec<serde_json::Value> = self
            .evidence
            .iter()
            .map(|e| serde_json::json!({"name": e.name, "value": e.value}))
            .collect();
        if let Some(cert) = &self.certificate {
            evidence.push(serde_json::json!({
                "name": "tilingCertificate",
                "value": cert.to_json(),
            }));
        }
        serde_json::json!({
            "branch": serde_json::to_value(self.branch).unwrap(),
            "evidence": evidence,
            "conclusion": serde_json::to_value(self.conclusion).unwrap(),
        })
    }
}
