//! Verified-identity records shared by every suite.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;

/// One nonzero matrix entry (or scalar residual when `row == col == 0` on a
/// scalar check).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub term: Option<usize>,
    pub row: u64,
    pub col: u64,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Status {
    /// Residual exactly zero and at least one term is nonzero.
    ExactZero,
    /// Every individual term vanishes; no evidential weight.
    VacuousZero,
    /// Floating-point smoke test below threshold. Never counts as exact.
    ApproxZero { max_residual: f64 },
    Nonzero { witness: Witness },
    Error { error: String, message: String },
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::ExactZero => "exact_zero",
            Status::VacuousZero => "vacuous_zero",
            Status::ApproxZero { .. } => "approx_zero",
            Status::Nonzero { .. } => "nonzero",
            Status::Error { .. } => "error",
        }
    }

    pub fn from_error(e: &Error) -> Status {
        Status::Error {
            error: e.kind().to_string(),
            message: e.to_string(),
        }
    }

    /// Passing statuses (do not fail a run).
    pub fn is_pass(&self) -> bool {
        matches!(
            self,
            Status::ExactZero | Status::VacuousZero | Status::ApproxZero { .. }
        )
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, Status::ExactZero)
    }

    /// Statuses are compared without numeric payloads in audits.
    pub fn same_kind(&self, other: &Status) -> bool {
        self.label() == other.label()
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Nonzero { witness } => write!(
                f,
                "nonzero at ({}, {}) = {}",
                witness.row, witness.col, witness.value
            ),
            Status::Error { error, message } => write!(f, "error {error}: {message}"),
            Status::ApproxZero { max_residual } => write!(f, "approx_zero ({max_residual:.3e})"),
            other => write!(f, "{}", other.label()),
        }
    }
}

pub type Params = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub id: String,
    /// The relation being checked, as a formula.
    pub relation: String,
    pub params: Params,
    pub status: Status,
    /// A nonzero entry of one of the terms, when the check is not vacuous.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nontrivial: Option<Witness>,
    /// Per-term nonzero flags, in the order the terms are listed in `relation`.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub term_nonzero: Vec<bool>,
    pub millis: u64,
}

impl IdentityCheck {
    pub fn new(id: impl Into<String>, relation: impl Into<String>) -> Self {
        IdentityCheck {
            id: id.into(),
            relation: relation.into(),
            params: Params::new(),
            status: Status::VacuousZero,
            nontrivial: None,
            term_nonzero: Vec::new(),
            millis: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn passed(&self) -> bool {
        self.status.is_pass()
    }

    /// Canonical sort key: id, then parameters.
    pub fn sort_key(&self) -> (String, String) {
        (
            self.id.clone(),
            serde_json::to_string(&self.params).unwrap_or_default(),
        )
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{} [{}] {}", self.id, params.join(" "), self.status)
    }
}

/// Runs `f`, stamping elapsed milliseconds on the returned check.
pub fn timed<F: FnOnce() -> IdentityCheck>(f: F) -> IdentityCheck {
    let start = Instant::now();
    let mut c = f();
    c.millis = start.elapsed().as_millis() as u64;
    c
}

/// Status of a scalar identity `lhs − rhs`, given whether any term is nonzero.
pub fn scalar_status(residual_zero: bool, any_term_nonzero: bool, residual: String) -> Status {
    if !residual_zero {
        Status::Nonzero {
            witness: Witness {
                term: None,
                row: 0,
                col: 0,
                value: residual,
            },
        }
    } else if any_term_nonzero {
        Status::ExactZero
    } else {
        Status::VacuousZero
    }
}
