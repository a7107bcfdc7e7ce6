//! Wedderburn components of A: per-component structure reports, the
//! decomposition of elementary specs along the characters of ⟨s⟩, and the
//! matrix-ring checks on the resulting star algebras.

mod checks;
mod report;
mod star;
mod subalg;

use std::fmt::Display;

use serde::Serialize;

use crate::error::{Error, Result};

pub use checks::{centralizer_check, ll1_matrix_check, CentralizerReport};
pub use report::{
    component_report, decompose, ComponentReport, CyclicPresentation, Decomposition, PaperAsserted, SplittingField,
    PAPER_ASSERTED,
};
pub use star::{
    e_i_family, elementary_decomposition, orbit_analysis, verify_prop_st, BaseComponent, OrbitGroup, PropStReport, StarAlgebra,
    XDescriptor,
};

/// One checked identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub identity: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

impl Check {
    pub fn equal<T: PartialEq + Display>(identity: impl Into<String>, expected: T, actual: T) -> Check {
        Check {
            identity: identity.into(),
            passed: expected == actual,
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    pub fn holds(identity: impl Into<String>, ok: bool) -> Check {
        Check {
            identity: identity.into(),
            expected: "true".into(),
            actual: ok.to_string(),
            passed: ok,
        }
    }
}

/// A list of checks that all passed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationResult {
    pub checks: Vec<Check>,
}

impl VerificationResult {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Err naming the first failing identity.
    pub fn into_result(self) -> Result<Self> {
        match self.checks.iter().find(|c| !c.passed) {
            None => Ok(self),
            Some(c) => Err(failure(c)),
        }
    }
}

pub(crate) fn failure(c: &Check) -> Error {
    Error::InternalConsistency(format!("{}: expected {}, got {}", c.identity, c.expected, c.actual))
}
