//! Decision procedures that follow the structure of the loose-element
//! arguments: the binary classifier, the ternary column census, the audit
//! for two loose elements, free-element structure and paving extremality.
//!
//! Every procedure first checks its preconditions and then runs checks whose
//! failure would contradict a theorem. Those failures come back as
//! [`ClassifyError::Falsification`] with the offending representation attached
//! in matrix-file form, so they can be replayed.

use serde::Serialize;
use thiserror::Error;

use crate::families::FamilyError;
use crate::io::matrix_text;
use crate::matroid::{LinearMatroid, MatroidError};
use crate::matvec::MatrixError;

mod binary;
mod free;
mod paving;
mod ternary;
mod two_loose;

pub use binary::{
    binary_structure, classify_binary_loose, BinaryFamily, BinaryLooseVerdict, LooseCase, StructureFailure,
};
pub(crate) use free::free_shape;
pub use free::{free_structure_check, FreeStructure};
pub(crate) use paving::paving_checks;
pub use paving::{paving_audit, PavingAudit, PavingBranch};
pub use ternary::{census_of_rep, census_standard_rep, ternary_census, ternary_size_bound, ColumnCensus};
pub(crate) use two_loose::audit_indices;
pub use two_loose::{two_loose_audit, TwoLooseVerdict};

/// A check that a theorem guarantees, failed on a concrete matroid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Falsification {
    pub claim: String,
    pub detail: String,
    /// Labels of the elements the failed check was about.
    pub elements: Vec<String>,
    /// The matroid, as a matrix file.
    pub matrix: String,
}

impl std::fmt::Display for Falsification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "contradicts {}: {}", self.claim, self.detail)?;
        if !self.elements.is_empty() {
            write!(f, " [{}]", self.elements.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{0}")]
    Falsification(Box<Falsification>),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

impl ClassifyError {
    pub fn falsification(&self) -> Option<&Falsification> {
        match self {
            ClassifyError::Falsification(f) => Some(f),
            _ => None,
        }
    }
}

pub(crate) fn falsify(m: &LinearMatroid, claim: &str, detail: String, elements: Vec<String>) -> Falsification {
    Falsification {
        claim: claim.to_string(),
        detail,
        elements,
        matrix: matrix_text(m.rep()),
    }
}

fn precondition(ok: bool, msg: impl FnOnce() -> String) -> Result<(), ClassifyError> {
    if ok {
        Ok(())
    } else {
        Err(ClassifyError::Precondition(msg()))
    }
}

fn require_field(m: &LinearMatroid, allowed: &[u8]) -> Result<(), ClassifyError> {
    precondition(allowed.contains(&m.q()), || {
        format!("field GF({}) not handled here (expected one of {allowed:?})", m.q())
    })
}

fn require_simple_coloop_free(m: &LinearMatroid) -> Result<(), ClassifyError> {
    precondition(m.is_simple(), || "matroid is not simple".into())?;
    precondition(m.coloops().is_empty(), || {
        format!("matroid has coloops {:?}", m.labels_of(m.coloops()))
    })
}

fn require_loose(m: &LinearMatroid, e: usize) -> Result<(), ClassifyError> {
    precondition(m.is_loose(e), || format!("{} is not loose", m.label(e)))
}

#[cfg(test)]
mod tests;
