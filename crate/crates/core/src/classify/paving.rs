use serde::Serialize;

use crate::matroid::LinearMatroid;

use super::{falsify, precondition, require_simple_coloop_free, ClassifyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PavingBranch {
    Circuit,
    RankLeQ,
    SparsePaving,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PavingAudit {
    pub branch: PavingBranch,
    pub q: u8,
    pub rank: usize,
    pub size: usize,
    pub sparse_paving: bool,
    pub spanning_circuit: bool,
}

/// For a simple, coloop-free paving GF(q)-matroid that is not a circuit:
/// `r ≤ 2q`, no spanning circuit when `r = 2q`, sparse paving once `r > q`,
/// and then at most `4q` elements.
pub fn paving_audit(m: &LinearMatroid) -> Result<PavingAudit, ClassifyError> {
    require_simple_coloop_free(m)?;
    precondition(m.is_paving(), || "matroid is not paving".into())?;
    paving_checks(m)
}

/// The implications alone, on any matroid.
pub(crate) fn paving_checks(m: &LinearMatroid) -> Result<PavingAudit, ClassifyError> {
    let q = m.q() as usize;
    let r = m.rank();
    let n = m.len();
    let circuit = n == r + 1;
    let sparse_paving = m.is_sparse_paving();
    let spanning_circuit = m.has_spanning_circuit();
    let branch = if circuit {
        PavingBranch::Circuit
    } else if r <= q {
        PavingBranch::RankLeQ
    } else {
        PavingBranch::SparsePaving
    };
    let broken = |claim: &str, detail: String| {
        Err(ClassifyError::Falsification(Box::new(falsify(
            m,
            claim,
            detail,
            Vec::new(),
        ))))
    };
    if r > q && !sparse_paving {
        return broken("paving rank bound", format!("rank {r} > q = {q} but not sparse paving"));
    }
    if !circuit {
        if r > 2 * q {
            return broken("paving rank bound", format!("rank {r} exceeds 2q = {}", 2 * q));
        }
        if r == 2 * q && spanning_circuit {
            return broken("paving rank bound", format!("rank 2q = {r} with a spanning circuit"));
        }
        if r > q && n > 4 * q {
            return broken("paving size bound", format!("{n} elements exceed 4q = {}", 4 * q));
        }
    }
    Ok(PavingAudit {
        branch,
        q: m.q(),
        rank: r,
        size: n,
        sparse_paving,
        spanning_circuit,
    })
}
