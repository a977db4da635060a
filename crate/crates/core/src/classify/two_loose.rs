use serde::Serialize;

use crate::matroid::LinearMatroid;

use super::{falsify, precondition, require_loose, require_simple_coloop_free, ClassifyError, Falsification};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TwoLooseVerdict {
    /// `r(M) ≤ 2q`. `spanning_one` records whether a spanning circuit holds
    /// exactly one of the pair, in which case `r(M) ≤ 2q − 1` was checked.
    RankOk {
        spanning_one: bool,
    },
    CocircuitPair,
    Violation(Box<Falsification>),
}

impl TwoLooseVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            TwoLooseVerdict::RankOk { .. } => "RANK_OK",
            TwoLooseVerdict::CocircuitPair => "COCIRCUIT_PAIR",
            TwoLooseVerdict::Violation(_) => "VIOLATION",
        }
    }
}

/// For distinct loose elements `e`, `f` of a simple, coloop-free
/// GF(q)-matroid: either `{e, f}` is a cocircuit or `r(M) ≤ 2q`, and a
/// spanning circuit through exactly one of them forces `r(M) ≤ 2q − 1`.
pub fn two_loose_audit(m: &LinearMatroid, e: &str, f: &str) -> Result<TwoLooseVerdict, ClassifyError> {
    precondition(e != f, || format!("the pair repeats {e}"))?;
    require_simple_coloop_free(m)?;
    let ei = m.index_of(e)?;
    let fi = m.index_of(f)?;
    require_loose(m, ei)?;
    require_loose(m, fi)?;
    Ok(audit_indices(m, ei, fi))
}

pub(crate) fn audit_indices(m: &LinearMatroid, e: usize, f: usize) -> TwoLooseVerdict {
    let r = m.rank();
    let q = m.q() as usize;
    let pair = || vec![m.label(e).to_string(), m.label(f).to_string()];
    // a spanning circuit through exactly one of the pair yields a basis
    // avoiding both, so cocircuit pairs never have one
    if m.is_cocircuit_idx(&[e, f]) {
        return TwoLooseVerdict::CocircuitPair;
    }
    if r > 2 * q {
        return TwoLooseVerdict::Violation(Box::new(falsify(
            m,
            "two loose elements",
            format!("rank {r} exceeds 2q = {} and the pair is not a cocircuit", 2 * q),
            pair(),
        )));
    }
    let spanning_one =
        m.find_circuit_through(e, r + 1, &[f]).is_some() || m.find_circuit_through(f, r + 1, &[e]).is_some();
    if spanning_one && r > 2 * q - 1 {
        return TwoLooseVerdict::Violation(Box::new(falsify(
            m,
            "two loose elements, spanning circuit through one",
            format!("rank {r} exceeds 2q - 1 = {}", 2 * q - 1),
            pair(),
        )));
    }
    TwoLooseVerdict::RankOk { spanning_one }
}
