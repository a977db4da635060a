use std::collections::HashMap;

use serde::Serialize;

use crate::families::{build_figure, FamilyTag};
use crate::gfq::Code;
use crate::matroid::{embed_binary, IsoMap, LinearMatroid};
use crate::matvec::{invert, mat_vec};

use super::{falsify, precondition, require_field, require_loose, require_simple_coloop_free, ClassifyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LooseCase {
    /// Some spanning circuit contains `e`.
    SpanningCase,
    NonspanningCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BinaryFamily {
    Lr,
    Jr,
    #[serde(rename = "Mr_restriction")]
    MrRestriction,
    #[serde(rename = "Nr_restriction")]
    NrRestriction,
}

impl BinaryFamily {
    pub fn tag(self, r: usize) -> FamilyTag {
        match self {
            BinaryFamily::Lr => FamilyTag::L(r),
            BinaryFamily::Jr => FamilyTag::J(r),
            BinaryFamily::MrRestriction => FamilyTag::M(r),
            BinaryFamily::NrRestriction => FamilyTag::N(r),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BinaryFamily::Lr => "Lr",
            BinaryFamily::Jr => "Jr",
            BinaryFamily::MrRestriction => "Mr_restriction",
            BinaryFamily::NrRestriction => "Nr_restriction",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinaryLooseVerdict {
    pub case: LooseCase,
    pub family: BinaryFamily,
    pub rank: usize,
    /// The basis of `M` that was used, listed by figure row.
    pub basis: Vec<String>,
    /// `witness[i]` is the element of the figure that element `i` maps to;
    /// `e` goes to the figure's `e`.
    pub witness: IsoMap,
    pub witness_labels: Vec<(String, String)>,
}

/// A structural check that did not go through.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureFailure {
    pub check: &'static str,
    pub detail: String,
    pub elements: Vec<String>,
}

/// Loose-element classification of a simple, coloop-free binary matroid of
/// rank at least 3: the verdict names the figure `M` is isomorphic to, or the
/// figure it restricts from, with `e` sent to the figure's `e`.
pub fn classify_binary_loose(m: &LinearMatroid, e: &str) -> Result<BinaryLooseVerdict, ClassifyError> {
    require_field(m, &[2])?;
    require_simple_coloop_free(m)?;
    precondition(m.rank() >= 3, || format!("rank {} is below 3", m.rank()))?;
    let ei = m.index_of(e)?;
    require_loose(m, ei)?;
    binary_structure(m, ei).map_err(|s| {
        ClassifyError::Falsification(Box::new(falsify(
            m,
            "binary loose classification",
            s.detail,
            s.elements,
        )))
    })
}

/// The structural checks alone, without the looseness precondition. On a
/// simple, coloop-free binary matroid of rank at least 3 this succeeds
/// exactly when `e` is loose.
pub fn binary_structure(m: &LinearMatroid, e: usize) -> Result<BinaryLooseVerdict, StructureFailure> {
    let r = m.rank();
    let n = m.len();
    let label = |j: usize| m.label(j).to_string();
    let fail = |check: &'static str, detail: String, elements: Vec<String>| StructureFailure {
        check,
        detail,
        elements,
    };

    let (case, basis) = match m.find_circuit_through(e, r + 1, &[]) {
        Some(c) => (
            LooseCase::SpanningCase,
            c.into_iter().filter(|&j| j != e).collect::<Vec<_>>(),
        ),
        None => (LooseCase::NonspanningCase, m.greedy_basis(&[], &[e])),
    };
    if basis.len() != r {
        return Err(fail("basis", "no basis avoids e".into(), vec![label(e)]));
    }
    let coords = coordinates(m, &basis);
    let ecol = &coords[e];
    let zeros: Vec<usize> = (0..r).filter(|&i| ecol[i] == 0).collect();

    // (support pair, element) for every element outside the basis and e;
    // in the non-spanning case the pair excludes the zero row of e
    let mut pairs: Vec<([usize; 2], usize)> = Vec::new();
    let others = (0..n).filter(|j| *j != e && !basis.contains(j));
    let top = match case {
        LooseCase::SpanningCase => {
            if !zeros.is_empty() {
                return Err(fail(
                    "e column",
                    format!("{} zero entries on a spanning circuit", zeros.len()),
                    vec![label(e)],
                ));
            }
            for j in others {
                let supp: Vec<usize> = (0..r).filter(|&i| coords[j][i] != 0).collect();
                if supp.len() != 2 {
                    return Err(fail(
                        "column weight",
                        format!("weight {}, expected 2", supp.len()),
                        vec![label(j)],
                    ));
                }
                pairs.push(([supp[0], supp[1]], j));
            }
            None
        }
        LooseCase::NonspanningCase => {
            if zeros.len() != 1 {
                return Err(fail(
                    "e column",
                    format!("{} zero entries, expected exactly one", zeros.len()),
                    vec![label(e)],
                ));
            }
            let z = zeros[0];
            for j in others {
                let col = &coords[j];
                let supp: Vec<usize> = (0..r).filter(|&i| i != z && col[i] != 0).collect();
                if col[z] == 0 || supp.len() != 2 {
                    return Err(fail(
                        "column weight",
                        format!("top entry {}, {} root entries, expected 1 and 2", col[z], supp.len()),
                        vec![label(j)],
                    ));
                }
                pairs.push(([supp[0], supp[1]], j));
            }
            Some(z)
        }
    };
    for (a, &(pa, ja)) in pairs.iter().enumerate() {
        for &(pb, jb) in &pairs[a + 1..] {
            let common = pa.iter().filter(|x| pb.contains(x)).count();
            if common != 1 {
                return Err(fail(
                    "support intersection",
                    format!("supports meet in {common} rows, expected 1"),
                    vec![label(ja), label(jb)],
                ));
            }
        }
    }

    let mut union: Vec<usize> = pairs.iter().flat_map(|(p, _)| p.iter().copied()).collect();
    union.sort_unstable();
    union.dedup();
    let triangle = pairs.len() == 3 && union.len() == 3;
    // rows of the figure, in the order they are assigned
    let mut lead: Vec<usize> = top.into_iter().collect();
    if triangle {
        lead.extend(&union);
    } else {
        let center = match pairs.as_slice() {
            [] => (0..r).find(|i| Some(*i) != top).expect("rank at least 2"),
            [(p, _)] => p[0],
            [(p, _), (q, _), ..] => *p.iter().find(|x| q.contains(x)).expect("pairs meet"),
        };
        lead.push(center);
    }
    let mut pi = vec![usize::MAX; r];
    for (next, i) in lead.iter().copied().chain((0..r).filter(|i| !lead.contains(i))).enumerate() {
        pi[i] = next;
    }
    let family = match (case, triangle) {
        (LooseCase::SpanningCase, true) => BinaryFamily::Lr,
        (LooseCase::SpanningCase, false) => BinaryFamily::MrRestriction,
        (LooseCase::NonspanningCase, true) => BinaryFamily::Jr,
        (LooseCase::NonspanningCase, false) => BinaryFamily::NrRestriction,
    };
    let figure = build_figure(family.tag(r)).map_err(|err| fail("figure", err.to_string(), vec![]))?;
    let lookup: HashMap<&[Code], usize> = figure.rep().columns().enumerate().map(|(j, c)| (c, j)).collect();

    let mut witness = vec![usize::MAX; n];
    let mut used = vec![false; figure.len()];
    for j in 0..n {
        let mut v = vec![0; r];
        for (i, &x) in coords[j].iter().enumerate() {
            v[pi[i]] = x;
        }
        let Some(&t) = lookup.get(v.as_slice()) else {
            return Err(fail(
                "figure columns",
                format!("column {v:?} is not in the figure"),
                vec![label(j)],
            ));
        };
        if std::mem::replace(&mut used[t], true) {
            return Err(fail(
                "figure columns",
                "two elements share a figure column".into(),
                vec![label(j)],
            ));
        }
        witness[j] = t;
    }
    if witness[e] != r {
        return Err(fail(
            "figure columns",
            "e does not land on the figure's e".into(),
            vec![label(e)],
        ));
    }
    if embed_binary(m, e, &figure, r).is_none() {
        return Err(fail(
            "embedding oracle",
            format!("no anchored embedding into {}", family.tag(r)),
            vec![label(e)],
        ));
    }

    let mut rows = vec![String::new(); r];
    for (k, &b) in basis.iter().enumerate() {
        rows[pi[k]] = label(b);
    }
    let witness_labels = (0..n)
        .map(|j| (label(j), figure.label(witness[j]).to_string()))
        .collect();
    Ok(BinaryLooseVerdict {
        case,
        family,
        rank: r,
        basis: rows,
        witness,
        witness_labels,
    })
}

/// Coordinates of every element with respect to `basis` (entry `k` belongs
/// to `basis[k]`).
fn coordinates(m: &LinearMatroid, basis: &[usize]) -> Vec<Vec<Code>> {
    let f = m.field();
    let c = m.coords();
    let r = basis.len();
    let bmat: Vec<Vec<Code>> = (0..r).map(|i| basis.iter().map(|&b| c.get(i, b)).collect()).collect();
    let inv = invert(f, &bmat).expect("basis columns are independent");
    (0..m.len()).map(|j| mat_vec(f, &inv, c.column(j))).collect()
}
