use serde::Serialize;

use crate::matroid::{LinearMatroid, MatroidError};

use super::{falsify, precondition, require_field, require_simple_coloop_free, ClassifyError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FreeStructure {
    BinaryCircuit,
    U24,
    /// A circuit through `e` with a copy of `U_{2,4}` 2-summed across each
    /// element of `d`. `circuit` is that circuit after peeling, where each
    /// element of `d` stands in for its triangle.
    TwoSumTree {
        d: Vec<String>,
        circuit: Vec<String>,
    },
    NotFree,
}

/// Shape of a simple, coloop-free binary or ternary matroid around a free
/// element `e`: a circuit over GF(2); over GF(3) either `U_{2,4}` or a
/// circuit with copies of `U_{2,4}` 2-summed onto some of its other elements.
pub fn free_structure_check(m: &LinearMatroid, e: &str) -> Result<FreeStructure, ClassifyError> {
    require_field(m, &[2, 3])?;
    require_simple_coloop_free(m)?;
    precondition(m.rank() >= 2, || format!("rank {} is below 2", m.rank()))?;
    let ei = m.index_of(e)?;
    if !m.is_free(ei) {
        return Ok(FreeStructure::NotFree);
    }
    free_shape(m, e)
}

/// The shape recognizer alone, without checking that `e` is free.
pub(crate) fn free_shape(m: &LinearMatroid, e: &str) -> Result<FreeStructure, ClassifyError> {
    let shape_error = |detail: String| {
        ClassifyError::Falsification(Box::new(falsify(
            m,
            "free element structure",
            detail,
            vec![e.to_string()],
        )))
    };
    if m.q() == 2 {
        return if is_circuit(m) {
            Ok(FreeStructure::BinaryCircuit)
        } else {
            Err(shape_error(format!(
                "{} elements at rank {} do not form a circuit",
                m.len(),
                m.rank()
            )))
        };
    }
    if m.rank() == 2 && m.len() == 4 {
        return Ok(FreeStructure::U24);
    }

    let mut cur = m.clone();
    let mut d: Vec<String> = Vec::new();
    while !is_circuit(&cur) {
        let e_cur = cur.index_of(e)?;
        let r = cur.rank();
        let triangles = cur.circuits(Some(3))?;
        let peel = triangles.into_iter().find(|t| {
            t.len() == 3 && !t.contains(&e_cur) && t.iter().all(|&j| !d.iter().any(|s| s == cur.label(j))) && {
                // a 2-separation whose basepoint is parallel to none of t
                let rest: Vec<usize> = (0..cur.len()).filter(|j| !t.contains(j)).collect();
                cur.rank_of_indices(&rest) == r - 1
                    && t.iter().all(|&x| {
                        let mut with = rest.clone();
                        with.push(x);
                        cur.rank_of_indices(&with) == r
                    })
            }
        });
        let Some(t) = peel else {
            return Err(shape_error(format!(
                "after peeling {} triangles, {} elements at rank {r} are neither a circuit nor peelable",
                d.len(),
                cur.len()
            )));
        };
        let [x, y, z] = [t[0], t[1], t[2]].map(|j| cur.label(j).to_string());
        cur = contract(&cur, &x)?.delete(&[y])?;
        d.push(z);
    }
    let circuit = cur.labels().to_vec();
    d.sort_by_key(|l| circuit.iter().position(|c| c == l));
    Ok(FreeStructure::TwoSumTree { d, circuit })
}

fn is_circuit(m: &LinearMatroid) -> bool {
    m.len() == m.rank() + 1 && m.is_circuit_idx(&(0..m.len()).collect::<Vec<_>>())
}

fn contract(m: &LinearMatroid, x: &str) -> Result<LinearMatroid, MatroidError> {
    Ok(m.dual().delete(&[x])?.dual())
}
