use serde::Serialize;

use crate::gfq::Code;
use crate::lanes::{Gf3Lanes, Lanes};
use crate::matroid::LinearMatroid;
use crate::matvec::{ScaleMode, StandardRep};

use super::{falsify, precondition, require_field, require_loose, require_simple_coloop_free, ClassifyError};

/// Column census of the normalized representation around a loose, non-free
/// element `e` of a ternary matroid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnCensus {
    pub r: usize,
    pub size: usize,
    /// Basis in row order; the first row is the one where `e` is zero.
    pub basis: Vec<String>,
    pub top_zero_count: usize,
    /// `type_counts[h]`: columns with top entry 1 and `h` nonzero root entries.
    pub type_counts: [usize; 5],
    /// Columns with top entry 1 and more than four nonzero root entries.
    pub overflow_count: usize,
    /// Most equal nonzero root entries seen in one column with top entry 1.
    pub max_same_sign: usize,
    /// Sharper counts that hold in the type-4 and type-3 cases of the
    /// argument, when exceeded. Reported, not enforced.
    pub case_bound_breaches: Vec<String>,
    pub violations: Vec<String>,
}

impl ColumnCensus {
    pub fn total(&self) -> usize {
        self.top_zero_count + self.type_counts.iter().sum::<usize>() + self.overflow_count
    }
}

/// `⌊max(41r − 101, 35r − 35) / 2⌋`, the size cap for a simple, coloop-free
/// ternary matroid of rank `r ≥ 2` with a loose element.
pub fn ternary_size_bound(r: usize) -> usize {
    let r = r as i64;
    ((41 * r - 101).max(35 * r - 35) / 2).max(0) as usize
}

/// The census for `e`, after checking that `M` is a simple, coloop-free
/// ternary matroid of rank at least 5 in which `e` is loose but not free.
pub fn ternary_census(m: &LinearMatroid, e: &str) -> Result<ColumnCensus, ClassifyError> {
    require_field(m, &[3])?;
    require_simple_coloop_free(m)?;
    precondition(m.rank() >= 5, || format!("rank {} is below 5", m.rank()))?;
    let ei = m.index_of(e)?;
    require_loose(m, ei)?;
    let rep = census_standard_rep(m, e)?;
    let census = census_of_rep(&rep, e);
    if let Some(first) = census.violations.first() {
        return Err(ClassifyError::Falsification(Box::new(falsify(
            m,
            "ternary column census",
            first.clone(),
            vec![e.to_string()],
        ))));
    }
    Ok(census)
}

/// `[I_r | Q]` with `e` zero in row 1 and one in every other row, every other
/// column of `Q` scaled to top entry 1 (or, with top entry 0, to a leading 1).
/// The basis is `C − e` plus the first element (in column order) completing
/// it, where `C` is the smallest circuit through `e` found by the span search;
/// it must have exactly `r` elements.
pub fn census_standard_rep(m: &LinearMatroid, e: &str) -> Result<StandardRep, ClassifyError> {
    let ei = m.index_of(e)?;
    let r = m.rank();
    let Some(c) = m.shortest_circuit_through(ei).filter(|c| c.len() == r) else {
        return Err(ClassifyError::Precondition(format!(
            "{e} lies in no circuit of size {r}"
        )));
    };
    let rest: Vec<usize> = c.into_iter().filter(|&j| j != ei).collect();
    let full = m.greedy_basis(&rest, &[ei]);
    let mut order: Vec<usize> = full.iter().copied().filter(|j| !rest.contains(j)).collect();
    order.extend(&rest);
    let mut rep = m
        .coords()
        .standard_rep(&m.labels_of(&order))?
        .scale_normalize(e, ScaleMode::TopZeroRestOnes)?;
    let f = rep.field();
    let labels: Vec<String> = rep.non_basis().to_vec();
    for l in labels.iter().filter(|l| *l != e) {
        let col = rep.column(l)?;
        let lead = col.iter().copied().find(|&x| x != 0).unwrap_or(1);
        if lead != 1 {
            rep = rep.scale_column(l, f.inv_nz(lead))?;
        }
    }
    Ok(rep)
}

/// Census and checks on a given representation; `e` must be a column of `Q`
/// with top entry zero. Columns are compared up to scaling, so the
/// normalization of the other columns does not matter.
pub fn census_of_rep(rep: &StandardRep, e: &str) -> ColumnCensus {
    let f = rep.field();
    let base = rep.base();
    let r = rep.rank();
    let mut violations = Vec::new();
    let ecol = rep.column(e).map(|c| c.to_vec()).unwrap_or_default();
    if ecol.len() != r || ecol[0] != 0 || ecol[1..].contains(&0) {
        violations.push(format!("{e} is not zero in row 1 and nonzero elsewhere"));
    }
    let einv: Vec<Code> = ecol.iter().map(|&x| if x == 0 { 1 } else { f.inv_nz(x) }).collect();

    let mut census = ColumnCensus {
        r,
        size: base.cols(),
        basis: rep.basis_order().to_vec(),
        top_zero_count: 0,
        type_counts: [0; 5],
        overflow_count: 0,
        max_same_sign: 0,
        case_bound_breaches: Vec::new(),
        violations: Vec::new(),
    };
    // columns rescaled row-wise so that e becomes (0, 1, .., 1), each with
    // its leading nonzero entry 1
    let mut packed: Vec<(String, Gf3Lanes)> = Vec::new();
    let mut top_zero: Vec<(String, Gf3Lanes)> = Vec::new();
    for l in rep.non_basis().iter().filter(|l| *l != e) {
        let mut col: Vec<Code> = base
            .column_by_label(l)
            .expect("label of the base")
            .iter()
            .zip(&einv)
            .map(|(&x, &s)| f.mul(x, s))
            .collect();
        let lead = col.iter().copied().find(|&x| x != 0).unwrap_or(1);
        let s = f.inv_nz(lead);
        col.iter_mut().for_each(|x| *x = f.mul(*x, s));
        let v = Gf3Lanes::pack(f, &col);
        if col[0] == 0 {
            census.top_zero_count += 1;
            if v.ones.count_ones() != 1 || v.twos.count_ones() != 1 {
                violations.push(format!("top-zero column {l} is not one 1 and one -1"));
            }
            for (k, w) in &top_zero {
                let shared = (v.ones | v.twos) & (w.ones | w.twos);
                if shared != 0 {
                    violations.push(format!("top-zero columns {k} and {l} share a row"));
                }
            }
            top_zero.push((l.clone(), v));
        } else {
            let ones = (v.ones >> 1).count_ones() as usize;
            let twos = (v.twos >> 1).count_ones() as usize;
            census.max_same_sign = census.max_same_sign.max(ones).max(twos);
            if ones > 2 || twos > 2 {
                violations.push(format!("column {l} has {} equal root entries", ones.max(twos)));
            }
            match ones + twos {
                h @ 0..=4 => census.type_counts[h] += 1,
                _ => census.overflow_count += 1,
            }
        }
        packed.push((l.clone(), v));
    }

    // sums and differences of two columns: at most 3 equal root entries, or
    // at most 2 equal entries when the top entry cancels
    'pairs: for (a, (la, va)) in packed.iter().enumerate() {
        for (lb, vb) in &packed[a + 1..] {
            for w in [Gf3Lanes::add(*va, *vb), Gf3Lanes::add(*va, vb.neg())] {
                let (ones, twos, cap) = if w.ones & 1 == 0 && w.twos & 1 == 0 {
                    (w.ones.count_ones(), w.twos.count_ones(), 2)
                } else {
                    ((w.ones >> 1).count_ones(), (w.twos >> 1).count_ones(), 3)
                };
                if ones > cap || twos > cap {
                    violations.push(format!("{la} ± {lb} has {} equal entries", ones.max(twos)));
                    break 'pairs;
                }
            }
        }
    }

    if r >= 5 {
        let ri = r as i64;
        let caps = [
            ("top-zero", census.top_zero_count, (ri - 1) / 2),
            ("type 4", census.type_counts[4], 8 * ri - 34),
            ("type 3", census.type_counts[3], 12 * ri - 42),
            ("type 2", census.type_counts[2], 12 * ri - 40),
            ("type 1", census.type_counts[1], 2 * ri - 2),
        ];
        for (what, count, cap) in caps {
            if count as i64 > cap {
                violations.push(format!("{count} {what} columns, cap {cap}"));
            }
        }
        let t = census.type_counts;
        let sharper: &[(&str, usize, i64)] = if t[4] > 0 {
            &[("type 3", t[3], 8 * ri - 16), ("type 2", t[2], 24), ("type 1", t[1], 8)]
        } else if t[3] > 0 {
            &[("type 2", t[2], 7 * ri - 16), ("type 1", t[1], 7)]
        } else {
            &[]
        };
        for &(what, count, cap) in sharper {
            if count as i64 > cap {
                census
                    .case_bound_breaches
                    .push(format!("{count} {what} columns, case cap {cap}"));
            }
        }
    }
    census.violations = violations;
    census
}
