//! Named matroids and the constructions that produce them.
//!
//! Figure builds use the labels `b1..br` for the identity block, `e` for the
//! designated loose element, and `g1..gk` for the remaining columns, in that
//! column order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gfq::{field, Code, FieldError};
use crate::matroid::{LinearMatroid, MatroidError};
use crate::matvec::{FqMatrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("{family} needs rank at least {min}, got {r}")]
    RankOutOfRange { family: &'static str, r: usize, min: usize },
    #[error("U_{{{m},{n}}} is not representable over GF({q}): needs n <= q+1 = {}", *q as usize + 1)]
    NotRepresentable { m: usize, n: usize, q: u8 },
    #[error("U_{{{m},{n}}} needs m <= n")]
    BadUniform { m: usize, n: usize },
    #[error("`{0}` is a coloop; series substitution is degenerate")]
    Coloop(String),
    #[error("`{0}` is a loop; it cannot serve as a basepoint")]
    LoopBasepoint(String),
    #[error("series class size must be at least 1")]
    EmptyClass,
    #[error("label `{0}` occurs on both sides of the connection")]
    LabelCollision(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("built-in Golay generator failed validation: {0}")]
    Golay(&'static str),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A named matroid together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyTag {
    L(usize),
    J(usize),
    M(usize),
    N(usize),
    /// Parallel connection of `r-1` three-point lines.
    P(usize),
    Fano,
    Ag32,
    Uniform {
        m: usize,
        n: usize,
        q: u8,
    },
    /// `U_{r,r+1}` over GF(q).
    Circuit {
        r: usize,
        q: u8,
    },
    Golay12,
}

impl FamilyTag {
    pub fn rank(&self) -> usize {
        match *self {
            FamilyTag::L(r) | FamilyTag::J(r) | FamilyTag::M(r) | FamilyTag::N(r) | FamilyTag::P(r) => r,
            FamilyTag::Fano => 3,
            FamilyTag::Ag32 => 4,
            FamilyTag::Uniform { m, .. } => m,
            FamilyTag::Circuit { r, .. } => r,
            FamilyTag::Golay12 => 6,
        }
    }

    pub fn q(&self) -> u8 {
        match *self {
            FamilyTag::Uniform { q, .. } | FamilyTag::Circuit { q, .. } => q,
            FamilyTag::Golay12 => 3,
            _ => 2,
        }
    }

    fn check_rank(&self) -> Result<(), FamilyError> {
        let (family, min) = match self {
            FamilyTag::L(_) => ("L_r", 3),
            FamilyTag::J(_) => ("J_r", 4),
            FamilyTag::M(_) => ("M_r", 3),
            FamilyTag::N(_) => ("N_r", 3),
            FamilyTag::P(_) => ("P_r", 2),
            FamilyTag::Circuit { .. } => ("U_{r,r+1}", 1),
            _ => return Ok(()),
        };
        let r = self.rank();
        if r < min {
            return Err(FamilyError::RankOutOfRange { family, r, min });
        }
        Ok(())
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::L(r) => write!(f, "L{r}"),
            FamilyTag::J(r) => write!(f, "J{r}"),
            FamilyTag::M(r) => write!(f, "M{r}"),
            FamilyTag::N(r) => write!(f, "N{r}"),
            FamilyTag::P(r) => write!(f, "P{r}"),
            FamilyTag::Fano => write!(f, "Fano"),
            FamilyTag::Ag32 => write!(f, "AG32"),
            FamilyTag::Uniform { m, n, q } => write!(f, "U{m},{n}@{q}"),
            FamilyTag::Circuit { r, q } => write!(f, "Circuit{r}@{q}"),
            FamilyTag::Golay12 => write!(f, "Golay12"),
        }
    }
}

impl FromStr for FamilyTag {
    type Err = FamilyError;

    /// Accepts `L5`, `J6`, `M4`, `N7`, `P4`, `Fano`, `AG32`, `Golay12`,
    /// `U2,4@3` and `Circuit5@3` (the `@q` suffix defaults to 2).
    fn from_str(s: &str) -> Result<Self, FamilyError> {
        let bad = || FamilyError::UnknownFamily(s.to_string());
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "fano" => return Ok(FamilyTag::Fano),
            "ag32" | "ag(3,2)" => return Ok(FamilyTag::Ag32),
            "golay12" => return Ok(FamilyTag::Golay12),
            _ => {}
        }
        let (body, q) = match lower.split_once('@') {
            Some((b, q)) => (b, q.parse::<u8>().map_err(|_| bad())?),
            None => (lower.as_str(), 2),
        };
        if let Some(rest) = body.strip_prefix("circuit") {
            let r = rest.parse().map_err(|_| bad())?;
            return Ok(FamilyTag::Circuit { r, q });
        }
        if let Some(rest) = body.strip_prefix('u') {
            let (m, n) = rest.split_once(',').ok_or_else(bad)?;
            return Ok(FamilyTag::Uniform {
                m: m.trim().parse().map_err(|_| bad())?,
                n: n.trim().parse().map_err(|_| bad())?,
                q,
            });
        }
        let mut chars = body.chars();
        let head = chars.next().ok_or_else(bad)?;
        let r: usize = chars.as_str().trim_start_matches('_').parse().map_err(|_| bad())?;
        match head {
            'l' => Ok(FamilyTag::L(r)),
            'j' => Ok(FamilyTag::J(r)),
            'm' => Ok(FamilyTag::M(r)),
            'n' => Ok(FamilyTag::N(r)),
            'p' => Ok(FamilyTag::P(r)),
            _ => Err(bad()),
        }
    }
}

fn unit(r: usize, i: usize) -> Vec<Code> {
    let mut v = vec![0; r];
    v[i] = 1;
    v
}

fn ones_at(r: usize, rows: &[usize]) -> Vec<Code> {
    let mut v = vec![0; r];
    for &i in rows {
        v[i] = 1;
    }
    v
}

/// Non-identity columns of the L_r and J_r figures, as the 0-based rows
/// holding a one. Rows past those listed are zero, except in `e`.
const L_FIGURE: [&[usize]; 3] = [&[0, 1], &[0, 2], &[1, 2]];
const J_FIGURE: [&[usize]; 3] = [&[0, 1, 2], &[0, 1, 3], &[0, 2, 3]];

fn figure_matrix(r: usize, e: Vec<Code>, others: Vec<Vec<Code>>) -> Result<LinearMatroid, FamilyError> {
    let f = field(2)?;
    let mut cols: Vec<Vec<Code>> = (0..r).map(|i| unit(r, i)).collect();
    let mut labels: Vec<String> = (1..=r).map(|i| format!("b{i}")).collect();
    cols.push(e);
    labels.push("e".into());
    for (k, c) in others.into_iter().enumerate() {
        cols.push(c);
        labels.push(format!("g{}", k + 1));
    }
    Ok(LinearMatroid::new(FqMatrix::from_columns(f, r, cols, Some(labels))?)?)
}

/// The binary representation drawn for `L_r`, `J_r`, `M_r` or `N_r`.
pub fn build_figure(tag: FamilyTag) -> Result<LinearMatroid, FamilyError> {
    tag.check_rank()?;
    let r = tag.rank();
    let all_ones = vec![1; r];
    let mut top_zero = vec![1; r];
    top_zero[0] = 0;
    match tag {
        FamilyTag::L(_) => figure_matrix(r, all_ones, L_FIGURE.iter().map(|s| ones_at(r, s)).collect()),
        FamilyTag::J(_) => figure_matrix(r, top_zero, J_FIGURE.iter().map(|s| ones_at(r, s)).collect()),
        FamilyTag::M(_) => figure_matrix(r, all_ones, (1..r).map(|i| ones_at(r, &[0, i])).collect()),
        FamilyTag::N(_) => figure_matrix(r, top_zero, (2..r).map(|i| ones_at(r, &[0, 1, i])).collect()),
        FamilyTag::P(_) if r == 2 => Ok(three_point_lines(2)?),
        FamilyTag::P(_) => Ok(build_figure(FamilyTag::M(r))?.delete(&["e"])?),
        _ => build_named(tag),
    }
}

/// Build a family from its defining constructions. Returns the matroid and
/// the label of its designated loose element (if the family has one).
pub fn build_structural(tag: FamilyTag) -> Result<(LinearMatroid, Option<String>), FamilyError> {
    tag.check_rank()?;
    let r = tag.rank();
    match tag {
        FamilyTag::P(_) => Ok((three_point_lines(r)?, None)),
        FamilyTag::M(_) => {
            let p = three_point_lines(r)?;
            // z closes the circuit {z, b, x_1, .., x_{r-1}}
            let mut basis = vec!["b".to_string()];
            basis.extend((1..r).map(|i| format!("x{i}")));
            let z = sum_of(&p, &basis)?;
            let m = LinearMatroid::new(p.rep().with_column(z, "z")?)?;
            Ok((m, Some("z".into())))
        }
        FamilyTag::N(_) => {
            let (m, _) = build_structural(FamilyTag::M(r - 1))?;
            let w = sum_of(&m, &["z", "b"])?;
            let m = LinearMatroid::new(m.rep().with_column(w, "w")?)?;
            Ok((m.dual(), Some(N_DESIGNATED.into())))
        }
        FamilyTag::L(_) => {
            let fano = build_named(FamilyTag::Fano)?;
            let l = series_substitute(&fano, "c7", r - 2)?;
            Ok((l, Some("c7_1".into())))
        }
        FamilyTag::J(_) => {
            let ag = build_named(FamilyTag::Ag32)?;
            let j = series_substitute(&ag, "c8", r - 3)?;
            Ok((j, Some("c8_1".into())))
        }
        _ => Ok((build_named(tag)?, None)),
    }
}

/// In the structural `N_{r+1}` (the dual of `M_r` plus a point `w` on the
/// line through `z` and `b`), the element playing the figure's `e`.
pub const N_DESIGNATED: &str = "b";

fn sum_of<S: AsRef<str>>(m: &LinearMatroid, labels: &[S]) -> Result<Vec<Code>, FamilyError> {
    let f = m.field();
    let rep = m.rep();
    let mut v = vec![0; rep.rows()];
    for l in labels {
        for (x, &c) in v.iter_mut().zip(rep.column_by_label(l.as_ref())?) {
            *x = f.add(*x, c);
        }
    }
    Ok(v)
}

/// `P_r`: lines `{b, x_i, y_i}` glued at `b` by repeated parallel connection.
fn three_point_lines(r: usize) -> Result<LinearMatroid, FamilyError> {
    let f = field(2)?;
    let line = |i: usize| -> Result<LinearMatroid, FamilyError> {
        let labels = vec![format!("x{i}"), "b".to_string(), format!("y{i}")];
        let rep = FqMatrix::from_columns(f, 2, vec![vec![1, 0], vec![0, 1], vec![1, 1]], Some(labels))?;
        Ok(LinearMatroid::new(rep)?)
    };
    let mut p = line(1)?;
    // b must be the last basis row of the left operand
    p = reorder(&p, &["b", "x1", "y1"])?;
    for i in 2..r {
        p = parallel_connection(&p, &line(i)?, "b", "b")?;
    }
    let mut order = vec!["b".to_string()];
    order.extend((1..r).map(|i| format!("x{i}")));
    order.extend((1..r).map(|i| format!("y{i}")));
    reorder(&p, &order)
}

fn reorder<S: AsRef<str>>(m: &LinearMatroid, order: &[S]) -> Result<LinearMatroid, FamilyError> {
    let idx = m.indices_of(order)?;
    Ok(LinearMatroid::new(m.rep().select(&idx))?)
}

/// Replace `x` by a series class of `class_size` elements labelled
/// `{x}_1..{x}_k` (in place of `x`). Computed as parallel extension in the
/// dual followed by dualizing back.
pub fn series_substitute(m: &LinearMatroid, x: &str, class_size: usize) -> Result<LinearMatroid, FamilyError> {
    if class_size == 0 {
        return Err(FamilyError::EmptyClass);
    }
    let j = m.index_of(x)?;
    if m.is_coloop(j) {
        return Err(FamilyError::Coloop(x.to_string()));
    }
    let d = m.dual();
    let rep = d.rep();
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    for k in 0..m.len() {
        if k == j {
            for i in 1..=class_size {
                cols.push(rep.column(k).to_vec());
                labels.push(format!("{x}_{i}"));
            }
        } else {
            cols.push(rep.column(k).to_vec());
            labels.push(rep.label(k).to_string());
        }
    }
    let widened = LinearMatroid::new(FqMatrix::from_columns(m.field(), rep.rows(), cols, Some(labels))?)?;
    Ok(widened.dual())
}

/// Parallel connection of `A` and `B` with basepoints `a` and `b` identified;
/// the basepoint keeps the label `a`.
pub fn parallel_connection(
    a_m: &LinearMatroid,
    b_m: &LinearMatroid,
    a: &str,
    b: &str,
) -> Result<LinearMatroid, FamilyError> {
    if a_m.q() != b_m.q() {
        return Err(MatroidError::FieldMismatch(a_m.q(), b_m.q()).into());
    }
    let ai = a_m.index_of(a)?;
    let bi = b_m.index_of(b)?;
    if a_m.rank_of_indices(&[ai]) == 0 {
        return Err(FamilyError::LoopBasepoint(a.to_string()));
    }
    if b_m.rank_of_indices(&[bi]) == 0 {
        return Err(FamilyError::LoopBasepoint(b.to_string()));
    }
    for l in b_m.labels() {
        if l != b && a_m.labels().contains(l) {
            return Err(FamilyError::LabelCollision(l.clone()));
        }
    }
    let f = a_m.field();
    let ra = a_m.rank();
    let rb = b_m.rank();
    let rows = ra + rb - 1;

    // `a` becomes the last unit vector of A's block, `b` the first of B's
    let mut basis_a = a_m.greedy_basis(&[ai], &[]);
    basis_a.rotate_left(1);
    let std_a = a_m.coords().standard_rep(&a_m.labels_of(&basis_a))?;
    let basis_b = b_m.greedy_basis(&[bi], &[]);
    let std_b = b_m.coords().standard_rep(&b_m.labels_of(&basis_b))?;

    let mut cols = Vec::new();
    let mut labels = Vec::new();
    for l in a_m.labels() {
        let mut c = std_a.column(l)?.to_vec();
        c.resize(rows, 0);
        cols.push(c);
        labels.push(l.clone());
    }
    for l in b_m.labels() {
        if l == b {
            continue;
        }
        let mut c = vec![0; ra - 1];
        c.extend_from_slice(std_b.column(l)?);
        cols.push(c);
        labels.push(l.clone());
    }
    Ok(LinearMatroid::new(FqMatrix::from_columns(
        f,
        rows,
        cols,
        Some(labels),
    )?)?)
}

/// 2-sum: parallel connection followed by deleting the basepoint.
pub fn two_sum(a_m: &LinearMatroid, b_m: &LinearMatroid, a: &str, b: &str) -> Result<LinearMatroid, FamilyError> {
    let p = parallel_connection(a_m, b_m, a, b)?;
    Ok(p.delete(&[a])?)
}

/// Series pair: from `n` of rank `r-1` and a column `v` in its
/// row space, the rank-`r` matroid `[[N, 0, v], [0, 1, 1]]` on `E(N) + {e, f}`
/// in which `{e, f}` is a cocircuit.
pub fn series_pair_extension(
    n: &LinearMatroid,
    v: &[Code],
    e: &str,
    f_label: &str,
) -> Result<LinearMatroid, FamilyError> {
    let rep = n.coords();
    let r = rep.rows() + 1;
    let mut cols: Vec<Vec<Code>> = rep
        .columns()
        .map(|c| {
            let mut c = c.to_vec();
            c.push(0);
            c
        })
        .collect();
    let mut labels = rep.labels().to_vec();
    cols.push(unit(r, r - 1));
    labels.push(e.to_string());
    let mut fv = v.to_vec();
    fv.resize(r - 1, 0);
    fv.push(1);
    cols.push(fv);
    labels.push(f_label.to_string());
    Ok(LinearMatroid::new(FqMatrix::from_columns(
        n.field(),
        r,
        cols,
        Some(labels),
    )?)?)
}

/// Generator of the extended ternary Golay code, `[I_6 | S]`.
const GOLAY_S: [[Code; 6]; 6] = [
    [0, 1, 1, 1, 1, 1],
    [1, 0, 1, 2, 2, 1],
    [1, 1, 0, 1, 2, 2],
    [1, 2, 1, 0, 1, 2],
    [1, 2, 2, 1, 0, 1],
    [1, 1, 2, 2, 1, 0],
];

/// `U_{m,n}` over GF(q) from distinct evaluation points `(1, a, .., a^{m-1})`,
/// plus the point at infinity when `n = q + 1`. `U_{m,m+1}` is `I_m` plus
/// the all-ones column over every field.
pub fn uniform(m: usize, n: usize, q: u8) -> Result<LinearMatroid, FamilyError> {
    let f = field(q as u32)?;
    if m > n {
        return Err(FamilyError::BadUniform { m, n });
    }
    let cols: Vec<Vec<Code>> = if m == n {
        (0..m).map(|i| unit(m, i)).collect()
    } else if m == 1 {
        vec![vec![1]; n]
    } else if m == 0 {
        vec![vec![]; n]
    } else if n == m + 1 {
        let mut cols: Vec<Vec<Code>> = (0..m).map(|i| unit(m, i)).collect();
        cols.push(vec![1; m]);
        cols
    } else {
        if n > q as usize + 1 {
            return Err(FamilyError::NotRepresentable { m, n, q });
        }
        let mut cols: Vec<Vec<Code>> = f
            .elements()
            .take(n.min(q as usize))
            .map(|a| (0..m).map(|k| f.pow(a, k as u32)).collect())
            .collect();
        if n == q as usize + 1 {
            cols.push(unit(m, m - 1));
        }
        cols
    };
    Ok(LinearMatroid::new(FqMatrix::from_columns(f, m, cols, None)?)?)
}

pub fn build_named(tag: FamilyTag) -> Result<LinearMatroid, FamilyError> {
    tag.check_rank()?;
    match tag {
        FamilyTag::Fano => {
            let f = field(2)?;
            let cols = (1u8..8).map(|x| vec![x & 1, (x >> 1) & 1, (x >> 2) & 1]).collect();
            Ok(LinearMatroid::new(FqMatrix::from_columns(f, 3, cols, None)?)?)
        }
        FamilyTag::Ag32 => {
            let f = field(2)?;
            let cols = (0u8..8).map(|x| vec![1, x & 1, (x >> 1) & 1, (x >> 2) & 1]).collect();
            Ok(LinearMatroid::new(FqMatrix::from_columns(f, 4, cols, None)?)?)
        }
        FamilyTag::Uniform { m, n, q } => uniform(m, n, q),
        FamilyTag::Circuit { r, q } => {
            let f = field(q as u32)?;
            let mut cols: Vec<Vec<Code>> = (0..r).map(|i| unit(r, i)).collect();
            cols.push(vec![1; r]);
            let mut labels: Vec<String> = (1..=r).map(|i| format!("b{i}")).collect();
            labels.push("e".into());
            Ok(LinearMatroid::new(FqMatrix::from_columns(f, r, cols, Some(labels))?)?)
        }
        FamilyTag::Golay12 => golay12(),
        _ => build_figure(tag),
    }
}

fn golay12() -> Result<LinearMatroid, FamilyError> {
    let f = field(3)?;
    let rows: Vec<Vec<Code>> = (0..6)
        .map(|i| {
            let mut row = unit(6, i);
            row.extend_from_slice(&GOLAY_S[i]);
            row
        })
        .collect();
    // self-orthogonal
    for a in &rows {
        for b in &rows {
            let dot = a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
            if dot != 0 {
                return Err(FamilyError::Golay("generator is not self-orthogonal"));
            }
        }
    }
    // minimum weight over all 728 nonzero codewords
    let mut min_weight = usize::MAX;
    for msg in 1..729usize {
        let mut word = [0; 12];
        let mut m = msg;
        for row in &rows {
            let c = (m % 3) as Code;
            m /= 3;
            for (w, &x) in word.iter_mut().zip(row) {
                *w = f.add(*w, f.mul(c, x));
            }
        }
        min_weight = min_weight.min(word.iter().filter(|&&x| x != 0).count());
    }
    if min_weight != 6 {
        return Err(FamilyError::Golay("minimum weight is not 6"));
    }
    let entries: Vec<Code> = rows.concat();
    Ok(LinearMatroid::new(FqMatrix::new(f, 6, 12, &entries, None)?)?)
}

#[cfg(test)]
mod tests;
