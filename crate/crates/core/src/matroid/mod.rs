//! Matroid oracles on a represented matroid.

mod iso;
pub mod search;

use std::collections::HashSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gfq::{Code, FieldSpec};
use crate::lanes::{with_lanes, Echelon, Lanes, MAX_LANES};
use crate::matvec::{FqMatrix, MatrixError};

pub(crate) use iso::embed_binary;
pub use iso::{embeds_into, iso_check, IsoMap};
pub use search::SpanTable;

/// Largest ground set accepted by [`LinearMatroid::circuits`].
pub const CIRCUIT_LIMIT: usize = 24;
/// Largest ground set accepted by an unanchored [`iso_check`].
pub const ISO_LIMIT: usize = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("rank {0} exceeds the supported maximum of 64")]
    RankTooLarge(usize),
    #[error("{op} refuses a ground set of {n} elements (limit {limit})")]
    TooLarge { op: &'static str, n: usize, limit: usize },
    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u8, u8),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("{op} requires a binary matroid")]
    NotBinary { op: &'static str },
    #[error("sparse-paving routes disagree: dual route {dual}, hyperplane route {hyperplane}")]
    SparsePavingMismatch { dual: bool, hyperplane: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementStatus {
    pub element: String,
    pub is_coloop: bool,
    pub girth_through: Option<usize>,
    pub is_loose: bool,
    pub is_free: bool,
}

/// The column matroid of an [`FqMatrix`].
#[derive(Debug, Clone)]
pub struct LinearMatroid {
    rep: FqMatrix,
    // row-reduced copy with exactly `rank` rows; all searches run on it
    coords: FqMatrix,
    simple: bool,
    coloops: Vec<usize>,
    girth: Vec<OnceLock<Option<usize>>>,
}

impl PartialEq for LinearMatroid {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep
    }
}

impl LinearMatroid {
    pub fn new(rep: FqMatrix) -> Result<Self, MatroidError> {
        let coords = rep.row_space_basis();
        let rank = coords.rows();
        if rank > MAX_LANES {
            return Err(MatroidError::RankTooLarge(rank));
        }
        let f = rep.field();
        let n = rep.cols();
        let simple = {
            let mut seen = HashSet::new();
            coords.columns().all(|c| {
                let lead = c.iter().find(|&&x| x != 0).copied();
                match lead {
                    None => false,
                    Some(l) => {
                        let inv = f.inv_nz(l);
                        seen.insert(c.iter().map(|&x| f.mul(x, inv)).collect::<Vec<Code>>())
                    }
                }
            })
        };
        let coloops = (0..n)
            .filter(|&j| {
                let others: Vec<usize> = (0..n).filter(|&k| k != j).collect();
                coords.rank_of_indices(&others) < rank
            })
            .collect();
        Ok(LinearMatroid {
            rep,
            coords,
            simple,
            coloops,
            girth: (0..n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn rep(&self) -> &FqMatrix {
        &self.rep
    }

    /// Row-reduced representation with exactly `rank` rows.
    pub fn coords(&self) -> &FqMatrix {
        &self.coords
    }

    pub fn field(&self) -> &'static FieldSpec {
        self.rep.field()
    }

    pub fn q(&self) -> u8 {
        self.field().q()
    }

    pub fn rank(&self) -> usize {
        self.coords.rows()
    }

    pub fn len(&self) -> usize {
        self.rep.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn labels(&self) -> &[String] {
        self.rep.labels()
    }

    pub fn label(&self, j: usize) -> &str {
        self.rep.label(j)
    }

    pub fn index_of(&self, label: &str) -> Result<usize, MatroidError> {
        Ok(self.rep.index_of(label)?)
    }

    pub fn indices_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>, MatroidError> {
        Ok(self.rep.indices_of(labels)?)
    }

    pub fn labels_of(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&j| self.label(j).to_string()).collect()
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    pub fn coloops(&self) -> &[usize] {
        &self.coloops
    }

    pub fn is_coloop(&self, j: usize) -> bool {
        self.coloops.contains(&j)
    }

    pub fn rank_of_indices(&self, idx: &[usize]) -> usize {
        self.coords.rank_of_indices(idx)
    }

    pub fn rank_of<S: AsRef<str>>(&self, subset: &[S]) -> Result<usize, MatroidError> {
        Ok(self.coords.rank_of(subset)?)
    }

    pub(crate) fn packed<L: Lanes>(&self) -> Vec<L> {
        let f = self.field();
        self.coords.columns().map(|c| L::pack(f, c)).collect()
    }

    /// Lexicographically first basis (greedy in column order), optionally
    /// starting from the given independent elements.
    pub fn greedy_basis(&self, start: &[usize], avoid: &[usize]) -> Vec<usize> {
        let f = self.field();
        with_lanes!(f, L => {
            let cols = self.packed::<L>();
            let mut ech = Echelon::<L>::new();
            let mut basis = Vec::new();
            for &j in start.iter().chain((0..self.len()).filter(|j| !start.contains(j) && !avoid.contains(j)).collect::<Vec<_>>().iter()) {
                if ech.insert(f, cols[j]) {
                    basis.push(j);
                }
            }
            basis
        })
    }

    /// All circuits with at most `max_size` elements (default `r + 1`).
    pub fn circuits(&self, max_size: Option<usize>) -> Result<Vec<Vec<usize>>, MatroidError> {
        if self.len() > CIRCUIT_LIMIT {
            return Err(MatroidError::TooLarge {
                op: "circuit enumeration",
                n: self.len(),
                limit: CIRCUIT_LIMIT,
            });
        }
        let f = self.field();
        let max = max_size.unwrap_or(self.rank() + 1);
        Ok(with_lanes!(f, L => search::circuits(f, &self.packed::<L>(), max)))
    }

    pub fn circuit_labels(&self, max_size: Option<usize>) -> Result<Vec<Vec<String>>, MatroidError> {
        Ok(self.circuits(max_size)?.iter().map(|c| self.labels_of(c)).collect())
    }

    /// Size of a smallest circuit through element `e`, or `None` for a coloop.
    pub fn girth_through_idx(&self, e: usize) -> Option<usize> {
        *self.girth[e].get_or_init(|| self.compute_girth_through(e, self.rank()))
    }

    pub fn girth_through(&self, e: &str) -> Result<Option<usize>, MatroidError> {
        Ok(self.girth_through_idx(self.index_of(e)?))
    }

    fn compute_girth_through(&self, e: usize, limit: usize) -> Option<usize> {
        if self.is_coloop(e) {
            return None;
        }
        let f = self.field();
        let r = self.rank();
        with_lanes!(f, L => {
            let cols = self.packed::<L>();
            let gens: Vec<L> = cols.iter().enumerate().filter(|&(j, _)| j != e).map(|(_, c)| *c).collect();
            search::span_distance(f, r, &gens, cols[e], limit).map(|s| s + 1)
        })
    }

    /// Girth through `e` computed by the subset search alone; the table route
    /// is tested against it.
    pub fn girth_through_dfs(&self, e: usize) -> Option<usize> {
        if self.is_coloop(e) {
            return None;
        }
        let f = self.field();
        with_lanes!(f, L => {
            let cols = self.packed::<L>();
            let gens: Vec<L> = cols.iter().enumerate().filter(|&(j, _)| j != e).map(|(_, c)| *c).collect();
            search::dfs_distance(f, &gens, cols[e], self.rank()).map(|s| s + 1)
        })
    }

    /// Whether some circuit through `e` has at most `max_size` elements.
    pub fn has_circuit_through_at_most(&self, e: usize, max_size: usize) -> bool {
        if let Some(g) = self.girth[e].get() {
            return g.is_some_and(|g| g <= max_size);
        }
        max_size >= 1 && self.compute_girth_through(e, max_size - 1).is_some()
    }

    /// A smallest circuit through `e`, or `None` for a coloop.
    pub fn shortest_circuit_through(&self, e: usize) -> Option<Vec<usize>> {
        if self.is_coloop(e) {
            return None;
        }
        let f = self.field();
        let r = self.rank();
        if search::table_size(f.q(), r).is_some() {
            let others: Vec<usize> = (0..self.len()).filter(|&j| j != e).collect();
            let found = with_lanes!(f, L => {
                let cols = self.packed::<L>();
                let gens: Vec<L> = others.iter().map(|&j| cols[j]).collect();
                search::bfs_witness(f, r, &gens, cols[e], r)
            })?;
            let mut c: Vec<usize> = found.into_iter().map(|k| others[k]).collect();
            c.push(e);
            c.sort_unstable();
            return Some(c);
        }
        (1..=r + 1).find_map(|size| self.find_circuit_through(e, size, &[]))
    }

    /// A circuit with exactly `size` elements containing `e` and avoiding
    /// `exclude`.
    pub fn find_circuit_through(&self, e: usize, size: usize, exclude: &[usize]) -> Option<Vec<usize>> {
        let f = self.field();
        with_lanes!(f, L => search::circuit_through(f, &self.packed::<L>(), e, size, exclude))
    }

    pub fn element_status_idx(&self, e: usize) -> ElementStatus {
        let r = self.rank();
        let g = self.girth_through_idx(e);
        ElementStatus {
            element: self.label(e).to_string(),
            is_coloop: g.is_none(),
            girth_through: g,
            is_loose: g.is_none_or(|g| g >= r),
            is_free: g.is_none_or(|g| g == r + 1),
        }
    }

    pub fn element_status(&self, e: &str) -> Result<ElementStatus, MatroidError> {
        Ok(self.element_status_idx(self.index_of(e)?))
    }

    pub fn is_loose(&self, e: usize) -> bool {
        let r = self.rank();
        r <= 1 || !self.has_circuit_through_at_most(e, r - 1)
    }

    pub fn is_free(&self, e: usize) -> bool {
        !self.has_circuit_through_at_most(e, self.rank())
    }

    /// Dual matroid on the same labels, from `[I | Q]` as `[-Q^T | I]`.
    pub fn dual(&self) -> LinearMatroid {
        let f = self.field();
        let n = self.len();
        let r = self.rank();
        let basis = self.greedy_basis(&[], &[]);
        let std = self
            .coords
            .standard_rep(&self.labels_of(&basis))
            .expect("greedy basis is a basis");
        let base = std.base();
        let d = n - r;
        let mut columns = vec![Vec::new(); n];
        // base column k < r is basis element basis[k]; k >= r is non-basis
        let nonbasis: Vec<usize> = (0..n).filter(|j| !basis.contains(j)).collect();
        for (i, &b) in basis.iter().enumerate() {
            columns[b] = (0..d).map(|k| f.neg(base.get(i, r + k))).collect();
        }
        for (k, &x) in nonbasis.iter().enumerate() {
            columns[x] = (0..d).map(|i| (i == k) as Code).collect();
        }
        let rep = FqMatrix::from_columns(f, d, columns, Some(self.labels().to_vec())).expect("labels unchanged");
        LinearMatroid::new(rep).expect("dual rank bounded by ground set")
    }

    pub fn cocircuits(&self) -> Result<Vec<Vec<usize>>, MatroidError> {
        self.dual().circuits(None)
    }

    /// `S` is a cocircuit iff its complement is a hyperplane.
    pub fn is_cocircuit_idx(&self, s: &[usize]) -> bool {
        let rest: Vec<usize> = (0..self.len()).filter(|j| !s.contains(j)).collect();
        let r = self.rank();
        if r == 0 || self.rank_of_indices(&rest) != r - 1 {
            return false;
        }
        s.iter().all(|&x| {
            let mut t = rest.clone();
            t.push(x);
            self.rank_of_indices(&t) == r
        })
    }

    pub fn is_cocircuit<S: AsRef<str>>(&self, s: &[S]) -> Result<bool, MatroidError> {
        Ok(self.is_cocircuit_idx(&self.indices_of(s)?))
    }

    pub fn restrict_idx(&self, keep: &[usize]) -> LinearMatroid {
        LinearMatroid::new(self.rep.select(keep)).expect("restriction has smaller rank")
    }

    /// Restriction to `keep`, preserving the original column order.
    pub fn restrict<S: AsRef<str>>(&self, keep: &[S]) -> Result<LinearMatroid, MatroidError> {
        let mut idx = self.indices_of(keep)?;
        idx.sort_unstable();
        idx.dedup();
        Ok(self.restrict_idx(&idx))
    }

    pub fn delete<S: AsRef<str>>(&self, drop: &[S]) -> Result<LinearMatroid, MatroidError> {
        let d = self.indices_of(drop)?;
        let keep: Vec<usize> = (0..self.len()).filter(|j| !d.contains(j)).collect();
        Ok(self.restrict_idx(&keep))
    }

    /// Every circuit has at least `r` elements.
    pub fn is_paving(&self) -> bool {
        (0..self.len()).all(|e| self.is_loose(e))
    }

    /// Sparse paving as "paving with a paving dual".
    pub fn is_sparse_paving(&self) -> bool {
        self.is_paving() && self.dual().is_paving()
    }

    /// Sparse paving as "paving, and every non-spanning circuit is a
    /// hyperplane".
    pub fn is_sparse_paving_by_hyperplanes(&self) -> Result<bool, MatroidError> {
        if !self.is_paving() {
            return Ok(false);
        }
        let r = self.rank();
        let circuits = self.circuits(Some(r))?;
        Ok(circuits
            .iter()
            .filter(|c| self.rank_of_indices(c) < r)
            .all(|c| self.hyperplane_check_idx(c)))
    }

    /// Both sparse-paving routes, which must agree.
    pub fn sparse_paving_checked(&self) -> Result<bool, MatroidError> {
        let dual = self.is_sparse_paving();
        if self.len() > CIRCUIT_LIMIT {
            return Ok(dual);
        }
        let hyperplane = self.is_sparse_paving_by_hyperplanes()?;
        if dual != hyperplane {
            return Err(MatroidError::SparsePavingMismatch { dual, hyperplane });
        }
        Ok(dual)
    }

    pub fn hyperplane_check_idx(&self, s: &[usize]) -> bool {
        let r = self.rank();
        if r == 0 || self.rank_of_indices(s) != r - 1 {
            return false;
        }
        (0..self.len()).filter(|j| !s.contains(j)).all(|x| {
            let mut t = s.to_vec();
            t.push(x);
            self.rank_of_indices(&t) == r
        })
    }

    pub fn hyperplane_check<S: AsRef<str>>(&self, s: &[S]) -> Result<bool, MatroidError> {
        Ok(self.hyperplane_check_idx(&self.indices_of(s)?))
    }

    /// Some circuit of size `r + 1` exists.
    pub fn has_spanning_circuit(&self) -> bool {
        let r = self.rank();
        (0..self.len()).any(|e| self.find_circuit_through(e, r + 1, &[]).is_some())
    }

    /// Whether `c` is a circuit: dependent, with every single-element deletion independent.
    pub fn is_circuit_idx(&self, c: &[usize]) -> bool {
        !c.is_empty()
            && self.rank_of_indices(c) == c.len() - 1
            && (0..c.len()).all(|i| {
                let mut t = c.to_vec();
                t.remove(i);
                self.rank_of_indices(&t) == t.len()
            })
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<LinearMatroid, MatroidError> {
        LinearMatroid::new(self.rep.with_labels(labels)?)
    }
}

#[cfg(test)]
mod tests;
