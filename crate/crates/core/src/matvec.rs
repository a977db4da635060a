//! Column-labeled matrices over GF(q), Gaussian elimination, and standard
//! representations `[I_r | Q]`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::gfq::{Code, FieldError, FieldSpec};
use crate::lanes::{self, with_lanes, Lanes, MAX_LANES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("basis has {got} elements but the matrix has rank {rank}")]
    BasisSize { rank: usize, got: usize },
    #[error("basis columns are dependent (`{0}` lies in the span of the earlier ones)")]
    DependentBasis(String),
    #[error("column `{label}` does not fit {mode:?}: zero rows {zero_rows:?}")]
    ZeroPattern {
        label: String,
        mode: ScaleMode,
        zero_rows: Vec<usize>,
    },
    #[error("`{0}` is a basis column; scaling it would break the identity block")]
    BasisColumn(String),
    #[error("scale factor must be nonzero")]
    ZeroScale,
}

/// A matrix over a small finite field whose columns are matroid elements.
#[derive(Clone, PartialEq, Eq)]
pub struct FqMatrix {
    field: &'static FieldSpec,
    rows: usize,
    cols: usize,
    // column-major
    data: Vec<Code>,
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FqMatrix over GF({}) {}x{}", self.field.q(), self.rows, self.cols)?;
        writeln!(f, "  {}", self.labels.join(" "))?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("c{i}")).collect()
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>, MatrixError> {
    let mut index = HashMap::with_capacity(labels.len());
    for (j, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), j).is_some() {
            return Err(MatrixError::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

impl FqMatrix {
    /// Build from row-major entries.
    pub fn new(
        field: &'static FieldSpec,
        rows: usize,
        cols: usize,
        entries: &[Code],
        labels: Option<Vec<String>>,
    ) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::Shape {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        let columns = (0..cols)
            .map(|j| (0..rows).map(|i| entries[i * cols + j]).collect())
            .collect();
        Self::from_columns(field, rows, columns, labels)
    }

    pub fn from_columns(
        field: &'static FieldSpec,
        rows: usize,
        columns: Vec<Vec<Code>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, MatrixError> {
        let cols = columns.len();
        let labels = labels.unwrap_or_else(|| default_labels(cols));
        if labels.len() != cols {
            return Err(MatrixError::LabelCount {
                expected: cols,
                got: labels.len(),
            });
        }
        let mut data = Vec::with_capacity(rows * cols);
        for c in &columns {
            if c.len() != rows {
                return Err(MatrixError::Shape {
                    expected: rows,
                    got: c.len(),
                });
            }
            for &x in c {
                field.check(x as u32)?;
            }
            data.extend_from_slice(c);
        }
        let index = index_labels(&labels)?;
        Ok(FqMatrix {
            field,
            rows,
            cols,
            data,
            labels,
            index,
        })
    }

    pub fn identity(field: &'static FieldSpec, r: usize, labels: Option<Vec<String>>) -> Result<Self, MatrixError> {
        let cols = (0..r).map(|j| (0..r).map(|i| (i == j) as Code).collect()).collect();
        Self::from_columns(field, r, cols, labels)
    }

    pub fn field(&self) -> &'static FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, j: usize) -> &str {
        &self.labels[j]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, MatrixError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| MatrixError::UnknownLabel(label.to_string()))
    }

    pub fn indices_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>, MatrixError> {
        labels.iter().map(|l| self.index_of(l.as_ref())).collect()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Code {
        self.data[j * self.rows + i]
    }

    pub fn column(&self, j: usize) -> &[Code] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[Code]> {
        (0..self.cols).map(move |j| self.column(j))
    }

    pub fn column_by_label(&self, label: &str) -> Result<&[Code], MatrixError> {
        Ok(self.column(self.index_of(label)?))
    }

    /// Row-major copy of the entries.
    pub fn entries(&self) -> Vec<Code> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.push(self.get(i, j));
            }
        }
        out
    }

    /// Keep the given columns, in the given order.
    pub fn select(&self, idx: &[usize]) -> FqMatrix {
        let columns = idx.iter().map(|&j| self.column(j).to_vec()).collect();
        let labels = idx.iter().map(|&j| self.labels[j].clone()).collect();
        Self::from_columns(self.field, self.rows, columns, Some(labels)).expect("selection of distinct columns")
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<FqMatrix, MatrixError> {
        if labels.len() != self.cols {
            return Err(MatrixError::LabelCount {
                expected: self.cols,
                got: labels.len(),
            });
        }
        let index = index_labels(&labels)?;
        Ok(FqMatrix {
            labels,
            index,
            ..self.clone()
        })
    }

    /// Append one column.
    pub fn with_column(&self, col: Vec<Code>, label: &str) -> Result<FqMatrix, MatrixError> {
        let mut columns: Vec<Vec<Code>> = self.columns().map(|c| c.to_vec()).collect();
        columns.push(col);
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        Self::from_columns(self.field, self.rows, columns, Some(labels))
    }

    pub fn rank_of<S: AsRef<str>>(&self, subset: &[S]) -> Result<usize, MatrixError> {
        let idx = self.indices_of(subset)?;
        Ok(self.rank_of_indices(&idx))
    }

    /// Rank of the selected columns. Uses packed lanes when the row count
    /// allows it and plain elimination otherwise.
    pub fn rank_of_indices(&self, idx: &[usize]) -> usize {
        if self.rows <= MAX_LANES {
            let f = self.field;
            with_lanes!(f, L => lanes::rank_of(f, idx.iter().map(|&j| L::pack(f, self.column(j)))))
        } else {
            self.rank_of_indices_unpacked(idx)
        }
    }

    /// Reference elimination on unpacked rows; the packed paths are tested
    /// against it.
    pub fn rank_of_indices_unpacked(&self, idx: &[usize]) -> usize {
        let cols: Vec<Vec<Code>> = idx.iter().map(|&j| self.column(j).to_vec()).collect();
        let rows = transpose(&cols, self.rows);
        let (_, pivots) = gauss_jordan(self.field, rows, None);
        pivots.len()
    }

    pub fn rank(&self) -> usize {
        let all: Vec<usize> = (0..self.cols).collect();
        self.rank_of_indices(&all)
    }

    /// Reduced row echelon form with zero rows dropped: a `rank x n` matrix
    /// with the same column matroid. Pivots are taken at the leftmost
    /// available column, in the lowest available row.
    pub fn row_space_basis(&self) -> FqMatrix {
        let cols: Vec<Vec<Code>> = self.columns().map(|c| c.to_vec()).collect();
        let rows = transpose(&cols, self.rows);
        let (reduced, pivots) = gauss_jordan(self.field, rows, None);
        let r = pivots.len();
        let columns = (0..self.cols)
            .map(|j| (0..r).map(|i| reduced[i][j]).collect())
            .collect();
        FqMatrix::from_columns(self.field, r, columns, Some(self.labels.clone())).expect("same labels")
    }

    /// Row-reduce so that `basis` becomes `I_r` in the given order.
    pub fn standard_rep<S: AsRef<str>>(&self, basis: &[S]) -> Result<StandardRep, MatrixError> {
        let bidx = self.indices_of(basis)?;
        let rank = self.rank();
        if bidx.len() != rank {
            return Err(MatrixError::BasisSize { rank, got: bidx.len() });
        }
        let f = self.field;
        let n = self.rows;
        let mut work: Vec<Vec<Code>> = (0..n)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect();
        let mut t: Vec<Vec<Code>> = (0..n).map(|i| (0..n).map(|k| (i == k) as Code).collect()).collect();
        for (i, &b) in bidx.iter().enumerate() {
            let p = (i..n)
                .find(|&p| work[p][b] != 0)
                .ok_or_else(|| MatrixError::DependentBasis(self.labels[b].clone()))?;
            work.swap(i, p);
            t.swap(i, p);
            let s = f.inv_nz(work[i][b]);
            scale_row(f, &mut work[i], s);
            scale_row(f, &mut t[i], s);
            for k in 0..n {
                if k != i && work[k][b] != 0 {
                    let c = f.neg(work[k][b]);
                    let (wi, wk) = two_rows(&mut work, i, k);
                    axpy_row(f, wk, c, wi);
                    let (ti, tk) = two_rows(&mut t, i, k);
                    axpy_row(f, tk, c, ti);
                }
            }
        }
        let mut perm = bidx.clone();
        perm.extend((0..self.cols).filter(|j| !bidx.contains(j)));
        let columns = perm.iter().map(|&j| (0..rank).map(|i| work[i][j]).collect()).collect();
        let labels: Vec<String> = perm.iter().map(|&j| self.labels[j].clone()).collect();
        let base = FqMatrix::from_columns(f, rank, columns, Some(labels))?;
        Ok(StandardRep {
            basis_order: bidx.iter().map(|&j| self.labels[j].clone()).collect(),
            origin: OriginMap {
                row_transform: t,
                column_perm: perm,
                column_scale: vec![1; self.cols],
            },
            base,
        })
    }
}

fn transpose(cols: &[Vec<Code>], rows: usize) -> Vec<Vec<Code>> {
    (0..rows).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

fn scale_row(f: &FieldSpec, row: &mut [Code], s: Code) {
    for x in row.iter_mut() {
        *x = f.mul(*x, s);
    }
}

fn axpy_row(f: &FieldSpec, dst: &mut [Code], c: Code, src: &[Code]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = f.add(*d, f.mul(c, s));
        }
    }
}

fn two_rows(m: &mut [Vec<Code>], i: usize, k: usize) -> (&[Code], &mut [Code]) {
    debug_assert_ne!(i, k);
    if i < k {
        let (a, b) = m.split_at_mut(k);
        (&a[i], &mut b[0])
    } else {
        let (a, b) = m.split_at_mut(i);
        (&b[0], &mut a[k])
    }
}

/// Gauss-Jordan elimination. Returns the reduced rows (same count) and the
/// pivot columns in order. When `companion` is given, the same row operations
/// are applied to it.
pub(crate) fn gauss_jordan(
    f: &FieldSpec,
    mut rows: Vec<Vec<Code>>,
    mut companion: Option<&mut Vec<Vec<Code>>>,
) -> (Vec<Vec<Code>>, Vec<usize>) {
    let n = rows.len();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut next = 0;
    for j in 0..cols {
        if next == n {
            break;
        }
        let Some(p) = (next..n).find(|&p| rows[p][j] != 0) else {
            continue;
        };
        rows.swap(next, p);
        if let Some(c) = companion.as_deref_mut() {
            c.swap(next, p);
        }
        let s = f.inv_nz(rows[next][j]);
        scale_row(f, &mut rows[next], s);
        if let Some(c) = companion.as_deref_mut() {
            scale_row(f, &mut c[next], s);
        }
        for k in 0..n {
            if k != next && rows[k][j] != 0 {
                let c = f.neg(rows[k][j]);
                let (ri, rk) = two_rows(&mut rows, next, k);
                axpy_row(f, rk, c, ri);
                if let Some(m) = companion.as_deref_mut() {
                    let (mi, mk) = two_rows(m, next, k);
                    axpy_row(f, mk, c, mi);
                }
            }
        }
        pivots.push(j);
        next += 1;
    }
    (rows, pivots)
}

/// Inverse of a square matrix given as rows; `None` when singular.
pub(crate) fn invert(f: &FieldSpec, m: &[Vec<Code>]) -> Option<Vec<Vec<Code>>> {
    let n = m.len();
    let mut inv: Vec<Vec<Code>> = (0..n).map(|i| (0..n).map(|k| (i == k) as Code).collect()).collect();
    let (_, pivots) = gauss_jordan(f, m.to_vec(), Some(&mut inv));
    (pivots.len() == n).then_some(inv)
}

pub(crate) fn mat_vec(f: &FieldSpec, m: &[Vec<Code>], v: &[Code]) -> Vec<Code> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
        .collect()
}

/// Normalization applied by [`StandardRep::scale_normalize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ScaleMode {
    /// Every entry of the column is nonzero and becomes 1.
    AllOnes,
    /// Row 1 is zero, every other entry nonzero and becomes 1.
    TopZeroRestOnes,
}

/// How a standard representation relates to its source matrix:
/// `base[:, j] = column_scale[j] * (row_transform * source[:, column_perm[j]])[..rank]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OriginMap {
    pub row_transform: Vec<Vec<Code>>,
    pub column_perm: Vec<usize>,
    pub column_scale: Vec<Code>,
}

impl OriginMap {
    pub fn apply(&self, source: &FqMatrix, rank: usize) -> FqMatrix {
        let f = source.field();
        let columns = self
            .column_perm
            .iter()
            .zip(&self.column_scale)
            .map(|(&j, &s)| {
                let mut v = mat_vec(f, &self.row_transform, source.column(j));
                v.truncate(rank);
                scale_row(f, &mut v, s);
                v
            })
            .collect();
        let labels = self.column_perm.iter().map(|&j| source.label(j).to_string()).collect();
        FqMatrix::from_columns(f, rank, columns, Some(labels)).expect("labels from source")
    }

    /// Reconstruct the source matrix from a base produced by this map.
    pub fn undo(&self, base: &FqMatrix) -> FqMatrix {
        let f = base.field();
        let rows = self.row_transform.len();
        let tinv = invert(f, &self.row_transform).expect("row transform is invertible");
        let mut columns = vec![Vec::new(); base.cols()];
        let mut labels = vec![String::new(); base.cols()];
        for (k, (&j, &s)) in self.column_perm.iter().zip(&self.column_scale).enumerate() {
            let mut v = base.column(k).to_vec();
            scale_row(f, &mut v, f.inv_nz(s));
            v.resize(rows, 0);
            columns[j] = mat_vec(f, &tinv, &v);
            labels[j] = base.label(k).to_string();
        }
        FqMatrix::from_columns(f, rows, columns, Some(labels)).expect("labels from base")
    }
}

/// A representation `[I_r | Q]` relative to an ordered basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardRep {
    base: FqMatrix,
    basis_order: Vec<String>,
    origin: OriginMap,
}

impl StandardRep {
    pub fn base(&self) -> &FqMatrix {
        &self.base
    }

    pub fn basis_order(&self) -> &[String] {
        &self.basis_order
    }

    pub fn origin(&self) -> &OriginMap {
        &self.origin
    }

    pub fn rank(&self) -> usize {
        self.base.rows()
    }

    pub fn field(&self) -> &'static FieldSpec {
        self.base.field()
    }

    /// Labels of the columns of `Q`, in order.
    pub fn non_basis(&self) -> &[String] {
        &self.base.labels()[self.rank()..]
    }

    pub fn column(&self, label: &str) -> Result<&[Code], MatrixError> {
        self.base.column_by_label(label)
    }

    fn is_basis(&self, label: &str) -> bool {
        self.basis_order.iter().any(|b| b == label)
    }

    /// Row scalings that turn the nonzero entries of `e`'s column into ones,
    /// with compensating basis-column scalings so the identity block survives.
    pub fn scale_normalize(&self, e: &str, mode: ScaleMode) -> Result<StandardRep, MatrixError> {
        let j = self.base.index_of(e)?;
        if self.is_basis(e) {
            return Err(MatrixError::BasisColumn(e.to_string()));
        }
        let f = self.field();
        let col = self.base.column(j);
        let zero_rows: Vec<usize> = (0..col.len()).filter(|&i| col[i] == 0).map(|i| i + 1).collect();
        let fits = match mode {
            ScaleMode::AllOnes => zero_rows.is_empty(),
            ScaleMode::TopZeroRestOnes => zero_rows == [1],
        };
        if !fits {
            return Err(MatrixError::ZeroPattern {
                label: e.to_string(),
                mode,
                zero_rows,
            });
        }
        let factors: Vec<Code> = col.iter().map(|&x| if x == 0 { 1 } else { f.inv_nz(x) }).collect();
        Ok(self.scale_rows(&factors))
    }

    fn scale_rows(&self, factors: &[Code]) -> StandardRep {
        let f = self.field();
        let r = self.rank();
        let mut origin = self.origin.clone();
        for (i, &s) in factors.iter().enumerate() {
            scale_row(f, &mut origin.row_transform[i], s);
            // basis column i picks up factor s at its pivot; undo it
            origin.column_scale[i] = f.mul(origin.column_scale[i], f.inv_nz(s));
        }
        let columns = (0..self.base.cols())
            .map(|j| {
                let c = self.base.column(j);
                if j < r {
                    c.to_vec()
                } else {
                    c.iter().zip(factors).map(|(&x, &s)| f.mul(x, s)).collect()
                }
            })
            .collect();
        let base = FqMatrix::from_columns(f, r, columns, Some(self.base.labels().to_vec())).expect("same labels");
        StandardRep {
            base,
            basis_order: self.basis_order.clone(),
            origin,
        }
    }

    /// Multiply one non-basis column by a nonzero scalar.
    pub fn scale_column(&self, label: &str, c: Code) -> Result<StandardRep, MatrixError> {
        let j = self.base.index_of(label)?;
        if self.is_basis(label) {
            return Err(MatrixError::BasisColumn(label.to_string()));
        }
        if c == 0 {
            return Err(MatrixError::ZeroScale);
        }
        let f = self.field();
        let mut out = self.clone();
        let mut columns: Vec<Vec<Code>> = self.base.columns().map(|c| c.to_vec()).collect();
        scale_row(f, &mut columns[j], c);
        out.base = FqMatrix::from_columns(f, self.rank(), columns, Some(self.base.labels().to_vec()))?;
        out.origin.column_scale[j] = f.mul(out.origin.column_scale[j], c);
        Ok(out)
    }

    /// 1-based indices of the nonzero entries of `f`'s column.
    pub fn column_support(&self, label: &str) -> Result<Vec<usize>, MatrixError> {
        let col = self.column(label)?;
        Ok((0..col.len()).filter(|&i| col[i] != 0).map(|i| i + 1).collect())
    }

    /// Entries of rows `2..=r` of `f`'s column.
    pub fn root_entries(&self, label: &str) -> Result<Vec<Code>, MatrixError> {
        Ok(self.column(label)?.iter().skip(1).copied().collect())
    }
}
