//! Instance generators shared by the suites.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gfq::{Code, FieldSpec};
use crate::matroid::{LinearMatroid, SpanTable};
use crate::matvec::{invert, mat_vec, FqMatrix};

pub(crate) fn sample_rng(seed: u64, rank: usize, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((rank as u64) << 40) | index);
    rng
}

pub(crate) fn unit(r: usize, i: usize) -> Vec<Code> {
    let mut v = vec![0; r];
    v[i] = 1;
    v
}

/// Nonzero vectors of `GF(q)^r` with leading nonzero entry 1, ordered by
/// their base-q index (first coordinate least significant).
pub(crate) fn projective_points(f: &FieldSpec, r: usize) -> Vec<Vec<Code>> {
    let q = f.q() as usize;
    let mut out = Vec::new();
    for idx in 1..q.pow(r as u32) {
        let mut v = vec![0 as Code; r];
        let mut x = idx;
        for slot in v.iter_mut() {
            *slot = (x % q) as Code;
            x /= q;
        }
        if v.iter().find(|&&a| a != 0) == Some(&1) {
            out.push(v);
        }
    }
    out
}

/// `v` scaled to a leading 1; `None` for the zero vector.
pub(crate) fn normalize(f: &FieldSpec, v: &[Code]) -> Option<Vec<Code>> {
    let lead = *v.iter().find(|&&a| a != 0)?;
    let s = f.inv_nz(lead);
    Some(v.iter().map(|&a| f.mul(a, s)).collect())
}

pub(crate) fn random_vector(f: &FieldSpec, r: usize, rng: &mut impl Rng) -> Vec<Code> {
    (0..r).map(|_| rng.gen_range(0..f.q())).collect()
}

pub(crate) fn random_nonzero(f: &FieldSpec, rng: &mut impl Rng) -> Code {
    rng.gen_range(1..f.q())
}

pub(crate) fn matroid_of(f: &'static FieldSpec, r: usize, cols: Vec<Vec<Code>>, labels: Vec<String>) -> LinearMatroid {
    let m = FqMatrix::from_columns(f, r, cols, Some(labels)).expect("generated columns are well formed");
    LinearMatroid::new(m).expect("generated rank is within limits")
}

/// The same matroid in different coordinates: a random invertible change of
/// basis, random column scaling and a random column order.
pub(crate) fn scramble(
    f: &'static FieldSpec,
    r: usize,
    cols: &[Vec<Code>],
    labels: &[String],
    rng: &mut impl Rng,
) -> LinearMatroid {
    let t = loop {
        let t: Vec<Vec<Code>> = (0..r).map(|_| random_vector(f, r, rng)).collect();
        if invert(f, &t).is_some() {
            break t;
        }
    };
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.shuffle(rng);
    let mut out_cols = Vec::with_capacity(cols.len());
    let mut out_labels = Vec::with_capacity(cols.len());
    for j in order {
        let s = random_nonzero(f, rng);
        out_cols.push(mat_vec(f, &t, &cols[j]).into_iter().map(|a| f.mul(a, s)).collect());
        out_labels.push(labels[j].clone());
    }
    matroid_of(f, r, out_cols, out_labels)
}

struct Target {
    idx: usize,
    // distances over all other columns; `None` past the table limit
    table: Option<SpanTable>,
}

/// Grows a simple column set while keeping chosen columns loose.
pub(crate) struct LooseBuilder {
    f: &'static FieldSpec,
    r: usize,
    cols: Vec<Vec<Code>>,
    labels: Vec<String>,
    seen: HashSet<Vec<Code>>,
    targets: Vec<Target>,
}

impl LooseBuilder {
    /// `None` when the seed columns are not simple or a target is not loose.
    pub(crate) fn new(
        f: &'static FieldSpec,
        r: usize,
        cols: Vec<Vec<Code>>,
        labels: Vec<String>,
        targets: &[usize],
    ) -> Option<LooseBuilder> {
        let mut seen = HashSet::new();
        for c in &cols {
            if !seen.insert(normalize(f, c)?) {
                return None;
            }
        }
        let targets = targets
            .iter()
            .map(|&idx| Target {
                idx,
                table: SpanTable::new(f, r).map(|mut t| {
                    for (j, c) in cols.iter().enumerate() {
                        if j != idx {
                            t.add_generator(c);
                        }
                    }
                    t
                }),
            })
            .collect();
        let b = LooseBuilder {
            f,
            r,
            cols,
            labels,
            seen,
            targets,
        };
        b.targets.iter().all(|t| b.stays_loose(t, None)).then_some(b)
    }

    fn stays_loose(&self, t: &Target, extra: Option<&[Code]>) -> bool {
        let target = &self.cols[t.idx];
        match &t.table {
            Some(table) => {
                let d = match extra {
                    Some(g) => table.distance_with(g, target),
                    None => table.distance(target),
                };
                d.is_none_or(|d| d + 1 >= self.r)
            }
            None => {
                let mut cols = self.cols.clone();
                let mut labels = self.labels.clone();
                if let Some(g) = extra {
                    cols.push(g.to_vec());
                    labels.push("probe".into());
                }
                matroid_of(self.f, self.r, cols, labels).is_loose(t.idx)
            }
        }
    }

    /// Adds `v` if it is new up to scaling and every target stays loose.
    pub(crate) fn try_add(&mut self, v: Vec<Code>, label: String) -> bool {
        let Some(key) = normalize(self.f, &v) else {
            return false;
        };
        if self.seen.contains(&key) || !self.targets.iter().all(|t| self.stays_loose(t, Some(&v))) {
            return false;
        }
        for t in &mut self.targets {
            if let Some(table) = &mut t.table {
                table.add_generator(&v);
            }
        }
        self.seen.insert(key);
        self.cols.push(v);
        self.labels.push(label);
        true
    }

    pub(crate) fn cols(&self) -> &[Vec<Code>] {
        &self.cols
    }

    pub(crate) fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// `I_r` labelled `b1..br`, then `e`.
pub(crate) fn basis_plus(r: usize, e: Vec<Code>) -> (Vec<Vec<Code>>, Vec<String>) {
    let mut cols: Vec<Vec<Code>> = (0..r).map(|i| unit(r, i)).collect();
    let mut labels: Vec<String> = (1..=r).map(|i| format!("b{i}")).collect();
    cols.push(e);
    labels.push("e".into());
    (cols, labels)
}
