//! Exhaustive searches over column sets: circuit enumeration, minimum-support
//! span distances (girth through an element), and circuits of a prescribed size.

use crate::gfq::{Code, FieldSpec};
use crate::lanes::{with_lanes, Echelon, Lanes};

const UNREACHED: u8 = u8::MAX;

/// Largest table (in entries) used by the breadth-first routes.
pub const TABLE_LIMIT: usize = 1 << 22;

pub fn table_size(q: u8, rows: usize) -> Option<usize> {
    (q as usize).checked_pow(rows as u32).filter(|&n| n <= TABLE_LIMIT)
}

/// Minimum number of generators whose span (with nonzero coefficients)
/// reaches `target`, capped at `limit`. Breadth-first over `GF(q)^rows`.
pub(crate) fn bfs_distance<L: Lanes>(f: &FieldSpec, rows: usize, gens: &[L], target: L, limit: usize) -> Option<usize> {
    if target.is_zero() {
        return Some(0);
    }
    let size = table_size(f.q(), rows).expect("caller checked table size");
    let mut seen = vec![false; size];
    seen[0] = true;
    let tidx = target.to_index(f, rows);
    let mut frontier = vec![L::zero()];
    let gens = distinct_directions(f, gens);
    for d in 1..=limit {
        let mut next = Vec::new();
        for v in &frontier {
            for g in &gens {
                for c in f.nonzero() {
                    let mut w = *v;
                    w.axpy(f, c, g);
                    let i = w.to_index(f, rows);
                    if !seen[i] {
                        if i == tidx {
                            return Some(d);
                        }
                        seen[i] = true;
                        next.push(w);
                    }
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        frontier = next;
    }
    None
}

/// A minimum set of generators (indices into `gens`) spanning `target` with
/// nonzero coefficients, of size at most `limit`. Breadth-first with
/// predecessor links; the returned set is independent.
pub(crate) fn bfs_witness<L: Lanes>(
    f: &FieldSpec,
    rows: usize,
    gens: &[L],
    target: L,
    limit: usize,
) -> Option<Vec<usize>> {
    if target.is_zero() {
        return Some(Vec::new());
    }
    let size = table_size(f.q(), rows).expect("caller checked table size");
    // first generator of each direction, by original index
    let mut dirs: Vec<(L, usize)> = Vec::new();
    let mut seen_dir = std::collections::HashSet::new();
    for (k, g) in gens.iter().enumerate() {
        if !g.is_zero() && seen_dir.insert(g.normalized(f)) {
            dirs.push((*g, k));
        }
    }
    const NONE: u32 = u32::MAX;
    let mut via = vec![NONE; size];
    let mut prev = vec![0u32; size];
    via[0] = 0;
    let tidx = target.to_index(f, rows);
    let mut frontier = vec![L::zero()];
    for _ in 1..=limit {
        let mut next = Vec::new();
        for v in &frontier {
            let vi = v.to_index(f, rows);
            for &(g, k) in &dirs {
                for c in f.nonzero() {
                    let mut w = *v;
                    w.axpy(f, c, &g);
                    let i = w.to_index(f, rows);
                    if via[i] == NONE {
                        via[i] = k as u32;
                        prev[i] = vi as u32;
                        if i == tidx {
                            let mut out = Vec::new();
                            let mut at = i;
                            while at != 0 {
                                out.push(via[at] as usize);
                                at = prev[at] as usize;
                            }
                            out.sort_unstable();
                            return Some(out);
                        }
                        next.push(w);
                    }
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        frontier = next;
    }
    None
}

// Parallel generators never shorten a path; dropping them trims the BFS.
fn distinct_directions<L: Lanes>(f: &FieldSpec, gens: &[L]) -> Vec<L> {
    let mut seen = std::collections::HashSet::new();
    gens.iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.normalized(f))
        .filter(|g| seen.insert(*g))
        .collect()
}

/// Same contract as [`bfs_distance`], by iterative deepening over independent
/// subsets. Used when the ambient space is too large to tabulate.
pub(crate) fn dfs_distance<L: Lanes>(f: &FieldSpec, gens: &[L], target: L, limit: usize) -> Option<usize> {
    if target.is_zero() {
        return Some(0);
    }
    let gens = distinct_directions(f, gens);
    (1..=limit).find(|&s| {
        let mut ech = Echelon::new();
        exact_span(f, &gens, 0, s, &mut ech, target)
    })
}

fn exact_span<L: Lanes>(
    f: &FieldSpec,
    gens: &[L],
    start: usize,
    remaining: usize,
    ech: &mut Echelon<L>,
    residual: L,
) -> bool {
    for j in start..gens.len() {
        if gens.len() - j < remaining {
            break;
        }
        let r = ech.reduce(f, gens[j]);
        if r.is_zero() {
            continue;
        }
        let v = ech.push_reduced(f, r);
        let p = v.lowest().unwrap();
        let mut res = residual;
        let c = res.get(f, p);
        if c != 0 {
            res.axpy(f, f.neg(c), &v);
        }
        let hit = if res.is_zero() {
            remaining == 1
        } else {
            remaining > 1 && exact_span(f, gens, j + 1, remaining - 1, ech, res)
        };
        ech.pop();
        if hit {
            return true;
        }
    }
    false
}

/// Distance of `target` from zero using `gens`, choosing the route by size.
pub(crate) fn span_distance<L: Lanes>(
    f: &FieldSpec,
    rows: usize,
    gens: &[L],
    target: L,
    limit: usize,
) -> Option<usize> {
    if table_size(f.q(), rows).is_some() {
        bfs_distance(f, rows, gens, target, limit)
    } else {
        dfs_distance(f, gens, target, limit)
    }
}

/// All circuits of size at most `max_size` among `cols`, as sorted index
/// lists, in canonical order (by size, then lexicographically).
pub(crate) fn circuits<L: Lanes>(f: &FieldSpec, cols: &[L], max_size: usize) -> Vec<Vec<usize>> {
    let n = cols.len();
    let mut out = Vec::new();
    // loops are the circuits of size one
    for (j, c) in cols.iter().enumerate() {
        if c.is_zero() && max_size >= 1 {
            out.push(vec![j]);
        }
    }
    let mut st = CircuitState {
        f,
        cols,
        vecs: Vec::new(),
        pivots: Vec::new(),
        exprs: Vec::new(),
        chosen: Vec::new(),
        max_size,
        out: &mut out,
    };
    if max_size >= 2 {
        for (j, c) in cols.iter().enumerate().take(n) {
            if !c.is_zero() {
                st.extend(j);
            }
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

struct CircuitState<'a, L: Lanes> {
    f: &'a FieldSpec,
    cols: &'a [L],
    vecs: Vec<L>,
    pivots: Vec<usize>,
    // exprs[k][j]: coefficient of column j in vecs[k]
    exprs: Vec<Vec<Code>>,
    chosen: Vec<usize>,
    max_size: usize,
    out: &'a mut Vec<Vec<usize>>,
}

impl<L: Lanes> CircuitState<'_, L> {
    /// Push independent column `j` onto the current set and explore all
    /// extensions by larger indices.
    fn extend(&mut self, j: usize) {
        let f = self.f;
        let n = self.cols.len();
        let (r, expr) = self.reduce(j);
        let p = r.lowest().expect("independent column");
        let lead = f.inv_nz(r.get(f, p));
        let mut v = r;
        v.scale(f, lead);
        self.vecs.push(v);
        self.pivots.push(p);
        self.exprs.push(expr.iter().map(|&x| f.mul(x, lead)).collect());
        self.chosen.push(j);

        let size = self.chosen.len();
        for x in j + 1..n {
            if self.cols[x].is_zero() {
                continue;
            }
            let (r, expr) = self.reduce(x);
            if r.is_zero() {
                let support: Vec<usize> = (0..n).filter(|&k| expr[k] != 0).collect();
                if support.len() == size + 1 {
                    self.out.push(support);
                }
            } else if size + 2 <= self.max_size {
                self.extend(x);
            }
        }

        self.vecs.pop();
        self.pivots.pop();
        self.exprs.pop();
        self.chosen.pop();
    }

    /// Reduce column `x` against the stack; returns the residual and its
    /// expression as a combination of original columns.
    fn reduce(&self, x: usize) -> (L, Vec<Code>) {
        let f = self.f;
        let mut v = self.cols[x];
        let mut expr = vec![0; self.cols.len()];
        expr[x] = 1;
        for ((b, &p), e) in self.vecs.iter().zip(&self.pivots).zip(&self.exprs) {
            let c = v.get(f, p);
            if c != 0 {
                let m = f.neg(c);
                v.axpy(f, m, b);
                for (t, &s) in expr.iter_mut().zip(e) {
                    if s != 0 {
                        *t = f.add(*t, f.mul(m, s));
                    }
                }
            }
        }
        (v, expr)
    }
}

/// A circuit of exactly `size` elements containing `e`, avoiding `exclude`;
/// the lexicographically first one in candidate order.
pub(crate) fn circuit_through<L: Lanes>(
    f: &FieldSpec,
    cols: &[L],
    e: usize,
    size: usize,
    exclude: &[usize],
) -> Option<Vec<usize>> {
    let target = cols[e];
    if size == 0 {
        return None;
    }
    if size == 1 {
        return target.is_zero().then(|| vec![e]);
    }
    if target.is_zero() {
        return None;
    }
    let cand: Vec<usize> = (0..cols.len())
        .filter(|&j| j != e && !exclude.contains(&j) && !cols[j].is_zero())
        .collect();
    let mut ech = Echelon::new();
    let mut chosen = Vec::new();
    if find_through(f, cols, &cand, 0, size - 1, &mut ech, target, target, &mut chosen) {
        chosen.push(e);
        chosen.sort_unstable();
        Some(chosen)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn find_through<L: Lanes>(
    f: &FieldSpec,
    cols: &[L],
    cand: &[usize],
    start: usize,
    remaining: usize,
    ech: &mut Echelon<L>,
    target: L,
    residual: L,
    chosen: &mut Vec<usize>,
) -> bool {
    for k in start..cand.len() {
        if cand.len() - k < remaining {
            break;
        }
        let j = cand[k];
        let r = ech.reduce(f, cols[j]);
        if r.is_zero() {
            continue;
        }
        let v = ech.push_reduced(f, r);
        let p = v.lowest().unwrap();
        let mut res = residual;
        let c = res.get(f, p);
        if c != 0 {
            res.axpy(f, f.neg(c), &v);
        }
        chosen.push(j);
        // once the target is spanned early, every superset has a smaller
        // circuit through e, so the branch is dead
        let hit = if res.is_zero() {
            remaining == 1 && uses_all(f, cols, chosen, target)
        } else {
            remaining > 1 && find_through(f, cols, cand, k + 1, remaining - 1, ech, target, res, chosen)
        };
        if hit {
            ech.pop();
            return true;
        }
        chosen.pop();
        ech.pop();
    }
    false
}

/// Whether `target` needs every element of `chosen` (independent, spanning
/// `target`): no single element can be left out.
fn uses_all<L: Lanes>(f: &FieldSpec, cols: &[L], chosen: &[usize], target: L) -> bool {
    (0..chosen.len()).all(|skip| {
        let mut ech = Echelon::new();
        for (i, &j) in chosen.iter().enumerate() {
            if i != skip {
                ech.insert(f, cols[j]);
            }
        }
        !ech.reduce(f, target).is_zero()
    })
}

/// Distance table over `GF(q)^rows`: `dist[v]` is the least number of the
/// added generators spanning `v` (with nonzero coefficients), or unreachable.
#[derive(Clone, Debug)]
pub struct SpanTable {
    f: &'static FieldSpec,
    rows: usize,
    dist: Vec<u8>,
}

impl SpanTable {
    /// `None` when `q^rows` exceeds [`TABLE_LIMIT`].
    pub fn new(f: &'static FieldSpec, rows: usize) -> Option<SpanTable> {
        let size = table_size(f.q(), rows)?;
        let mut dist = vec![UNREACHED; size];
        dist[0] = 0;
        Some(SpanTable { f, rows, dist })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn add_generator(&mut self, g: &[Code]) {
        let f = self.f;
        with_lanes!(f, L => self.add_packed(L::pack(f, g)))
    }

    fn add_packed<L: Lanes>(&mut self, g: L) {
        let f = self.f;
        if g.is_zero() {
            return;
        }
        let old = self.dist.clone();
        for (i, &d) in old.iter().enumerate() {
            if d == UNREACHED {
                continue;
            }
            let v = L::from_index(f, self.rows, i);
            for c in f.nonzero() {
                let mut w = v;
                w.axpy(f, c, &g);
                let k = w.to_index(f, self.rows);
                if d + 1 < self.dist[k] {
                    self.dist[k] = d + 1;
                }
            }
        }
    }

    pub fn distance(&self, v: &[Code]) -> Option<usize> {
        let f = self.f;
        let d = with_lanes!(f, L => self.dist[L::pack(f, v).to_index(f, self.rows)]);
        (d != UNREACHED).then_some(d as usize)
    }

    /// Distance of `v` if `g` were added, without modifying the table.
    pub fn distance_with(&self, g: &[Code], v: &[Code]) -> Option<usize> {
        let f = self.f;
        let best = with_lanes!(f, L => {
            let gp = L::pack(f, g);
            let vp = L::pack(f, v);
            let mut best = self.dist[vp.to_index(f, self.rows)];
            if !gp.is_zero() {
                for c in f.nonzero() {
                    let mut w = vp;
                    w.axpy(f, f.neg(c), &gp);
                    let d = self.dist[w.to_index(f, self.rows)];
                    if d != UNREACHED && d + 1 < best {
                        best = d + 1;
                    }
                }
            }
            best
        });
        (best != UNREACHED).then_some(best as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::field;
    use crate::lanes::{ByteLanes, Gf3Lanes};

    fn pack_all<L: Lanes>(f: &FieldSpec, cols: &[Vec<Code>]) -> Vec<L> {
        cols.iter().map(|c| L::pack(f, c)).collect()
    }

    #[test]
    fn bfs_and_dfs_agree_on_small_ternary() {
        let f = field(3).unwrap();
        let cols = vec![
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![1, 2, 0, 1],
        ];
        let gens: Vec<Gf3Lanes> = pack_all(f, &cols[..4]);
        let t = Gf3Lanes::pack(f, &cols[4]);
        assert_eq!(bfs_distance(f, 4, &gens, t, 4), Some(3));
        assert_eq!(dfs_distance(f, &gens, t, 4), Some(3));
        assert_eq!(bfs_distance(f, 4, &gens, t, 2), None);
    }

    #[test]
    fn circuits_of_u24() {
        let f = field(3).unwrap();
        let cols = vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]];
        let c = circuits::<Gf3Lanes>(f, &pack_all(f, &cols), 3);
        assert_eq!(c, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
    }

    #[test]
    fn loops_and_parallel_pairs() {
        let f = field(5).unwrap();
        let cols = vec![vec![1, 0], vec![0, 0], vec![3, 0], vec![0, 1]];
        let c = circuits::<ByteLanes>(f, &pack_all(f, &cols), 3);
        assert_eq!(c, vec![vec![1], vec![0, 2]]);
    }

    #[test]
    fn span_table_incremental() {
        let f = field(3).unwrap();
        let mut t = SpanTable::new(f, 3).unwrap();
        t.add_generator(&[1, 0, 0]);
        t.add_generator(&[0, 1, 0]);
        assert_eq!(t.distance(&[2, 1, 0]), Some(2));
        assert_eq!(t.distance(&[0, 0, 1]), None);
        assert_eq!(t.distance_with(&[0, 0, 2], &[1, 1, 1]), Some(3));
        t.add_generator(&[0, 0, 2]);
        assert_eq!(t.distance(&[1, 1, 1]), Some(3));
        assert_eq!(t.distance(&[0, 0, 1]), Some(1));
    }

    #[test]
    fn circuit_through_respects_size_and_exclusion() {
        let f = field(2).unwrap();
        // Fano points 1..7 as 3-bit columns
        let cols: Vec<Vec<Code>> = (1u8..8).map(|x| vec![x & 1, (x >> 1) & 1, (x >> 2) & 1]).collect();
        let packed = pack_all::<crate::lanes::Gf2Lanes>(f, &cols);
        let c = circuit_through(f, &packed, 0, 3, &[]).unwrap();
        assert_eq!(c, vec![0, 1, 2]);
        let c = circuit_through(f, &packed, 0, 4, &[]).unwrap();
        assert_eq!(c.len(), 4);
        assert!(circuit_through(f, &packed, 0, 5, &[]).is_none());
        assert!(circuit_through(f, &packed, 0, 3, &[1, 3, 5]).is_none());
    }
}
