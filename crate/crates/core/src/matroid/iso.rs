//! Isomorphism testing and anchored binary embeddings.

use std::collections::{HashMap, HashSet};

use crate::lanes::{Echelon, Gf2Lanes, Lanes};

use super::{LinearMatroid, MatroidError, CIRCUIT_LIMIT, ISO_LIMIT};

/// `map[i]` is the image of element `i` of the source matroid.
pub type IsoMap = Vec<usize>;

// rank-agreement verification is run when it stays below this many subsets
const VERIFY_BUDGET: u64 = 400_000;

/// An isomorphism `A -> B`, optionally sending `anchor.0` to `anchor.1`.
pub fn iso_check(
    a: &LinearMatroid,
    b: &LinearMatroid,
    anchor: Option<(&str, &str)>,
) -> Result<Option<IsoMap>, MatroidError> {
    let n = a.len();
    let limit = if anchor.is_some() { CIRCUIT_LIMIT } else { ISO_LIMIT };
    if n.max(b.len()) > limit {
        return Err(MatroidError::TooLarge {
            op: "isomorphism search",
            n: n.max(b.len()),
            limit,
        });
    }
    let anchor = match anchor {
        Some((x, y)) => Some((a.index_of(x)?, b.index_of(y)?)),
        None => None,
    };
    if n != b.len() || a.rank() != b.rank() {
        return Ok(None);
    }
    let ca = masks(&a.circuits(None)?);
    let cb = masks(&b.circuits(None)?);
    if ca.len() != cb.len() {
        return Ok(None);
    }
    let (sig_a, sig_b) = refine(n, &ca, &cb, anchor);
    let mut sa = sig_a.clone();
    let mut sb = sig_b.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(None);
    }
    if let Some((x, y)) = anchor {
        if sig_a[x] != sig_b[y] {
            return Ok(None);
        }
    }
    let order = search_order(n, &ca, &sig_a, anchor.map(|a| a.0));
    let mut pos = vec![0; n];
    for (k, &i) in order.iter().enumerate() {
        pos[i] = k;
    }
    // circuits of A grouped by the position at which they become fully assigned
    let mut closing: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &c in &ca {
        let last = bits(c).map(|i| pos[i]).max().unwrap();
        closing[last].push(c);
    }
    let ca_set: HashSet<u32> = ca.iter().copied().collect();
    let cb_set: HashSet<u32> = cb.iter().copied().collect();
    let mut b_by_elem: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &c in &cb {
        for i in bits(c) {
            b_by_elem[i].push(c);
        }
    }

    let mut st = IsoSearch {
        order: &order,
        sig_a: &sig_a,
        sig_b: &sig_b,
        a,
        b,
        closing: &closing,
        ca_set: &ca_set,
        cb_set: &cb_set,
        b_by_elem: &b_by_elem,
        map: vec![usize::MAX; n],
        inverse: vec![usize::MAX; n],
        used: 0,
        anchor,
    };
    if !st.search(0) {
        return Ok(None);
    }
    let map = st.map;
    if verify_cost(n, a.rank() + 1) <= VERIFY_BUDGET && !ranks_agree(a, b, &map) {
        return Ok(None);
    }
    Ok(Some(map))
}

fn masks(cs: &[Vec<usize>]) -> Vec<u32> {
    cs.iter().map(|c| c.iter().fold(0u32, |m, &i| m | 1 << i)).collect()
}

fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

type Color = u32;

/// Colour refinement of the elements of both matroids with a shared palette.
/// Starts from the anchor (if any) and circuit-size counts, then repeatedly
/// splits by the multiset of colour-sets of circuits through each element.
fn refine(n: usize, ca: &[u32], cb: &[u32], anchor: Option<(usize, usize)>) -> (Vec<Color>, Vec<Color>) {
    let initial = |cs: &[u32], marked: Option<usize>| -> Vec<Vec<u64>> {
        (0..n)
            .map(|i| {
                let mut sig = vec![0u64; n + 2];
                for &c in cs {
                    if c >> i & 1 == 1 {
                        sig[c.count_ones() as usize] += 1;
                    }
                }
                sig.push((marked == Some(i)) as u64);
                sig
            })
            .collect()
    };
    let mut keys_a = initial(ca, anchor.map(|a| a.0));
    let mut keys_b = initial(cb, anchor.map(|a| a.1));
    let mut classes = 0;
    loop {
        let mut palette: HashMap<Vec<u64>, Color> = HashMap::new();
        let mut colour = |k: &Vec<u64>| {
            let next = palette.len() as Color;
            *palette.entry(k.clone()).or_insert(next)
        };
        let col_a: Vec<Color> = keys_a.iter().map(&mut colour).collect();
        let col_b: Vec<Color> = keys_b.iter().map(&mut colour).collect();
        if palette.len() == classes {
            return (col_a, col_b);
        }
        classes = palette.len();
        let step = |cs: &[u32], col: &[Color]| -> Vec<Vec<u64>> {
            (0..n)
                .map(|i| {
                    let mut around: Vec<u64> = cs
                        .iter()
                        .filter(|&&c| c >> i & 1 == 1)
                        .map(|&c| {
                            let mut cc: Vec<Color> = bits(c).filter(|&j| j != i).map(|j| col[j]).collect();
                            cc.sort_unstable();
                            cc.iter().fold(1469598103934665603u64, |h, &x| {
                                (h ^ x as u64).wrapping_mul(1099511628211)
                            })
                        })
                        .collect();
                    around.sort_unstable();
                    let mut key = vec![col[i] as u64];
                    key.extend(around);
                    key
                })
                .collect()
        };
        keys_a = step(ca, &col_a);
        keys_b = step(cb, &col_b);
    }
}

/// Anchor first; afterwards prefer elements that close or touch the most
/// circuits among those already placed.
fn search_order(n: usize, ca: &[u32], col: &[Color], anchor: Option<usize>) -> Vec<usize> {
    let mut class_size: HashMap<Color, usize> = HashMap::new();
    for &c in col {
        *class_size.entry(c).or_default() += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u32;
    if let Some(x) = anchor {
        order.push(x);
        placed |= 1 << x;
    }
    while order.len() < n {
        let next = (0..n)
            .filter(|&i| placed >> i & 1 == 0)
            .max_by_key(|&i| {
                let with = placed | 1 << i;
                let closed = ca.iter().filter(|&&c| c >> i & 1 == 1 && c & !with == 0).count();
                let touching = ca.iter().filter(|&&c| c >> i & 1 == 1 && c & placed != 0).count();
                (
                    closed,
                    touching,
                    std::cmp::Reverse(class_size[&col[i]]),
                    std::cmp::Reverse(i),
                )
            })
            .unwrap();
        order.push(next);
        placed |= 1 << next;
    }
    order
}

struct IsoSearch<'a> {
    order: &'a [usize],
    sig_a: &'a [Color],
    sig_b: &'a [Color],
    a: &'a LinearMatroid,
    b: &'a LinearMatroid,
    closing: &'a [Vec<u32>],
    ca_set: &'a HashSet<u32>,
    cb_set: &'a HashSet<u32>,
    b_by_elem: &'a [Vec<u32>],
    map: Vec<usize>,
    inverse: Vec<usize>,
    used: u32,
    anchor: Option<(usize, usize)>,
}

impl IsoSearch<'_> {
    fn search(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let x = self.order[k];
        let cands: Vec<usize> = match self.anchor {
            Some((ax, ay)) if ax == x => vec![ay],
            _ => (0..self.map.len()).collect(),
        };
        for y in cands {
            if self.used >> y & 1 == 1 || self.sig_a[x] != self.sig_b[y] {
                continue;
            }
            self.map[x] = y;
            self.inverse[y] = x;
            self.used |= 1 << y;
            if self.consistent(k, y) && self.search(k + 1) {
                return true;
            }
            self.used &= !(1 << y);
            self.map[x] = usize::MAX;
            self.inverse[y] = usize::MAX;
        }
        false
    }

    fn consistent(&self, k: usize, y: usize) -> bool {
        let pre: Vec<usize> = self.order[..=k].to_vec();
        let img: Vec<usize> = pre.iter().map(|&i| self.map[i]).collect();
        if self.a.rank_of_indices(&pre) != self.b.rank_of_indices(&img) {
            return false;
        }
        let forward = self.closing[k].iter().all(|&c| {
            let img = bits(c).fold(0u32, |m, i| m | 1 << self.map[i]);
            self.cb_set.contains(&img)
        });
        // B circuits through y whose elements are all images must come from A circuits
        forward
            && self.b_by_elem[y].iter().all(|&c| {
                c & !self.used != 0 || {
                    let pre = bits(c).fold(0u32, |m, j| m | 1 << self.inverse[j]);
                    self.ca_set.contains(&pre)
                }
            })
    }
}

fn verify_cost(n: usize, upto: usize) -> u64 {
    let mut total = 0u64;
    let mut c = 1u64;
    for k in 0..=upto.min(n) {
        total += c;
        c = c * (n - k) as u64 / (k + 1) as u64;
    }
    total
}

/// Rank of every subset of size at most `r + 1` agrees under `map`.
fn ranks_agree(a: &LinearMatroid, b: &LinearMatroid, map: &[usize]) -> bool {
    let n = a.len();
    let upto = a.rank() + 1;
    let mut subset = Vec::new();
    fn rec(
        a: &LinearMatroid,
        b: &LinearMatroid,
        map: &[usize],
        start: usize,
        upto: usize,
        subset: &mut Vec<usize>,
    ) -> bool {
        let img: Vec<usize> = subset.iter().map(|&i| map[i]).collect();
        if a.rank_of_indices(subset) != b.rank_of_indices(&img) {
            return false;
        }
        if subset.len() == upto {
            return true;
        }
        for j in start..a.len() {
            subset.push(j);
            let ok = rec(a, b, map, j + 1, upto, subset);
            subset.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    n == 0 || rec(a, b, map, 0, upto, &mut subset)
}

/// An injection `E(M) -> E(F)` with `e -> e_f` identifying `M` with the
/// restriction of `F` to the image. Binary matroids only, equal ranks.
pub fn embeds_into(m: &LinearMatroid, e: &str, f: &LinearMatroid, e_f: &str) -> Result<Option<IsoMap>, MatroidError> {
    if m.q() != f.q() {
        return Err(MatroidError::FieldMismatch(m.q(), f.q()));
    }
    if m.q() != 2 {
        return Err(MatroidError::NotBinary { op: "embedding search" });
    }
    if m.rank() != f.rank() {
        return Err(MatroidError::RankMismatch(m.rank(), f.rank()));
    }
    let e = m.index_of(e)?;
    let e_f = f.index_of(e_f)?;
    Ok(embed_binary(m, e, f, e_f))
}

pub(crate) fn embed_binary(m: &LinearMatroid, e: usize, f: &LinearMatroid, e_f: usize) -> Option<IsoMap> {
    let field = m.field();
    let r = m.rank();
    let n = m.len();
    if n > f.len() {
        return None;
    }
    let mcols: Vec<Gf2Lanes> = m.packed();
    let fcols: Vec<Gf2Lanes> = f.packed();
    if mcols[e].is_zero() != fcols[e_f].is_zero() {
        return None;
    }
    // F columns by value, with the labels available for each value
    let mut pool: HashMap<u64, Vec<usize>> = HashMap::new();
    for (j, c) in fcols.iter().enumerate() {
        if j != e_f {
            pool.entry(c.0).or_default().push(j);
        }
    }
    let start: Vec<usize> = if mcols[e].is_zero() { vec![] } else { vec![e] };
    let basis = m.greedy_basis(&start, &[]);
    debug_assert_eq!(basis.len(), r);
    // express every column of M in the chosen basis
    let std = m.coords().standard_rep(&m.labels_of(&basis)).expect("basis");
    let base = std.base();
    let mut support: Vec<u64> = vec![0; n];
    for k in 0..n {
        let j = m.index_of(base.label(k)).unwrap();
        let col = base.column(k);
        support[j] = (0..r).filter(|&i| col[i] != 0).fold(0u64, |acc, i| acc | 1 << i);
    }

    // order basis rows so supports close as early as possible
    let others: Vec<usize> = (0..n).filter(|&j| !basis.contains(&j)).collect();
    let mut row_order: Vec<usize> = Vec::with_capacity(r);
    if !start.is_empty() {
        row_order.push(0);
    }
    while row_order.len() < r {
        let placed = row_order.iter().fold(0u64, |acc, &i| acc | 1 << i);
        let next = (0..r)
            .filter(|i| placed >> i & 1 == 0)
            .max_by_key(|&i| {
                let with = placed | 1 << i;
                let closed = others.iter().filter(|&&y| support[y] & !with == 0).count();
                (closed, std::cmp::Reverse(i))
            })
            .unwrap();
        row_order.push(next);
    }
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); r];
    let mut placed = 0u64;
    for (k, &i) in row_order.iter().enumerate() {
        placed |= 1 << i;
        for &y in &others {
            if support[y] & !placed == 0 && support[y] & !(placed & !(1 << i)) != 0 {
                closing[k].push(y);
            }
        }
    }
    // zero columns (loops other than e) close before any row is placed
    let loops: Vec<usize> = others.iter().copied().filter(|&y| support[y] == 0).collect();

    let mut st = EmbedSearch {
        field,
        fvalues: {
            let mut v: Vec<u64> = pool.keys().copied().collect();
            v.sort_unstable();
            v
        },
        pool_count: pool.iter().map(|(&k, v)| (k, v.len())).collect(),
        row_order: &row_order,
        closing: &closing,
        support: &support,
        images: vec![0; r],
        used: HashMap::new(),
        anchor_row: (!start.is_empty()).then_some(fcols[e_f].0),
    };
    for _ in &loops {
        if !st.take(0) {
            return None;
        }
    }
    let mut ech = Echelon::<Gf2Lanes>::new();
    if !st.search(0, &mut ech) {
        return None;
    }

    // turn images into labels
    let mut map = vec![usize::MAX; n];
    map[e] = e_f;
    let mut avail = pool;
    for j in 0..n {
        if j == e {
            continue;
        }
        let v = (0..r)
            .filter(|&i| support[j] >> i & 1 == 1)
            .fold(0u64, |acc, i| acc ^ st.images[i]);
        let slot = avail.get_mut(&v).expect("image present");
        map[j] = slot.remove(0);
    }
    Some(map)
}

struct EmbedSearch<'a> {
    field: &'static crate::gfq::FieldSpec,
    fvalues: Vec<u64>,
    pool_count: HashMap<u64, usize>,
    row_order: &'a [usize],
    closing: &'a [Vec<usize>],
    support: &'a [u64],
    // images[i]: image (as packed column) of basis row i
    images: Vec<u64>,
    used: HashMap<u64, usize>,
    anchor_row: Option<u64>,
}

impl EmbedSearch<'_> {
    fn take(&mut self, v: u64) -> bool {
        let u = self.used.entry(v).or_insert(0);
        if *u < self.pool_count.get(&v).copied().unwrap_or(0) {
            *u += 1;
            true
        } else {
            false
        }
    }

    fn give(&mut self, v: u64) {
        *self.used.get_mut(&v).unwrap() -= 1;
    }

    fn search(&mut self, k: usize, ech: &mut Echelon<Gf2Lanes>) -> bool {
        if k == self.row_order.len() {
            return true;
        }
        let row = self.row_order[k];
        let cands: Vec<u64> = match (k, self.anchor_row) {
            (0, Some(v)) => vec![v],
            _ => self.fvalues.clone(),
        };
        let anchored = k == 0 && self.anchor_row.is_some();
        for v in cands {
            let red = ech.reduce(self.field, Gf2Lanes(v));
            if red.is_zero() {
                continue;
            }
            if !anchored && !self.take(v) {
                continue;
            }
            self.images[row] = v;
            ech.push_reduced(self.field, red);
            let mut taken = Vec::new();
            let mut ok = true;
            for &y in &self.closing[k] {
                let img = (0..64)
                    .filter(|&i| self.support[y] >> i & 1 == 1)
                    .fold(0u64, |acc, i| acc ^ self.images[i]);
                if img != 0 && self.take(img) {
                    taken.push(img);
                } else {
                    ok = false;
                    break;
                }
            }
            if ok && self.search(k + 1, ech) {
                return true;
            }
            for t in taken {
                self.give(t);
            }
            ech.pop();
            if !anchored {
                self.give(v);
            }
        }
        false
    }
}
