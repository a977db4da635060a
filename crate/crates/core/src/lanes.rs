//! Fixed-width column vectors over GF(q) for the hot loops.
//!
//! Three encodings share one trait: a bitmask for GF(2), a bit-sliced pair of
//! masks for GF(3), and a plain byte array for everything else. The byte
//! encoding works for every q, which is what the parity tests compare the
//! packed paths against.

use std::hash::Hash;
use std::sync::OnceLock;

use crate::gfq::{Code, FieldSpec};

/// Rows supported by the packed encodings.
pub const MAX_LANES: usize = 64;

pub trait Lanes: Copy + Eq + Hash + Send + Sync + std::fmt::Debug + 'static {
    fn zero() -> Self;
    fn pack(f: &FieldSpec, col: &[Code]) -> Self;
    fn get(&self, f: &FieldSpec, i: usize) -> Code;
    fn is_zero(&self) -> bool;
    /// Lowest row index holding a nonzero entry.
    fn lowest(&self) -> Option<usize>;
    /// `self += c * other`
    fn axpy(&mut self, f: &FieldSpec, c: Code, other: &Self);
    fn scale(&mut self, f: &FieldSpec, c: Code);
    /// Position of this vector in the lexicographic enumeration of `GF(q)^rows`.
    /// Only meaningful while `q^rows` fits in a `usize`.
    fn to_index(&self, f: &FieldSpec, rows: usize) -> usize;
    fn from_index(f: &FieldSpec, rows: usize, idx: usize) -> Self;

    fn unpack(&self, f: &FieldSpec, rows: usize) -> Vec<Code> {
        (0..rows).map(|i| self.get(f, i)).collect()
    }

    /// Scale so the lowest nonzero entry is 1; the projective representative.
    fn normalized(&self, f: &FieldSpec) -> Self {
        let mut v = *self;
        if let Some(i) = v.lowest() {
            let lead = v.get(f, i);
            if lead != 1 {
                v.scale(f, f.inv_nz(lead));
            }
        }
        v
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Gf2Lanes(pub u64);

impl Lanes for Gf2Lanes {
    fn zero() -> Self {
        Gf2Lanes(0)
    }
    fn pack(_f: &FieldSpec, col: &[Code]) -> Self {
        let mut m = 0u64;
        for (i, &c) in col.iter().enumerate() {
            if c != 0 {
                m |= 1 << i;
            }
        }
        Gf2Lanes(m)
    }
    #[inline]
    fn get(&self, _f: &FieldSpec, i: usize) -> Code {
        ((self.0 >> i) & 1) as Code
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    #[inline]
    fn lowest(&self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }
    #[inline]
    fn axpy(&mut self, _f: &FieldSpec, c: Code, other: &Self) {
        if c != 0 {
            self.0 ^= other.0;
        }
    }
    #[inline]
    fn scale(&mut self, _f: &FieldSpec, c: Code) {
        if c == 0 {
            self.0 = 0;
        }
    }
    #[inline]
    fn to_index(&self, _f: &FieldSpec, _rows: usize) -> usize {
        self.0 as usize
    }
    fn from_index(_f: &FieldSpec, _rows: usize, idx: usize) -> Self {
        Gf2Lanes(idx as u64)
    }
    fn normalized(&self, _f: &FieldSpec) -> Self {
        *self
    }
}

/// GF(3) vector, bit-sliced: bit i of `ones` means entry 1, of `twos` entry 2.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Gf3Lanes {
    pub ones: u64,
    pub twos: u64,
}

impl Gf3Lanes {
    #[inline]
    pub(crate) fn add(a: Self, b: Self) -> Self {
        // 1 = 1+0 | 0+1 | 2+2, 2 = 2+0 | 0+2 | 1+1
        let a0 = !(a.ones | a.twos);
        let b0 = !(b.ones | b.twos);
        let ones = (a.ones & b0) | (b.ones & a0) | (a.twos & b.twos);
        let twos = (a.twos & b0) | (b.twos & a0) | (a.ones & b.ones);
        Gf3Lanes { ones, twos }
    }

    #[inline]
    pub(crate) fn neg(self) -> Self {
        Gf3Lanes {
            ones: self.twos,
            twos: self.ones,
        }
    }
}

fn pow3_table() -> &'static [[u64; 256]; 8] {
    static T: OnceLock<Box<[[u64; 256]; 8]>> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = Box::new([[0u64; 256]; 8]);
        for (byte, row) in t.iter_mut().enumerate() {
            for (mask, slot) in row.iter_mut().enumerate() {
                let mut s = 0u64;
                for bit in 0..8 {
                    if mask >> bit & 1 == 1 {
                        s = s.wrapping_add(3u64.wrapping_pow((byte * 8 + bit) as u32));
                    }
                }
                *slot = s;
            }
        }
        t
    })
}

fn mask_to_pow3(mask: u64) -> usize {
    let t = pow3_table();
    let mut s = 0u64;
    let mut m = mask;
    let mut byte = 0;
    while m != 0 {
        s = s.wrapping_add(t[byte][(m & 0xff) as usize]);
        m >>= 8;
        byte += 1;
    }
    s as usize
}

impl Lanes for Gf3Lanes {
    fn zero() -> Self {
        Gf3Lanes::default()
    }
    fn pack(_f: &FieldSpec, col: &[Code]) -> Self {
        let mut v = Gf3Lanes::default();
        for (i, &c) in col.iter().enumerate() {
            match c {
                1 => v.ones |= 1 << i,
                2 => v.twos |= 1 << i,
                _ => {}
            }
        }
        v
    }
    #[inline]
    fn get(&self, _f: &FieldSpec, i: usize) -> Code {
        ((self.ones >> i) & 1) as Code | ((((self.twos >> i) & 1) as Code) << 1)
    }
    #[inline]
    fn is_zero(&self) -> bool {
        (self.ones | self.twos) == 0
    }
    #[inline]
    fn lowest(&self) -> Option<usize> {
        let m = self.ones | self.twos;
        (m != 0).then(|| m.trailing_zeros() as usize)
    }
    #[inline]
    fn axpy(&mut self, _f: &FieldSpec, c: Code, other: &Self) {
        match c {
            1 => *self = Gf3Lanes::add(*self, *other),
            2 => *self = Gf3Lanes::add(*self, other.neg()),
            _ => {}
        }
    }
    #[inline]
    fn scale(&mut self, _f: &FieldSpec, c: Code) {
        match c {
            0 => *self = Gf3Lanes::default(),
            2 => *self = self.neg(),
            _ => {}
        }
    }
    #[inline]
    fn to_index(&self, _f: &FieldSpec, _rows: usize) -> usize {
        mask_to_pow3(self.ones) + 2 * mask_to_pow3(self.twos)
    }
    fn from_index(_f: &FieldSpec, rows: usize, mut idx: usize) -> Self {
        let mut v = Gf3Lanes::default();
        for i in 0..rows {
            match idx % 3 {
                1 => v.ones |= 1 << i,
                2 => v.twos |= 1 << i,
                _ => {}
            }
            idx /= 3;
        }
        v
    }
}

/// Byte-per-entry vector valid for any supported field.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct ByteLanes(pub [Code; MAX_LANES]);

impl Lanes for ByteLanes {
    fn zero() -> Self {
        ByteLanes([0; MAX_LANES])
    }
    fn pack(_f: &FieldSpec, col: &[Code]) -> Self {
        let mut v = [0; MAX_LANES];
        v[..col.len()].copy_from_slice(col);
        ByteLanes(v)
    }
    #[inline]
    fn get(&self, _f: &FieldSpec, i: usize) -> Code {
        self.0[i]
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
    fn lowest(&self) -> Option<usize> {
        self.0.iter().position(|&x| x != 0)
    }
    fn axpy(&mut self, f: &FieldSpec, c: Code, other: &Self) {
        if c == 0 {
            return;
        }
        for (a, &b) in self.0.iter_mut().zip(other.0.iter()) {
            if b != 0 {
                *a = f.add(*a, f.mul(c, b));
            }
        }
    }
    fn scale(&mut self, f: &FieldSpec, c: Code) {
        for a in self.0.iter_mut() {
            *a = f.mul(*a, c);
        }
    }
    fn to_index(&self, f: &FieldSpec, rows: usize) -> usize {
        let q = f.q() as usize;
        self.0[..rows].iter().rev().fold(0usize, |acc, &d| acc * q + d as usize)
    }
    fn from_index(f: &FieldSpec, rows: usize, mut idx: usize) -> Self {
        let q = f.q() as usize;
        let mut v = [0; MAX_LANES];
        for slot in v.iter_mut().take(rows) {
            *slot = (idx % q) as Code;
            idx /= q;
        }
        ByteLanes(v)
    }
}

/// Run `$body` with `$L` bound to the fastest lane type for field `$f`.
macro_rules! with_lanes {
    ($f:expr, $L:ident => $body:expr) => {{
        match $f.q() {
            2 => {
                type $L = $crate::lanes::Gf2Lanes;
                $body
            }
            3 => {
                type $L = $crate::lanes::Gf3Lanes;
                $body
            }
            _ => {
                type $L = $crate::lanes::ByteLanes;
                $body
            }
        }
    }};
}
pub(crate) use with_lanes;

/// Incremental echelon basis: each stored vector has a distinct pivot and a
/// pivot entry of 1, and is reduced against every earlier vector.
#[derive(Clone, Debug)]
pub struct Echelon<L: Lanes> {
    vecs: Vec<L>,
    pivots: Vec<usize>,
}

impl<L: Lanes> Default for Echelon<L> {
    fn default() -> Self {
        Echelon {
            vecs: Vec::new(),
            pivots: Vec::new(),
        }
    }
}

impl<L: Lanes> Echelon<L> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.vecs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vecs.is_empty()
    }

    #[inline]
    pub fn reduce(&self, f: &FieldSpec, mut v: L) -> L {
        for (b, &p) in self.vecs.iter().zip(&self.pivots) {
            let c = v.get(f, p);
            if c != 0 {
                v.axpy(f, f.neg(c), b);
            }
        }
        v
    }

    /// Insert an already reduced, nonzero vector.
    #[inline]
    pub fn push_reduced(&mut self, f: &FieldSpec, v: L) -> L {
        let p = v.lowest().expect("push_reduced needs a nonzero vector");
        let v = {
            let mut w = v;
            let lead = w.get(f, p);
            if lead != 1 {
                w.scale(f, f.inv_nz(lead));
            }
            w
        };
        self.vecs.push(v);
        self.pivots.push(p);
        v
    }

    /// Returns true when `v` was independent of the current span.
    pub fn insert(&mut self, f: &FieldSpec, v: L) -> bool {
        let r = self.reduce(f, v);
        if r.is_zero() {
            false
        } else {
            self.push_reduced(f, r);
            true
        }
    }

    pub fn pop(&mut self) {
        self.vecs.pop();
        self.pivots.pop();
    }

    pub fn last(&self) -> Option<(&L, usize)> {
        self.vecs.last().zip(self.pivots.last().copied())
    }
}

/// Rank of a set of packed columns.
pub fn rank_of<L: Lanes>(f: &FieldSpec, cols: impl IntoIterator<Item = L>) -> usize {
    let mut e = Echelon::<L>::new();
    for c in cols {
        e.insert(f, c);
    }
    e.len()
}
