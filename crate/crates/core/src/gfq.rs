//! Arithmetic over the small finite fields GF(q), q <= 9.
//!
//! Every field is realized by complete lookup tables. Elements are encoded as
//! integers `0..q`; for an extension field GF(p^k) the code is the base-`p`
//! digit vector of the polynomial coefficients, lowest degree first. For
//! example in GF(4) (built from `x^2 + x + 1`) the code `3` is `1 + x`.

use std::sync::OnceLock;

use thiserror::Error;

/// Field sizes accepted by [`make_field`].
pub const SUPPORTED_ORDERS: [u8; 7] = [2, 3, 4, 5, 7, 8, 9];

/// An element code of a [`FieldSpec`].
pub type Code = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("unsupported field size {0}; supported sizes are 2, 3, 4, 5, 7, 8, 9")]
    UnsupportedOrder(u32),
    #[error("division by zero in GF({0})")]
    DivisionByZero(u8),
    #[error("code {code} is not an element of GF({q})")]
    InvalidCode { code: u32, q: u8 },
}

/// Complete arithmetic tables of one finite field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    q: u8,
    p: u8,
    k: u8,
    add: Vec<Code>,
    mul: Vec<Code>,
    neg: Vec<Code>,
    // inv[0] is never read; division by zero is rejected before lookup.
    inv: Vec<Code>,
}

/// The irreducible polynomial used for GF(p^k), as coefficients of
/// `x^0..x^(k-1)` of `x^k` reduced (i.e. `x^k = -sum c_i x^i`).
///
/// GF(4): x^2 + x + 1, GF(8): x^3 + x + 1, GF(9): x^2 + 1.
fn modulus(p: u8, k: u8) -> &'static [u8] {
    match (p, k) {
        (2, 2) => &[1, 1],
        (2, 3) => &[1, 1, 0],
        (3, 2) => &[1, 0],
        _ => &[],
    }
}

fn decompose(q: u32) -> Option<(u8, u8)> {
    match q {
        2 => Some((2, 1)),
        3 => Some((3, 1)),
        4 => Some((2, 2)),
        5 => Some((5, 1)),
        7 => Some((7, 1)),
        8 => Some((2, 3)),
        9 => Some((3, 2)),
        _ => None,
    }
}

fn digits(code: u8, p: u8, k: u8) -> Vec<u8> {
    let mut out = Vec::with_capacity(k as usize);
    let mut c = code;
    for _ in 0..k {
        out.push(c % p);
        c /= p;
    }
    out
}

fn pack(d: &[u8], p: u8) -> u8 {
    d.iter().rev().fold(0u8, |acc, &x| acc * p + x)
}

fn poly_mul(a: &[u8], b: &[u8], p: u8, k: u8) -> Vec<u8> {
    let k = k as usize;
    let mut prod = vec![0u16; 2 * k - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u16 * y as u16) % p as u16;
        }
    }
    // reduce degrees >= k using x^k = -sum m_i x^i
    let m = modulus(p, k as u8);
    for deg in (k..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, &mi) in m.iter().enumerate() {
            let t = prod[deg - k + i] + (p as u16 - (c * mi as u16) % p as u16);
            prod[deg - k + i] = t % p as u16;
        }
    }
    prod.truncate(k);
    prod.into_iter().map(|x| x as u8).collect()
}

/// Build the tables for GF(q).
pub fn make_field(q: u32) -> Result<FieldSpec, FieldError> {
    let (p, k) = decompose(q).ok_or(FieldError::UnsupportedOrder(q))?;
    let q = q as u8;
    let n = q as usize;
    let mut add = vec![0; n * n];
    let mut mul = vec![0; n * n];
    for a in 0..q {
        let da = digits(a, p, k);
        for b in 0..q {
            let db = digits(b, p, k);
            let s: Vec<u8> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[a as usize * n + b as usize] = pack(&s, p);
            mul[a as usize * n + b as usize] = if k == 1 {
                ((a as u16 * b as u16) % p as u16) as u8
            } else {
                pack(&poly_mul(&da, &db, p, k), p)
            };
        }
    }
    let mut neg = vec![0; n];
    let mut inv = vec![0; n];
    for a in 0..n {
        neg[a] = (0..q).find(|&b| add[a * n + b as usize] == 0).unwrap();
        if a != 0 {
            inv[a] = (1..q).find(|&b| mul[a * n + b as usize] == 1).unwrap();
        }
    }
    Ok(FieldSpec {
        q,
        p,
        k,
        add,
        mul,
        neg,
        inv,
    })
}

/// Shared, immutable instance of GF(q).
///
/// All matrices refer to their field through this cache so the tables are
/// built once per process.
pub fn field(q: u32) -> Result<&'static FieldSpec, FieldError> {
    static CACHE: [OnceLock<FieldSpec>; 10] = [const { OnceLock::new() }; 10];
    decompose(q).ok_or(FieldError::UnsupportedOrder(q))?;
    Ok(CACHE[q as usize].get_or_init(|| make_field(q).expect("order checked above")))
}

impl FieldSpec {
    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn characteristic(&self) -> u8 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.k
    }

    pub fn check(&self, code: u32) -> Result<Code, FieldError> {
        if code < self.q as u32 {
            Ok(code as Code)
        } else {
            Err(FieldError::InvalidCode { code, q: self.q })
        }
    }

    #[inline]
    pub fn add(&self, a: Code, b: Code) -> Code {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Code, b: Code) -> Code {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: Code, b: Code) -> Code {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Code) -> Code {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: Code) -> Result<Code, FieldError> {
        if a == 0 {
            Err(FieldError::DivisionByZero(self.q))
        } else {
            Ok(self.inv[a as usize])
        }
    }

    pub fn div(&self, a: Code, b: Code) -> Result<Code, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Inverse of a value already known to be nonzero.
    #[inline]
    pub(crate) fn inv_nz(&self, a: Code) -> Code {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    pub fn pow(&self, a: Code, mut e: u32) -> Code {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn elements(&self) -> impl Iterator<Item = Code> {
        0..self.q
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Code> {
        1..self.q
    }

    pub fn add_table(&self) -> &[Code] {
        &self.add
    }

    pub fn mul_table(&self) -> &[Code] {
        &self.mul
    }
}
