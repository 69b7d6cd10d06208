use std::fmt;
use std::sync::{Arc, OnceLock};

use super::GfqError;

/// Field orders with built-in tables.
pub const SUPPORTED_Q: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

/// Arithmetic tables for GF(q), q <= 9.
///
/// Elements are indices `0..q`. For `q = p^d` with `d > 1` the index
/// `c_0 + c_1 p + ... + c_{d-1} p^{d-1}` stands for the residue class of
/// `c_0 + c_1 x + ... ` modulo a fixed irreducible polynomial.
pub struct FieldSpec {
    q: u8,
    p: u8,
    degree: u8,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// Shared handle to a field; cheap to clone.
pub type Field = Arc<FieldSpec>;

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

// Low-to-high coefficients of the monic modulus, leading coefficient included.
fn modulus(q: u64) -> Option<(u8, u8, &'static [u8])> {
    match q {
        2 => Some((2, 1, &[0, 1])),
        3 => Some((3, 1, &[0, 1])),
        5 => Some((5, 1, &[0, 1])),
        7 => Some((7, 1, &[0, 1])),
        4 => Some((2, 2, &[1, 1, 1])),    // x^2 + x + 1
        8 => Some((2, 3, &[1, 1, 0, 1])), // x^3 + x + 1
        9 => Some((3, 2, &[1, 0, 1])),    // x^2 + 1
        _ => None,
    }
}

fn digits(x: u8, p: u8, d: u8) -> Vec<u8> {
    let mut out = Vec::with_capacity(d as usize);
    let mut x = x;
    for _ in 0..d {
        out.push(x % p);
        x /= p;
    }
    out
}

fn undigits(ds: &[u8], p: u8) -> u8 {
    ds.iter().rev().fold(0u8, |acc, &c| acc * p + c)
}

fn poly_mul_mod(a: &[u8], b: &[u8], p: u8, modulus: &[u8]) -> Vec<u8> {
    let d = modulus.len() - 1;
    let mut prod = vec![0u16; 2 * d];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u16 * y as u16) % p as u16;
        }
    }
    for deg in (d..2 * d).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        // subtract c * x^{deg-d} * modulus
        for (i, &m) in modulus.iter().enumerate() {
            let pos = deg - d + i;
            prod[pos] = (prod[pos] + (p as u16 - (c * m as u16) % p as u16)) % p as u16;
        }
    }
    prod[..d].iter().map(|&c| c as u8).collect()
}

impl FieldSpec {
    fn build(q: u64) -> Result<FieldSpec, GfqError> {
        let (p, degree, modulus) = modulus(q).ok_or(GfqError::UnsupportedQ(q))?;
        let qq = q as usize;
        let mut add = vec![0u8; qq * qq];
        let mut mul = vec![0u8; qq * qq];
        for a in 0..qq as u8 {
            let da = digits(a, p, degree);
            for b in 0..qq as u8 {
                let db = digits(b, p, degree);
                let sum: Vec<u8> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qq + b as usize] = undigits(&sum, p);
                mul[a as usize * qq + b as usize] = undigits(&poly_mul_mod(&da, &db, p, modulus), p);
            }
        }
        let mut neg = vec![0u8; qq];
        let mut inv = vec![0u8; qq];
        for a in 0..qq {
            neg[a] = (0..qq).find(|&b| add[a * qq + b] == 0).ok_or(GfqError::NotAField(q))? as u8;
            if a != 0 {
                inv[a] = (1..qq).find(|&b| mul[a * qq + b] == 1).ok_or(GfqError::NotAField(q))? as u8;
            }
        }
        let f = FieldSpec { q: q as u8, p, degree, add, mul, neg, inv };
        f.verify()?;
        Ok(f)
    }

    /// Exhaustive check of the field axioms on the tables.
    fn verify(&self) -> Result<(), GfqError> {
        let q = self.q;
        let bad = || Err(GfqError::NotAField(q as u64));
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a || self.add(a, self.neg(a)) != 0 {
                return bad();
            }
            if a != 0 && self.mul(a, self.inv(a)) != 1 {
                return bad();
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return bad();
                }
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                        || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                        || self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                    {
                        return bad();
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn characteristic(&self) -> u8 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `inv(0)` is 0.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u8) -> usize {
        assert!(a != 0);
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// Returns the (cached, verified) field of order `q`.
pub fn make_field(q: u64) -> Result<Field, GfqError> {
    static CACHE: [OnceLock<Field>; 7] = [const { OnceLock::new() }; 7];
    let slot = SUPPORTED_Q.iter().position(|&s| s == q).ok_or(GfqError::UnsupportedQ(q))?;
    if let Some(f) = CACHE[slot].get() {
        return Ok(f.clone());
    }
    let f = Arc::new(FieldSpec::build(q)?);
    Ok(CACHE[slot].get_or_init(|| f).clone())
}
