use std::fmt;

use thiserror::Error;

use crate::numtheory::prime_power;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} exceeds the supported {1}")]
    TooLarge(u64, u64),
}

pub const MAX_FIELD_ORDER: u64 = 256;

/// `GF(p^e)` with elements `0..q`; element `i` is the polynomial
/// `Σ c_j X^j` where `i = Σ c_j p^j`.
#[derive(Clone)]
pub struct FiniteField {
    p: u64,
    e: u32,
    q: usize,
    /// Coefficients of the monic modulus, lowest degree first, length `e + 1`.
    modulus: Vec<u64>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.e, self.modulus)
    }
}

fn digits(mut x: usize, p: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = x as u64 % p;
            x /= p as usize;
            d
        })
        .collect()
}

fn undigits(d: &[u64], p: u64) -> usize {
    d.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

/// Remainder of `a` modulo the monic `m` over `F_p`, coefficients lowest first.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r.pop().expect("nonempty");
        if lead == 0 {
            continue;
        }
        let shift = r.len() - dm;
        for (i, &c) in m[..dm].iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - lead * c % p) % p;
        }
    }
    r
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        // every monic polynomial of degree d
        for low in 0..p.pow(d as u32) as usize {
            let mut g = digits(low, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// The field of order `q`, using the monic irreducible whose lower
    /// coefficients `Σ c_j p^j` form the smallest integer.
    pub fn new(q: u64) -> Result<Self, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q > MAX_FIELD_ORDER {
            return Err(FieldError::TooLarge(q, MAX_FIELD_ORDER));
        }
        let modulus = (0..q as usize)
            .map(|low| {
                let mut f = digits(low, p, e as usize);
                f.push(1);
                f
            })
            .find(|f| e == 1 || is_irreducible(f, p))
            .expect("an irreducible polynomial of every degree exists");
        let q = q as usize;
        let len = e as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            let da = digits(a, p, len);
            for b in 0..q {
                let db = digits(b, p, len);
                let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&sum, p) as u16;
                let mut prod = vec![0u64; 2 * len - 1];
                for i in 0..len {
                    for j in 0..len {
                        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                    }
                }
                let mut rem = poly_rem(&prod, &modulus, p);
                rem.resize(len, 0);
                mul[a * q + b] = undigits(&rem, p) as u16;
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).expect("additive inverse") as u16).collect();
        let inv = (0..q)
            .map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[a * q + b] == 1).expect("nonzero elements invert") as u16 })
            .collect();
        Ok(FiniteField { p, e, q, modulus, add, mul, neg, inv })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `inv(0) = 0`.
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn pow(&self, a: usize, mut k: u64) -> usize {
        let (mut base, mut acc) = (a, 1usize);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn multiplicative_order(&self, a: usize) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        Some(k)
    }

    /// Smallest element of multiplicative order `q - 1`.
    pub fn primitive_element(&self) -> usize {
        (1..self.q).find(|&a| self.multiplicative_order(a) == Some(self.q as u64 - 1)).expect("the multiplicative group is cyclic")
    }

    /// Coordinates of `a` over `F_p`, lowest degree first.
    pub fn coordinates(&self, a: usize) -> Vec<u64> {
        digits(a, self.p, self.e as usize)
    }

    pub fn from_coordinates(&self, c: &[u64]) -> usize {
        undigits(c, self.p)
    }

    /// The subfield of order `s` as a sorted element list.
    pub fn subfield(&self, s: u64) -> Option<Vec<usize>> {
        let (_, f) = prime_power(s).filter(|&(r, _)| r == self.p)?;
        if !self.e.is_multiple_of(f) {
            return None;
        }
        Some((0..self.q).filter(|&a| self.pow(a, s) == a).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for q in [2u64, 3, 4, 8, 9, 16, 25, 27] {
            let f = FiniteField::new(q).unwrap();
            let n = f.order();
            for a in 0..n {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in 0..n {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in (0..n).step_by(3) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
            assert_eq!(f.multiplicative_order(f.primitive_element()), Some(q - 1));
        }
    }

    #[test]
    fn frobenius_is_an_automorphism() {
        let f = FiniteField::new(9).unwrap();
        let frob = |a| f.pow(a, 3);
        let mut image: Vec<usize> = (0..9).map(frob).collect();
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(frob(f.add(a, b)), f.add(frob(a), frob(b)));
                assert_eq!(frob(f.mul(a, b)), f.mul(frob(a), frob(b)));
            }
        }
        image.sort_unstable();
        assert_eq!(image, (0..9).collect::<Vec<_>>());
        assert_eq!(f.subfield(3).unwrap().len(), 3);
    }

    #[test]
    fn smallest_modulus() {
        // x^2 + 1 is the first monic irreducible quadratic over F_3
        assert_eq!(FiniteField::new(9).unwrap().modulus(), &[1, 0, 1]);
        // x^2 + x + 1 over F_2
        assert_eq!(FiniteField::new(4).unwrap().modulus(), &[1, 1, 1]);
        assert!(matches!(FiniteField::new(12), Err(FieldError::NotPrimePower(12))));
    }
}
