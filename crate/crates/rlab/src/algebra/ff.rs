//! Finite fields F_{p^m} with packed element representation.
//!
//! Elements are residue polynomials of degree < m over F_p, packed into a
//! single u64 as sum of c_i * p^i. This keeps matrices and group elements
//! hashable and cheap to copy at the field sizes we work with.

use std::fmt;
use std::sync::Arc;

use crate::error::{RlabError, Result};

/// Element of a finite field, packed base-p. Only meaningful together with
/// the field it came from.
pub type Fe = u64;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    m: usize,
    /// Monic irreducible modulus over F_p, coefficient list little-endian in
    /// degree, length m+1. For m = 1 this is [0, 1] (the polynomial x).
    modulus: Vec<u64>,
    size: u64,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{{{}^{}}}", self.p, self.m)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    /// Prime field F_p.
    pub fn prime(p: u64) -> Result<Arc<FiniteField>> {
        if !is_prime(p) {
            return Err(RlabError::Algebra(format!("{p} is not prime")));
        }
        Ok(Arc::new(FiniteField {
            p,
            m: 1,
            modulus: vec![0, 1],
            size: p,
        }))
    }

    /// Extension field F_{p^m}. When `modulus` is None the lexicographically
    /// least monic irreducible of degree m is chosen, so that the field is
    /// reproducible across runs.
    pub fn new(p: u64, m: usize, modulus: Option<Vec<u64>>) -> Result<Arc<FiniteField>> {
        if !is_prime(p) {
            return Err(RlabError::Algebra(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(RlabError::Algebra("extension degree must be >= 1".into()));
        }
        if m == 1 {
            if let Some(md) = &modulus {
                if md.len() != 2 {
                    return Err(RlabError::Algebra("modulus degree must equal m".into()));
                }
            }
            return Self::prime(p);
        }
        let size = p
            .checked_pow(m as u32)
            .ok_or_else(|| RlabError::Algebra("field too large".into()))?;
        let md = match modulus {
            Some(md) => {
                if md.len() != m + 1 || md[m] != 1 || md.iter().any(|&c| c >= p) {
                    return Err(RlabError::Algebra(
                        "modulus must be monic of degree m with coefficients in F_p".into(),
                    ));
                }
                if !poly_irreducible(&md, p) {
                    return Err(RlabError::Algebra("modulus is reducible".into()));
                }
                md
            }
            None => least_irreducible(p, m),
        };
        Ok(Arc::new(FiniteField {
            p,
            m,
            modulus: md,
            size,
        }))
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> usize {
        self.m
    }
    pub fn size(&self) -> u64 {
        self.size
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> Fe {
        0
    }
    pub fn one(&self) -> Fe {
        1
    }
    /// The residue class of x (the chosen generator of the extension).
    /// For m = 1 this is 0 (x reduces to 0 mod x); use `from_int` instead.
    pub fn gen(&self) -> Fe {
        if self.m == 1 {
            0
        } else {
            self.p
        }
    }

    pub fn from_int(&self, n: i64) -> Fe {
        let r = n.rem_euclid(self.p as i64) as u64;
        r
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.m);
        let mut a = a;
        for _ in 0..self.m {
            v.push(a % self.p);
            a /= self.p;
        }
        v
    }

    pub fn from_coeffs(&self, c: &[u64]) -> Fe {
        let mut a = 0u64;
        for &ci in c.iter().rev() {
            a = a * self.p + ci % self.p;
        }
        a
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let c: Vec<u64> = ca
            .iter()
            .zip(&cb)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        self.from_coeffs(&c)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.m == 1 {
            return (self.p - a) % self.p;
        }
        let c: Vec<u64> = self.coeffs(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.from_coeffs(&c)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if self.m == 1 {
            return a * b % self.p;
        }
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let mut prod = vec![0u64; 2 * self.m - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce mod the modulus
        for i in (self.m..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..self.m {
                let t = c * self.modulus[j] % self.p;
                prod[i - self.m + j] = (prod[i - self.m + j] + self.p - t) % self.p;
            }
        }
        prod.truncate(self.m);
        self.from_coeffs(&prod)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a == 0 {
            return Err(RlabError::Algebra("division by zero".into()));
        }
        Ok(self.pow(a, self.size - 2))
    }

    /// Frobenius x -> x^p.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p)
    }

    /// x -> x^q for q = p^k (iterated Frobenius).
    pub fn frobenius_pow(&self, a: Fe, q: u64) -> Fe {
        self.pow(a, q)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        0..self.size
    }

    /// Absolute trace to F_p.
    pub fn trace(&self, a: Fe) -> Fe {
        let mut s = self.zero();
        let mut t = a;
        for _ in 0..self.m {
            s = self.add(s, t);
            t = self.frobenius(t);
        }
        s
    }
}

/// Irreducibility of a monic polynomial over F_p by trial division against
/// all monic polynomials of degree <= deg/2. Fields here are tiny, so this
/// is plenty.
fn poly_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    for d in 1..=n / 2 {
        // iterate monic polynomials of degree d
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut g = vec![0u64; d + 1];
            let mut t = idx;
            for c in g.iter_mut().take(d) {
                *c = t % p;
                t /= p;
            }
            g[d] = 1;
            if poly_divides(&g, f, p) {
                return false;
            }
        }
    }
    true
}

/// Does g divide f over F_p?
fn poly_divides(g: &[u64], f: &[u64], p: u64) -> bool {
    let mut r: Vec<u64> = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let shift = r.len() - 1 - dg;
            for j in 0..=dg {
                let t = lead * g[j] % p;
                r[shift + j] = (r[shift + j] + p - t) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

/// Lexicographically least monic irreducible of degree m over F_p, comparing
/// coefficient vectors (c_0, ..., c_{m-1}).
fn least_irreducible(p: u64, m: usize) -> Vec<u64> {
    let count = p.pow(m as u32);
    for idx in 0..count {
        let mut f = vec![0u64; m + 1];
        let mut t = idx;
        for c in f.iter_mut().take(m) {
            *c = t % p;
            t /= p;
        }
        f[m] = 1;
        if poly_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}
