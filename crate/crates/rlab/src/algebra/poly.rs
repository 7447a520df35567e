//! Polynomials in one variable over a finite field, plus rational functions.

use std::sync::Arc;

use crate::algebra::ff::{Fe, FiniteField};
use crate::error::{RlabError, Result};

/// Polynomial over a finite field. Coefficients little-endian in degree,
/// normalized so the leading coefficient is nonzero (zero polynomial has an
/// empty coefficient list).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    pub coeffs: Vec<Fe>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Poly {
        Poly { coeffs: vec![1] }
    }

    pub fn constant(c: Fe) -> Poly {
        Poly::new(vec![c])
    }

    /// The variable y.
    pub fn y() -> Poly {
        Poly { coeffs: vec![0, 1] }
    }

    /// 1 + y.
    pub fn one_plus_y() -> Poly {
        Poly { coeffs: vec![1, 1] }
    }

    pub fn monomial(c: Fe, deg: usize) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// y-adic valuation; None for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn add(&self, other: &Poly, f: &Arc<FiniteField>) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Poly::new(coeffs)
    }

    pub fn neg(&self, f: &Arc<FiniteField>) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly, f: &Arc<FiniteField>) -> Poly {
        self.add(&other.neg(f), f)
    }

    pub fn mul(&self, other: &Poly, f: &Arc<FiniteField>) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        Poly::new(coeffs)
    }

    pub fn scale(&self, c: Fe, f: &Arc<FiniteField>) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Division with remainder: self = q * div + r with deg r < deg div.
    pub fn divrem(&self, div: &Poly, f: &Arc<FiniteField>) -> Result<(Poly, Poly)> {
        if div.is_zero() {
            return Err(RlabError::Algebra("polynomial division by zero".into()));
        }
        let dd = div.degree().unwrap();
        let lead_inv = f.inv(div.coeffs[dd])?;
        let mut r = self.coeffs.clone();
        let mut q = vec![0; self.coeffs.len().saturating_sub(dd)];
        while r.len() > dd {
            let lead = *r.last().unwrap();
            if lead != 0 {
                let c = f.mul(lead, lead_inv);
                let shift = r.len() - 1 - dd;
                q[shift] = c;
                for j in 0..=dd {
                    let t = f.mul(c, div.coeffs[j]);
                    r[shift + j] = f.sub(r[shift + j], t);
                }
            }
            r.pop();
        }
        Ok((Poly::new(q), Poly::new(r)))
    }

    pub fn gcd(&self, other: &Poly, f: &Arc<FiniteField>) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b, f).expect("nonzero divisor");
            a = b;
            b = r;
        }
        // monic normalization
        if let Some(d) = a.degree() {
            let inv = f.inv(a.coeffs[d]).unwrap();
            a = a.scale(inv, f);
        }
        a
    }

    pub fn eval(&self, x: Fe, f: &Arc<FiniteField>) -> Fe {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// Apply a map to every coefficient (e.g. Frobenius).
    pub fn map_coeffs(&self, g: impl Fn(Fe) -> Fe) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| g(c)).collect())
    }

    pub fn pow(&self, mut e: u64, f: &Arc<FiniteField>) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }
}

/// Rational function num/den over a finite field, normalized: gcd(num, den) = 1
/// and den monic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly, f: &Arc<FiniteField>) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(RlabError::Algebra("rational function with zero denominator".into()));
        }
        let mut r = RatFunc { num, den };
        r.normalize(f);
        Ok(r)
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> RatFunc {
        RatFunc::from_poly(Poly::zero())
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(Poly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self, f: &Arc<FiniteField>) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        let g = self.num.gcd(&self.den, f);
        if g.degree() != Some(0) || g.coeffs[0] != 1 {
            self.num = self.num.divrem(&g, f).unwrap().0;
            self.den = self.den.divrem(&g, f).unwrap().0;
        }
        let lead = *self.den.coeffs.last().unwrap();
        if lead != 1 {
            let inv = f.inv(lead).unwrap();
            self.den = self.den.scale(inv, f);
            self.num = self.num.scale(inv, f);
        }
    }

    pub fn add(&self, o: &RatFunc, f: &Arc<FiniteField>) -> RatFunc {
        let num = self
            .num
            .mul(&o.den, f)
            .add(&o.num.mul(&self.den, f), f);
        let den = self.den.mul(&o.den, f);
        RatFunc::new(num, den, f).unwrap()
    }

    pub fn neg(&self, f: &Arc<FiniteField>) -> RatFunc {
        RatFunc {
            num: self.num.neg(f),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFunc, f: &Arc<FiniteField>) -> RatFunc {
        self.add(&o.neg(f), f)
    }

    pub fn mul(&self, o: &RatFunc, f: &Arc<FiniteField>) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num, f), self.den.mul(&o.den, f), f).unwrap()
    }

    pub fn inv(&self, f: &Arc<FiniteField>) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(RlabError::Algebra("inverse of zero".into()));
        }
        RatFunc::new(self.den.clone(), self.num.clone(), f)
    }

    /// y-adic valuation: val(num) - val(den). None for zero.
    pub fn valuation(&self) -> Option<i64> {
        let vn = self.num.valuation()? as i64;
        let vd = self.den.valuation().unwrap() as i64;
        Some(vn - vd)
    }

    pub fn map_coeffs(&self, g: impl Fn(Fe) -> Fe + Copy) -> RatFunc {
        RatFunc {
            num: self.num.map_coeffs(g),
            den: self.den.map_coeffs(g),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Arc<FiniteField> {
        FiniteField::prime(5).unwrap()
    }

    #[test]
    fn degree_of_product() {
        let f = f5();
        let a = Poly::new(vec![1, 2, 3]);
        let b = Poly::new(vec![4, 1]);
        assert_eq!(a.mul(&b, &f).degree(), Some(3));
    }

    #[test]
    fn divrem_contract() {
        let f = f5();
        let a = Poly::new(vec![1, 2, 3, 4]);
        let b = Poly::new(vec![2, 1]);
        let (q, r) = a.divrem(&b, &f).unwrap();
        let back = q.mul(&b, &f).add(&r, &f);
        assert_eq!(back, a);
        assert!(r.degree().map_or(true, |d| d < 1));
    }

    #[test]
    fn ratfunc_roundtrip() {
        let f = f5();
        let a = RatFunc::new(Poly::new(vec![0, 1]), Poly::new(vec![1, 1]), &f).unwrap();
        let ai = a.inv(&f).unwrap();
        assert_eq!(a.mul(&ai, &f), RatFunc::one());
        assert_eq!(a.valuation(), Some(1));
        assert_eq!(ai.valuation(), Some(-1));
    }
}
