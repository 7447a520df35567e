//! Truncated power series F_q[[y]] mod y^M.

use std::sync::Arc;

use crate::algebra::ff::{Fe, FiniteField};
use crate::algebra::poly::{Poly, RatFunc};
use crate::error::{RlabError, Result};

/// Power series known modulo y^prec. Coefficient list has length exactly
/// `prec`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    pub coeffs: Vec<Fe>,
    pub prec: usize,
}

impl Series {
    pub fn zero(prec: usize) -> Series {
        Series {
            coeffs: vec![0; prec],
            prec,
        }
    }

    pub fn one(prec: usize) -> Series {
        let mut s = Series::zero(prec);
        if prec > 0 {
            s.coeffs[0] = 1;
        }
        s
    }

    pub fn from_poly(p: &Poly, prec: usize) -> Series {
        let mut coeffs = vec![0; prec];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = p.coeff(i);
        }
        Series { coeffs, prec }
    }

    pub fn constant(c: Fe, prec: usize) -> Series {
        let mut s = Series::zero(prec);
        if prec > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// First index with nonzero coefficient, or None when the series is zero
    /// at this precision (valuation >= prec).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn is_apparently_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn truncate(&self, prec: usize) -> Series {
        let p = prec.min(self.prec);
        Series {
            coeffs: self.coeffs[..p].to_vec(),
            prec: p,
        }
    }

    pub fn add(&self, o: &Series, f: &Arc<FiniteField>) -> Series {
        let prec = self.prec.min(o.prec);
        let coeffs = (0..prec)
            .map(|i| f.add(self.coeffs[i], o.coeffs[i]))
            .collect();
        Series { coeffs, prec }
    }

    pub fn neg(&self, f: &Arc<FiniteField>) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Series, f: &Arc<FiniteField>) -> Series {
        self.add(&o.neg(f), f)
    }

    pub fn mul(&self, o: &Series, f: &Arc<FiniteField>) -> Series {
        let prec = self.prec.min(o.prec);
        let mut coeffs = vec![0; prec];
        for i in 0..prec.min(self.coeffs.len()) {
            let a = self.coeffs[i];
            if a == 0 {
                continue;
            }
            for j in 0..(prec - i).min(o.coeffs.len()) {
                let b = o.coeffs[j];
                if b == 0 {
                    continue;
                }
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        Series { coeffs, prec }
    }

    pub fn scale(&self, c: Fe, f: &Arc<FiniteField>) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
            prec: self.prec,
        }
    }

    /// Multiply by y^k (drops precision by nothing; coefficients shift up,
    /// the window stays 0..prec).
    pub fn shift_up(&self, k: usize) -> Series {
        let mut coeffs = vec![0; self.prec];
        for i in 0..self.prec.saturating_sub(k) {
            coeffs[i + k] = self.coeffs[i];
        }
        Series {
            coeffs,
            prec: self.prec,
        }
    }

    /// Exact division by y^k; requires valuation >= k (as far as visible).
    /// The result is known only mod y^{prec-k}.
    pub fn shift_down(&self, k: usize) -> Result<Series> {
        if self.coeffs[..k.min(self.prec)].iter().any(|&c| c != 0) {
            return Err(RlabError::Algebra("series not divisible by y^k".into()));
        }
        if k > self.prec {
            return Err(RlabError::InsufficientPrecision(
                "shift below known window".into(),
            ));
        }
        Ok(Series {
            coeffs: self.coeffs[k..].to_vec(),
            prec: self.prec - k,
        })
    }

    /// Inverse; requires valuation 0.
    pub fn inv(&self, f: &Arc<FiniteField>) -> Result<Series> {
        if self.prec == 0 || self.coeffs[0] == 0 {
            return Err(RlabError::Algebra(
                "series inverse requires valuation 0".into(),
            ));
        }
        let c0inv = f.inv(self.coeffs[0])?;
        let mut out = vec![0; self.prec];
        out[0] = c0inv;
        for n in 1..self.prec {
            // coefficient n of self*out must vanish
            let mut acc = 0;
            for k in 1..=n.min(self.coeffs.len() - 1) {
                acc = f.add(acc, f.mul(self.coeffs[k], out[n - k]));
            }
            out[n] = f.neg(f.mul(acc, c0inv));
        }
        Ok(Series {
            coeffs: out,
            prec: self.prec,
        })
    }

    /// Quotient self/o where val(o) <= val(self); result precision shrinks by
    /// val(o).
    pub fn div(&self, o: &Series, f: &Arc<FiniteField>) -> Result<Series> {
        let vo = o.valuation().ok_or_else(|| {
            RlabError::InsufficientPrecision("division by apparently-zero series".into())
        })?;
        let num = self.shift_down(vo)?;
        let den = o.shift_down(vo)?;
        Ok(num.truncate(den.prec).mul(&den.inv(f)?, f))
    }

    /// Evaluate a rational function as a series; the denominator must have
    /// y-adic valuation 0.
    pub fn from_ratfunc(r: &RatFunc, prec: usize, f: &Arc<FiniteField>) -> Result<Series> {
        let num = Series::from_poly(&r.num, prec);
        let den = Series::from_poly(&r.den, prec);
        if den.prec > 0 && den.coeffs[0] == 0 {
            return Err(RlabError::Algebra(
                "rational function is not y-integral".into(),
            ));
        }
        Ok(num.mul(&den.inv(f)?, f))
    }

    pub fn map_coeffs(&self, g: impl Fn(Fe) -> Fe) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|&c| g(c)).collect(),
            prec: self.prec,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_one_plus_y() {
        let f = FiniteField::prime(5).unwrap();
        let s = Series::from_poly(&Poly::one_plus_y(), 6);
        let inv = s.inv(&f).unwrap();
        assert_eq!(s.mul(&inv, &f), Series::one(6));
        // alternating signs
        assert_eq!(inv.coeffs, vec![1, 4, 1, 4, 1, 4]);
    }

    #[test]
    fn valuation_multiplicative() {
        let f = FiniteField::prime(3).unwrap();
        let a = Series::from_poly(&Poly::new(vec![0, 2, 1]), 8);
        let b = Series::from_poly(&Poly::new(vec![0, 0, 1, 1]), 8);
        let ab = a.mul(&b, &f);
        assert_eq!(
            ab.valuation().unwrap(),
            a.valuation().unwrap() + b.valuation().unwrap()
        );
    }

    #[test]
    fn precision_is_min() {
        let f = FiniteField::prime(3).unwrap();
        let a = Series::one(5);
        let b = Series::one(9);
        assert_eq!(a.mul(&b, &f).prec, 5);
    }
}
