//! The simultaneous-spectrum region Sigma_d, trivial eigenvalue tuples, and
//! the Ramanujan-complex verdict on joint eigenvalue tuples.

use num_complex::Complex64;

use crate::error::{RlabError, Result};
use crate::spectra::eigs::poly_roots;

/// Number of codimension-k subspaces of F_q^d, exact.
pub fn gaussian_binomial(d: u32, k: u32, q: u64) -> Result<u128> {
    if k > d {
        return Err(RlabError::InvalidInput(format!(
            "gaussian binomial needs k <= d, got ({d}, {k})"
        )));
    }
    let q = q as u128;
    let ovf = || RlabError::Numerical("gaussian binomial exceeds 128 bits".into());
    let qpow = |e: u32| -> Result<u128> {
        let mut r: u128 = 1;
        for _ in 0..e {
            r = r.checked_mul(q).ok_or_else(ovf)?;
        }
        Ok(r)
    };
    let mut r: u128 = 1;
    // r stays integral at each step: the partial products are themselves
    // Gaussian binomials
    for j in 0..k {
        let num = qpow(d - j)?.checked_sub(1).ok_or_else(ovf)?;
        let den = qpow(j + 1)? - 1;
        r = r.checked_mul(num).ok_or_else(ovf)? / den;
    }
    Ok(r)
}

/// The d trivial eigenvalue tuples: ([d 1]_q xi, ..., [d d-1]_q xi^{d-1})
/// for each d-th root of unity xi.
pub fn trivial_tuples(d: u32, q: u64) -> Result<Vec<Vec<Complex64>>> {
    if d < 2 {
        return Err(RlabError::InvalidInput("need d >= 2".into()));
    }
    let mut out = Vec::with_capacity(d as usize);
    for j in 0..d {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / d as f64;
        let xi = Complex64::from_polar(1.0, theta);
        let tuple = (1..d)
            .map(|k| {
                let gb = gaussian_binomial(d, k, q)? as f64;
                Ok(xi.powu(k) * gb)
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(tuple);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaVerdict {
    pub inside: bool,
    /// Roots of the recovered symmetric-function polynomial; inside means
    /// all lie on the unit circle.
    pub roots: Vec<Complex64>,
}

/// Membership of a (d-1)-tuple in Sigma_d: recover the elementary symmetric
/// functions sigma_k = lambda_k * q^{-k(d-k)/2}, require the conjugate
/// symmetry lambda_k = conj(lambda_{d-k}), and test whether all roots of
/// z^d - sigma_1 z^{d-1} + ... +- 1 lie on the unit circle.
pub fn sigma_d_membership(
    tuple: &[Complex64],
    d: u32,
    q: u64,
    tol: f64,
) -> Result<SigmaVerdict> {
    if d < 2 || tuple.len() != d as usize - 1 {
        return Err(RlabError::InvalidInput(format!(
            "expected a (d-1)-tuple for d = {d}"
        )));
    }
    let scale = tuple.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for k in 1..d {
        let a = tuple[k as usize - 1];
        let b = tuple[(d - k) as usize - 1];
        if (a - b.conj()).norm() > tol * scale {
            return Err(RlabError::Verification(format!(
                "conjugate symmetry violated: lambda_{k} vs lambda_{}",
                d - k
            )));
        }
    }
    // monic polynomial sum (-1)^k sigma_k z^{d-k}, sigma_0 = sigma_d = 1;
    // symmetrize so it is exactly self-inversive
    let mut coeffs = vec![Complex64::new(0.0, 0.0); d as usize + 1];
    coeffs[d as usize] = Complex64::new(1.0, 0.0);
    for k in 1..d {
        let sk = tuple[k as usize - 1] * (q as f64).powf(-(k as f64) * (d - k) as f64 / 2.0);
        let sdk = tuple[(d - k) as usize - 1]
            * (q as f64).powf(-((d - k) as f64) * (k as f64) / 2.0);
        let sigma = (sk + sdk.conj()) * 0.5;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        coeffs[(d - k) as usize] = sigma * sign;
    }
    let sign_d = if d % 2 == 0 { 1.0 } else { -1.0 };
    coeffs[0] = Complex64::new(sign_d, 0.0);
    let roots = poly_roots(&coeffs)?;
    // for a self-inversive polynomial, all roots lie on the unit circle
    // exactly when all critical points lie in the closed unit disk; the
    // critical points are numerically stable where repeated circle roots
    // are not
    let dd = d as f64;
    let deriv: Vec<Complex64> = (1..=d as usize)
        .map(|j| coeffs[j] * (j as f64) / dd)
        .collect();
    let critical = poly_roots(&deriv)?;
    let inside = critical.iter().all(|z| z.norm() <= 1.0 + tol);
    Ok(SigmaVerdict { inside, roots })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TupleClass {
    Trivial,
    Inside,
    Outside,
}

#[derive(Clone, Debug)]
pub struct ComplexVerdict {
    pub ok: bool,
    pub classes: Vec<TupleClass>,
}

/// A list of joint eigenvalue tuples certifies a Ramanujan complex when every
/// tuple is either one of the d trivial tuples or lies in Sigma_d.
pub fn is_ramanujan_complex(
    tuples: &[Vec<Complex64>],
    d: u32,
    q: u64,
    tol: f64,
) -> Result<ComplexVerdict> {
    let trivial = trivial_tuples(d, q)?;
    let gb: Vec<f64> = (1..d)
        .map(|k| Ok(gaussian_binomial(d, k, q)? as f64))
        .collect::<Result<Vec<_>>>()?;
    let mut classes = Vec::with_capacity(tuples.len());
    for t in tuples {
        if t.len() != d as usize - 1 {
            return Err(RlabError::InvalidInput("tuple arity mismatch".into()));
        }
        let is_trivial = trivial.iter().any(|tt| {
            t.iter()
                .zip(tt)
                .zip(&gb)
                .all(|((a, b), &s)| (a - b).norm() <= tol * s)
        });
        let class = if is_trivial {
            TupleClass::Trivial
        } else {
            match sigma_d_membership(t, d, q, tol) {
                Ok(v) if v.inside => TupleClass::Inside,
                _ => TupleClass::Outside,
            }
        };
        classes.push(class);
    }
    Ok(ComplexVerdict {
        ok: classes.iter().all(|c| *c != TupleClass::Outside),
        classes,
    })
}
