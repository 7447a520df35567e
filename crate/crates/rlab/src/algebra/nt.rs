//! Number-theoretic helpers: Legendre symbol and square roots of -1.

use crate::algebra::ff::is_prime;
use crate::error::{RlabError, Result};

/// Legendre symbol (a/q) for odd prime q, via Euler's criterion.
pub fn legendre(a: i64, q: u64) -> Result<i64> {
    if q == 2 || !is_prime(q) {
        return Err(RlabError::InvalidInput(format!(
            "legendre symbol needs an odd prime modulus, got {q}"
        )));
    }
    let a = a.rem_euclid(q as i64) as u64;
    if a == 0 {
        return Ok(0);
    }
    let mut acc: u64 = 1;
    let mut base = a % q;
    let mut e = (q - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    Ok(if acc == 1 { 1 } else { -1 })
}

/// Least positive eps with eps^2 = -1 mod q; requires q = 1 mod 4.
pub fn sqrt_minus_one(q: u64) -> Result<u64> {
    if !is_prime(q) || q % 4 != 1 {
        return Err(RlabError::InvalidInput(format!(
            "need a prime q = 1 mod 4, got {q}"
        )));
    }
    for e in 1..q {
        if e * e % q == q - 1 {
            return Ok(e);
        }
    }
    unreachable!("-1 is a square mod q = 1 mod 4")
}
