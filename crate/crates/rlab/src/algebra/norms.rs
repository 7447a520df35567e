//! Norm equations for the splitting maps: a series solution of
//! N(w) = 1 + y over F_{q^d}[[y]], and a finite analogue inside the tensor
//! ring F_{q^d} (x) F_{q^e}.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::algebra::ff::{Fe, FiniteField};
use crate::algebra::series::Series;
use crate::error::{RlabError, Result};

/// phi-twisted norm of a series over F_{q^d}: w * phi(w) * ... * phi^{d-1}(w),
/// with phi the Frobenius x -> x^q applied coefficientwise.
pub fn series_norm(w: &Series, f: &Arc<FiniteField>) -> Series {
    let d = f.degree();
    let mut acc = Series::one(w.prec);
    let mut t = w.clone();
    for _ in 0..d {
        acc = acc.mul(&t, f);
        t = t.map_coeffs(|c| f.frobenius(c));
    }
    acc
}

/// Solve N(w) = 1 + y to precision `prec` over F_{q^d}, w with constant term
/// 1, by lifting one coefficient at a time: the y^t correction c must satisfy
/// Tr(c) = r_t, and the trace onto F_q is surjective.
pub fn norm_equation_series(f: &Arc<FiniteField>, prec: usize) -> Result<Series> {
    if prec == 0 {
        return Err(RlabError::InvalidInput("precision must be >= 1".into()));
    }
    // fixed element of nonzero trace, scaled per step
    let c0 = f
        .elements()
        .find(|&a| f.trace(a) != 0)
        .expect("trace is surjective");
    let tr0_inv = f.inv(f.trace(c0))?;
    let target = {
        let mut t = Series::one(prec);
        if prec > 1 {
            t.coeffs[1] = 1;
        }
        t
    };
    let mut w = Series::one(prec);
    for t in 1..prec {
        let n = series_norm(&w, f);
        let r = f.sub(target.coeffs[t], n.coeffs[t]);
        if r == 0 {
            continue;
        }
        let c = f.mul(c0, f.mul(r, tr0_inv));
        w.coeffs[t] = f.add(w.coeffs[t], c);
    }
    let check = series_norm(&w, f);
    if check != target {
        return Err(RlabError::Verification(
            "norm equation lift failed self-check".into(),
        ));
    }
    Ok(w)
}

/// F_{q^d} (x)_{F_q} F_{q^e}: residues of degree < d over the base field
/// F_{q^e}, modulo the minimal polynomial m(x) of the generator of F_{q^d}.
/// Carries the ring endomorphism phi_hat: x -> x^q (identity on the base).
#[derive(Clone, Debug)]
pub struct TensorRing {
    pub base: Arc<FiniteField>,
    pub d: usize,
    pub q: u64,
    /// m(x), little-endian, coefficients in the prime field (embedded in
    /// `base` as constants).
    pub m_poly: Vec<u64>,
    /// (x^q)^i mod m for i < d, each a residue over `base`.
    xq_pows: Vec<Vec<Fe>>,
}

/// Element: coefficient vector of length d over the base field.
pub type TensorElt = Vec<Fe>;

impl TensorRing {
    /// `f_qd` supplies the structure polynomial; its characteristic must
    /// match the base field's.
    pub fn new(base: Arc<FiniteField>, f_qd: &Arc<FiniteField>) -> Result<TensorRing> {
        let q = f_qd.characteristic();
        if base.characteristic() != q {
            return Err(RlabError::InvalidInput(
                "tensor factors must share a characteristic".into(),
            ));
        }
        let d = f_qd.degree();
        let m_poly = f_qd.modulus().to_vec();
        let mut ring = TensorRing {
            base,
            d,
            q,
            m_poly,
            xq_pows: Vec::new(),
        };
        // x^q mod m, then its powers
        let mut x = vec![0; d];
        if d == 1 {
            // m(x) = x - c? for m = 1 the modulus is x itself; x reduces to 0
        } else {
            x[1] = 1;
        }
        let mut xq = ring.one();
        for _ in 0..q {
            xq = ring.mul(&xq, &x);
        }
        let mut pows = Vec::with_capacity(d);
        let mut acc = ring.one();
        for _ in 0..d {
            pows.push(acc.clone());
            acc = ring.mul(&acc, &xq);
        }
        ring.xq_pows = pows;
        // phi_hat must be well defined: m(x^q) = 0 in the ring
        let mut mx = ring.zero();
        for (i, &c) in ring.m_poly.clone().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut term = ring.one();
            for _ in 0..i {
                term = ring.mul(&term, &xq);
            }
            term = ring.scale(&term, c);
            mx = ring.add(&mx, &term);
        }
        if mx != ring.zero() {
            return Err(RlabError::Algebra(
                "structure polynomial does not vanish at x^q".into(),
            ));
        }
        Ok(ring)
    }

    pub fn zero(&self) -> TensorElt {
        vec![0; self.d]
    }

    pub fn one(&self) -> TensorElt {
        let mut e = self.zero();
        e[0] = 1;
        e
    }

    pub fn scalar(&self, c: Fe) -> TensorElt {
        let mut e = self.zero();
        e[0] = c;
        e
    }

    pub fn add(&self, a: &TensorElt, b: &TensorElt) -> TensorElt {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.base.add(x, y))
            .collect()
    }

    pub fn scale(&self, a: &TensorElt, c: Fe) -> TensorElt {
        a.iter().map(|&x| self.base.mul(x, c)).collect()
    }

    pub fn mul(&self, a: &TensorElt, b: &TensorElt) -> TensorElt {
        let d = self.d;
        let f = &self.base;
        let mut prod = vec![0; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        // reduce by the monic m(x); its coefficients are prime-field constants
        for i in (d..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..d {
                let t = f.mul(c, self.m_poly[j]);
                prod[i - d + j] = f.sub(prod[i - d + j], t);
            }
        }
        prod.truncate(d);
        prod
    }

    /// phi_hat: x -> x^q, identity on base-field coefficients.
    pub fn phi_hat(&self, a: &TensorElt) -> TensorElt {
        let mut out = self.zero();
        for (i, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            out = self.add(&out, &self.scale(&self.xq_pows[i], c));
        }
        out
    }

    /// w * phi_hat(w) * ... * phi_hat^{d-1}(w).
    pub fn norm(&self, w: &TensorElt) -> TensorElt {
        let mut acc = self.one();
        let mut t = w.clone();
        for _ in 0..self.d {
            acc = self.mul(&acc, &t);
            t = self.phi_hat(&t);
        }
        acc
    }

    fn elt_from_index(&self, mut idx: u64) -> TensorElt {
        let s = self.base.size();
        (0..self.d)
            .map(|_| {
                let c = idx % s;
                idx /= s;
                c
            })
            .collect()
    }
}

/// Solve norm(w) = target in the tensor ring. Exhaustive lexicographic search
/// for rings of at most 2^20 elements, seeded random sampling beyond that.
pub fn norm_equation_finite(ring: &TensorRing, target: Fe, seed: u64) -> Result<TensorElt> {
    if target == 0 {
        return Err(RlabError::InvalidInput(
            "norm equation target must be nonzero".into(),
        ));
    }
    let goal = ring.scalar(target);
    let total = (ring.base.size() as u128).pow(ring.d as u32);
    if total <= 1 << 20 {
        for idx in 0..total as u64 {
            let w = ring.elt_from_index(idx);
            if ring.norm(&w) == goal {
                return Ok(w);
            }
        }
        return Err(RlabError::Verification(
            "norm equation has no solution in the tensor ring".into(),
        ));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    const RETRY_CAP: usize = 1 << 22;
    for _ in 0..RETRY_CAP {
        let w: TensorElt = (0..ring.d)
            .map(|_| rng.gen_range(0..ring.base.size()))
            .collect();
        if ring.norm(&w) == goal {
            return Ok(w);
        }
    }
    Err(RlabError::CapExceeded(format!(
        "norm equation sampling gave up after {RETRY_CAP} tries"
    )))
}
