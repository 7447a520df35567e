//! Elementary-divisor valuations and lattice canonical forms over the local
//! ring F_q[[y]], computed on truncated-series matrices.

use std::sync::Arc;

use crate::algebra::ff::FiniteField;
use crate::algebra::matrix::SeriesMatrix;
use crate::algebra::series::Series;
use crate::error::{RlabError, Result};

/// y-adic valuations of the elementary divisors (Smith normal form over
/// F_q[[y]]), ascending. The matrix must be invertible over the fraction
/// field and carry enough precision to determine every pivot.
pub fn smith_valuations(m: &SeriesMatrix, f: &Arc<FiniteField>) -> Result<Vec<usize>> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut w = m.clone();
    let mut vals = Vec::with_capacity(n);
    for k in 0..n {
        // minimum-valuation pivot, ties broken by (row, col)
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                if let Some(v) = w.get(i, j).valuation() {
                    if best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (pv, pi, pj) = best.ok_or_else(|| {
            RlabError::InsufficientPrecision(
                "no visible pivot in Smith reduction (singular matrix or precision too low)"
                    .into(),
            )
        })?;
        if pv + 1 >= w.get(pi, pj).prec {
            return Err(RlabError::InsufficientPrecision(
                "pivot valuation exhausts the precision window".into(),
            ));
        }
        // swap pivot into (k, k)
        if pi != k {
            for j in 0..n {
                w.data.swap(k * n + j, pi * n + j);
            }
        }
        if pj != k {
            for i in 0..n {
                w.data.swap(i * n + k, i * n + pj);
            }
        }
        let pivot = w.get(k, k).clone();
        // clear column k below
        for r in k + 1..n {
            let e = w.get(r, k).clone();
            if e.is_apparently_zero() {
                continue;
            }
            let factor = e.div(&pivot, f)?;
            for j in k..n {
                let v = w.get(r, j).sub(&factor.mul(w.get(k, j), f), f);
                w.set(r, j, v);
            }
        }
        // clear row k to the right (column k now has its pivot only)
        for c in k + 1..n {
            let e = w.get(k, c).clone();
            if e.is_apparently_zero() {
                continue;
            }
            let factor = e.div(&pivot, f)?;
            for i in k..n {
                let v = w.get(i, c).sub(&factor.mul(w.get(i, k), f), f);
                w.set(i, c, v);
            }
        }
        vals.push(pv);
    }
    vals.sort_unstable();
    Ok(vals)
}

/// Hermite-style canonical form of an O-lattice given by the column span of
/// a series matrix: lower triangular with diagonal y^{a_i} and the entries
/// below the diagonal reduced modulo the diagonal power of their row.
/// Unique per lattice.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LatticeHnf {
    /// Diagonal exponents a_0..a_{d-1}.
    pub diag: Vec<usize>,
    /// Row-major d x d entry table: coefficient vectors of the polynomial
    /// entries (diagonal entries stored as the pure power they are).
    pub entries: Vec<Vec<u64>>,
}

impl LatticeHnf {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn det_valuation(&self) -> usize {
        self.diag.iter().sum()
    }

    /// Canonical key for the lattice *class* (lattice up to y-power scaling):
    /// strip y^m everywhere, m the largest power with L contained in y^m O^d.
    pub fn class_key(&self) -> LatticeClassKey {
        let mut m = *self.diag.iter().min().unwrap();
        for e in &self.entries {
            if let Some(v) = e.iter().position(|&c| c != 0) {
                m = m.min(v);
            }
        }
        LatticeClassKey {
            diag: self.diag.iter().map(|&a| a - m).collect(),
            entries: self
                .entries
                .iter()
                .map(|e| e[m.min(e.len())..].to_vec())
                .collect(),
        }
    }

    /// Back to a series matrix (a representative of the lattice).
    pub fn to_series_matrix(&self, prec: usize) -> SeriesMatrix {
        let d = self.dim();
        SeriesMatrix::from_fn(d, d, |i, j| {
            let mut s = Series::zero(prec);
            for (t, &c) in self.entries[i * d + j].iter().enumerate() {
                if t < prec {
                    s.coeffs[t] = c;
                }
            }
            s
        })
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LatticeClassKey {
    pub diag: Vec<usize>,
    pub entries: Vec<Vec<u64>>,
}

/// Compute the lattice canonical form from a d x c matrix (c >= d) whose
/// columns span the lattice. Precision must exceed the determinant valuation
/// by at least 2.
pub fn lattice_hnf(m: &SeriesMatrix, f: &Arc<FiniteField>) -> Result<LatticeHnf> {
    let d = m.rows;
    let c = m.cols;
    assert!(c >= d);
    let mut w = m.clone();
    let mut diag = vec![0usize; d];
    for i in 0..d {
        // pivot: min-valuation entry in row i among columns >= i
        let mut best: Option<(usize, usize)> = None;
        for j in i..c {
            if let Some(v) = w.get(i, j).valuation() {
                if best.map_or(true, |(bv, _)| v < bv) {
                    best = Some((v, j));
                }
            }
        }
        let (pv, pj) = best.ok_or_else(|| {
            RlabError::InsufficientPrecision(
                "no visible pivot in lattice reduction (rank deficiency or precision too low)"
                    .into(),
            )
        })?;
        if pv + 2 > w.min_prec() {
            return Err(RlabError::InsufficientPrecision(
                "pivot valuation exhausts the precision window".into(),
            ));
        }
        if pj != i {
            for r in 0..d {
                w.data.swap(r * c + i, r * c + pj);
            }
        }
        let pivot = w.get(i, i).clone();
        // clear row i to the right
        for j in i + 1..c {
            let e = w.get(i, j).clone();
            if e.is_apparently_zero() {
                continue;
            }
            let factor = e.div(&pivot, f)?;
            for r in 0..d {
                let v = w.get(r, j).sub(&factor.mul(w.get(r, i), f), f);
                w.set(r, j, v);
            }
        }
        // normalize the pivot column by the unit so (i,i) becomes y^{a_i}
        let unit = pivot.shift_down(pv)?;
        let uinv = unit.inv(f)?;
        for r in 0..d {
            let v = w.get(r, i).mul(&uinv, f);
            w.set(r, i, v);
        }
        diag[i] = pv;
    }
    // reduce below-diagonal entries (r, c0) modulo y^{a_r}
    for r in 0..d {
        let ar = diag[r];
        for c0 in 0..r {
            let e = w.get(r, c0).clone();
            // high part of e beyond y^{a_r}
            let mut high = Series::zero(e.prec.saturating_sub(ar));
            for t in ar..e.coeffs.len() {
                if t - ar < high.prec {
                    high.coeffs[t - ar] = e.coeffs[t];
                }
            }
            if high.is_apparently_zero() {
                continue;
            }
            for rr in 0..d {
                let v = w.get(rr, c0).sub(&high.mul(w.get(rr, r), f), f);
                w.set(rr, c0, v);
            }
        }
    }
    // extract exact polynomial entries
    let mut entries = vec![Vec::new(); d * d];
    for r in 0..d {
        for c0 in 0..d {
            let e = w.get(r, c0);
            let mut coeffs: Vec<u64> = if r == c0 {
                let mut v = vec![0; diag[r] + 1];
                v[diag[r]] = 1;
                v
            } else if c0 < r {
                e.coeffs[..diag[r].min(e.prec)].to_vec()
            } else {
                // above the diagonal: must be zero
                debug_assert!(e.is_apparently_zero());
                Vec::new()
            };
            while coeffs.last() == Some(&0) {
                coeffs.pop();
            }
            entries[r * d + c0] = coeffs;
        }
    }
    Ok(LatticeHnf { diag, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn smat(rows: &[&[Poly]], prec: usize) -> SeriesMatrix {
        SeriesMatrix::from_fn(rows.len(), rows[0].len(), |i, j| {
            Series::from_poly(&rows[i][j], prec)
        })
    }

    #[test]
    fn smith_identity() {
        let f = FiniteField::prime(3).unwrap();
        let m = SeriesMatrix::identity(3, 6);
        assert_eq!(smith_valuations(&m, &f).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn smith_diag() {
        let f = FiniteField::prime(3).unwrap();
        let m = smat(&[&[Poly::one(), Poly::zero()], &[Poly::zero(), Poly::y()]], 6);
        assert_eq!(smith_valuations(&m, &f).unwrap(), vec![0, 1]);
    }

    #[test]
    fn smith_upper_triangular_example() {
        // [[y, 1], [0, y]]: det = y^2, gcd of entries 1 -> (0, 2)
        let f = FiniteField::prime(3).unwrap();
        let m = smat(&[&[Poly::y(), Poly::one()], &[Poly::zero(), Poly::y()]], 8);
        assert_eq!(smith_valuations(&m, &f).unwrap(), vec![0, 2]);
    }

    #[test]
    fn smith_unimodular_invariance() {
        let f = FiniteField::prime(3).unwrap();
        let prec = 12;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            // random matrix with entries of small valuation
            let m = SeriesMatrix::from_fn(3, 3, |_, _| {
                let p = Poly::new((0..4).map(|_| rng.gen_range(0..3)).collect());
                Series::from_poly(&p, prec)
            });
            let base = match smith_valuations(&m, &f) {
                Ok(v) => v,
                Err(_) => continue, // singular sample
            };
            // random unimodular (unit lower-triangular times unit upper-triangular)
            let lo = SeriesMatrix::from_fn(3, 3, |i, j| {
                if i == j {
                    Series::one(prec)
                } else if i > j {
                    Series::constant(rng.gen_range(0..3), prec)
                } else {
                    Series::zero(prec)
                }
            });
            let up = SeriesMatrix::from_fn(3, 3, |i, j| {
                if i == j {
                    Series::one(prec)
                } else if i < j {
                    Series::constant(rng.gen_range(0..3), prec)
                } else {
                    Series::zero(prec)
                }
            });
            let m2 = lo.mul(&m.mul(&up, &f), &f);
            assert_eq!(smith_valuations(&m2, &f).unwrap(), base);
        }
    }

    #[test]
    fn hnf_idempotent_and_unimodular_invariant() {
        let f = FiniteField::prime(2).unwrap();
        let prec = 16;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let m = SeriesMatrix::from_fn(3, 3, |_, _| {
                let p = Poly::new((0..4).map(|_| rng.gen_range(0..2)).collect());
                Series::from_poly(&p, prec)
            });
            let h = match lattice_hnf(&m, &f) {
                Ok(h) => h,
                Err(_) => continue,
            };
            // canonical form of the canonical form is itself
            let h2 = lattice_hnf(&h.to_series_matrix(prec), &f).unwrap();
            assert_eq!(h, h2);
            // right-multiplying by a unimodular matrix preserves the class
            let u = SeriesMatrix::from_fn(3, 3, |i, j| {
                if i == j {
                    Series::one(prec)
                } else if i < j {
                    Series::constant(rng.gen_range(0..2), prec)
                } else {
                    Series::from_poly(&Poly::new(vec![0, rng.gen_range(0..2)]), prec)
                }
            });
            let h3 = lattice_hnf(&m.mul(&u, &f), &f).unwrap();
            assert_eq!(h.class_key(), h3.class_key());
        }
    }

    #[test]
    fn class_key_ignores_scaling() {
        let f = FiniteField::prime(2).unwrap();
        let prec = 16;
        let m = smat(
            &[
                &[Poly::one(), Poly::y()],
                &[Poly::new(vec![1, 1]), Poly::new(vec![0, 0, 1])],
            ],
            prec,
        );
        let scaled = m.scale(&Series::from_poly(&Poly::y(), prec), &f);
        let h1 = lattice_hnf(&m, &f).unwrap();
        let h2 = lattice_hnf(&scaled, &f).unwrap();
        assert_ne!(h1, h2);
        assert_eq!(h1.class_key(), h2.class_key());
    }
}
