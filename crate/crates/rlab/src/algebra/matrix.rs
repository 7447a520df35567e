//! Dense matrices over a finite field, projective canonical forms, and
//! matrices with truncated-series entries.

use std::sync::Arc;

use crate::algebra::ff::{Fe, FiniteField};
use crate::algebra::series::Series;
use crate::error::{RlabError, Result};

/// Square matrix over a finite field, row-major packed elements.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FMatrix {
    pub n: usize,
    pub data: Vec<Fe>,
}

impl FMatrix {
    pub fn zero(n: usize) -> FMatrix {
        FMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> FMatrix {
        let mut m = FMatrix::zero(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> FMatrix {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n);
            data.extend_from_slice(r);
        }
        FMatrix { n, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, o: &FMatrix, f: &Arc<FiniteField>) -> FMatrix {
        let n = self.n;
        let mut out = FMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if b == 0 {
                        continue;
                    }
                    let v = f.add(out.get(i, j), f.mul(a, b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: Fe, f: &Arc<FiniteField>) -> FMatrix {
        FMatrix {
            n: self.n,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self, f: &Arc<FiniteField>) -> Fe {
        let n = self.n;
        let mut m = self.clone();
        let mut det = f.one();
        for col in 0..n {
            let piv = (col..n).find(|&r| m.get(r, col) != 0);
            let piv = match piv {
                Some(p) => p,
                None => return 0,
            };
            if piv != col {
                for j in 0..n {
                    let a = m.get(col, j);
                    let b = m.get(piv, j);
                    m.set(col, j, b);
                    m.set(piv, j, a);
                }
                det = f.neg(det);
            }
            let p = m.get(col, col);
            det = f.mul(det, p);
            let pinv = f.inv(p).unwrap();
            for r in col + 1..n {
                let factor = f.mul(m.get(r, col), pinv);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(col, j)));
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    pub fn inv(&self, f: &Arc<FiniteField>) -> Result<FMatrix> {
        let n = self.n;
        let mut m = self.clone();
        let mut out = FMatrix::identity(n);
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| m.get(r, col) != 0)
                .ok_or_else(|| RlabError::Singular("matrix not invertible".into()))?;
            if piv != col {
                for j in 0..n {
                    let (a, b) = (m.get(col, j), m.get(piv, j));
                    m.set(col, j, b);
                    m.set(piv, j, a);
                    let (a, b) = (out.get(col, j), out.get(piv, j));
                    out.set(col, j, b);
                    out.set(piv, j, a);
                }
            }
            let pinv = f.inv(m.get(col, col))?;
            for j in 0..n {
                m.set(col, j, f.mul(m.get(col, j), pinv));
                out.set(col, j, f.mul(out.get(col, j), pinv));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(col, j)));
                    m.set(r, j, v);
                    let v = f.sub(out.get(r, j), f.mul(factor, out.get(col, j)));
                    out.set(r, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> FMatrix {
        let n = self.n;
        let mut out = FMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }
}

/// Canonicalized projective matrix: the scalar multiple whose first nonzero
/// entry in row-major order is 1. Unique per projective class.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjMatrix(pub FMatrix);

/// Canonical projective form. Errors on singular input.
pub fn proj_canonical(m: &FMatrix, f: &Arc<FiniteField>) -> Result<ProjMatrix> {
    if m.det(f) == 0 {
        return Err(RlabError::Singular("projective class of singular matrix".into()));
    }
    let lead = m
        .data
        .iter()
        .copied()
        .find(|&c| c != 0)
        .expect("nonsingular matrix has a nonzero entry");
    let s = f.inv(lead)?;
    Ok(ProjMatrix(m.scale(s, f)))
}

impl ProjMatrix {
    pub fn mul(&self, o: &ProjMatrix, f: &Arc<FiniteField>) -> ProjMatrix {
        proj_canonical(&self.0.mul(&o.0, f), f).expect("product of invertibles")
    }

    pub fn inv(&self, f: &Arc<FiniteField>) -> ProjMatrix {
        proj_canonical(&self.0.inv(f).expect("invertible"), f).unwrap()
    }

    pub fn identity(n: usize) -> ProjMatrix {
        ProjMatrix(FMatrix::identity(n))
    }
}

/// Matrix with truncated-series entries (all over the same field).
#[derive(Clone, Debug)]
pub struct SeriesMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Series>,
}

impl SeriesMatrix {
    pub fn identity(n: usize, prec: usize) -> SeriesMatrix {
        let mut data = vec![Series::zero(prec); n * n];
        for i in 0..n {
            data[i * n + i] = Series::one(prec);
        }
        SeriesMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Series,
    ) -> SeriesMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        SeriesMatrix { rows, cols, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Series {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Series) {
        self.data[i * self.cols + j] = v;
    }

    pub fn min_prec(&self) -> usize {
        self.data.iter().map(|s| s.prec).min().unwrap_or(0)
    }

    pub fn mul(&self, o: &SeriesMatrix, f: &Arc<FiniteField>) -> SeriesMatrix {
        assert_eq!(self.cols, o.rows);
        let prec = self.min_prec().min(o.min_prec());
        SeriesMatrix::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = Series::zero(prec);
            for k in 0..self.cols {
                acc = acc.add(&self.get(i, k).mul(o.get(k, j), f), f);
            }
            acc
        })
    }

    pub fn add(&self, o: &SeriesMatrix, f: &Arc<FiniteField>) -> SeriesMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        SeriesMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(o.get(i, j), f))
    }

    pub fn sub(&self, o: &SeriesMatrix, f: &Arc<FiniteField>) -> SeriesMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        SeriesMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(o.get(i, j), f))
    }

    pub fn scale(&self, s: &Series, f: &Arc<FiniteField>) -> SeriesMatrix {
        SeriesMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mul(s, f))
    }

    pub fn is_apparently_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_apparently_zero())
    }

    /// Determinant by cofactor expansion; fine for the small dimensions used
    /// here (d <= 4).
    pub fn det(&self, f: &Arc<FiniteField>) -> Series {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 1 {
            return self.get(0, 0).clone();
        }
        let prec = self.min_prec();
        let mut acc = Series::zero(prec);
        for j in 0..n {
            let e = self.get(0, j);
            if e.is_apparently_zero() {
                continue;
            }
            let minor = SeriesMatrix::from_fn(n - 1, n - 1, |r, c| {
                self.get(r + 1, if c < j { c } else { c + 1 }).clone()
            });
            let term = e.mul(&minor.det(f), f);
            acc = if j % 2 == 0 {
                acc.add(&term, f)
            } else {
                acc.sub(&term, f)
            };
        }
        acc
    }

    /// Inverse by Gauss-Jordan; pivots must have valuation 0 after row
    /// swaps (the matrix must be invertible over the local ring).
    pub fn inv(&self, f: &Arc<FiniteField>) -> Result<SeriesMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut out = SeriesMatrix::identity(n, self.min_prec());
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| m.get(r, col).valuation() == Some(0))
                .ok_or_else(|| {
                    RlabError::Singular("series matrix not invertible over the local ring".into())
                })?;
            if piv != col {
                for j in 0..n {
                    m.data.swap(col * n + j, piv * n + j);
                    out.data.swap(col * n + j, piv * n + j);
                }
            }
            let pinv = m.get(col, col).inv(f)?;
            for j in 0..n {
                m.set(col, j, m.get(col, j).mul(&pinv, f));
                out.set(col, j, out.get(col, j).mul(&pinv, f));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_apparently_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = m.get(r, j).sub(&factor.mul(m.get(col, j), f), f);
                    m.set(r, j, v);
                    let v = out.get(r, j).sub(&factor.mul(out.get(col, j), f), f);
                    out.set(r, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: usize, f: &Arc<FiniteField>) -> SeriesMatrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = SeriesMatrix::identity(self.rows, self.min_prec());
        for _ in 0..e {
            acc = acc.mul(self, f);
        }
        acc
    }
}
