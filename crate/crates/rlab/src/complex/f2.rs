//! Bit-packed matrices over F_2.

/// Row-major matrix over F_2, each row packed into u64 words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Matrix {
    pub rows: usize,
    pub cols: usize,
    words: usize,
    pub data: Vec<u64>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> F2Matrix {
        let words = cols.div_ceil(64).max(1);
        F2Matrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> F2Matrix {
        let mut m = F2Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.data[i * self.words + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (s, d) = (src * self.words, dst * self.words);
        for k in 0..self.words {
            self.data[d + k] ^= self.data[s + k];
        }
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut out = F2Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    out.set(j, i, true);
                }
            }
        }
        out
    }

    pub fn mul(&self, o: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, o.rows);
        let mut out = F2Matrix::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let (s, d) = (k * o.words, i * out.words);
                    for w in 0..o.words {
                        out.data[d + w] ^= o.data[s + w];
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn rank(&self) -> usize {
        self.clone().echelonize().0
    }

    /// In-place row echelon form; returns (rank, pivot column list).
    pub fn echelonize(mut self) -> (usize, Vec<usize>, F2Matrix) {
        let mut r = 0;
        let mut pivots = Vec::new();
        for c in 0..self.cols {
            let piv = (r..self.rows).find(|&i| self.get(i, c));
            let piv = match piv {
                Some(p) => p,
                None => continue,
            };
            if piv != r {
                for k in 0..self.words {
                    self.data.swap(r * self.words + k, piv * self.words + k);
                }
            }
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        (r, pivots, self)
    }

    /// Basis of the right kernel, one packed vector (length cols) per row of
    /// the returned matrix.
    pub fn kernel_basis(&self) -> F2Matrix {
        let (rank, pivots, ech) = self.clone().echelonize();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = F2Matrix::zero(free.len(), self.cols);
        for (bi, &fc) in free.iter().enumerate() {
            out.set(bi, fc, true);
            for (ri, &pc) in pivots.iter().enumerate().take(rank) {
                if ech.get(ri, fc) {
                    out.set(bi, pc, true);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_identity() {
        assert_eq!(F2Matrix::identity(70).rank(), 70);
    }

    #[test]
    fn kernel_annihilated() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let (r, c) = (rng.gen_range(1..10), rng.gen_range(1..10));
            let mut m = F2Matrix::zero(r, c);
            for i in 0..r {
                for j in 0..c {
                    m.set(i, j, rng.gen_bool(0.4));
                }
            }
            let k = m.kernel_basis();
            assert_eq!(k.rows + m.rank(), c);
            if k.rows > 0 {
                assert!(m.mul(&k.transpose()).is_zero());
            }
        }
    }

    #[test]
    fn mul_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rand_m = |rng: &mut ChaCha8Rng, r: usize, c: usize| {
            let mut m = F2Matrix::zero(r, c);
            for i in 0..r {
                for j in 0..c {
                    m.set(i, j, rng.gen_bool(0.5));
                }
            }
            m
        };
        for _ in 0..20 {
            let a = rand_m(&mut rng, 5, 7);
            let b = rand_m(&mut rng, 7, 4);
            let c = rand_m(&mut rng, 4, 6);
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }
}
