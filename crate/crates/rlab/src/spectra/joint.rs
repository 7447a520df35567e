//! Joint spectra of the commuting operator family A_1, ..., A_{d-1} with
//! A_k^T = A_{d-k}: simultaneous diagonalization through a random symmetric
//! combination, with complex refinement inside degenerate eigenspaces.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{RlabError, Result};
use crate::spectra::eigs::sym_eigs_vectors;

type CVec = DVector<Complex64>;

/// One joint eigenvector's data: the eigenvalue tuple (lambda_1, ...,
/// lambda_{d-1}) and the worst residual ||A_k v - lambda_k v|| over k.
#[derive(Clone, Debug)]
pub struct JointPair {
    pub tuple: Vec<Complex64>,
    pub residual: f64,
}

fn op_scale(ops: &[DMatrix<f64>]) -> f64 {
    ops.iter()
        .flat_map(|m| m.iter())
        .fold(1.0f64, |a, &v| a.max(v.abs()))
}

/// Verify the family structure: pairwise commutation and A_k^T = A_{d-k}.
fn verify_family(ops: &[DMatrix<f64>]) -> Result<()> {
    let d1 = ops.len();
    let scale = op_scale(ops) * ops[0].nrows() as f64;
    for k in 0..d1 {
        let diff = ops[k].transpose() - &ops[d1 - 1 - k];
        if diff.iter().any(|&v| v.abs() > 1e-9 * scale) {
            return Err(RlabError::InvalidInput(format!(
                "transpose of operator {} is not operator {}",
                k + 1,
                d1 - k
            )));
        }
        for l in k + 1..d1 {
            let c = &ops[k] * &ops[l] - &ops[l] * &ops[k];
            if c.iter().any(|&v| v.abs() > 1e-9 * scale) {
                return Err(RlabError::InvalidInput(format!(
                    "operators {} and {} do not commute",
                    k + 1,
                    l + 1
                )));
            }
        }
    }
    Ok(())
}

/// Complex orthonormal vectors spanning the eigenspaces of i*K restricted to
/// the columns of q, where K = q^T S q is real skew-symmetric. Uses the real
/// 2m x 2m embedding [[0, -K], [K, 0]].
fn refine_cluster(q: &DMatrix<f64>, skew: &DMatrix<f64>) -> Result<Vec<CVec>> {
    let m = q.ncols();
    let k = q.transpose() * skew * q;
    let mut emb = DMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            emb[(i, m + j)] = -k[(i, j)];
            emb[(m + i, j)] = k[(i, j)];
        }
    }
    let (_vals, vecs) = sym_eigs_vectors(&emb)?;
    // each real eigenvector (a; b) gives the complex vector a + i b; the
    // doubling produces pairs, so Gram-Schmidt over C keeps m of them
    let mut picked: Vec<CVec> = Vec::new();
    for c in 0..2 * m {
        if picked.len() == m {
            break;
        }
        let col = vecs.column(c);
        let mut w: CVec = DVector::from_fn(m, |i, _| Complex64::new(col[i], col[m + i]));
        for u in &picked {
            let proj = u.dotc(&w);
            w -= u * proj;
        }
        if w.norm() > 1e-6 {
            let nw = w.norm();
            w /= Complex64::new(nw, 0.0);
            picked.push(w);
        }
    }
    if picked.len() != m {
        return Err(RlabError::Numerical(
            "cluster refinement lost dimensions".into(),
        ));
    }
    // lift back to the ambient space
    let qc = q.map(|v| Complex64::new(v, 0.0));
    Ok(picked.into_iter().map(|w| &qc * w).collect())
}

/// Simultaneously diagonalize the family and return one eigen-tuple per
/// basis vector, sorted by the tuple (re, im) lexicographically. Residuals
/// are verified against 1e-8 * (1 + max|A|); on failure the random
/// combination is redrawn, at most 5 times.
pub fn joint_spectrum(ops: &[DMatrix<f64>], seed: u64) -> Result<Vec<JointPair>> {
    if ops.is_empty() {
        return Err(RlabError::InvalidInput("empty operator family".into()));
    }
    let n = ops[0].nrows();
    verify_family(ops)?;
    let scale = op_scale(ops);
    let tol = 1e-8 * (1.0 + scale) * (n as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ops_c: Vec<DMatrix<Complex64>> = ops
        .iter()
        .map(|m| m.map(|v| Complex64::new(v, 0.0)))
        .collect();
    let mut last_err = None;
    for _attempt in 0..5 {
        let t: Vec<f64> = (0..ops.len()).map(|_| rng.gen_range(0.25..1.0)).collect();
        let t2: Vec<f64> = (0..ops.len()).map(|_| rng.gen_range(0.25..1.0)).collect();
        let mut sym = DMatrix::zeros(n, n);
        let mut skew = DMatrix::zeros(n, n);
        for (k, a) in ops.iter().enumerate() {
            let at = a.transpose();
            sym += (a + &at) * t[k];
            skew += (a - &at) * t2[k];
        }
        let (vals, vecs) = sym_eigs_vectors(&sym)?;
        // cluster by gaps in the symmetric combination's spectrum
        let cluster_tol = 1e-7 * (1.0 + scale);
        let mut vectors: Vec<CVec> = Vec::with_capacity(n);
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && (vals[end] - vals[end - 1]).abs() <= cluster_tol {
                end += 1;
            }
            if end - start == 1 {
                let col = vecs.column(start);
                vectors.push(DVector::from_fn(n, |i, _| Complex64::new(col[i], 0.0)));
            } else {
                let q = vecs.columns(start, end - start).into_owned();
                vectors.extend(refine_cluster(&q, &skew)?);
            }
            start = end;
        }
        // eigen-tuples and residuals
        let mut pairs = Vec::with_capacity(n);
        let mut worst: f64 = 0.0;
        for v in &vectors {
            let mut tuple = Vec::with_capacity(ops.len());
            let mut res: f64 = 0.0;
            for a in &ops_c {
                let av = a * v;
                let lambda = v.dotc(&av);
                res = res.max((&av - v * lambda).norm());
                tuple.push(lambda);
            }
            worst = worst.max(res);
            pairs.push(JointPair {
                tuple,
                residual: res,
            });
        }
        if worst <= tol {
            pairs.sort_by(|a, b| {
                for (x, y) in a.tuple.iter().zip(&b.tuple) {
                    let c = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
                    if c != std::cmp::Ordering::Equal {
                        return c;
                    }
                }
                std::cmp::Ordering::Equal
            });
            return Ok(pairs);
        }
        last_err = Some(RlabError::Numerical(format!(
            "joint residual {worst} exceeds {tol}"
        )));
    }
    Err(last_err.unwrap())
}
