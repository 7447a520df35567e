//! Spectral gaps of the simplicial Laplacians restricted to cycle spaces.

use nalgebra::DMatrix;

use crate::complex::{boundary_real, laplacian, LapVariant, SimplicialComplex};
use crate::error::{RlabError, Result};
use crate::spectra::eigs::sym_eigs;

/// Orthonormal basis of the kernel of a matrix (columns), from the
/// eigendecomposition of M^T M.
pub fn kernel_basis_real(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.ncols();
    if m.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let gram = m.transpose() * m;
    let (vals, vecs) = crate::spectra::eigs::sym_eigs_vectors(&gram).expect("gram is symmetric");
    let scale = vals.iter().fold(1.0f64, |a, &v| a.max(v.abs()));
    let null_cols: Vec<usize> = (0..n).filter(|&i| vals[i] <= 1e-9 * scale).collect();
    let mut out = DMatrix::zeros(n, null_cols.len());
    for (c, &i) in null_cols.iter().enumerate() {
        out.set_column(c, &vecs.column(i));
    }
    out
}

/// lambda_i(X): the least eigenvalue of Delta_i restricted to
/// Z_i = ker(boundary_i). The down part vanishes there, so the up Laplacian
/// is restricted to an orthonormal kernel basis.
pub fn spectral_gap(x: &SimplicialComplex, i: usize) -> Result<f64> {
    let b = boundary_real(x, i as isize)?;
    let q = kernel_basis_real(&b);
    if q.ncols() == 0 {
        return Err(RlabError::InvalidInput(format!(
            "Z_{i} is trivial; spectral gap undefined"
        )));
    }
    let up = laplacian(x, i, LapVariant::Up)?;
    let restricted = q.transpose() * up * &q;
    let vals = sym_eigs(&restricted)?;
    Ok(vals[0])
}
