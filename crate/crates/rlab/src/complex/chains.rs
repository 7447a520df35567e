//! Boundary and coboundary matrices, Laplacians, and F_2 Betti numbers.

use nalgebra::DMatrix;

use crate::complex::f2::F2Matrix;
use crate::complex::simplicial::{incidence, SimplicialComplex};
use crate::error::{RlabError, Result};

fn check_range(x: &SimplicialComplex, i: isize) -> Result<()> {
    if i < 0 || i > x.dim() as isize + 1 {
        return Err(RlabError::InvalidInput(format!(
            "boundary index {i} out of range for a {}-dimensional complex",
            x.dim()
        )));
    }
    Ok(())
}

/// Signed boundary matrix of the map C_i -> C_{i-1}, |X^(i-1)| x |X^(i)|.
/// For i = 0 this is the augmentation row (all ones, the empty face).
pub fn boundary_real(x: &SimplicialComplex, i: isize) -> Result<DMatrix<f64>> {
    check_range(x, i)?;
    let rows = x.count(i - 1);
    let cols = x.count(i);
    let mut m = DMatrix::zeros(rows, cols);
    if i == 0 {
        for c in 0..cols {
            m[(0, c)] = 1.0;
        }
        return Ok(m);
    }
    if cols == 0 {
        return Ok(m);
    }
    let i = i as usize;
    for (c, face) in x.faces[i].iter().enumerate() {
        for l in 0..face.len() {
            let mut sub = face.clone();
            sub.remove(l);
            let r = x.face_index(&sub).expect("downward closure");
            m[(r, c)] = incidence(face, &sub).unwrap() as f64;
        }
    }
    Ok(m)
}

/// Boundary matrix mod 2 (signs collapse).
pub fn boundary_f2(x: &SimplicialComplex, i: isize) -> Result<F2Matrix> {
    check_range(x, i)?;
    let rows = x.count(i - 1);
    let cols = x.count(i);
    let mut m = F2Matrix::zero(rows, cols);
    if i == 0 {
        for c in 0..cols {
            m.set(0, c, true);
        }
        return Ok(m);
    }
    if cols == 0 {
        return Ok(m);
    }
    let i = i as usize;
    for (c, face) in x.faces[i].iter().enumerate() {
        for l in 0..face.len() {
            let mut sub = face.clone();
            sub.remove(l);
            let r = x.face_index(&sub).expect("downward closure");
            m.set(r, c, true);
        }
    }
    Ok(m)
}

/// Coboundary delta_i: C^i -> C^{i+1} as a matrix (transpose of the
/// (i+1)-boundary). i = -1 gives the augmentation column.
pub fn coboundary_f2(x: &SimplicialComplex, i: isize) -> Result<F2Matrix> {
    Ok(boundary_f2(x, i + 1)?.transpose())
}

pub fn coboundary_real(x: &SimplicialComplex, i: isize) -> Result<DMatrix<f64>> {
    Ok(boundary_real(x, i + 1)?.transpose())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LapVariant {
    Up,
    Down,
    Full,
}

/// Laplacian in dimension i. Down at i = 0 uses the augmentation (all-ones
/// matrix), matching the convention that the empty face is present.
pub fn laplacian(x: &SimplicialComplex, i: usize, variant: LapVariant) -> Result<DMatrix<f64>> {
    let up = || -> Result<DMatrix<f64>> {
        let b = boundary_real(x, i as isize + 1)?;
        Ok(&b * b.transpose())
    };
    let down = || -> Result<DMatrix<f64>> {
        let b = boundary_real(x, i as isize)?;
        Ok(b.transpose() * &b)
    };
    match variant {
        LapVariant::Up => up(),
        LapVariant::Down => down(),
        LapVariant::Full => Ok(up()? + down()?),
    }
}

/// dim H^i(X, F_2), unreduced (b_0 counts connected components).
pub fn betti_f2(x: &SimplicialComplex, i: usize) -> Result<usize> {
    if i > x.dim() {
        return Ok(0);
    }
    let ker = x.count(i as isize) - boundary_f2(x, i as isize + 1)?.rank();
    let im = if i == 0 {
        0
    } else {
        boundary_f2(x, i as isize)?.rank()
    };
    Ok(ker - im)
}

/// Reduced variant: the augmentation is part of the cochain complex, so a
/// connected complex has reduced b_0 = 0.
pub fn betti_f2_reduced(x: &SimplicialComplex, i: usize) -> Result<usize> {
    if i > 0 {
        return betti_f2(x, i);
    }
    let ker = x.count(0) - boundary_f2(x, 1)?.rank();
    Ok(ker - boundary_f2(x, 0)?.rank())
}

/// dim H_i(X, F_2) (homology; agrees with betti_f2 over a field).
pub fn homology_dim_f2(x: &SimplicialComplex, i: usize) -> Result<usize> {
    if i > x.dim() {
        return Ok(0);
    }
    let ker = if i == 0 {
        x.count(0)
    } else {
        x.count(i as isize) - boundary_f2(x, i as isize)?.rank()
    };
    Ok(ker - boundary_f2(x, i as isize + 1)?.rank())
}
