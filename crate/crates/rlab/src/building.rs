//! Local structure of the affine building of PGL_d over F_q((y)): lattice
//! classes, colors, adjacency, finite balls around the standard lattice, and
//! Hecke operators on vertex sets with a transitive group action.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::algebra::ff::{is_prime, Fe, FiniteField};
use crate::algebra::matrix::SeriesMatrix;
use crate::algebra::poly::Poly;
use crate::algebra::series::Series;
use crate::algebra::smith::{lattice_hnf, smith_valuations, LatticeClassKey, LatticeHnf};
use crate::complex::{clique_complex, SimplicialComplex};
use crate::error::{RlabError, Result};
use crate::graph::Graph;

/// F_q for q = p^m, p prime.
pub fn field_of_order(q: u64) -> Result<Arc<FiniteField>> {
    if q < 2 {
        return Err(RlabError::InvalidInput(format!("not a prime power: {q}")));
    }
    for p in 2..=q {
        if !is_prime(p) || q % p != 0 {
            continue;
        }
        let mut m = 0;
        let mut t = q;
        while t % p == 0 {
            t /= p;
            m += 1;
        }
        if t != 1 {
            return Err(RlabError::InvalidInput(format!("not a prime power: {q}")));
        }
        return FiniteField::new(p, m, None);
    }
    Err(RlabError::InvalidInput(format!("not a prime power: {q}")))
}

/// The color of the lattice class of g: the y-valuation of det(g), mod d.
pub fn vertex_color(g: &SeriesMatrix, f: &Arc<FiniteField>) -> Result<usize> {
    let d = g.rows;
    let det = g.det(f);
    let v = det.valuation().ok_or_else(|| {
        RlabError::InsufficientPrecision(
            "determinant valuation invisible at this precision".into(),
        )
    })?;
    Ok(v % d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjacencyType {
    Same,
    /// Adjacent with color k: y L_1 subset L_2 subset L_1 with colength k.
    Adjacent(usize),
    NotAdjacent,
}

fn classify(mut vals: Vec<usize>) -> AdjacencyType {
    let m = *vals.iter().min().unwrap();
    for v in &mut vals {
        *v -= m;
    }
    if vals.iter().all(|&v| v == 0) {
        AdjacencyType::Same
    } else if vals.iter().all(|&v| v <= 1) {
        AdjacencyType::Adjacent(vals.iter().filter(|&&v| v == 1).count())
    } else {
        AdjacencyType::NotAdjacent
    }
}

/// Relative position of the lattice classes [A], [B]: the elementary-divisor
/// valuations of A^{-1} B, normalized to minimum zero. A^{-1} is reached
/// through the adjugate, which only shifts all valuations uniformly.
pub fn relative_position(
    a: &SeriesMatrix,
    b: &SeriesMatrix,
    f: &Arc<FiniteField>,
) -> Result<Vec<usize>> {
    let g = adjugate(a, f).mul(b, f);
    let mut vals = smith_valuations(&g, f)?;
    let m = *vals.iter().min().unwrap();
    for v in &mut vals {
        *v -= m;
    }
    Ok(vals)
}

/// The class relation of g: same class, adjacent with a color, or neither.
pub fn adjacency_type(g: &SeriesMatrix, f: &Arc<FiniteField>) -> Result<AdjacencyType> {
    Ok(classify(smith_valuations(g, f)?))
}

/// Adjugate matrix: adj(M) = det(M) * M^{-1}, defined even when the
/// determinant is a non-unit series.
pub fn adjugate(m: &SeriesMatrix, f: &Arc<FiniteField>) -> SeriesMatrix {
    let d = m.rows;
    if d == 1 {
        return SeriesMatrix::identity(1, m.min_prec());
    }
    SeriesMatrix::from_fn(d, d, |i, j| {
        // cofactor C_{j,i}
        let minor = SeriesMatrix::from_fn(d - 1, d - 1, |r, c| {
            let rr = if r < j { r } else { r + 1 };
            let cc = if c < i { c } else { c + 1 };
            m.get(rr, cc).clone()
        });
        let det = minor.det(f);
        if (i + j) % 2 == 1 {
            det.neg(f)
        } else {
            det
        }
    })
}

/// All k-dimensional subspaces of F_q^d, each as a reduced-row-echelon basis
/// (k vectors of d field elements).
pub fn subspaces(f: &Arc<FiniteField>, d: usize, k: usize) -> Vec<Vec<Vec<Fe>>> {
    assert!(k <= d);
    let elems: Vec<Fe> = f.elements().collect();
    let mut out = Vec::new();
    // choose pivot columns p_0 < ... < p_{k-1}
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free positions: (row, col) with col > p_row and col not a pivot
        let mut free = Vec::new();
        for (row, &p) in pivots.iter().enumerate() {
            for col in p + 1..d {
                if !pivots.contains(&col) {
                    free.push((row, col));
                }
            }
        }
        let mut counter = vec![0usize; free.len()];
        loop {
            let mut basis = vec![vec![f.zero(); d]; k];
            for (row, &p) in pivots.iter().enumerate() {
                basis[row][p] = f.one();
            }
            for (fi, &(row, col)) in free.iter().enumerate() {
                basis[row][col] = elems[counter[fi]];
            }
            out.push(basis);
            // odometer over the free entries
            let mut i = 0;
            loop {
                if i == counter.len() {
                    break;
                }
                counter[i] += 1;
                if counter[i] < elems.len() {
                    break;
                }
                counter[i] = 0;
                i += 1;
            }
            if counter.iter().all(|&c| c == 0) {
                break;
            }
        }
        // next pivot combination
        let mut advanced = false;
        let mut i = k;
        while i > 0 {
            i -= 1;
            if pivots[i] < d - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[i] + (j - i);
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            return out;
        }
    }
}

#[derive(Clone, Debug)]
pub struct BuildingBall {
    /// Clique complex on the lattice classes, faces up to dimension d-1.
    pub complex: SimplicialComplex,
    /// Vertex colors tau = det valuation mod d.
    pub colors: Vec<usize>,
    /// Gallery distance from the center class.
    pub distances: Vec<usize>,
    pub classes: Vec<LatticeClassKey>,
    pub d: usize,
    pub q: u64,
    pub r: usize,
}

impl BuildingBall {
    /// Directed edge color: tau(y) - tau(x) mod d.
    pub fn edge_color(&self, x: usize, y: usize) -> usize {
        (self.colors[y] + self.d - self.colors[x]) % self.d
    }
}

fn key_to_rep(key: &LatticeClassKey) -> LatticeHnf {
    LatticeHnf {
        diag: key.diag.clone(),
        entries: key.entries.clone(),
    }
}

/// Neighbor classes of [L]: the lattices L' with yL properly between yL and
/// L, one per proper nonzero subspace of L/yL.
fn neighbor_classes(
    rep: &LatticeHnf,
    f: &Arc<FiniteField>,
    prec: usize,
    subs: &[Vec<Vec<Fe>>],
) -> Result<Vec<LatticeClassKey>> {
    let d = rep.dim();
    let m = rep.to_series_matrix(prec);
    let y = Series::from_poly(&Poly::y(), prec);
    let ym = m.scale(&y, f);
    let mut out = Vec::with_capacity(subs.len());
    for basis in subs {
        let k = basis.len();
        let cols = SeriesMatrix::from_fn(d, k + d, |r, c| {
            if c < k {
                // M times the constant vector basis[c]
                let mut s = Series::zero(prec);
                for (i, &u) in basis[c].iter().enumerate() {
                    if u != 0 {
                        s = s.add(&m.get(r, i).scale(u, f), f);
                    }
                }
                s
            } else {
                ym.get(r, c - k).clone()
            }
        });
        out.push(lattice_hnf(&cols, f)?.class_key());
    }
    Ok(out)
}

fn ball_at_precision(
    d: usize,
    q: u64,
    r: usize,
    cap: usize,
    f: &Arc<FiniteField>,
    prec: usize,
) -> Result<BuildingBall> {
    let mut subs: Vec<Vec<Vec<Fe>>> = Vec::new();
    for k in 1..d {
        subs.extend(subspaces(f, d, k));
    }
    let origin = LatticeHnf {
        diag: vec![0; d],
        entries: (0..d * d)
            .map(|t| if t % (d + 1) == 0 { vec![f.one()] } else { Vec::new() })
            .collect(),
    }
    .class_key();
    let mut classes = vec![origin.clone()];
    let mut index: HashMap<LatticeClassKey, usize> = HashMap::from([(origin, 0)]);
    let mut distances = vec![0usize];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut head = 0;
    while head < classes.len() {
        let v = head;
        head += 1;
        let rep = key_to_rep(&classes[v]);
        for key in neighbor_classes(&rep, f, prec, &subs)? {
            let u = match index.get(&key) {
                Some(&u) => u,
                None => {
                    if distances[v] >= r {
                        continue;
                    }
                    let u = classes.len();
                    if u >= cap {
                        return Err(RlabError::CapExceeded(format!(
                            "building ball exceeds {cap} vertices"
                        )));
                    }
                    classes.push(key.clone());
                    index.insert(key, u);
                    distances.push(distances[v] + 1);
                    u
                }
            };
            if u != v {
                let e = (v.min(u), v.max(u));
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
    }
    let colors: Vec<usize> = classes
        .iter()
        .map(|k| k.diag.iter().sum::<usize>() % d)
        .collect();
    let graph = Graph::from_edges(classes.len(), &edges);
    let complex = clique_complex(&graph, d - 1, 10 * cap)?;
    Ok(BuildingBall {
        complex,
        colors,
        distances,
        classes,
        d,
        q,
        r,
    })
}

/// The ball of gallery radius r around the standard lattice class in the
/// building of PGL_d(F_q((y))), as a clique complex with colors.
pub fn building_ball(d: usize, q: u64, r: usize, cap: usize) -> Result<BuildingBall> {
    if d < 2 {
        return Err(RlabError::InvalidInput("need d >= 2".into()));
    }
    let f = field_of_order(q)?;
    let prec = 4 * d * (r + 2);
    match ball_at_precision(d, q, r, cap, &f, prec) {
        Err(RlabError::InsufficientPrecision(_)) => {
            ball_at_precision(d, q, r, cap, &f, 2 * prec)
        }
        other => other,
    }
}

/// Hecke operators A_1..A_{d-1} on a vertex set closed under right
/// multiplication by the sigma sets: (A_k)[x][x sigma] += 1 for sigma in
/// Sigma_k. Verifies A_k^T = A_{d-k} and pairwise commutation exactly.
pub fn hecke_matrices<T, M>(
    vertices: &[T],
    sigmas: &[Vec<T>],
    mul: M,
) -> Result<Vec<DMatrix<f64>>>
where
    T: Eq + Hash + Clone,
    M: Fn(&T, &T) -> T,
{
    let n = vertices.len();
    let index: HashMap<&T, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    if index.len() != n {
        return Err(RlabError::InvalidInput("duplicate vertices".into()));
    }
    let mut mats: Vec<Vec<i64>> = vec![vec![0i64; n * n]; sigmas.len()];
    for (k, sigma) in sigmas.iter().enumerate() {
        for (i, v) in vertices.iter().enumerate() {
            for s in sigma {
                let w = mul(v, s);
                let j = *index.get(&w).ok_or_else(|| {
                    RlabError::Verification(
                        "vertex set is not closed under the sigma action".into(),
                    )
                })?;
                mats[k][i * n + j] += 1;
            }
        }
    }
    let d1 = sigmas.len();
    for k in 0..d1 {
        for i in 0..n {
            for j in 0..n {
                if mats[k][i * n + j] != mats[d1 - 1 - k][j * n + i] {
                    return Err(RlabError::Verification(format!(
                        "A_{} transpose differs from A_{}",
                        k + 1,
                        d1 - k
                    )));
                }
            }
        }
        for l in k + 1..d1 {
            for i in 0..n {
                for j in 0..n {
                    let mut ab = 0i64;
                    let mut ba = 0i64;
                    for t in 0..n {
                        ab += mats[k][i * n + t] * mats[l][t * n + j];
                        ba += mats[l][i * n + t] * mats[k][t * n + j];
                    }
                    if ab != ba {
                        return Err(RlabError::Verification(format!(
                            "A_{} and A_{} do not commute",
                            k + 1,
                            l + 1
                        )));
                    }
                }
            }
        }
    }
    Ok(mats
        .into_iter()
        .map(|m| DMatrix::from_fn(n, n, |i, j| m[i * n + j] as f64))
        .collect())
}
