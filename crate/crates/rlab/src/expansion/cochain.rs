//! F_2 coboundary expansion E_i and filling nu_i, exact via an exhaustive
//! sweep over cochains grouped into cosets of the relevant subspace.

use std::collections::HashMap;

use crate::complex::{coboundary_f2, F2Matrix, SimplicialComplex};
use crate::error::{RlabError, Result};

/// An extremal cochain: its support, the coset norm ||[f]||, ||delta f||,
/// and the shift achieving the coset norm (empty: f is already minimal in
/// its coset, certified by the exhaustive sweep).
#[derive(Clone, Debug)]
pub struct CochainWitness {
    pub f: Vec<usize>,
    pub coset_norm: usize,
    pub delta_norm: usize,
    pub shift: Vec<usize>,
}

struct CosetStat {
    min_wt: u32,
    best_mask: u64,
    dnorm: u32,
}

const COCHAIN_CAP: usize = 22;

fn check_caps(x: &SimplicialComplex, i: usize) -> Result<usize> {
    if i == 0 {
        return Err(RlabError::InvalidInput("expansion index starts at 1".into()));
    }
    let c = x.count(i as isize - 1);
    if c == 0 {
        return Err(RlabError::InvalidInput(format!(
            "no {}-cells: the cochain domain is empty",
            i as isize - 1
        )));
    }
    let sub = x.count(i as isize - 2);
    if c > COCHAIN_CAP || sub > COCHAIN_CAP {
        return Err(RlabError::CapExceeded(format!(
            "cochain sweep capped at 2^{COCHAIN_CAP}: |X^(i-1)| = {c}, |X^(i-2)| = {sub}"
        )));
    }
    Ok(c)
}

/// Reduced row-echelon basis of the row space, as packed single-word masks
/// (requires cols <= 64) together with their pivot columns.
fn echelon_masks(rows: Vec<u64>, cols: usize) -> Vec<(usize, u64)> {
    let mut m = F2Matrix::zero(rows.len(), cols);
    for (r, mask) in rows.iter().enumerate() {
        for j in 0..cols {
            if mask >> j & 1 == 1 {
                m.set(r, j, true);
            }
        }
    }
    let (rank, pivots, ech) = m.echelonize();
    (0..rank).map(|r| (pivots[r], ech.row(r)[0])).collect()
}

fn reduce(mut mask: u64, basis: &[(usize, u64)]) -> u64 {
    for &(p, row) in basis {
        if mask >> p & 1 == 1 {
            mask ^= row;
        }
    }
    mask
}

/// Sweep all 2^c cochains in Gray-code order, maintaining delta f
/// incrementally, and record per coset (of the subspace spanned by `basis`)
/// the minimum weight, a minimizing representative, and ||delta f||, which
/// is constant on cosets whenever the subspace lies in ker delta.
fn coset_sweep(
    delta: &F2Matrix,
    c: usize,
    basis: &[(usize, u64)],
) -> HashMap<u64, CosetStat> {
    let rows = delta.rows;
    let words = rows.div_ceil(64).max(1);
    // column j of delta as a packed vector over the rows
    let mut cols: Vec<Vec<u64>> = vec![vec![0u64; words]; c];
    for r in 0..rows {
        for (j, col) in cols.iter_mut().enumerate() {
            if delta.get(r, j) {
                col[r / 64] |= 1 << (r % 64);
            }
        }
    }
    let mut stats: HashMap<u64, CosetStat> = HashMap::new();
    let mut mask = 0u64;
    let mut dvec = vec![0u64; words];
    let record = |mask: u64, dvec: &[u64], stats: &mut HashMap<u64, CosetStat>| {
        let canon = reduce(mask, basis);
        let wt = mask.count_ones();
        let entry = stats.entry(canon).or_insert_with(|| CosetStat {
            min_wt: u32::MAX,
            best_mask: 0,
            dnorm: dvec.iter().map(|w| w.count_ones()).sum(),
        });
        if wt < entry.min_wt || (wt == entry.min_wt && mask < entry.best_mask) {
            entry.min_wt = wt;
            entry.best_mask = mask;
        }
    };
    record(mask, &dvec, &mut stats);
    for t in 1u64..1 << c {
        let j = t.trailing_zeros() as usize;
        mask ^= 1 << j;
        for (w, cw) in dvec.iter_mut().zip(&cols[j]) {
            *w ^= cw;
        }
        record(mask, &dvec, &mut stats);
    }
    stats
}

fn witness_from(stat: &CosetStat) -> CochainWitness {
    CochainWitness {
        f: (0..64).filter(|&j| stat.best_mask >> j & 1 == 1).collect(),
        coset_norm: stat.min_wt as usize,
        delta_norm: stat.dnorm as usize,
        shift: Vec::new(),
    }
}

/// E_i(X): the exact minimum of ||delta f|| / ||[f]|| over cochains
/// f in C^{i-1} outside B^{i-1} = im(delta_{i-2}), where ||[f]|| is the
/// Hamming distance of f from B^{i-1}. Also returns the normalized variant
/// E_i * |X^(i-1)| / |X^(i)|, and an extremal witness. Zero exactly when
/// H^{i-1}(X, F_2) != 0, with a nontrivial cocycle as witness.
pub fn coboundary_expansion(
    x: &SimplicialComplex,
    i: usize,
) -> Result<(f64, f64, CochainWitness)> {
    let c = check_caps(x, i)?;
    let delta = coboundary_f2(x, i as isize - 1)?;
    // B^{i-1} as the column space of delta_{i-2}; for i = 1 this is the
    // augmentation image {0, all-ones}
    let below = coboundary_f2(x, i as isize - 2)?;
    let gens: Vec<u64> = (0..below.cols)
        .map(|j| (0..c).fold(0u64, |m, r| m | (below.get(r, j) as u64) << r))
        .collect();
    let basis = echelon_masks(gens, c);
    let stats = coset_sweep(&delta, c, &basis);
    let mut best: Option<(f64, &CosetStat)> = None;
    for (canon, stat) in &stats {
        if *canon == 0 {
            continue;
        }
        let ratio = stat.dnorm as f64 / stat.min_wt as f64;
        let better = match best {
            None => true,
            Some((r, s)) => {
                ratio < r - 1e-15
                    || (ratio <= r + 1e-15 && stat.best_mask < s.best_mask)
            }
        };
        if better {
            best = Some((ratio, stat));
        }
    }
    let (e, stat) = best.ok_or_else(|| {
        RlabError::InvalidInput("every cochain is a coboundary; E_i undefined".into())
    })?;
    let faces_above = x.count(i as isize);
    if faces_above == 0 {
        return Ok((0.0, 0.0, witness_from(stat)));
    }
    let normalized = e * x.count(i as isize - 1) as f64 / faces_above as f64;
    Ok((e, normalized, witness_from(stat)))
}

/// nu_i(X): the exact maximum of ||f + Z^{i-1}|| / ||delta f|| over cochains
/// with delta f != 0, where Z^{i-1} = ker(delta_{i-1}).
pub fn filling(x: &SimplicialComplex, i: usize) -> Result<(f64, CochainWitness)> {
    let c = check_caps(x, i)?;
    let delta = coboundary_f2(x, i as isize - 1)?;
    let kernel = delta.kernel_basis();
    let gens: Vec<u64> = (0..kernel.rows)
        .map(|r| (0..c).fold(0u64, |m, j| m | (kernel.get(r, j) as u64) << j))
        .collect();
    let basis = echelon_masks(gens, c);
    let stats = coset_sweep(&delta, c, &basis);
    let mut best: Option<(f64, &CosetStat)> = None;
    for (canon, stat) in &stats {
        if *canon == 0 {
            continue;
        }
        debug_assert!(stat.dnorm > 0);
        let ratio = stat.min_wt as f64 / stat.dnorm as f64;
        let better = match best {
            None => true,
            Some((r, s)) => {
                ratio > r + 1e-15
                    || (ratio >= r - 1e-15 && stat.best_mask < s.best_mask)
            }
        };
        if better {
            best = Some((ratio, stat));
        }
    }
    let (nu, stat) = best.ok_or_else(|| {
        RlabError::InvalidInput("delta vanishes identically; nu_i undefined".into())
    })?;
    Ok((nu, witness_from(stat)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{betti_f2_reduced, clique_complex, random_complex};
    use crate::expansion::cheeger::cheeger_graph;
    use crate::graph::Graph;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn complete_graph(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph::from_edges(n, &edges)
    }

    fn complete_complex(n: usize, d: usize) -> SimplicialComplex {
        clique_complex(&complete_graph(n), d, 100000).unwrap()
    }

    #[test]
    fn k4_e1_is_hbar() {
        let x = complete_complex(4, 1);
        let (e, en, w) = coboundary_expansion(&x, 1).unwrap();
        assert!((e - 2.0).abs() < 1e-12);
        // normalization by |X^(0)| / |X^(1)| = 4/6
        assert!((en - 2.0 * 4.0 / 6.0).abs() < 1e-12);
        assert!(w.coset_norm > 0);
        assert_eq!(w.shift.len(), 0);
    }

    #[test]
    fn disconnected_graph_e1_zero() {
        let x = SimplicialComplex::from_faces(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let (e, _, w) = coboundary_expansion(&x, 1).unwrap();
        assert_eq!(e, 0.0);
        // witness is a nontrivial cocycle: a component indicator
        assert_eq!(w.delta_norm, 0);
        assert!(w.coset_norm > 0);
    }

    #[test]
    fn full_simplex_e2() {
        let x = complete_complex(4, 3);
        let (e, _, _) = coboundary_expansion(&x, 2).unwrap();
        assert!(e >= 4.0 / 3.0 - 1e-12, "E_2 = {e}");
    }

    #[test]
    fn e1_equals_hbar_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut nontrivial = 0;
        for _ in 0..200 {
            let n = rng.gen_range(3..=10);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((i, j));
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            let g = Graph::from_edges(n, &edges);
            let x = clique_complex(&g, 1, 10000).unwrap();
            let (e, _, _) = coboundary_expansion(&x, 1).unwrap();
            let r = cheeger_graph(&g).unwrap();
            assert!((e - r.h_bar).abs() < 1e-12, "E_1 = {e}, h_bar = {}", r.h_bar);
            if e > 0.0 {
                nontrivial += 1;
            }
        }
        assert!(nontrivial > 50);
    }

    #[test]
    fn positivity_iff_cohomology_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let mut checked = 0;
        for _ in 0..150 {
            let n = rng.gen_range(3..7);
            let x = random_complex(&mut rng, n);
            for i in 1..=x.dim() + 1 {
                if x.count(i as isize - 1) == 0 || x.count(i as isize - 1) > 16 {
                    continue;
                }
                let Ok((e, _, _)) = coboundary_expansion(&x, i) else {
                    continue;
                };
                let b = betti_f2_reduced(&x, i - 1).unwrap();
                assert_eq!(e > 0.0, b == 0, "i = {i}, E = {e}, b = {b}");
                checked += 1;
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn filling_inverts_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut checked = 0;
        for _ in 0..120 {
            let n = rng.gen_range(3..7);
            let x = random_complex(&mut rng, n);
            for i in 1..=x.dim() + 1 {
                if x.count(i as isize - 1) == 0 || x.count(i as isize - 1) > 16 {
                    continue;
                }
                let Ok((e, _, _)) = coboundary_expansion(&x, i) else {
                    continue;
                };
                if e == 0.0 {
                    continue; // cohomology nonzero: nu is about Z-cosets instead
                }
                let Ok((nu, _)) = filling(&x, i) else { continue };
                assert!((nu * e - 1.0).abs() < 1e-9, "i={i} e={e} nu={nu}");
                checked += 1;
            }
        }
        assert!(checked > 60);
    }

    #[test]
    fn triangle_filling() {
        let x = SimplicialComplex::from_faces(3, &[vec![0, 1], vec![1, 2], vec![0, 2]])
            .unwrap();
        let (e, _, _) = coboundary_expansion(&x, 1).unwrap();
        let (nu, _) = filling(&x, 1).unwrap();
        assert!((nu - 1.0 / e).abs() < 1e-12);
    }

    #[test]
    fn two_triangles_mediant() {
        // disjoint K_3's: each component has h_bar = 2, and 1/nu_1 is the
        // mediant (2+2)/(1+1) = 2
        let x = SimplicialComplex::from_faces(
            6,
            &[
                vec![0, 1],
                vec![1, 2],
                vec![0, 2],
                vec![3, 4],
                vec![4, 5],
                vec![3, 5],
            ],
        )
        .unwrap();
        let (nu, w) = filling(&x, 1).unwrap();
        assert!((nu - 0.5).abs() < 1e-12);
        assert_eq!(w.coset_norm, w.f.len());
    }

    #[test]
    fn empty_domain_rejected() {
        let x = SimplicialComplex::from_faces(3, &[vec![0], vec![1], vec![2]]).unwrap();
        assert!(filling(&x, 2).is_err());
        assert!(coboundary_expansion(&x, 2).is_err());
    }
}
