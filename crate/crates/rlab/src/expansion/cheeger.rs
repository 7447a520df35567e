//! Exact Cheeger constants by exhaustive enumeration.

use crate::complex::SimplicialComplex;
use crate::error::{RlabError, Result};
use crate::graph::Graph;

/// A minimizing partition together with the achieved ratio and the count of
/// crossing edges / transversal faces.
#[derive(Clone, Debug)]
pub struct PartitionWitness {
    pub parts: Vec<Vec<usize>>,
    pub ratio: f64,
    pub count: usize,
}

#[derive(Clone, Debug)]
pub struct CheegerReport {
    /// min over proper subsets of n |E(A, comp A)| / (|A| |comp A|).
    pub h: f64,
    pub h_witness: PartitionWitness,
    /// min over 0 < |A| <= n/2 of |E(A, comp A)| / |A|.
    pub h_bar: f64,
    pub h_bar_witness: PartitionWitness,
}

/// Both Cheeger constants of a graph, exactly, by Gray-code sweep over all
/// proper subsets. Capped at 24 vertices.
pub fn cheeger_graph(g: &Graph) -> Result<CheegerReport> {
    let n = g.n;
    if n > 24 {
        return Err(RlabError::CapExceeded(format!(
            "exact Cheeger enumeration capped at 24 vertices, got {n}"
        )));
    }
    if n < 2 {
        return Err(RlabError::InvalidInput("need at least 2 vertices".into()));
    }
    let adj_masks: Vec<u32> = g
        .adj
        .iter()
        .map(|nb| nb.iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    let mut best_h = f64::INFINITY;
    let mut best_h_mask = 0u32;
    let mut best_h_cut = 0usize;
    let mut best_hb = f64::INFINITY;
    let mut best_hb_mask = 0u32;
    let mut best_hb_cut = 0usize;
    let mut mask = 0u32;
    let mut cut = 0i64; // |E(A, comp A)| maintained under single-vertex flips
    for t in 1u32..(1 << n) {
        let v = t.trailing_zeros() as usize;
        let inside = (adj_masks[v] & mask).count_ones() as i64;
        let outside = g.degree(v) as i64 - inside;
        if mask >> v & 1 == 0 {
            mask |= 1 << v;
            cut += outside - inside;
        } else {
            mask &= !(1 << v);
            cut += inside - outside;
        }
        let a = mask.count_ones() as usize;
        if a == 0 || a == n {
            continue;
        }
        let ratio = n as f64 * cut as f64 / (a as f64 * (n - a) as f64);
        if ratio < best_h {
            best_h = ratio;
            best_h_mask = mask;
            best_h_cut = cut as usize;
        }
        if 2 * a <= n {
            let r = cut as f64 / a as f64;
            if r < best_hb {
                best_hb = r;
                best_hb_mask = mask;
                best_hb_cut = cut as usize;
            }
        }
    }
    let to_parts = |m: u32| {
        let a: Vec<usize> = (0..n).filter(|&v| m >> v & 1 == 1).collect();
        let b: Vec<usize> = (0..n).filter(|&v| m >> v & 1 == 0).collect();
        vec![a, b]
    };
    Ok(CheegerReport {
        h: best_h,
        h_witness: PartitionWitness {
            parts: to_parts(best_h_mask),
            ratio: best_h,
            count: best_h_cut,
        },
        h_bar: best_hb,
        h_bar_witness: PartitionWitness {
            parts: to_parts(best_hb_mask),
            ratio: best_hb,
            count: best_hb_cut,
        },
    })
}

/// Count of d-faces with exactly one vertex in each part. `label[v]` is the
/// part of v, or usize::MAX for unassigned vertices.
pub fn transversal_count(x: &SimplicialComplex, labels: &[usize], nparts: usize) -> usize {
    let d = nparts - 1;
    if x.dim() < d {
        return 0;
    }
    let mut count = 0;
    'faces: for face in &x.faces[d] {
        let mut seen = vec![false; nparts];
        for &v in face {
            let l = labels[v];
            if l == usize::MAX || seen[l] {
                continue 'faces;
            }
            seen[l] = true;
        }
        count += 1;
    }
    count
}

/// The higher-dimensional Cheeger constant of a d-complex: the exact minimum
/// of n |F(A_0,...,A_d)| / prod |A_i| over partitions of the vertices into
/// d+1 nonempty parts. Capped at 14 vertices.
pub fn cheeger_highdim(x: &SimplicialComplex) -> Result<(f64, PartitionWitness)> {
    let n = x.n;
    let d = x.dim();
    if n > 14 {
        return Err(RlabError::CapExceeded(format!(
            "partition enumeration capped at 14 vertices, got {n}"
        )));
    }
    if d == 0 || n < d + 1 {
        return Err(RlabError::InvalidInput(
            "complex dimension and vertex count do not admit a transversal partition".into(),
        ));
    }
    let p = d + 1;
    let mut labels = vec![0usize; n];
    let mut best = f64::INFINITY;
    let mut best_labels = Vec::new();
    let mut best_count = 0;
    // fix vertex 0 in part 0: the ratio is invariant under permuting parts
    loop {
        let mut sizes = vec![0usize; p];
        for &l in &labels {
            sizes[l] += 1;
        }
        if sizes.iter().all(|&s| s > 0) {
            let f = transversal_count(x, &labels, p);
            let prod: f64 = sizes.iter().map(|&s| s as f64).product();
            let ratio = n as f64 * f as f64 / prod;
            if ratio < best {
                best = ratio;
                best_labels = labels.clone();
                best_count = f;
            }
        }
        // next assignment, leaving labels[0] = 0
        let mut i = n - 1;
        loop {
            if i == 0 {
                let mut parts = vec![Vec::new(); p];
                for (v, &l) in best_labels.iter().enumerate() {
                    parts[l].push(v);
                }
                return Ok((
                    best,
                    PartitionWitness {
                        parts,
                        ratio: best,
                        count: best_count,
                    },
                ));
            }
            labels[i] += 1;
            if labels[i] < p {
                break;
            }
            labels[i] = 0;
            i -= 1;
        }
    }
}
