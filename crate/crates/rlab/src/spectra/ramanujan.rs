//! Graph spectra: the Ramanujan verdict, the mu invariants, and girth.

use nalgebra::DMatrix;

use crate::error::{RlabError, Result};
use crate::graph::Graph;
use crate::spectra::eigs::sym_eigs;

pub fn adjacency_matrix(g: &Graph) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(g.n, g.n);
    for (u, nb) in g.adj.iter().enumerate() {
        for &v in nb {
            m[(u, v)] = 1.0;
        }
    }
    m
}

/// Adjacency spectrum, ascending.
pub fn graph_spectrum(g: &Graph) -> Result<Vec<f64>> {
    sym_eigs(&adjacency_matrix(g))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RamanujanVerdict {
    pub ok: bool,
    pub degree: usize,
    pub bipartite: bool,
    pub bound: f64,
    /// An eigenvalue violating the bound, when ok is false.
    pub offending: Option<f64>,
}

fn regular_connected(g: &Graph) -> Result<usize> {
    let k = g
        .regularity()
        .ok_or_else(|| RlabError::InvalidInput("graph is not regular".into()))?;
    if !g.is_connected() {
        return Err(RlabError::InvalidInput("graph is disconnected".into()));
    }
    Ok(k)
}

/// Is every nontrivial eigenvalue within 2*sqrt(k-1)? The trivial ones are k
/// and, for bipartite graphs only, -k.
pub fn is_ramanujan_graph(g: &Graph, tol: f64) -> Result<RamanujanVerdict> {
    let k = regular_connected(g)?;
    if k < 3 {
        return Err(RlabError::InvalidInput(
            "Ramanujan verdicts need degree >= 3".into(),
        ));
    }
    let bipartite = g.bipartition().is_some();
    let bound = 2.0 * ((k - 1) as f64).sqrt();
    let spec = graph_spectrum(g)?;
    let kf = k as f64;
    let mut offending = None;
    for &l in &spec {
        let trivial = (l - kf).abs() <= tol || (bipartite && (l + kf).abs() <= tol);
        if !trivial && l.abs() > bound + tol {
            offending = Some(l);
            break;
        }
    }
    Ok(RamanujanVerdict {
        ok: offending.is_none(),
        degree: k,
        bipartite,
        bound,
        offending,
    })
}

/// (mu, mu0, mu1): extrema over eigenvalues with the stated trivial values
/// excluded by value — mu1 and mu0 drop k, mu drops both k and -k.
pub fn mu_values(g: &Graph, tol: f64) -> Result<(f64, f64, f64)> {
    let k = regular_connected(g)? as f64;
    let spec = graph_spectrum(g)?;
    let not_k: Vec<f64> = spec.iter().copied().filter(|l| (l - k).abs() > tol).collect();
    if not_k.is_empty() {
        return Err(RlabError::InvalidInput("graph has no nontrivial spectrum".into()));
    }
    let mu1 = not_k.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mu0 = not_k.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let mu = not_k
        .iter()
        .filter(|l| (*l + k).abs() > tol)
        .map(|l| l.abs())
        .fold(0.0, f64::max);
    Ok((mu, mu0, mu1))
}

/// Shortest cycle length; None for forests. Plain BFS from every vertex.
pub fn girth(g: &Graph) -> Option<usize> {
    use std::collections::VecDeque;
    let mut best: Option<usize> = None;
    for s in 0..g.n {
        let mut dist = vec![usize::MAX; g.n];
        let mut parent = vec![usize::MAX; g.n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &g.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if parent[u] != v && v != u {
                    let len = dist[u] + dist[v] + 1;
                    if best.map_or(true, |b| len < b) {
                        best = Some(len);
                    }
                }
            }
        }
    }
    best
}
