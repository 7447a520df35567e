//! Simplicial complexes on an ordered vertex set.

use std::collections::{BTreeSet, HashMap};

use crate::error::{RlabError, Result};
use crate::graph::Graph;

/// Finite simplicial complex on vertices 0..n. Faces are stored per
/// dimension as sorted vertex tuples in lexicographic order; the empty face
/// (dimension -1) is implicit and always present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub n: usize,
    /// faces[i] lists the i-dimensional faces (tuples of length i+1).
    pub faces: Vec<Vec<Vec<usize>>>,
    /// Per-dimension index of a face tuple in faces[i].
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl SimplicialComplex {
    /// Downward closure of the given faces. Every vertex in 0..n is included
    /// as a 0-face regardless.
    pub fn from_faces(n: usize, maximal: &[Vec<usize>]) -> Result<SimplicialComplex> {
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new()];
        for v in 0..n {
            by_dim[0].insert(vec![v]);
        }
        for face in maximal {
            let mut f: Vec<usize> = face.clone();
            f.sort_unstable();
            f.dedup();
            if f.len() != face.len() {
                return Err(RlabError::InvalidInput(format!(
                    "face {face:?} has repeated vertices"
                )));
            }
            if f.iter().any(|&v| v >= n) {
                return Err(RlabError::InvalidInput(format!(
                    "face {face:?} outside vertex range 0..{n}"
                )));
            }
            if f.is_empty() {
                continue;
            }
            // all nonempty subsets
            for mask in 1u64..(1 << f.len()) {
                let sub: Vec<usize> = f
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                let d = sub.len() - 1;
                while by_dim.len() <= d {
                    by_dim.push(BTreeSet::new());
                }
                by_dim[d].insert(sub);
            }
        }
        let faces: Vec<Vec<Vec<usize>>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = faces
            .iter()
            .map(|fs| {
                fs.iter()
                    .enumerate()
                    .map(|(i, f)| (f.clone(), i))
                    .collect()
            })
            .collect();
        Ok(SimplicialComplex { n, faces, index })
    }

    /// Highest dimension with a face present.
    pub fn dim(&self) -> usize {
        self.faces.len() - 1
    }

    /// Number of i-faces; i = -1 gives 1 (the empty face).
    pub fn count(&self, i: isize) -> usize {
        if i == -1 {
            1
        } else if i < 0 || i as usize >= self.faces.len() {
            0
        } else {
            self.faces[i as usize].len()
        }
    }

    pub fn face_index(&self, face: &[usize]) -> Option<usize> {
        let d = face.len().checked_sub(1)?;
        self.index.get(d)?.get(face).copied()
    }

    pub fn has_face(&self, face: &[usize]) -> bool {
        self.face_index(face).is_some()
    }

    /// The 1-skeleton as a graph.
    pub fn skeleton_graph(&self) -> Graph {
        let edges: Vec<(usize, usize)> = self
            .faces
            .get(1)
            .map(|es| es.iter().map(|e| (e[0], e[1])).collect())
            .unwrap_or_default();
        Graph::from_edges(self.n, &edges)
    }
}

/// Oriented incidence number [F : G] for faces of consecutive dimensions:
/// (-1)^l when G = F minus its l-th listed vertex, 0 when G is not contained
/// in F. The empty face has [v : empty] = +1.
pub fn incidence(f: &[usize], g: &[usize]) -> Result<i32> {
    if f.len() != g.len() + 1 {
        return Err(RlabError::InvalidInput(
            "incidence needs faces of consecutive dimensions".into(),
        ));
    }
    let mut missing = None;
    let mut gi = 0;
    for (l, &v) in f.iter().enumerate() {
        if gi < g.len() && g[gi] == v {
            gi += 1;
        } else if missing.is_none() {
            missing = Some(l);
        } else {
            return Ok(0);
        }
    }
    if gi != g.len() {
        return Ok(0);
    }
    match missing {
        Some(l) => Ok(if l % 2 == 0 { 1 } else { -1 }),
        None => Ok(0),
    }
}

/// Clique complex of a graph up to dimension max_dim, erroring when the face
/// count would exceed `cap`.
pub fn clique_complex(g: &Graph, max_dim: usize, cap: usize) -> Result<SimplicialComplex> {
    let mut faces: Vec<Vec<Vec<usize>>> = Vec::new();
    faces.push((0..g.n).map(|v| vec![v]).collect());
    let mut total = g.n;
    for d in 1..=max_dim {
        let mut next = Vec::new();
        for face in &faces[d - 1] {
            let last = *face.last().unwrap();
            for &v in &g.adj[last] {
                if v > last && face.iter().all(|&u| g.has_edge(u, v)) {
                    let mut nf = face.clone();
                    nf.push(v);
                    next.push(nf);
                }
            }
        }
        total += next.len();
        if total > cap {
            return Err(RlabError::CapExceeded(format!(
                "clique complex exceeds {cap} faces"
            )));
        }
        if next.is_empty() {
            break;
        }
        faces.push(next);
    }
    let index = faces
        .iter()
        .map(|fs| fs.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect())
        .collect();
    Ok(SimplicialComplex {
        n: g.n,
        faces,
        index,
    })
}

/// Random small complex for property tests: downward closure of a handful of
/// random faces of dimension at most 2.
pub fn random_complex(rng: &mut impl rand::Rng, n: usize) -> SimplicialComplex {
    let mut faces = Vec::new();
    let nf = rng.gen_range(1..2 * n);
    for _ in 0..nf {
        let k = rng.gen_range(1..=3.min(n));
        let mut f: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = rng.gen_range(i..n);
            f.swap(i, j);
        }
        faces.push(f[..k].to_vec());
    }
    SimplicialComplex::from_faces(n, &faces).unwrap()
}
