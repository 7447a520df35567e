//! Geometric overlap of planar embeddings of 2-complexes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::SimplicialComplex;
use crate::error::{RlabError, Result};

pub type Point = (f64, f64);

#[derive(Clone, Debug)]
pub struct OverlapResult {
    /// Fraction of closed triangle images containing the witness point.
    pub fraction: f64,
    pub witness: Point,
    /// Whether the embedding was jittered to restore general position.
    pub jittered: bool,
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn in_closed_triangle(p: Point, t: &[Point; 3], tol: f64) -> bool {
    let d0 = cross(t[0], t[1], p);
    let d1 = cross(t[1], t[2], p);
    let d2 = cross(t[2], t[0], p);
    let neg = d0 < -tol || d1 < -tol || d2 < -tol;
    let pos = d0 > tol || d1 > tol || d2 > tol;
    !(neg && pos)
}

/// Intersection of segments ab and cd, when it exists in both (with a small
/// parameter slop so shared endpoints count).
fn segment_intersection(a: Point, b: Point, c: Point, d: Point) -> Option<Point> {
    let r = (b.0 - a.0, b.1 - a.1);
    let s = (d.0 - c.0, d.1 - c.1);
    let denom = r.0 * s.1 - r.1 * s.0;
    if denom.abs() < 1e-14 {
        return None;
    }
    let qp = (c.0 - a.0, c.1 - a.1);
    let t = (qp.0 * s.1 - qp.1 * s.0) / denom;
    let u = (qp.0 * r.1 - qp.1 * r.0) / denom;
    let eps = 1e-12;
    if (-eps..=1.0 + eps).contains(&t) && (-eps..=1.0 + eps).contains(&u) {
        Some((a.0 + t * r.0, a.1 + t * r.1))
    } else {
        None
    }
}

fn needs_jitter(points: &[Point], scale: f64) -> bool {
    let n = points.len();
    let tol = 1e-12 * scale * scale;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if cross(points[i], points[j], points[k]).abs() < tol {
                    return true;
                }
            }
        }
    }
    false
}

/// The maximum, over points z of the plane, of the fraction of 2-faces whose
/// closed embedded triangle contains z. The maximum of this upper
/// semicontinuous, piecewise-constant function is attained on the boundary of
/// some triangle, so scanning all vertices and all pairwise edge
/// intersections (plus triangle centroids, for interior witnesses) is exact.
pub fn overlap_depth(x: &SimplicialComplex, embedding: &[Point]) -> Result<OverlapResult> {
    if x.dim() < 2 || x.count(2) == 0 {
        return Err(RlabError::InvalidInput("complex has no 2-faces".into()));
    }
    if embedding.len() != x.n {
        return Err(RlabError::InvalidInput(format!(
            "embedding has {} points for {} vertices",
            embedding.len(),
            x.n
        )));
    }
    let scale = embedding
        .iter()
        .flat_map(|p| [p.0.abs(), p.1.abs()])
        .fold(1.0f64, f64::max);
    for i in 0..x.n {
        for j in i + 1..x.n {
            let (a, b) = (embedding[i], embedding[j]);
            if (a.0 - b.0).abs() < 1e-12 * scale && (a.1 - b.1).abs() < 1e-12 * scale {
                return Err(RlabError::InvalidInput(format!(
                    "embedding is not injective: vertices {i} and {j} coincide"
                )));
            }
        }
    }
    let mut points = embedding.to_vec();
    let jittered = needs_jitter(&points, scale);
    if jittered {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6f766c70);
        for p in &mut points {
            p.0 += rng.gen_range(-1e-9..1e-9) * scale;
            p.1 += rng.gen_range(-1e-9..1e-9) * scale;
        }
    }
    let triangles: Vec<[Point; 3]> = x.faces[2]
        .iter()
        .map(|f| [points[f[0]], points[f[1]], points[f[2]]])
        .collect();
    // candidate points: triangle centroids, vertices, and pairwise
    // intersections of triangle edges
    let mut candidates: Vec<Point> = triangles
        .iter()
        .map(|t| {
            (
                (t[0].0 + t[1].0 + t[2].0) / 3.0,
                (t[0].1 + t[1].1 + t[2].1) / 3.0,
            )
        })
        .collect();
    candidates.extend(points.iter().copied());
    let mut segments: Vec<(usize, usize)> = Vec::new();
    for f in &x.faces[2] {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let e = (f[i].min(f[j]), f[i].max(f[j]));
            if !segments.contains(&e) {
                segments.push(e);
            }
        }
    }
    for (si, &(a, b)) in segments.iter().enumerate() {
        for &(c, d) in &segments[si + 1..] {
            if let Some(p) =
                segment_intersection(points[a], points[b], points[c], points[d])
            {
                candidates.push(p);
            }
        }
    }
    let tol = 1e-12 * scale;
    let mut best = 0usize;
    let mut witness = candidates[0];
    for &z in &candidates {
        let depth = triangles
            .iter()
            .filter(|t| in_closed_triangle(z, t, tol))
            .count();
        if depth > best {
            best = depth;
            witness = z;
        }
    }
    Ok(OverlapResult {
        fraction: best as f64 / triangles.len() as f64,
        witness,
        jittered,
    })
}

/// Minimum of overlap_depth over seeded random embeddings in the unit
/// square. This is an empirical UPPER bound on the geometric overlap
/// constant: some embedding achieves at most this depth.
pub fn overlap_estimate(x: &SimplicialComplex, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(RlabError::InvalidInput("need at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..trials {
        let pts: Vec<Point> = (0..x.n)
            .map(|_| (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)))
            .collect();
        best = best.min(overlap_depth(x, &pts)?.fraction);
    }
    Ok(best)
}
