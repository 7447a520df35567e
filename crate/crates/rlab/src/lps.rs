//! The X^{p,q} construction: quaternion solutions over the integers, the
//! epsilon matrix map into PGL_2(F_q), and the resulting Cayley graph.

use std::sync::Arc;

use crate::algebra::ff::{is_prime, FiniteField};
use crate::algebra::group::{cayley_neighbors, proj_group_closure};
use crate::algebra::matrix::{proj_canonical, FMatrix, ProjMatrix};
use crate::algebra::nt::{legendre, sqrt_minus_one};
use crate::error::{RlabError, Result};
use crate::graph::Graph;

/// Integer solution (x0, x1, x2, x3) of x0^2 + x1^2 + x2^2 + x3^2 = p with
/// x0 odd positive.
pub type QuaternionSolution = [i64; 4];

/// Quaternion conjugate: negate the imaginary parts.
pub fn conjugate(s: &QuaternionSolution) -> QuaternionSolution {
    [s[0], -s[1], -s[2], -s[3]]
}

/// All p+1 solutions with x0 odd and positive, in lexicographic order, by
/// exhaustive search.
pub fn jacobi_solutions(p: u64) -> Result<Vec<QuaternionSolution>> {
    if !is_prime(p) || p % 4 != 1 {
        return Err(RlabError::InvalidInput(format!(
            "need a prime p = 1 mod 4, got {p}"
        )));
    }
    let p = p as i64;
    let bound = (p as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    let mut x0 = 1;
    while x0 * x0 <= p {
        let r1 = p - x0 * x0;
        for x1 in -bound..=bound {
            let r2 = r1 - x1 * x1;
            if r2 < 0 {
                continue;
            }
            for x2 in -bound..=bound {
                let r3 = r2 - x2 * x2;
                if r3 < 0 {
                    continue;
                }
                for x3 in -bound..=bound {
                    if x3 * x3 == r3 {
                        out.push([x0, x1, x2, x3]);
                    }
                }
            }
        }
        x0 += 2;
    }
    out.sort_unstable();
    if out.len() as i64 != p + 1 {
        return Err(RlabError::Verification(format!(
            "expected {} quaternion solutions, found {}",
            p + 1,
            out.len()
        )));
    }
    Ok(out)
}

/// The generator set: each solution mapped to the projective class of
/// [[x0 + e*x1, x2 + e*x3], [-x2 + e*x3, x0 - e*x1]] over F_q, e^2 = -1.
pub fn lps_generators(p: u64, q: u64) -> Result<(Vec<ProjMatrix>, Arc<FiniteField>)> {
    if p == q {
        return Err(RlabError::InvalidInput("p and q must be distinct".into()));
    }
    if q * q <= 4 * p {
        return Err(RlabError::InvalidInput(format!(
            "need q > 2*sqrt(p); got p={p}, q={q}"
        )));
    }
    let sols = jacobi_solutions(p)?;
    let f = FiniteField::prime(q)?;
    let eps = sqrt_minus_one(q)?;
    let red = |x: i64| f.from_int(x);
    let mut gens = Vec::with_capacity(sols.len());
    for s in &sols {
        let [x0, x1, x2, x3] = *s;
        let a = f.add(red(x0), f.mul(eps, red(x1)));
        let b = f.add(red(x2), f.mul(eps, red(x3)));
        let c = f.add(f.neg(red(x2)), f.mul(eps, red(x3)));
        let d = f.sub(red(x0), f.mul(eps, red(x1)));
        let m = FMatrix::from_rows(&[vec![a, b], vec![c, d]]);
        if m.det(&f) != f.from_int(p as i64) {
            return Err(RlabError::Verification(
                "generator determinant is not p mod q".into(),
            ));
        }
        gens.push(proj_canonical(&m, &f).map_err(|_| {
            RlabError::InvalidInput("singular generator: q too small for p".into())
        })?);
    }
    // the conjugate solution must map to the projective inverse
    let index_of = |g: &ProjMatrix| gens.iter().position(|h| h == g);
    for (i, s) in sols.iter().enumerate() {
        let [x0, x1, x2, x3] = conjugate(s);
        let a = f.add(red(x0), f.mul(eps, red(x1)));
        let b = f.add(red(x2), f.mul(eps, red(x3)));
        let c = f.add(f.neg(red(x2)), f.mul(eps, red(x3)));
        let d = f.sub(red(x0), f.mul(eps, red(x1)));
        let cm = proj_canonical(&FMatrix::from_rows(&[vec![a, b], vec![c, d]]), &f)?;
        if index_of(&cm) != index_of(&gens[i].inv(&f)) || index_of(&cm).is_none() {
            return Err(RlabError::Verification(
                "conjugate solution does not give the inverse generator".into(),
            ));
        }
    }
    let mut dedup = gens.clone();
    dedup.sort_by(|a, b| a.0.data.cmp(&b.0.data));
    dedup.dedup();
    if dedup.len() != gens.len() {
        return Err(RlabError::Verification(
            "generator matrices are not distinct".into(),
        ));
    }
    Ok((gens, f))
}

#[derive(Clone, Debug)]
pub struct LpsGraph {
    pub graph: Graph,
    pub p: u64,
    pub q: u64,
    pub generators: Vec<ProjMatrix>,
    /// true: the closure is all of PGL_2(F_q); false: the PSL_2 subgroup.
    pub group_is_pgl: bool,
    pub bipartite: bool,
}

/// Cayley graph of the subgroup generated by the p+1 generator matrices.
/// The group type and bipartiteness predicted by the Legendre symbol are
/// verified against the computed closure and 2-coloring; a mismatch is a
/// hard error.
pub fn lps_graph(p: u64, q: u64) -> Result<LpsGraph> {
    let (gens, f) = lps_generators(p, q)?;
    let pgl_order = (q * q * q - q) as usize;
    let group = proj_group_closure(&gens, &f, pgl_order)?;
    let neighbors = cayley_neighbors(&group, &gens, |a, b| a.mul(b, &f));
    let graph = Graph::from_neighbor_lists(neighbors);

    let expect_pgl = legendre(p as i64, q)? == -1;
    let expected_order = if expect_pgl { pgl_order } else { pgl_order / 2 };
    if group.order() != expected_order {
        return Err(RlabError::Verification(format!(
            "closure order {} does not match predicted {}",
            group.order(),
            expected_order
        )));
    }
    if graph.regularity() != Some(p as usize + 1) {
        return Err(RlabError::Verification("graph is not (p+1)-regular".into()));
    }
    if !graph.is_connected() {
        return Err(RlabError::Verification("Cayley graph disconnected".into()));
    }
    let bipartite = graph.bipartition().is_some();
    if bipartite != expect_pgl {
        return Err(RlabError::Verification(
            "bipartiteness does not match the Legendre prediction".into(),
        ));
    }
    Ok(LpsGraph {
        graph,
        p,
        q,
        generators: gens,
        group_is_pgl: expect_pgl,
        bipartite,
    })
}
