//! Discrepancy, the Cheeger-inequality validator, and the mixing validator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{boundary_f2, boundary_real, laplacian, LapVariant, SimplicialComplex};
use crate::error::{RlabError, Result};
use crate::expansion::cheeger::{cheeger_graph, cheeger_highdim, transversal_count};
use crate::spectra::eigs::sym_eigs;
use crate::spectra::gaps::{kernel_basis_real, spectral_gap};
use crate::spectra::ramanujan::mu_values;

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut r = 1.0;
    for j in 0..k {
        r = r * (n - j) as f64 / (j + 1) as f64;
    }
    r
}

/// | |F(A_0,...,A_d)| - |X^(d)| prod|A_i| / C(n, d+1) |: the deviation of the
/// transversal count from the count a perfectly uniform complex would give.
pub fn discrepancy(x: &SimplicialComplex, sets: &[Vec<usize>]) -> Result<f64> {
    let d = x.dim();
    if sets.len() != d + 1 {
        return Err(RlabError::InvalidInput(format!(
            "need d+1 = {} sets, got {}",
            d + 1,
            sets.len()
        )));
    }
    let mut labels = vec![usize::MAX; x.n];
    for (l, s) in sets.iter().enumerate() {
        for &v in s {
            if v >= x.n {
                return Err(RlabError::InvalidInput(format!("vertex {v} out of range")));
            }
            if labels[v] != usize::MAX {
                return Err(RlabError::InvalidInput(format!(
                    "vertex {v} appears in two sets"
                )));
            }
            labels[v] = l;
        }
    }
    let f = transversal_count(x, &labels, d + 1) as f64;
    let prod: f64 = sets.iter().map(|s| s.len() as f64).product();
    let expected = x.count(d as isize) as f64 * prod / binomial(x.n, d + 1);
    Ok((f - expected).abs())
}

#[derive(Clone, Debug)]
pub struct CheegerValidation {
    pub dim: usize,
    pub h: f64,
    /// h^2/(8k) for graphs; d(1-(d-1)/n)^2 h^2/(8k) - (d-1)k for complexes.
    pub lower: f64,
    /// k - mu_1 for graphs; lambda_{d-1}(X) for complexes.
    pub gap: f64,
    pub ok: bool,
}

/// Degree of each (d-1)-cell: the number of d-cells containing it.
fn cell_degrees(x: &SimplicialComplex, d: usize) -> Result<Vec<usize>> {
    let b = boundary_f2(x, d as isize)?;
    let mut deg = vec![0usize; b.rows];
    for r in 0..b.rows {
        for c in 0..b.cols {
            if b.get(r, c) {
                deg[r] += 1;
            }
        }
    }
    Ok(deg)
}

fn require_complete_skeleton(x: &SimplicialComplex, d: usize) -> Result<()> {
    let expect = binomial(x.n, d) as usize;
    if x.count(d as isize - 1) != expect {
        return Err(RlabError::InvalidInput(format!(
            "the ({}-1)-skeleton is not complete: {} of {} cells",
            d,
            x.count(d as isize - 1),
            expect
        )));
    }
    Ok(())
}

/// Check the two-sided Cheeger inequality. For a k-regular graph:
/// h^2/(8k) <= k - mu_1 <= h. For a d-complex with complete (d-1)-skeleton,
/// with k the maximal (d-1)-cell degree and lambda the spectral gap in
/// dimension d-1: d(1-(d-1)/n)^2 h^2/(8k) - (d-1)k <= lambda <= h.
pub fn validate_cheeger_inequalities(x: &SimplicialComplex) -> Result<CheegerValidation> {
    let d = x.dim();
    let tol = 1e-9;
    if d == 0 {
        return Err(RlabError::InvalidInput("0-dimensional complex".into()));
    }
    if d == 1 {
        let g = x.skeleton_graph();
        let k = g
            .regularity()
            .ok_or_else(|| RlabError::InvalidInput("graph is not regular".into()))?
            as f64;
        let (_, _, mu1) = mu_values(&g, 1e-8)?;
        let h = cheeger_graph(&g)?.h;
        let lower = h * h / (8.0 * k);
        let gap = k - mu1;
        return Ok(CheegerValidation {
            dim: 1,
            h,
            lower,
            gap,
            ok: lower <= gap + tol && gap <= h + tol,
        });
    }
    require_complete_skeleton(x, d)?;
    let k = *cell_degrees(x, d)?
        .iter()
        .max()
        .ok_or_else(|| RlabError::InvalidInput("no (d-1)-cells".into()))? as f64;
    let (h, _) = cheeger_highdim(x)?;
    let lambda = spectral_gap(x, d - 1)?;
    let n = x.n as f64;
    let df = d as f64;
    let lower = df * (1.0 - (df - 1.0) / n).powi(2) * h * h / (8.0 * k) - (df - 1.0) * k;
    Ok(CheegerValidation {
        dim: d,
        h,
        lower,
        gap: lambda,
        ok: lower <= lambda + tol && lambda <= h + tol,
    })
}

#[derive(Clone, Debug)]
pub struct MixingReport {
    pub dim: usize,
    /// Average (d-1)-cell degree.
    pub k: f64,
    /// Spectral radius of k*I - Delta_{d-1} restricted to Z_{d-1}.
    pub mu0: f64,
    pub trials: usize,
    pub failures: usize,
    /// Minimum over trials of (bound - deviation); nonnegative iff ok.
    pub worst_slack: f64,
    pub ok: bool,
}

/// mu_0 as the spectral radius of k*I - Delta_{d-1} on the cycle space
/// Z_{d-1} = ker(boundary_{d-1}); the down Laplacian vanishes there.
pub fn mu0_highdim(x: &SimplicialComplex, k: f64) -> Result<f64> {
    let d = x.dim();
    let b = boundary_real(x, d as isize - 1)?;
    let q = kernel_basis_real(&b);
    if q.ncols() == 0 {
        return Err(RlabError::InvalidInput("Z_{d-1} is trivial".into()));
    }
    let up = laplacian(x, d - 1, LapVariant::Up)?;
    let restricted = q.transpose() * up * &q;
    let vals = sym_eigs(&restricted)?;
    Ok(vals.iter().map(|v| (k - v).abs()).fold(0.0, f64::max))
}

/// Random-trial check of the expander mixing bound
/// |F - k prod|A_i| / n| <= mu_0 (prod|A_i|)^{d/(d+1)} over seeded random
/// disjoint tuples; for d = 1 the bound is |E(A,B) - k|A||B|/n| <=
/// mu_0 sqrt(|A||B|).
pub fn validate_mixing(x: &SimplicialComplex, trials: usize, seed: u64) -> Result<MixingReport> {
    let d = x.dim();
    if d == 0 {
        return Err(RlabError::InvalidInput("0-dimensional complex".into()));
    }
    if trials == 0 {
        return Err(RlabError::InvalidInput("need at least one trial".into()));
    }
    require_complete_skeleton(x, d)?;
    let degs = cell_degrees(x, d)?;
    let k = degs.iter().sum::<usize>() as f64 / degs.len() as f64;
    let mu0 = mu0_highdim(x, k)?;
    let n = x.n as f64;
    let tol = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..trials {
        // each vertex lands in one of the d+1 parts or stays out
        let labels: Vec<usize> = (0..x.n)
            .map(|_| {
                let l = rng.gen_range(0..d + 2);
                if l == d + 1 {
                    usize::MAX
                } else {
                    l
                }
            })
            .collect();
        let mut sizes = vec![0usize; d + 1];
        for &l in &labels {
            if l != usize::MAX {
                sizes[l] += 1;
            }
        }
        let f = transversal_count(x, &labels, d + 1) as f64;
        let prod: f64 = sizes.iter().map(|&s| s as f64).product();
        let (dev, bound) = if d == 1 {
            (
                (f - k * prod / n).abs(),
                mu0 * prod.sqrt(),
            )
        } else {
            (
                (f - k * prod / n).abs(),
                mu0 * prod.powf(d as f64 / (d as f64 + 1.0)),
            )
        };
        let slack = bound - dev;
        worst = worst.min(slack);
        if slack < -tol {
            failures += 1;
        }
    }
    Ok(MixingReport {
        dim: d,
        k,
        mu0,
        trials,
        failures,
        worst_slack: worst,
        ok: failures == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::clique_complex;
    use crate::graph::Graph;

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
    fn discrepancy_complete_is_zero() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (n, d) in [(5usize, 1usize), (6, 2), (7, 2)] {
            let x = complete_complex(n, d);
            for _ in 0..30 {
                let mut sets = vec![Vec::new(); d + 1];
                for v in 0..n {
                    let l = rng.gen_range(0..d + 2);
                    if l <= d {
                        sets[l].push(v);
                    }
                }
                let val = discrepancy(&x, &sets).unwrap();
                assert!(val.abs() < 1e-9, "n={n} d={d} val={val}");
            }
        }
    }

    #[test]
    fn discrepancy_tetrahedron_singletons() {
        let x = SimplicialComplex::from_faces(
            4,
            &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        )
        .unwrap();
        let v = discrepancy(&x, &[vec![0], vec![1], vec![2]]).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn discrepancy_empty_set() {
        let x = complete_complex(5, 2);
        let v = discrepancy(&x, &[vec![], vec![1], vec![2]]).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn discrepancy_overlap_rejected() {
        let x = complete_complex(4, 1);
        assert!(discrepancy(&x, &[vec![0, 1], vec![1]]).is_err());
    }

    #[test]
    fn cheeger_inequality_k4() {
        let x = complete_complex(4, 1);
        let r = validate_cheeger_inequalities(&x).unwrap();
        assert!(r.ok);
        assert!((r.h - 4.0).abs() < 1e-9);
        assert!((r.gap - 4.0).abs() < 1e-8); // k - mu1 = 3 - (-1)
        assert!((r.lower - 16.0 / 24.0).abs() < 1e-9);
    }

    #[test]
    fn cheeger_inequality_c4() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let x = clique_complex(&c4, 1, 100).unwrap();
        let r = validate_cheeger_inequalities(&x).unwrap();
        assert!(r.ok);
        assert!((r.h - 2.0).abs() < 1e-9);
        assert!((r.gap - 2.0).abs() < 1e-8); // k - mu1 = 2 - 0
    }

    #[test]
    fn cheeger_inequality_random_2complexes() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let mut tested = 0;
        for _ in 0..100 {
            let n = rng.gen_range(4..=8);
            // complete 1-skeleton, random triangles
            let mut faces: Vec<Vec<usize>> = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    faces.push(vec![i, j]);
                    for l in j + 1..n {
                        if rng.gen_bool(0.5) {
                            faces.push(vec![i, j, l]);
                        }
                    }
                }
            }
            let x = SimplicialComplex::from_faces(n, &faces).unwrap();
            if x.dim() != 2 {
                continue;
            }
            let r = validate_cheeger_inequalities(&x).unwrap();
            assert!(r.ok, "n={n}: lower={} gap={} h={}", r.lower, r.gap, r.h);
            tested += 1;
        }
        assert!(tested > 80);
    }

    #[test]
    fn incomplete_skeleton_rejected() {
        let x = SimplicialComplex::from_faces(4, &[vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        assert!(validate_cheeger_inequalities(&x).is_err());
        assert!(validate_mixing(&x, 10, 0).is_err());
    }

    #[test]
    fn mixing_complete_2complex() {
        let x = complete_complex(6, 2);
        let r = validate_mixing(&x, 100, 7).unwrap();
        assert!(r.ok, "worst slack {}", r.worst_slack);
        assert_eq!(r.failures, 0);
        // complete complex: every (d-1)-cell degree is n - d = 4
        assert!((r.k - 4.0).abs() < 1e-12);
    }

    #[test]
    fn mixing_k4_graph() {
        let x = complete_complex(4, 1);
        let r = validate_mixing(&x, 200, 11).unwrap();
        assert!(r.ok);
        assert!((r.mu0 - 1.0).abs() < 1e-8);
    }
}
