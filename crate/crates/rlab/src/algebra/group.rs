//! BFS closure of a generating set inside a finite group.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use crate::algebra::ff::FiniteField;
use crate::algebra::matrix::ProjMatrix;
use crate::error::{RlabError, Result};

/// A finite group listed in a deterministic order: BFS from the identity,
/// expanding by the generators in their given order.
#[derive(Clone, Debug)]
pub struct GroupClosure<T> {
    pub elements: Vec<T>,
    pub index: HashMap<T, usize>,
}

impl<T> GroupClosure<T> {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Close `gens` under multiplication, starting from `identity`. Elements must
/// be in canonical form so that equality testing identifies group elements.
/// Errors once more than `cap` elements are discovered.
pub fn group_closure<T: Clone + Eq + Hash>(
    identity: T,
    gens: &[T],
    mut mul: impl FnMut(&T, &T) -> T,
    cap: usize,
) -> Result<GroupClosure<T>> {
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::new();
    index.insert(identity, 0usize);
    let mut head = 0;
    while head < elements.len() {
        let g = elements[head].clone();
        head += 1;
        for s in gens {
            let h = mul(&g, s);
            if !index.contains_key(&h) {
                if elements.len() >= cap {
                    return Err(RlabError::CapExceeded(format!(
                        "group closure exceeded cap {cap}"
                    )));
                }
                index.insert(h.clone(), elements.len());
                elements.push(h);
            }
        }
    }
    Ok(GroupClosure { elements, index })
}

/// Closure for projective matrix groups.
pub fn proj_group_closure(
    gens: &[ProjMatrix],
    f: &Arc<FiniteField>,
    cap: usize,
) -> Result<GroupClosure<ProjMatrix>> {
    let n = match gens.first() {
        Some(g) => g.0.n,
        None => return group_closure(ProjMatrix::identity(1), &[], |a, b| a.mul(b, f), cap),
    };
    group_closure(ProjMatrix::identity(n), gens, |a, b| a.mul(b, f), cap)
}

/// Right-multiplication Cayley adjacency: out[v][k] is the index of
/// elements[v] * gens[k].
pub fn cayley_neighbors<T: Clone + Eq + Hash>(
    group: &GroupClosure<T>,
    gens: &[T],
    mut mul: impl FnMut(&T, &T) -> T,
) -> Vec<Vec<usize>> {
    group
        .elements
        .iter()
        .map(|g| {
            gens.iter()
                .map(|s| group.index[&mul(g, s)])
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::{proj_canonical, FMatrix};

    #[test]
    fn trivial_group() {
        let f = FiniteField::prime(3).unwrap();
        let g = proj_group_closure(&[ProjMatrix::identity(2)], &f, 10).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn pgl2_f3_order_24() {
        let f = FiniteField::prime(3).unwrap();
        let gens = vec![
            proj_canonical(&FMatrix::from_rows(&[vec![1, 1], vec![0, 1]]), &f).unwrap(),
            proj_canonical(&FMatrix::from_rows(&[vec![0, 1], vec![1, 0]]), &f).unwrap(),
        ];
        let g = proj_group_closure(&gens, &f, 1000).unwrap();
        assert_eq!(g.order(), 24);
        // every element's inverse is in the closure
        for m in &g.elements {
            assert!(g.index.contains_key(&m.inv(&f)));
        }
    }

    #[test]
    fn cap_exceeded() {
        let f = FiniteField::prime(3).unwrap();
        let gens = vec![
            proj_canonical(&FMatrix::from_rows(&[vec![1, 1], vec![0, 1]]), &f).unwrap(),
            proj_canonical(&FMatrix::from_rows(&[vec![0, 1], vec![1, 0]]), &f).unwrap(),
        ];
        assert!(matches!(
            proj_group_closure(&gens, &f, 10),
            Err(RlabError::CapExceeded(_))
        ));
    }

    #[test]
    fn cayley_neighbors_permute() {
        let f = FiniteField::prime(3).unwrap();
        let gens = vec![
            proj_canonical(&FMatrix::from_rows(&[vec![1, 1], vec![0, 1]]), &f).unwrap(),
            proj_canonical(&FMatrix::from_rows(&[vec![0, 1], vec![1, 0]]), &f).unwrap(),
        ];
        let g = proj_group_closure(&gens, &f, 1000).unwrap();
        let nb = cayley_neighbors(&g, &gens, |a, b| a.mul(b, &f));
        // each generator acts as a permutation of the elements
        for k in 0..gens.len() {
            let mut seen = vec![false; g.order()];
            for row in &nb {
                assert!(!seen[row[k]]);
                seen[row[k]] = true;
            }
        }
    }

    #[test]
    fn deterministic_ordering() {
        let f = FiniteField::prime(3).unwrap();
        let gens = vec![
            proj_canonical(&FMatrix::from_rows(&[vec![1, 1], vec![0, 1]]), &f).unwrap(),
            proj_canonical(&FMatrix::from_rows(&[vec![0, 1], vec![1, 0]]), &f).unwrap(),
        ];
        let a = proj_group_closure(&gens, &f, 1000).unwrap();
        let b = proj_group_closure(&gens, &f, 1000).unwrap();
        assert_eq!(a.elements, b.elements);
    }
}
