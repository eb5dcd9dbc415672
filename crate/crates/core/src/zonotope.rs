//! Vertices of the zonotope `zone(D) = conv { sum_e ±e }` together with
//! integer directions that single each vertex out.
//!
//! Vertices correspond to the chambers of the central arrangement
//! `{ c : c e = 0 }`. Chambers are built one hyperplane at a time: a chamber
//! of the smaller arrangement is cut by the new hyperplane `h` exactly when
//! it meets `h`, and those are found by recursing into `h` itself, one
//! dimension down.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::linalg::{lattice_kernel_basis, Matrix, Vector};
use crate::scalar::Scalar;
use crate::Limits;

/// A vertex of a zonotope, the sign pattern that produces it and a direction
/// maximized uniquely there.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex<T> {
    pub vertex: Vector<T>,
    pub certificate: Vector<T>,
    /// One sign per generator, in input order; `+1` for zero generators.
    pub signs: Vec<i8>,
}

/// All vertices of `zone(generators)` in `Z^dim`, sorted by vertex.
pub fn zonotope_vertices<T: Scalar>(generators: &[Vector<T>], dim: usize) -> Result<Vec<Vertex<T>>> {
    zonotope_vertices_with(generators, dim, &Limits::default())
}

pub fn zonotope_vertices_with<T: Scalar>(
    generators: &[Vector<T>],
    dim: usize,
    limits: &Limits,
) -> Result<Vec<Vertex<T>>> {
    if dim > limits.max_zonotope_dim {
        return Err(Error::DimensionGuard { dim, limit: limits.max_zonotope_dim });
    }
    if let Some(bad) = generators.iter().find(|e| e.len() != dim) {
        return Err(Error::Dimension(format!("generator {bad} in dimension {dim}")));
    }
    let lines = distinct_lines(generators.iter().cloned());
    let mut out: Vec<Vertex<T>> = chambers(&lines, dim)
        .into_iter()
        .map(|c| {
            let signs: Vec<i8> =
                generators.iter().map(|e| if c.dot(e).is_negative() { -1 } else { 1 }).collect();
            let vertex = generators.iter().zip(&signs).fold(Vector::zeros(dim), |mut acc, (e, s)| {
                acc.add_scaled(&T::from_int(i64::from(*s)), e);
                acc
            });
            Vertex { vertex, certificate: c, signs }
        })
        .collect();
    out.sort();
    debug_assert!(out.windows(2).all(|w| w[0].vertex != w[1].vertex));
    Ok(out)
}

/// Primitive, sign-normalized representatives of the nonzero vectors, sorted.
fn distinct_lines<T: Scalar>(vectors: impl Iterator<Item = Vector<T>>) -> Vec<Vector<T>> {
    vectors
        .filter(|e| !e.is_zero())
        .map(|e| e.primitive().canonical_sign())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// One primitive integer point in the interior of every chamber of the
/// arrangement `{ c : c l = 0 }`, `l` in `lines` (pairwise non-parallel).
fn chambers<T: Scalar>(lines: &[Vector<T>], dim: usize) -> Vec<Vector<T>> {
    let mut points = vec![Vector::zeros(dim)];
    for (k, h) in lines.iter().enumerate() {
        let earlier = &lines[..k];
        // basis of the hyperplane h^perp, as the columns of `basis`
        let basis = lattice_kernel_basis(&Matrix::from_rows(vec![h.clone()], dim).expect("one row"));
        let restricted = distinct_lines(earlier.iter().map(|l| {
            Vector::new(basis.iter().map(|b| b.dot(l)).collect())
        }));
        let mut cut: BTreeMap<Vec<bool>, Vector<T>> = BTreeMap::new();
        for y in chambers(&restricted, dim - 1) {
            let point = basis.iter().zip(y.iter()).fold(Vector::zeros(dim), |mut acc, (b, c)| {
                acc.add_scaled(c, b);
                acc
            });
            cut.insert(signature(&point, earlier), point);
        }
        let scale = earlier.iter().map(|l| l.dot(h).abs()).max().unwrap_or_else(T::zero) + T::one();
        let mut next = Vec::with_capacity(points.len() + cut.len());
        for c in points {
            match cut.get(&signature(&c, earlier)) {
                Some(y) => {
                    let base = y.scaled(&scale);
                    next.push(base.add(h).primitive());
                    next.push(base.sub(h).primitive());
                }
                None => next.push(c),
            }
        }
        points = next;
    }
    points
}

fn signature<T: Scalar>(c: &Vector<T>, lines: &[Vector<T>]) -> Vec<bool> {
    lines
        .iter()
        .map(|l| {
            let s = c.dot(l);
            debug_assert!(!s.is_zero(), "chamber point on a hyperplane");
            s.is_positive()
        })
        .collect()
}

/// Checks that every certificate is maximized uniquely at its own vertex
/// among the given vertices.
pub fn certificates_separate<T: Scalar>(vertices: &[Vertex<T>]) -> bool {
    vertices.iter().all(|v| {
        let own = v.certificate.dot(&v.vertex);
        vertices.iter().all(|u| u.vertex == v.vertex || v.certificate.dot(&u.vertex) < own)
    })
}

/// Upper bound `2 * sum_{i<d} C(m-1, i)` on the number of vertices of a
/// zonotope with `m` generators in dimension `d`.
pub fn vertex_bound(m: usize, d: usize) -> u128 {
    if m == 0 {
        return 1;
    }
    let mut total = 0u128;
    let mut binom = 1u128;
    for i in 0..d {
        if i > m - 1 {
            break;
        }
        total += binom;
        binom = binom * (m - 1 - i) as u128 / (i + 1) as u128;
    }
    2 * total
}
