//! Exhaustive reference implementations for small instances.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::convexmax::{compare_candidates, ConvexObjective, ObjectiveWeights};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;

/// Box and point budget for lattice enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumBudget<T> {
    pub max_points: u64,
    /// Upper bound per variable; defaults to the largest `|b_i|`.
    pub bounds: Option<Vec<T>>,
}

impl<T> Default for EnumBudget<T> {
    fn default() -> Self {
        EnumBudget { max_points: 1_000_000, bounds: None }
    }
}

/// All `x` with `A x = b`, `0 <= x <= bounds`, in lexicographic order.
pub fn enumerate_feasible<T: Scalar>(a: &Matrix<T>, b: &[T], budget: &EnumBudget<T>) -> Result<Vec<Vector<T>>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!("right-hand side of length {} for {} rows", b.len(), a.rows())));
    }
    let n = a.cols();
    let bounds: Vec<T> = match &budget.bounds {
        Some(u) if u.len() != n => {
            return Err(Error::Dimension(format!("{} bounds for {n} variables", u.len())));
        }
        Some(u) => u.clone(),
        None => vec![b.iter().map(|e| e.abs()).max().unwrap_or_else(T::zero); n],
    };
    if bounds.iter().any(|u| u.is_negative()) {
        return Err(Error::Invalid("negative enumeration bound".into()));
    }
    let mut needed: u128 = 1;
    for u in &bounds {
        let side = u.to_u128().and_then(|v| v.checked_add(1)).unwrap_or(u128::MAX);
        needed = needed.saturating_mul(side);
    }
    if needed > u128::from(budget.max_points) {
        return Err(Error::BudgetExceeded { needed, limit: budget.max_points });
    }

    let columns: Vec<Vector<T>> = (0..n).map(|j| a.column(j)).collect();
    let mut x = vec![T::zero(); n];
    let mut ax = vec![T::zero(); a.rows()];
    let mut out = Vec::new();
    loop {
        if ax.iter().zip(b).all(|(l, r)| l == r) {
            out.push(Vector::new(x.clone()));
        }
        // odometer with the last coordinate moving fastest
        let mut j = n;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            if x[j] < bounds[j] {
                x[j] = x[j].clone() + T::one();
                for (acc, c) in ax.iter_mut().zip(columns[j].iter()) {
                    *acc = acc.clone() + c.clone();
                }
                break;
            }
            for (acc, c) in ax.iter_mut().zip(columns[j].iter()) {
                *acc = acc.clone() - c.clone() * x[j].clone();
            }
            x[j] = T::zero();
        }
    }
}

/// The best feasible point under `c(W x)`, with the same tie-break as the
/// zonotope-based solver. Returns `(x, W x)`.
pub fn brute_convex_max<T: Scalar, C: ConvexObjective<T> + ?Sized>(
    points: &[Vector<T>],
    weights: &ObjectiveWeights<T>,
    c: &C,
) -> Result<(Vector<T>, Vector<T>)> {
    let mut best: Option<(Vector<T>, Vector<T>)> = None;
    for x in points {
        if x.len() != weights.n() {
            return Err(Error::Dimension(format!("point of length {} for {} weights", x.len(), weights.n())));
        }
        let z = weights.project(x);
        let better = match &best {
            None => true,
            Some((bx, bz)) => compare_candidates(c, (&z, x), (bz, bx)) == Ordering::Greater,
        };
        if better {
            best = Some((x.clone(), z));
        }
    }
    best.ok_or(Error::Empty("feasible points"))
}

fn cross<T: Scalar>(o: &[T], a: &[T], b: &[T]) -> T {
    (a[0].clone() - o[0].clone()) * (b[1].clone() - o[1].clone())
        - (a[1].clone() - o[1].clone()) * (b[0].clone() - o[0].clone())
}

/// Vertices of the convex hull of planar points, counterclockwise from the
/// lexicographically smallest; collinear boundary points are dropped.
pub fn hull_vertices_2d<T: Scalar>(points: &[Vector<T>]) -> Result<Vec<Vector<T>>> {
    if let Some(p) = points.iter().find(|p| p.len() != 2) {
        return Err(Error::Dimension(format!("planar hull of point {p}")));
    }
    let pts: Vec<Vector<T>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if pts.len() < 3 {
        return Ok(pts);
    }
    let mut lower: Vec<Vector<T>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vector<T>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(lower)
}

/// Primitive directions of the edges of the planar convex hull, one per
/// parallel class, sign-normalized and sorted.
pub fn hull_edges_2d<T: Scalar>(points: &[Vector<T>]) -> Result<Vec<Vector<T>>> {
    let hull = hull_vertices_2d(points)?;
    if hull.len() < 2 {
        return Ok(Vec::new());
    }
    let dirs: BTreeSet<Vector<T>> = (0..hull.len())
        .map(|i| hull[(i + 1) % hull.len()].sub(&hull[i]).primitive().canonical_sign())
        .collect();
    Ok(dirs.into_iter().collect())
}

/// Whether some `c` has `row c > 0` for every row (exact Fourier-Motzkin).
pub fn strictly_feasible<T: Scalar>(rows: &[Vector<T>]) -> bool {
    let Some(dim) = rows.first().map(|r| r.len()) else {
        return true;
    };
    let mut current: BTreeSet<Vector<T>> = rows.iter().map(|r| r.primitive()).collect();
    for k in 0..dim {
        if current.iter().any(|r| r.is_zero()) {
            return false;
        }
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), BTreeSet::new());
        for r in current {
            if r[k].is_positive() {
                pos.push(r);
            } else if r[k].is_negative() {
                neg.push(r);
            } else {
                rest.insert(r);
            }
        }
        for p in &pos {
            for q in &neg {
                // positive combination cancelling coordinate k
                let combined = p.scaled(&-q[k].clone()).add(&q.scaled(&p[k]));
                rest.insert(combined.primitive());
            }
        }
        current = rest;
    }
    current.iter().all(|r| !r.is_zero())
}

/// Vertices of `zone(generators)` by trying every sign vector: a signed sum
/// is a vertex exactly when its signs are realized strictly by some
/// direction on the nonzero generators.
pub fn zonotope_vertices_exhaustive<T: Scalar>(generators: &[Vector<T>], dim: usize) -> Result<Vec<Vector<T>>> {
    if let Some(bad) = generators.iter().find(|e| e.len() != dim) {
        return Err(Error::Dimension(format!("generator {bad} in dimension {dim}")));
    }
    let nonzero: Vec<&Vector<T>> = generators.iter().filter(|e| !e.is_zero()).collect();
    if nonzero.len() > 20 {
        return Err(Error::BudgetExceeded { needed: 1u128 << nonzero.len(), limit: 1 << 20 });
    }
    let mut out = BTreeSet::new();
    for mask in 0u32..(1u32 << nonzero.len()) {
        let signed: Vec<Vector<T>> = nonzero
            .iter()
            .enumerate()
            .map(|(i, e)| if mask >> i & 1 == 1 { e.neg() } else { (*e).clone() })
            .collect();
        if strictly_feasible(&signed) {
            out.insert(signed.iter().fold(Vector::zeros(dim), |acc, e| acc.add(e)));
        }
    }
    Ok(out.into_iter().collect())
}

/// All `2^m` signed sums of the generators, deduplicated.
pub fn signed_sums<T: Scalar>(generators: &[Vector<T>], dim: usize) -> Vec<Vector<T>> {
    let mut sums = BTreeSet::from([Vector::zeros(dim)]);
    for e in generators {
        sums = sums.iter().flat_map(|s| [s.add(e), s.sub(e)]).collect();
    }
    sums.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexmax::Builtin;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type V = Vector<BigInt>;

    fn v(e: &[i64]) -> V {
        Vector::from_ints(e)
    }

    fn vs(e: &[&[i64]]) -> Vec<V> {
        e.iter().map(|p| v(p)).collect()
    }

    fn m(rows: usize, cols: usize, e: &[i64]) -> Matrix<BigInt> {
        Matrix::from_ints(rows, cols, e).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let budget = EnumBudget { max_points: 100, bounds: Some(vec![BigInt::from(3); 2]) };
        let pts = enumerate_feasible(&m(1, 2, &[1, 1]), &v(&[3]), &budget).unwrap();
        assert_eq!(pts, vs(&[&[0, 3], &[1, 2], &[2, 1], &[3, 0]]));
        assert!(enumerate_feasible(&m(1, 2, &[1, 1]), &v(&[-1]), &EnumBudget::default()).unwrap().is_empty());
        let transport = m(4, 4, &[1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 1, 0, 0, 1, 0, 1]);
        let pts = enumerate_feasible(&transport, &v(&[1, 1, 1, 1]), &EnumBudget::default()).unwrap();
        assert_eq!(pts, vs(&[&[0, 1, 1, 0], &[1, 0, 0, 1]]));
    }

    #[test]
    fn enumeration_budget() {
        let budget = EnumBudget { max_points: 10, bounds: None };
        assert!(matches!(
            enumerate_feasible(&m(1, 3, &[1, 1, 1]), &v(&[3]), &budget),
            Err(Error::BudgetExceeded { needed: 64, limit: 10 })
        ));
    }

    #[test]
    fn convex_examples() {
        let weights = ObjectiveWeights::new(vs(&[&[1, 0], &[0, 1]])).unwrap();
        let pts = vs(&[&[0, 3], &[1, 2], &[2, 1], &[3, 0]]);
        let (x, z) = brute_convex_max(&pts, &weights, &Builtin::Norm2).unwrap();
        assert_eq!((x, z), (v(&[0, 3]), v(&[0, 3])));
        let single = vs(&[&[1, 2]]);
        assert_eq!(brute_convex_max(&single, &weights, &Builtin::Norm2).unwrap().0, v(&[1, 2]));
        let line = ObjectiveWeights::new(vs(&[&[2, -1]])).unwrap();
        assert_eq!(brute_convex_max(&pts, &line, &Builtin::Linear(v(&[1]))).unwrap().1, v(&[6]));
        assert!(brute_convex_max(&[], &weights, &Builtin::Norm2).is_err());
    }

    #[test]
    fn hull_examples() {
        assert_eq!(hull_edges_2d(&vs(&[&[0, 0], &[2, 2], &[1, 1]])).unwrap(), vs(&[&[1, 1]]));
        assert_eq!(hull_edges_2d(&vs(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap(), vs(&[&[0, 1], &[1, 0]]));
        assert_eq!(hull_edges_2d(&vs(&[&[0, 3], &[1, 2], &[2, 1], &[3, 0]])).unwrap(), vs(&[&[1, -1]]));
        assert!(hull_edges_2d(&vs(&[&[5, 5], &[5, 5]])).unwrap().is_empty());
        assert_eq!(
            hull_vertices_2d(&vs(&[&[0, 0], &[2, 0], &[1, 0], &[2, 2], &[0, 2], &[1, 1]])).unwrap(),
            vs(&[&[0, 0], &[2, 0], &[2, 2], &[0, 2]])
        );
    }

    #[test]
    fn fourier_motzkin() {
        assert!(strictly_feasible(&vs(&[&[1, 0], &[0, 1]])));
        assert!(!strictly_feasible(&vs(&[&[1, 0], &[-1, 0]])));
        assert!(!strictly_feasible(&vs(&[&[1, 1], &[-1, 0], &[0, -1]])));
        assert!(strictly_feasible(&vs(&[&[1, 1], &[-1, 0], &[0, 1]])));
        assert!(!strictly_feasible(&vs(&[&[0, 0]])));
    }

    #[test]
    fn exhaustive_zonotope() {
        let out = zonotope_vertices_exhaustive(&vs(&[&[1, 0], &[0, 1], &[1, 1]]), 2).unwrap();
        assert_eq!(out, vs(&[&[-2, -2], &[-2, 0], &[0, -2], &[0, 2], &[2, 0], &[2, 2]]));
        assert_eq!(zonotope_vertices_exhaustive::<BigInt>(&[], 2).unwrap(), vs(&[&[0, 0]]));
        assert_eq!(zonotope_vertices_exhaustive(&vs(&[&[1, 1], &[2, 2]]), 2).unwrap(), vs(&[&[-3, -3], &[3, 3]]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn planar_zonotope_oracles_agree(
            raw in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 0..7)
        ) {
            let d: Vec<V> = raw.iter().map(|p| v(p)).collect();
            let by_signs = zonotope_vertices_exhaustive(&d, 2).unwrap();
            let mut by_hull = hull_vertices_2d(&signed_sums(&d, 2)).unwrap();
            by_hull.sort();
            prop_assert_eq!(by_signs, by_hull);
        }

        #[test]
        fn enumeration_is_sorted_and_exact(b in 0i64..5, c in 1i64..3) {
            let a = m(1, 3, &[1, c, 1]);
            let pts = enumerate_feasible(&a, &v(&[b]), &EnumBudget::default()).unwrap();
            prop_assert!(pts.windows(2).all(|w| w[0] < w[1]));
            for p in &pts {
                prop_assert!(p.is_nonnegative());
                prop_assert_eq!(a.mat_vec(p).unwrap(), v(&[b]));
            }
        }
    }
}
