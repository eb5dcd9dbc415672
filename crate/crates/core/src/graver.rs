//! Conformal order, Graver bases by normal-form completion, and conformal
//! decomposition of kernel vectors.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use crate::error::{Error, Result};
use crate::linalg::{lattice_kernel_basis, Matrix, Vector};
use crate::scalar::Scalar;
use crate::Limits;

/// `u ⊑ v`: same orthant and `|u_i| <= |v_i|` everywhere.
pub fn conformal_leq<T: Scalar>(u: &[T], v: &[T]) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::Dimension(format!("conformal order on lengths {} and {}", u.len(), v.len())));
    }
    Ok(is_conformal(u, v))
}

pub(crate) fn is_conformal<T: Scalar>(u: &[T], v: &[T]) -> bool {
    u.iter().zip(v).all(|(a, b)| {
        a.is_zero() || (a.signum() == b.signum() && a.abs() <= b.abs())
    })
}

/// The Graver basis of a matrix: the full sign-symmetric set, sorted
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis<T> {
    matrix: Matrix<T>,
    elements: Vec<Vector<T>>,
}

impl<T: Scalar> Basis<T> {
    /// Wraps a set of elements, closing it under negation and sorting it.
    /// Checks membership in the kernel; minimality is not re-verified here.
    pub fn from_elements(matrix: Matrix<T>, elements: impl IntoIterator<Item = Vector<T>>) -> Result<Self> {
        // sparse columns, so the kernel check costs only the support of each element
        let columns: Vec<Vec<(usize, T)>> = (0..matrix.cols())
            .map(|c| {
                (0..matrix.rows())
                    .filter(|&r| !matrix.get(r, c).is_zero())
                    .map(|r| (r, matrix.get(r, c).clone()))
                    .collect()
            })
            .collect();
        let mut acc = vec![T::zero(); matrix.rows()];
        let mut all: Vec<Vector<T>> = Vec::new();
        for e in elements {
            if e.len() != matrix.cols() {
                return Err(Error::Dimension(format!("element of length {} for {} columns", e.len(), matrix.cols())));
            }
            if e.is_zero() {
                return Err(Error::Invalid("zero vector in a Graver basis".into()));
            }
            let mut touched = Vec::new();
            for (c, x) in e.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for (r, a) in &columns[c] {
                    acc[*r] = acc[*r].clone() + a.clone() * x.clone();
                    touched.push(*r);
                }
            }
            let mut in_kernel = true;
            for r in touched {
                in_kernel &= acc[r].is_zero();
                acc[r] = T::zero();
            }
            if !in_kernel {
                return Err(Error::Invalid(format!("{e} is not in the kernel")));
            }
            all.push(e.neg());
            all.push(e);
        }
        all.sort();
        all.dedup();
        Ok(Basis { matrix, elements: all })
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.cols()
    }

    /// All elements, both signs, lexicographically sorted.
    pub fn elements(&self) -> &[Vector<T>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, v: &Vector<T>) -> bool {
        self.elements.binary_search(v).is_ok()
    }

    /// The representatives with a positive first nonzero entry, in order.
    pub fn canonical(&self) -> impl Iterator<Item = &Vector<T>> {
        self.elements.iter().filter(|e| e.is_canonical_sign())
    }

    /// Canonical representatives as the rows of a matrix (the file form).
    pub fn to_matrix(&self) -> Matrix<T> {
        Matrix::from_rows(self.canonical().cloned().collect(), self.dim()).expect("uniform lengths")
    }

    /// Checks sign symmetry, kernel membership and pairwise ⊑-incomparability.
    pub fn check_invariants(&self) -> Result<()> {
        for e in &self.elements {
            if e.is_zero() {
                return Err(Error::Inconsistent("zero element".into()));
            }
            if !self.contains(&e.neg()) {
                return Err(Error::Inconsistent(format!("{e} present without its negative")));
            }
            if !self.matrix.mat_vec(e)?.is_zero() {
                return Err(Error::Inconsistent(format!("{e} outside the kernel")));
            }
        }
        for u in &self.elements {
            for v in &self.elements {
                if u != v && is_conformal(u, v) {
                    return Err(Error::Inconsistent(format!("{u} ⊑ {v}")));
                }
            }
        }
        Ok(())
    }
}

/// Positive and negative supports as bitsets, for fast conformality rejection.
#[derive(Clone)]
struct SignMask {
    pos: Vec<u64>,
    neg: Vec<u64>,
}

impl SignMask {
    fn of<T: Scalar>(v: &[T]) -> Self {
        let words = v.len().div_ceil(64).max(1);
        let mut m = SignMask { pos: vec![0; words], neg: vec![0; words] };
        for (i, e) in v.iter().enumerate() {
            if e.is_positive() {
                m.pos[i / 64] |= 1 << (i % 64);
            } else if e.is_negative() {
                m.neg[i / 64] |= 1 << (i % 64);
            }
        }
        m
    }

    /// Could `self` be conformal to `other` (signs only)?
    fn fits(&self, other: &SignMask) -> bool {
        self.pos.iter().zip(&other.pos).all(|(a, b)| a & !b == 0)
            && self.neg.iter().zip(&other.neg).all(|(a, b)| a & !b == 0)
    }

    /// Could `-self` be conformal to `other`?
    fn fits_negated(&self, other: &SignMask) -> bool {
        self.pos.iter().zip(&other.neg).all(|(a, b)| a & !b == 0)
            && self.neg.iter().zip(&other.pos).all(|(a, b)| a & !b == 0)
    }

    /// No coordinate where the two vectors have opposite signs.
    fn compatible(&self, other: &SignMask) -> bool {
        self.pos.iter().zip(&other.neg).all(|(a, b)| a & b == 0)
            && self.neg.iter().zip(&other.pos).all(|(a, b)| a & b == 0)
    }

    /// No coordinate where the two vectors share a sign.
    fn compatible_negated(&self, other: &SignMask) -> bool {
        self.pos.iter().zip(&other.pos).all(|(a, b)| a & b == 0)
            && self.neg.iter().zip(&other.neg).all(|(a, b)| a & b == 0)
    }
}

struct Element<T> {
    v: Vector<T>,
    mask: SignMask,
    norm: T,
}

impl<T: Scalar> Element<T> {
    fn new(v: Vector<T>) -> Self {
        let mask = SignMask::of(&v);
        let norm = v.norm1();
        Element { v, mask, norm }
    }
}

/// Reduces `s` by conformal subtraction of any element (either sign).
fn normal_form<T: Scalar>(mut s: Vector<T>, reducers: &[Element<T>]) -> Vector<T> {
    'outer: loop {
        if s.is_zero() {
            return s;
        }
        let mask = SignMask::of(&s);
        let norm = s.norm1();
        for r in reducers {
            if r.norm > norm {
                continue;
            }
            let sign = if r.mask.fits(&mask) && is_conformal(&r.v, &s) {
                T::one()
            } else if r.mask.fits_negated(&mask) && is_conformal(&r.v.neg(), &s) {
                -T::one()
            } else {
                continue;
            };
            let step = -sign.clone();
            let next = r.v.scaled(&sign);
            loop {
                s.add_scaled(&step, &r.v);
                if s.is_zero() || !is_conformal(&next, &s) {
                    break;
                }
            }
            continue 'outer;
        }
        return s;
    }
}

/// The Graver basis of `a` under the default size guard.
pub fn graver_basis<T: Scalar>(a: &Matrix<T>) -> Result<Basis<T>> {
    graver_basis_with(a, &Limits::default())
}

/// Completion: seed with a lattice kernel basis, add every irreducible
/// pairwise sum until closure, then keep the ⊑-minimal elements.
pub fn graver_basis_with<T: Scalar>(a: &Matrix<T>, limits: &Limits) -> Result<Basis<T>> {
    let mut reps: Vec<Element<T>> = Vec::new();
    let mut queue: BinaryHeap<Reverse<(T, Vector<T>)>> = BinaryHeap::new();
    let mut queued: HashSet<Vector<T>> = HashSet::new();
    for k in lattice_kernel_basis(a) {
        let k = k.canonical_sign();
        if queued.insert(k.clone()) {
            queue.push(Reverse((k.norm1(), k)));
        }
    }
    while let Some(Reverse((_, s))) = queue.pop() {
        let r = normal_form(s, &reps);
        if r.is_zero() {
            continue;
        }
        let r = Element::new(r.canonical_sign());
        for h in &reps {
            // a sign-compatible pair sums conformally, so it reduces to zero
            if r.mask.compatible(&h.mask) {
                continue;
            }
            let cand = r.v.add(&h.v).canonical_sign();
            if !cand.is_zero() && queued.insert(cand.clone()) {
                queue.push(Reverse((cand.norm1(), cand)));
            }
        }
        for h in &reps {
            if !r.mask.compatible_negated(&h.mask) {
                let cand = r.v.sub(&h.v).canonical_sign();
                if !cand.is_zero() && queued.insert(cand.clone()) {
                    queue.push(Reverse((cand.norm1(), cand)));
                }
            }
        }
        reps.push(r);
        if 2 * reps.len() > limits.max_basis {
            return Err(Error::BasisTooLarge { limit: limits.max_basis });
        }
    }
    let minimal = minimal_elements(reps.into_iter().map(|e| e.v).collect());
    Basis::from_elements(a.clone(), minimal)
}

/// Keeps the ⊑-minimal vectors of a sign-canonical set (signs are compared
/// both ways).
fn minimal_elements<T: Scalar>(mut vs: Vec<Vector<T>>) -> Vec<Vector<T>> {
    vs.sort_by(|a, b| a.norm1().cmp(&b.norm1()).then_with(|| a.cmp(b)));
    vs.dedup();
    let mut kept: Vec<Element<T>> = Vec::new();
    for v in vs {
        let e = Element::new(v);
        let dominated = kept.iter().any(|k| {
            (k.mask.fits(&e.mask) && is_conformal(&k.v, &e.v))
                || (k.mask.fits_negated(&e.mask) && is_conformal(&k.v.neg(), &e.v))
        });
        if !dominated {
            kept.push(e);
        }
    }
    kept.into_iter().map(|e| e.v).collect()
}

/// Exhaustive oracle: the ⊑-minimal nonzero kernel points of `[-bound, bound]^n`.
///
/// Agrees with [`graver_basis`] whenever every true Graver element fits in
/// the box.
pub fn brute_force_graver<T: Scalar>(a: &Matrix<T>, bound: u32, max_points: u64) -> Result<Basis<T>> {
    let n = a.cols();
    let side = 2 * bound as u128 + 1;
    let needed = side.checked_pow(n as u32).unwrap_or(u128::MAX);
    if needed > max_points as u128 {
        return Err(Error::BudgetExceeded { needed, limit: max_points });
    }
    let lo = -T::from_int(bound as i64);
    let hi = T::from_int(bound as i64);
    let columns: Vec<Vector<T>> = (0..n).map(|c| a.column(c)).collect();
    let mut x: Vec<T> = vec![lo.clone(); n];
    let mut ax = a.mat_vec(&x)?;
    let mut found = Vec::new();
    if n == 0 {
        return Basis::from_elements(a.clone(), found);
    }
    loop {
        if ax.is_zero() {
            let v = Vector::new(x.clone());
            if !v.is_zero() && v.is_canonical_sign() {
                found.push(v);
            }
        }
        // odometer, last coordinate fastest; A x is updated incrementally
        let mut i = n;
        loop {
            if i == 0 {
                return Basis::from_elements(a.clone(), minimal_elements(found));
            }
            i -= 1;
            if x[i] < hi {
                x[i] = x[i].clone() + T::one();
                ax.add_scaled(&T::one(), &columns[i]);
                break;
            }
            let span = hi.clone() - lo.clone();
            x[i] = lo.clone();
            ax.add_scaled(&-span, &columns[i]);
        }
    }
}

/// Writes `g` as a sum of basis elements each conformal to `g`, greedily
/// taking the first fitting element in canonical order.
pub fn conformal_decompose<T: Scalar>(g: &Vector<T>, basis: &Basis<T>) -> Result<Vec<Vector<T>>> {
    if g.len() != basis.dim() {
        return Err(Error::Dimension(format!("vector of length {} for a basis in dimension {}", g.len(), basis.dim())));
    }
    let mut rest = g.clone();
    let mut parts = Vec::new();
    while !rest.is_zero() {
        let h = basis
            .elements()
            .iter()
            .find(|h| is_conformal(h, &rest))
            .ok_or_else(|| Error::Inconsistent(format!("no basis element conformal to {rest}")))?;
        rest = rest.sub(h);
        parts.push(h.clone());
    }
    Ok(parts)
}
