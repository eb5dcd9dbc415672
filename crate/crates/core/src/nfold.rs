//! n-fold and n-product matrices, Graver complexity, and Graver bases of
//! n-fold matrices by lifting from a fixed number of layers.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graver::{graver_basis_with, Basis};
use crate::linalg::{read_count, read_matrix, write_matrix, Matrix, Vector};
use crate::scalar::Scalar;
use crate::Limits;

/// The fixed `(r+s) x t` block matrix: `a1` couples all layers, `a2` acts
/// on each layer separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stencil<T> {
    a1: Matrix<T>,
    a2: Matrix<T>,
}

impl<T: Scalar> Stencil<T> {
    pub fn new(a1: Matrix<T>, a2: Matrix<T>) -> Result<Self> {
        if a1.cols() != a2.cols() {
            return Err(Error::Dimension(format!(
                "stencil blocks have {} and {} columns",
                a1.cols(),
                a2.cols()
            )));
        }
        Ok(Stencil { a1, a2 })
    }

    pub fn a1(&self) -> &Matrix<T> {
        &self.a1
    }

    pub fn a2(&self) -> &Matrix<T> {
        &self.a2
    }

    pub fn r(&self) -> usize {
        self.a1.rows()
    }

    pub fn s(&self) -> usize {
        self.a2.rows()
    }

    pub fn t(&self) -> usize {
        self.a2.cols()
    }

    /// `a1` over `a2`, the one-layer matrix.
    pub fn stacked(&self) -> Matrix<T> {
        self.a1.vstack(&self.a2).expect("blocks share columns")
    }
}

/// Stencil file: an "r s t" line followed by the `a1` and `a2` blocks in the
/// matrix text format.
pub fn parse_stencil<T: Scalar>(text: &str) -> Result<Stencil<T>> {
    let mut tokens = text.split_whitespace();
    let r = read_count(&mut tokens, "r")?;
    let s = read_count(&mut tokens, "s")?;
    let t = read_count(&mut tokens, "t")?;
    let a1: Matrix<T> = read_matrix(&mut tokens)?;
    let a2: Matrix<T> = read_matrix(&mut tokens)?;
    if (a1.rows(), a1.cols(), a2.rows(), a2.cols()) != (r, t, s, t) {
        return Err(Error::Parse(format!(
            "header says r={r} s={s} t={t} but blocks are {}x{} and {}x{}",
            a1.rows(),
            a1.cols(),
            a2.rows(),
            a2.cols()
        )));
    }
    if let Some(extra) = tokens.next() {
        return Err(Error::Parse(format!("trailing token {extra:?} after stencil")));
    }
    Stencil::new(a1, a2)
}

pub fn write_stencil<T: Scalar>(s: &Stencil<T>) -> String {
    format!("{} {} {}\n{}{}", s.r(), s.s(), s.t(), write_matrix(&s.a1), write_matrix(&s.a2))
}

/// A vector split into `n` bricks of length `t`, one per layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrickVector<T> {
    bricks: Vec<Vector<T>>,
}

impl<T: Scalar> BrickVector<T> {
    pub fn from_flat(x: &[T], t: usize) -> Result<Self> {
        if t == 0 || x.len() % t != 0 {
            return Err(Error::Dimension(format!("length {} is not a multiple of brick size {t}", x.len())));
        }
        Ok(BrickVector { bricks: x.chunks(t).map(|c| Vector::new(c.to_vec())).collect() })
    }

    pub fn from_bricks(bricks: Vec<Vector<T>>) -> Result<Self> {
        if let Some(first) = bricks.first() {
            if bricks.iter().any(|b| b.len() != first.len()) {
                return Err(Error::Dimension("bricks of unequal length".into()));
            }
        }
        Ok(BrickVector { bricks })
    }

    pub fn bricks(&self) -> &[Vector<T>] {
        &self.bricks
    }

    pub fn n(&self) -> usize {
        self.bricks.len()
    }

    /// Number of nonzero bricks.
    pub fn type_count(&self) -> usize {
        self.bricks.iter().filter(|b| !b.is_zero()).count()
    }

    pub fn flatten(&self) -> Vector<T> {
        Vector::new(self.bricks.iter().flat_map(|b| b.iter().cloned()).collect())
    }
}

/// Right-hand side `(b0, b1, ..., bn)` of an n-fold system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rhs<T> {
    pub b0: Vector<T>,
    pub layers: Vec<Vector<T>>,
}

impl<T: Scalar> Rhs<T> {
    pub fn new(b0: Vector<T>, layers: Vec<Vector<T>>) -> Self {
        Rhs { b0, layers }
    }

    pub fn from_flat(b: &[T], stencil: &Stencil<T>, n: usize) -> Result<Self> {
        let (r, s) = (stencil.r(), stencil.s());
        if b.len() != r + n * s {
            return Err(Error::Dimension(format!("right-hand side of length {} for r={r}, s={s}, n={n}", b.len())));
        }
        let b0 = Vector::new(b[..r].to_vec());
        let layers = (0..n).map(|k| Vector::new(b[r + k * s..r + (k + 1) * s].to_vec())).collect();
        Ok(Rhs { b0, layers })
    }

    pub fn n(&self) -> usize {
        self.layers.len()
    }

    pub fn flatten(&self) -> Vector<T> {
        let mut out = self.b0.as_slice().to_vec();
        for l in &self.layers {
            out.extend(l.iter().cloned());
        }
        Vector::new(out)
    }

    pub fn check(&self, stencil: &Stencil<T>) -> Result<()> {
        if self.b0.len() != stencil.r() || self.layers.iter().any(|l| l.len() != stencil.s()) {
            return Err(Error::Dimension(format!(
                "right-hand side blocks do not match r={}, s={}",
                stencil.r(),
                stencil.s()
            )));
        }
        Ok(())
    }
}

/// `(1_n ⊗ A1) ⊕ (I_n ⊗ A2)`, an `(r + n s) x n t` matrix.
pub fn nfold_matrix<T: Scalar>(stencil: &Stencil<T>, n: usize) -> Result<Matrix<T>> {
    if n == 0 {
        return Err(Error::Invalid("n-fold matrix needs n >= 1".into()));
    }
    let (r, s, t) = (stencil.r(), stencil.s(), stencil.t());
    let mut m = Matrix::zeros(r + n * s, n * t);
    for k in 0..n {
        for i in 0..r {
            for j in 0..t {
                m.set(i, k * t + j, stencil.a1.get(i, j).clone());
            }
        }
        for i in 0..s {
            for j in 0..t {
                m.set(r + k * s + i, k * t + j, stencil.a2.get(i, j).clone());
            }
        }
    }
    Ok(m)
}

/// The stencil `(I_t ; A)` whose n-fold matrix is the n-product of `A`.
pub fn nproduct_stencil<T: Scalar>(a: &Matrix<T>) -> Stencil<T> {
    Stencil::new(Matrix::identity(a.cols()), a.clone()).expect("identity matches")
}

pub fn nproduct<T: Scalar>(a: &Matrix<T>, n: usize) -> Result<Matrix<T>> {
    nfold_matrix(&nproduct_stencil(a), n)
}

/// The number of layers beyond which Graver bases of the n-fold matrices
/// stop growing in type.
///
/// With `H` the full (both signs) Graver basis of `a2`, this is the largest
/// 1-norm in the Graver basis of the matrix with columns `a1 h`. An empty
/// basis on either level gives 1.
pub fn graver_complexity<T: Scalar>(stencil: &Stencil<T>, limits: &Limits) -> Result<usize> {
    let inner = graver_basis_with(stencil.a2(), limits)?;
    if inner.is_empty() {
        return Ok(1);
    }
    let columns: Vec<Vector<T>> = inner.elements().iter().map(|h| stencil.a1().mat_vec(h)).collect::<Result<_>>()?;
    let b = Matrix::from_rows(columns, stencil.r())?.transpose();
    let outer = graver_basis_with(&b, limits)?;
    let max = outer
        .elements()
        .iter()
        .map(|g| g.norm1().to_usize().expect("1-norm fits in usize"))
        .max()
        .unwrap_or(1);
    Ok(max.max(1))
}

/// How [`nfold_graver_with`] obtains the basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftStrategy {
    /// Completion when `n` is at most the Graver complexity, lifting otherwise.
    Auto,
    /// Always complete directly on the n-fold matrix.
    Direct,
    /// Always lift from the basis at the Graver complexity.
    Lift,
}

pub fn nfold_graver<T: Scalar>(stencil: &Stencil<T>, n: usize, limits: &Limits) -> Result<Basis<T>> {
    nfold_graver_with(stencil, n, LiftStrategy::Auto, limits)
}

pub fn nfold_graver_with<T: Scalar>(
    stencil: &Stencil<T>,
    n: usize,
    strategy: LiftStrategy,
    limits: &Limits,
) -> Result<Basis<T>> {
    let matrix = nfold_matrix(stencil, n)?;
    if strategy == LiftStrategy::Direct {
        return graver_basis_with(&matrix, limits);
    }
    let g = graver_complexity(stencil, limits)?;
    if strategy == LiftStrategy::Auto && n <= g {
        return graver_basis_with(&matrix, limits);
    }
    let base = graver_basis_with(&nfold_matrix(stencil, g)?, limits)?;
    lift_basis(stencil, &base, n, limits)
}

/// Places the nonzero bricks of every element of `base` (a Graver basis of
/// some n-fold matrix of `stencil` whose layer count is at least the Graver
/// complexity) into `n` layers in every injective way.
pub fn lift_basis<T: Scalar>(stencil: &Stencil<T>, base: &Basis<T>, n: usize, limits: &Limits) -> Result<Basis<T>> {
    let t = stencil.t();
    let shapes: Vec<Vec<Vector<T>>> = base
        .canonical()
        .map(|e| {
            BrickVector::from_flat(e, t).map(|bv| bv.bricks().iter().filter(|b| !b.is_zero()).cloned().collect())
        })
        .collect::<Result<_>>()?;

    let mut needed: u128 = 0;
    for shape in &shapes {
        needed = needed.saturating_add(arrangements(n, shape.len()));
    }
    if needed > limits.max_placements as u128 {
        return Err(Error::LiftTooLarge { needed, limit: limits.max_placements });
    }

    let lifted: BTreeSet<Vector<T>> = shapes
        .par_iter()
        .flat_map_iter(|shape| placements(shape, n, t))
        .map(|v| v.canonical_sign())
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Basis::from_elements(nfold_matrix(stencil, n)?, lifted)
}

/// `n! / (n - k)!`, zero when `k > n`.
fn arrangements(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    ((n - k + 1)..=n).fold(1u128, |acc, f| acc.saturating_mul(f as u128))
}

fn placements<T: Scalar>(shape: &[Vector<T>], n: usize, t: usize) -> Vec<Vector<T>> {
    let mut out = Vec::new();
    let mut layers = Vec::with_capacity(shape.len());
    let mut used = vec![false; n];
    place(shape, n, t, &mut layers, &mut used, &mut out);
    out
}

fn place<T: Scalar>(
    shape: &[Vector<T>],
    n: usize,
    t: usize,
    layers: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Vector<T>>,
) {
    if layers.len() == shape.len() {
        let mut v = Vector::zeros(n * t);
        for (brick, &k) in shape.iter().zip(layers.iter()) {
            v.as_mut_slice()[k * t..(k + 1) * t].clone_from_slice(brick);
        }
        out.push(v);
        return;
    }
    for k in 0..n {
        if used[k] {
            continue;
        }
        used[k] = true;
        layers.push(k);
        place(shape, n, t, layers, used, out);
        layers.pop();
        used[k] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graver::graver_basis;
    use num_bigint::BigInt;

    fn m(rows: usize, cols: usize, e: &[i64]) -> Matrix<BigInt> {
        Matrix::from_ints(rows, cols, e).unwrap()
    }

    #[test]
    fn nfold_one_layer_is_stack() {
        let s = Stencil::new(m(1, 2, &[1, 1]), m(1, 2, &[1, -1])).unwrap();
        assert_eq!(nfold_matrix(&s, 1).unwrap(), s.stacked());
        assert!(nfold_matrix(&s, 0).is_err());
    }

    #[test]
    fn nfold_small_example() {
        let s = Stencil::new(m(1, 1, &[1]), m(1, 1, &[1])).unwrap();
        assert_eq!(nfold_matrix(&s, 2).unwrap(), m(3, 2, &[1, 1, 1, 0, 0, 1]));
    }

    #[test]
    fn product_of_111_is_k33_incidence() {
        let p = nproduct(&m(1, 3, &[1, 1, 1]), 3).unwrap();
        #[rustfmt::skip]
        let expected = m(6, 9, &[
            1, 0, 0, 1, 0, 0, 1, 0, 0,
            0, 1, 0, 0, 1, 0, 0, 1, 0,
            0, 0, 1, 0, 0, 1, 0, 0, 1,
            1, 1, 1, 0, 0, 0, 0, 0, 0,
            0, 0, 0, 1, 1, 1, 0, 0, 0,
            0, 0, 0, 0, 0, 0, 1, 1, 1,
        ]);
        assert_eq!(p, expected);
    }

    #[test]
    fn product_row_sums() {
        let p = nproduct(&m(1, 3, &[1, 1, 1]), 2).unwrap();
        assert_eq!((p.rows(), p.cols()), (5, 6));
        let sums: Vec<i64> = (0..5).map(|r| p.row(r).iter().map(|e| i64::try_from(e).unwrap()).sum()).collect();
        assert_eq!(sums, vec![2, 2, 2, 3, 3]);
        let a = m(2, 2, &[1, 2, 3, 4]);
        assert_eq!(nproduct(&a, 1).unwrap(), Matrix::identity(2).vstack(&a).unwrap());
    }

    #[test]
    fn complexity_examples() {
        let limits = Limits::default();
        let s = Stencil::new(m(1, 1, &[1]), m(1, 1, &[1])).unwrap();
        assert_eq!(graver_complexity(&s, &limits).unwrap(), 1);
        let s = Stencil::new(m(1, 2, &[1, 0]), m(1, 2, &[1, -1])).unwrap();
        assert_eq!(graver_complexity(&s, &limits).unwrap(), 2);
    }

    #[test]
    fn lifted_matches_direct() {
        let limits = Limits::default();
        let s = Stencil::new(m(1, 2, &[1, 0]), m(1, 2, &[1, -1])).unwrap();
        let lifted = nfold_graver_with(&s, 3, LiftStrategy::Lift, &limits).unwrap();
        let direct = nfold_graver_with(&s, 3, LiftStrategy::Direct, &limits).unwrap();
        assert_eq!(lifted, direct);
        assert_eq!(lifted.len(), 6);
    }

    #[test]
    fn degenerate_stencil_has_empty_basis() {
        let s = Stencil::new(m(1, 1, &[1]), m(1, 1, &[1])).unwrap();
        for n in 1..5 {
            assert!(nfold_graver(&s, n, &Limits::default()).unwrap().is_empty());
        }
    }

    #[test]
    fn one_layer_is_plain_graver() {
        let s = Stencil::new(m(1, 3, &[1, 1, 0]), m(1, 3, &[1, 2, 1])).unwrap();
        assert_eq!(nfold_graver(&s, 1, &Limits::default()).unwrap(), graver_basis(&s.stacked()).unwrap());
    }

    #[test]
    fn placement_guard() {
        let s = Stencil::new(m(1, 2, &[1, 0]), m(1, 2, &[1, -1])).unwrap();
        let limits = Limits { max_placements: 10, ..Limits::default() };
        assert!(matches!(
            nfold_graver_with(&s, 6, LiftStrategy::Lift, &limits),
            Err(Error::LiftTooLarge { .. })
        ));
    }

    #[test]
    fn stencil_file_round_trip() {
        let text = "1 1 2\n1 2\n1 0\n1 2\n1 -1\n";
        let s: Stencil<BigInt> = parse_stencil(text).unwrap();
        assert_eq!(s.t(), 2);
        assert_eq!(write_stencil(&s), text);
        assert!(parse_stencil::<BigInt>("1 1 3\n1 2\n1 0\n1 2\n1 -1\n").is_err());
        let empty_a1 = "0 1 2\n0 2\n1 2\n1 1\n";
        let s: Stencil<BigInt> = parse_stencil(empty_a1).unwrap();
        assert_eq!(s.r(), 0);
        assert_eq!(write_stencil(&s), empty_a1);
    }

    #[test]
    fn brick_and_rhs_shapes() {
        let x = Vector::<BigInt>::from_ints(&[1, 0, 0, 0, 2, 3]);
        let bv = BrickVector::from_flat(&x, 2).unwrap();
        assert_eq!(bv.n(), 3);
        assert_eq!(bv.type_count(), 2);
        assert_eq!(bv.flatten(), x);
        assert!(BrickVector::from_flat(&x, 4).is_err());

        let s = Stencil::new(m(1, 2, &[1, 0]), m(1, 2, &[1, -1])).unwrap();
        let b = Vector::<BigInt>::from_ints(&[5, 1, 2, 3]);
        let rhs = Rhs::from_flat(&b, &s, 3).unwrap();
        assert_eq!(rhs.n(), 3);
        assert_eq!(rhs.flatten(), b);
        assert!(Rhs::from_flat(&b, &s, 2).is_err());
    }
}
