//! Dense exact integer vectors and matrices, integer echelon reduction, and
//! the whitespace matrix text format ("rows cols" header, then row-major
//! entries) shared with 4ti2.

use std::fmt;
use std::ops::{Deref, Index};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A dense integer vector. Ordering is lexicographic over the entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vector<T>(Vec<T>);

impl<T: Scalar> Vector<T> {
    pub fn new(entries: Vec<T>) -> Self {
        Vector(entries)
    }

    pub fn zeros(len: usize) -> Self {
        Vector(vec![T::zero(); len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[i] = T::one();
        v
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        Vector(entries.iter().map(|&e| T::from_int(e)).collect())
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|e| e.is_zero())
    }

    pub fn dot(&self, other: &[T]) -> T {
        dot(&self.0, other)
    }

    pub fn add(&self, other: &Self) -> Self {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }

    pub fn neg(&self) -> Self {
        Vector(self.0.iter().map(|a| -a.clone()).collect())
    }

    pub fn scaled(&self, k: &T) -> Self {
        Vector(self.0.iter().map(|a| a.clone() * k.clone()).collect())
    }

    /// `self += k * other`
    pub fn add_scaled(&mut self, k: &T, other: &[T]) {
        for (a, b) in self.0.iter_mut().zip(other) {
            if !b.is_zero() {
                *a = a.clone() + k.clone() * b.clone();
            }
        }
    }

    pub fn norm1(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, e| acc + e.abs())
    }

    pub fn max_abs(&self) -> T {
        self.0.iter().map(|e| e.abs()).max().unwrap_or_else(T::zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|e| !e.is_negative())
    }

    /// True when the first nonzero entry is positive (the zero vector is not).
    pub fn is_canonical_sign(&self) -> bool {
        self.0.iter().find(|e| !e.is_zero()).is_some_and(|e| e.is_positive())
    }

    /// The sign representative whose first nonzero entry is positive.
    pub fn canonical_sign(&self) -> Self {
        if self.is_canonical_sign() || self.is_zero() {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// Divides out the gcd of the entries.
    pub fn primitive(&self) -> Self {
        let g = self.0.iter().fold(T::zero(), |acc, e| acc.gcd(e));
        if g.is_zero() || g.is_one() {
            self.clone()
        } else {
            Vector(self.0.iter().map(|e| e.clone() / g.clone()).collect())
        }
    }
}

impl<T> Deref for Vector<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> Index<usize> for Vector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> From<Vec<T>> for Vector<T> {
    fn from(v: Vec<T>) -> Self {
        Vector(v)
    }
}

impl<T: fmt::Display> fmt::Display for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// A dense row-major integer matrix. Zero-row matrices keep their column count.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    /// Builds from rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: Vec<Vector<T>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {i} has length {}, expected {cols}", r.len())));
            }
            data.extend(r.into_inner());
        }
        Ok(Matrix { rows: n, cols, data })
    }

    pub fn from_ints(rows: usize, cols: usize, data: &[i64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&e| T::from_int(e)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector<T>> {
        (0..self.rows).map(|r| Vector::new(self.row(r).to_vec())).collect()
    }

    pub fn column(&self, c: usize) -> Vector<T> {
        Vector::new((0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mat_vec(&self, x: &[T]) -> Result<Vector<T>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "{}x{} matrix applied to a vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok(Vector::new((0..self.rows).map(|r| dot(self.row(r), x)).collect()))
    }

    /// Stacks `self` over `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!("vstack of {} and {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }
}

/// `mat_vec` as a free function, for symmetry with the other operations.
pub fn mat_vec<T: Scalar>(a: &Matrix<T>, x: &[T]) -> Result<Vector<T>> {
    a.mat_vec(x)
}

/// Column-style integer echelon form: `a * u = h` with `u` unimodular.
///
/// Pivot `k` sits at `(pivot_rows[k], k)` with a positive entry, and every
/// entry of a pivot row right of its pivot is zero. Columns `rank..n` of `h`
/// vanish, so the matching columns of `u` span the integer kernel.
struct ColumnEchelon<T> {
    h: Vec<Vec<T>>, // column-major: h[col][row]
    u: Vec<Vec<T>>, // column-major: u[col][row]
    pivot_rows: Vec<usize>,
}

impl<T: Scalar> ColumnEchelon<T> {
    fn compute(a: &Matrix<T>) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let mut h: Vec<Vec<T>> = (0..n).map(|c| a.column(c).into_inner()).collect();
        let mut u: Vec<Vec<T>> = (0..n).map(|c| Vector::unit(n, c).into_inner()).collect();
        let mut pivot_rows = Vec::new();
        let mut k = 0;
        for row in 0..m {
            if k == n {
                break;
            }
            loop {
                let best = (k..n)
                    .filter(|&c| !h[c][row].is_zero())
                    .min_by(|&x, &y| h[x][row].abs().cmp(&h[y][row].abs()));
                let Some(best) = best else { break };
                h.swap(k, best);
                u.swap(k, best);
                if h[k][row].is_negative() {
                    negate(&mut h[k]);
                    negate(&mut u[k]);
                }
                let mut clean = true;
                for c in k + 1..n {
                    if h[c][row].is_zero() {
                        continue;
                    }
                    let q = round_div(&h[c][row], &h[k][row]);
                    let (pivot_h, pivot_u) = (h[k].clone(), u[k].clone());
                    sub_scaled(&mut h[c], &q, &pivot_h);
                    sub_scaled(&mut u[c], &q, &pivot_u);
                    if !h[c][row].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    pivot_rows.push(row);
                    k += 1;
                    break;
                }
            }
        }
        ColumnEchelon { h, u, pivot_rows }
    }

    fn rank(&self) -> usize {
        self.pivot_rows.len()
    }
}

fn negate<T: Scalar>(v: &mut [T]) {
    for e in v.iter_mut() {
        *e = -e.clone();
    }
}

fn sub_scaled<T: Scalar>(v: &mut [T], q: &T, w: &[T]) {
    for (a, b) in v.iter_mut().zip(w) {
        if !b.is_zero() {
            *a = a.clone() - q.clone() * b.clone();
        }
    }
}

/// Nearest-integer quotient, keeping echelon entries small.
fn round_div<T: Scalar>(a: &T, b: &T) -> T {
    let (q, r) = a.div_mod_floor(b);
    let two = T::one() + T::one();
    if (r.clone() * two).abs() > b.abs() {
        if b.is_positive() {
            q + T::one()
        } else {
            q - T::one()
        }
    } else {
        q
    }
}

/// A lattice basis of `{x in Z^n : A x = 0}`, with `n - rank(A)` elements.
pub fn lattice_kernel_basis<T: Scalar>(a: &Matrix<T>) -> Vec<Vector<T>> {
    let ech = ColumnEchelon::compute(a);
    let mut basis: Vec<Vector<T>> = ech.u[ech.rank()..].iter().cloned().map(Vector::new).collect();
    reduce_pairwise(&mut basis);
    basis
}

/// Greedy pairwise size reduction in the 1-norm; keeps the lattice spanned.
fn reduce_pairwise<T: Scalar>(basis: &mut [Vector<T>]) {
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                let current = basis[i].norm1();
                let plus = basis[i].add(&basis[j]);
                let minus = basis[i].sub(&basis[j]);
                if plus.norm1() < current {
                    basis[i] = plus;
                    changed = true;
                } else if minus.norm1() < current {
                    basis[i] = minus;
                    changed = true;
                }
            }
        }
    }
}

pub fn rank<T: Scalar>(a: &Matrix<T>) -> usize {
    ColumnEchelon::compute(a).rank()
}

/// Some integer solution of `A x = b` (signs unrestricted), or `None` when
/// the system has no integer solution.
pub fn solve_integer<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<Option<Vector<T>>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!("{} rows but right-hand side of length {}", a.rows(), b.len())));
    }
    let ech = ColumnEchelon::compute(a);
    let n = a.cols();
    let mut y: Vec<T> = Vec::with_capacity(ech.rank());
    for (k, &row) in ech.pivot_rows.iter().enumerate() {
        let mut s = b[row].clone();
        for (j, yj) in y.iter().enumerate() {
            s = s - ech.h[j][row].clone() * yj.clone();
        }
        let (q, r) = s.div_mod_floor(&ech.h[k][row]);
        if !r.is_zero() {
            return Ok(None);
        }
        y.push(q);
    }
    for (row, target) in b.iter().enumerate() {
        let got = y.iter().enumerate().fold(T::zero(), |acc, (j, yj)| acc + ech.h[j][row].clone() * yj.clone());
        if &got != target {
            return Ok(None);
        }
    }
    let mut x = Vector::zeros(n);
    for (j, yj) in y.iter().enumerate() {
        x.add_scaled(yj, &ech.u[j]);
    }
    Ok(Some(x))
}

/// Writes the matrix text format: a "rows cols" line, then one line per row.
pub fn write_matrix<T: Scalar>(m: &Matrix<T>) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        let line: Vec<String> = m.row(r).iter().map(|e| e.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_matrix<T: Scalar>(text: &str) -> Result<Matrix<T>> {
    let mut tokens = text.split_whitespace();
    let m = read_matrix(&mut tokens)?;
    if let Some(extra) = tokens.next() {
        return Err(Error::Parse(format!("trailing token {extra:?} after matrix")));
    }
    Ok(m)
}

/// Reads one matrix block from a token stream.
pub fn read_matrix<'a, T: Scalar>(tokens: &mut impl Iterator<Item = &'a str>) -> Result<Matrix<T>> {
    let rows = read_count(tokens, "row count")?;
    let cols = read_count(tokens, "column count")?;
    let mut data = Vec::with_capacity(rows * cols);
    for i in 0..rows * cols {
        let tok = tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {} entries, found {i}", rows * cols)))?;
        data.push(T::parse_decimal(tok).ok_or_else(|| Error::Parse(format!("bad integer {tok:?}")))?);
    }
    Matrix::new(rows, cols, data)
}

pub(crate) fn read_count<'a>(tokens: &mut impl Iterator<Item = &'a str>, what: &str) -> Result<usize> {
    let tok = tokens.next().ok_or_else(|| Error::Parse(format!("missing {what}")))?;
    tok.parse().map_err(|_| Error::Parse(format!("bad {what} {tok:?}")))
}
