//! Vector partition: split items `v_1, ..., v_n` in `Z^k` among `p` players,
//! optionally with prescribed part sizes. Layer `i` is item `i`; brick entry
//! `h` says whether player `h` receives it.

use num_bigint::BigInt;
use num_rational::Ratio;

use crate::convexmax::ObjectiveWeights;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::nfold::{Rhs, Stencil};
use crate::scalar::{convert, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionInstance<T> {
    pub players: usize,
    pub items: Vec<Vector<T>>,
    /// Part sizes `λ_1, ..., λ_p`, or `None` for unconstrained sizes.
    pub sizes: Option<Vec<T>>,
}

impl<T: Scalar> PartitionInstance<T> {
    /// Length `k` of the item vectors.
    pub fn criteria(&self) -> usize {
        self.items.first().map_or(0, |v| v.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionSystem<T> {
    pub stencil: Stencil<T>,
    pub rhs: Rhs<T>,
    /// `p k` rows; row `h k + j` gives the `j`-th coordinate of player `h`'s sum.
    pub weights: ObjectiveWeights<T>,
    pub players: usize,
    pub n: usize,
}

pub fn build_partition<T: Scalar>(inst: &PartitionInstance<T>) -> Result<PartitionSystem<T>> {
    let (p, n, k) = (inst.players, inst.items.len(), inst.criteria());
    if p == 0 || n == 0 {
        return Err(Error::Empty("players and items"));
    }
    if k == 0 || inst.items.iter().any(|v| v.len() != k) {
        return Err(Error::Dimension("items must share a positive length".into()));
    }
    let (a1, b0) = match &inst.sizes {
        None => (Matrix::zeros(0, p), Vector::zeros(0)),
        Some(sizes) => {
            if sizes.len() != p {
                return Err(Error::Dimension(format!("{} sizes for {p} players", sizes.len())));
            }
            if sizes.iter().any(|s| s.is_negative()) {
                return Err(Error::Invalid("part sizes must be nonnegative".into()));
            }
            let total = sizes.iter().fold(T::zero(), |acc, s| acc + s.clone());
            if total != T::from_int(n as i64) {
                return Err(Error::Invalid(format!("part sizes sum to {total}, not to the {n} items")));
            }
            (Matrix::identity(p), Vector::new(sizes.clone()))
        }
    };
    let stencil = Stencil::new(a1, Matrix::new(1, p, vec![T::one(); p])?)?;
    let rhs = Rhs::new(b0, vec![Vector::new(vec![T::one()]); n]);
    let mut rows = vec![Vector::zeros(n * p); p * k];
    for (i, item) in inst.items.iter().enumerate() {
        for h in 0..p {
            for j in 0..k {
                rows[h * k + j].as_mut_slice()[i * p + h] = item[j].clone();
            }
        }
    }
    Ok(PartitionSystem { stencil, rhs, weights: ObjectiveWeights::new(rows)?, players: p, n })
}

impl<T: Scalar> PartitionSystem<T> {
    /// The parts `π_h` as sorted item indices.
    pub fn decode(&self, x: &[T]) -> Result<Vec<Vec<usize>>> {
        if x.len() != self.n * self.players {
            return Err(Error::Dimension(format!("vector of length {} for {} variables", x.len(), self.n * self.players)));
        }
        let mut parts = vec![Vec::new(); self.players];
        for i in 0..self.n {
            let brick = &x[i * self.players..(i + 1) * self.players];
            let owners: Vec<usize> = (0..self.players).filter(|&h| brick[h].is_one()).collect();
            if owners.len() != 1 || brick.iter().any(|e| !e.is_zero() && !e.is_one()) {
                return Err(Error::Invalid(format!("item {i} is not assigned to exactly one player")));
            }
            parts[owners[0]].push(i);
        }
        Ok(parts)
    }

    pub fn encode(&self, parts: &[Vec<usize>]) -> Result<Vector<T>> {
        check_partition(parts, self.n)?;
        if parts.len() != self.players {
            return Err(Error::Dimension(format!("{} parts for {} players", parts.len(), self.players)));
        }
        let mut x = Vector::zeros(self.n * self.players);
        for (h, part) in parts.iter().enumerate() {
            for &i in part {
                x.as_mut_slice()[i * self.players + h] = T::one();
            }
        }
        Ok(x)
    }
}

fn check_partition(parts: &[Vec<usize>], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &i in parts.iter().flatten() {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::Invalid(format!("item {i} is out of range or repeated")));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Invalid("some item belongs to no part".into()));
    }
    Ok(())
}

/// `sum_h (1/|π_h|) sum_{i in π_h} |v_i - mean(π_h)|^2`, exactly.
pub fn cluster_variance<T: Scalar>(items: &[Vector<T>], parts: &[Vec<usize>]) -> Result<Ratio<BigInt>> {
    check_partition(parts, items.len())?;
    let big = |e: &T| convert::<T, BigInt>(e).expect("integers convert to BigInt");
    let mut total = Ratio::from_integer(BigInt::from(0));
    for part in parts {
        if part.is_empty() {
            return Err(Error::Invalid("variance of an empty cluster".into()));
        }
        let size = BigInt::from(part.len());
        let k = items[part[0]].len();
        // |π| sum |v|^2 - |S|^2, over |π|^2
        let mut sq = BigInt::from(0);
        let mut sum = vec![BigInt::from(0); k];
        for &i in part {
            for (s, e) in sum.iter_mut().zip(items[i].iter()) {
                let e = big(e);
                sq += &e * &e;
                *s += e;
            }
        }
        let s2: BigInt = sum.iter().map(|s| s * s).sum();
        total += Ratio::new(&size * sq - s2, &size * &size);
    }
    Ok(total)
}
