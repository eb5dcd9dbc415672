//! Bin packing with item types: `n_j` items of weight `v_j` fill bins of
//! capacities `u_k` exactly, the unused capacity taken by unit slack items.

use crate::convexmax::ObjectiveWeights;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::nfold::{Rhs, Stencil};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingInstance<T> {
    /// Weight of each item type.
    pub weights: Vec<T>,
    /// Number of items of each type.
    pub counts: Vec<T>,
    /// Capacity of each bin.
    pub capacities: Vec<T>,
}

/// Items per type and bin, plus the slack in each bin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packing<T> {
    /// `items[j][k]`: items of type `j` in bin `k`.
    pub items: Vec<Vec<T>>,
    pub slack: Vec<T>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingSystem<T> {
    pub stencil: Stencil<T>,
    pub rhs: Rhs<T>,
    /// Item types including the slack type.
    pub types: usize,
    pub bins: usize,
}

/// The n-fold system of a packing instance (one layer per bin), or `None`
/// when the items outweigh the total capacity.
pub fn build_packing<T: Scalar>(inst: &PackingInstance<T>) -> Result<Option<PackingSystem<T>>> {
    if inst.weights.len() != inst.counts.len() {
        return Err(Error::Dimension(format!("{} weights for {} counts", inst.weights.len(), inst.counts.len())));
    }
    if inst.capacities.is_empty() {
        return Err(Error::Empty("bins"));
    }
    if inst.weights.iter().any(|v| !v.is_positive()) {
        return Err(Error::Invalid("item weights must be positive".into()));
    }
    if inst.counts.iter().chain(&inst.capacities).any(|v| v.is_negative()) {
        return Err(Error::Invalid("counts and capacities must be nonnegative".into()));
    }
    let load = inst.weights.iter().zip(&inst.counts).fold(T::zero(), |acc, (v, c)| acc + v.clone() * c.clone());
    let total = inst.capacities.iter().fold(T::zero(), |acc, u| acc + u.clone());
    let residual = total - load;
    if residual.is_negative() {
        return Ok(None);
    }
    let t = inst.weights.len() + 1;
    let mut a2 = inst.weights.clone();
    a2.push(T::one());
    let mut b0 = inst.counts.clone();
    b0.push(residual);
    let stencil = Stencil::new(Matrix::identity(t), Matrix::new(1, t, a2)?)?;
    let rhs = Rhs::new(Vector::new(b0), inst.capacities.iter().map(|u| Vector::new(vec![u.clone()])).collect());
    Ok(Some(PackingSystem { stencil, rhs, types: t, bins: inst.capacities.len() }))
}

impl<T: Scalar> PackingSystem<T> {
    /// Objective weights from utility matrices, `utilities[i][j][k]` being
    /// the utility of one item of type `j` in bin `k`; slack has utility 0.
    pub fn lift_utilities(&self, utilities: &[Matrix<T>]) -> Result<ObjectiveWeights<T>> {
        let rows = utilities
            .iter()
            .map(|u| {
                if u.rows() != self.types - 1 || u.cols() != self.bins {
                    return Err(Error::Dimension(format!(
                        "utility matrix is {}x{}, expected {}x{}",
                        u.rows(),
                        u.cols(),
                        self.types - 1,
                        self.bins
                    )));
                }
                let mut w = Vector::zeros(self.types * self.bins);
                for k in 0..self.bins {
                    for j in 0..self.types - 1 {
                        w.as_mut_slice()[k * self.types + j] = u.get(j, k).clone();
                    }
                }
                Ok(w)
            })
            .collect::<Result<Vec<_>>>()?;
        ObjectiveWeights::new(rows)
    }

    pub fn decode(&self, x: &[T]) -> Result<Packing<T>> {
        if x.len() != self.types * self.bins {
            return Err(Error::Dimension(format!("vector of length {} for {} variables", x.len(), self.types * self.bins)));
        }
        let at = |j: usize, k: usize| x[k * self.types + j].clone();
        Ok(Packing {
            items: (0..self.types - 1).map(|j| (0..self.bins).map(|k| at(j, k)).collect()).collect(),
            slack: (0..self.bins).map(|k| at(self.types - 1, k)).collect(),
        })
    }

    pub fn encode(&self, packing: &Packing<T>) -> Result<Vector<T>> {
        if packing.items.len() != self.types - 1
            || packing.slack.len() != self.bins
            || packing.items.iter().any(|r| r.len() != self.bins)
        {
            return Err(Error::Dimension("packing shape does not match the system".into()));
        }
        let mut x = Vector::zeros(self.types * self.bins);
        for k in 0..self.bins {
            for (j, row) in packing.items.iter().enumerate() {
                x.as_mut_slice()[k * self.types + j] = row[k].clone();
            }
            x.as_mut_slice()[k * self.types + self.types - 1] = packing.slack[k].clone();
        }
        Ok(x)
    }
}
