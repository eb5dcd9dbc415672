//! Linear integer programming `max { w x : A x = b, x >= 0 }` by Graver
//! augmentation, with a Graver-based feasibility phase.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graver::{graver_basis_with, Basis};
use crate::linalg::{solve_integer, Matrix, Vector};
use crate::nfold::{nfold_graver, Rhs, Stencil};
use crate::scalar::Scalar;
use crate::Limits;

/// Result of a linear integer program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Optimal { x: Vector<T>, value: T },
    Infeasible,
    /// The objective is unbounded; `ray` is a nonnegative kernel element with
    /// positive objective.
    Unbounded { ray: Vector<T> },
}

impl<T: Scalar> Outcome<T> {
    pub fn is_optimal(&self) -> bool {
        matches!(self, Outcome::Optimal { .. })
    }

    pub fn point(&self) -> Option<&Vector<T>> {
        match self {
            Outcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

/// A linear integer program over an explicit matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance<T> {
    pub matrix: Matrix<T>,
    pub rhs: Vector<T>,
    pub objective: Vector<T>,
}

impl<T: Scalar> Instance<T> {
    pub fn new(matrix: Matrix<T>, rhs: Vector<T>, objective: Vector<T>) -> Result<Self> {
        if rhs.len() != matrix.rows() || objective.len() != matrix.cols() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix with right-hand side of length {} and objective of length {}",
                matrix.rows(),
                matrix.cols(),
                rhs.len(),
                objective.len()
            )));
        }
        Ok(Instance { matrix, rhs, objective })
    }
}

/// Anything that answers linear integer programs over a fixed feasible set.
pub trait LinearOracle<T>: Sync {
    fn maximize(&self, w: &[T]) -> Result<Outcome<T>>;
}

impl<T, F> LinearOracle<T> for F
where
    F: Fn(&[T]) -> Result<Outcome<T>> + Sync,
{
    fn maximize(&self, w: &[T]) -> Result<Outcome<T>> {
        self(w)
    }
}

/// A Graver basis in sparse form, indexed by the coordinates where each
/// element is negative (those bound the step length).
#[derive(Clone, Debug)]
pub struct AugmentationSet<T> {
    dim: usize,
    support: Vec<Vec<(usize, T)>>,
    negative_at: Vec<Vec<usize>>,
}

impl<T: Scalar> AugmentationSet<T> {
    pub fn new(basis: &Basis<T>) -> Self {
        let dim = basis.dim();
        let mut negative_at = vec![Vec::new(); dim];
        let support: Vec<Vec<(usize, T)>> = basis
            .elements()
            .iter()
            .enumerate()
            .map(|(i, g)| {
                g.iter()
                    .enumerate()
                    .filter(|(_, e)| !e.is_zero())
                    .map(|(j, e)| {
                        if e.is_negative() {
                            negative_at[j].push(i);
                        }
                        (j, e.clone())
                    })
                    .collect()
            })
            .collect();
        AugmentationSet { dim, support, negative_at }
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    fn dense(&self, i: usize) -> Vector<T> {
        let mut v = Vector::zeros(self.dim);
        for (j, e) in &self.support[i] {
            v.as_mut_slice()[*j] = e.clone();
        }
        v
    }

    fn gain(&self, i: usize, w: &[T]) -> T {
        self.support[i].iter().fold(T::zero(), |acc, (j, e)| acc + w[*j].clone() * e.clone())
    }

    /// Largest `λ >= 0` keeping `x + λ g_i >= lower`; `None` if unlimited.
    fn max_step(&self, i: usize, x: &[T], lower: Option<&[T]>) -> Option<T> {
        self.support[i]
            .iter()
            .filter(|(_, e)| e.is_negative())
            .map(|(j, e)| {
                let room = match lower {
                    Some(l) => x[*j].clone() - l[*j].clone(),
                    None => x[*j].clone(),
                };
                room.div_floor(&-e.clone())
            })
            .min()
    }

    /// Greedy augmentation from the feasible point `x0`: repeatedly apply the
    /// element and step with the largest objective gain, ties broken by
    /// basis order. `on_step` sees every iterate after the start.
    pub fn maximize_from(
        &self,
        x0: &Vector<T>,
        w: &[T],
        mut on_step: Option<&mut dyn FnMut(&Vector<T>)>,
    ) -> Result<Outcome<T>> {
        if x0.len() != self.dim || w.len() != self.dim {
            return Err(Error::Dimension(format!(
                "augmentation in dimension {} with start of length {} and objective of length {}",
                self.dim,
                x0.len(),
                w.len()
            )));
        }
        if !x0.is_nonnegative() {
            return Err(Error::Invalid("augmentation must start from a nonnegative point".into()));
        }
        let gains: Vec<T> = (0..self.len()).map(|i| self.gain(i, w)).collect();
        for (i, g) in gains.iter().enumerate() {
            if g.is_positive() && self.support[i].iter().all(|(_, e)| e.is_positive()) {
                return Ok(Outcome::Unbounded { ray: self.dense(i) });
            }
        }

        let mut x = x0.clone();
        let mut value_of: Vec<Option<T>> = vec![None; self.len()];
        let mut ranked: BTreeSet<(Reverse<T>, usize)> = BTreeSet::new();
        let score = |i: usize, x: &[T]| -> Option<T> {
            let step = self.max_step(i, x, None).expect("improving elements have a negative entry");
            (!step.is_zero()).then(|| step * gains[i].clone())
        };
        for i in 0..self.len() {
            if gains[i].is_positive() {
                if let Some(v) = score(i, &x) {
                    ranked.insert((Reverse(v.clone()), i));
                    value_of[i] = Some(v);
                }
            }
        }

        let mut stamp = vec![usize::MAX; self.len()];
        let mut round = 0usize;
        while let Some(&(Reverse(ref best), i)) = ranked.iter().next() {
            let step = best.clone() / gains[i].clone();
            for (j, e) in &self.support[i] {
                let next = x[*j].clone() + step.clone() * e.clone();
                assert!(!next.is_negative(), "augmentation left the nonnegative orthant");
                x.as_mut_slice()[*j] = next;
            }
            if let Some(f) = on_step.as_mut() {
                f(&x);
            }
            round += 1;
            for (j, _) in &self.support[i] {
                for &k in &self.negative_at[*j] {
                    if stamp[k] == round || !gains[k].is_positive() {
                        continue;
                    }
                    stamp[k] = round;
                    if let Some(old) = value_of[k].take() {
                        ranked.remove(&(Reverse(old), k));
                    }
                    if let Some(v) = score(k, &x) {
                        ranked.insert((Reverse(v.clone()), k));
                        value_of[k] = Some(v);
                    }
                }
            }
        }
        let value = x.dot(w);
        Ok(Outcome::Optimal { x, value })
    }

    /// Minimizes `sum_j max(0, -x_j)` over `A x = A z`, `x >= min(0, z)`,
    /// starting at `z`. Returns a nonnegative point when one exists.
    pub fn repair(&self, z: &Vector<T>) -> Result<Option<Vector<T>>> {
        if z.len() != self.dim {
            return Err(Error::Dimension(format!("repair start of length {} in dimension {}", z.len(), self.dim)));
        }
        let lower: Vec<T> = z.iter().map(|e| e.clone().min(T::zero())).collect();
        let mut x = z.clone();
        let mut touching = vec![Vec::new(); self.dim];
        for (i, support) in self.support.iter().enumerate() {
            for (j, _) in support {
                touching[*j].push(i);
            }
        }
        // best step per element, ranked by reduction and then basis order
        let mut step_of: Vec<Option<(T, T)>> = (0..self.len()).map(|i| self.best_repair_step(i, &x, &lower)).collect();
        let mut ranked: BTreeSet<(Reverse<T>, usize)> =
            step_of.iter().enumerate().filter_map(|(i, s)| s.as_ref().map(|(g, _)| (Reverse(g.clone()), i))).collect();
        let mut stamp = vec![usize::MAX; self.len()];
        let mut round = 0usize;
        loop {
            if x.is_nonnegative() {
                return Ok(Some(x));
            }
            let Some(&(_, i)) = ranked.iter().next() else {
                return Ok(None);
            };
            let step = step_of[i].as_ref().expect("ranked elements have a step").1.clone();
            for (j, e) in &self.support[i] {
                x.as_mut_slice()[*j] = x[*j].clone() + step.clone() * e.clone();
            }
            round += 1;
            for (j, _) in &self.support[i] {
                for &k in &touching[*j] {
                    if std::mem::replace(&mut stamp[k], round) == round {
                        continue;
                    }
                    if let Some((g, _)) = step_of[k].take() {
                        ranked.remove(&(Reverse(g), k));
                    }
                    step_of[k] = self.best_repair_step(k, &x, &lower);
                    if let Some((g, _)) = &step_of[k] {
                        ranked.insert((Reverse(g.clone()), k));
                    }
                }
            }
        }
    }

    /// The step along element `i` that most reduces the infeasibility, and
    /// that reduction, if positive.
    fn best_repair_step(&self, i: usize, x: &[T], lower: &[T]) -> Option<(T, T)> {
        let support = &self.support[i];
        let deficit = |step: &T| -> T {
            support.iter().fold(T::zero(), |acc, (j, e)| {
                let v = x[*j].clone() + step.clone() * e.clone();
                if v.is_negative() {
                    acc - v
                } else {
                    acc
                }
            })
        };
        let cap = self.max_step(i, x, Some(lower));
        if cap.as_ref().is_some_and(|c| c < &T::one()) {
            return None;
        }
        let clamp = |s: T| -> T {
            let s = s.max(T::one());
            match &cap {
                Some(c) => s.min(c.clone()),
                None => s,
            }
        };
        let mut candidates = vec![T::one()];
        if let Some(c) = &cap {
            candidates.push(c.clone());
        }
        for (j, e) in support {
            let (q, r) = (-x[*j].clone()).div_mod_floor(e);
            candidates.push(clamp(q.clone()));
            if !r.is_zero() {
                candidates.push(clamp(q + T::one()));
            }
        }
        candidates.sort();
        candidates.dedup();
        let now = deficit(&T::zero());
        let (after, step) = candidates.into_iter().map(|s| (deficit(&s), s)).min()?;
        let gain = now - after;
        gain.is_positive().then_some((gain, step))
    }
}

/// Augments `x0` to an optimum of `max w x` over the fiber of `x0`.
pub fn augment_to_optimum<T: Scalar>(x0: &Vector<T>, basis: &Basis<T>, w: &[T]) -> Result<Outcome<T>> {
    AugmentationSet::new(basis).maximize_from(x0, w, None)
}

/// A nonnegative integer solution of `A x = b` using the Graver basis of `A`,
/// or `None` if there is none.
pub fn find_feasible_with<T: Scalar>(basis: &Basis<T>, b: &[T]) -> Result<Option<Vector<T>>> {
    let Some(z) = solve_integer(basis.matrix(), b)? else {
        return Ok(None);
    };
    AugmentationSet::new(basis).repair(&z)
}

/// Feasibility for an n-fold system; `Optimal` carries a feasible point and
/// value zero.
pub fn find_feasible<T: Scalar>(stencil: &Stencil<T>, n: usize, b: &Rhs<T>, limits: &Limits) -> Result<Outcome<T>> {
    b.check(stencil)?;
    if b.n() != n {
        return Err(Error::Dimension(format!("right-hand side has {} layers, expected {n}", b.n())));
    }
    let basis = nfold_graver(stencil, n, limits)?;
    Ok(match find_feasible_with(&basis, &b.flatten())? {
        Some(x) => Outcome::Optimal { x, value: T::zero() },
        None => Outcome::Infeasible,
    })
}

/// A linear IP oracle for a fixed system: the Graver basis and a feasible
/// start are computed once and shared by every query.
#[derive(Clone, Debug)]
pub struct IpSolver<T> {
    basis: Basis<T>,
    set: AugmentationSet<T>,
    start: Option<Vector<T>>,
}

impl<T: Scalar> IpSolver<T> {
    /// `basis` must be the Graver basis of the system matrix.
    pub fn new(basis: Basis<T>, rhs: &[T]) -> Result<Self> {
        if rhs.len() != basis.matrix().rows() {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for {} rows",
                rhs.len(),
                basis.matrix().rows()
            )));
        }
        let set = AugmentationSet::new(&basis);
        let start = match solve_integer(basis.matrix(), rhs)? {
            Some(z) => set.repair(&z)?,
            None => None,
        };
        Ok(IpSolver { basis, set, start })
    }

    pub fn for_matrix(matrix: &Matrix<T>, rhs: &[T], limits: &Limits) -> Result<Self> {
        Self::new(graver_basis_with(matrix, limits)?, rhs)
    }

    pub fn for_nfold(stencil: &Stencil<T>, n: usize, rhs: &Rhs<T>, limits: &Limits) -> Result<Self> {
        rhs.check(stencil)?;
        if rhs.n() != n {
            return Err(Error::Dimension(format!("right-hand side has {} layers, expected {n}", rhs.n())));
        }
        Self::new(nfold_graver(stencil, n, limits)?, &rhs.flatten())
    }

    pub fn basis(&self) -> &Basis<T> {
        &self.basis
    }

    pub fn feasible_point(&self) -> Option<&Vector<T>> {
        self.start.as_ref()
    }
}

impl<T: Scalar> LinearOracle<T> for IpSolver<T> {
    fn maximize(&self, w: &[T]) -> Result<Outcome<T>> {
        match &self.start {
            None => Ok(Outcome::Infeasible),
            Some(x0) => self.set.maximize_from(x0, w, None),
        }
    }
}

/// `max { w x : A^(n) x = b, x >= 0 }`.
pub fn solve_nfold_ip<T: Scalar>(
    stencil: &Stencil<T>,
    n: usize,
    w: &[T],
    b: &Rhs<T>,
    limits: &Limits,
) -> Result<Outcome<T>> {
    if w.len() != n * stencil.t() {
        return Err(Error::Dimension(format!("objective of length {} for {} variables", w.len(), n * stencil.t())));
    }
    IpSolver::for_nfold(stencil, n, b, limits)?.maximize(w)
}

/// The same over an arbitrary matrix, with its Graver basis computed directly.
pub fn solve_ip<T: Scalar>(instance: &Instance<T>, limits: &Limits) -> Result<Outcome<T>> {
    IpSolver::for_matrix(&instance.matrix, &instance.rhs, limits)?.maximize(&instance.objective)
}
