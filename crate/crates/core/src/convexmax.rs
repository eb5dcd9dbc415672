//! Convex integer maximization `max { c(W x) : A x = b, x >= 0 }` through
//! linear oracle calls, one per vertex of a zonotope built from edge
//! directions of the feasible polytope.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ip::{IpSolver, LinearOracle, Outcome};
use crate::linalg::Vector;
use crate::nfold::{Rhs, Stencil};
use crate::scalar::Scalar;
use crate::zonotope::zonotope_vertices_with;
use crate::Limits;

/// The `d` linear forms `w_1, ..., w_d` defining the projection `x -> W x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectiveWeights<T> {
    rows: Vec<Vector<T>>,
}

impl<T: Scalar> ObjectiveWeights<T> {
    pub fn new(rows: Vec<Vector<T>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::Empty("objective weights"));
        };
        if let Some(bad) = rows.iter().find(|r| r.len() != first.len()) {
            return Err(Error::Dimension(format!(
                "weight rows of lengths {} and {}",
                first.len(),
                bad.len()
            )));
        }
        Ok(ObjectiveWeights { rows })
    }

    pub fn d(&self) -> usize {
        self.rows.len()
    }

    /// Length of each row, the number of variables.
    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vector<T>] {
        &self.rows
    }

    pub fn project(&self, x: &[T]) -> Vector<T> {
        self.rows.iter().map(|w| w.dot(x)).collect::<Vec<_>>().into()
    }

    pub fn scaled(&self, k: &T) -> Self {
        ObjectiveWeights { rows: self.rows.iter().map(|r| r.scaled(k)).collect() }
    }
}

/// A convex function on `Z^d`, known through comparisons.
pub trait ConvexObjective<T>: Sync {
    /// Whether `c(y) <= c(z)`.
    fn le(&self, y: &[T], z: &[T]) -> bool;

    /// Exact value, when available.
    fn value(&self, _z: &[T]) -> Option<T> {
        None
    }
}

/// Objectives with exact integer values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin<T> {
    /// `g z`.
    Linear(Vector<T>),
    /// `sum z_i^2`.
    Norm2,
    /// `max_i a_i z`.
    MaxLinear(Vec<Vector<T>>),
    /// `-min_i a_i z`, i.e. `max_i -a_i z`.
    NegMinLinear(Vec<Vector<T>>),
}

impl<T: Scalar> Builtin<T> {
    pub fn eval(&self, z: &[T]) -> T {
        match self {
            Builtin::Linear(g) => g.dot(z),
            Builtin::Norm2 => z.iter().fold(T::zero(), |acc, e| acc + e.clone() * e.clone()),
            Builtin::MaxLinear(forms) => forms.iter().map(|a| a.dot(z)).max().expect("nonempty form list"),
            Builtin::NegMinLinear(forms) => -forms.iter().map(|a| a.dot(z)).min().expect("nonempty form list"),
        }
    }

    /// Checks the objective against the projection dimension `d`.
    pub fn check(&self, d: usize) -> Result<()> {
        let forms: &[Vector<T>] = match self {
            Builtin::Norm2 => return Ok(()),
            Builtin::Linear(g) => std::slice::from_ref(g),
            Builtin::MaxLinear(f) | Builtin::NegMinLinear(f) => f,
        };
        if forms.is_empty() {
            return Err(Error::Empty("linear forms"));
        }
        match forms.iter().find(|a| a.len() != d) {
            Some(a) => Err(Error::Dimension(format!("form {a} for projection dimension {d}"))),
            None => Ok(()),
        }
    }
}

impl<T: Scalar> ConvexObjective<T> for Builtin<T> {
    fn le(&self, y: &[T], z: &[T]) -> bool {
        self.eval(y) <= self.eval(z)
    }

    fn value(&self, z: &[T]) -> Option<T> {
        Some(self.eval(z))
    }
}

/// A caller-supplied comparison oracle.
pub struct Comparison<F>(pub F);

impl<T, F> ConvexObjective<T> for Comparison<F>
where
    F: Fn(&[T], &[T]) -> bool + Sync,
{
    fn le(&self, y: &[T], z: &[T]) -> bool {
        (self.0)(y, z)
    }
}

/// Ranks candidates `(z, x)`: `Greater` means `a` is preferred, by objective,
/// then by smaller `z`, then by smaller `x`.
pub fn compare_candidates<T: Scalar, C: ConvexObjective<T> + ?Sized>(
    c: &C,
    a: (&Vector<T>, &Vector<T>),
    b: (&Vector<T>, &Vector<T>),
) -> Ordering {
    match (c.le(a.0, b.0), c.le(b.0, a.0)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => b.0.cmp(a.0).then_with(|| b.1.cmp(a.1)),
    }
}

/// The distinct nonzero projections `W e` of the directions.
pub fn project_directions<T: Scalar>(directions: &[Vector<T>], weights: &ObjectiveWeights<T>) -> Vec<Vector<T>> {
    directions
        .iter()
        .map(|e| weights.project(e))
        .filter(|z| !z.is_zero())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// `h = sum_i g_i w_i`, so that `g (W x) = h x` for every `x`.
pub fn lift_normal<T: Scalar>(g: &[T], weights: &ObjectiveWeights<T>) -> Vector<T> {
    let mut h = Vector::zeros(weights.n());
    for (gi, w) in g.iter().zip(weights.rows()) {
        h.add_scaled(gi, w);
    }
    h
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvexOutcome<T> {
    Optimal { x: Vector<T>, z: Vector<T> },
    Infeasible,
    UnboundedPolyhedron,
}

/// One linear oracle answer, for a vertex of the zonotope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate<T> {
    pub vertex: Vector<T>,
    pub certificate: Vector<T>,
    pub normal: Vector<T>,
    pub x: Vector<T>,
    pub z: Vector<T>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub oracle_calls: usize,
    pub identity_checks: usize,
    pub directions: usize,
    pub vertices: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexReport<T> {
    pub outcome: ConvexOutcome<T>,
    pub stats: Stats,
    pub candidates: Vec<Candidate<T>>,
}

impl<T: Scalar> ConvexReport<T> {
    fn early(outcome: ConvexOutcome<T>, stats: Stats) -> Self {
        ConvexReport { outcome, stats, candidates: Vec::new() }
    }
}

/// Maximizes `c(W x)` over the feasible set of `oracle`, given directions
/// covering every edge direction of that set.
pub fn convex_maximize<T, O, C>(
    oracle: &O,
    weights: &ObjectiveWeights<T>,
    directions: &[Vector<T>],
    c: &C,
    limits: &Limits,
) -> Result<ConvexReport<T>>
where
    T: Scalar,
    O: LinearOracle<T> + ?Sized,
    C: ConvexObjective<T> + ?Sized,
{
    if let Some(bad) = directions.iter().find(|e| e.len() != weights.n()) {
        return Err(Error::Dimension(format!("direction {bad} for {} variables", weights.n())));
    }
    let mut stats = Stats { oracle_calls: 1, ..Stats::default() };
    match oracle.maximize(&Vector::zeros(weights.n()))? {
        Outcome::Infeasible => return Ok(ConvexReport::early(ConvexOutcome::Infeasible, stats)),
        Outcome::Unbounded { .. } => {
            return Err(Error::Inconsistent("oracle reported a zero objective unbounded".into()))
        }
        Outcome::Optimal { .. } => {}
    }

    let projected = project_directions(directions, weights);
    let vertices = zonotope_vertices_with(&projected, weights.d(), limits)?;
    stats.directions = projected.len();
    stats.vertices = vertices.len();
    stats.oracle_calls += vertices.len();

    let checks = AtomicUsize::new(0);
    let answers: Vec<Result<Option<Candidate<T>>>> = vertices
        .par_iter()
        .map(|v| {
            let normal = lift_normal(&v.certificate, weights);
            match oracle.maximize(&normal)? {
                Outcome::Optimal { x, .. } => {
                    let z = weights.project(&x);
                    if v.certificate.dot(&z) != normal.dot(&x) {
                        return Err(Error::Inconsistent(format!("g z != h x at vertex {}", v.vertex)));
                    }
                    checks.fetch_add(1, AtomicOrdering::Relaxed);
                    Ok(Some(Candidate {
                        vertex: v.vertex.clone(),
                        certificate: v.certificate.clone(),
                        normal,
                        x,
                        z,
                    }))
                }
                Outcome::Unbounded { .. } => Ok(None),
                Outcome::Infeasible => Err(Error::Inconsistent("oracle became infeasible".into())),
            }
        })
        .collect();
    stats.identity_checks = checks.into_inner();

    let mut candidates = Vec::with_capacity(answers.len());
    for answer in answers {
        match answer? {
            Some(cand) => candidates.push(cand),
            None => return Ok(ConvexReport::early(ConvexOutcome::UnboundedPolyhedron, stats)),
        }
    }
    let best = candidates
        .iter()
        .reduce(|a, b| match compare_candidates(c, (&b.z, &b.x), (&a.z, &a.x)) {
            Ordering::Greater => b,
            Ordering::Less => a,
            Ordering::Equal => a,
        })
        .expect("a zonotope has at least one vertex");
    let outcome = ConvexOutcome::Optimal { x: best.x.clone(), z: best.z.clone() };
    Ok(ConvexReport { outcome, stats, candidates })
}

/// Convex maximization over an n-fold system, using its Graver basis both
/// as edge directions and inside the linear oracle.
pub fn solve_convex_nfold<T: Scalar, C: ConvexObjective<T> + ?Sized>(
    stencil: &Stencil<T>,
    n: usize,
    weights: &ObjectiveWeights<T>,
    rhs: &Rhs<T>,
    c: &C,
    limits: &Limits,
) -> Result<ConvexReport<T>> {
    if weights.n() != n * stencil.t() {
        return Err(Error::Dimension(format!(
            "weights of length {} for {} variables",
            weights.n(),
            n * stencil.t()
        )));
    }
    let solver = IpSolver::for_nfold(stencil, n, rhs, limits)?;
    convex_maximize(&solver, weights, solver.basis().elements(), c, limits)
}
