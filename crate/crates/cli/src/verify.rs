//! Solver against exhaustive enumeration on a bounded instance.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use nfold_core::bruteforce::{brute_convex_max, enumerate_feasible, EnumBudget};
use nfold_core::convexmax::{Builtin, ConvexOutcome, ObjectiveWeights};
use nfold_core::graver::brute_force_graver;
use nfold_core::{Error, IntMat, IntVec, Limits};

use crate::commands::{parse_objective, System};
use crate::failure::{Failure, Outcome, Status};
use crate::instances::AppProblem;
use crate::io::emit_json;

pub struct Problem {
    /// `None` for an instance that is infeasible on its face.
    pub system: Option<System>,
    pub weights: ObjectiveWeights<BigInt>,
    pub objective: Builtin<BigInt>,
}

impl Problem {
    pub fn from_app(app: AppProblem, objective: Option<&str>) -> Outcome<Self> {
        let objective = parse_objective(objective.unwrap_or("norm2"), app.weights.d())?;
        let system = match app.system() {
            Some((stencil, n, rhs)) => Some(System::nfold(stencil.clone(), n, rhs.flatten())?),
            None => None,
        };
        Ok(Problem { system, weights: app.weights, objective })
    }
}

/// Per-variable upper bounds from rows with nonnegative coefficients, or
/// `None` if some variable is not bounded that way.
pub fn row_bounds(a: &IntMat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    (0..a.cols())
        .map(|j| {
            (0..a.rows())
                .filter(|&i| a.get(i, j).is_positive() && a.row(i).iter().all(|e| !e.is_negative()))
                .map(|i| (&b[i] / a.get(i, j)).max(BigInt::zero()))
                .min()
        })
        .collect()
}

struct Check {
    name: &'static str,
    result: &'static str,
    detail: String,
}

impl Check {
    fn new(name: &'static str, pass: bool, detail: String) -> Self {
        Check { name, result: if pass { "PASS" } else { "FAIL" }, detail }
    }

    fn skip(name: &'static str, detail: String) -> Self {
        Check { name, result: "SKIP", detail }
    }
}

pub fn run(problem: &Problem, out: Option<&Path>, limits: &Limits) -> Outcome {
    let checks = match &problem.system {
        None => vec![Check::new("status", true, "infeasible before solving".into())],
        Some(sys) => compare(sys, problem, limits)?,
    };
    let pass = checks.iter().all(|c| c.result != "FAIL");
    for c in &checks {
        eprintln!("{} {}: {}", c.result, c.name, c.detail);
    }
    let verdict = if pass { "PASS" } else { "FAIL" };
    eprintln!("{verdict}");
    let report = json!({
        "schema": "nfold.verify.v1",
        "result": verdict,
        "checks": checks
            .iter()
            .map(|c| json!({ "name": c.name, "result": c.result, "detail": c.detail }))
            .collect::<Vec<Value>>(),
    });
    emit_json(out, &report)?;
    Ok(if pass { Status::Success } else { Status::Internal })
}

fn compare(sys: &System, problem: &Problem, limits: &Limits) -> Outcome<Vec<Check>> {
    let bounds = row_bounds(&sys.matrix, &sys.rhs)
        .ok_or_else(|| Failure::Usage("verify needs every variable bounded by a row with nonnegative entries".into()))?;
    let budget = EnumBudget { max_points: limits.max_points, bounds: Some(bounds) };
    let points = enumerate_feasible(&sys.matrix, &sys.rhs, &budget)?;
    let report = sys.maximize(&problem.weights, &problem.objective, limits)?;
    let mut checks = Vec::new();

    match (&report.outcome, points.is_empty()) {
        (ConvexOutcome::Infeasible, true) => {
            checks.push(Check::new("status", true, "both infeasible".into()));
        }
        (ConvexOutcome::Optimal { x, z }, false) => {
            checks.push(Check::new("status", true, format!("both feasible, {} lattice points", points.len())));
            checks.push(Check::new("point", points.binary_search(x).is_ok(), "solution is a feasible point".into()));
            checks.push(Check::new("projection", problem.weights.project(x) == *z, "z = W x".into()));
            let (_, best) = brute_convex_max(&points, &problem.weights, &problem.objective)?;
            let (got, want) = (problem.objective.eval(z), problem.objective.eval(&best));
            checks.push(Check::new("objective", got == want, format!("solver {got}, enumeration {want}")));
            let linear = report.candidates.iter().all(|c| {
                let top = points.iter().map(|p| c.normal.dot(p)).max().expect("points are nonempty");
                c.normal.dot(&c.x) == top
            });
            let detail = format!("{} linear oracle answers", report.candidates.len());
            checks.push(Check::new("linear", linear, detail));
        }
        (outcome, empty) => {
            let detail = format!("solver says {outcome:?}, enumeration found {} points", if empty { 0 } else { points.len() });
            checks.push(Check::new("status", false, detail));
        }
    }
    checks.push(graver_check(sys, limits)?);
    Ok(checks)
}

/// The solver's Graver basis against a brute-force search of the box it spans.
fn graver_check(sys: &System, limits: &Limits) -> Outcome<Check> {
    let solver = sys.solver(limits)?;
    let basis = solver.basis();
    let bound = basis.elements().iter().map(IntVec::max_abs).max().unwrap_or_else(|| BigInt::from(1));
    let Ok(bound) = u32::try_from(&bound) else {
        return Ok(Check::skip("graver", format!("entries up to {bound}")));
    };
    match brute_force_graver(&sys.matrix, bound, limits.max_points) {
        Ok(brute) => {
            let same = brute.elements() == basis.elements();
            Ok(Check::new("graver", same, format!("{} elements, box [-{bound}, {bound}]", basis.len())))
        }
        Err(e @ Error::BudgetExceeded { .. }) => Ok(Check::skip("graver", e.to_string())),
        Err(e) => Err(e.into()),
    }
}
