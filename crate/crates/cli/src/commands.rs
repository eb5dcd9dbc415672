use std::path::Path;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use nfold_core::convexmax::{convex_maximize, Builtin, ConvexOutcome, ConvexReport, ObjectiveWeights};
use nfold_core::graver::graver_basis_with;
use nfold_core::ip::{IpSolver, LinearOracle, Outcome as IpOutcome};
use nfold_core::linalg::write_matrix;
use nfold_core::nfold::{nfold_graver, nfold_matrix, Rhs};
use nfold_core::zonotope::zonotope_vertices_with;
use nfold_core::{IntMat, IntVec, Limits, NFoldStencil};

use crate::config::{AppArgs, Command, RunConfig, SystemArgs};
use crate::failure::{Failure, Outcome, Status};
use crate::instances;
use crate::io::{emit, emit_json, read_json, read_matrix, read_stencil, read_vector, vector_text, write_atomic};
use crate::json::{int, ints, parse_ints, parse_vectors};
use crate::verify;

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Outcome {
    match cmd {
        Command::Graver { matrix, out } => {
            let a = read_matrix(matrix)?;
            let basis = graver_basis_with(&a, &cfg.limits)?;
            eprintln!("graver: {} elements up to sign, {} variables", basis.len() / 2, basis.dim());
            emit(out.as_deref(), &write_matrix(&basis.to_matrix()))?;
            Ok(Status::Success)
        }
        Command::NfoldGraver { stencil, n, out } => {
            let s = read_stencil(stencil)?;
            let basis = nfold_graver(&s, *n, &cfg.limits)?;
            eprintln!("nfold-graver: {} elements up to sign, {} variables", basis.len() / 2, basis.dim());
            emit(out.as_deref(), &write_matrix(&basis.to_matrix()))?;
            Ok(Status::Success)
        }
        Command::Zonotope { generators, out } => zonotope(generators, out.as_deref(), &cfg.limits),
        Command::SolveIp { system, obj, out } => solve_ip(system, obj, out.as_deref(), &cfg.limits),
        Command::SolveConvex { system, weights, objective, out } => {
            let sys = System::load(system)?;
            let rows = read_matrix(weights)?.row_vectors();
            let weights = ObjectiveWeights::new(rows)?;
            let objective = parse_objective(objective, weights.d())?;
            let report = sys.maximize(&weights, &objective, &cfg.limits)?;
            let (body, status) = convex_json("nfold.convex.v1", &report, &objective);
            eprintln!("solve-convex: {}", summary(&report));
            if let (Some(path), ConvexOutcome::Optimal { x, .. }) = (out, &report.outcome) {
                write_atomic(path, &vector_text(x))?;
            }
            emit_json(None, &Value::Object(body))?;
            Ok(status)
        }
        Command::Transport(args) => app(args, instances::TRANSPORT, cfg),
        Command::Pack(args) => app(args, instances::PACK, cfg),
        Command::Partition(args) => app(args, instances::PARTITION, cfg),
        Command::Verify { instance, system, weights, objective, out } => {
            let problem = match instance {
                Some(path) => verify::Problem::from_app(instances::load(&read_json(path)?, None)?, objective.as_deref())?,
                None => {
                    let weights = weights.as_ref().ok_or_else(|| Failure::Usage("verify needs --instance or --weights".into()))?;
                    let weights = ObjectiveWeights::new(read_matrix(weights)?.row_vectors())?;
                    let objective = parse_objective(objective.as_deref().unwrap_or("norm2"), weights.d())?;
                    verify::Problem { system: Some(System::load(system)?), weights, objective }
                }
            };
            verify::run(&problem, out.as_deref(), &cfg.limits)
        }
    }
}

/// `A x = b`, remembering the n-fold structure when there is one.
pub struct System {
    pub matrix: IntMat,
    pub rhs: IntVec,
    pub nfold: Option<(NFoldStencil, usize)>,
}

impl System {
    pub fn load(args: &SystemArgs) -> Outcome<Self> {
        let rhs = args.rhs.as_ref().ok_or_else(|| Failure::Usage("--rhs is required".into()))?;
        let rhs = read_vector(rhs)?;
        match (&args.stencil, args.n, &args.matrix) {
            (Some(path), Some(n), None) => Self::nfold(read_stencil(path)?, n, rhs),
            (None, None, Some(path)) => Ok(System { matrix: read_matrix(path)?, rhs, nfold: None }),
            _ => Err(Failure::Usage("give either --stencil with --n, or --matrix".into())),
        }
    }

    pub fn nfold(stencil: NFoldStencil, n: usize, rhs: IntVec) -> Outcome<Self> {
        Ok(System { matrix: nfold_matrix(&stencil, n)?, rhs, nfold: Some((stencil, n)) })
    }

    pub fn solver(&self, limits: &Limits) -> Outcome<IpSolver<BigInt>> {
        Ok(match &self.nfold {
            Some((stencil, n)) => IpSolver::for_nfold(stencil, *n, &Rhs::from_flat(&self.rhs, stencil, *n)?, limits)?,
            None => IpSolver::for_matrix(&self.matrix, &self.rhs, limits)?,
        })
    }

    pub fn maximize(
        &self,
        weights: &ObjectiveWeights<BigInt>,
        objective: &Builtin<BigInt>,
        limits: &Limits,
    ) -> Outcome<ConvexReport<BigInt>> {
        if weights.n() != self.matrix.cols() {
            return Err(Failure::Usage(format!("weights have {} columns for {} variables", weights.n(), self.matrix.cols())));
        }
        let solver = self.solver(limits)?;
        Ok(convex_maximize(&solver, weights, solver.basis().elements(), objective, limits)?)
    }
}

/// `norm2`, `linear` (all-ones form), `linear:<file>` (one JSON array),
/// `maxlin:<file>` or `negmin:<file>` (JSON array of arrays).
pub fn parse_objective(spec: &str, d: usize) -> Outcome<Builtin<BigInt>> {
    let read = |path: &str| read_json(Path::new(path));
    let objective = match spec.split_once(':') {
        None if spec == "norm2" => Builtin::Norm2,
        None if spec == "linear" => Builtin::Linear(IntVec::new(vec![BigInt::from(1); d])),
        Some(("linear", path)) => Builtin::Linear(IntVec::new(parse_ints(&read(path)?, path)?)),
        Some(("maxlin", path)) => Builtin::MaxLinear(parse_vectors(&read(path)?, path)?),
        Some(("negmin", path)) => Builtin::NegMinLinear(parse_vectors(&read(path)?, path)?),
        _ => return Err(Failure::Usage(format!("unknown objective {spec:?}"))),
    };
    objective.check(d)?;
    Ok(objective)
}

fn zonotope(generators: &Path, out: Option<&Path>, limits: &Limits) -> Outcome {
    let g = read_matrix(generators)?;
    let vertices = zonotope_vertices_with(&g.row_vectors(), g.cols(), limits)?;
    let join = |v: &IntVec| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ");
    let text: String = vertices.iter().map(|v| format!("{} ; {}\n", join(&v.vertex), join(&v.certificate))).collect();
    eprintln!("zonotope: {} vertices from {} generators in dimension {}", vertices.len(), g.rows(), g.cols());
    emit(out, &text)?;
    Ok(Status::Success)
}

fn solve_ip(system: &SystemArgs, obj: &Path, out: Option<&Path>, limits: &Limits) -> Outcome {
    let sys = System::load(system)?;
    let w = read_vector(obj)?;
    if w.len() != sys.matrix.cols() {
        return Err(Failure::Usage(format!("objective of length {} for {} variables", w.len(), sys.matrix.cols())));
    }
    let solver = sys.solver(limits)?;
    let mut body = Map::new();
    body.insert("schema".into(), json!("nfold.ip.v1"));
    let status = match solver.maximize(&w)? {
        IpOutcome::Optimal { x, value } => {
            eprintln!("solve-ip: optimal, value {value}");
            body.insert("status".into(), json!("optimal"));
            body.insert("value".into(), int(&value));
            body.insert("x".into(), ints(&x));
            if let Some(path) = out {
                write_atomic(path, &vector_text(&x))?;
            }
            Status::Success
        }
        IpOutcome::Infeasible => {
            eprintln!("solve-ip: infeasible");
            body.insert("status".into(), json!("infeasible"));
            Status::Infeasible
        }
        IpOutcome::Unbounded { ray } => {
            eprintln!("solve-ip: unbounded");
            body.insert("status".into(), json!("unbounded"));
            body.insert("ray".into(), ints(&ray));
            Status::Unbounded
        }
    };
    emit_json(None, &Value::Object(body))?;
    Ok(status)
}

fn app(args: &AppArgs, schema: &str, cfg: &RunConfig) -> Outcome {
    let problem = instances::load(&read_json(&args.instance)?, Some(schema))?;
    let objective = parse_objective(args.objective.as_deref().unwrap_or("norm2"), problem.weights.d())?;
    let (mut body, status) = match problem.system() {
        None => {
            eprintln!("{schema}: infeasible before solving");
            let mut body = Map::new();
            body.insert("schema".into(), json!(problem.solution_schema()));
            body.insert("status".into(), json!("infeasible"));
            (body, Status::Infeasible)
        }
        Some((stencil, n, rhs)) => {
            let sys = System::nfold(stencil.clone(), n, rhs.flatten())?;
            let report = sys.maximize(&problem.weights, &objective, &cfg.limits)?;
            eprintln!("{schema}: {}", summary(&report));
            let (mut body, status) = convex_json(problem.solution_schema(), &report, &objective);
            if let ConvexOutcome::Optimal { x, .. } = &report.outcome {
                body.extend(problem.describe(x)?);
            }
            (body, status)
        }
    };
    body.insert("objective".into(), json!(args.objective.as_deref().unwrap_or("norm2")));
    emit_json(args.out.as_deref(), &Value::Object(body))?;
    Ok(status)
}

fn summary(report: &ConvexReport<BigInt>) -> String {
    let s = &report.stats;
    let head = match &report.outcome {
        ConvexOutcome::Optimal { .. } => "optimal",
        ConvexOutcome::Infeasible => "infeasible",
        ConvexOutcome::UnboundedPolyhedron => "unbounded",
    };
    format!(
        "{head}; {} directions, {} zonotope vertices, {} oracle calls, {} identity checks",
        s.directions, s.vertices, s.oracle_calls, s.identity_checks
    )
}

fn convex_json(schema: &str, report: &ConvexReport<BigInt>, objective: &Builtin<BigInt>) -> (Map<String, Value>, Status) {
    let mut body = Map::new();
    body.insert("schema".into(), json!(schema));
    let status = match &report.outcome {
        ConvexOutcome::Optimal { x, z } => {
            body.insert("status".into(), json!("optimal"));
            body.insert("value".into(), int(&objective.eval(z)));
            body.insert("z".into(), ints(z));
            body.insert("x".into(), ints(x));
            Status::Success
        }
        ConvexOutcome::Infeasible => {
            body.insert("status".into(), json!("infeasible"));
            Status::Infeasible
        }
        ConvexOutcome::UnboundedPolyhedron => {
            body.insert("status".into(), json!("unbounded"));
            Status::Unbounded
        }
    };
    let s = &report.stats;
    body.insert(
        "stats".into(),
        json!({
            "oracle_calls": s.oracle_calls,
            "identity_checks": s.identity_checks,
            "directions": s.directions,
            "vertices": s.vertices,
        }),
    );
    (body, status)
}
