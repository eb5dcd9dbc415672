use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use nfold_core::Limits;

use crate::failure::Failure;

#[derive(Parser, Debug)]
#[command(name = "nfold", version, about = "Exact Graver-basis solvers for n-fold and convex integer programs")]
pub struct Cli {
    #[command(flatten)]
    pub guards: Guards,

    #[command(subcommand)]
    pub command: Command,
}

/// Resource guards. Flags win over the environment.
#[derive(Args, Debug)]
pub struct Guards {
    /// Largest Graver basis (both signs) a completion may build.
    #[arg(long, global = true, env = "NFOLD_MAX_BASIS")]
    pub max_basis: Option<usize>,

    /// Largest number of brick placements when lifting an n-fold basis.
    #[arg(long, global = true, env = "NFOLD_MAX_PLACEMENTS")]
    pub max_placements: Option<usize>,

    /// Largest number of lattice points a brute-force search may visit.
    #[arg(long, global = true, env = "NFOLD_MAX_POINTS")]
    pub max_points: Option<u64>,

    /// Largest projection dimension d for zonotope enumeration (at most 6).
    #[arg(long, global = true, env = "NFOLD_MAX_DIM")]
    pub max_dim: Option<usize>,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "NFOLD_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Graver basis of a matrix, canonical representatives one per row.
    Graver {
        matrix: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graver basis of the n-fold matrix of a stencil.
    NfoldGraver {
        #[arg(long)]
        stencil: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vertices of the zonotope spanned by the rows of a matrix, with
    /// certificates.
    Zonotope {
        generators: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Linear integer program max w x, A x = b, x >= 0.
    SolveIp {
        #[command(flatten)]
        system: SystemArgs,
        /// Objective vector w.
        #[arg(long)]
        obj: PathBuf,
        /// Writes the solution vector in the matrix text format.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convex maximization of c(W x) over A x = b, x >= 0.
    SolveConvex {
        #[command(flatten)]
        system: SystemArgs,
        /// Matrix whose d rows are the weight vectors.
        #[arg(long)]
        weights: PathBuf,
        #[arg(long, default_value = "norm2")]
        objective: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multiway transportation instance (JSON, schema nfold.transport.v1).
    Transport(AppArgs),
    /// Bin packing instance (JSON, schema nfold.pack.v1).
    Pack(AppArgs),
    /// Vector partition instance (JSON, schema nfold.partition.v1).
    Partition(AppArgs),
    /// Compares the solver with exhaustive enumeration on a small instance.
    Verify {
        /// An application instance; replaces the system flags.
        #[arg(long, conflicts_with_all = ["stencil", "matrix", "weights"])]
        instance: Option<PathBuf>,
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        objective: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// The constraint system `A x = b`, either as a stencil with a layer count
/// or as a plain matrix.
#[derive(Args, Debug)]
pub struct SystemArgs {
    #[arg(long, conflicts_with = "matrix")]
    pub stencil: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Right-hand side, one row or one column.
    #[arg(long)]
    pub rhs: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AppArgs {
    pub instance: PathBuf,
    /// norm2, linear, linear:<file>, maxlin:<file> or negmin:<file>.
    #[arg(long)]
    pub objective: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Validated settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub limits: Limits,
    pub threads: usize,
}

/// Projection dimensions above this are refused outright.
pub const DIM_CEILING: usize = 6;

impl Cli {
    pub fn config(&self) -> Result<RunConfig, Failure> {
        let g = &self.guards;
        let d = Limits::default();
        let positive = |name: &str, v: Option<usize>, default: usize| match v {
            Some(0) => Err(Failure::Usage(format!("{name} must be positive"))),
            Some(v) => Ok(v),
            None => Ok(default),
        };
        let limits = Limits {
            max_basis: positive("max-basis", g.max_basis, d.max_basis)?,
            max_placements: positive("max-placements", g.max_placements, d.max_placements)?,
            max_points: match g.max_points {
                Some(0) => return Err(Failure::Usage("max-points must be positive".into())),
                Some(v) => v,
                None => d.max_points,
            },
            max_zonotope_dim: positive("max-dim", g.max_dim, d.max_zonotope_dim)?,
        };
        if limits.max_zonotope_dim > DIM_CEILING {
            return Err(Failure::Usage(format!("max-dim must be at most {DIM_CEILING}")));
        }
        let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
        let threads = positive("threads", g.threads, cores)?;
        Ok(RunConfig { limits, threads })
    }
}
