//! Exact Graver-basis methods for n-fold integer programming and convex
//! integer maximization.
//!
//! Everything is generic over an integer [`Scalar`]; the aliases below fix
//! it to `BigInt` (the default) or to `i64` for small instances.

pub mod apps;
pub mod bruteforce;
pub mod convexmax;
pub mod error;
pub mod graver;
pub mod ip;
pub mod linalg;
pub mod nfold;
pub mod scalar;
pub mod zonotope;

pub use error::{Error, Result};
pub use scalar::Scalar;

use num_bigint::BigInt;

/// Resource guards shared by every algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest Graver basis (counting both signs) any completion may produce.
    pub max_basis: usize,
    /// Largest number of brick placements tried when lifting a basis.
    pub max_placements: usize,
    /// Largest number of lattice points a brute-force search may visit.
    pub max_points: u64,
    /// Largest ambient dimension for zonotope enumeration.
    pub max_zonotope_dim: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_basis: 1_000_000, max_placements: 10_000_000, max_points: 1_000_000, max_zonotope_dim: 6 }
    }
}

pub type IntVec = linalg::Vector<BigInt>;
pub type IntMat = linalg::Matrix<BigInt>;
pub type GraverBasis = graver::Basis<BigInt>;
pub type NFoldStencil = nfold::Stencil<BigInt>;
pub type NFoldRhs = nfold::Rhs<BigInt>;
pub type Bricks = nfold::BrickVector<BigInt>;
pub type SolveOutcome = ip::Outcome<BigInt>;

pub type SmallVec = linalg::Vector<i64>;
pub type SmallMat = linalg::Matrix<i64>;
pub type SmallGraverBasis = graver::Basis<i64>;
pub type SmallStencil = nfold::Stencil<i64>;
pub type ZonotopeVertex = zonotope::Vertex<BigInt>;
pub type ConvexOutcome = convexmax::ConvexOutcome<BigInt>;
