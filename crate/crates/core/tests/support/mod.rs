//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use nfold_core::apps::{build_packing, build_partition, build_threeway, PackingInstance, PartitionInstance, Table};
use nfold_core::bruteforce::{enumerate_feasible, EnumBudget};
use nfold_core::convexmax::{Builtin, ObjectiveWeights};
use nfold_core::linalg::{Matrix, Vector};
use nfold_core::nfold::{nfold_matrix, Rhs, Stencil};
use nfold_core::scalar::convert;
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type V = Vector<BigInt>;
pub type M = Matrix<BigInt>;

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rand_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: i64, hi: i64) -> M {
    let data: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(lo..=hi)).collect();
    Matrix::from_ints(rows, cols, &data).unwrap()
}

pub fn rand_vector(rng: &mut ChaCha8Rng, len: usize, lo: i64, hi: i64) -> V {
    Vector::new((0..len).map(|_| big(rng.gen_range(lo..=hi))).collect())
}

pub fn to_small(m: &M) -> Matrix<i64> {
    let data = (0..m.rows()).flat_map(|r| m.row(r).iter().map(|e| convert(e).unwrap()).collect::<Vec<i64>>()).collect();
    Matrix::new(m.rows(), m.cols(), data).unwrap()
}

pub fn vec_small(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|e| convert(e).unwrap()).collect()
}

pub fn vec_big(v: &[i64]) -> V {
    Vector::from_ints(v)
}

/// A bounded n-fold system with its flat matrix and per-variable bounds.
pub struct NFoldCase {
    pub stencil: nfold_core::nfold::Stencil<BigInt>,
    pub n: usize,
    pub rhs: Rhs<BigInt>,
    pub matrix: M,
    pub bounds: Vec<i64>,
}

impl NFoldCase {
    /// Number of lattice points in the enumeration box.
    pub fn box_size(&self) -> u128 {
        self.bounds.iter().map(|&u| u as u128 + 1).product()
    }

    /// All feasible points, enumerated in `i64`.
    pub fn feasible_points(&self) -> Vec<V> {
        let budget = EnumBudget { max_points: 1_000_000, bounds: Some(self.bounds.clone()) };
        enumerate_feasible(&to_small(&self.matrix), &vec_small(&self.rhs.flatten()), &budget)
            .unwrap()
            .into_iter()
            .map(|x| vec_big(&x))
            .collect()
    }
}

/// Bounds from rows with nonnegative coefficients: `x_j <= b_i / a_ij`.
pub fn row_bounds(matrix: &M, b: &[BigInt]) -> Vec<i64> {
    (0..matrix.cols())
        .map(|j| {
            (0..matrix.rows())
                .filter(|&i| matrix.get(i, j) > &big(0) && matrix.row(i).iter().all(|e| e >= &big(0)))
                .map(|i| {
                    let q: i64 = convert(&(b[i].clone() / matrix.get(i, j))).unwrap();
                    q.max(0)
                })
                .min()
                .expect("every variable is bounded by some nonnegative row")
        })
        .collect()
}

/// A random n-fold system whose layer rows are nonnegative and cover every
/// column, so each variable is bounded. A third of the right-hand sides are
/// perturbed and usually infeasible.
pub fn bounded_nfold(rng: &mut ChaCha8Rng) -> NFoldCase {
    loop {
        let t = rng.gen_range(2..=3);
        let r = rng.gen_range(0..=1);
        let s = rng.gen_range(1..=2);
        let n = rng.gen_range(1..=3);
        let a1 = rand_matrix(rng, r, t, -2, 2);
        let mut a2 = rand_matrix(rng, s, t, 0, 2);
        for j in 0..t {
            if (0..s).all(|i| a2.get(i, j) == &big(0)) {
                a2.set(rng.gen_range(0..s), j, big(rng.gen_range(1..=2)));
            }
        }
        let stencil = Stencil::new(a1, a2).unwrap();
        let matrix = nfold_matrix(&stencil, n).unwrap();
        let x = rand_vector(rng, n * t, 0, 2);
        let mut b = matrix.mat_vec(&x).unwrap();
        if rng.gen_bool(1.0 / 3.0) {
            let i = rng.gen_range(0..b.len());
            let bump = big(rng.gen_range(1..=2));
            b.as_mut_slice()[i] += bump;
        }
        let rhs = Rhs::from_flat(&b, &stencil, n).unwrap();
        let bounds = row_bounds(&matrix, &b);
        let case = NFoldCase { stencil, n, rhs, matrix, bounds };
        if case.box_size() <= 1_000_000 {
            return case;
        }
    }
}

/// A random table with entries in `0..=hi`.
pub fn rand_table(rng: &mut ChaCha8Rng, dims: Vec<usize>, hi: i64) -> Table<BigInt> {
    let size = dims.iter().product();
    Table::new(dims, (0..size).map(|_| big(rng.gen_range(0..=hi))).collect()).unwrap()
}

pub fn rand_weights(rng: &mut ChaCha8Rng, d: usize, len: usize, lo: i64, hi: i64) -> ObjectiveWeights<BigInt> {
    ObjectiveWeights::new((0..d).map(|_| rand_vector(rng, len, lo, hi)).collect()).unwrap()
}

pub fn rand_objective(rng: &mut ChaCha8Rng, d: usize) -> Builtin<BigInt> {
    if rng.gen_bool(0.5) {
        Builtin::Norm2
    } else {
        let forms = rng.gen_range(2..=3);
        Builtin::MaxLinear((0..forms).map(|_| rand_vector(rng, d, -3, 3)).collect())
    }
}

/// A convex maximization instance with its feasible points.
pub struct ConvexCase {
    pub kind: &'static str,
    pub stencil: Stencil<BigInt>,
    pub n: usize,
    pub rhs: Rhs<BigInt>,
    pub weights: ObjectiveWeights<BigInt>,
    pub objective: Builtin<BigInt>,
    pub points: Vec<V>,
}

fn finish(
    kind: &'static str,
    stencil: Stencil<BigInt>,
    n: usize,
    rhs: Rhs<BigInt>,
    weights: ObjectiveWeights<BigInt>,
    objective: Builtin<BigInt>,
    bounds: Vec<i64>,
) -> Option<ConvexCase> {
    let case = NFoldCase { stencil, n, rhs, matrix: M::zeros(0, 0), bounds };
    let matrix = nfold_matrix(&case.stencil, n).unwrap();
    let case = NFoldCase { matrix, ..case };
    if case.box_size() > 1_000_000 {
        return None;
    }
    let points = case.feasible_points();
    Some(ConvexCase { kind, stencil: case.stencil, n, rhs: case.rhs, weights, objective, points })
}

/// 2 x 2 x n transportation with margins of a random table.
pub fn transport_case(rng: &mut ChaCha8Rng) -> ConvexCase {
    loop {
        let n = rng.gen_range(1..=4);
        let table = rand_table(rng, vec![2, 2, n], 1);
        let margin = |s: &[usize], r, c| Matrix::new(r, c, table.margin(s).unwrap()).unwrap();
        let sys = build_threeway(2, 2, n, &margin(&[1, 2], 2, 2), &margin(&[1, 3], 2, n), &margin(&[2, 3], 2, n))
            .unwrap();
        let matrix = nfold_matrix(&sys.stencil, n).unwrap();
        let bounds = row_bounds(&matrix, &sys.rhs.flatten());
        let d = rng.gen_range(1..=2);
        let weights = rand_weights(rng, d, 4 * n, -2, 2);
        let objective = rand_objective(rng, d);
        if let Some(c) = finish("transport", sys.stencil, n, sys.rhs, weights, objective, bounds) {
            return c;
        }
    }
}

/// Packing with up to two item types (three with slack) and up to four bins.
pub fn packing_case(rng: &mut ChaCha8Rng) -> ConvexCase {
    loop {
        let types = rng.gen_range(1..=2);
        let bins = rng.gen_range(1..=4);
        let inst = PackingInstance {
            weights: (0..types).map(|_| big(rng.gen_range(1..=3))).collect(),
            counts: (0..types).map(|_| big(rng.gen_range(0..=3))).collect(),
            capacities: (0..bins).map(|_| big(rng.gen_range(0..=4))).collect(),
        };
        let Some(sys) = build_packing(&inst).unwrap() else {
            continue;
        };
        let d = rng.gen_range(1..=2);
        let utilities: Vec<M> = (0..d).map(|_| rand_matrix(rng, types, bins, -3, 3)).collect();
        let weights = sys.lift_utilities(&utilities).unwrap();
        let objective = rand_objective(rng, d);
        let matrix = nfold_matrix(&sys.stencil, bins).unwrap();
        let bounds = row_bounds(&matrix, &sys.rhs.flatten());
        if let Some(c) = finish("packing", sys.stencil, bins, sys.rhs, weights, objective, bounds) {
            return c;
        }
    }
}

/// Two-player partition of up to eight planar points, balanced sizes.
pub fn partition_case(rng: &mut ChaCha8Rng) -> ConvexCase {
    let n = 2 * rng.gen_range(1..=4);
    let items: Vec<V> = (0..n).map(|_| rand_vector(rng, 2, -3, 3)).collect();
    let half = big(n as i64 / 2);
    let inst = PartitionInstance { players: 2, items, sizes: Some(vec![half.clone(), half]) };
    let sys = build_partition(&inst).unwrap();
    let objective = if rng.gen_bool(0.5) {
        Builtin::Norm2
    } else {
        Builtin::MaxLinear((0..3).map(|_| rand_vector(rng, 4, -2, 2)).collect())
    };
    let bounds = vec![1; 2 * n];
    finish("partition", sys.stencil, n, sys.rhs, sys.weights, objective, bounds).unwrap()
}
