//! Multiway transportation: tables with prescribed margins. The last axis
//! of a table indexes the n-fold layers.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::nfold::{Rhs, Stencil};
use crate::scalar::Scalar;

/// An `m_1 x ... x m_{k-1} x n` table, row-major (layer index last).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table<T> {
    pub dims: Vec<usize>,
    pub data: Vec<T>,
}

impl<T: Scalar> Table<T> {
    pub fn new(dims: Vec<usize>, data: Vec<T>) -> Result<Self> {
        let size: usize = dims.iter().product();
        if dims.is_empty() || data.len() != size {
            return Err(Error::Dimension(format!("table of shape {dims:?} with {} entries", data.len())));
        }
        Ok(Table { dims, data })
    }

    /// The margin with the given support (1-based axes, sorted), row-major
    /// over the support axes.
    pub fn margin(&self, support: &[usize]) -> Result<Vec<T>> {
        let axes = support_axes(support, self.dims.len())?;
        let shape: Vec<usize> = axes.iter().map(|&a| self.dims[a]).collect();
        let mut out = vec![T::zero(); shape.iter().product()];
        for (flat, value) in self.data.iter().enumerate() {
            let index = unflatten(flat, &self.dims);
            let key = flatten(&axes.iter().map(|&a| index[a]).collect::<Vec<_>>(), &shape);
            out[key] = out[key].clone() + value.clone();
        }
        Ok(out)
    }
}

fn unflatten(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut index = vec![0; dims.len()];
    for (slot, d) in index.iter_mut().zip(dims).rev() {
        *slot = flat % d;
        flat /= d;
    }
    index
}

fn flatten(index: &[usize], dims: &[usize]) -> usize {
    index.iter().zip(dims).fold(0, |acc, (i, d)| acc * d + i)
}

/// Sorted, deduplicated 0-based axes of a 1-based support.
fn support_axes(support: &[usize], k: usize) -> Result<Vec<usize>> {
    let mut axes: Vec<usize> = support.to_vec();
    axes.sort_unstable();
    axes.dedup();
    if axes.len() != support.len() || axes.iter().any(|&a| a == 0 || a > k) {
        return Err(Error::Invalid(format!("support {support:?} is not a set of axes in 1..={k}")));
    }
    Ok(axes.into_iter().map(|a| a - 1).collect())
}

/// Converts between tables and n-fold vectors (layer `l` holds the slice
/// with last index `l`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableCodec {
    pub dims: Vec<usize>,
    pub n: usize,
}

impl TableCodec {
    /// Cells per layer.
    pub fn t(&self) -> usize {
        self.dims.iter().product()
    }

    fn table_dims(&self) -> Vec<usize> {
        let mut d = self.dims.clone();
        d.push(self.n);
        d
    }

    pub fn encode<T: Scalar>(&self, table: &Table<T>) -> Result<Vector<T>> {
        if table.dims != self.table_dims() {
            return Err(Error::Dimension(format!("table of shape {:?}, expected {:?}", table.dims, self.table_dims())));
        }
        let t = self.t();
        let mut x = vec![T::zero(); t * self.n];
        for (flat, value) in table.data.iter().enumerate() {
            let (cell, layer) = (flat / self.n, flat % self.n);
            x[layer * t + cell] = value.clone();
        }
        Ok(Vector::new(x))
    }

    pub fn decode<T: Scalar>(&self, x: &[T]) -> Result<Table<T>> {
        let t = self.t();
        if x.len() != t * self.n {
            return Err(Error::Dimension(format!("vector of length {} for a {t}-cell, {}-layer table", x.len(), self.n)));
        }
        let mut data = vec![T::zero(); x.len()];
        for (pos, value) in x.iter().enumerate() {
            let (layer, cell) = (pos / t, pos % t);
            data[cell * self.n + layer] = value.clone();
        }
        Table::new(self.table_dims(), data)
    }
}

/// Margins of a `k`-way table over a family of supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiwayInstance<T> {
    /// Sizes `m_1, ..., m_{k-1}` of the non-layer axes.
    pub dims: Vec<usize>,
    /// Number of layers, the size of axis `k`.
    pub n: usize,
    /// Supports (1-based axes) whose margins are prescribed.
    pub family: Vec<Vec<usize>>,
    /// Margin values per support, row-major over the support axes.
    pub margins: BTreeMap<Vec<usize>, Vec<T>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportSystem<T> {
    pub stencil: Stencil<T>,
    pub rhs: Rhs<T>,
    pub codec: TableCodec,
}

/// Margins over supports containing the layer axis become per-layer rows,
/// the others become rows shared by all layers.
pub fn build_multiway<T: Scalar>(inst: &MultiwayInstance<T>) -> Result<TransportSystem<T>> {
    let k = inst.dims.len() + 1;
    if inst.n == 0 || inst.dims.iter().any(|&m| m == 0) {
        return Err(Error::Dimension(format!("table shape {:?} with {} layers", inst.dims, inst.n)));
    }
    let mut table_dims = inst.dims.clone();
    table_dims.push(inst.n);
    let family: Vec<Vec<usize>> =
        inst.family.iter().map(|f| support_axes(f, k)).collect::<Result<_>>()?;
    let mut by_support: BTreeMap<Vec<usize>, &Vec<T>> = BTreeMap::new();
    for (support, values) in &inst.margins {
        let axes = support_axes(support, k)?;
        if !family.contains(&axes) {
            return Err(Error::Invalid(format!("margin {support:?} is not in the margin family")));
        }
        let size: usize = axes.iter().map(|&a| table_dims[a]).product();
        if values.len() != size {
            return Err(Error::Dimension(format!("margin {support:?} has {} values, expected {size}", values.len())));
        }
        if values.iter().any(|v| v.is_negative()) {
            return Err(Error::Invalid(format!("margin {support:?} has a negative value")));
        }
        by_support.insert(axes, values);
    }

    let t: usize = inst.dims.iter().product();
    let cells: Vec<Vec<usize>> = (0..t).map(|c| unflatten(c, &inst.dims)).collect();
    let (mut a1_rows, mut a2_rows) = (Vec::new(), Vec::new());
    let mut b0 = Vec::new();
    let mut layers: Vec<Vec<T>> = vec![Vec::new(); inst.n];
    for axes in &family {
        let values = by_support.get(axes).ok_or_else(|| {
            Error::Invalid(format!("no margin given for support {:?}", axes.iter().map(|a| a + 1).collect::<Vec<_>>()))
        })?;
        let layered = axes.last() == Some(&(k - 1));
        let inner: Vec<usize> = axes.iter().copied().filter(|&a| a != k - 1).collect();
        let shape: Vec<usize> = inner.iter().map(|&a| inst.dims[a]).collect();
        for tuple in 0..shape.iter().product() {
            let fixed = unflatten(tuple, &shape);
            let row: Vec<T> = cells
                .iter()
                .map(|cell| {
                    if inner.iter().zip(&fixed).all(|(&a, &i)| cell[a] == i) {
                        T::one()
                    } else {
                        T::zero()
                    }
                })
                .collect();
            if layered {
                for (l, layer) in layers.iter_mut().enumerate() {
                    layer.push(values[tuple * inst.n + l].clone());
                }
                a2_rows.push(Vector::new(row));
            } else {
                b0.push(values[tuple].clone());
                a1_rows.push(Vector::new(row));
            }
        }
    }
    let stencil = Stencil::new(Matrix::from_rows(a1_rows, t)?, Matrix::from_rows(a2_rows, t)?)?;
    let rhs = Rhs::new(Vector::new(b0), layers.into_iter().map(Vector::new).collect());
    Ok(TransportSystem { stencil, rhs, codec: TableCodec { dims: inst.dims.clone(), n: inst.n } })
}

/// The 3-way `p x q x n` problem with line sums `u` (over layers), `v` (over
/// the second axis) and `z` (over the first axis).
pub fn build_threeway<T: Scalar>(
    p: usize,
    q: usize,
    n: usize,
    u: &Matrix<T>,
    v: &Matrix<T>,
    z: &Matrix<T>,
) -> Result<TransportSystem<T>> {
    for (name, m, rows, cols) in [("u", u, p, q), ("v", v, p, n), ("z", z, q, n)] {
        if m.rows() != rows || m.cols() != cols {
            return Err(Error::Dimension(format!(
                "margin {name} is {}x{}, expected {rows}x{cols}",
                m.rows(),
                m.cols()
            )));
        }
    }
    let flat = |m: &Matrix<T>| (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect::<Vec<T>>();
    let inst = MultiwayInstance {
        dims: vec![p, q],
        n,
        family: vec![vec![1, 2], vec![1, 3], vec![2, 3]],
        margins: BTreeMap::from([(vec![1, 2], flat(u)), (vec![1, 3], flat(v)), (vec![2, 3], flat(z))]),
    };
    build_multiway(&inst)
}
