//! JSON application instances and their domain-shaped solutions.
//!
//! Schemas (all integers exact; strings of digits are accepted too):
//!
//! `nfold.transport.v1`: `dims` (sizes of the non-layer axes), `layers`,
//! `margins` (list of `{support, values}`, supports 1-based with the layer
//! axis last, values row-major), `weights` (d rows over the table entries,
//! row-major with the layer index last).
//!
//! `nfold.pack.v1`: `weights`, `counts` (per item type), `capacities` (per
//! bin), `utilities` (d matrices, types x bins).
//!
//! `nfold.partition.v1`: `players`, `items` (vectors of equal length),
//! optional `sizes` (one per player).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use nfold_core::apps::{
    build_multiway, build_packing, build_partition, cluster_variance, MultiwayInstance, PackingInstance,
    PackingSystem, PartitionInstance, PartitionSystem, Table, TransportSystem,
};
use nfold_core::convexmax::ObjectiveWeights;
use nfold_core::linalg::Matrix;
use nfold_core::{IntVec, NFoldRhs, NFoldStencil};

use crate::failure::{Failure, Outcome};
use crate::json::{field, ints, nested, object, parse_count, parse_counts, parse_ints, parse_vectors, schema};

pub const TRANSPORT: &str = "nfold.transport.v1";
pub const PACK: &str = "nfold.pack.v1";
pub const PARTITION: &str = "nfold.partition.v1";

pub enum App {
    Transport(TransportSystem<BigInt>),
    /// `None` when the items outweigh the bins.
    Pack(Option<PackingSystem<BigInt>>),
    Partition(Vec<IntVec>, PartitionSystem<BigInt>),
}

pub struct AppProblem {
    pub app: App,
    pub weights: ObjectiveWeights<BigInt>,
}

/// Parses an instance, requiring `expected` as its schema when given.
pub fn load(value: &Value, expected: Option<&str>) -> Outcome<AppProblem> {
    let found = schema(value)?;
    if let Some(want) = expected {
        if found != want {
            return Err(Failure::Usage(format!("schema {found:?} where {want:?} was expected")));
        }
    }
    let obj = object(value, "instance")?;
    match found {
        TRANSPORT => transport(obj),
        PACK => pack(obj),
        PARTITION => partition(obj),
        other => Err(Failure::Usage(format!("unknown schema {other:?}"))),
    }
}

fn transport(obj: &Map<String, Value>) -> Outcome<AppProblem> {
    let dims = parse_counts(field(obj, "dims")?, "dims")?;
    let n = parse_count(field(obj, "layers")?, "layers")?;
    let list = field(obj, "margins")?.as_array().ok_or_else(|| Failure::Usage("margins: expected an array".into()))?;
    let mut family = Vec::new();
    let mut margins = BTreeMap::new();
    for (i, m) in list.iter().enumerate() {
        let m = object(m, &format!("margins[{i}]"))?;
        let support = parse_counts(field(m, "support")?, &format!("margins[{i}].support"))?;
        let values = parse_ints(field(m, "values")?, &format!("margins[{i}].values"))?;
        if margins.insert(support.clone(), values).is_some() {
            return Err(Failure::Usage(format!("support {support:?} appears twice")));
        }
        family.push(support);
    }
    let sys = build_multiway(&MultiwayInstance { dims, n, family, margins })?;
    let mut table_dims = sys.codec.dims.clone();
    table_dims.push(n);
    let rows = parse_vectors(field(obj, "weights")?, "weights")?
        .into_iter()
        .map(|row| Ok(sys.codec.encode(&Table::new(table_dims.clone(), row.into_inner())?)?))
        .collect::<Outcome<Vec<_>>>()?;
    Ok(AppProblem { weights: ObjectiveWeights::new(rows)?, app: App::Transport(sys) })
}

fn pack(obj: &Map<String, Value>) -> Outcome<AppProblem> {
    let inst = PackingInstance {
        weights: parse_ints(field(obj, "weights")?, "weights")?,
        counts: parse_ints(field(obj, "counts")?, "counts")?,
        capacities: parse_ints(field(obj, "capacities")?, "capacities")?,
    };
    let sys = build_packing(&inst)?;
    let types = inst.weights.len();
    let bins = inst.capacities.len();
    let utilities = field(obj, "utilities")?
        .as_array()
        .ok_or_else(|| Failure::Usage("utilities: expected an array of matrices".into()))?
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let rows = parse_vectors(u, &format!("utilities[{i}]"))?;
            if rows.len() != types || rows.iter().any(|r| r.len() != bins) {
                return Err(Failure::Usage(format!("utilities[{i}]: expected {types} rows of {bins} entries")));
            }
            Ok(Matrix::from_rows(rows, bins)?)
        })
        .collect::<Outcome<Vec<_>>>()?;
    let weights = match &sys {
        Some(sys) => sys.lift_utilities(&utilities)?,
        // never solved; only the shape matters
        None => ObjectiveWeights::new(vec![IntVec::zeros((types + 1) * bins); utilities.len().max(1)])?,
    };
    Ok(AppProblem { app: App::Pack(sys), weights })
}

fn partition(obj: &Map<String, Value>) -> Outcome<AppProblem> {
    let players = parse_count(field(obj, "players")?, "players")?;
    let items = parse_vectors(field(obj, "items")?, "items")?;
    let sizes = match obj.get("sizes") {
        None | Some(Value::Null) => None,
        Some(v) => Some(parse_ints(v, "sizes")?),
    };
    let sys = build_partition(&PartitionInstance { players, items: items.clone(), sizes })?;
    Ok(AppProblem { weights: sys.weights.clone(), app: App::Partition(items, sys) })
}

impl AppProblem {
    /// The n-fold system, or `None` for an instance infeasible on its face.
    pub fn system(&self) -> Option<(&NFoldStencil, usize, &NFoldRhs)> {
        match &self.app {
            App::Transport(s) => Some((&s.stencil, s.codec.n, &s.rhs)),
            App::Pack(s) => s.as_ref().map(|s| (&s.stencil, s.bins, &s.rhs)),
            App::Partition(_, s) => Some((&s.stencil, s.n, &s.rhs)),
        }
    }

    pub fn solution_schema(&self) -> &'static str {
        match self.app {
            App::Transport(_) => "nfold.transport.solution.v1",
            App::Pack(_) => "nfold.pack.solution.v1",
            App::Partition(..) => "nfold.partition.solution.v1",
        }
    }

    /// Domain fields describing the solution `x`.
    pub fn describe(&self, x: &IntVec) -> Outcome<Map<String, Value>> {
        let mut out = Map::new();
        match &self.app {
            App::Transport(s) => {
                let table = s.codec.decode(x)?;
                out.insert("table".into(), nested(&table.dims, &table.data));
            }
            App::Pack(s) => {
                let p = s.as_ref().expect("only feasible packings are described").decode(x)?;
                out.insert("items".into(), Value::Array(p.items.iter().map(|r| ints(r)).collect()));
                out.insert("slack".into(), ints(&p.slack));
            }
            App::Partition(items, s) => {
                let parts = s.decode(x)?;
                let variance = if parts.iter().any(|p| p.is_empty()) {
                    Value::Null
                } else {
                    Value::String(cluster_variance(items, &parts)?.to_string())
                };
                out.insert("parts".into(), json!(parts));
                out.insert("variance".into(), variance);
            }
        }
        Ok(out)
    }
}
