//! Encodings of concrete problems as n-fold systems.

pub mod packing;
pub mod partition;
pub mod transport;

pub use packing::{build_packing, Packing, PackingInstance, PackingSystem};
pub use partition::{build_partition, cluster_variance, PartitionInstance, PartitionSystem};
pub use transport::{build_multiway, build_threeway, MultiwayInstance, Table, TableCodec, TransportSystem};
