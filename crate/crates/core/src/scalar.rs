//! The integer ring every vector, matrix and basis is generic over.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact integer type.
///
/// `BigInt` is the default everywhere (see the aliases at the crate root).
/// The fixed-width impls exist for small instances and for oracle code that
/// wants to stay independent of the main arithmetic; they rely on overflow
/// checks being enabled (the workspace enables them in every profile).
pub trait Scalar:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + Hash
    + Send
    + Sync
    + FromPrimitive
    + ToPrimitive
    + 'static
{
    fn parse_decimal(s: &str) -> Option<Self> {
        Self::from_str_radix(s, 10).ok()
    }

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every scalar type holds an i64")
    }
}

impl Scalar for BigInt {}
impl Scalar for i64 {}
impl Scalar for i128 {}

/// Converts between scalar types, failing when the value does not fit.
pub fn convert<S: Scalar, T: Scalar>(v: &S) -> Option<T> {
    if let Some(small) = v.to_i64() {
        return T::from_i64(small);
    }
    T::parse_decimal(&v.to_string())
}
