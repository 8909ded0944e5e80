//! Small serialization helpers shared by reports and lattice exports.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

/// Serializes as a JSON number when it fits in 64 bits, as a decimal string
/// otherwise.
pub struct BigNum<'a>(pub &'a BigUint);

impl Serialize for BigNum<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub struct BigSigned<'a>(pub &'a BigInt);

impl Serialize for BigSigned<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub fn biguint<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    BigNum(v).serialize(s)
}

pub fn bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    BigSigned(v).serialize(s)
}
