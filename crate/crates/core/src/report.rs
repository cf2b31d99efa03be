//! Serialization helpers for line-delimited reports.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serializer;

/// Integers are written as JSON numbers when they fit in an `i64`, as
/// decimal strings otherwise.
pub fn ser_big<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

pub fn ser_rat<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    if v.is_integer() {
        ser_big(v.numer(), s)
    } else {
        s.serialize_str(&v.to_string())
    }
}
