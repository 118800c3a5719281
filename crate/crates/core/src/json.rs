//! Serde helpers emitting big integers as exact JSON numbers.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

pub(crate) fn number(x: &BigInt) -> serde_json::Value {
    serde_json::from_str(&x.to_string()).expect("integers are valid JSON numbers")
}

pub(crate) fn bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    number(x).serialize(s)
}

pub(crate) fn bigint_vec<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&number(x))?;
    }
    seq.end()
}

pub(crate) fn bigint_matrix<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for r in rows {
        let row: Vec<_> = r.iter().map(number).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

/// Integral rationals as JSON numbers, others as `"a/b"` strings.
pub(crate) fn rational_value(x: &BigRational) -> serde_json::Value {
    if x.is_integer() {
        number(&x.to_integer())
    } else {
        serde_json::Value::String(x.to_string())
    }
}

pub(crate) fn rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    rational_value(x).serialize(s)
}
