//! Canonical JSON: object keys sorted at every depth, no insignificant
//! whitespace. Equal values always produce identical bytes.

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

fn sort_keys(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sort_keys(v))).collect::<Map<_, _>>())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

pub fn to_canonical_value<T: Serialize>(value: &T) -> Value {
    sort_keys(serde_json::to_value(value).expect("engine types serialize to JSON"))
}

pub fn to_canonical_string<T: Serialize>(value: &T) -> String {
    to_canonical_value(value).to_string()
}

/// Hex SHA-256 of the canonical serialization.
pub fn digest<T: Serialize>(value: &T) -> String {
    hex::encode(Sha256::digest(to_canonical_string(value).as_bytes()))
}
