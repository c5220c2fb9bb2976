//! JSON load/save for ring, family and adjacency documents.
//!
//! Documents are first parsed into their raw shape, so syntax and type
//! errors carry serde_json's line/column context, and dimension problems
//! surface as [`Error::Dimension`] rather than a generic parse failure.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

pub trait JsonDocument: Serialize + Sized {
    type Raw: DeserializeOwned;

    fn from_raw(raw: Self::Raw) -> Result<Self>;
}

pub fn from_json_str<T: JsonDocument>(text: &str) -> Result<T> {
    let raw: T::Raw = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    T::from_raw(raw)
}

pub fn to_json_string<T: JsonDocument>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))
}

pub fn load<T: JsonDocument>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    from_json_str(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn save<T: JsonDocument>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let mut text = to_json_string(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
