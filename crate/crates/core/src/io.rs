//! Reading and writing JSON artifacts.
//!
//! All writers emit compact single-line JSON with a trailing newline.
//! Combined with the canonical edge order and `BTreeMap`-backed
//! collections used throughout, rerunning a seeded computation produces
//! byte-identical files.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::chromatic::VertexColoring;
use crate::graph::LabeledMultigraph;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("failed to access {path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to parse {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

/// Serializes a value in the canonical artifact form: compact JSON plus a
/// trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("artifact types serialize infallibly");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<(), IoError> {
    let path = path.as_ref();
    fs::write(path, to_canonical_json(value)).map_err(|source| IoError::File {
        path: path_str(path),
        source,
    })
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T, IoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| IoError::File {
        path: path_str(path),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path_str(path),
        source,
    })
}

pub fn write_graph(path: impl AsRef<Path>, g: &LabeledMultigraph) -> Result<(), IoError> {
    write_json(path, g)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<LabeledMultigraph, IoError> {
    read_json(path)
}

pub fn write_coloring(path: impl AsRef<Path>, c: &VertexColoring) -> Result<(), IoError> {
    write_json(path, c)
}

pub fn read_coloring(path: impl AsRef<Path>) -> Result<VertexColoring, IoError> {
    read_json(path)
}
