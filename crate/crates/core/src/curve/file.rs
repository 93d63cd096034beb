//! JSON curve files.
//!
//! ```json
//! {"components": [{"name": "C1", "genus": 0}, {"name": "C2"}],
//!  "intersections": [[0, 1, 2]],
//!  "points": [{"on": [0, 1]}, {"on": [0, 1]}]}
//! ```
//!
//! `intersections` lists `[i, j, multiplicity]` with `i < j`; omitted pairs
//! are zero. `points` is optional.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Component, CurveGraph, PointRecord};
use crate::error::Error;

/// One `[i, j, multiplicity]` entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionEntry(pub usize, pub usize, pub u32);

/// On-disk form of a [`CurveGraph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub components: Vec<Component>,
    #[serde(default)]
    pub intersections: Vec<IntersectionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PointRecord>>,
}

#[derive(Debug, Error)]
pub enum CurveFileError {
    #[error("line {line}, column {column}, at `{path}`: {message}")]
    Syntax {
        line: usize,
        column: usize,
        path: String,
        message: String,
    },
    #[error("`{field}`: {source}")]
    Invalid {
        field: String,
        #[source]
        source: Error,
    },
}

impl CurveFile {
    pub fn parse(text: &str) -> Result<Self, CurveFileError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|err| {
            let path = err.path().to_string();
            let inner = err.into_inner();
            CurveFileError::Syntax {
                line: inner.line(),
                column: inner.column(),
                path,
                message: inner.to_string(),
            }
        })
    }

    pub fn into_graph(self) -> Result<CurveGraph, CurveFileError> {
        let n = self.components.len();
        let invalid = |field: String, source: Error| CurveFileError::Invalid { field, source };
        if n > super::MAX_COMPONENTS {
            return Err(invalid("components".into(), Error::TooManyComponents(n)));
        }
        let mut matrix = vec![vec![0u32; n]; n];
        for (k, &IntersectionEntry(i, j, m)) in self.intersections.iter().enumerate() {
            let field = format!("intersections[{k}]");
            if i >= j || j >= n {
                return Err(invalid(
                    field,
                    Error::InvalidIntersection(format!(
                        "need 0 <= i < j < {n}, got [{i}, {j}, {m}]"
                    )),
                ));
            }
            if matrix[i][j] != 0 {
                return Err(invalid(
                    field,
                    Error::InvalidIntersection(format!("pair ({i},{j}) listed twice")),
                ));
            }
            matrix[i][j] = m;
            matrix[j][i] = m;
        }
        let field = match &self.points {
            Some(_) => "points",
            None => "intersections",
        };
        CurveGraph::new(self.components, matrix, self.points).map_err(|e| {
            let field = match e {
                Error::NoComponents | Error::TooManyComponents(_) => "components".to_string(),
                Error::InvalidPoint { index, .. } => format!("points[{index}]"),
                Error::Disconnected => "intersections".to_string(),
                _ => field.to_string(),
            };
            invalid(field, e)
        })
    }
}

impl CurveGraph {
    /// Parses the JSON curve format.
    pub fn from_json(text: &str) -> Result<Self, CurveFileError> {
        CurveFile::parse(text)?.into_graph()
    }

    pub fn to_file(&self) -> CurveFile {
        let n = self.num_components();
        let mut intersections = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let m = self.intersection(i, j);
                if m > 0 {
                    intersections.push(IntersectionEntry(i, j, m));
                }
            }
        }
        CurveFile {
            components: self.components().to_vec(),
            intersections,
            points: self.points().map(<[_]>::to_vec),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("curve files always serialize")
    }
}
