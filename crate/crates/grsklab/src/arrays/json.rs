//! Wire formats shared with the command line:
//! `{"corners": [[m1, n1], ...], "rows": [[...], ...]}` and
//! `{"triangular": n, "rows": [[...], ...]}`.

use super::{IndexSet, PolygonalArray, TriangularArray};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayJson {
    pub corners: Vec<[usize; 2]>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangularJson {
    pub triangular: usize,
    pub rows: Vec<Vec<f64>>,
}

impl TryFrom<ArrayJson> for PolygonalArray<f64> {
    type Error = Error;
    fn try_from(a: ArrayJson) -> Result<Self> {
        let shape = IndexSet::new(a.corners.iter().map(|c| (c[0], c[1])).collect())?;
        PolygonalArray::new(shape, a.rows)
    }
}

impl From<&PolygonalArray<f64>> for ArrayJson {
    fn from(a: &PolygonalArray<f64>) -> Self {
        ArrayJson {
            corners: a.shape().corners().iter().map(|&(m, n)| [m, n]).collect(),
            rows: a.rows().to_vec(),
        }
    }
}

impl TryFrom<TriangularJson> for TriangularArray<f64> {
    type Error = Error;
    fn try_from(a: TriangularJson) -> Result<Self> {
        TriangularArray::new(a.triangular, a.rows)
    }
}

impl From<&TriangularArray<f64>> for TriangularJson {
    fn from(a: &TriangularArray<f64>) -> Self {
        TriangularJson {
            triangular: a.order(),
            rows: a.as_polygonal().rows().to_vec(),
        }
    }
}
