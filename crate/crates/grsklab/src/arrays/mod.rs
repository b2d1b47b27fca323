//! Positive arrays on staircase shapes and the local-move combinatorics
//! (geometric RSK and geometric PNG) acting on them.

mod json;
mod moves;
mod semifield;
mod shape;

pub use json::{ArrayJson, TriangularJson};
pub use moves::{
    energy, gpng, gpng_antidiagonal_products, gpng_matrix, gpng_triangular, grsk, local_move,
    rho, type_vectors, TypeVectors,
};
pub use semifield::{LogScale, MaxPlus, Semifield};
pub use shape::IndexSet;

use crate::error::{Error, Result};

/// Entries indexed by a staircase [`IndexSet`]; row `i` holds `w_{i,1..j*(i)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonalArray<T> {
    shape: IndexSet,
    rows: Vec<Vec<T>>,
}

impl<T: Semifield> PolygonalArray<T> {
    /// Checks that `rows` exactly covers `shape` and that every entry is admissible.
    pub fn new(shape: IndexSet, rows: Vec<Vec<T>>) -> Result<Self> {
        if rows.len() != shape.rows() {
            return Err(Error::Shape(format!(
                "expected {} rows, got {}",
                shape.rows(),
                rows.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            let want = shape.row_len(i + 1);
            if row.len() != want {
                return Err(Error::Shape(format!(
                    "row {} should have {} entries, got {}",
                    i + 1,
                    want,
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|x| !x.is_admissible()) {
                return Err(Error::NonPositive(i + 1, j + 1));
            }
        }
        Ok(PolygonalArray { shape, rows })
    }

    /// Fills the shape from `f(i, j)` (1-based).
    pub fn from_fn(shape: IndexSet, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let rows = (1..=shape.rows())
            .map(|i| (1..=shape.row_len(i)).map(|j| f(i, j)).collect())
            .collect();
        Self::new(shape, rows)
    }

    /// A rectangular array from row vectors.
    pub fn matrix(rows: Vec<Vec<T>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map(|r| r.len()).unwrap_or(0);
        Self::new(IndexSet::rectangle(m, n)?, rows)
    }

    /// Applies `f` to every entry, keeping the shape.
    pub fn map<U: Semifield>(&self, mut f: impl FnMut(&T) -> U) -> Result<PolygonalArray<U>> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(&mut f).collect())
            .collect();
        PolygonalArray::new(self.shape.clone(), rows)
    }
}

impl<T> PolygonalArray<T> {
    pub fn shape(&self) -> &IndexSet {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    /// Entry `(i, j)`, 1-based; `None` outside the shape.
    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        if self.shape.contains(i, j) {
            Some(&self.rows[i - 1][j - 1])
        } else {
            None
        }
    }

    /// Entry `(i, j)`; panics outside the shape.
    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.rows[i - 1][j - 1]
    }

    pub(crate) fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.rows[i - 1][j - 1]
    }

    /// Entries in row-major order.
    pub fn values(&self) -> impl Iterator<Item = &T> {
        self.rows.iter().flatten()
    }

    pub fn into_rows(self) -> Vec<Vec<T>> {
        self.rows
    }
}

/// An array on the triangle `{(i, j) : i + j - 1 <= n}`, the natural input of
/// geometric PNG at a single time.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularArray<T> {
    inner: PolygonalArray<T>,
}

impl<T: Semifield> TriangularArray<T> {
    /// Row `i` must have `n + 1 - i` entries.
    pub fn new(n: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        let inner = PolygonalArray::new(IndexSet::triangle(n)?, rows)?;
        Ok(TriangularArray { inner })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let inner = PolygonalArray::from_fn(IndexSet::triangle(n)?, f)?;
        Ok(TriangularArray { inner })
    }

    /// Reinterprets a polygonal array whose shape happens to be a triangle.
    pub fn from_polygonal(inner: PolygonalArray<T>) -> Result<Self> {
        let n = inner.shape().cols();
        if inner.shape() != &IndexSet::triangle(n)? {
            return Err(Error::Shape("shape is not a triangle".into()));
        }
        Ok(TriangularArray { inner })
    }
}

impl<T> TriangularArray<T> {
    pub fn order(&self) -> usize {
        self.inner.shape().cols()
    }

    pub fn as_polygonal(&self) -> &PolygonalArray<T> {
        &self.inner
    }

    pub fn into_polygonal(self) -> PolygonalArray<T> {
        self.inner
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        self.inner.get(i, j)
    }
}
