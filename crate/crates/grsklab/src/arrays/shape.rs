use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A Young-diagram-like index set, the union of the rectangles
/// `{(i, j) : m_{l-1} < i <= m_l, 1 <= j <= n_l}` given by staircase corners.
///
/// Indices are 1-based throughout, matching the usual matrix convention.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, usize)>", into = "Vec<(usize, usize)>")]
pub struct IndexSet {
    corners: Vec<(usize, usize)>,
}

impl IndexSet {
    /// Builds the index set from its corners `(m_1, n_1), ..., (m_k, n_k)`.
    ///
    /// Requires `0 < m_1 < ... < m_k` and `n_1 > ... > n_k > 0`.
    pub fn new(corners: Vec<(usize, usize)>) -> Result<Self> {
        if corners.is_empty() {
            return Err(Error::Shape("at least one corner is required".into()));
        }
        let (mut prev_m, mut prev_n) = (0usize, usize::MAX);
        for (l, &(m, n)) in corners.iter().enumerate() {
            if m <= prev_m {
                return Err(Error::Shape(format!(
                    "corner rows must strictly increase: corner {} has m = {m} after m = {prev_m}",
                    l + 1
                )));
            }
            if n >= prev_n || n == 0 {
                return Err(Error::Shape(format!(
                    "corner columns must strictly decrease and stay positive: corner {} has n = {n}",
                    l + 1
                )));
            }
            prev_m = m;
            prev_n = n;
        }
        Ok(IndexSet { corners })
    }

    pub fn rectangle(m: usize, n: usize) -> Result<Self> {
        Self::new(vec![(m, n)])
    }

    /// The staircase `{i + j - 1 <= n}`.
    pub fn triangle(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("triangle order must be positive".into()));
        }
        Self::new((1..=n).map(|i| (i, n + 1 - i)).collect())
    }

    pub fn corners(&self) -> &[(usize, usize)] {
        &self.corners
    }

    pub fn is_rectangular(&self) -> bool {
        self.corners.len() == 1
    }

    /// Number of rows, `m_k`.
    pub fn rows(&self) -> usize {
        self.corners.last().map(|c| c.0).unwrap_or(0)
    }

    /// Number of columns, `n_1`.
    pub fn cols(&self) -> usize {
        self.corners[0].1
    }

    /// Length `j*(i)` of row `i` (0 outside the shape).
    pub fn row_len(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.corners
            .iter()
            .find(|&&(m, _)| i <= m)
            .map(|&(_, n)| n)
            .unwrap_or(0)
    }

    /// Length `i*(j)` of column `j` (0 outside the shape).
    pub fn col_len(&self, j: usize) -> usize {
        if j == 0 {
            return 0;
        }
        self.corners
            .iter()
            .rev()
            .find(|&&(_, n)| j <= n)
            .map(|&(m, _)| m)
            .unwrap_or(0)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i >= 1 && j >= 1 && j <= self.row_len(i)
    }

    /// Total number of cells.
    pub fn len(&self) -> usize {
        (1..=self.rows()).map(|i| self.row_len(i)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.rows()).flat_map(move |i| (1..=self.row_len(i)).map(move |j| (i, j)))
    }

    /// True when the rectangle `[1, m] x [1, n]` lies inside the shape.
    pub fn contains_rectangle(&self, m: usize, n: usize) -> bool {
        m >= 1 && n >= 1 && self.row_len(m) >= n
    }
}

impl TryFrom<Vec<(usize, usize)>> for IndexSet {
    type Error = Error;
    fn try_from(corners: Vec<(usize, usize)>) -> Result<Self> {
        IndexSet::new(corners)
    }
}

impl From<IndexSet> for Vec<(usize, usize)> {
    fn from(s: IndexSet) -> Self {
        s.corners
    }
}
