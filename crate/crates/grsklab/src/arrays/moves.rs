use super::{PolygonalArray, Semifield, TriangularArray};
use crate::error::{Error, Result};
use serde::Serialize;

/// In-place local move `l_ij`.
///
/// Interior cells update the 2x2 block `(a b; c d)` ending at `(i, j)` to
/// `(bc/(ab + ac), b; c, d(b + c))`. On the first column and first row the
/// move multiplies by the neighbour above / to the left; `l_11` is the identity.
pub(crate) fn apply_local_move<T: Semifield>(x: &mut PolygonalArray<T>, i: usize, j: usize) {
    match (i, j) {
        (1, 1) => {}
        (_, 1) => {
            let up = x.at(i - 1, 1).clone();
            let v = x.at(i, 1).times(&up);
            *x.at_mut(i, 1) = v;
        }
        (1, _) => {
            let left = x.at(1, j - 1).clone();
            let v = x.at(1, j).times(&left);
            *x.at_mut(1, j) = v;
        }
        _ => {
            let a = x.at(i - 1, j - 1);
            let b = x.at(i - 1, j);
            let c = x.at(i, j - 1);
            let b_plus_c = b.plus(c);
            let new_a = b.times(c).over(&a.times(&b_plus_c));
            let new_d = x.at(i, j).times(&b_plus_c);
            *x.at_mut(i - 1, j - 1) = new_a;
            *x.at_mut(i, j) = new_d;
        }
    }
}

fn check_index<T>(x: &PolygonalArray<T>, i: usize, j: usize) -> Result<()> {
    if x.shape().contains(i, j) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange(i, j))
    }
}

/// The local move `l_ij` (pure: returns a new array).
pub fn local_move<T: Semifield>(x: &PolygonalArray<T>, i: usize, j: usize) -> Result<PolygonalArray<T>> {
    check_index(x, i, j)?;
    let mut y = x.clone();
    apply_local_move(&mut y, i, j);
    Ok(y)
}

pub(crate) fn apply_rho<T: Semifield>(x: &mut PolygonalArray<T>, i: usize, j: usize) {
    for r in 0..i.min(j) {
        apply_local_move(x, i - r, j - r);
    }
}

/// `rho^i_j`: the diagonal chain `l_{ij}`, then `l_{i-1,j-1}`, ... up to the
/// first row or column.
pub fn rho<T: Semifield>(x: &PolygonalArray<T>, i: usize, j: usize) -> Result<PolygonalArray<T>> {
    check_index(x, i, j)?;
    let mut y = x.clone();
    apply_rho(&mut y, i, j);
    Ok(y)
}

/// Geometric RSK on a matrix or polygonal array.
///
/// Rows are inserted top to bottom. Inserting row `a` (length `m = j*(a)`)
/// runs, for `r = 0, 1, ...`, the row chain `l_{a-r,1}, ..., l_{a-r,m-r}`;
/// each chain stops one cell shorter than the previous one, so only entries
/// on or below the relevant diagonal are touched.
pub fn grsk<T: Semifield>(w: &PolygonalArray<T>) -> PolygonalArray<T> {
    let mut t = w.clone();
    let shape = w.shape().clone();
    for a in 1..=shape.rows() {
        let m = shape.row_len(a);
        for r in 0..a.min(m) {
            for j in 1..=m - r {
                apply_local_move(&mut t, a - r, j);
            }
        }
    }
    t
}

/// Geometric PNG on any staircase shape: the chains `rho^i_j` applied one
/// anti-diagonal `i + j = 2, 3, ...` at a time. Chains within one
/// anti-diagonal touch disjoint cells, so their order does not matter.
pub fn gpng<T: Semifield>(w: &PolygonalArray<T>) -> PolygonalArray<T> {
    let mut h = w.clone();
    let shape = w.shape().clone();
    let max_t = shape
        .corners()
        .iter()
        .map(|&(m, n)| m + n)
        .max()
        .unwrap_or(0);
    for t in 2..=max_t {
        for i in 1..t {
            let j = t - i;
            if shape.contains(i, j) {
                apply_rho(&mut h, i, j);
            }
        }
    }
    h
}

/// Geometric PNG on a square matrix.
pub fn gpng_matrix<T: Semifield>(w: &PolygonalArray<T>) -> Result<PolygonalArray<T>> {
    let s = w.shape();
    if !s.is_rectangular() || s.rows() != s.cols() {
        return Err(Error::Shape(format!(
            "gPNG on matrices needs a square array, got corners {:?}",
            s.corners()
        )));
    }
    Ok(gpng(w))
}

/// Geometric PNG on a triangle; its anti-diagonal outputs are the
/// point-to-point partition functions `Z_{i,n+1-i}`.
pub fn gpng_triangular<T: Semifield>(w: &TriangularArray<T>) -> TriangularArray<T> {
    TriangularArray {
        inner: gpng(w.as_polygonal()),
    }
}

/// `E(X) = 1/x_11 + sum_{(i,j) != (1,1)} (x_{i-1,j} + x_{i,j-1}) / x_ij`,
/// with neighbours outside the shape counted as zero.
pub fn energy<T: Semifield>(x: &PolygonalArray<T>) -> T {
    let mut e = T::one().over(x.at(1, 1));
    for (i, j) in x.shape().cells().skip(1) {
        let num = match (x.get(i - 1, j), x.get(i, j.wrapping_sub(1))) {
            (Some(up), Some(left)) => up.plus(left),
            (Some(v), None) | (None, Some(v)) => v.clone(),
            (None, None) => unreachable!("every cell but (1,1) has a neighbour above or left"),
        };
        e = e.plus(&num.over(x.at(i, j)));
    }
    e
}

/// Row and column types of a gRSK output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypeVectors<T> {
    /// `tau_{i, j*(i)}` for each row `i`.
    pub row_type: Vec<T>,
    /// `tau_{i*(j), j}` for each column `j`.
    pub col_type: Vec<T>,
}

fn diagonal_product<T: Semifield>(x: &PolygonalArray<T>, i: usize, j: usize) -> T {
    let mut p = T::one();
    for r in 0..i.min(j) {
        p = p.times(x.at(i - r, j - r));
    }
    p
}

/// Ratios of consecutive diagonal products along the boundary of the shape.
///
/// For `T = grsk(W)`, `col_type[j-1]` equals the product of the column-`j`
/// entries of `W` and `row_type[i-1]` the product of the row-`i` entries.
pub fn type_vectors<T: Semifield>(x: &PolygonalArray<T>) -> TypeVectors<T> {
    let s = x.shape();
    let col_type = (1..=s.cols())
        .map(|j| {
            let i = s.col_len(j);
            diagonal_product(x, i, j).over(&diagonal_product(x, i, j - 1))
        })
        .collect();
    let row_type = (1..=s.rows())
        .map(|i| {
            let j = s.row_len(i);
            diagonal_product(x, i, j).over(&diagonal_product(x, i - 1, j))
        })
        .collect();
    TypeVectors { row_type, col_type }
}

/// `prod_{r < min(p, q)} h_{p-r, q-r}` for a cell on one of the last two
/// anti-diagonals (`p + q` equal to `n` or `n + 1`).
pub fn gpng_antidiagonal_products<T: Semifield>(h: &TriangularArray<T>, p: usize, q: usize) -> Result<T> {
    let n = h.order();
    if p == 0 || q == 0 || !(p + q == n || p + q == n + 1) {
        return Err(Error::Precondition(format!(
            "(p, q) = ({p}, {q}) must satisfy p + q = {n} or {}",
            n + 1
        )));
    }
    Ok(diagonal_product(h.as_polygonal(), p, q))
}
