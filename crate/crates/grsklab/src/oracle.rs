//! Brute-force references: path sums, non-intersecting path tuples,
//! last-passage times and finite-difference Jacobians.
//!
//! Nothing here uses the local moves, so these functions can serve as ground
//! truth for every combinatorial identity of the `arrays` module.

use crate::arrays::{PolygonalArray, Semifield};
use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Hard cap on backtracking states visited by [`nonintersecting_sum`].
pub const ENUMERATION_CAP: u64 = 10_000_000;

fn check_rectangle<T>(w: &PolygonalArray<T>, m: usize, n: usize) -> Result<()> {
    if w.shape().contains_rectangle(m, n) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange(m, n))
    }
}

/// Point-to-point partition function `Z_{m,n}`: the sum over down-right
/// paths from `(1,1)` to `(m,n)` of the product of visited weights, via
/// `Z_ij = w_ij (Z_{i-1,j} + Z_{i,j-1})`.
pub fn partition_function<T: Semifield>(w: &PolygonalArray<T>, m: usize, n: usize) -> Result<T> {
    check_rectangle(w, m, n)?;
    Ok(path_dp(w, m, n, |a, b| a.plus(b), |a, b| a.times(b)))
}

/// Last-passage time `max_path sum w_ij`.
pub fn last_passage(w: &PolygonalArray<f64>, m: usize, n: usize) -> Result<f64> {
    check_rectangle(w, m, n)?;
    Ok(path_dp(w, m, n, |a, b| a.max(*b), |a, b| a + b))
}

fn path_dp<T: Clone>(
    w: &PolygonalArray<T>,
    m: usize,
    n: usize,
    add: impl Fn(&T, &T) -> T,
    mul: impl Fn(&T, &T) -> T,
) -> T {
    let mut row: Vec<Option<T>> = vec![None; n];
    for i in 1..=m {
        let mut left: Option<T> = None;
        for j in 1..=n {
            let acc = match (&row[j - 1], &left) {
                (Some(up), Some(l)) => Some(add(up, l)),
                (Some(v), None) | (None, Some(v)) => Some(v.clone()),
                (None, None) => None,
            };
            let x = w.at(i, j);
            let z = match acc {
                Some(a) => mul(x, &a),
                None => x.clone(),
            };
            row[j - 1] = Some(z.clone());
            left = Some(z);
        }
    }
    row[n - 1].clone().expect("rectangle is non-empty")
}

/// Sum over `r`-tuples of vertex-disjoint down-right paths, path `k` running
/// from `(1, k)` to `(m, n - r + k)`, of the product of all visited weights.
///
/// Exhaustive backtracking with an occupancy grid; fails with
/// [`Error::Capacity`] after [`ENUMERATION_CAP`] states.
pub fn nonintersecting_sum<T: Semifield>(
    w: &PolygonalArray<T>,
    m: usize,
    n: usize,
    r: usize,
) -> Result<T> {
    check_rectangle(w, m, n)?;
    if r == 0 || r > m.min(n) {
        return Err(Error::Precondition(format!(
            "r = {r} must lie in 1..={}",
            m.min(n)
        )));
    }
    let mut search = TupleSearch {
        w,
        m,
        n,
        r,
        occupied: vec![vec![false; n + 1]; m + 1],
        visited: 0,
        total: None,
    };
    let start = (1, 1);
    search.occupied[1][1] = true;
    search.walk(0, start, T::one().times(w.at(1, 1)))?;
    search
        .total
        .ok_or_else(|| Error::Precondition("no non-intersecting tuple exists".into()))
}

struct TupleSearch<'a, T> {
    w: &'a PolygonalArray<T>,
    m: usize,
    n: usize,
    r: usize,
    occupied: Vec<Vec<bool>>,
    visited: u64,
    total: Option<T>,
}

impl<T: Semifield> TupleSearch<'_, T> {
    /// Extends path `k` (0-based) from `pos`, carrying the running product.
    fn walk(&mut self, k: usize, pos: (usize, usize), prod: T) -> Result<()> {
        self.visited += 1;
        if self.visited > ENUMERATION_CAP {
            return Err(Error::Capacity(ENUMERATION_CAP));
        }
        let sink = (self.m, self.n - self.r + k + 1);
        if pos == sink {
            if k + 1 == self.r {
                self.total = Some(match self.total.take() {
                    Some(t) => t.plus(&prod),
                    None => prod,
                });
                return Ok(());
            }
            let src = (1, k + 2);
            if self.occupied[src.0][src.1] {
                return Ok(());
            }
            self.occupied[src.0][src.1] = true;
            let p = prod.times(self.w.at(src.0, src.1));
            let res = self.walk(k + 1, src, p);
            self.occupied[src.0][src.1] = false;
            return res;
        }
        let (i, j) = pos;
        for next in [(i + 1, j), (i, j + 1)] {
            if next.0 > sink.0 || next.1 > sink.1 || self.occupied[next.0][next.1] {
                continue;
            }
            self.occupied[next.0][next.1] = true;
            let p = prod.times(self.w.at(next.0, next.1));
            let res = self.walk(k, next, p);
            self.occupied[next.0][next.1] = false;
            res?;
        }
        Ok(())
    }
}

/// Every down-right path from `(1,1)` to `(m,n)`, as cell lists.
pub fn enumerate_paths(m: usize, n: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(pos: (usize, usize), m: usize, n: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        cur.push(pos);
        if pos == (m, n) {
            out.push(cur.clone());
        } else {
            if pos.0 < m {
                go((pos.0 + 1, pos.1), m, n, cur, out);
            }
            if pos.1 < n {
                go((pos.0, pos.1 + 1), m, n, cur, out);
            }
        }
        cur.pop();
    }
    let mut out = Vec::new();
    if m >= 1 && n >= 1 {
        go((1, 1), m, n, &mut Vec::new(), &mut out);
    }
    out
}

/// `|det|` of the central-difference Jacobian of `log w -> log map(w)`.
///
/// Coordinates are the cells of `w` in row-major order; `map` must preserve
/// the shape. `h` is the step in log space and must lie in `[1e-7, 1e-4]`.
pub fn numeric_jacobian_logdet<F>(map: F, w: &PolygonalArray<f64>, h: f64) -> Result<f64>
where
    F: Fn(&PolygonalArray<f64>) -> Result<PolygonalArray<f64>>,
{
    if !(1e-7..=1e-4).contains(&h) {
        return Err(Error::Precondition(format!("step h = {h} outside [1e-7, 1e-4]")));
    }
    let logs: Vec<f64> = w.values().map(|x| x.ln()).collect();
    let dim = logs.len();
    let eval = |y: &[f64]| -> Result<Vec<f64>> {
        let mut it = y.iter();
        let arg = PolygonalArray::from_fn(w.shape().clone(), |_, _| it.next().unwrap().exp())?;
        let out = map(&arg)?;
        if out.shape() != w.shape() {
            return Err(Error::Shape("map changed the array shape".into()));
        }
        Ok(out.values().map(|x| x.ln()).collect())
    };
    let mut jac = DMatrix::<f64>::zeros(dim, dim);
    let mut y = logs.clone();
    for c in 0..dim {
        y[c] = logs[c] + h;
        let plus = eval(&y)?;
        y[c] = logs[c] - h;
        let minus = eval(&y)?;
        y[c] = logs[c];
        for rr in 0..dim {
            jac[(rr, c)] = (plus[rr] - minus[rr]) / (2.0 * h);
        }
    }
    let det = jac.determinant().abs();
    if !det.is_finite() || det < 1e-8 {
        return Err(Error::SingularJacobian(det));
    }
    Ok(det)
}
