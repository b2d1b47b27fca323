//! Random inputs shared by the integration suites.

#![allow(dead_code)]

use grsklab::arrays::{IndexSet, PolygonalArray, TriangularArray};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries drawn log-uniformly from `[1/4, 4]`.
pub fn entry(rng: &mut impl Rng) -> f64 {
    (rng.random_range(-1.0..1.0) * 4f64.ln()).exp()
}

pub fn random_array(shape: &IndexSet, rng: &mut impl Rng) -> PolygonalArray<f64> {
    PolygonalArray::from_fn(shape.clone(), |_, _| entry(rng)).unwrap()
}

pub fn random_matrix(m: usize, n: usize, rng: &mut impl Rng) -> PolygonalArray<f64> {
    random_array(&IndexSet::rectangle(m, n).unwrap(), rng)
}

pub fn random_triangle(n: usize, rng: &mut impl Rng) -> TriangularArray<f64> {
    TriangularArray::from_fn(n, |_, _| entry(rng)).unwrap()
}

/// A staircase shape with `2..=max_k` corners and at most `max_cells` cells.
pub fn random_polygon(max_k: usize, max_cells: usize, rng: &mut impl Rng) -> IndexSet {
    loop {
        let k = rng.random_range(2..=max_k);
        let mut rows: Vec<usize> = (1..=6).collect();
        let mut cols: Vec<usize> = (1..=6).collect();
        shuffle_take(&mut rows, k, rng);
        shuffle_take(&mut cols, k, rng);
        rows.sort_unstable();
        cols.sort_unstable_by(|a, b| b.cmp(a));
        let shape = IndexSet::new(rows.into_iter().zip(cols).collect()).unwrap();
        if shape.len() <= max_cells {
            return shape;
        }
    }
}

fn shuffle_take(v: &mut Vec<usize>, k: usize, rng: &mut impl Rng) {
    for i in 0..k {
        let j = rng.random_range(i..v.len());
        v.swap(i, j);
    }
    v.truncate(k);
}

pub fn relerr(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Largest entrywise relative difference of two arrays on the same shape.
pub fn max_relerr(a: &PolygonalArray<f64>, b: &PolygonalArray<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.values().zip(b.values()).map(|(x, y)| relerr(*x, *y)).fold(0.0, f64::max)
}
