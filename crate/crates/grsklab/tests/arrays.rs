mod common;

use common::{max_relerr, random_array, random_matrix, random_polygon, random_triangle, relerr, rng};
use grsklab::arrays::{
    energy, gpng, gpng_antidiagonal_products, gpng_matrix, gpng_triangular, grsk, local_move, rho,
    type_vectors, ArrayJson, IndexSet, LogScale, MaxPlus, PolygonalArray, TriangularArray,
    TriangularJson,
};
use grsklab::oracle::{last_passage, partition_function};
use grsklab::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn ones(m: usize, n: usize) -> PolygonalArray<f64> {
    PolygonalArray::matrix(vec![vec![1.0; n]; m]).unwrap()
}

fn rows_of(a: &PolygonalArray<f64>) -> Vec<Vec<f64>> {
    a.rows().to_vec()
}

#[test]
fn unit_square_grsk_output() {
    let t = grsk(&ones(2, 2));
    assert_eq!(rows_of(&t), vec![vec![0.5, 1.0], vec![1.0, 2.0]]);
}

#[test]
fn unit_square_by_explicit_local_moves() {
    let w = ones(2, 2);
    let step = local_move(&local_move(&local_move(&w, 1, 2).unwrap(), 2, 1).unwrap(), 2, 2).unwrap();
    assert_eq!(rows_of(&step), vec![vec![0.5, 1.0], vec![1.0, 2.0]]);
    // The same output assembled from rho chains: rho^1_2, rho^2_1, then rho^2_2.
    let chained = rho(&rho(&rho(&w, 1, 2).unwrap(), 2, 1).unwrap(), 2, 2).unwrap();
    assert_eq!(chained, step);
}

#[test]
fn border_moves_multiply_by_the_neighbour() {
    let w = PolygonalArray::matrix(vec![vec![2.0, 3.0], vec![5.0, 7.0]]).unwrap();
    assert_eq!(rows_of(&local_move(&w, 1, 2).unwrap()), vec![vec![2.0, 6.0], vec![5.0, 7.0]]);
    assert_eq!(rows_of(&local_move(&w, 2, 1).unwrap()), vec![vec![2.0, 3.0], vec![10.0, 7.0]]);
    assert_eq!(local_move(&w, 1, 1).unwrap(), w);
    assert_eq!(rho(&w, 1, 1).unwrap(), w);
}

#[test]
fn local_moves_reject_cells_outside_the_shape() {
    let w = ones(2, 3);
    assert_eq!(local_move(&w, 3, 1), Err(Error::IndexOutOfRange(3, 1)));
    assert_eq!(rho(&w, 1, 4), Err(Error::IndexOutOfRange(1, 4)));
}

#[test]
fn distant_rho_chains_commute() {
    let w = random_matrix(4, 4, &mut rng(11));
    let (a, b) = ((1, 4), (4, 1));
    let ab = rho(&rho(&w, a.0, a.1).unwrap(), b.0, b.1).unwrap();
    let ba = rho(&rho(&w, b.0, b.1).unwrap(), a.0, a.1).unwrap();
    assert!(max_relerr(&ab, &ba) < 1e-15);
}

#[test]
fn single_cell_is_fixed() {
    let w = PolygonalArray::matrix(vec![vec![3.5]]).unwrap();
    assert_eq!(grsk(&w), w);
    assert_eq!(gpng_matrix(&w).unwrap(), w);
    let tri = TriangularArray::new(1, vec![vec![3.5]]).unwrap();
    assert_eq!(gpng_triangular(&tri), tri);
    assert_eq!(energy(&w), 1.0 / 3.5);
    let tv = type_vectors(&w);
    assert_eq!((tv.row_type, tv.col_type), (vec![3.5], vec![3.5]));
}

#[test]
fn unit_square_energy_and_types() {
    let t = grsk(&ones(2, 2));
    assert_eq!(energy(&t), 4.0);
    let tv = type_vectors(&t);
    assert_eq!(tv.row_type, vec![1.0, 1.0]);
    assert_eq!(tv.col_type, vec![1.0, 1.0]);
}

#[test]
fn unit_triangle_of_order_two() {
    let h = gpng_triangular(&TriangularArray::new(2, vec![vec![1.0, 1.0], vec![1.0]]).unwrap());
    assert_eq!(h.get(1, 2), Some(&1.0));
    assert_eq!(h.get(2, 1), Some(&1.0));
    assert_eq!(gpng_antidiagonal_products(&h, 1, 1).unwrap(), 1.0);
}

#[test]
fn gpng_rejects_non_square_matrices_and_bad_antidiagonals() {
    assert!(matches!(gpng_matrix(&ones(2, 3)), Err(Error::Shape(_))));
    let h = gpng_triangular(&random_triangle(4, &mut rng(3)));
    assert!(matches!(gpng_antidiagonal_products(&h, 1, 1), Err(Error::Precondition(_))));
    assert!(gpng_antidiagonal_products(&h, 2, 2).is_ok());
    assert!(gpng_antidiagonal_products(&h, 3, 2).is_ok());
}

#[test]
fn polygonal_corners_are_partition_functions() {
    let shape = IndexSet::new(vec![(2, 3), (3, 1)]).unwrap();
    let w = random_array(&shape, &mut rng(5));
    let t = grsk(&w);
    for &(m, n) in shape.corners() {
        let z = partition_function(&w, m, n).unwrap();
        assert!(relerr(*t.at(m, n), z) < 1e-12);
    }
}

#[test]
fn polygonal_energy_is_conserved() {
    let shape = IndexSet::new(vec![(2, 4), (4, 1)]).unwrap();
    let w = random_array(&shape, &mut rng(6));
    let sum: f64 = w.values().map(|x| 1.0 / x).sum();
    assert!(relerr(energy(&grsk(&w)), sum) < 1e-12);
}

#[test]
fn triangle_antidiagonal_products_cover_rectangles() {
    let w = random_triangle(3, &mut rng(8));
    let h = gpng_triangular(&w);
    let rect: f64 = [(1, 1), (1, 2), (2, 1), (2, 2)].iter().map(|&(i, j)| w.get(i, j).unwrap()).product();
    assert!(relerr(gpng_antidiagonal_products(&h, 2, 2).unwrap(), rect) < 1e-12);
    let w5 = random_triangle(5, &mut rng(9));
    let h5 = gpng_triangular(&w5);
    let rect5: f64 = (1..=3).flat_map(|i| (1..=2).map(move |j| (i, j))).map(|(i, j)| w5.get(i, j).unwrap()).product();
    assert!(relerr(gpng_antidiagonal_products(&h5, 3, 2).unwrap(), rect5) < 1e-12);
}

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact identities in rational arithmetic on a 3x3 matrix and a polygon.
#[test]
fn exact_rational_identities() {
    let mut r = rng(21);
    use rand::Rng;
    for shape in [IndexSet::rectangle(3, 3).unwrap(), IndexSet::new(vec![(1, 4), (3, 2)]).unwrap()] {
        let w = PolygonalArray::from_fn(shape.clone(), |_, _| rational(r.random_range(1..9), r.random_range(1..9)))
            .unwrap();
        let t = grsk(&w);
        for &(m, n) in shape.corners() {
            assert_eq!(t.at(m, n), &partition_function(&w, m, n).unwrap());
        }
        let inverse_sum = w.values().fold(rational(0, 1), |acc, x| acc + rational(1, 1) / x.clone());
        assert_eq!(energy(&t), inverse_sum);
        let tv = type_vectors(&t);
        for i in 1..=shape.rows() {
            let p = (1..=shape.row_len(i)).fold(rational(1, 1), |acc, j| acc * w.at(i, j).clone());
            assert_eq!(tv.row_type[i - 1], p);
        }
        for j in 1..=shape.cols() {
            let p = (1..=shape.col_len(j)).fold(rational(1, 1), |acc, i| acc * w.at(i, j).clone());
            assert_eq!(tv.col_type[j - 1], p);
        }
    }
    let tri = TriangularArray::from_fn(4, |i, j| rational((i + 2 * j) as i64, 3)).unwrap();
    let h = gpng_triangular(&tri);
    for p in 1..=4 {
        let q = 5 - p;
        let z = partition_function(tri.as_polygonal(), p, q).unwrap();
        assert_eq!(h.get(p, q).unwrap(), &z);
    }
    let sq = PolygonalArray::matrix(vec![vec![rational(1, 2), rational(3, 1)], vec![rational(5, 7), rational(2, 3)]])
        .unwrap();
    assert_eq!(gpng_matrix(&sq).unwrap(), grsk(&sq));
}

/// The same moves over (max, +) compute classical RSK, whose corner is the
/// last-passage time; the (+, x) moves approach it as `eps log` of scaled
/// inputs, entry by entry.
#[test]
fn tropical_limit_of_grsk() {
    use rand::Rng;
    let mut r = rng(31);
    let m = 4;
    let raw: Vec<Vec<f64>> = (0..m).map(|_| (0..m).map(|_| r.random_range(0.1..2.0)).collect()).collect();
    let w = PolygonalArray::matrix(raw.clone()).unwrap();
    let trop = grsk(&PolygonalArray::matrix(raw.iter().map(|r| r.iter().map(|&x| MaxPlus(x)).collect()).collect()).unwrap());
    assert!((trop.at(m, m).0 - last_passage(&w, m, m).unwrap()).abs() < 1e-12);
    let mut errs = Vec::new();
    for eps in [1e-2, 1e-4] {
        let scaled = PolygonalArray::matrix(raw.iter().map(|r| r.iter().map(|&x| LogScale(x / eps)).collect()).collect())
            .unwrap();
        let t = grsk(&scaled);
        let err = t.values().zip(trop.values()).map(|(a, b)| (eps * a.0 - b.0).abs()).fold(0.0, f64::max);
        // The log-sum-exp gap of n terms is at most eps ln n; entries combine a few such gaps.
        assert!(err < 20.0 * eps, "eps = {eps}: max deviation {err}");
        errs.push(err);
    }
    assert!(errs[1] < errs[0]);
}

#[test]
fn json_round_trip() {
    let w = PolygonalArray::new(IndexSet::new(vec![(1, 3), (2, 1)]).unwrap(), vec![vec![1.0, 2.0, 3.0], vec![4.0]]).unwrap();
    let text = serde_json::to_string(&ArrayJson::from(&w)).unwrap();
    assert_eq!(text, r#"{"corners":[[1,3],[2,1]],"rows":[[1.0,2.0,3.0],[4.0]]}"#);
    let back: ArrayJson = serde_json::from_str(&text).unwrap();
    assert_eq!(PolygonalArray::try_from(back).unwrap(), w);
    let tri = random_triangle(3, &mut rng(1));
    let tj = TriangularJson::from(&tri);
    assert_eq!(TriangularArray::try_from(tj).unwrap(), tri);
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(matches!(IndexSet::new(vec![(2, 3), (2, 1)]), Err(Error::Shape(_))));
    assert!(matches!(IndexSet::new(vec![(1, 3), (2, 3)]), Err(Error::Shape(_))));
    assert!(matches!(IndexSet::new(vec![]), Err(Error::Shape(_))));
    assert!(matches!(PolygonalArray::matrix(vec![vec![1.0, -1.0]]), Err(Error::NonPositive(1, 2))));
    assert!(matches!(PolygonalArray::matrix(vec![vec![1.0, 2.0], vec![3.0]]), Err(Error::Shape(_))));
    let bad: Result<ArrayJson, _> = serde_json::from_str(r#"{"corners":[[1,1]],"rows":[[1.0]],"extra":1}"#);
    assert!(bad.is_err());
}

fn matrix_strategy(max: usize) -> impl Strategy<Value = PolygonalArray<f64>> {
    (1..=max, 1..=max).prop_flat_map(|(m, n)| {
        proptest::collection::vec(proptest::collection::vec(0.25f64..4.0, n), m)
            .prop_map(|rows| PolygonalArray::matrix(rows).unwrap())
    })
}

fn polygon_strategy() -> impl Strategy<Value = PolygonalArray<f64>> {
    any::<u64>().prop_map(|seed| {
        let mut r = rng(seed);
        let shape = random_polygon(3, 16, &mut r);
        random_array(&shape, &mut r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn membership_matches_union_of_rectangles(seed in any::<u64>()) {
        let shape = random_polygon(3, 30, &mut rng(seed));
        let mut prev = 0;
        for &(m, n) in shape.corners() {
            for i in prev + 1..=m {
                for j in 1..=8 {
                    prop_assert_eq!(shape.contains(i, j), j <= n);
                }
            }
            prev = m;
        }
        prop_assert!(!shape.contains(prev + 1, 1));
        prop_assert_eq!(shape.cells().count(), shape.len());
    }

    #[test]
    fn matrix_corner_energy_and_types(w in matrix_strategy(5)) {
        let (m, n) = (w.shape().rows(), w.shape().cols());
        let t = grsk(&w);
        prop_assert!(relerr(*t.at(m, n), partition_function(&w, m, n).unwrap()) < 1e-12);
        let inv: f64 = w.values().map(|x| 1.0 / x).sum();
        prop_assert!(relerr(energy(&t), inv) < 1e-12);
        let tv = type_vectors(&t);
        for i in 1..=m {
            prop_assert!(relerr(tv.row_type[i - 1], (1..=n).map(|j| w.at(i, j)).product()) < 1e-12);
        }
        for j in 1..=n {
            prop_assert!(relerr(tv.col_type[j - 1], (1..=m).map(|i| w.at(i, j)).product()) < 1e-12);
        }
    }

    #[test]
    fn polygonal_corners_energy_and_types(w in polygon_strategy()) {
        let s = w.shape().clone();
        let t = grsk(&w);
        for &(m, n) in s.corners() {
            prop_assert!(relerr(*t.at(m, n), partition_function(&w, m, n).unwrap()) < 1e-12);
        }
        let inv: f64 = w.values().map(|x| 1.0 / x).sum();
        prop_assert!(relerr(energy(&t), inv) < 1e-12);
        let tv = type_vectors(&t);
        prop_assert_eq!(tv.row_type.len(), s.rows());
        prop_assert_eq!(tv.col_type.len(), s.cols());
        for i in 1..=s.rows() {
            prop_assert!(relerr(tv.row_type[i - 1], (1..=s.row_len(i)).map(|j| w.at(i, j)).product()) < 1e-12);
        }
        for j in 1..=s.cols() {
            prop_assert!(relerr(tv.col_type[j - 1], (1..=s.col_len(j)).map(|i| w.at(i, j)).product()) < 1e-12);
        }
        // gPNG on the same polygon conserves the energy as well.
        prop_assert!(relerr(energy(&gpng(&w)), inv) < 1e-12);
    }

    #[test]
    fn gpng_equals_grsk_on_squares(n in 1usize..=5, seed in any::<u64>()) {
        let w = random_matrix(n, n, &mut rng(seed));
        prop_assert!(max_relerr(&gpng_matrix(&w).unwrap(), &grsk(&w)) < 1e-12);
    }

    #[test]
    fn triangle_antidiagonal_and_energy(n in 1usize..=6, seed in any::<u64>()) {
        let w = random_triangle(n, &mut rng(seed));
        let h = gpng_triangular(&w);
        for p in 1..=n {
            let q = n + 1 - p;
            let z = partition_function(w.as_polygonal(), p, q).unwrap();
            prop_assert!(relerr(*h.get(p, q).unwrap(), z) < 1e-12);
        }
        for p in 1..=n {
            for q in [n.saturating_sub(p), n + 1 - p] {
                if q == 0 { continue; }
                let rect: f64 = (1..=p).flat_map(|i| (1..=q).map(move |j| (i, j))).map(|(i, j)| *w.get(i, j).unwrap()).product();
                prop_assert!(relerr(gpng_antidiagonal_products(&h, p, q).unwrap(), rect) < 1e-12);
            }
        }
        let inv: f64 = w.as_polygonal().values().map(|x| 1.0 / x).sum();
        prop_assert!(relerr(energy(h.as_polygonal()), inv) < 1e-12);
    }

    #[test]
    fn moves_leave_their_input_untouched(w in matrix_strategy(4)) {
        let before = w.clone();
        let _ = grsk(&w);
        let (m, n) = (w.shape().rows(), w.shape().cols());
        let _ = local_move(&w, m, n).unwrap();
        prop_assert_eq!(w, before);
    }
}
