use lapspec_core::explorer::formats::{parse_digraph_tsv, parse_matrix_csv, write_digraph_tsv, write_matrix_csv};
use lapspec_core::explorer::{sample_integer_digraph, sample_standardized, trial_rng};
use lapspec_core::graph::{complement, in_forest_dimension};
use lapspec_core::laplacian::{
    complementary_laplacian, convex_combination, j_bar, laplacian_of, standardize, standardize_exact,
};
use lapspec_core::linalg::{
    char_poly_exact, det_exact, eigvals, index_of, rank, ExactMatrix, Rational, DEFAULT_BIT_BUDGET,
};
use lapspec_core::region::{polygon_s, prop1_region_contains, region_r, witness_matrix, z_bounds, WITNESS_RESIDUAL};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn laplacian_case() -> impl Strategy<Value = (usize, u64, f64)> {
    (2usize..9, any::<u64>(), 0.0f64..=1.0)
}

fn digraph_case() -> impl Strategy<Value = (usize, u64, f64, u32)> {
    (2usize..8, any::<u64>(), 0.0f64..=1.0, 1u32..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn complement_is_an_involution((n, seed, p, b) in digraph_case()) {
        let g = sample_integer_digraph(n, &mut trial_rng(seed, 0), p, b);
        prop_assert_eq!(complement(&complement(&g)), g);
    }

    #[test]
    fn in_forest_dimension_is_corank((n, seed, p, b) in digraph_case()) {
        let g = sample_integer_digraph(n, &mut trial_rng(seed, 0), p, b);
        let d = in_forest_dimension(&g);
        let l = standardize_exact(&g).unwrap();
        prop_assert_eq!(d, n - l.exact().unwrap().rank());
        prop_assert!((1..=n).contains(&d));
    }

    #[test]
    fn standardization_ignores_common_scaling((n, seed, p, _b) in digraph_case(), k in -4i32..5) {
        let g = lapspec_core::explorer::sample_digraph(n, &mut trial_rng(seed, 0), p, 1.0);
        let c = 2f64.powi(k);
        let a = standardize(&g).unwrap();
        let b = standardize(&g.scaled(c).unwrap()).unwrap();
        prop_assert!(a.matrix().max_abs_diff(b.matrix()) <= 1e-15);
        let raw = laplacian_of(&g);
        prop_assert!(raw.scale(1.0 / n as f64).max_abs_diff(a.matrix()) <= 1e-15);
    }

    #[test]
    fn annihilates_averaging((n, seed, p) in laplacian_case()) {
        let l = sample_standardized(n, &mut trial_rng(seed, 0), p);
        let prod = l.matrix().matmul(&j_bar(n));
        prop_assert!(prod.as_slice().iter().all(|x| x.abs() <= 1e-15));
    }

    #[test]
    fn convex_combinations_stay_standardized((n, seed, p) in laplacian_case(), t in 0.0f64..=1.0) {
        let a = sample_standardized(n, &mut trial_rng(seed, 0), p);
        let b = sample_standardized(n, &mut trial_rng(seed, 1), 1.0);
        prop_assert!(convex_combination(&[t, 1.0 - t], &[&a, &b]).is_ok());
    }

    #[test]
    fn complementary_map_is_an_involution((n, seed, p) in laplacian_case()) {
        let l = sample_standardized(n, &mut trial_rng(seed, 0), p);
        let back = complementary_laplacian(&complementary_laplacian(&l).unwrap()).unwrap();
        prop_assert!(back.matrix().max_abs_diff(l.matrix()) <= 1e-15);
    }

    #[test]
    fn eigenvalues_match_trace_and_determinant((n, seed, p) in laplacian_case()) {
        let l = sample_standardized(n, &mut trial_rng(seed, 0), p);
        let eigs = eigvals(l.matrix()).unwrap();
        let sum: Complex64 = eigs.iter().sum();
        let prod: Complex64 = eigs.iter().product();
        prop_assert!((sum.re - l.matrix().trace()).abs() <= 1e-12 && sum.im.abs() <= 1e-12);
        let det = det_exact(&ExactMatrix::from_dense(l.matrix()).unwrap());
        let det = num_traits::ToPrimitive::to_f64(&det).unwrap();
        prop_assert!((prod.re - det).abs() <= 1e-12 && prod.im.abs() <= 1e-12);
    }

    #[test]
    fn char_poly_constant_term((n, seed, p, b) in digraph_case()) {
        let g = sample_integer_digraph(n, &mut trial_rng(seed, 0), p, b);
        let m = standardize_exact(&g).unwrap().exact().unwrap().clone();
        let f = char_poly_exact(&m, DEFAULT_BIT_BUDGET).unwrap();
        let sign = if n % 2 == 0 { One::one() } else { -Rational::one() };
        prop_assert_eq!(f.coeff(0), sign * det_exact(&m));
        // A Laplacian is singular.
        prop_assert!(f.coeff(0).is_zero());
        prop_assert!(f.coeff(n).is_one() && !f.coeff(n).is_negative());
    }

    #[test]
    fn rank_ignores_row_order((n, seed, p, b) in digraph_case(), shift in 0usize..8) {
        let g = sample_integer_digraph(n, &mut trial_rng(seed, 0), p, b);
        let m = standardize(&g).unwrap().matrix().clone();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        prop_assert_eq!(rank(&m.permute_rows(&perm), 1e-9), rank(&m, 1e-9));
    }

    #[test]
    fn laplacian_has_index_one((n, seed, p, b) in digraph_case()) {
        let g = sample_integer_digraph(n, &mut trial_rng(seed, 0), p, b);
        let m = standardize(&g).unwrap().matrix().clone();
        prop_assert_eq!(index_of(&m, 1e-9), 1);
    }

    #[test]
    fn sampled_spectra_lie_in_region((n, seed, p) in laplacian_case()) {
        let l = sample_standardized(n, &mut trial_rng(seed, 0), p);
        let r = region_r(n).unwrap();
        for z in eigvals(l.matrix()).unwrap() {
            prop_assert!(r.contains(z, 1e-9), "{z} outside R for n={n}");
            prop_assert!(prop1_region_contains(n, z, 1e-9));
        }
    }

    #[test]
    fn region_sits_inside_the_coarse_region(n in 2usize..40, x in -0.2f64..1.2, y in -0.5f64..0.5) {
        let z = Complex64::new(x, y);
        if region_r(n).unwrap().contains(z, 0.0) {
            prop_assert!(prop1_region_contains(n, z, 1e-12));
        }
    }

    #[test]
    fn polygon_is_convex_and_inside_region(n in 2usize..60) {
        let s = polygon_s(n).unwrap();
        let r = region_r(n).unwrap();
        prop_assert!(s.is_convex());
        for &v in &s.vertices {
            prop_assert!(r.contains(v, 1e-12), "vertex {v} of S({n}) outside R");
        }
    }

    #[test]
    fn points_of_polygon_are_realized(n in 3usize..12, w in prop::collection::vec(0.0f64..1.0, 24)) {
        let s = polygon_s(n).unwrap();
        let k = s.vertices.len();
        let total: f64 = w[..k].iter().sum::<f64>() + 1e-12;
        let z: Complex64 = s.vertices.iter().zip(&w[..k]).map(|(v, &c)| v * (c / total)).sum();
        let wm = witness_matrix(n, z).unwrap();
        prop_assert!(wm.residual <= WITNESS_RESIDUAL);
        let near = eigvals(wm.matrix.matrix()).unwrap().iter().map(|e| (e - z).norm()).fold(f64::INFINITY, f64::min);
        prop_assert!(near <= 1e-7, "closest eigenvalue at distance {near}");
    }

    #[test]
    fn matrix_csv_round_trip((n, seed, p) in laplacian_case()) {
        let l = sample_standardized(n, &mut trial_rng(seed, 0), p);
        prop_assert_eq!(&parse_matrix_csv(&write_matrix_csv(l.matrix())).unwrap(), l.matrix());
    }

    #[test]
    fn digraph_tsv_round_trip((n, seed, p, _b) in digraph_case()) {
        let g = lapspec_core::explorer::sample_digraph(n, &mut trial_rng(seed, 0), p, 0.75);
        prop_assert_eq!(parse_digraph_tsv(&write_digraph_tsv(&g)).unwrap(), g);
    }
}

#[test]
fn odd_supremum_increases_towards_limit() {
    let mut prev = 0.0;
    for n in (3..=201).step_by(2) {
        let z = z_bounds(n).unwrap().z_exact.unwrap();
        assert!(z > prev && z < 1.0 / std::f64::consts::PI, "n={n}");
        prev = z;
    }
}
