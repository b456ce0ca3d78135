mod common;

use common::*;
use ftvn::automorphisms::{automorphism_sampler, is_automorphism, LinearMap};
use ftvn::campaign::sample_rng;
use ftvn::doubly_stochastic::{
    birkhoff_decompose, construct_ds_witness, ds_fixed_points, ds_from_automorphisms,
    eja_ds_criteria, extract_transition_matrix, is_ds_matrix, is_ds_transform,
};
use ftvn::instances::InstanceSpec;
use ftvn::numerics::Matrix;
use ftvn::system::lambda;
use ftvn::{Error, System};
use proptest::prelude::*;
use rand::Rng;

fn sym2_swap() -> LinearMap {
    // X ↦ PXPᵀ with P the 2×2 swap, on row-major coordinates
    let mut m = Matrix::zeros(4, 4);
    for (dst, src) in [(0, 3), (1, 2), (2, 1), (3, 0)] {
        m[(dst, src)] = 1.0;
    }
    LinearMap::from_matrix(m)
}

fn half_swap(s: &System) -> LinearMap {
    ds_from_automorphisms(s, &[0.5, 0.5], &[LinearMap::identity(4), sym2_swap()]).unwrap()
}

fn trace_shift(n: usize) -> LinearMap {
    // X ↦ X + tr(X)·I/n
    let mut m = Matrix::identity(n * n);
    for a in 0..n {
        for b in 0..n {
            m[(a * n + a, b * n + b)] += 1.0 / n as f64;
        }
    }
    LinearMap::from_matrix(m)
}

#[test]
fn is_ds_transform_examples() {
    let s2 = sys(InstanceSpec::Sym { dim: 2 });
    assert!(is_ds_transform(&s2, &half_swap(&s2), 200, 0, 1e-9).unwrap().passed);
    let twice = LinearMap::from_matrix(Matrix::identity(4).scale(2.0));
    assert!(!is_ds_transform(&s2, &twice, 200, 0, 1e-9).unwrap().passed);
    assert!(is_ds_transform(&s2, &LinearMap::identity(4), 50, 0, 1e-9).unwrap().passed);
    let ns = sys(InstanceSpec::NormSystem { dim: 2 });
    assert!(matches!(
        is_ds_transform(&ns, &LinearMap::identity(2), 5, 0, 1e-9),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn eja_criteria_examples() {
    let s3 = sys(InstanceSpec::Sym { dim: 3 });
    let maps: Vec<_> = (0..3).map(|k| automorphism_sampler(&s3, k)).collect();
    let d = ds_from_automorphisms(&s3, &[0.2, 0.3, 0.5], &maps).unwrap();
    assert!(eja_ds_criteria(&s3, &d, 300, 0, 1e-9).unwrap().passed);
    assert!(!eja_ds_criteria(&s3, &trace_shift(3), 50, 0, 1e-9).unwrap().passed);
    assert!(eja_ds_criteria(&s3, &LinearMap::identity(9), 50, 0, 1e-9).unwrap().passed);
    let rn = sys(InstanceSpec::RnDown { dim: 3 });
    let p = ds_from_automorphisms(&rn, &[0.5, 0.5], &[automorphism_sampler(&rn, 1), automorphism_sampler(&rn, 2)]).unwrap();
    assert!(eja_ds_criteria(&rn, &p, 100, 0, 1e-9).unwrap().passed);
    let sv = sys(InstanceSpec::SingVal { dim: 2 });
    assert!(matches!(
        eja_ds_criteria(&sv, &LinearMap::identity(4), 5, 0, 1e-9),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn scaling_fails_both_criteria() {
    let s2 = sys(InstanceSpec::Sym { dim: 2 });
    let twice = LinearMap::from_matrix(Matrix::identity(4).scale(2.0));
    assert!(!eja_ds_criteria(&s2, &twice, 50, 0, 1e-9).unwrap().passed);
    assert!(!is_ds_transform(&s2, &twice, 50, 0, 1e-9).unwrap().passed);
}

#[test]
fn transition_matrix_examples() {
    let s2 = sys(InstanceSpec::Sym { dim: 2 });
    let t = extract_transition_matrix(&s2, &half_swap(&s2), &el(&[3.0, 0.0, 0.0, 1.0])).unwrap();
    assert!(t.degenerate_frame);
    assert!(t.matrix.matrix.as_slice().iter().all(|v| (v - 0.5).abs() < 1e-12));

    let s3 = sys(InstanceSpec::Sym { dim: 3 });
    let a = automorphism_sampler(&s3, 7);
    let x = s3.sample_element(&mut sample_rng(7, 1));
    let t = extract_transition_matrix(&s3, &a, &x).unwrap();
    let m = &t.matrix.matrix;
    for v in m.as_slice() {
        assert!(v.abs() < 1e-9 || (v - 1.0).abs() < 1e-9, "{m:?}");
    }
    assert!(is_ds_matrix(m, 1e-9));

    let t = extract_transition_matrix(&s3, &LinearMap::identity(9), &x).unwrap();
    assert!(t.matrix.matrix.sub(&Matrix::identity(3)).frobenius_norm() < 1e-9);

    let rn = sys(InstanceSpec::RnDown { dim: 3 });
    assert!(extract_transition_matrix(&rn, &LinearMap::identity(3), &el(&[1.0, 2.0, 3.0])).is_err());
}

#[test]
fn ds_from_automorphisms_examples() {
    let rn = sys(InstanceSpec::RnDown { dim: 3 });
    let id = ds_from_automorphisms(&rn, &[1.0], &[LinearMap::identity(3)]).unwrap();
    assert_eq!(id.matrix, Matrix::identity(3));
    let p1 = automorphism_sampler(&rn, 4);
    let p2 = automorphism_sampler(&rn, 5);
    let d = ds_from_automorphisms(&rn, &[0.5, 0.5], &[p1.clone(), p2.clone()]).unwrap();
    assert!(is_ds_matrix(&d.matrix, 1e-12));
    assert!(ds_from_automorphisms(&rn, &[0.7, 0.7], &[p1.clone(), p2.clone()]).is_err());
    assert!(ds_from_automorphisms(&rn, &[1.5, -0.5], &[p1.clone(), p2]).is_err());
    assert!(ds_from_automorphisms(&rn, &[1.0], &[]).is_err());

    let s3 = sys(InstanceSpec::Sym { dim: 3 });
    let maps: Vec<_> = (10..13).map(|k| automorphism_sampler(&s3, k)).collect();
    let d = ds_from_automorphisms(&s3, &[1.0 / 3.0; 3], &maps).unwrap();
    assert!(is_ds_transform(&s3, &d, 200, 0, 1e-9).unwrap().passed);
}

#[test]
fn fixed_point_examples() {
    let s3 = sys(InstanceSpec::Sym { dim: 3 });
    let maps: Vec<_> = (0..2).map(|k| automorphism_sampler(&s3, k)).collect();
    let d = ds_from_automorphisms(&s3, &[0.4, 0.6], &maps).unwrap();
    assert!(ds_fixed_points(&s3, &d, 1e-10).unwrap().passed);
    let rn = sys(InstanceSpec::RnDown { dim: 3 });
    let m = Matrix::from_rows(&[vec![0.5, 0.25, 0.25], vec![0.25, 0.5, 0.25], vec![0.25, 0.25, 0.5]]).unwrap();
    assert!(ds_fixed_points(&rn, &LinearMap::from_matrix(m), 1e-12).unwrap().passed);
    let sv = sys(InstanceSpec::SingVal { dim: 2 });
    let r = ds_fixed_points(&sv, &LinearMap::identity(4), 1e-12).unwrap();
    assert!(r.passed && r.samples == 0);
    assert!(!ds_fixed_points(&s3, &trace_shift(3), 1e-9).unwrap().passed);
}

#[test]
fn automorphism_iff_map_and_inverse_are_ds() {
    for spec in [InstanceSpec::RnDown { dim: 3 }, InstanceSpec::Sym { dim: 3 }, InstanceSpec::RnAbs { dim: 3 }] {
        let s = sys(spec);
        for seed in 0..4 {
            let a = automorphism_sampler(&s, seed);
            assert!(is_ds_transform(&s, &a, 50, seed, 1e-9).unwrap().passed);
            assert!(is_ds_transform(&s, &a.transpose(), 50, seed, 1e-9).unwrap().passed);
        }
    }
    // DS but not an automorphism: its inverse is not DS
    let r2 = sys(InstanceSpec::RnDown { dim: 2 });
    let d = LinearMap::from_matrix(Matrix::from_rows(&[vec![0.75, 0.25], vec![0.25, 0.75]]).unwrap());
    let inv = LinearMap::from_matrix(Matrix::from_rows(&[vec![1.5, -0.5], vec![-0.5, 1.5]]).unwrap());
    assert!(is_ds_transform(&r2, &d, 50, 0, 1e-9).unwrap().passed);
    assert!(!is_ds_transform(&r2, &inv, 50, 0, 1e-9).unwrap().passed);
    assert!(!is_automorphism(&r2, &d, 50, 0, 1e-9).unwrap().passed);
    // a shear is neither
    let shear = LinearMap::from_matrix(Matrix::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap());
    assert!(!is_ds_transform(&r2, &shear, 50, 0, 1e-9).unwrap().passed);
    assert!(!is_automorphism(&r2, &shear, 50, 0, 1e-9).unwrap().passed);
}

fn row_col_sums_ok(m: &Matrix, tol: f64) -> bool {
    is_ds_matrix(m, tol) && m.as_slice().iter().all(|&v| v >= -1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn witness_round_trip(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let y = gauss(&mut r, n);
        let k = r.gen_range(1..=n);
        let x = matvec(&random_ds(&mut r, n, k), &y);
        let m = construct_ds_witness(&x, &y, 1e-9).unwrap().matrix;
        prop_assert!(dist(&m.matvec(&y), &x) <= 1e-9);
        prop_assert!(row_col_sums_ok(&m, 1e-12));
    }

    #[test]
    fn birkhoff_round_trip(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let k = r.gen_range(1..=n);
        let m = Matrix::from_row_major(n, n, random_ds(&mut r, n, k)).unwrap();
        let d = birkhoff_decompose(&m, 1e-12).unwrap();
        prop_assert!(d.terms.len() <= (n - 1) * (n - 1) + 1);
        prop_assert!(d.reconstruct(n).sub(&m).frobenius_norm() <= 1e-9);
        let total: f64 = d.terms.iter().map(|t| t.weight).sum();
        prop_assert!((total - 1.0).abs() <= 1e-10);
        prop_assert!(d.terms.iter().all(|t| t.weight > 0.0));
    }

    #[test]
    fn birkhoff_dense_matrices_need_caratheodory(seed in any::<u64>(), n in 2usize..=6) {
        // averages of many permutations have full support
        let mut r = rng(seed);
        let m = Matrix::from_row_major(n, n, random_ds(&mut r, n, 3 * n * n)).unwrap();
        let d = birkhoff_decompose(&m, 1e-12).unwrap();
        prop_assert!(d.terms.len() <= (n - 1) * (n - 1) + 1);
        prop_assert!(d.reconstruct(n).sub(&m).frobenius_norm() <= 1e-9);
    }

    #[test]
    fn transition_matrices(seed in any::<u64>(), n in 2usize..=5) {
        let s = sys(InstanceSpec::Sym { dim: n });
        let maps: Vec<_> = (0..3).map(|k| automorphism_sampler(&s, seed.wrapping_add(k))).collect();
        let mut r = rng(seed);
        let mut w: Vec<f64> = (0..3).map(|_| r.gen_range(0.1..1.0)).collect();
        let t: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= t);
        let d = ds_from_automorphisms(&s, &w, &maps).unwrap();
        let x = s.sample_element(&mut sample_rng(seed, 99));
        let tm = extract_transition_matrix(&s, &d, &x).unwrap();
        prop_assert!(is_ds_matrix(&tm.matrix.matrix, 1e-9));
        let lx = lambda(&s, &x).unwrap();
        let ldx = lambda(&s, &d.apply_element(&x)).unwrap();
        prop_assert!(dist(&tm.matrix.matrix.matvec(&lx.0), &ldx.0) <= 1e-8);
        prop_assert!(ds_fixed_points(&s, &d, 1e-10).unwrap().passed);
    }
}
