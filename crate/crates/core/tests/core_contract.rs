mod common;

use common::*;
use ftvn::campaign::sample_rng;
use ftvn::instances::InstanceSpec;
use ftvn::system::{
    check_axioms, commute, lambda, orbit_support, sublinearity_gap, witness_a3, CriterionStatus,
};
use ftvn::Error;
use proptest::prelude::*;

#[test]
fn lambda_examples() {
    let rn = sys(InstanceSpec::RnDown { dim: 3 });
    assert_eq!(lambda(&rn, &el(&[1.0, 3.0, 2.0])).unwrap().0, vec![3.0, 2.0, 1.0]);

    let s2 = sys(InstanceSpec::Sym { dim: 2 });
    let got = lambda(&s2, &el(&[2.0, 1.0, 1.0, 2.0])).unwrap().0;
    let want = charpoly_eig2(2.0, 1.0, 2.0);
    assert!(dist(&got, &want) < 1e-12, "{got:?} vs {want:?}");

    let tw = sys(InstanceSpec::Twisted { inner: Box::new(InstanceSpec::RnDown { dim: 2 }) });
    assert_eq!(lambda(&tw, &el(&[3.0, 1.0])).unwrap().0, vec![1.0, 3.0]);
}

#[test]
fn lambda_rejects_malformed_elements() {
    let s2 = sys(InstanceSpec::Sym { dim: 2 });
    assert!(matches!(lambda(&s2, &el(&[1.0, 2.0, 0.0, 1.0])), Err(Error::Validation(_))));
    assert!(matches!(lambda(&s2, &el(&[1.0, 2.0])), Err(Error::Validation(_))));
    assert!(lambda(&s2, &el(&[f64::NAN, 0.0, 0.0, 1.0])).is_err());
}

#[test]
fn sym_lambda_matches_characteristic_polynomial_3x3() {
    let s3 = sys(InstanceSpec::Sym { dim: 3 });
    let mut r = rng(11);
    for _ in 0..200 {
        let x = rand_sym(&mut r, 3);
        let got = lambda(&s3, &el(&x)).unwrap().0;
        let want = charpoly_eig3(&x);
        assert!(dist(&got, &want) < 1e-9 * (1.0 + dist(&x, &[0.0; 9])), "{got:?} {want:?}");
    }
}

#[test]
fn witness_examples() {
    let rn = sys(InstanceSpec::RnDown { dim: 2 });
    let x = witness_a3(&rn, &el(&[1.0, 2.0]), &sp(&[5.0, 3.0])).unwrap();
    assert_eq!(x.0, vec![3.0, 5.0]);
    assert_eq!(dot(&[1.0, 2.0], &x.0), 13.0);
    assert!(matches!(
        witness_a3(&rn, &el(&[1.0, 2.0]), &sp(&[3.0, 5.0])),
        Err(Error::Range(_))
    ));

    let s2 = sys(InstanceSpec::Sym { dim: 2 });
    let x = witness_a3(&s2, &el(&[3.0, 0.0, 0.0, 1.0]), &sp(&[0.0, -1.0])).unwrap();
    assert!(dist(&x.0, &[0.0, 0.0, 0.0, -1.0]) < 1e-12);
    assert!((dot(&x.0, &[3.0, 0.0, 0.0, 1.0]) + 1.0).abs() < 1e-12);
}

#[test]
fn orbit_support_examples() {
    let rn = sys(InstanceSpec::RnDown { dim: 2 });
    let (v, m) = orbit_support(&rn, &el(&[1.0, 2.0]), &el(&[5.0, 3.0])).unwrap();
    // oracle: maximize over both permutations of u
    let brute = [dot(&[1.0, 2.0], &[5.0, 3.0]), dot(&[1.0, 2.0], &[3.0, 5.0])]
        .into_iter()
        .fold(f64::MIN, f64::max);
    assert_eq!(v, brute);
    assert_eq!(m.0, vec![3.0, 5.0]);

    let s3 = sys(InstanceSpec::Sym { dim: 3 });
    let mut r = rng(5);
    let q = rand_orthogonal(&mut r, 3);
    let u = conjugate(&q, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0], 3);
    let c = [5.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, -1.0];
    let (v, m) = orbit_support(&s3, &el(&c), &el(&u)).unwrap();
    assert!((v - 7.0).abs() < 1e-9);
    assert!((dot(&c, &m.0) - 7.0).abs() < 1e-9);

    let (v, _) = orbit_support(&s3, &el(&[0.0; 9]), &el(&u)).unwrap();
    assert_eq!(v, 0.0);
}

#[test]
fn commute_examples() {
    let rn = sys(InstanceSpec::RnDown { dim: 2 });
    let r = commute(&rn, &el(&[2.0, 1.0]), &el(&[5.0, 3.0]), 1e-8).unwrap();
    assert!(r.verdict && r.agreement() == Some(true));
    let r = commute(&rn, &el(&[1.0, 2.0]), &el(&[5.0, 3.0]), 1e-8).unwrap();
    assert!(!r.verdict);
    assert_eq!(r.inner_product.status, CriterionStatus::Fails);
    assert_eq!(r.additivity.status, CriterionStatus::Fails);
    assert_eq!(r.distance.status, CriterionStatus::Fails);
    for spec in catalog() {
        let s = sys(spec);
        let x = s.sample_element(&mut sample_rng(3, 0));
        assert!(commute(&s, &x, &x, 1e-8).unwrap().verdict, "{}", s.name());
    }
}

#[test]
fn check_axioms_examples() {
    let s4 = sys(InstanceSpec::Sym { dim: 4 });
    let r = check_axioms(&s4, 1000, 0, 1e-8).unwrap();
    assert!(r.passed, "{r:?}");
    assert_eq!(r.samples, 1000);

    let sub = sys(InstanceSpec::SubspaceCounterexample);
    let r = check_axioms(&sub, 10, 0, 1e-8).unwrap();
    assert!(!r.passed);
    let ce = r.counterexample.unwrap();
    assert_eq!(ce["inner_product"].as_f64().unwrap(), -10.0);
    assert_eq!(ce["spectral_inner_product"].as_f64().unwrap(), -1.0);
    assert_eq!(ce["gap"].as_f64().unwrap(), 9.0);

    assert!(matches!(check_axioms(&s4, 0, 0, 1e-8), Err(Error::Validation(_))));
}

#[test]
fn check_axioms_is_seed_deterministic() {
    let s = sys(InstanceSpec::SingVal { dim: 3 });
    let a = check_axioms(&s, 50, 9, 1e-8).unwrap();
    let b = check_axioms(&s, 50, 9, 1e-8).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sublinearity_examples() {
    let s3 = sys(InstanceSpec::Sym { dim: 3 });
    let id = el(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
    assert!(sublinearity_gap(&s3, &id, &[id.clone(), id.clone()]).unwrap().abs() < 1e-12);
    let rn = sys(InstanceSpec::RnDown { dim: 2 });
    let g = sublinearity_gap(&rn, &el(&[1.0, 0.0]), &[el(&[1.0, 0.0]), el(&[0.0, 1.0])]).unwrap();
    assert_eq!(g, 1.0);
    assert!(sublinearity_gap(&rn, &el(&[1.0, 0.0]), &[]).is_err());
}

fn pick(i: usize) -> ftvn::System {
    let cat = catalog();
    sys(cat[i % cat.len()].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn positive_homogeneity(i in 0usize..10, seed in any::<u64>(), t in 0.0f64..5.0) {
        let s = pick(i);
        let x = s.sample_element(&mut sample_rng(seed, 0));
        let lx = lambda(&s, &x).unwrap();
        let ltx = lambda(&s, &x.scale(t)).unwrap();
        prop_assert!(ltx.sub(&lx.scale(t)).norm() <= 1e-9 * (1.0 + t * x.norm()));
    }

    #[test]
    fn nonexpansive(i in 0usize..10, seed in any::<u64>()) {
        let s = pick(i);
        let mut r = sample_rng(seed, 0);
        let (x, y) = (s.sample_element(&mut r), s.sample_element(&mut r));
        let d = lambda(&s, &x).unwrap().sub(&lambda(&s, &y).unwrap()).norm();
        prop_assert!(d <= x.sub(&y).norm() + 1e-9);
    }

    #[test]
    fn norm_preservation(i in 0usize..10, seed in any::<u64>()) {
        let s = pick(i);
        let x = s.sample_element(&mut sample_rng(seed, 0));
        let lx = lambda(&s, &x).unwrap();
        prop_assert!((lx.norm() - x.norm()).abs() <= 1e-9 * (1.0 + x.norm()));
    }

    #[test]
    fn witness_pairs_commute_under_all_criteria(i in 0usize..10, seed in any::<u64>()) {
        let s = pick(i);
        let mut r = sample_rng(seed, 0);
        let (c, u) = (s.sample_element(&mut r), s.sample_element(&mut r));
        let x = witness_a3(&s, &c, &lambda(&s, &u).unwrap()).unwrap();
        let rep = commute(&s, &c, &x, 1e-8).unwrap();
        for crit in rep.criteria() {
            prop_assert_eq!(crit.status, CriterionStatus::Holds, "{}: {:?}", s.name(), rep);
        }
    }

    #[test]
    fn random_pairs_criteria_agree_when_decisive(i in 0usize..10, seed in any::<u64>()) {
        let s = pick(i);
        let mut r = sample_rng(seed, 0);
        let (x, y) = (s.sample_element(&mut r), s.sample_element(&mut r));
        let rep = commute(&s, &x, &y, 1e-8).unwrap();
        if let Some(agree) = rep.agreement() {
            prop_assert!(agree, "{}: {:?}", s.name(), rep);
        }
    }

    #[test]
    fn support_function_reformulation(i in 0usize..10, seed in any::<u64>()) {
        // sampled orbit points of z never beat ⟨λ(d),λ(z)⟩; the witness attains it
        let s = pick(i);
        let mut r = sample_rng(seed, 0);
        let (d, z) = (s.sample_element(&mut r), s.sample_element(&mut r));
        let (ld, lz) = (lambda(&s, &d).unwrap(), lambda(&s, &z).unwrap());
        let bound = ld.dot(&lz);
        let scale = 1.0 + d.norm() * z.norm();
        for _ in 0..8 {
            let c = s.sample_element(&mut r);
            let mate = witness_a3(&s, &c, &lz).unwrap();
            prop_assert!(d.dot(&mate) <= bound + 1e-8 * scale);
        }
        let best = witness_a3(&s, &d, &lz).unwrap();
        prop_assert!((d.dot(&best) - bound).abs() <= 1e-8 * scale);
    }

    #[test]
    fn orbit_sum_support_bound(i in 0usize..10, seed in any::<u64>()) {
        let s = pick(i);
        let mut r = sample_rng(seed, 0);
        let (c, a, b) = (s.sample_element(&mut r), s.sample_element(&mut r), s.sample_element(&mut r));
        let lc = lambda(&s, &c).unwrap();
        let lhs = lc.dot(&lambda(&s, &a.add(&b)).unwrap());
        let rhs = lc.dot(&lambda(&s, &a).unwrap()) + lc.dot(&lambda(&s, &b).unwrap());
        prop_assert!(lhs <= rhs + 1e-9 * (1.0 + c.norm() * (a.norm() + b.norm())));
        let gap = sublinearity_gap(&s, &c, &[a, b]).unwrap();
        prop_assert!(gap >= -1e-9 * (1.0 + c.norm()));
    }
}
