//! Property tests over randomly generated instances.

use std::sync::Arc;

use proptest::prelude::*;
use vbgpd::groupoid::validate_groupoid;
use vbgpd::harness::gen::{random_family, random_gauge, random_ruth, random_scramble, random_vb, trial_rng, Bounds};
use vbgpd::harness::instance::{Instance, InstanceFile};
use vbgpd::harness::oracle::{morphism_is_valid, ruth_is_valid, table_cancels};
use vbgpd::linalg::{qr, Matrix, Rational};
use vbgpd::ruth::{compose_morphisms, validate_morphism, validate_ruth, RuthMorphism};
use vbgpd::semidirect::{psi_inverse, psi_morphism};
use vbgpd::vb::{validate_vb, validate_vb_map};
use vbgpd::wrep::{ruth_from_wrep, ruth_from_wrep_witness, validate_equivariant, validate_wrep, wrep_from_ruth};

fn rational() -> impl Strategy<Value = Rational> {
    prop_oneof![
        (-50i64..50, 1i64..20).prop_map(|(n, d)| qr(n, d)),
        (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| qr(n, d)),
    ]
}

fn matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (0..=max, 0..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-3i64..=3, r * c)
            .prop_map(move |v| Matrix::from_vec(r, c, v.into_iter().map(Rational::from_int).collect()))
    })
}

proptest! {
    #[test]
    fn rationals_form_a_field(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
    }

    #[test]
    fn rationals_survive_text(a in rational()) {
        prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn kernel_basis_spans_the_kernel(m in matrix(4)) {
        let k = m.kernel_basis();
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.rank(), k.cols());
        prop_assert_eq!(k.cols() + m.rank(), m.cols());
    }

    #[test]
    fn solve_finds_exact_preimages(m in matrix(4), seed in any::<u64>()) {
        let x: Vec<Rational> = (0..m.cols()).map(|i| Rational::from_int(((seed >> (i * 4)) & 7) as i64 - 3)).collect();
        let b = m.apply(&x);
        let y = m.solve(&b).unwrap().expect("b lies in the image");
        prop_assert_eq!(m.apply(&y), b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_groupoids_cancel(seed in any::<u64>()) {
        let fam = random_family(&mut trial_rng(seed, 0), Bounds::default());
        prop_assert!(validate_groupoid(&fam.groupoid).passed());
        prop_assert!(table_cancels(&fam.groupoid));
    }

    #[test]
    fn validator_and_operator_agree_on_representations(seed in any::<u64>()) {
        let r = random_ruth(&mut trial_rng(seed, 0), Bounds::default());
        prop_assert!(validate_ruth(&r).passed());
        prop_assert!(ruth_is_valid(&r));
    }

    #[test]
    fn gauge_morphisms_compose_and_invert(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let r = random_ruth(&mut rng, Bounds::default());
        let m1 = random_gauge(&mut rng, &r);
        let m2 = random_gauge(&mut rng, &m1.source);
        let m = compose_morphisms(&m1, &m2).unwrap();
        prop_assert!(validate_morphism(&m).passed());
        prop_assert!(morphism_is_valid(&m));
        let id = compose_morphisms(&m1.inverse().unwrap(), &m1).unwrap();
        prop_assert_eq!(id, RuthMorphism::identity(m1.source.clone()));
    }

    #[test]
    fn psi_is_faithful_and_full_on_gauges(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let r = random_ruth(&mut rng, Bounds::default());
        let m = random_gauge(&mut rng, &r);
        let f = psi_morphism(&m).unwrap();
        prop_assert!(validate_vb_map(&f).passed());
        prop_assert_eq!(psi_inverse(m.source.clone(), r, &f).unwrap(), m);
    }

    #[test]
    fn weak_representations_round_trip(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let r = random_ruth(&mut rng, Bounds::default());
        let w = Arc::new(wrep_from_ruth(&r).unwrap());
        prop_assert!(validate_wrep(&w).passed());
        prop_assert_eq!(&ruth_from_wrep(&w).unwrap(), &*r);
        let (w2, t) = random_scramble(&mut rng, &w).unwrap();
        prop_assert!(validate_equivariant(&t).passed());
        let (r2, e) = ruth_from_wrep_witness(&w2).unwrap();
        prop_assert!(validate_ruth(&r2).passed());
        prop_assert!(validate_equivariant(&e).passed());
        prop_assert!(e.is_isomorphism());
    }

    #[test]
    fn instance_files_round_trip(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let r = random_ruth(&mut rng, Bounds::default());
        let (v, _) = random_vb(&mut rng, &r).unwrap();
        for i in [Instance::Ruth(r), Instance::Vb(v)] {
            let text = i.to_file(Default::default()).to_json();
            let back = Instance::from_file(&InstanceFile::parse(&text).unwrap()).unwrap();
            prop_assert_eq!(back.to_file(Default::default()).to_json(), text);
            prop_assert_eq!(back, i);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn scrambled_products_are_vb_groupoids(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let r = random_ruth(&mut rng, Bounds::default());
        let (v, iso) = random_vb(&mut rng, &r).unwrap();
        prop_assert!(validate_vb(&v).passed());
        prop_assert!(validate_vb_map(&iso).passed());
        prop_assert!(iso.is_isomorphism());
    }
}
