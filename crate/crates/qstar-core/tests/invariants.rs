use proptest::prelude::*;
use qstar_core::cross::{hilbert_norm, injective_norm, projective_norm, TensorElement};
use qstar_core::linalg::{c64, CMat, CVec};
use qstar_core::represent::{check_representable, gns, semisimple_check, FunctionalModel, SemisimpleVerdict, SEMISIMPLE_TOL};
use qstar_core::tensor::{build_tensor_pair, validate_tensor_pair};
use qstar_core::tensor_reps::{intertwiner_probe, tensor_functional};
use qstar_core::{CrossNorm, NormSpec, QuasiPair, StarAlgebraModel};

fn cmat(n: usize, m: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * m)
        .prop_map(move |v| CMat::from_iterator(n, m, v.into_iter().map(|(a, b)| c64(a, b))))
}

fn sized_cmat() -> impl Strategy<Value = CMat> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(n, m)| cmat(n, m))
}

fn positive_weights(n: usize) -> impl Strategy<Value = CVec> {
    prop::collection::vec(0.1f64..2.0, n).prop_map(|v| CVec::from_iterator(v.len(), v.into_iter().map(|x| c64(x, 0.0))))
}

fn pointwise(n: usize) -> QuasiPair {
    QuasiPair::new(StarAlgebraModel::pointwise(n), NormSpec::l2(n), format!("pw{n}")).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn hilbert_norm_sits_between_injective_and_projective(m in sized_cmat()) {
        let (n, k) = m.shape();
        let z = TensorElement::new(m, NormSpec::l2(n), NormSpec::l2(k)).unwrap();
        let lam = injective_norm(&z).unwrap();
        let gam = projective_norm(&z).unwrap();
        let h = hilbert_norm(&z).unwrap();
        prop_assert!(lam.lower <= h + 1e-12);
        prop_assert!(h <= gam.upper + 1e-12);
    }

    #[test]
    fn positive_product_functionals_have_product_gns(w1 in positive_weights(2), w2 in positive_weights(3)) {
        let tp = build_tensor_pair(&pointwise(2), &pointwise(3), CrossNorm::Hilbert).unwrap();
        let (f1, f2) = (FunctionalModel::new(w1, "w1"), FunctionalModel::new(w2, "w2"));
        let omega = tensor_functional(&f1, &f2);
        prop_assert!(check_representable(&tp.combined.algebra, &omega, 1e-9).unwrap().representable);
        let g = gns(&tp.combined.algebra, &omega, 1e-9).unwrap();
        prop_assert!(g.passed());
        let probe = intertwiner_probe(&tp, &f1, &f2, 1e-9).unwrap();
        prop_assert_eq!(probe.tensor_gns_dim, 6);
        prop_assert!(probe.equivalent);
    }

    #[test]
    fn tensoring_with_pointwise_keeps_semisimplicity(k in 1usize..=3, seed in 0u64..1000) {
        for base in [StarAlgebraModel::cyclic_group(3), StarAlgebraModel::matrix_units(2), StarAlgebraModel::dual_numbers()] {
            let n = base.dim();
            let p = QuasiPair::new(base, NormSpec::l2(n), "base").unwrap();
            let alone = semisimple_check(&p, SEMISIMPLE_TOL, seed).unwrap().verdict;
            let tp = build_tensor_pair(&p, &pointwise(k), CrossNorm::Hilbert).unwrap();
            let joint = semisimple_check(&tp.combined, SEMISIMPLE_TOL, seed).unwrap().verdict;
            prop_assert_ne!(alone, SemisimpleVerdict::Unknown);
            prop_assert_eq!(alone, joint);
        }
    }
}

#[test]
fn tensor_pairs_of_bundled_shapes_satisfy_the_axioms() {
    let m2 = QuasiPair::new(StarAlgebraModel::matrix_units(2), NormSpec::l2(4), "m2").unwrap();
    let z3 = QuasiPair::new(StarAlgebraModel::cyclic_group(3), NormSpec::l1(3), "z3").unwrap();
    for (p, q, kind) in [(&m2, &pointwise(2), CrossNorm::Hilbert), (&z3, &pointwise(2), CrossNorm::Projective)] {
        let tp = build_tensor_pair(p, q, kind).unwrap();
        let r = validate_tensor_pair(&tp, 6, 1e-9, 3).unwrap();
        assert!(r.passed, "{:?}", r.checks);
    }
}
