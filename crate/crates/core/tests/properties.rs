use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symcone::algebra::{random_element_from, spectral, AlgebraRef};
use symcone::caselaw::{classify, curve_for_case, eps_expand, random_inputs, system_of, Quadruple};
use symcone::operators::{quadratic_form, tensor_square, trace_inner, Operator};
use symcone::peirce::{complete_frame, fine_peirce, JordanFrame};
use symcone::suites::random_op;
use symcone::{in_symmetric_cone, Algebra, Factor};

fn algebra() -> impl Strategy<Value = AlgebraRef> {
    let factor = prop_oneof![
        (1usize..=4).prop_map(|n| Factor::Hadamard { n }),
        (1usize..=3).prop_map(|n| Factor::SymMatrix { n }),
        (2usize..=5).prop_map(|n| Factor::Spin { n }),
    ];
    prop::collection::vec(factor, 1..=2).prop_map(|f| Algebra::new(f).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jordan_identity(alg in algebra(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element_from(&alg, &mut rng);
        let y = random_element_from(&alg, &mut rng);
        let x2 = x.square();
        let lhs = x.jordan(&y).jordan(&x2);
        let rhs = x.jordan(&y.jordan(&x2));
        prop_assert!(lhs.distance(&rhs) <= 1e-10 * x.norm().powi(3) * y.norm().max(1.0));
        prop_assert!(x.jordan(&y).distance(&y.jordan(&x)) <= 1e-14);
    }

    #[test]
    fn spectral_reconstructs(alg in algebra(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element_from(&alg, &mut rng);
        let sd = spectral(&x).unwrap();
        prop_assert_eq!(sd.eigenvalues.len(), alg.rank());
        prop_assert!(sd.reconstruct().distance(&x) <= 1e-10 * x.norm().max(1.0));
        prop_assert!(sd.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(in_symmetric_cone(&x.square(), 1e-10));
    }

    #[test]
    fn peirce_components_sum(alg in algebra(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element_from(&alg, &mut rng);
        let sys = fine_peirce(&JordanFrame::of_element(&x, 1e-9).unwrap(), 1e-9).unwrap();
        let y = random_element_from(&alg, &mut rng);
        let parts = sys.components(&y).unwrap();
        let total = parts.iter().fold(y.scale(0.0), |acc, (_, p)| &acc + p);
        prop_assert!(total.distance(&y) <= 1e-9 * y.norm());
        for (a, pa) in &parts {
            for (b, pb) in &parts {
                if a < b {
                    prop_assert!(pa.dot(pb).abs() <= 1e-9 * y.norm().powi(2));
                }
            }
        }
    }

    #[test]
    fn completed_frame_orders_zero_part_first(alg in algebra(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element_from(&alg, &mut rng);
        let frame = JordanFrame::of_element(&x, 1e-9).unwrap();
        let r = frame.len();
        let k = 1 + (seed as usize) % r;
        let c = frame.elements()[..k].iter().fold(x.scale(0.0), |acc, f| &acc + f);
        let (full, p) = complete_frame(&c, 1e-9).unwrap();
        prop_assert_eq!(p, r - k);
        for (idx, f) in full.elements().iter().enumerate() {
            let inside = f.dot(&c) > 0.5 * f.dot(f);
            prop_assert_eq!(inside, idx >= p);
        }
    }

    #[test]
    fn tensor_square_pairs_as_quadratic_form(alg in algebra(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_op(&alg, &mut rng);
        let x = random_element_from(&alg, &mut rng);
        let lhs = trace_inner(&a, &tensor_square(&x)).unwrap();
        let rhs = quadratic_form(&a, &x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * x.norm().powi(2) * a.norm().max(1.0));
        prop_assert!((x.dot(&a.apply(&x)) - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn classification_is_total_on_admissible(i in 0usize..6, j in 0usize..6, k in 0usize..6, l in 0usize..6) {
        let q = Quadruple::new(i, j, k, l);
        prop_assert_eq!(classify(&q).is_ok(), q.is_admissible());
    }

    #[test]
    fn expansion_matches_direct_evaluation(seed in any::<u64>(), eps in 0.01f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = Algebra::sym(3);
        let x = random_element_from(&alg, &mut rng);
        let sys = fine_peirce(&JordanFrame::of_element(&x, 1e-9).unwrap(), 1e-9).unwrap();
        let a = random_op(&alg, &mut rng);
        for (q, tag) in symcone::caselaw::enumerate_quadruples(3).unwrap() {
            let inputs = random_inputs(&sys, &q, &mut rng).unwrap();
            let curve = curve_for_case(tag, &sys, &q, &inputs, 1e-8).unwrap();
            let z = curve.eval(eps);
            prop_assert!(in_symmetric_cone(&z, 1e-10));
            let direct = quadratic_form(&a, &z).unwrap();
            let ex = eps_expand(&a, &curve).unwrap();
            prop_assert!((ex.eval(eps) - direct).abs() <= 1e-9 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn spin_frame_system_is_consistent(n in 2usize..=6, seed in any::<u64>()) {
        let alg = Algebra::spin(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element_from(&alg, &mut rng);
        let frame = JordanFrame::of_element(&x, 1e-9).unwrap();
        let sys = system_of(frame.elements().to_vec(), 1e-9).unwrap();
        let dims: usize = sys.pairs().map(|p| sys.space(p).unwrap().dim()).sum();
        prop_assert_eq!(dims, alg.dim());
    }
}
