use fqg::divisibility::poisson_root;
use fqg::dual::{fourier, inverse_fourier};
use fqg::functional::{convolve, counit_functional, functional_norm, is_state, power, star, Functional};
use fqg::idempotent::enumerate_idempotents_bruteforce;
use fqg::linalg::max_abs;
use fqg::poisson::{
    check_norm_additivity, exp_phi, is_conditionally_positive, levy_decompose, log_phi, random_generator,
    random_state,
};
use fqg::quantum_group::{builtin, irreps, IrrepTable, QuantumGroup, BUILTIN_NAMES};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

struct Case {
    qg: QuantumGroup,
    table: IrrepTable,
    idempotents: Vec<Functional>,
}

fn cases() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(|| {
        BUILTIN_NAMES
            .iter()
            .map(|name| {
                let qg = builtin(name).unwrap();
                let table = irreps(&qg).unwrap();
                let idempotents = enumerate_idempotents_bruteforce(&qg, &table).unwrap().states;
                Case { qg, table, idempotents }
            })
            .collect()
    })
}

fn pick(which: usize, idem: usize) -> (&'static Case, &'static Functional) {
    let case = &cases()[which % cases().len()];
    (case, &case.idempotents[idem % case.idempotents.len()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convolution_is_associative_and_fourier_multiplicative(which in 0usize..10, seed in any::<u64>()) {
        let (case, _) = pick(which, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (random_state(&case.qg, &mut rng), random_state(&case.qg, &mut rng), random_state(&case.qg, &mut rng));
        let ab_c = convolve(&case.qg, &convolve(&case.qg, &a, &b).unwrap(), &c).unwrap();
        let a_bc = convolve(&case.qg, &a, &convolve(&case.qg, &b, &c).unwrap()).unwrap();
        prop_assert!(functional_norm(&case.qg, &(&ab_c - &a_bc)) < 1e-12);
        let (fa, fb) = (fourier(&case.table, &a).unwrap(), fourier(&case.table, &b).unwrap());
        let fab = fourier(&case.table, &convolve(&case.qg, &a, &b).unwrap()).unwrap();
        for k in 0..fa.len() {
            prop_assert!(max_abs(&(&fa[k] * &fb[k] - &fab[k])) < 1e-12);
        }
        let back = inverse_fourier(&case.table, &fa).unwrap();
        prop_assert!(back.distance_max(&a) < 1e-12);
    }

    #[test]
    fn states_are_closed_under_convolution_and_star(which in 0usize..10, seed in any::<u64>()) {
        let (case, _) = pick(which, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_state(&case.qg, &mut rng), random_state(&case.qg, &mut rng));
        prop_assert!(is_state(&case.qg, &convolve(&case.qg, &a, &b).unwrap(), 1e-10));
        prop_assert!(is_state(&case.qg, &star(&case.qg, &a).unwrap(), 1e-10));
        prop_assert!(functional_norm(&case.qg, &a) <= 1.0 + 1e-10);
    }

    #[test]
    fn generators_decompose_and_reconstruct(which in 0usize..10, idem in 0usize..8, rate in 0.05f64..3.0, seed in any::<u64>()) {
        let (case, phi) = pick(which, idem);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_generator(&case.qg, phi, rate, &mut rng);
        prop_assert!(is_conditionally_positive(&case.qg, phi, &u, 1e-9).unwrap());
        let dec = levy_decompose(&case.qg, phi, &u, 1e-12).unwrap();
        let rebuilt = (&dec.jump - phi) * dec.rate;
        prop_assert!(functional_norm(&case.qg, &(&rebuilt - &u)) < 1e-9);
        prop_assert!(dec.rate <= rate + 1e-9);
        prop_assert!(dec.rate >= functional_norm(&case.qg, &u) / 2.0 - 1e-9);
        prop_assert!(is_state(&case.qg, &exp_phi(&case.qg, phi, &u, 1e-12).unwrap(), 1e-9));
    }

    #[test]
    fn exp_and_log_invert_each_other(which in 0usize..10, idem in 0usize..8, scale in 0.05f64..0.65, seed in any::<u64>()) {
        let (case, phi) = pick(which, idem);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_generator(&case.qg, phi, 1.0, &mut rng);
        let n = functional_norm(&case.qg, &u);
        prop_assume!(n > 1e-9);
        let w = &u * (scale / n);
        let back = log_phi(&case.qg, phi, &exp_phi(&case.qg, phi, &w, 1e-14).unwrap(), 1e-14).unwrap();
        prop_assert!(functional_norm(&case.qg, &(&back - &w)) < 1e-9);
    }

    #[test]
    fn exp_turns_sums_of_commuting_generators_into_products(which in 0usize..10, idem in 0usize..8, s in 0.0f64..2.0, seed in any::<u64>()) {
        let (case, phi) = pick(which, idem);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_generator(&case.qg, phi, 0.7, &mut rng);
        let v = &u * s;
        let lhs = exp_phi(&case.qg, phi, &(&u + &v), 1e-14).unwrap();
        let rhs = convolve(&case.qg, &exp_phi(&case.qg, phi, &u, 1e-14).unwrap(), &exp_phi(&case.qg, phi, &v, 1e-14).unwrap()).unwrap();
        prop_assert!(functional_norm(&case.qg, &(&lhs - &rhs)) < 1e-10);
    }

    #[test]
    fn poisson_roots_power_back(which in 0usize..10, idem in 0usize..8, n in prop::sample::select(vec![2u64, 3, 5, 12]), seed in any::<u64>()) {
        let (case, phi) = pick(which, idem);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_generator(&case.qg, phi, 1.1, &mut rng);
        let dec = levy_decompose(&case.qg, phi, &u, 1e-12).unwrap();
        let omega = exp_phi(&case.qg, phi, &u, 1e-14).unwrap();
        let root = poisson_root(&case.qg, &dec, n, 1e-14).unwrap();
        prop_assert!(is_state(&case.qg, &root, 1e-9));
        prop_assert!(functional_norm(&case.qg, &(&power(&case.qg, &root, n).unwrap() - &omega)) < 1e-9);
    }

    #[test]
    fn generator_norms_add(which in 0usize..10, idem in 0usize..8, r1 in 0.0f64..2.0, r2 in 0.0f64..2.0, seed in any::<u64>()) {
        let (case, phi) = pick(which, idem);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_generator(&case.qg, phi, r1, &mut rng);
        let w = random_generator(&case.qg, phi, r2, &mut rng);
        prop_assert!(check_norm_additivity(&case.qg, &u, &w, 1e-8).passed());
    }

    #[test]
    fn counit_is_the_convolution_unit(which in 0usize..10, seed in any::<u64>()) {
        let (case, _) = pick(which, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_state(&case.qg, &mut rng);
        let eps = counit_functional(&case.qg);
        prop_assert!(convolve(&case.qg, &eps, &a).unwrap().distance_max(&a) < 1e-12);
        prop_assert!(convolve(&case.qg, &a, &eps).unwrap().distance_max(&a) < 1e-12);
    }
}
