mod common;

use common::{contains_map, functor_suite, presheaf, square_domain};
use ogpd::builders::fixtures::klein_hlp;
use ogpd::builders::random::random_covering;
use ogpd::homotopy::{all_lifts, find_lift, is_lift, lift_covering, path_lift, random_square};
use ogpd::search::random_functor;
use ogpd::{star_class, Budget};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BUDGET: Budget = Budget(2_000_000);

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn path_lifting_iff_star_surjective(seed in 0u64..10_000) {
        for (_, phi) in functor_suite(seed, 4) {
            let total = phi.source().object_ids().all(|x| {
                phi.target()
                    .star(phi.apply_object(x))
                    .iter()
                    .all(|&t| path_lift(&phi, x, t).unwrap().is_some())
            });
            prop_assert_eq!(total, star_class(&phi).surjective);
        }
    }

    #[test]
    fn covering_lift_is_the_unique_lift(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = presheaf(&mut rng, 3, 4);
        let a = square_domain(&mut rng);
        let xi = random_covering(&mut rng, &g).unwrap();
        let f = random_functor(&a, xi.source(), &mut rng, BUDGET).unwrap().unwrap();
        let sq = random_square(&a, &xi, &f, &mut rng, BUDGET).unwrap();
        let lift = lift_covering(&sq).unwrap();
        prop_assert!(is_lift(&sq, &lift));
        let all = all_lifts(&sq, BUDGET).unwrap();
        prop_assert_eq!(all.len(), 1);
        prop_assert!(contains_map(&all, &lift));
    }
}

#[test]
fn klein_square_has_no_lift() {
    let k = klein_hlp();
    assert!(star_class(&k.p).is_fibration());
    assert!(find_lift(&k.square, BUDGET).unwrap().is_none());
}

#[test]
fn tiny_budget_is_reported() {
    let k = klein_hlp();
    assert!(matches!(
        find_lift(&k.square, Budget(1)),
        Err(ogpd::Error::BudgetExceeded { limit: 1 })
    ));
}
