mod common;

use ogpd::builders::fixtures::{fixture, klein_hlp, FIXTURE_NAMES};
use ogpd::builders::groups::FiniteGroup;
use ogpd::builders::random::{random_inductive, random_instance, RandomParams};
use ogpd::builders::semigroup::{
    inverse_semigroup_roundtrip, table_from_inductive, InverseSemigroupTable,
};
use ogpd::validate_ogpd;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_instances_are_reproducible(seed in any::<u64>()) {
        let a = random_instance(seed, RandomParams::default()).unwrap();
        let b = random_instance(seed, RandomParams::default()).unwrap();
        prop_assert_eq!(a.groupoid.to_raw(), b.groupoid.to_raw());
        prop_assert_eq!(a.functor.map(|f| f.map().to_vec()), b.functor.map(|f| f.map().to_vec()));
        prop_assert!(validate_ogpd(&a.groupoid.to_raw()).unwrap().passed());
    }

    #[test]
    fn inductive_groupoids_round_trip(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_inductive(&mut rng, 4, 4);
        prop_assert!(g.groupoid.is_inductive());
        let t = table_from_inductive(&g.groupoid).unwrap();
        prop_assert!(inverse_semigroup_roundtrip(&t).is_ok());
    }
}

#[test]
fn semigroup_tables_round_trip() {
    for t in [
        InverseSemigroupTable::symmetric_inverse_monoid(2),
        InverseSemigroupTable::symmetric_inverse_monoid(3),
        InverseSemigroupTable::brandt(&FiniteGroup::cyclic(3), 2),
        InverseSemigroupTable::from_group(&FiniteGroup::quaternion()),
    ] {
        let (g, back) = inverse_semigroup_roundtrip(&t).unwrap();
        assert_eq!(g.num_arrows(), t.len());
        assert_eq!(back.len(), t.len());
    }
}

#[test]
fn fixtures_validate() {
    for name in FIXTURE_NAMES {
        fixture(name).unwrap();
    }
    let k = klein_hlp();
    for g in [&k.e, &k.g, &k.h] {
        assert!(validate_ogpd(&g.to_raw()).unwrap().passed());
    }
}
