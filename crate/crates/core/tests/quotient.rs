mod common;

use std::sync::Arc;

use common::{compare_with_oracle, oracle_quotient, small_params};
use ogpd::builders::basic::one_object_group;
use ogpd::builders::fixtures::klein_hlp;
use ogpd::builders::groups::FiniteGroup;
use ogpd::builders::random::{random_instance, RandomParams};
use ogpd::quotient::{factorize, normal_closure, quotient};
use ogpd::{star_class, validate_ogpd, Error, NormalSubgroupoid, Subgroupoid};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matches_oracle(seed in 0u64..10_000, objects in 1usize..4, interval in any::<bool>()) {
        let params = RandomParams { objects, with_interval: interval, with_functor: false, ..small_params() };
        let inst = random_instance(seed, params).unwrap();
        let a = inst.normal.unwrap();
        let q = quotient(&a).unwrap();
        prop_assert!(validate_ogpd(&q.groupoid().to_raw()).unwrap().passed());
        prop_assert!(star_class(q.projection()).is_fibration());
        let oracle = oracle_quotient(&a).unwrap();
        prop_assert_eq!(compare_with_oracle(&q, &oracle), Ok(()));
    }

    #[test]
    fn factorization_recomposes(seed in 0u64..10_000) {
        let inst = random_instance(seed, RandomParams { with_normal: false, ..small_params() }).unwrap();
        let theta = inst.functor.unwrap();
        let fact = factorize(&theta).unwrap();
        let composite = fact.varpi().then(&fact.psi).unwrap();
        prop_assert_eq!(composite.map(), theta.map());
        prop_assert!(star_class(&fact.psi).is_immersion());
    }
}

#[test]
fn identities_give_isomorphic_quotient() {
    let k = klein_hlp();
    let q = quotient(&NormalSubgroupoid::identities(k.g.clone())).unwrap();
    assert_eq!(q.groupoid().num_arrows(), k.g.num_arrows());
    assert!(q.classes().iter().all(|c| c.len() == 1));
}

#[test]
fn non_normal_subgroup_is_rejected() {
    let s3 = Arc::new(one_object_group(&FiniteGroup::symmetric3()));
    let order_two = s3
        .arrows()
        .find(|&a| !s3.is_identity(a) && s3.compose(a, a) == Some(s3.identity(s3.dom(a))))
        .unwrap();
    let sub = Subgroupoid::from_arrows(s3.clone(), &[order_two], true).unwrap();
    assert!(matches!(NormalSubgroupoid::new(sub), Err(Error::Axioms(_))));
    let closure = normal_closure(&s3, &[order_two]).unwrap();
    assert_eq!(closure.subgroupoid().len(), 6);
}

#[test]
fn not_closed_under_restriction_is_rejected() {
    let k = klein_hlp();
    let a = k.g.arrow_by_label("a@e").unwrap();
    let sub = Subgroupoid::from_arrows(k.g.clone(), &[a], true).unwrap();
    assert!(NormalSubgroupoid::new(sub).is_err());
}
