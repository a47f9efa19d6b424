mod common;

use common::{presheaf, square_domain};
use ogpd::builders::basic::interval;
use ogpd::builders::fixtures::klein_hlp;
use ogpd::builders::random::{quotient_presheaf, random_covering, random_subpresheaf};
use ogpd::cocylinder::{
    cocylinder_as_pullback, derived_groupoid, fibration_theorem_pipeline, gamma_iso,
    interval_mapping_groupoid, kernel_matches_derived, lift_p_phi, mapping_cocylinder,
    transported_sdp_lift,
};
use ogpd::homotopy::{is_lift, random_square};
use ogpd::iso::is_isomorphism;
use ogpd::search::random_functor;
use ogpd::{star_class, validate_ogpd, Budget, OrderedFunctor};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

const BUDGET: Budget = Budget(2_000_000);

fn some_phi(rng: &mut ChaCha8Rng) -> OrderedFunctor {
    let g = presheaf(rng, 2, 4);
    if rng.gen_bool(0.5) {
        random_covering(rng, &g).unwrap()
    } else {
        quotient_presheaf(&g, &random_subpresheaf(rng, &g, true))
            .unwrap()
            .1
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cocylinder_structure(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = some_phi(&mut rng);
        let m = mapping_cocylinder(&phi).unwrap();
        prop_assert!(validate_ogpd(&m.groupoid().to_raw()).unwrap().passed());
        let composite = m.i_phi().then(m.p_phi()).unwrap();
        prop_assert_eq!(composite.map(), phi.map());
        prop_assert!(star_class(m.p_phi()).is_fibration());
        let interval = interval_mapping_groupoid(phi.target()).unwrap();
        let to_pullback = cocylinder_as_pullback(&m, &interval).unwrap();
        prop_assert!(is_isomorphism(&to_pullback));
        let der = derived_groupoid(&phi).unwrap();
        prop_assert!(kernel_matches_derived(&m, &der).is_ok());
    }

    #[test]
    fn lifts_transport_along_gamma(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = some_phi(&mut rng);
        let m = mapping_cocylinder(&phi).unwrap();
        let der = derived_groupoid(&phi).unwrap();
        let iso = gamma_iso(&m, &der).unwrap();
        let a = square_domain(&mut rng);
        let f = random_functor(&a, m.groupoid(), &mut rng, BUDGET).unwrap().unwrap();
        let sq = random_square(&a, m.p_phi(), &f, &mut rng, BUDGET).unwrap();
        let direct = lift_p_phi(&m, &sq).unwrap();
        prop_assert!(is_lift(&sq, &direct));
        let transported = transported_sdp_lift(&iso, &sq).unwrap();
        prop_assert!(is_lift(&sq, &transported));
        prop_assert_eq!(direct.map(), transported.map());
    }
}

#[test]
fn klein_pipeline() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let p = klein_hlp().p;
    let pipe = fibration_theorem_pipeline(&p, 3, &mut rng, BUDGET).unwrap();
    assert!(star_class(&pipe.q_on_derived).is_covering());
    assert_eq!(
        pipe.factorization
            .varpi()
            .then(&pipe.factorization.psi)
            .unwrap()
            .map(),
        pipe.cocylinder.p_phi().map()
    );
}

#[test]
fn interval_mapping_of_interval() {
    let i = Arc::new(interval());
    let t = interval_mapping_groupoid(&i).unwrap();
    assert!(star_class(t.eps0()).is_fibration());
    assert!(star_class(t.eps1()).is_fibration());
}
