//! The acceptance suite: one line per criterion, non-zero exit on any failure.

mod common;

use std::sync::Arc;
use std::time::Instant;

use ogpd::action::{
    action_roundtrip, action_to_covering_roundtrip, lift_sdp_projection, semidirect_product,
};
use ogpd::builders::basic::interval;
use ogpd::builders::fixtures::{example_vi, klein_hlp, pstar};
use ogpd::builders::groups::FiniteGroup;
use ogpd::builders::random::{
    presheaf_normal, quotient_presheaf, random_coset_action, random_covering, random_inductive,
    random_instance, random_subpresheaf, RandomParams,
};
use ogpd::builders::semigroup::{
    inverse_semigroup_roundtrip, pseudoproduct_associativity, table_from_inductive,
    InverseSemigroupTable,
};
use ogpd::cocylinder::{
    derived_groupoid, fibration_theorem_pipeline, gamma_iso, interval_mapping_groupoid,
    kernel_matches_derived, lift_eps, lift_p_phi, loops_iso, mapping_cocylinder, PPhi,
};
use ogpd::enlargement::{is_enlargement, maximum_enlargement, universal_map};
use ogpd::groupoid::pi0_quotient;
use ogpd::homotopy::{
    all_lifts, find_lift, is_lift, lift_covering, lift_through_immersion, path_lift, random_square,
    HomotopySquare,
};
use ogpd::iso::{find_isomorphism, find_poset_isomorphism};
use ogpd::mapping::post_compose;
use ogpd::quotient::{factorize, quotient};
use ogpd::search::random_functor;
use ogpd::{
    star_class, star_class_at, validate_ogpd, Budget, NormalSubgroupoid, OrderedFunctor,
    OrderedGroupoid,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

const BUDGET: Budget = Budget(2_000_000);

fn klein_separation() -> Outcome {
    let k = klein_hlp();
    ensure!(star_class(&k.p).is_fibration(), "p is not star-surjective");
    ensure!(
        find_lift(&k.square, BUDGET).map_err(e)?.is_none(),
        "a lift was found"
    );
    Ok("p is a fibration and the square has no lift".into())
}

fn path_lifting() -> Outcome {
    let (mut pos, mut neg) = (0, 0);
    let suite = functor_suite(2, 120);
    for (kind, phi) in &suite {
        let g = phi.source();
        let h = phi.target();
        let mut total = true;
        'outer: for x in g.object_ids() {
            for &t in h.star(phi.apply_object(x)) {
                if path_lift(phi, x, t).map_err(e)?.is_none() {
                    total = false;
                    break 'outer;
                }
            }
        }
        let surj = star_class(phi).surjective;
        ensure!(
            total == surj,
            "{kind} functor: path lifting {total}, star-surjective {surj}"
        );
        if surj {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    ensure!(
        pos >= 10 && neg >= 10,
        "only {pos} positive and {neg} negative cases"
    );
    Ok(format!(
        "{} functors, {pos} fibrations, {neg} non-fibrations",
        suite.len()
    ))
}

fn check_certified(sq: &HomotopySquare, lift: &OrderedFunctor, what: &str) -> Result<(), String> {
    ensure!(is_lift(sq, lift), "{what}: output is not a lift");
    let all = all_lifts(sq, BUDGET).map_err(e)?;
    ensure!(
        contains_map(&all, lift),
        "{what}: lift is not among the searched solutions"
    );
    Ok(())
}

fn random_f(
    rng: &mut ChaCha8Rng,
    a: &Arc<OrderedGroupoid>,
    b: &Arc<OrderedGroupoid>,
) -> Result<OrderedFunctor, String> {
    random_functor(a, b, rng, BUDGET)
        .map_err(e)?
        .ok_or_else(|| "no functor into a groupoid with objects".to_string())
}

fn certified_lifts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 20;
    for _ in 0..n {
        let g = presheaf(&mut rng, 3, 4);
        let a = square_domain(&mut rng);

        let xi = random_covering(&mut rng, &g).map_err(e)?;
        let f = random_f(&mut rng, &a, xi.source())?;
        let sq = random_square(&a, &xi, &f, &mut rng, BUDGET).map_err(e)?;
        check_certified(&sq, &lift_covering(&sq).map_err(e)?, "covering")?;

        let t = interval_mapping_groupoid(&g.groupoid).map_err(e)?;
        for which in 0..2u8 {
            let p = if which == 0 { t.eps0() } else { t.eps1() };
            let f = random_f(&mut rng, &a, t.groupoid())?;
            let sq = random_square(&a, p, &f, &mut rng, BUDGET).map_err(e)?;
            check_certified(&sq, &lift_eps(&t, which, &sq).map_err(e)?, "ε")?;
        }

        let sdp = semidirect_product(&random_coset_action(&mut rng, &g).map_err(e)?).map_err(e)?;
        let f = random_f(&mut rng, &a, sdp.groupoid())?;
        let sq = random_square(&a, sdp.projection(), &f, &mut rng, BUDGET).map_err(e)?;
        check_certified(
            &sq,
            &lift_sdp_projection(&sdp, &sq).map_err(e)?,
            "semidirect projection",
        )?;

        let small = presheaf(&mut rng, 2, 4);
        let normals = random_subpresheaf(&mut rng, &small, true);
        let phi = quotient_presheaf(&small, &normals).map_err(e)?.1;
        let m = mapping_cocylinder(&phi).map_err(e)?;
        let f = random_f(&mut rng, &a, m.groupoid())?;
        let sq = random_square(&a, m.p_phi(), &f, &mut rng, BUDGET).map_err(e)?;
        check_certified(&sq, &lift_p_phi(&m, &sq).map_err(e)?, "p_φ")?;

        let fact = factorize(m.p_phi()).map_err(e)?;
        let varpi = fact.varpi();
        let f = random_f(&mut rng, &a, varpi.source())?;
        let sq = random_square(&a, varpi, &f, &mut rng, BUDGET).map_err(e)?;
        let certified = PPhi(&m);
        check_certified(
            &sq,
            &lift_through_immersion(&sq, &fact.psi, &certified).map_err(e)?,
            "immersion factor",
        )?;
    }
    Ok(format!(
        "{n} squares for each of covering, ε₀, ε₁, semidirect, p_φ, immersion factor"
    ))
}

fn quotient_params(seed: u64) -> RandomParams {
    RandomParams {
        objects: 1 + (seed % 4) as usize,
        max_group_order: if seed.is_multiple_of(3) { 8 } else { 4 },
        with_interval: seed % 5 == 1,
        quotiented: seed % 7 == 3,
        with_functor: false,
        with_normal: true,
        ..small_params()
    }
}

fn quotient_correctness() -> Outcome {
    let (mut checked_nexus, mut largest, mut proper) = (0, 0, 0);
    let count = 100;
    for seed in 0..count {
        let inst = random_instance(seed, quotient_params(seed)).map_err(e)?;
        let a = inst.normal.expect("normal requested");
        largest = largest.max(inst.groupoid.num_arrows());
        if a.subgroupoid().len() > inst.groupoid.num_objects() {
            proper += 1;
        }
        let q = quotient(&a).map_err(|x| format!("seed {seed}: {x}"))?;
        ensure!(
            validate_ogpd(&q.groupoid().to_raw()).map_err(e)?.passed(),
            "seed {seed}: quotient fails the axioms"
        );
        ensure!(
            star_class(q.projection()).is_fibration(),
            "seed {seed}: ϖ is not star-surjective"
        );
        if inst.groupoid.num_arrows() <= 30 {
            q.check_nexus_independence()
                .map_err(|x| format!("seed {seed}: {x}"))?;
            checked_nexus += 1;
        }
        let oracle = oracle_quotient(&a).map_err(|x| format!("seed {seed}: oracle {x}"))?;
        compare_with_oracle(&q, &oracle).map_err(|x| format!("seed {seed}: {x}"))?;
    }
    Ok(format!(
        "{count} instances (up to {largest} arrows, {proper} with non-identity A) match the oracle, {checked_nexus} with every nexus tried"
    ))
}

fn factorization() -> Outcome {
    let mut suite = functor_suite(5, 60);
    for seed in 0..40 {
        let params = RandomParams {
            with_functor: true,
            with_normal: false,
            ..quotient_params(seed)
        };
        if let Some(f) = random_instance(1000 + seed, params).map_err(e)?.functor {
            suite.push(("instance", f));
        }
    }
    let mut fibrations = 0;
    for (kind, theta) in &suite {
        let fact = factorize(theta).map_err(|x| format!("{kind}: {x}"))?;
        ensure!(
            fact.varpi().then(&fact.psi).map_err(e)?.map() == theta.map(),
            "{kind}: θ ≠ ϖψ"
        );
        ensure!(
            star_class(&fact.psi).is_immersion(),
            "{kind}: ψ is not star-injective"
        );
        if star_class(theta).is_fibration() {
            fibrations += 1;
            ensure!(
                star_class(&fact.psi).is_covering(),
                "{kind}: ψ is not a covering for a fibration"
            );
        }
    }
    ensure!(fibrations >= 10, "only {fibrations} fibrations");
    Ok(format!("{} functors, {fibrations} fibrations", suite.len()))
}

fn example_vi_exact() -> Outcome {
    let ex = example_vi();
    let q = quotient(&NormalSubgroupoid::whole(ex.s.clone())).map_err(e)?;
    let qg = q.groupoid();
    ensure!(qg.num_objects() == 5, "{} objects", qg.num_objects());
    ensure!(qg.is_trivial(), "non-identity arrows remain");
    ensure!(
        find_poset_isomorphism(qg.objects(), &ex.expected_quotient).is_some(),
        "object order differs from the expected diagram"
    );
    ensure!(!qg.is_inductive(), "quotient is inductive");
    Ok("5 objects, trivial, expected order, not inductive".into())
}

fn example_iv() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut nontrivial = 0;
    for i in 0..5 {
        let g = presheaf(&mut rng, 3, 8);
        let normals = random_subpresheaf(&mut rng, &g, true);
        if normals.iter().any(|n| n.len() > 1) {
            nontrivial += 1;
        }
        let n = presheaf_normal(&g, &normals).map_err(e)?;
        let q = quotient(&n).map_err(e)?;
        let (qp, _) = quotient_presheaf(&g, &normals).map_err(e)?;
        ensure!(
            find_isomorphism(q.groupoid(), &qp.groupoid, BUDGET)
                .map_err(e)?
                .is_some(),
            "instance {i}: no isomorphism with the presheaf of quotients"
        );
    }
    Ok(format!(
        "5 presheaves ({nontrivial} with a non-trivial normal part) match G_x/N_x"
    ))
}

fn example_i() -> Outcome {
    for seed in 0..20 {
        let params = RandomParams {
            with_normal: false,
            with_functor: false,
            ..quotient_params(seed)
        };
        let g = random_instance(2000 + seed, params).map_err(e)?.groupoid;
        let q = quotient(&NormalSubgroupoid::whole(g.clone())).map_err(e)?;
        let pi0 = pi0_quotient(&g);
        ensure!(
            q.groupoid().is_trivial(),
            "seed {seed}: G ⫽ G has non-identity arrows"
        );
        ensure!(
            find_poset_isomorphism(&pi0.poset, q.groupoid().objects()).is_some(),
            "seed {seed}: G ⫽ G is not Q(G)"
        );
    }
    Ok("20 instances with G ⫽ G ≅ Q(G)".into())
}

fn maximum_enlargement_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut phis: Vec<OrderedFunctor> = functor_suite(9, 40)
        .into_iter()
        .filter(|(kind, _)| *kind == "covering" || *kind == "inclusion")
        .map(|(_, f)| f)
        .collect();
    let mut universal = Vec::new();
    for _ in 0..6 {
        let (phi, j, xi) = enlargement_in_covering(&mut rng);
        phis.push(phi.clone());
        universal.push((phi, j, xi));
    }
    for (i, phi) in phis.iter().enumerate() {
        ensure!(
            star_class(phi).is_immersion(),
            "case {i} is not star-injective"
        );
        let enl = maximum_enlargement(phi).map_err(|x| format!("case {i}: {x}"))?;
        is_enlargement(&enl.i).map_err(|x| format!("case {i}: {x}"))?;
        ensure!(
            enl.i.is_ordered_embedding(),
            "case {i}: i is not an embedding"
        );
        ensure!(
            star_class(&enl.pi).is_covering(),
            "case {i}: π is not a covering"
        );
        ensure!(
            enl.i.then(&enl.pi).map_err(e)?.map() == phi.map(),
            "case {i}: φ ≠ iπ"
        );
    }
    for (i, (phi, j, xi)) in universal.iter().enumerate() {
        let enl = maximum_enlargement(phi).map_err(e)?;
        let um =
            universal_map(&enl, j, xi, BUDGET).map_err(|x| format!("universal case {i}: {x}"))?;
        ensure!(
            enl.i.then(&um.nu).map_err(e)?.map() == j.map(),
            "universal case {i}: iν ≠ j"
        );
        ensure!(
            um.nu.then(xi).map_err(e)?.map() == enl.pi.map(),
            "universal case {i}: νξ ≠ π"
        );
        ensure!(
            um.solutions == 1,
            "universal case {i}: {} solutions",
            um.solutions
        );
    }
    Ok(format!(
        "{} star-injective functors, {} unique universal maps",
        phis.len(),
        universal.len()
    ))
}

fn act_cov() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for i in 0..20 {
        let g = presheaf(&mut rng, 3, 4);
        let xi = random_covering(&mut rng, &g).map_err(e)?;
        action_to_covering_roundtrip(&xi).map_err(|x| format!("covering {i}: {x}"))?;
        let act = random_coset_action(&mut rng, &g).map_err(e)?;
        action_roundtrip(&act).map_err(|x| format!("action {i}: {x}"))?;
    }
    Ok("20 coverings and 20 poset actions round trip".into())
}

fn fibration_theorem() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut phis: Vec<OrderedFunctor> = vec![klein_hlp().p];
    for i in 0..19 {
        let g = presheaf(&mut rng, 2, 4);
        let phi = match i % 3 {
            0 => random_covering(&mut rng, &g).map_err(e)?,
            1 => {
                quotient_presheaf(&g, &random_subpresheaf(&mut rng, &g, true))
                    .map_err(e)?
                    .1
            }
            _ => {
                let a = square_domain(&mut rng);
                random_f(&mut rng, &a, &g.groupoid)?
            }
        };
        phis.push(phi);
    }
    for (i, phi) in phis.iter().enumerate() {
        let m = mapping_cocylinder(phi).map_err(|x| format!("case {i}: {x}"))?;
        ensure!(
            validate_ogpd(&m.groupoid().to_raw()).map_err(e)?.passed(),
            "case {i}: M^φ fails the axioms"
        );
        ensure!(
            m.i_phi().then(m.p_phi()).map_err(e)?.map() == phi.map(),
            "case {i}: φ ≠ i_φ p_φ"
        );
        is_enlargement(m.i_phi()).map_err(|x| format!("case {i}: {x}"))?;
        let der = derived_groupoid(phi).map_err(e)?;
        kernel_matches_derived(&m, &der).map_err(|x| format!("case {i}: {x}"))?;
        gamma_iso(&m, &der).map_err(|x| format!("case {i}: {x}"))?;
        let pipe = fibration_theorem_pipeline(phi, 2, &mut rng, BUDGET)
            .map_err(|x| format!("case {i}: {x}"))?;
        ensure!(
            star_class(&pipe.q_on_derived).is_covering(),
            "case {i}: q_φ on Der(φ) is not a covering"
        );
    }
    Ok(format!("{} functors through the full pipeline", phis.len()))
}

fn loops() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let i = Arc::new(interval());
    let l = loops_iso(&i).map_err(e)?;
    ensure!(l.loops.len() == 4, "ΩI has {} elements", l.loops.len());
    for n in 0..10 {
        let h = presheaf(&mut rng, 3, 4);
        let l = loops_iso(&h.groupoid).map_err(|x| format!("instance {n}: {x}"))?;
        ensure!(
            l.loops.len() == h.groupoid.num_arrows(),
            "instance {n}: wrong loop count"
        );
    }
    Ok("𝓘 (4 elements) and 10 random H".into())
}

fn pstar_control() -> Outcome {
    let ps = pstar();
    ensure!(star_class(&ps.p).is_fibration(), "p is not a fibration");
    let (mg, _, p_star) = post_compose(&ps.p, &ps.e, BUDGET).map_err(e)?;
    let i = mg
        .object_of(&ps.i)
        .ok_or("i is not an object of OGPD(E, G)")?;
    ensure!(
        !star_class_at(&p_star, i).surjective,
        "p_* is star-surjective at i"
    );
    Ok("p is a fibration, p_* is not star-surjective at i".into())
}

fn semigroup_roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut groupoids: Vec<OrderedGroupoid> = (0..7)
        .map(|_| (*random_inductive(&mut rng, 5, 4).groupoid).clone())
        .collect();
    groupoids.push((*klein_hlp().g).clone());
    groupoids.push((*example_vi().s).clone());
    let tables = [
        InverseSemigroupTable::symmetric_inverse_monoid(2),
        InverseSemigroupTable::brandt(&FiniteGroup::cyclic(2), 2),
        InverseSemigroupTable::from_group(&FiniteGroup::symmetric3()),
    ];
    let mut count = 0;
    for (i, g) in groupoids.iter().enumerate() {
        ensure!(
            pseudoproduct_associativity(g).is_none(),
            "instance {i}: pseudoproduct is not associative"
        );
        let t = table_from_inductive(g).map_err(|x| format!("instance {i}: {x}"))?;
        inverse_semigroup_roundtrip(&t).map_err(|x| format!("instance {i}: {x}"))?;
        count += 1;
    }
    for (i, t) in tables.iter().enumerate() {
        let (g, _) = inverse_semigroup_roundtrip(t).map_err(|x| format!("table {i}: {x}"))?;
        ensure!(
            pseudoproduct_associativity(&g).is_none(),
            "table {i}: pseudoproduct is not associative"
        );
        count += 1;
    }
    Ok(format!("{count} inductive instances"))
}

fn main() {
    let criteria: [Criterion; 14] = [
        ("Klein separation", klein_separation),
        ("path lifting iff star-surjective", path_lifting),
        ("certified lifts verify", certified_lifts),
        ("quotient correctness", quotient_correctness),
        ("factorization", factorization),
        ("Example (vi) exact", example_vi_exact),
        ("Example (iv) presheaf quotients", example_iv),
        ("Example (i) G ⫽ G ≅ Q(G)", example_i),
        ("maximum enlargement", maximum_enlargement_criterion),
        ("actions and coverings", act_cov),
        ("fibration theorem", fibration_theorem),
        ("loop identification", loops),
        ("p_* negative control", pstar_control),
        ("inverse semigroup round trip", semigroup_roundtrip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {reason} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
