//! Independent oracles and instance generators shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use ogpd::builders::presheaf::PresheafGroupoid;
use ogpd::builders::random::{
    quotient_presheaf, random_covering, random_functor_pair, random_poset, random_presheaf,
    random_subpresheaf, subpresheaf_inclusion, PresheafMode, RandomParams,
};
use ogpd::quotient::QuotientGroupoid;
use ogpd::{
    ArrowId, Budget, NormalSubgroupoid, ObjectId, OrderedFunctor, OrderedGroupoid, Subgroupoid,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `G ⫽ A` computed straight from the definitions: `g ≲ k` iff `agb ≤ k`
/// for some `a, b ∈ A`; classes are mutual `≲`; composites are taken over
/// every member pair and every nexus.
#[derive(Debug)]
pub struct OracleQuotient {
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<ArrowId>>,
    pub leq: Vec<Vec<bool>>,
    /// `(c, d) ↦ cd` when defined.
    pub compose: Vec<Vec<Option<usize>>>,
}

pub fn below(a: &NormalSubgroupoid, g: ArrowId, k: ArrowId) -> bool {
    let p = a.parent();
    let left: Vec<ArrowId> = p
        .costar(p.dom(g))
        .iter()
        .copied()
        .filter(|&x| a.contains(x))
        .collect();
    let right: Vec<ArrowId> = p
        .star(p.cod(g))
        .iter()
        .copied()
        .filter(|&x| a.contains(x))
        .collect();
    left.iter().any(|&x| {
        right
            .iter()
            .any(|&y| p.leq(p.compose_path(&[x, g, y]).expect("composable"), k))
    })
}

pub fn oracle_quotient(a: &NormalSubgroupoid) -> Result<OracleQuotient, String> {
    let g = a.parent();
    let n = g.num_arrows();
    let rel: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| below(a, ArrowId::new(i), ArrowId::new(j)))
                .collect()
        })
        .collect();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<ArrowId>> = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        let members: Vec<ArrowId> = (0..n)
            .filter(|&j| rel[i][j] && rel[j][i])
            .map(ArrowId::new)
            .collect();
        for m in &members {
            if class_of[m.index()] != usize::MAX {
                return Err("≃ is not transitive".into());
            }
            class_of[m.index()] = classes.len();
        }
        classes.push(members);
    }
    let k = classes.len();
    let mut leq = vec![vec![false; k]; k];
    for c in 0..k {
        for d in 0..k {
            let vals: Vec<bool> = classes[c]
                .iter()
                .flat_map(|x| classes[d].iter().map(|y| rel[x.index()][y.index()]))
                .collect();
            if vals.iter().any(|&v| v != vals[0]) {
                return Err("order is not well defined on classes".into());
            }
            leq[c][d] = vals[0];
        }
    }
    let mut compose = vec![vec![None; k]; k];
    for c in 0..k {
        for d in 0..k {
            let mut result: Option<usize> = None;
            for &x in &classes[c] {
                for &y in &classes[d] {
                    let (e, f) = (g.cod(x), g.dom(y));
                    for &u in g.costar(f) {
                        if !a.contains(u) || !g.object_leq(g.dom(u), e) {
                            continue;
                        }
                        for &p in g.costar(e) {
                            if !a.contains(p) || !g.object_leq(g.dom(p), f) {
                                continue;
                            }
                            let x1 = g.corestriction(x, g.dom(u)).map_err(|e| e.to_string())?;
                            let y1 = g.restriction(g.dom(p), y).map_err(|e| e.to_string())?;
                            let first = g.compose_path(&[x1, u, y]).expect("composable");
                            let second =
                                g.compose_path(&[x, g.inverse(p), y1]).expect("composable");
                            for v in [first, second] {
                                let cl = class_of[v.index()];
                                if result.is_some_and(|r| r != cl) {
                                    return Err(format!(
                                        "composite of classes {c}, {d} depends on the nexus"
                                    ));
                                }
                                result = Some(cl);
                            }
                        }
                    }
                }
            }
            compose[c][d] = result;
        }
    }
    Ok(OracleQuotient {
        class_of,
        classes,
        leq,
        compose,
    })
}

/// Class partition, order and composition agree with the oracle.
pub fn compare_with_oracle(q: &QuotientGroupoid, o: &OracleQuotient) -> Result<(), String> {
    let qg = q.groupoid();
    if qg.num_arrows() != o.classes.len() {
        return Err(format!(
            "{} classes, oracle has {}",
            qg.num_arrows(),
            o.classes.len()
        ));
    }
    let to_oracle: Vec<usize> = qg
        .arrows()
        .map(|c| o.class_of[q.representative(c).index()])
        .collect();
    for c in qg.arrows() {
        let mut mine = q.members(c).to_vec();
        mine.sort();
        if mine != o.classes[to_oracle[c.index()]] {
            return Err(format!("class {} differs", qg.label(c)));
        }
    }
    for c in qg.arrows() {
        for d in qg.arrows() {
            let (i, j) = (to_oracle[c.index()], to_oracle[d.index()]);
            if qg.leq(c, d) != o.leq[i][j] {
                return Err(format!(
                    "order differs at {} ≤ {}",
                    qg.label(c),
                    qg.label(d)
                ));
            }
            let mine = qg.compose(c, d).map(|x| to_oracle[x.index()]);
            if mine != o.compose[i][j] {
                return Err(format!(
                    "composite of {} and {} differs",
                    qg.label(c),
                    qg.label(d)
                ));
            }
        }
    }
    Ok(())
}

pub fn small_params() -> RandomParams {
    RandomParams {
        objects: 3,
        density: 0.5,
        max_group_order: 4,
        ..RandomParams::default()
    }
}

/// A mixture of functor kinds: coverings, sub-presheaf inclusions,
/// projections onto quotient presheaves and searched functors.
pub fn functor_suite(seed: u64, count: usize) -> Vec<(&'static str, OrderedFunctor)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let g = presheaf(&mut rng, 3, 4);
        let f = match i % 4 {
            0 => ("covering", random_covering(&mut rng, &g).expect("covering")),
            1 => {
                let subs = random_subpresheaf(&mut rng, &g, false);
                (
                    "inclusion",
                    subpresheaf_inclusion(&g, &subs).expect("inclusion").1,
                )
            }
            2 => {
                let normals = random_subpresheaf(&mut rng, &g, true);
                (
                    "projection",
                    quotient_presheaf(&g, &normals).expect("projection").1,
                )
            }
            _ => (
                "searched",
                random_functor_pair(
                    &mut rng,
                    RandomParams {
                        objects: 2,
                        ..small_params()
                    },
                    Budget(200_000),
                )
                .expect("search"),
            ),
        };
        out.push(f);
    }
    out
}

pub fn presheaf(rng: &mut ChaCha8Rng, objects: usize, max_order: usize) -> PresheafGroupoid {
    let n = rng.gen_range(1..=objects);
    let base = random_poset(rng, n, 0.5);
    let mode = if rng.gen_bool(0.5) {
        PresheafMode::Inclusion
    } else {
        PresheafMode::Quotient
    };
    random_presheaf(rng, base, max_order, mode)
}

/// A small random poset seen as a trivial groupoid, the usual domain of squares.
pub fn square_domain(rng: &mut ChaCha8Rng) -> Arc<OrderedGroupoid> {
    let n = rng.gen_range(1..=3);
    Arc::new(OrderedGroupoid::discrete(random_poset(rng, n, 0.5)))
}

/// `φ = jξ` with `j: G ⊆ C` the full subgroupoid on an order ideal meeting
/// every component of `C`, and `ξ: C → H` a covering.
pub fn enlargement_in_covering(
    rng: &mut ChaCha8Rng,
) -> (OrderedFunctor, OrderedFunctor, OrderedFunctor) {
    let h = presheaf(rng, 3, 4);
    let xi = random_covering(rng, &h).expect("covering");
    let c = xi.source().clone();
    let mut comp: Vec<usize> = (0..c.num_objects()).collect();
    fn find(comp: &mut Vec<usize>, x: usize) -> usize {
        if comp[x] != x {
            let r = find(comp, comp[x]);
            comp[x] = r;
        }
        comp[x]
    }
    for u in c.arrows() {
        let (a, b) = (
            find(&mut comp, c.dom(u).index()),
            find(&mut comp, c.cod(u).index()),
        );
        comp[a] = b;
    }
    let mut ideal = vec![false; c.num_objects()];
    let mut roots: Vec<usize> = (0..c.num_objects()).map(|x| find(&mut comp, x)).collect();
    roots.sort();
    roots.dedup();
    for r in roots {
        let members: Vec<usize> = (0..c.num_objects())
            .filter(|&x| find(&mut comp, x) == r)
            .collect();
        let pick = members[rng.gen_range(0..members.len())];
        for y in c.object_ids() {
            if c.object_leq(y, ObjectId::new(pick)) {
                ideal[y.index()] = true;
            }
        }
    }
    let arrows: Vec<ArrowId> = c
        .arrows()
        .filter(|&u| ideal[c.dom(u).index()] && ideal[c.cod(u).index()])
        .collect();
    let sub = Subgroupoid::from_arrows(c.clone(), &arrows, false).expect("arrows of C");
    let (g, ids) = sub.induced().expect("full subgroupoid");
    let j = OrderedFunctor::new(Arc::new(g), c, ids).expect("inclusion");
    let phi = j.then(&xi).expect("composable");
    (phi, j, xi)
}

pub fn contains_map(all: &[OrderedFunctor], f: &OrderedFunctor) -> bool {
    all.iter().any(|g| g.map() == f.map())
}
