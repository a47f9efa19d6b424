//! Seeded random instances. Everything starts from a presheaf of small
//! groups, which is always a valid ordered groupoid, and grows through
//! products, quotients and actions.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::{semidirect_product, GroupoidAction};
use crate::builders::basic::interval;
use crate::builders::groups::FiniteGroup;
use crate::builders::presheaf::{
    presheaf_groupoid, presheaf_morphism, PresheafGroupoid, PresheafSpec,
};
use crate::error::Result;
use crate::functor::OrderedFunctor;
use crate::groupoid::{product, OrderedGroupoid};
use crate::ids::{ArrowId, ObjectId};
use crate::poset::Poset;
use crate::quotient::{normal_closure, quotient, NormalSubgroupoid};
use crate::search::{random_functor, Budget};

/// A poset on `n` elements: each pair `i < j` is related with probability
/// `density`, then closed transitively.
pub fn random_poset(rng: &mut impl Rng, n: usize, density: f64) -> Poset {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                pairs.push((i, j));
            }
        }
    }
    Poset::generated((0..n).map(|i| format!("p{i}")).collect(), &pairs)
        .expect("index order is acyclic")
}

/// A meet-semilattice of at most `max` subsets of a small set under
/// inclusion, closed under intersection.
pub fn random_meet_semilattice(rng: &mut impl Rng, max: usize) -> Poset {
    let width = 4u32;
    let full = (1u32 << width) - 1;
    let mut sets = vec![full];
    for _ in 0..8 * max {
        if sets.len() >= max {
            break;
        }
        let candidate: u32 = rng.gen_range(0..=full);
        let mut closed = sets.clone();
        let mut frontier = vec![candidate];
        while let Some(s) = frontier.pop() {
            if closed.contains(&s) {
                continue;
            }
            frontier.extend(closed.iter().map(|&t| t & s));
            closed.push(s);
        }
        if closed.len() <= max {
            sets = closed;
        }
    }
    sets.sort_by_key(|s| (std::cmp::Reverse(s.count_ones()), *s));
    let labels = sets
        .iter()
        .map(|s| format!("s{s:0w$b}", w = width as usize))
        .collect();
    Poset::from_fn(labels, |i, j| sets[i] & sets[j] == sets[i])
        .expect("inclusion is a partial order")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresheafMode {
    /// Subgroups of one group, shrinking upwards, linked by inclusion.
    Inclusion,
    /// Quotients of one group, linked by the natural projections.
    Quotient,
}

fn small_group(rng: &mut impl Rng, max_order: usize) -> FiniteGroup {
    let mut options: Vec<FiniteGroup> = FiniteGroup::small_catalogue()
        .into_iter()
        .filter(|g| g.order() <= max_order.max(1))
        .collect();
    if options.is_empty() {
        options.push(FiniteGroup::trivial());
    }
    options.swap_remove(rng.gen_range(0..options.len()))
}

/// A presheaf over `base` of groups of order at most `max_order`.
pub fn random_presheaf(
    rng: &mut impl Rng,
    base: Poset,
    max_order: usize,
    mode: PresheafMode,
) -> PresheafGroupoid {
    let k = small_group(rng, max_order);
    let order = base.linear_extension();
    let n = base.len();
    let mut groups = vec![FiniteGroup::trivial(); n];
    let mut linking = BTreeMap::new();
    match mode {
        PresheafMode::Inclusion => {
            let subgroups = k.subgroups();
            let mut chosen: Vec<Vec<usize>> = vec![Vec::new(); n];
            for &x in &order {
                let below: Vec<ObjectId> = base
                    .elements()
                    .filter(|&y| y != x && base.leq(y, x))
                    .collect();
                let fits: Vec<&Vec<usize>> = subgroups
                    .iter()
                    .filter(|s| {
                        below
                            .iter()
                            .all(|y| s.iter().all(|g| chosen[y.index()].contains(g)))
                    })
                    .collect();
                chosen[x.index()] = fits
                    .choose(rng)
                    .map(|s| (*s).clone())
                    .unwrap_or_else(|| vec![0]);
            }
            let mut embeds = Vec::with_capacity(n);
            for (x, set) in chosen.iter().enumerate() {
                let (sub, elems) = k.subgroup(set).expect("chosen from the subgroup list");
                groups[x] = sub;
                embeds.push(elems);
            }
            for x in base.elements() {
                for y in base.elements().filter(|&y| base.leq(y, x)) {
                    let map = embeds[x.index()]
                        .iter()
                        .map(|g| {
                            embeds[y.index()]
                                .binary_search(g)
                                .expect("subgroups shrink upwards")
                        })
                        .collect();
                    linking.insert((x, y), map);
                }
            }
        }
        PresheafMode::Quotient => {
            let normals = k.normal_subgroups();
            let mut chosen: Vec<Vec<usize>> = vec![Vec::new(); n];
            for &y in order.iter().rev() {
                let above: Vec<ObjectId> = base
                    .elements()
                    .filter(|&x| x != y && base.leq(y, x))
                    .collect();
                let fits: Vec<&Vec<usize>> = normals
                    .iter()
                    .filter(|s| {
                        above
                            .iter()
                            .all(|x| chosen[x.index()].iter().all(|g| s.contains(g)))
                    })
                    .collect();
                chosen[y.index()] = fits
                    .choose(rng)
                    .map(|s| (*s).clone())
                    .unwrap_or_else(|| (0..k.order()).collect());
            }
            let mut projections = Vec::with_capacity(n);
            for (x, set) in chosen.iter().enumerate() {
                let (q, proj) = k.quotient(set).expect("normal by construction");
                groups[x] = q;
                projections.push(proj);
            }
            for x in base.elements() {
                for y in base.elements().filter(|&y| base.leq(y, x)) {
                    let (px, py) = (&projections[x.index()], &projections[y.index()]);
                    let mut map = vec![0; groups[x.index()].order()];
                    for g in 0..k.order() {
                        map[px[g]] = py[g];
                    }
                    linking.insert((x, y), map);
                }
            }
        }
    }
    let spec = PresheafSpec {
        base,
        groups,
        linking,
    };
    presheaf_groupoid(spec).expect("presheaf built consistently")
}

/// Subgroups `S_x ≤ G_x` with `S_x α^x_y ⊆ S_y`, chosen top-down. With
/// `normal` each `S_x` is normal in `G_x`.
pub fn random_subpresheaf(
    rng: &mut impl Rng,
    g: &PresheafGroupoid,
    normal: bool,
) -> Vec<Vec<usize>> {
    let base = &g.spec.base;
    let mut chosen: Vec<Vec<usize>> = vec![Vec::new(); base.len()];
    for y in base.linear_extension().into_iter().rev() {
        let gy = &g.spec.groups[y.index()];
        let mut required = Vec::new();
        for x in base.elements().filter(|&x| x != y && base.leq(y, x)) {
            let link = g.spec.link(x, y).expect("linking map");
            required.extend(chosen[x.index()].iter().map(|&h| link[h]));
        }
        let pool = if normal {
            gy.normal_subgroups()
        } else {
            gy.subgroups()
        };
        let fits: Vec<&Vec<usize>> = pool
            .iter()
            .filter(|s| required.iter().all(|r| s.binary_search(r).is_ok()))
            .collect();
        chosen[y.index()] = (*fits.choose(rng).expect("the whole group always fits")).clone();
    }
    chosen
}

/// The sub-presheaf on the given subgroups and its inclusion, an immersion.
pub fn subpresheaf_inclusion(
    g: &PresheafGroupoid,
    subgroups: &[Vec<usize>],
) -> Result<(PresheafGroupoid, OrderedFunctor)> {
    let base = g.spec.base.clone();
    let mut groups = Vec::with_capacity(base.len());
    let mut embeds = Vec::with_capacity(base.len());
    for (x, set) in subgroups.iter().enumerate() {
        let (sub, elems) = g.spec.groups[x].subgroup(set)?;
        groups.push(sub);
        embeds.push(elems);
    }
    let mut linking = BTreeMap::new();
    for x in base.elements() {
        for y in base.elements().filter(|&y| base.leq(y, x)) {
            let link = g.spec.link(x, y).expect("linking map");
            let map = embeds[x.index()]
                .iter()
                .map(|&h| {
                    embeds[y.index()].binary_search(&link[h]).map_err(|_| {
                        crate::error::structural("subgroups are not compatible with linking")
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            linking.insert((x, y), map);
        }
    }
    let sub = presheaf_groupoid(PresheafSpec {
        base: base.clone(),
        groups,
        linking,
    })?;
    let inc = presheaf_morphism(&sub, g, &base.elements().collect::<Vec<_>>(), &embeds)?;
    Ok((sub, inc))
}

/// The presheaf of quotient groups `G_x / N_x` and the projection onto it.
pub fn quotient_presheaf(
    g: &PresheafGroupoid,
    normals: &[Vec<usize>],
) -> Result<(PresheafGroupoid, OrderedFunctor)> {
    let base = g.spec.base.clone();
    let mut groups = Vec::with_capacity(base.len());
    let mut projections = Vec::with_capacity(base.len());
    for (x, set) in normals.iter().enumerate() {
        let (q, proj) = g.spec.groups[x].quotient(set)?;
        groups.push(q);
        projections.push(proj);
    }
    let mut linking = BTreeMap::new();
    for x in base.elements() {
        for y in base.elements().filter(|&y| base.leq(y, x)) {
            let link = g.spec.link(x, y).expect("linking map");
            let mut map = vec![0; groups[x.index()].order()];
            for (h, &c) in projections[x.index()].iter().enumerate() {
                map[c] = projections[y.index()][link[h]];
            }
            linking.insert((x, y), map);
        }
    }
    let q = presheaf_groupoid(PresheafSpec {
        base: base.clone(),
        groups,
        linking,
    })?;
    let proj = presheaf_morphism(g, &q, &base.elements().collect::<Vec<_>>(), &projections)?;
    Ok((q, proj))
}

/// The normal subgroupoid of a presheaf given by normal subgroups `N_x`.
pub fn presheaf_normal(g: &PresheafGroupoid, normals: &[Vec<usize>]) -> Result<NormalSubgroupoid> {
    let arrows: Vec<ArrowId> = normals
        .iter()
        .enumerate()
        .flat_map(|(x, set)| set.iter().map(move |&h| g.arrow(ObjectId::new(x), h)))
        .collect();
    NormalSubgroupoid::new(crate::subgroupoid::Subgroupoid::from_arrows(
        g.groupoid.clone(),
        &arrows,
        false,
    )?)
}

/// A poset action of a presheaf groupoid on right cosets `S_x g`, with
/// `S_x g ≥ S_y (gα^x_y)`.
pub fn random_coset_action(rng: &mut impl Rng, g: &PresheafGroupoid) -> Result<GroupoidAction> {
    let subs = random_subpresheaf(rng, g, false);
    let base = &g.spec.base;
    // (fibre, coset index) with a class table per fibre
    let mut elements: Vec<(ObjectId, usize)> = Vec::new();
    let mut coset_of: Vec<Vec<usize>> = Vec::with_capacity(base.len());
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(base.len());
    let mut offset = Vec::with_capacity(base.len());
    for x in base.elements() {
        let gx = &g.spec.groups[x.index()];
        let s = &subs[x.index()];
        let mut class = vec![usize::MAX; gx.order()];
        let mut r = Vec::new();
        for h in 0..gx.order() {
            if class[h] == usize::MAX {
                for &t in s {
                    class[gx.mul(t, h)] = r.len();
                }
                r.push(h);
            }
        }
        offset.push(elements.len());
        elements.extend((0..r.len()).map(|c| (x, c)));
        coset_of.push(class);
        reps.push(r);
    }
    let labels = elements
        .iter()
        .map(|&(x, c)| {
            let gx = &g.spec.groups[x.index()];
            format!("S{}@{}", gx.name(reps[x.index()][c]), base.label(x))
        })
        .collect();
    let poset = Poset::from_fn(labels, |i, j| {
        let ((y, c), (x, d)) = (elements[i], elements[j]);
        if !base.leq(y, x) {
            return false;
        }
        let link = g.spec.link(x, y).expect("linking map");
        coset_of[y.index()][link[reps[x.index()][d]]] == c
    })?;
    let omega = elements.iter().map(|e| e.0).collect();
    GroupoidAction::on_poset(g.groupoid.clone(), poset, omega, |p, arrow| {
        let (x, c) = elements[p.index()];
        let (_, h) = g.coordinates(arrow);
        let gx = &g.spec.groups[x.index()];
        ObjectId::new(offset[x.index()] + coset_of[x.index()][gx.mul(reps[x.index()][c], h)])
    })
}

/// The covering `G ⋉ X → G` of a random coset action.
pub fn random_covering(rng: &mut impl Rng, g: &PresheafGroupoid) -> Result<OrderedFunctor> {
    let action = random_coset_action(rng, g)?;
    Ok(semidirect_product(&action)?.projection().clone())
}

/// An inductive groupoid: a presheaf over a random meet-semilattice.
pub fn random_inductive(
    rng: &mut impl Rng,
    max_objects: usize,
    max_order: usize,
) -> PresheafGroupoid {
    let base = random_meet_semilattice(rng, max_objects);
    let mode = if rng.gen_bool(0.5) {
        PresheafMode::Inclusion
    } else {
        PresheafMode::Quotient
    };
    random_presheaf(rng, base, max_order, mode)
}

/// A normal subgroupoid generated by up to `seeds` random non-identity arrows.
pub fn random_normal(
    rng: &mut impl Rng,
    g: &Arc<OrderedGroupoid>,
    seeds: usize,
) -> Result<NormalSubgroupoid> {
    let pool: Vec<ArrowId> = g.arrows().filter(|&u| !g.is_identity(u)).collect();
    let count = if pool.is_empty() {
        0
    } else {
        rng.gen_range(0..=seeds)
    };
    let picks: Vec<ArrowId> = (0..count)
        .map(|_| pool[rng.gen_range(0..pool.len())])
        .collect();
    normal_closure(g, &picks)
}

/// Sizes and switches for [`random_instance`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomParams {
    pub objects: usize,
    pub density: f64,
    pub max_group_order: usize,
    pub with_interval: bool,
    pub quotiented: bool,
    pub with_functor: bool,
    pub with_normal: bool,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            objects: 3,
            density: 0.4,
            max_group_order: 4,
            with_interval: false,
            quotiented: false,
            with_functor: true,
            with_normal: true,
        }
    }
}

impl RandomParams {
    pub fn minimal() -> Self {
        RandomParams {
            objects: 1,
            density: 0.0,
            max_group_order: 1,
            with_interval: false,
            quotiented: false,
            with_functor: false,
            with_normal: false,
        }
    }
}

/// One generated structure. The functor, when present, has the groupoid as
/// its source or, for a covering, as its target.
#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub groupoid: Arc<OrderedGroupoid>,
    pub functor: Option<OrderedFunctor>,
    pub normal: Option<NormalSubgroupoid>,
}

/// Deterministic in `seed` and `params`.
pub fn random_instance(seed: u64, params: RandomParams) -> Result<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = random_poset(&mut rng, params.objects.max(1), params.density);
    let mode = if rng.gen_bool(0.5) {
        PresheafMode::Inclusion
    } else {
        PresheafMode::Quotient
    };
    let presheaf = random_presheaf(&mut rng, base, params.max_group_order, mode);
    let mut plain = true;
    let mut groupoid = presheaf.groupoid.clone();
    if params.with_interval {
        groupoid = Arc::new(product(&groupoid, &interval()));
        plain = false;
    }
    if params.quotiented {
        let normal = random_normal(&mut rng, &groupoid, 2)?;
        groupoid = quotient(&normal)?.groupoid().clone();
        plain = false;
    }
    let functor = if !params.with_functor {
        None
    } else if plain {
        let f = match rng.gen_range(0..3) {
            0 => quotient_presheaf(&presheaf, &random_subpresheaf(&mut rng, &presheaf, true))?.1,
            1 => {
                subpresheaf_inclusion(&presheaf, &random_subpresheaf(&mut rng, &presheaf, false))?.1
            }
            _ => random_covering(&mut rng, &presheaf)?,
        };
        Some(f)
    } else {
        let normal = random_normal(&mut rng, &groupoid, 2)?;
        Some(quotient(&normal)?.projection().clone())
    };
    let normal = if params.with_normal {
        Some(random_normal(&mut rng, &groupoid, 2)?)
    } else {
        None
    };
    Ok(RandomInstance {
        groupoid,
        functor,
        normal,
    })
}

/// A random ordered functor between two small random groupoids, found by
/// shuffled search. Retries with fresh targets until one is found.
pub fn random_functor_pair(
    rng: &mut ChaCha8Rng,
    params: RandomParams,
    budget: Budget,
) -> Result<OrderedFunctor> {
    loop {
        let a = random_instance(
            rng.gen(),
            RandomParams {
                with_functor: false,
                with_normal: false,
                ..params
            },
        )?
        .groupoid;
        let b = random_instance(
            rng.gen(),
            RandomParams {
                with_functor: false,
                with_normal: false,
                ..params
            },
        )?
        .groupoid;
        match random_functor(&a, &b, rng, budget) {
            Ok(Some(f)) => return Ok(f),
            Ok(None) | Err(crate::error::Error::BudgetExceeded { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::{star_class, validate_functor};
    use crate::groupoid::validate_ogpd;

    #[test]
    fn minimal_is_trivial() {
        let r = random_instance(0, RandomParams::minimal()).unwrap();
        assert_eq!(r.groupoid.num_arrows(), 1);
        assert!(r.functor.is_none());
    }

    #[test]
    fn reproducible() {
        let p = RandomParams::default();
        for seed in 0..5 {
            let a = random_instance(seed, p).unwrap();
            let b = random_instance(seed, p).unwrap();
            assert_eq!(a.groupoid.to_raw(), b.groupoid.to_raw());
            assert_eq!(
                a.functor.map(|f| f.map().to_vec()),
                b.functor.map(|f| f.map().to_vec())
            );
        }
    }

    #[test]
    fn generated_structures_validate() {
        for seed in 0..30 {
            let p = RandomParams {
                with_interval: seed % 3 == 0,
                quotiented: seed % 4 == 1,
                ..RandomParams::default()
            };
            let r = random_instance(seed, p).unwrap();
            assert!(validate_ogpd(&r.groupoid.to_raw()).unwrap().passed());
            if let Some(f) = r.functor {
                let report = validate_functor(f.source(), f.target(), f.map()).unwrap();
                assert!(report.passed());
            }
        }
    }

    #[test]
    fn semilattice_is_meet_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            assert!(random_meet_semilattice(&mut rng, 6).is_meet_semilattice());
        }
    }

    #[test]
    fn coverings_and_inclusions_classify() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let base = random_poset(&mut rng, 3, 0.5);
            let g = random_presheaf(&mut rng, base, 8, PresheafMode::Inclusion);
            assert!(star_class(&random_covering(&mut rng, &g).unwrap()).is_covering());
            let subs = random_subpresheaf(&mut rng, &g, false);
            assert!(star_class(&subpresheaf_inclusion(&g, &subs).unwrap().1).is_immersion());
            let normals = random_subpresheaf(&mut rng, &g, true);
            presheaf_normal(&g, &normals).unwrap();
            assert!(star_class(&quotient_presheaf(&g, &normals).unwrap().1).is_fibration());
        }
    }
}
