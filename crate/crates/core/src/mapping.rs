//! The mapping groupoid `OGPD(A, B)` and the exponential law.
//!
//! Objects are ordered functors `A → B`; arrows are ordered natural
//! transformations. Functors are ordered arrowwise and transformations by
//! their endpoints together with their components.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{domain, structural, Result};
use crate::functor::{same, NaturalTransformation, OrderedFunctor};
use crate::groupoid::{product, OrderedGroupoid, RawGroupoid};
use crate::ids::{ArrowId, ObjectId};
use crate::relation::BitMatrix;
use crate::search::{enumerate_functors, monotone_selections, Budget};

/// A transformation in coordinates: indices of its endpoint functors and
/// its components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transformation {
    pub from: ObjectId,
    pub to: ObjectId,
    pub components: Vec<ArrowId>,
}

#[derive(Clone, Debug)]
pub struct MappingGroupoid {
    pub source: Arc<OrderedGroupoid>,
    pub target: Arc<OrderedGroupoid>,
    pub groupoid: Arc<OrderedGroupoid>,
    functors: Vec<OrderedFunctor>,
    transformations: Vec<Transformation>,
    functor_index: HashMap<Vec<ArrowId>, ObjectId>,
    arrow_index: HashMap<(ObjectId, Vec<ArrowId>), ArrowId>,
}

impl MappingGroupoid {
    pub fn functors(&self) -> &[OrderedFunctor] {
        &self.functors
    }

    pub fn functor(&self, x: ObjectId) -> &OrderedFunctor {
        &self.functors[x.index()]
    }

    pub fn transformation(&self, a: ArrowId) -> &Transformation {
        &self.transformations[a.index()]
    }

    pub fn transformations(&self) -> &[Transformation] {
        &self.transformations
    }

    pub fn object_of(&self, f: &OrderedFunctor) -> Option<ObjectId> {
        if !same(f.source(), &self.source) || !same(f.target(), &self.target) {
            return None;
        }
        self.object_of_map(f.map())
    }

    pub fn object_of_map(&self, map: &[ArrowId]) -> Option<ObjectId> {
        self.functor_index.get(map).copied()
    }

    pub fn arrow_of(&self, from: ObjectId, components: &[ArrowId]) -> Option<ArrowId> {
        self.arrow_index.get(&(from, components.to_vec())).copied()
    }

    pub fn natural(&self, a: ArrowId) -> NaturalTransformation {
        let t = &self.transformations[a.index()];
        NaturalTransformation {
            from: self.functors[t.from.index()].clone(),
            to: self.functors[t.to.index()].clone(),
            components: t.components.clone(),
        }
    }
}

/// Builds `OGPD(A, B)` by enumerating functors and, for each functor `f`,
/// the monotone selections `xτ ∈ star_B(xf)`; the target functor of `τ` is
/// `a ↦ (xτ)⁻¹ (af) (yτ)`.
pub fn mapping_groupoid(
    a: &Arc<OrderedGroupoid>,
    b: &Arc<OrderedGroupoid>,
    budget: Budget,
) -> Result<MappingGroupoid> {
    let functors = enumerate_functors(a, b, budget)?;
    let functor_index: HashMap<Vec<ArrowId>, ObjectId> = functors
        .iter()
        .enumerate()
        .map(|(i, f)| (f.map().to_vec(), ObjectId::new(i)))
        .collect();
    let order = a.objects().linear_extension();
    let mut transformations = Vec::new();
    let mut arrow_index = HashMap::new();
    // identities first, in functor order
    for (i, f) in functors.iter().enumerate() {
        let components: Vec<ArrowId> = a
            .object_ids()
            .map(|x| b.identity(f.apply_object(x)))
            .collect();
        let x = ObjectId::new(i);
        arrow_index.insert((x, components.clone()), ArrowId::new(transformations.len()));
        transformations.push(Transformation {
            from: x,
            to: x,
            components,
        });
    }
    for (i, f) in functors.iter().enumerate() {
        let candidates: Vec<Vec<ArrowId>> = a
            .object_ids()
            .map(|x| b.star(f.apply_object(x)).to_vec())
            .collect();
        let sels = monotone_selections(
            &order,
            &|x, y| a.object_leq(x, y),
            &candidates,
            &|s, t| b.leq(s, t),
            budget,
            None,
        )?;
        for comps in sels {
            let from = ObjectId::new(i);
            if arrow_index.contains_key(&(from, comps.clone())) {
                continue;
            }
            let to_map: Vec<ArrowId> = a
                .arrows()
                .map(|u| {
                    let inv = b.inverse(comps[a.dom(u).index()]);
                    b.compose_path(&[inv, f.apply(u), comps[a.cod(u).index()]])
                        .expect("conjugate is defined")
                })
                .collect();
            let to = *functor_index.get(&to_map).ok_or_else(|| {
                structural("conjugate of a functor is missing from the enumeration")
            })?;
            arrow_index.insert((from, comps.clone()), ArrowId::new(transformations.len()));
            transformations.push(Transformation {
                from,
                to,
                components: comps,
            });
        }
    }
    let n_obj = functors.len();
    let functor_leq = |i: usize, j: usize| {
        let (f, g) = (&functors[i], &functors[j]);
        a.arrows().all(|u| b.leq(f.apply(u), g.apply(u)))
    };
    let object_leq = BitMatrix::from_fn(n_obj, functor_leq);
    let labels: Vec<String> = (0..transformations.len())
        .map(|k| {
            if k < n_obj {
                format!("id:F{k}")
            } else {
                format!("T{k}")
            }
        })
        .collect();
    let tr = &transformations;
    let raw = RawGroupoid::from_parts(
        (0..n_obj).map(|i| format!("F{i}")).collect(),
        object_leq.clone(),
        labels,
        tr.iter().map(|t| t.from).collect(),
        tr.iter().map(|t| t.to).collect(),
        (0..n_obj).map(ArrowId::new).collect(),
        tr.iter()
            .map(|t| {
                let comps: Vec<ArrowId> = t.components.iter().map(|&c| b.inverse(c)).collect();
                arrow_index[&(t.to, comps)]
            })
            .collect(),
        |s, t| {
            let (s, t) = (&tr[s.index()], &tr[t.index()]);
            let comps: Vec<ArrowId> = s
                .components
                .iter()
                .zip(&t.components)
                .map(|(&c, &d)| b.compose(c, d).expect("components compose"))
                .collect();
            arrow_index[&(s.from, comps)]
        },
        |s, t| {
            let (s, t) = (&tr[s], &tr[t]);
            object_leq.get(s.from.index(), t.from.index())
                && object_leq.get(s.to.index(), t.to.index())
                && s.components
                    .iter()
                    .zip(&t.components)
                    .all(|(&c, &d)| b.leq(c, d))
        },
    );
    let groupoid = Arc::new(OrderedGroupoid::new(raw)?);
    Ok(MappingGroupoid {
        source: a.clone(),
        target: b.clone(),
        groupoid,
        functors,
        transformations,
        functor_index,
        arrow_index,
    })
}

/// Transposes `F: A × B → C` to `B → OGPD(A, C)`: an object `y` goes to
/// `a ↦ (a, y)F` and an arrow `b` to the transformation with components
/// `(x, b)F`.
pub fn curry(
    big_f: &OrderedFunctor,
    a: &Arc<OrderedGroupoid>,
    b: &Arc<OrderedGroupoid>,
    m: &MappingGroupoid,
) -> Result<OrderedFunctor> {
    check_product_source(big_f, a, b)?;
    if !same(&m.source, a) || !same(&m.target, big_f.target()) {
        return Err(domain("mapping groupoid does not match the functor"));
    }
    let nb = b.num_arrows();
    let at = |u: ArrowId, v: ArrowId| big_f.apply(ArrowId::new(u.index() * nb + v.index()));
    let mut map = Vec::with_capacity(nb);
    for v in b.arrows() {
        let from_map: Vec<ArrowId> = a.arrows().map(|u| at(u, b.identity(b.dom(v)))).collect();
        let from = m
            .object_of_map(&from_map)
            .ok_or_else(|| structural("curried functor missing from the mapping groupoid"))?;
        let comps: Vec<ArrowId> = a.object_ids().map(|x| at(a.identity(x), v)).collect();
        let arrow = m.arrow_of(from, &comps).ok_or_else(|| {
            structural("curried transformation missing from the mapping groupoid")
        })?;
        map.push(arrow);
    }
    OrderedFunctor::new(b.clone(), m.groupoid.clone(), map)
}

/// Inverse of [`curry`]: `(a, b)F = (a f_{b𝐝}) · (component of bΦ at a𝐫)`.
pub fn uncurry(
    phi: &OrderedFunctor,
    a: &Arc<OrderedGroupoid>,
    m: &MappingGroupoid,
) -> Result<OrderedFunctor> {
    if !same(phi.target(), &m.groupoid) || !same(&m.source, a) {
        return Err(domain("functor does not land in the mapping groupoid"));
    }
    let b = phi.source();
    let c = &m.target;
    let ab = Arc::new(product(a, b));
    let mut map = Vec::with_capacity(ab.num_arrows());
    for u in a.arrows() {
        for v in b.arrows() {
            let f = m.functor(phi.apply_object(b.dom(v)));
            let comp = m.transformation(phi.apply(v)).components[a.cod(u).index()];
            map.push(c.compose(f.apply(u), comp).expect("endpoints agree"));
        }
    }
    OrderedFunctor::new(ab, c.clone(), map)
}

fn check_product_source(
    big_f: &OrderedFunctor,
    a: &OrderedGroupoid,
    b: &OrderedGroupoid,
) -> Result<()> {
    if **big_f.source() != product(a, b) {
        return Err(domain(
            "functor source is not the product of the given groupoids",
        ));
    }
    Ok(())
}

/// `p_*: OGPD(T, G) → OGPD(T, H)` given by composition with `p`.
pub fn post_compose(
    p: &OrderedFunctor,
    t: &Arc<OrderedGroupoid>,
    budget: Budget,
) -> Result<(MappingGroupoid, MappingGroupoid, OrderedFunctor)> {
    let mg = mapping_groupoid(t, p.source(), budget)?;
    let mh = mapping_groupoid(t, p.target(), budget)?;
    let map = post_compose_between(p, &mg, &mh)?;
    Ok((mg, mh, map))
}

pub fn post_compose_between(
    p: &OrderedFunctor,
    mg: &MappingGroupoid,
    mh: &MappingGroupoid,
) -> Result<OrderedFunctor> {
    if !same(&mg.target, p.source())
        || !same(&mh.target, p.target())
        || !same(&mg.source, &mh.source)
    {
        return Err(domain("mapping groupoids do not match p"));
    }
    let mut map = Vec::with_capacity(mg.groupoid.num_arrows());
    for t in mg.transformations() {
        let f = mg.functor(t.from);
        let fp: Vec<ArrowId> = f.map().iter().map(|&u| p.apply(u)).collect();
        let from = mh
            .object_of_map(&fp)
            .ok_or_else(|| structural("composite functor missing"))?;
        let comps: Vec<ArrowId> = t.components.iter().map(|&c| p.apply(c)).collect();
        map.push(
            mh.arrow_of(from, &comps)
                .ok_or_else(|| structural("composite transformation missing"))?,
        );
    }
    OrderedFunctor::new(mg.groupoid.clone(), mh.groupoid.clone(), map)
}
