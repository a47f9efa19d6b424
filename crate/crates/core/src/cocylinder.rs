//! The mapping groupoid `OGPD(𝓘, H)` as triples, the mapping cocylinder
//! `M^φ`, the derived groupoid `Der(φ)` and the factorization of `φ` as an
//! enlargement followed by a strong fibration.

use std::collections::HashMap;
use std::sync::Arc;

use rand::RngCore;

use crate::action::{
    lift_sdp_projection, semidirect_product, GroupoidAction, RawAction, SemidirectProduct,
};
use crate::builders::basic::{INTERVAL_ID0, INTERVAL_ID1, IOTA, IOTA_INV};
use crate::enlargement::{is_enlargement, EnlargementWitness};
use crate::error::{breach, domain, Result};
use crate::functor::{star_class, OrderedFunctor};
use crate::groupoid::{OrderedGroupoid, RawGroupoid};
use crate::homotopy::{
    check_square_for, cylinder_arrow, omega_poset, random_square, CertifiedFibration,
    HomotopySquare, ImmersionFactor,
};
use crate::ids::{ArrowId, ObjectId};
use crate::mapping::MappingGroupoid;
use crate::quotient::{factorize, Factorization};
use crate::relation::BitMatrix;
use crate::search::Budget;
use crate::subgroupoid::Subgroupoid;

fn index_of<T: std::hash::Hash + Eq + Copy>(items: &[T]) -> HashMap<T, ArrowId> {
    items
        .iter()
        .enumerate()
        .map(|(i, &t)| (t, ArrowId::new(i)))
        .collect()
}

/// `OGPD(𝓘, H)`: objects are the arrows of `H`, arrows are triples
/// `[h0, t, h1]` with `h0⁻¹th1` defined.
#[derive(Clone, Debug)]
pub struct IntervalMappingGroupoid {
    h: Arc<OrderedGroupoid>,
    groupoid: Arc<OrderedGroupoid>,
    triples: Vec<(ArrowId, ArrowId, ArrowId)>,
    index: HashMap<(ArrowId, ArrowId, ArrowId), ArrowId>,
    eps0: OrderedFunctor,
    eps1: OrderedFunctor,
}

impl IntervalMappingGroupoid {
    pub fn base(&self) -> &Arc<OrderedGroupoid> {
        &self.h
    }
    pub fn groupoid(&self) -> &Arc<OrderedGroupoid> {
        &self.groupoid
    }
    pub fn triple(&self, a: ArrowId) -> (ArrowId, ArrowId, ArrowId) {
        self.triples[a.index()]
    }
    pub fn arrow_of(&self, h0: ArrowId, t: ArrowId, h1: ArrowId) -> Option<ArrowId> {
        self.index.get(&(h0, t, h1)).copied()
    }
    /// `[h0, t, h1] ↦ t`.
    pub fn eps0(&self) -> &OrderedFunctor {
        &self.eps0
    }
    /// `[h0, t, h1] ↦ h0⁻¹th1`.
    pub fn eps1(&self) -> &OrderedFunctor {
        &self.eps1
    }

    /// The isomorphism onto the searched mapping groupoid `OGPD(𝓘, H)`,
    /// sending `[h0, t, h1]` to the transformation with components
    /// `t` and `h0⁻¹th1`.
    pub fn to_mapping_groupoid(&self, m: &MappingGroupoid) -> Result<OrderedFunctor> {
        let h = &self.h;
        let mut map = Vec::with_capacity(self.triples.len());
        for &(h0, t, h1) in &self.triples {
            let functor_of = |x: ArrowId| {
                let mut img = vec![ArrowId(0); 4];
                img[INTERVAL_ID0.index()] = h.identity(h.dom(x));
                img[INTERVAL_ID1.index()] = h.identity(h.cod(x));
                img[IOTA.index()] = x;
                img[IOTA_INV.index()] = h.inverse(x);
                img
            };
            let from = m
                .object_of_map(&functor_of(h0))
                .ok_or_else(|| breach("h0 is not an object of the mapping groupoid"))?;
            let t1 = h
                .compose_path(&[h.inverse(h0), t, h1])
                .expect("triple condition");
            map.push(
                m.arrow_of(from, &[t, t1])
                    .ok_or_else(|| breach("triple is not a natural transformation"))?,
            );
        }
        let iso = OrderedFunctor::new(self.groupoid.clone(), m.groupoid.clone(), map)?;
        if !iso.is_bijective() || !iso.is_ordered_embedding() {
            return Err(breach(
                "triple model is not isomorphic to the mapping groupoid",
            ));
        }
        Ok(iso)
    }
}

pub fn interval_mapping_groupoid(h: &Arc<OrderedGroupoid>) -> Result<IntervalMappingGroupoid> {
    let mut triples = Vec::new();
    for h0 in h.arrows() {
        for &t in h.star(h.dom(h0)) {
            for &h1 in h.star(h.cod(t)) {
                triples.push((h0, t, h1));
            }
        }
    }
    let index = index_of(&triples);
    let objects = omega_poset(h);
    let labels = triples
        .iter()
        .map(|&(a, b, c)| format!("[{},{},{}]", h.label(a), h.label(b), h.label(c)))
        .collect();
    let identity: Vec<ArrowId> = h
        .arrows()
        .map(|x| index[&(x, h.identity(h.dom(x)), x)])
        .collect();
    let raw = RawGroupoid::from_parts(
        objects.labels().to_vec(),
        objects.relation().clone(),
        labels,
        triples.iter().map(|t| ObjectId::new(t.0.index())).collect(),
        triples.iter().map(|t| ObjectId::new(t.2.index())).collect(),
        identity,
        triples
            .iter()
            .map(|&(a, t, c)| index[&(c, h.inverse(t), a)])
            .collect(),
        |u, v| {
            let (a, t, _) = triples[u.index()];
            let (_, s, c) = triples[v.index()];
            index[&(a, h.compose(t, s).expect("composable"), c)]
        },
        |i, j| {
            let (a, t, c) = triples[i];
            let (b, s, d) = triples[j];
            h.leq(a, b) && h.leq(t, s) && h.leq(c, d)
        },
    );
    let groupoid = Arc::new(
        OrderedGroupoid::new(raw).map_err(|e| breach(format!("OGPD(𝓘, H) is not ordered: {e}")))?,
    );
    let eps0 = OrderedFunctor::new(
        groupoid.clone(),
        h.clone(),
        triples.iter().map(|t| t.1).collect(),
    )?;
    let eps1 = OrderedFunctor::new(
        groupoid.clone(),
        h.clone(),
        triples
            .iter()
            .map(|&(a, t, c)| {
                h.compose_path(&[h.inverse(a), t, c])
                    .expect("triple condition")
            })
            .collect(),
    )?;
    Ok(IntervalMappingGroupoid {
        h: h.clone(),
        groupoid,
        triples,
        index,
        eps0,
        eps1,
    })
}

/// `ε₀` with the lift `(a, ι)F̃ = [h_x, t_a l_y, l_y𝐫]`.
pub struct Eps0<'a>(pub &'a IntervalMappingGroupoid);
/// `ε₁` with the lift `(a, ι)F̃ = [h_x, t_a, h_y l_y]`.
pub struct Eps1<'a>(pub &'a IntervalMappingGroupoid);

impl CertifiedFibration for Eps0<'_> {
    fn functor(&self) -> &OrderedFunctor {
        &self.0.eps0
    }

    fn lift(&self, sq: &HomotopySquare) -> Result<OrderedFunctor> {
        check_square_for(sq, &self.0.eps0, "ε₀")?;
        let m = self.0;
        let h = &m.h;
        let sel = sq
            .a()
            .object_ids()
            .map(|x| {
                let hx = ArrowId::new(sq.f().apply_object(x).index());
                let l = sq.iota_image(x);
                m.arrow_of(hx, l, h.identity(h.cod(l)))
                    .ok_or_else(|| breach("[h_x, l_x, l_x𝐫] is not a triple"))
            })
            .collect::<Result<Vec<_>>>()?;
        sq.lift_from_selection(&sel)
    }
}

impl CertifiedFibration for Eps1<'_> {
    fn functor(&self) -> &OrderedFunctor {
        &self.0.eps1
    }

    fn lift(&self, sq: &HomotopySquare) -> Result<OrderedFunctor> {
        check_square_for(sq, &self.0.eps1, "ε₁")?;
        let m = self.0;
        let h = &m.h;
        let sel = sq
            .a()
            .object_ids()
            .map(|y| {
                let hy = ArrowId::new(sq.f().apply_object(y).index());
                let l = sq.iota_image(y);
                let hl = h
                    .compose(hy, l)
                    .ok_or_else(|| breach("h_y l_y is not composable"))?;
                m.arrow_of(hy, h.identity(h.dom(hy)), hl)
                    .ok_or_else(|| breach("[h_y, h_y𝐝, h_y l_y] is not a triple"))
            })
            .collect::<Result<Vec<_>>>()?;
        sq.lift_from_selection(&sel)
    }
}

pub fn lift_eps(
    m: &IntervalMappingGroupoid,
    which: u8,
    sq: &HomotopySquare,
) -> Result<OrderedFunctor> {
    match which {
        0 => Eps0(m).lift(sq),
        1 => Eps1(m).lift(sq),
        _ => Err(domain("ε index must be 0 or 1")),
    }
}

/// `M^φ` with `i_φ`, `p_φ` and `q_φ`.
#[derive(Clone, Debug)]
pub struct MappingCocylinder {
    phi: OrderedFunctor,
    groupoid: Arc<OrderedGroupoid>,
    objects: Vec<(ObjectId, ArrowId)>,
    triples: Vec<(ArrowId, ArrowId, ArrowId)>,
    index: HashMap<(ArrowId, ArrowId, ArrowId), ArrowId>,
    i_phi: OrderedFunctor,
    p_phi: OrderedFunctor,
    q_phi: OrderedFunctor,
}

impl MappingCocylinder {
    pub fn phi(&self) -> &OrderedFunctor {
        &self.phi
    }
    pub fn groupoid(&self) -> &Arc<OrderedGroupoid> {
        &self.groupoid
    }
    /// Object `(e, h)` with `eφ = h𝐝`.
    pub fn object(&self, x: ObjectId) -> (ObjectId, ArrowId) {
        self.objects[x.index()]
    }
    pub fn objects(&self) -> &[(ObjectId, ArrowId)] {
        &self.objects
    }
    /// Arrow `⟨h0, a, h1⟩`.
    pub fn triple(&self, u: ArrowId) -> (ArrowId, ArrowId, ArrowId) {
        self.triples[u.index()]
    }
    pub fn arrow_of(&self, h0: ArrowId, a: ArrowId, h1: ArrowId) -> Option<ArrowId> {
        self.index.get(&(h0, a, h1)).copied()
    }
    pub fn i_phi(&self) -> &OrderedFunctor {
        &self.i_phi
    }
    pub fn p_phi(&self) -> &OrderedFunctor {
        &self.p_phi
    }
    pub fn q_phi(&self) -> &OrderedFunctor {
        &self.q_phi
    }
}

pub fn mapping_cocylinder(phi: &OrderedFunctor) -> Result<MappingCocylinder> {
    let (g, h) = (phi.source().clone(), phi.target().clone());
    let mut objects = Vec::new();
    for e in g.object_ids() {
        for &k in h.star(phi.apply_object(e)) {
            objects.push((e, k));
        }
    }
    let obj_index: HashMap<(ObjectId, ArrowId), usize> =
        objects.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut triples = Vec::new();
    for a in g.arrows() {
        for &h0 in h.star(phi.apply_object(g.dom(a))) {
            for &h1 in h.star(phi.apply_object(g.cod(a))) {
                triples.push((h0, a, h1));
            }
        }
    }
    let index = index_of(&triples);
    let object_leq = BitMatrix::from_fn(objects.len(), |i, j| {
        let ((e, k), (f, l)) = (objects[i], objects[j]);
        g.object_leq(e, f) && h.leq(k, l)
    });
    let object_labels = objects
        .iter()
        .map(|&(e, k)| format!("({},{})", g.object_label(e), h.label(k)))
        .collect();
    let labels = triples
        .iter()
        .map(|&(a, b, c)| format!("⟨{},{},{}⟩", h.label(a), g.label(b), h.label(c)))
        .collect();
    let dom = triples
        .iter()
        .map(|&(h0, a, _)| ObjectId::new(obj_index[&(g.dom(a), h0)]))
        .collect();
    let cod = triples
        .iter()
        .map(|&(_, a, h1)| ObjectId::new(obj_index[&(g.cod(a), h1)]))
        .collect();
    let identity = objects
        .iter()
        .map(|&(e, k)| index[&(k, g.identity(e), k)])
        .collect();
    let inverse = triples
        .iter()
        .map(|&(h0, a, h1)| index[&(h1, g.inverse(a), h0)])
        .collect();
    let raw = RawGroupoid::from_parts(
        object_labels,
        object_leq,
        labels,
        dom,
        cod,
        identity,
        inverse,
        |u, v| {
            let (h0, a, _) = triples[u.index()];
            let (_, b, k1) = triples[v.index()];
            index[&(h0, g.compose(a, b).expect("composable"), k1)]
        },
        |i, j| {
            let (a0, a, a1) = triples[i];
            let (b0, b, b1) = triples[j];
            h.leq(a0, b0) && g.leq(a, b) && h.leq(a1, b1)
        },
    );
    let m = Arc::new(
        OrderedGroupoid::new(raw).map_err(|e| breach(format!("M^φ is not ordered: {e}")))?,
    );
    let ident = |e: ObjectId| h.identity(phi.apply_object(e));
    let i_phi = OrderedFunctor::new(
        g.clone(),
        m.clone(),
        g.arrows()
            .map(|a| index[&(ident(g.dom(a)), a, ident(g.cod(a)))])
            .collect(),
    )
    .map_err(|e| breach(format!("i_φ is not an ordered functor: {e}")))?;
    let p_phi = OrderedFunctor::new(
        m.clone(),
        h.clone(),
        triples
            .iter()
            .map(|&(h0, a, h1)| {
                h.compose_path(&[h.inverse(h0), phi.apply(a), h1])
                    .expect("cocylinder condition")
            })
            .collect(),
    )
    .map_err(|e| breach(format!("p_φ is not an ordered functor: {e}")))?;
    let q_phi = OrderedFunctor::new(m.clone(), g.clone(), triples.iter().map(|t| t.1).collect())
        .map_err(|e| breach(format!("q_φ is not an ordered functor: {e}")))?;
    if i_phi.then(&p_phi)?.map() != phi.map() {
        return Err(breach("φ ≠ i_φ p_φ"));
    }
    Ok(MappingCocylinder {
        phi: phi.clone(),
        groupoid: m,
        objects,
        triples,
        index,
        i_phi,
        p_phi,
        q_phi,
    })
}

/// `p_φ` with the lift `(a, ι)F̃ = ⟨h_a, g_a, k_a l_{a𝐫}⟩`.
pub struct PPhi<'a>(pub &'a MappingCocylinder);

impl CertifiedFibration for PPhi<'_> {
    fn functor(&self) -> &OrderedFunctor {
        &self.0.p_phi
    }

    fn lift(&self, sq: &HomotopySquare) -> Result<OrderedFunctor> {
        let m = self.0;
        check_square_for(sq, &m.p_phi, "p_φ")?;
        let h = m.phi.target();
        let a = sq.a();
        let formula = |u: ArrowId| -> Result<ArrowId> {
            let (ha, ga, ka) = m.triple(sq.f().apply(u));
            let l = sq.iota_image(a.cod(u));
            if h.dom(l) != h.cod(ka) {
                return Err(breach("l_{a𝐫}𝐝 ≠ k_a𝐫"));
            }
            let kl = h.compose(ka, l).expect("checked above");
            m.arrow_of(ha, ga, kl)
                .ok_or_else(|| breach("⟨h_a, g_a, k_a l⟩ is not in M^φ"))
        };
        let sel = a
            .object_ids()
            .map(|x| formula(a.identity(x)))
            .collect::<Result<Vec<_>>>()?;
        let lift = sq.lift_from_selection(&sel)?;
        for u in a.arrows() {
            if lift.apply(cylinder_arrow(u, IOTA)) != formula(u)? {
                return Err(breach("lift disagrees with the closed formula"));
            }
        }
        Ok(lift)
    }
}

pub fn lift_p_phi(m: &MappingCocylinder, sq: &HomotopySquare) -> Result<OrderedFunctor> {
    PPhi(m).lift(sq)
}

/// `q_φ`, lifted through the pullback of `ε₀`: `g_x = ⟨h, l_x, (l_x𝐫)φ⟩`.
pub struct QPhi<'a>(pub &'a MappingCocylinder);

impl CertifiedFibration for QPhi<'_> {
    fn functor(&self) -> &OrderedFunctor {
        &self.0.q_phi
    }

    fn lift(&self, sq: &HomotopySquare) -> Result<OrderedFunctor> {
        let m = self.0;
        check_square_for(sq, &m.q_phi, "q_φ")?;
        let (g, h) = (m.phi.source(), m.phi.target());
        let sel = sq
            .a()
            .object_ids()
            .map(|x| {
                let (_, k) = m.object(sq.f().apply_object(x));
                let l = sq.iota_image(x);
                m.arrow_of(k, l, h.identity(m.phi.apply_object(g.cod(l))))
                    .ok_or_else(|| breach("⟨h, l_x, (l_x𝐫)φ⟩ is not in M^φ"))
            })
            .collect::<Result<Vec<_>>>()?;
        sq.lift_from_selection(&sel)
    }
}

/// A pullback `A ×_C B` of `f: A → C` and `g: B → C` with its projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub groupoid: Arc<OrderedGroupoid>,
    pub pairs: Vec<(ArrowId, ArrowId)>,
    pub left: OrderedFunctor,
    pub right: OrderedFunctor,
}

pub fn pullback(f: &OrderedFunctor, g: &OrderedFunctor) -> Result<Pullback> {
    let (a, b) = (f.source().clone(), g.source().clone());
    if !crate::functor::same(f.target(), g.target()) {
        return Err(domain("pullback of functors with different targets"));
    }
    let mut objects = Vec::new();
    for x in a.object_ids() {
        for y in b.object_ids() {
            if f.apply_object(x) == g.apply_object(y) {
                objects.push((x, y));
            }
        }
    }
    let obj_index: HashMap<(ObjectId, ObjectId), usize> =
        objects.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut pairs = Vec::new();
    for u in a.arrows() {
        for v in b.arrows() {
            if f.apply(u) == g.apply(v) {
                pairs.push((u, v));
            }
        }
    }
    let index = index_of(&pairs);
    let raw = RawGroupoid::from_parts(
        objects
            .iter()
            .map(|&(x, y)| format!("({},{})", a.object_label(x), b.object_label(y)))
            .collect(),
        BitMatrix::from_fn(objects.len(), |i, j| {
            a.object_leq(objects[i].0, objects[j].0) && b.object_leq(objects[i].1, objects[j].1)
        }),
        pairs
            .iter()
            .map(|&(u, v)| format!("({},{})", a.label(u), b.label(v)))
            .collect(),
        pairs
            .iter()
            .map(|&(u, v)| ObjectId::new(obj_index[&(a.dom(u), b.dom(v))]))
            .collect(),
        pairs
            .iter()
            .map(|&(u, v)| ObjectId::new(obj_index[&(a.cod(u), b.cod(v))]))
            .collect(),
        objects
            .iter()
            .map(|&(x, y)| index[&(a.identity(x), b.identity(y))])
            .collect(),
        pairs
            .iter()
            .map(|&(u, v)| index[&(a.inverse(u), b.inverse(v))])
            .collect(),
        |p, q| {
            let (u1, v1) = pairs[p.index()];
            let (u2, v2) = pairs[q.index()];
            index[&(
                a.compose(u1, u2).expect("composable"),
                b.compose(v1, v2).expect("composable"),
            )]
        },
        |i, j| a.leq(pairs[i].0, pairs[j].0) && b.leq(pairs[i].1, pairs[j].1),
    );
    let groupoid = Arc::new(
        OrderedGroupoid::new(raw).map_err(|e| breach(format!("pullback is not ordered: {e}")))?,
    );
    let left = OrderedFunctor::new(groupoid.clone(), a, pairs.iter().map(|p| p.0).collect())?;
    let right = OrderedFunctor::new(groupoid.clone(), b, pairs.iter().map(|p| p.1).collect())?;
    Ok(Pullback {
        groupoid,
        pairs,
        left,
        right,
    })
}

/// Compares `M^φ` with the pullback of `ε₀` along `φ`, returning the
/// isomorphism `(a, [h0, aφ, h1]) ↦ ⟨h0, a, h1⟩`.
pub fn cocylinder_as_pullback(
    m: &MappingCocylinder,
    interval: &IntervalMappingGroupoid,
) -> Result<OrderedFunctor> {
    let pb = pullback(&m.phi, interval.eps0())?;
    let mut map = Vec::with_capacity(pb.pairs.len());
    for &(a, t) in &pb.pairs {
        let (h0, _, h1) = interval.triple(t);
        map.push(
            m.arrow_of(h0, a, h1)
                .ok_or_else(|| breach("pullback pair missing from M^φ"))?,
        );
    }
    let iso = OrderedFunctor::new(pb.groupoid.clone(), m.groupoid.clone(), map)?;
    if !iso.is_bijective() || !iso.is_ordered_embedding() {
        return Err(breach("M^φ differs from the pullback of ε₀"));
    }
    if iso.then(&m.q_phi)?.map() != pb.left.map() {
        return Err(breach("q_φ is not the pullback projection"));
    }
    Ok(iso)
}

/// `Der(φ)` with arrows `(a, h)`, `(aφ)𝐫 = h𝐝`, and the right `H`-action
/// `(a, h) ◁ h' = (a, hh')`.
#[derive(Clone, Debug)]
pub struct DerivedGroupoid {
    pub groupoid: Arc<OrderedGroupoid>,
    pub pairs: Vec<(ArrowId, ArrowId)>,
    pub objects: Vec<(ObjectId, ArrowId)>,
    pub action: GroupoidAction,
    index: HashMap<(ArrowId, ArrowId), ArrowId>,
}

impl DerivedGroupoid {
    pub fn arrow_of(&self, a: ArrowId, h: ArrowId) -> Option<ArrowId> {
        self.index.get(&(a, h)).copied()
    }
}

pub fn derived_groupoid(phi: &OrderedFunctor) -> Result<DerivedGroupoid> {
    let (g, h) = (phi.source().clone(), phi.target().clone());
    let mut objects = Vec::new();
    for e in g.object_ids() {
        for &k in h.star(phi.apply_object(e)) {
            objects.push((e, k));
        }
    }
    let obj_index: HashMap<(ObjectId, ArrowId), usize> =
        objects.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut pairs = Vec::new();
    for a in g.arrows() {
        for &k in h.star(h.cod(phi.apply(a))) {
            pairs.push((a, k));
        }
    }
    let index = index_of(&pairs);
    let ah = |a: ArrowId, k: ArrowId| h.compose(phi.apply(a), k).expect("(aφ)𝐫 = h𝐝");
    let raw = RawGroupoid::from_parts(
        objects
            .iter()
            .map(|&(e, k)| format!("({},{})", g.object_label(e), h.label(k)))
            .collect(),
        BitMatrix::from_fn(objects.len(), |i, j| {
            g.object_leq(objects[i].0, objects[j].0) && h.leq(objects[i].1, objects[j].1)
        }),
        pairs
            .iter()
            .map(|&(a, k)| format!("({},{})", g.label(a), h.label(k)))
            .collect(),
        pairs
            .iter()
            .map(|&(a, k)| ObjectId::new(obj_index[&(g.dom(a), ah(a, k))]))
            .collect(),
        pairs
            .iter()
            .map(|&(a, k)| ObjectId::new(obj_index[&(g.cod(a), k)]))
            .collect(),
        objects
            .iter()
            .map(|&(e, k)| index[&(g.identity(e), k)])
            .collect(),
        pairs
            .iter()
            .map(|&(a, k)| index[&(g.inverse(a), ah(a, k))])
            .collect(),
        |p, q| {
            let (a, _) = pairs[p.index()];
            let (b, l) = pairs[q.index()];
            index[&(g.compose(a, b).expect("composable"), l)]
        },
        |i, j| g.leq(pairs[i].0, pairs[j].0) && h.leq(pairs[i].1, pairs[j].1),
    );
    let groupoid = Arc::new(
        OrderedGroupoid::new(raw).map_err(|e| breach(format!("Der(φ) is not ordered: {e}")))?,
    );
    let n = h.num_arrows();
    let mut table = vec![None; pairs.len() * n];
    for (i, &(a, k)) in pairs.iter().enumerate() {
        for &m in h.star(h.cod(k)) {
            table[i * n + m.index()] = Some(index[&(a, h.compose(k, m).expect("composable"))]);
        }
    }
    let action = GroupoidAction::new(RawAction {
        actor: h.clone(),
        carrier: groupoid.clone(),
        omega: pairs.iter().map(|&(_, k)| h.cod(k)).collect(),
        table,
    })?;
    Ok(DerivedGroupoid {
        groupoid,
        pairs,
        objects,
        action,
        index,
    })
}

/// `ker p_φ = {⟨(aφ)h, a, h⟩}` matched with `Der(φ)` by `⟨h0, a, h1⟩ ↦ (a, h1)`.
pub fn kernel_matches_derived(m: &MappingCocylinder, der: &DerivedGroupoid) -> Result<()> {
    let h = m.phi.target();
    let mut hit = vec![false; der.pairs.len()];
    for u in m.groupoid.arrows() {
        if !h.is_identity(m.p_phi.apply(u)) {
            continue;
        }
        let (h0, a, h1) = m.triple(u);
        if h.compose(m.phi.apply(a), h1) != Some(h0) {
            return Err(breach("kernel arrow with h0 ≠ (aφ)h1"));
        }
        let d = der
            .arrow_of(a, h1)
            .ok_or_else(|| breach("kernel arrow missing from Der(φ)"))?;
        if std::mem::replace(&mut hit[d.index()], true) {
            return Err(breach("two kernel arrows share a derived pair"));
        }
    }
    if hit.iter().all(|&b| b) {
        Ok(())
    } else {
        Err(breach("Der(φ) has pairs outside ker p_φ"))
    }
}

/// `γ: H ⋉ Der(φ) ≅ M^φ`, `(k, (g, h)) ↦ ⟨(gφ)hk⁻¹, g, h⟩`, with its inverse.
#[derive(Clone, Debug)]
pub struct GammaIso {
    pub sdp: SemidirectProduct,
    pub gamma: OrderedFunctor,
    pub gamma_inv: OrderedFunctor,
}

pub fn gamma_iso(m: &MappingCocylinder, der: &DerivedGroupoid) -> Result<GammaIso> {
    let h = m.phi.target();
    let sdp = semidirect_product(&der.action)?;
    let mut fwd = Vec::with_capacity(sdp.groupoid().num_arrows());
    for w in sdp.groupoid().arrows() {
        let (k, d) = sdp.pair(w);
        let (g, hh) = der.pairs[d.index()];
        let h0 = h
            .compose_path(&[m.phi.apply(g), hh, h.inverse(k)])
            .ok_or_else(|| breach("(gφ)hk⁻¹ is not composable"))?;
        fwd.push(
            m.arrow_of(h0, g, hh)
                .ok_or_else(|| breach("γ leaves M^φ"))?,
        );
    }
    let gamma = OrderedFunctor::new(sdp.groupoid().clone(), m.groupoid.clone(), fwd)
        .map_err(|e| breach(format!("γ is not an ordered functor: {e}")))?;
    let mut back = Vec::with_capacity(m.groupoid.num_arrows());
    for u in m.groupoid.arrows() {
        let (h0, a, h1) = m.triple(u);
        let k = m.p_phi.apply(u);
        let d = der
            .arrow_of(a, h1)
            .ok_or_else(|| breach("(a, h1) is not in Der(φ)"))?;
        back.push(
            sdp.arrow_of(k, d)
                .ok_or_else(|| breach("γ⁻¹ leaves H ⋉ Der(φ)"))?,
        );
        let _ = h0;
    }
    let gamma_inv = OrderedFunctor::new(m.groupoid.clone(), sdp.groupoid().clone(), back)
        .map_err(|e| breach(format!("γ⁻¹ is not an ordered functor: {e}")))?;
    let there_back = gamma.then(&gamma_inv)?;
    let back_there = gamma_inv.then(&gamma)?;
    if there_back
        .map()
        .iter()
        .enumerate()
        .any(|(i, a)| a.index() != i)
        || back_there
            .map()
            .iter()
            .enumerate()
            .any(|(i, a)| a.index() != i)
    {
        return Err(breach("γ and γ⁻¹ are not mutually inverse"));
    }
    if gamma.then(&m.p_phi)?.map() != sdp.projection().map() {
        return Err(breach("γ does not carry π to p_φ"));
    }
    Ok(GammaIso {
        sdp,
        gamma,
        gamma_inv,
    })
}

/// Lifts `fγ⁻¹` against the semidirect projection and carries the result
/// back along `γ`.
pub fn transported_sdp_lift(iso: &GammaIso, sq: &HomotopySquare) -> Result<OrderedFunctor> {
    let f = sq.f().then(&iso.gamma_inv)?;
    let moved = HomotopySquare::from_iota_images(
        sq.a().clone(),
        iso.sdp.projection().clone(),
        f,
        &sq.iota_images(),
    )?;
    lift_sdp_projection(&iso.sdp, &moved)?.then(&iso.gamma)
}

/// Every stage of `φ = i_φ ϖ ψ`, with the sampled strong-fibration evidence
/// for `ϖ`.
#[derive(Clone, Debug)]
pub struct FibrationPipeline {
    pub cocylinder: MappingCocylinder,
    pub enlargement: EnlargementWitness,
    pub factorization: Factorization,
    pub derived: DerivedGroupoid,
    /// `q_φ` restricted to `Der(φ)`, `(a, h) ↦ a`.
    pub q_on_derived: OrderedFunctor,
    pub lifted_squares: usize,
}

pub fn fibration_theorem_pipeline(
    phi: &OrderedFunctor,
    samples: usize,
    rng: &mut dyn RngCore,
    budget: Budget,
) -> Result<FibrationPipeline> {
    let m = mapping_cocylinder(phi)?;
    let enlargement = is_enlargement(&m.i_phi)
        .map_err(|e| breach(format!("M^φ is not an enlargement of Gi_φ: {e}")))?;
    let factorization = factorize(&m.p_phi)?;
    if !star_class(&factorization.psi).is_covering() {
        return Err(breach("M^φ ⫽ ker p_φ → H is not a covering"));
    }
    let composite = m
        .i_phi
        .then(factorization.varpi())?
        .then(&factorization.psi)?;
    if composite.map() != phi.map() {
        return Err(breach("i_φ ϖ ψ ≠ φ"));
    }
    let certified = PPhi(&m);
    let varpi = factorization.varpi().clone();
    let factor = ImmersionFactor::new(varpi.clone(), factorization.psi.clone(), &certified)?;
    // squares on G₀ sitting in M^φ through i_φ, with random homotopies
    let g = phi.source();
    let a = Arc::new(OrderedGroupoid::discrete(g.objects().clone()));
    let f = OrderedFunctor::new(
        a.clone(),
        m.groupoid.clone(),
        g.object_ids()
            .map(|x| m.i_phi.apply(g.identity(x)))
            .collect(),
    )?;
    for _ in 0..samples {
        let sq = random_square(&a, &varpi, &f, rng, budget)?;
        factor.lift(&sq)?;
    }
    let lifted = samples;
    let derived = derived_groupoid(phi)?;
    kernel_matches_derived(&m, &derived)?;
    let q_on_derived = OrderedFunctor::new(
        derived.groupoid.clone(),
        phi.source().clone(),
        derived.pairs.iter().map(|p| p.0).collect(),
    )?;
    if !star_class(&q_on_derived).is_covering() {
        return Err(breach("q_φ restricted to Der(φ) is not a covering"));
    }
    if derived
        .groupoid
        .arrows()
        .any(|d| phi.source().is_identity(q_on_derived.apply(d)) != derived.groupoid.is_identity(d))
    {
        return Err(breach("ker q_φ on Der(φ) is not Der(φ)₀"));
    }
    Ok(FibrationPipeline {
        cocylinder: m,
        enlargement,
        factorization,
        derived,
        q_on_derived,
        lifted_squares: lifted,
    })
}

/// `ΩH ≅ ker ε₀ ∩ ker ε₁`, `h ↦ [h, h𝐝, h]`.
#[derive(Clone, Debug)]
pub struct LoopsIso {
    pub interval: IntervalMappingGroupoid,
    pub loops: Subgroupoid,
    pub omega: Arc<OrderedGroupoid>,
    /// From `ΩH` (as a trivial groupoid) into `OGPD(𝓘, H)`.
    pub embedding: OrderedFunctor,
}

pub fn loops_iso(h: &Arc<OrderedGroupoid>) -> Result<LoopsIso> {
    let interval = interval_mapping_groupoid(h)?;
    let m = interval.groupoid();
    let members: Vec<ArrowId> = m
        .arrows()
        .filter(|&u| h.is_identity(interval.eps0.apply(u)) && h.is_identity(interval.eps1.apply(u)))
        .collect();
    let loops = Subgroupoid::from_arrows(m.clone(), &members, false)?;
    let omega = Arc::new(OrderedGroupoid::discrete(omega_poset(h)));
    let map = h
        .arrows()
        .map(|x| {
            interval
                .arrow_of(x, h.identity(h.dom(x)), x)
                .ok_or_else(|| breach("[h, h𝐝, h] is not a triple"))
        })
        .collect::<Result<Vec<_>>>()?;
    let embedding = OrderedFunctor::new(omega.clone(), m.clone(), map)?;
    if !embedding.is_ordered_embedding() {
        return Err(breach("h ↦ [h, h𝐝, h] is not an order embedding"));
    }
    let mut image: Vec<ArrowId> = embedding.map().to_vec();
    image.sort();
    if image != members {
        return Err(breach("ker ε₀ ∩ ker ε₁ differs from the image of ΩH"));
    }
    Ok(LoopsIso {
        interval,
        loops,
        omega,
        embedding,
    })
}
