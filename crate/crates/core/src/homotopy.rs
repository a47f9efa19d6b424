//! Homotopy lifting squares and their lifts.
//!
//! A square consists of `f: A → G`, `p: G → H` and `F: A × 𝓘 → H` with
//! `(a, 0)F = afp`. A lift `F̃: A × 𝓘 → G` satisfies `(a, 0)F̃ = af` and
//! `F̃p = F`. Every functor on `A × 𝓘` is fixed by its values on `A × {0}`
//! and on the arrows `(x, ι)` for objects `x`, so lifts are searched as
//! monotone choices of `g_x ∈ star_G(xf)` with `g_x p = (x, ι)F`.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::RngCore;

use crate::builders::basic::interval;
use crate::error::{breach, domain, Result};
use crate::functor::{same, star_class, OrderedFunctor};
use crate::groupoid::{product, OrderedGroupoid};
use crate::ids::{ArrowId, ObjectId};
use crate::poset::Poset;
use crate::search::{monotone_selections, Budget};

/// Index of `(u, i)` in `A × 𝓘`.
#[inline]
pub fn cylinder_arrow(u: ArrowId, i: ArrowId) -> ArrowId {
    ArrowId::new(u.index() * 4 + i.index())
}

/// Index of `(x, j)` in `(A × 𝓘)_0`, with `j` 0 or 1.
#[inline]
pub fn cylinder_object(x: ObjectId, j: ObjectId) -> ObjectId {
    ObjectId::new(x.index() * 2 + j.index())
}

pub fn cylinder(a: &OrderedGroupoid) -> OrderedGroupoid {
    product(a, &interval())
}

/// Arrow map on `A × 𝓘` determined by `base: A → X` on `A × {0}` and the
/// arrows `g_x = (x, ι)`-images.
pub fn extend_homotopy(
    a: &OrderedGroupoid,
    base: &OrderedFunctor,
    g: &[ArrowId],
) -> Result<Vec<ArrowId>> {
    let x = base.target();
    let mut map = Vec::with_capacity(a.num_arrows() * 4);
    for u in a.arrows() {
        let ub = base.apply(u);
        let gd = g[a.dom(u).index()];
        let gc = g[a.cod(u).index()];
        let gd_inv = x.inverse(gd);
        let images = [
            Some(ub),
            x.compose_path(&[gd_inv, ub, gc]),
            x.compose(ub, gc),
            x.compose(gd_inv, ub),
        ];
        for img in images {
            map.push(img.ok_or_else(|| domain("homotopy data does not compose"))?);
        }
    }
    Ok(map)
}

/// A commuting square against `p`.
#[derive(Clone, Debug)]
pub struct HomotopySquare {
    a: Arc<OrderedGroupoid>,
    cylinder: Arc<OrderedGroupoid>,
    p: OrderedFunctor,
    f: OrderedFunctor,
    big_f: OrderedFunctor,
}

impl HomotopySquare {
    pub fn new(
        a: Arc<OrderedGroupoid>,
        p: OrderedFunctor,
        f: OrderedFunctor,
        big_f: OrderedFunctor,
    ) -> Result<Self> {
        if !same(f.source(), &a)
            || !same(f.target(), p.source())
            || !same(big_f.target(), p.target())
        {
            return Err(domain("square functors do not match up"));
        }
        if **big_f.source() != cylinder(&a) {
            return Err(domain("homotopy is not defined on A × 𝓘"));
        }
        let cyl = big_f.source().clone();
        for u in a.arrows() {
            if big_f.apply(cylinder_arrow(u, ArrowId(0))) != p.apply(f.apply(u)) {
                return Err(domain("square does not commute"));
            }
        }
        Ok(HomotopySquare {
            a,
            cylinder: cyl,
            p,
            f,
            big_f,
        })
    }

    /// Builds the homotopy from `(x, ι)F = h[x]`.
    pub fn from_iota_images(
        a: Arc<OrderedGroupoid>,
        p: OrderedFunctor,
        f: OrderedFunctor,
        h: &[ArrowId],
    ) -> Result<Self> {
        if h.len() != a.num_objects() {
            return Err(domain("one ι-image per object is required"));
        }
        let fp = f.then(&p)?;
        for x in a.object_ids() {
            if p.target().dom(h[x.index()]) != fp.apply_object(x) {
                return Err(domain("ι-image does not start at xfp"));
            }
        }
        let map = extend_homotopy(&a, &fp, h)?;
        let cyl = Arc::new(cylinder(&a));
        let big_f = OrderedFunctor::new(cyl, p.target().clone(), map)?;
        Self::new(a, p, f, big_f)
    }

    pub fn a(&self) -> &Arc<OrderedGroupoid> {
        &self.a
    }
    pub fn cylinder(&self) -> &Arc<OrderedGroupoid> {
        &self.cylinder
    }
    pub fn p(&self) -> &OrderedFunctor {
        &self.p
    }
    pub fn f(&self) -> &OrderedFunctor {
        &self.f
    }
    pub fn homotopy(&self) -> &OrderedFunctor {
        &self.big_f
    }

    /// `(x, ι)F`.
    pub fn iota_image(&self, x: ObjectId) -> ArrowId {
        self.big_f.apply(cylinder_arrow(
            self.a.identity(x),
            crate::builders::basic::IOTA,
        ))
    }

    pub fn iota_images(&self) -> Vec<ArrowId> {
        self.a.object_ids().map(|x| self.iota_image(x)).collect()
    }

    /// The same square with `p` replaced by `p ψ` and `F` by `Fψ`.
    pub fn push_forward(&self, psi: &OrderedFunctor) -> Result<HomotopySquare> {
        HomotopySquare::new(
            self.a.clone(),
            self.p.then(psi)?,
            self.f.clone(),
            self.big_f.then(psi)?,
        )
    }

    /// Functor on `A × 𝓘` from a selection `g_x`, checked to be a lift.
    pub fn lift_from_selection(&self, g: &[ArrowId]) -> Result<OrderedFunctor> {
        let map = extend_homotopy(&self.a, &self.f, g)?;
        let lift = OrderedFunctor::new(self.cylinder.clone(), self.p.source().clone(), map)
            .map_err(|e| breach(format!("selection does not give an ordered functor: {e}")))?;
        if !is_lift(self, &lift) {
            return Err(breach("constructed functor is not a lift"));
        }
        Ok(lift)
    }
}

/// `i₀F̃ = f` and `F̃p = F`.
pub fn is_lift(sq: &HomotopySquare, lift: &OrderedFunctor) -> bool {
    same(lift.source(), &sq.cylinder)
        && same(lift.target(), sq.p.source())
        && sq
            .a
            .arrows()
            .all(|u| lift.apply(cylinder_arrow(u, ArrowId(0))) == sq.f.apply(u))
        && sq
            .cylinder
            .arrows()
            .all(|w| sq.p.apply(lift.apply(w)) == sq.big_f.apply(w))
}

fn lift_candidates(sq: &HomotopySquare) -> Vec<Vec<ArrowId>> {
    let g = sq.p.source();
    sq.a.object_ids()
        .map(|x| {
            let h = sq.iota_image(x);
            g.star(sq.f.apply_object(x))
                .iter()
                .copied()
                .filter(|&c| sq.p.apply(c) == h)
                .collect()
        })
        .collect()
}

fn selections(
    sq: &HomotopySquare,
    budget: Budget,
    limit: Option<usize>,
) -> Result<Vec<Vec<ArrowId>>> {
    let a = &sq.a;
    let g = sq.p.source();
    monotone_selections(
        &a.objects().linear_extension(),
        &|x, y| a.object_leq(x, y),
        &lift_candidates(sq),
        &|s, t| g.leq(s, t),
        budget,
        limit,
    )
}

/// The first lift in canonical order, or `None` once the search space is exhausted.
pub fn find_lift(sq: &HomotopySquare, budget: Budget) -> Result<Option<OrderedFunctor>> {
    match selections(sq, budget, Some(1))?.into_iter().next() {
        Some(g) => sq.lift_from_selection(&g).map(Some),
        None => Ok(None),
    }
}

pub fn all_lifts(sq: &HomotopySquare, budget: Budget) -> Result<Vec<OrderedFunctor>> {
    selections(sq, budget, None)?
        .iter()
        .map(|g| sq.lift_from_selection(g))
        .collect()
}

/// Some `g ∈ star_G(e)` with `gp = h`.
pub fn path_lift(p: &OrderedFunctor, e: ObjectId, h: ArrowId) -> Result<Option<ArrowId>> {
    let (g, t) = (p.source(), p.target());
    if e.index() >= g.num_objects() || h.index() >= t.num_arrows() {
        return Err(domain("path_lift: unknown id"));
    }
    if t.dom(h) != p.apply_object(e) {
        return Err(domain("path_lift: arrow does not start at the image of e"));
    }
    Ok(g.star(e).iter().copied().find(|&c| p.apply(c) == h))
}

/// A functor whose homotopy lifting property is backed by a construction.
pub trait CertifiedFibration {
    fn functor(&self) -> &OrderedFunctor;
    /// A lift for any commuting square against [`CertifiedFibration::functor`].
    fn lift(&self, sq: &HomotopySquare) -> Result<OrderedFunctor>;
}

pub(crate) fn check_square_for(sq: &HomotopySquare, p: &OrderedFunctor, what: &str) -> Result<()> {
    if sq.p() != p {
        return Err(domain(format!("square is not against the {what}")));
    }
    Ok(())
}

/// Coverings lift uniquely along stars.
#[derive(Clone, Debug)]
pub struct Covering {
    p: OrderedFunctor,
}

impl Covering {
    pub fn new(p: OrderedFunctor) -> Result<Self> {
        if !star_class(&p).bijective() {
            return Err(domain("functor is not a covering"));
        }
        Ok(Covering { p })
    }
}

impl CertifiedFibration for Covering {
    fn functor(&self) -> &OrderedFunctor {
        &self.p
    }

    fn lift(&self, sq: &HomotopySquare) -> Result<OrderedFunctor> {
        check_square_for(sq, &self.p, "covering")?;
        let g = sq
            .a()
            .object_ids()
            .map(|x| {
                path_lift(&self.p, sq.f().apply_object(x), sq.iota_image(x))?
                    .ok_or_else(|| breach("covering has no star lift"))
            })
            .collect::<Result<Vec<_>>>()?;
        sq.lift_from_selection(&g)
    }
}

/// Lift against a covering: `g_x` is the unique star lift of `(x, ι)F` at `xf`.
pub fn lift_covering(sq: &HomotopySquare) -> Result<OrderedFunctor> {
    Covering::new(sq.p().clone())?.lift(sq)
}

/// `π` with `πψ = p` for a certified `p` and an immersion `ψ`.
pub struct ImmersionFactor<'a> {
    pi: OrderedFunctor,
    psi: OrderedFunctor,
    composite: &'a dyn CertifiedFibration,
}

impl<'a> ImmersionFactor<'a> {
    pub fn new(
        pi: OrderedFunctor,
        psi: OrderedFunctor,
        composite: &'a dyn CertifiedFibration,
    ) -> Result<Self> {
        if !star_class(&psi).injective {
            return Err(domain("second factor is not an immersion"));
        }
        if pi.then(&psi)? != *composite.functor() {
            return Err(domain("πψ differs from the certified functor"));
        }
        Ok(ImmersionFactor { pi, psi, composite })
    }
}

impl CertifiedFibration for ImmersionFactor<'_> {
    fn functor(&self) -> &OrderedFunctor {
        &self.pi
    }

    fn lift(&self, sq: &HomotopySquare) -> Result<OrderedFunctor> {
        check_square_for(sq, &self.pi, "first factor")?;
        let pushed = sq.push_forward(&self.psi)?;
        let lift = self.composite.lift(&pushed)?;
        if !is_lift(sq, &lift) {
            return Err(breach("lift against πψ does not lift against π"));
        }
        Ok(lift)
    }
}

/// Lift against `π` through the immersion `ψ` and a certified `πψ`.
pub fn lift_through_immersion(
    sq: &HomotopySquare,
    psi: &OrderedFunctor,
    composite: &dyn CertifiedFibration,
) -> Result<OrderedFunctor> {
    ImmersionFactor::new(sq.p().clone(), psi.clone(), composite)?.lift(sq)
}

/// A random commuting square against `p` with the given `f`: `(x, ι)F` is a
/// monotone choice in `star_H(xfp)`.
pub fn random_square(
    a: &Arc<OrderedGroupoid>,
    p: &OrderedFunctor,
    f: &OrderedFunctor,
    rng: &mut dyn RngCore,
    budget: Budget,
) -> Result<HomotopySquare> {
    let h = p.target();
    let fp = f.then(p)?;
    let candidates: Vec<Vec<ArrowId>> = a
        .object_ids()
        .map(|x| {
            let mut c = h.star(fp.apply_object(x)).to_vec();
            c.shuffle(rng);
            c
        })
        .collect();
    let sel = monotone_selections(
        &a.objects().linear_extension(),
        &|x, y| a.object_leq(x, y),
        &candidates,
        &|s, t| h.leq(s, t),
        budget,
        Some(1),
    )?
    .into_iter()
    .next()
    .ok_or_else(|| breach("identity selection always exists"))?;
    HomotopySquare::from_iota_images(a.clone(), p.clone(), f.clone(), &sel)
}

/// The arrows of `H` as a poset under the arrow order.
pub fn omega_poset(h: &OrderedGroupoid) -> Poset {
    Poset::from_matrix(h.arrow_labels().to_vec(), h.leq_matrix().clone())
        .expect("arrow order is a partial order")
}

pub use crate::cocylinder::{loops_iso, LoopsIso};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::basic::{one_object_group, trivial_on};
    use crate::builders::fixtures::klein_hlp;
    use crate::builders::groups::FiniteGroup;

    #[test]
    fn klein_square_has_no_lift() {
        let k = klein_hlp();
        assert!(star_class(&k.p).surjective);
        assert!(find_lift(&k.square, Budget::default()).unwrap().is_none());
    }

    #[test]
    fn klein_trivial_square_lifts_with_identities() {
        let k = klein_hlp();
        let h = k.h.clone();
        let id1 = h.identity(h.object_by_label("1").unwrap());
        let id0 = h.identity(h.object_by_label("0").unwrap());
        let e = k.e.clone();
        let images: Vec<ArrowId> = e
            .object_ids()
            .map(|x| if e.object_label(x) == "z" { id0 } else { id1 })
            .collect();
        let sq =
            HomotopySquare::from_iota_images(e.clone(), k.p.clone(), k.i.clone(), &images).unwrap();
        let lift = find_lift(&sq, Budget::default()).unwrap().unwrap();
        for x in e.object_ids() {
            let g = lift.apply(cylinder_arrow(e.identity(x), crate::builders::basic::IOTA));
            assert!(k.g.is_identity(g));
        }
        assert_eq!(all_lifts(&sq, Budget::default()).unwrap().len(), 1);
    }

    #[test]
    fn klein_path_lift() {
        let k = klein_hlp();
        let e = k.g.object_by_label("e").unwrap();
        let x = k.h.arrow_by_label("x@1").unwrap();
        let g = path_lift(&k.p, e, x).unwrap().unwrap();
        assert_eq!(k.g.label(g), "a@e");
        let y = k.h.arrow_by_label("y@0").unwrap();
        assert!(path_lift(&k.p, e, y).is_err());
    }

    #[test]
    fn isomorphism_has_unique_lift() {
        let g = Arc::new(one_object_group(&FiniteGroup::cyclic(3)));
        let id = OrderedFunctor::identity(g.clone());
        let pt = Arc::new(trivial_on(Poset::chain(vec!["*".into()])));
        let f = OrderedFunctor::new(pt.clone(), g.clone(), vec![ArrowId(0)]).unwrap();
        for h in g.arrows() {
            let sq =
                HomotopySquare::from_iota_images(pt.clone(), id.clone(), f.clone(), &[h]).unwrap();
            let lifts = all_lifts(&sq, Budget::default()).unwrap();
            assert_eq!(lifts.len(), 1);
            assert_eq!(lift_covering(&sq).unwrap(), lifts[0]);
            // the lift of F against the identity is F itself
            assert_eq!(lifts[0].map(), sq.homotopy().map());
        }
    }

    #[test]
    fn non_commuting_square_rejected() {
        let k = klein_hlp();
        // send every object of E to z: then (e,0)F = id:1 differs from e f p = id:0
        let z = k.g.identity(k.g.object_by_label("z").unwrap());
        let f = OrderedFunctor::new(k.e.clone(), k.g.clone(), vec![z; k.e.num_arrows()]).unwrap();
        let r = HomotopySquare::new(k.e.clone(), k.p.clone(), f, k.square.homotopy().clone());
        assert!(matches!(r, Err(crate::Error::Domain(_))));
    }

    #[test]
    fn omega_poset_of_interval() {
        let i = interval();
        let o = omega_poset(&i);
        assert_eq!(o.len(), 4);
        assert!(o
            .elements()
            .all(|x| o.elements().all(|y| o.leq(x, y) == (x == y))));
    }
}
