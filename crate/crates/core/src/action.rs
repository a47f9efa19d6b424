//! Right actions of ordered groupoids, semidirect products, and the
//! correspondence between poset actions and coverings.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{breach, domain, structural, Error, Result};
use crate::functor::{same, star_class, OrderedFunctor};
use crate::groupoid::{OrderedGroupoid, RawGroupoid};
use crate::homotopy::{check_square_for, CertifiedFibration, HomotopySquare};
use crate::ids::{ArrowId, ObjectId};
use crate::poset::Poset;
use crate::report::{Axiom, ValidationReport};

/// Unvalidated action data: `omega[a]` is the object `aω` of the actor and
/// `table[a * |G| + g]` is `a ◁ g` where defined.
#[derive(Clone, Debug)]
pub struct RawAction {
    pub actor: Arc<OrderedGroupoid>,
    pub carrier: Arc<OrderedGroupoid>,
    pub omega: Vec<ObjectId>,
    pub table: Vec<Option<ArrowId>>,
}

impl RawAction {
    fn at(&self, a: ArrowId, g: ArrowId) -> Option<ArrowId> {
        self.table[a.index() * self.actor.num_arrows() + g.index()]
    }
}

/// Checks the five action axioms and that `ω` is an ordered functor to `G₀`.
pub fn validate_action(raw: &RawAction) -> Result<ValidationReport> {
    let (g, c) = (&raw.actor, &raw.carrier);
    if raw.omega.len() != c.num_arrows() || raw.table.len() != c.num_arrows() * g.num_arrows() {
        return Err(structural("action tables have the wrong size"));
    }
    if raw.omega.iter().any(|x| x.index() >= g.num_objects()) {
        return Err(structural("ω names an unknown object"));
    }
    if raw
        .table
        .iter()
        .flatten()
        .any(|b| b.index() >= c.num_arrows())
    {
        return Err(structural("action table names an unknown arrow"));
    }
    let mut report = ValidationReport::new();
    let om = |a: ArrowId| raw.omega[a.index()];
    for a in c.arrows() {
        if om(a) != om(c.identity(c.dom(a))) || om(a) != om(c.identity(c.cod(a))) {
            report.record(
                Axiom::FunctorEndpoints,
                &[a.0],
                "ω is not constant along an arrow",
            );
        }
        for b in c.arrows() {
            if c.leq(a, b) && !g.object_leq(om(a), om(b)) {
                report.record(Axiom::FunctorOrder, &[a.0, b.0], "ω is not monotone");
            }
        }
    }
    for a in c.arrows() {
        for h in g.arrows() {
            let defined = om(a) == g.dom(h);
            match (defined, raw.at(a, h)) {
                (true, None) | (false, Some(_)) => {
                    report.record(
                        Axiom::ActionDefined,
                        &[a.0, h.0],
                        "a ◁ g defined exactly when aω = g𝐝",
                    );
                }
                (true, Some(r)) => {
                    if om(r) != g.cod(h) {
                        report.record(Axiom::ActionTarget, &[a.0, h.0], "(a ◁ g)ω ≠ g𝐫");
                    }
                }
                (false, None) => {}
            }
        }
        if let Some(r) = raw.at(a, g.identity(om(a))) {
            if r != a {
                report.record(Axiom::ActionIdentity, &[a.0], "a ◁ aω ≠ a");
            }
        }
    }
    if !report.passed() {
        return Ok(report);
    }
    for a in c.arrows() {
        for &h in g.star(om(a)) {
            let ah = raw.at(a, h).expect("defined");
            for &k in g.star(g.cod(h)) {
                let hk = g.compose(h, k).expect("composable");
                if raw.at(a, hk) != raw.at(ah, k) {
                    report.record(
                        Axiom::ActionComposite,
                        &[a.0, h.0, k.0],
                        "a ◁ gh ≠ (a ◁ g) ◁ h",
                    );
                }
            }
            for &b in c.star(c.cod(a)) {
                let ab = c.compose(a, b).expect("composable");
                let bh = raw.at(b, h).expect("ω constant on components");
                let lhs = raw.at(ab, h);
                if c.compose(ah, bh) != lhs {
                    report.record(
                        Axiom::ActionFunctorial,
                        &[a.0, b.0, h.0],
                        "(ab) ◁ g ≠ (a ◁ g)(b ◁ g)",
                    );
                }
            }
        }
    }
    for a in c.arrows() {
        for &h in g.star(om(a)) {
            let ah = raw.at(a, h).expect("defined");
            for &b in c.up(a) {
                for &k in g.up(h) {
                    if om(b) == g.dom(k) && !c.leq(ah, raw.at(b, k).expect("defined")) {
                        report.record(
                            Axiom::ActionOrder,
                            &[a.0, h.0, b.0, k.0],
                            "action is not monotone",
                        );
                    }
                }
            }
        }
    }
    Ok(report)
}

/// A validated right action of `G` on `A`.
#[derive(Clone, Debug)]
pub struct GroupoidAction {
    raw: RawAction,
    omega: OrderedFunctor,
}

impl GroupoidAction {
    pub fn new(raw: RawAction) -> Result<Self> {
        let report = validate_action(&raw)?;
        if !report.passed() {
            return Err(Error::Axioms(report));
        }
        let objects = Arc::new(OrderedGroupoid::discrete(raw.actor.objects().clone()));
        let omega = OrderedFunctor::new(
            raw.carrier.clone(),
            objects,
            raw.omega.iter().map(|x| ArrowId::new(x.index())).collect(),
        )?;
        Ok(GroupoidAction { raw, omega })
    }

    /// An action on a poset: `omega[x]` and `act(x, g)` for `xω = g𝐝`.
    pub fn on_poset(
        actor: Arc<OrderedGroupoid>,
        poset: Poset,
        omega: Vec<ObjectId>,
        mut act: impl FnMut(ObjectId, ArrowId) -> ObjectId,
    ) -> Result<Self> {
        let carrier = Arc::new(OrderedGroupoid::discrete(poset));
        if omega.len() != carrier.num_objects() {
            return Err(structural("one ω value per poset element is required"));
        }
        let n = actor.num_arrows();
        let mut table = vec![None; carrier.num_arrows() * n];
        for x in carrier.object_ids() {
            if omega[x.index()].index() >= actor.num_objects() {
                return Err(structural("ω names an unknown object"));
            }
            for &g in actor.star(omega[x.index()]) {
                let y = act(x, g);
                if y.index() >= carrier.num_objects() {
                    return Err(structural("action leaves the poset"));
                }
                table[x.index() * n + g.index()] = Some(carrier.identity(y));
            }
        }
        GroupoidAction::new(RawAction {
            actor,
            carrier,
            omega,
            table,
        })
    }

    /// `G` acting on `G₀` by `x ◁ g = g𝐫`.
    pub fn trivial(actor: Arc<OrderedGroupoid>) -> Result<Self> {
        let poset = actor.objects().clone();
        let omega = poset.elements().collect();
        let a2 = actor.clone();
        GroupoidAction::on_poset(actor, poset, omega, move |_, g| a2.cod(g))
    }

    /// `H` acting on `ΩH` by right multiplication, `h ◁ m = hm`.
    pub fn right_multiplication(actor: Arc<OrderedGroupoid>) -> Result<Self> {
        let poset = crate::homotopy::omega_poset(&actor);
        let omega = actor.arrows().map(|h| actor.cod(h)).collect();
        let a2 = actor.clone();
        GroupoidAction::on_poset(actor, poset, omega, move |h, m| {
            ObjectId::new(
                a2.compose(ArrowId::new(h.index()), m)
                    .expect("hω = m𝐝")
                    .index(),
            )
        })
    }

    pub fn actor(&self) -> &Arc<OrderedGroupoid> {
        &self.raw.actor
    }

    pub fn carrier(&self) -> &Arc<OrderedGroupoid> {
        &self.raw.carrier
    }

    pub fn raw(&self) -> &RawAction {
        &self.raw
    }

    pub fn omega(&self) -> &OrderedFunctor {
        &self.omega
    }

    pub fn omega_of(&self, a: ArrowId) -> ObjectId {
        self.raw.omega[a.index()]
    }

    /// `a ◁ g`, when `aω = g𝐝`.
    pub fn act(&self, a: ArrowId, g: ArrowId) -> Option<ArrowId> {
        self.raw.at(a, g)
    }

    /// On a poset carrier: `x ◁ g` on elements.
    pub fn act_object(&self, x: ObjectId, g: ArrowId) -> Option<ObjectId> {
        let c = &self.raw.carrier;
        self.act(c.identity(x), g).map(|b| c.dom(b))
    }

    pub fn is_poset_action(&self) -> bool {
        self.raw.carrier.is_trivial()
    }

    /// Whether two actions have the same actor, carrier order and table.
    pub fn same_table(&self, other: &GroupoidAction) -> bool {
        same(self.actor(), other.actor())
            && self.raw.omega == other.raw.omega
            && self.raw.table == other.raw.table
            && *self.raw.carrier == *other.raw.carrier
    }
}

/// `G ⋉ A` with its projection `π: (g, a) ↦ g`.
#[derive(Clone, Debug)]
pub struct SemidirectProduct {
    action: GroupoidAction,
    groupoid: Arc<OrderedGroupoid>,
    pairs: Vec<(ArrowId, ArrowId)>,
    index: HashMap<(ArrowId, ArrowId), ArrowId>,
    projection: OrderedFunctor,
}

impl SemidirectProduct {
    pub fn action(&self) -> &GroupoidAction {
        &self.action
    }

    pub fn groupoid(&self) -> &Arc<OrderedGroupoid> {
        &self.groupoid
    }

    pub fn projection(&self) -> &OrderedFunctor {
        &self.projection
    }

    pub fn pair(&self, c: ArrowId) -> (ArrowId, ArrowId) {
        self.pairs[c.index()]
    }

    pub fn arrow_of(&self, g: ArrowId, a: ArrowId) -> Option<ArrowId> {
        self.index.get(&(g, a)).copied()
    }
}

/// Arrows `(g, a)` with `aω = g𝐫`, objects identified with `A₀`.
pub fn semidirect_product(action: &GroupoidAction) -> Result<SemidirectProduct> {
    let (g, c) = (action.actor().clone(), action.carrier().clone());
    let mut pairs = Vec::new();
    for h in g.arrows() {
        for a in c.arrows() {
            if action.omega_of(a) == g.cod(h) {
                pairs.push((h, a));
            }
        }
    }
    let index: HashMap<(ArrowId, ArrowId), ArrowId> = pairs
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, ArrowId::new(i)))
        .collect();
    let look = |h: ArrowId, a: ArrowId| -> ArrowId { index[&(h, a)] };
    let act = |a: ArrowId, h: ArrowId| action.act(a, h).expect("action defined on pullback pairs");
    let labels = pairs
        .iter()
        .map(|&(h, a)| format!("({},{})", g.label(h), c.label(a)))
        .collect();
    let dom = pairs
        .iter()
        .map(|&(h, a)| c.dom(act(a, g.inverse(h))))
        .collect();
    let cod = pairs.iter().map(|&(_, a)| c.cod(a)).collect();
    let identity = c
        .object_ids()
        .map(|y| {
            let i = c.identity(y);
            look(g.identity(action.omega_of(i)), i)
        })
        .collect();
    let inverse = pairs
        .iter()
        .map(|&(h, a)| {
            let hi = g.inverse(h);
            look(hi, act(c.inverse(a), hi))
        })
        .collect();
    let raw = RawGroupoid::from_parts(
        c.objects().labels().to_vec(),
        c.objects().relation().clone(),
        labels,
        dom,
        cod,
        identity,
        inverse,
        |u, v| {
            let (h, a) = pairs[u.index()];
            let (k, b) = pairs[v.index()];
            let hk = g.compose(h, k).expect("composable actor arrows");
            let ab = c.compose(act(a, k), b).expect("composable carrier arrows");
            look(hk, ab)
        },
        |i, j| {
            let (h, a) = pairs[i];
            let (k, b) = pairs[j];
            g.leq(h, k) && c.leq(a, b)
        },
    );
    let groupoid = Arc::new(
        OrderedGroupoid::new(raw)
            .map_err(|e| breach(format!("semidirect product is not ordered: {e}")))?,
    );
    let projection = OrderedFunctor::new(
        groupoid.clone(),
        g.clone(),
        pairs.iter().map(|p| p.0).collect(),
    )?;
    Ok(SemidirectProduct {
        action: action.clone(),
        groupoid,
        pairs,
        index,
        projection,
    })
}

/// `π: G ⋉ A → G` with the lift `(b, ι)F̃ = (g_b h_{b𝐫}, a_b ◁ h_{b𝐫})`.
#[derive(Clone, Debug)]
pub struct SdpProjection {
    sdp: SemidirectProduct,
}

impl SdpProjection {
    pub fn new(sdp: SemidirectProduct) -> Self {
        SdpProjection { sdp }
    }
}

impl CertifiedFibration for SdpProjection {
    fn functor(&self) -> &OrderedFunctor {
        &self.sdp.projection
    }

    fn lift(&self, sq: &HomotopySquare) -> Result<OrderedFunctor> {
        check_square_for(sq, &self.sdp.projection, "semidirect product projection")?;
        let sdp = &self.sdp;
        let b = sq.a();
        let h: Vec<ArrowId> = sq.iota_images();
        let formula = |u: ArrowId| -> Result<ArrowId> {
            let (g, a) = sdp.pair(sq.f().apply(u));
            let hr = h[b.cod(u).index()];
            let gh = sdp
                .action
                .actor()
                .compose(g, hr)
                .ok_or_else(|| breach("g_b h is not composable"))?;
            let ah = sdp
                .action
                .act(a, hr)
                .ok_or_else(|| breach("a_b ◁ h is undefined"))?;
            sdp.arrow_of(gh, ah)
                .ok_or_else(|| breach("lift leaves the semidirect product"))
        };
        let sel = b
            .object_ids()
            .map(|x| formula(b.identity(x)))
            .collect::<Result<Vec<_>>>()?;
        let lift = sq.lift_from_selection(&sel)?;
        for u in b.arrows() {
            let at = lift.apply(crate::homotopy::cylinder_arrow(
                u,
                crate::builders::basic::IOTA,
            ));
            if at != formula(u)? {
                return Err(breach("lift disagrees with the closed formula"));
            }
        }
        Ok(lift)
    }
}

pub fn lift_sdp_projection(sdp: &SemidirectProduct, sq: &HomotopySquare) -> Result<OrderedFunctor> {
    SdpProjection::new(sdp.clone()).lift(sq)
}

/// The action of `G` on `C₀` given by a covering `γ: C → G`:
/// `x ◁ g = c𝐫` for the unique `c ∈ star_C(x)` over `g`.
pub fn covering_to_action(gamma: &OrderedFunctor) -> Result<GroupoidAction> {
    if !star_class(gamma).bijective() {
        return Err(domain("functor is not a covering"));
    }
    let c = gamma.source().clone();
    let omega = c.object_ids().map(|x| gamma.apply_object(x)).collect();
    GroupoidAction::on_poset(
        gamma.target().clone(),
        c.objects().clone(),
        omega,
        |x, g| {
            let lift = c
                .star(x)
                .iter()
                .copied()
                .find(|&u| gamma.apply(u) == g)
                .expect("covering lifts every star arrow");
            c.cod(lift)
        },
    )
}

/// Recovers a poset action from the projection of its semidirect product
/// and checks the table is unchanged.
pub fn action_roundtrip(action: &GroupoidAction) -> Result<GroupoidAction> {
    if !action.is_poset_action() {
        return Err(domain("round trip needs an action on a poset"));
    }
    let sdp = semidirect_product(action)?;
    let back = covering_to_action(sdp.projection())?;
    if !back.same_table(action) {
        return Err(breach("action recovered from G ⋉ X differs"));
    }
    Ok(back)
}

/// The isomorphism `C ≅ G ⋉ C₀`, `c ↦ (cγ, c𝐫)`, over `G`.
#[derive(Clone, Debug)]
pub struct CoveringIso {
    pub action: GroupoidAction,
    pub sdp: SemidirectProduct,
    pub iso: OrderedFunctor,
}

pub fn action_to_covering_roundtrip(gamma: &OrderedFunctor) -> Result<CoveringIso> {
    let action = covering_to_action(gamma)?;
    let sdp = semidirect_product(&action)?;
    let c = gamma.source();
    let carrier = action.carrier();
    let mut map = Vec::with_capacity(c.num_arrows());
    for u in c.arrows() {
        let y = carrier.identity(c.cod(u));
        map.push(
            sdp.arrow_of(gamma.apply(u), y)
                .ok_or_else(|| breach("(cγ, c𝐫) is not an arrow of the semidirect product"))?,
        );
    }
    let iso = OrderedFunctor::new(c.clone(), sdp.groupoid().clone(), map)?;
    if !iso.is_bijective() || !iso.is_ordered_embedding() {
        return Err(breach("c ↦ (cγ, c𝐫) is not an order isomorphism"));
    }
    if iso.then(sdp.projection())?.map() != gamma.map() {
        return Err(breach("isomorphism does not commute with the projections"));
    }
    Ok(CoveringIso { action, sdp, iso })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::fixtures::klein_hlp;
    use crate::homotopy::{find_lift, is_lift, random_square};
    use crate::search::Budget;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn right_multiplication_is_an_action() {
        let k = klein_hlp();
        let act = GroupoidAction::right_multiplication(k.h.clone()).unwrap();
        let sdp = semidirect_product(&act).unwrap();
        let expected: usize = k.h.arrows().map(|h| k.h.costar(k.h.cod(h)).len()).sum();
        assert_eq!(sdp.groupoid().num_arrows(), expected);
        assert!(star_class(sdp.projection()).is_covering());
    }

    #[test]
    fn trivial_action_gives_back_g() {
        let k = klein_hlp();
        let act = GroupoidAction::trivial(k.g.clone()).unwrap();
        let sdp = semidirect_product(&act).unwrap();
        assert_eq!(sdp.groupoid().num_arrows(), k.g.num_arrows());
        assert!(sdp.projection().is_bijective());
        assert!(sdp.projection().is_ordered_embedding());
    }

    #[test]
    fn corrupted_composite_is_reported() {
        let k = klein_hlp();
        let act = GroupoidAction::right_multiplication(k.h.clone()).unwrap();
        let mut raw = act.raw().clone();
        let n = k.h.num_arrows();
        let x = k.h.arrow_by_label("x@1").unwrap();
        let id1 = k.h.identity(k.h.cod(x));
        // send id ◁ x to id instead of x
        let slot = id1.index() * n + x.index();
        raw.table[slot] = Some(id1);
        let r = validate_action(&raw).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn roundtrip_on_projection() {
        let k = klein_hlp();
        let act = GroupoidAction::right_multiplication(k.h.clone()).unwrap();
        let sdp = semidirect_product(&act).unwrap();
        let back = covering_to_action(sdp.projection()).unwrap();
        assert_eq!(back.raw().table, act.raw().table);
        action_to_covering_roundtrip(sdp.projection()).unwrap();
    }

    #[test]
    fn sdp_lift_agrees_with_search() {
        let k = klein_hlp();
        let act = GroupoidAction::right_multiplication(k.h.clone()).unwrap();
        let sdp = semidirect_product(&act).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = k.e.clone();
        for _ in 0..10 {
            let f = crate::search::random_functor(&a, sdp.groupoid(), &mut rng, Budget::default())
                .unwrap()
                .unwrap();
            let sq = random_square(&a, sdp.projection(), &f, &mut rng, Budget::default()).unwrap();
            let lift = lift_sdp_projection(&sdp, &sq).unwrap();
            assert!(is_lift(&sq, &lift));
            assert!(find_lift(&sq, Budget::default()).unwrap().is_some());
        }
    }
}
