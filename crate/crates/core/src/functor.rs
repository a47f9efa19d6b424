//! Ordered functors, natural transformations and star classification.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, structural, Error, Result};
use crate::groupoid::OrderedGroupoid;
use crate::ids::{ArrowId, ObjectId};
use crate::report::{Axiom, ValidationReport};
use crate::subgroupoid::Subgroupoid;

pub(crate) fn same(a: &Arc<OrderedGroupoid>, b: &Arc<OrderedGroupoid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// An order-preserving functor between validated ordered groupoids.
#[derive(Clone)]
pub struct OrderedFunctor {
    source: Arc<OrderedGroupoid>,
    target: Arc<OrderedGroupoid>,
    map: Vec<ArrowId>,
    object_map: Vec<ObjectId>,
}

impl fmt::Debug for OrderedFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .source
            .arrows()
            .map(|a| {
                format!(
                    "{}->{}",
                    self.source.label(a),
                    self.target.label(self.apply(a))
                )
            })
            .collect();
        write!(f, "OrderedFunctor[{}]", pairs.join(", "))
    }
}

impl PartialEq for OrderedFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
            && same(&self.source, &other.source)
            && same(&self.target, &other.target)
    }
}

impl Eq for OrderedFunctor {}

/// Checks functoriality and order preservation of an arrow map.
pub fn validate_functor(
    source: &OrderedGroupoid,
    target: &OrderedGroupoid,
    map: &[ArrowId],
) -> Result<ValidationReport> {
    if map.len() != source.num_arrows() {
        return Err(structural(format!(
            "arrow map has {} entries for {} arrows",
            map.len(),
            source.num_arrows()
        )));
    }
    if let Some(bad) = map.iter().find(|b| b.index() >= target.num_arrows()) {
        return Err(structural(format!(
            "arrow map points at dangling arrow {bad}"
        )));
    }
    let mut report = ValidationReport::new();
    let img = |a: ArrowId| map[a.index()];
    let object_img = |x: ObjectId| target.dom(img(source.identity(x)));
    for x in source.object_ids() {
        if !target.is_identity(img(source.identity(x))) {
            report.record(
                Axiom::FunctorIdentity,
                &[source.identity(x).0],
                "identity not sent to an identity",
            );
        }
    }
    for a in source.arrows() {
        let b = img(a);
        if target.dom(b) != object_img(source.dom(a)) || target.cod(b) != object_img(source.cod(a))
        {
            report.record(
                Axiom::FunctorEndpoints,
                &[a.0, b.0],
                "endpoints not preserved",
            );
        }
        if img(source.inverse(a)) != target.inverse(b) {
            report.record(Axiom::FunctorInverse, &[a.0], "inverse not preserved");
        }
        for &c in source.star(source.cod(a)) {
            let ab = source.compose(a, c).expect("composable");
            if target.compose(b, img(c)) != Some(img(ab)) {
                report.record(
                    Axiom::FunctorComposition,
                    &[a.0, c.0],
                    "composite not preserved",
                );
            }
        }
        for &c in source.up(a) {
            if !target.leq(b, img(c)) {
                report.record(Axiom::FunctorOrder, &[a.0, c.0], "order not preserved");
            }
        }
    }
    Ok(report)
}

impl OrderedFunctor {
    /// Validates and builds. Failures come back as [`Error::Axioms`].
    pub fn new(
        source: Arc<OrderedGroupoid>,
        target: Arc<OrderedGroupoid>,
        map: Vec<ArrowId>,
    ) -> Result<Self> {
        let report = validate_functor(&source, &target, &map)?;
        if !report.passed() {
            return Err(Error::Axioms(report));
        }
        Ok(Self::assemble(source, target, map))
    }

    pub(crate) fn assemble(
        source: Arc<OrderedGroupoid>,
        target: Arc<OrderedGroupoid>,
        map: Vec<ArrowId>,
    ) -> Self {
        let object_map = source
            .object_ids()
            .map(|x| target.dom(map[source.identity(x).index()]))
            .collect();
        OrderedFunctor {
            source,
            target,
            map,
            object_map,
        }
    }

    pub fn identity(g: Arc<OrderedGroupoid>) -> Self {
        let map = g.arrows().collect();
        Self::assemble(g.clone(), g, map)
    }

    pub fn source(&self) -> &Arc<OrderedGroupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<OrderedGroupoid> {
        &self.target
    }

    pub fn map(&self) -> &[ArrowId] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, a: ArrowId) -> ArrowId {
        self.map[a.index()]
    }

    #[inline]
    pub fn apply_object(&self, x: ObjectId) -> ObjectId {
        self.object_map[x.index()]
    }

    /// `self` followed by `next` (diagrammatic order: `a ↦ (a self) next`).
    pub fn then(&self, next: &OrderedFunctor) -> Result<OrderedFunctor> {
        if !same(&self.target, &next.source) {
            return Err(domain("functors are not composable"));
        }
        let map = self.map.iter().map(|&b| next.apply(b)).collect();
        Ok(Self::assemble(
            self.source.clone(),
            next.target.clone(),
            map,
        ))
    }

    /// Functors agree as arrow maps between equal groupoids.
    pub fn same_as(&self, other: &OrderedFunctor) -> bool {
        self == other
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.num_arrows()];
        self.map
            .iter()
            .all(|b| !std::mem::replace(&mut seen[b.index()], true))
    }

    /// Injective and order-reflecting on its image: `aφ <= bφ` implies `a <= b`.
    pub fn is_ordered_embedding(&self) -> bool {
        self.is_injective()
            && self.source.arrows().all(|a| {
                self.source.arrows().all(|b| {
                    !self.target.leq(self.apply(a), self.apply(b)) || self.source.leq(a, b)
                })
            })
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.source.num_arrows() == self.target.num_arrows()
    }
}

/// Surjectivity and injectivity of a functor on every star.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StarClass {
    pub surjective: bool,
    pub injective: bool,
}

impl StarClass {
    pub fn bijective(&self) -> bool {
        self.surjective && self.injective
    }
    pub fn is_fibration(&self) -> bool {
        self.surjective
    }
    pub fn is_immersion(&self) -> bool {
        self.injective
    }
    pub fn is_covering(&self) -> bool {
        self.bijective()
    }

    pub fn name(&self) -> &'static str {
        match (self.surjective, self.injective) {
            (true, true) => "covering",
            (true, false) => "fibration",
            (false, true) => "immersion",
            (false, false) => "neither",
        }
    }
}

/// Star class of `φ` restricted to `star(e) → star(eφ)`.
pub fn star_class_at(phi: &OrderedFunctor, e: ObjectId) -> StarClass {
    let s = phi.source();
    let t = phi.target();
    let image_star = t.star(phi.apply_object(e));
    let mut hit = vec![false; t.num_arrows()];
    let mut injective = true;
    for &a in s.star(e) {
        let b = phi.apply(a);
        if std::mem::replace(&mut hit[b.index()], true) {
            injective = false;
        }
    }
    let surjective = image_star.iter().all(|b| hit[b.index()]);
    StarClass {
        surjective,
        injective,
    }
}

pub fn star_class(phi: &OrderedFunctor) -> StarClass {
    phi.source()
        .object_ids()
        .map(|e| star_class_at(phi, e))
        .fold(
            StarClass {
                surjective: true,
                injective: true,
            },
            |acc, c| StarClass {
                surjective: acc.surjective && c.surjective,
                injective: acc.injective && c.injective,
            },
        )
}

/// The kernel `{g : gφ is an identity}` as a wide subgroupoid.
pub fn kernel(phi: &OrderedFunctor) -> Subgroupoid {
    let members: Vec<ArrowId> = phi
        .source()
        .arrows()
        .filter(|&a| phi.target().is_identity(phi.apply(a)))
        .collect();
    Subgroupoid::from_arrows(phi.source().clone(), &members, false)
        .expect("kernel ids are in range")
}

/// An ordered natural transformation between two ordered functors `A → B`.
///
/// Component `xτ` runs from `x·from` to `x·to`, and for each `a: x → y`,
/// `(xτ)(a·to) = (a·from)(yτ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalTransformation {
    pub from: OrderedFunctor,
    pub to: OrderedFunctor,
    pub components: Vec<ArrowId>,
}

impl NaturalTransformation {
    pub fn new(from: OrderedFunctor, to: OrderedFunctor, components: Vec<ArrowId>) -> Result<Self> {
        let report = validate_natural(&from, &to, &components)?;
        if !report.passed() {
            return Err(Error::Axioms(report));
        }
        Ok(NaturalTransformation {
            from,
            to,
            components,
        })
    }

    pub fn component(&self, x: ObjectId) -> ArrowId {
        self.components[x.index()]
    }
}

pub fn validate_natural(
    from: &OrderedFunctor,
    to: &OrderedFunctor,
    components: &[ArrowId],
) -> Result<ValidationReport> {
    if !same(from.source(), to.source()) || !same(from.target(), to.target()) {
        return Err(domain(
            "natural transformation between functors of different type",
        ));
    }
    let a = from.source();
    let b = from.target();
    if components.len() != a.num_objects() {
        return Err(structural("component count differs from object count"));
    }
    if components.iter().any(|c| c.index() >= b.num_arrows()) {
        return Err(structural("dangling component"));
    }
    let mut report = ValidationReport::new();
    for x in a.object_ids() {
        let c = components[x.index()];
        if b.dom(c) != from.apply_object(x) || b.cod(c) != to.apply_object(x) {
            report.record(
                Axiom::FunctorEndpoints,
                &[x.0, c.0],
                "component has wrong endpoints",
            );
        }
    }
    if !report.passed() {
        return Ok(report);
    }
    for arrow in a.arrows() {
        let x = a.dom(arrow);
        let y = a.cod(arrow);
        let left = b.compose(components[x.index()], to.apply(arrow));
        let right = b.compose(from.apply(arrow), components[y.index()]);
        if left.is_none() || left != right {
            report.record(Axiom::Naturality, &[arrow.0], "naturality square fails");
        }
    }
    for x in a.object_ids() {
        for y in a.object_ids() {
            if a.object_leq(x, y) && !b.leq(components[x.index()], components[y.index()]) {
                report.record(Axiom::FunctorOrder, &[x.0, y.0], "components not ordered");
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::basic::{interval, one_object_group};
    use crate::builders::fixtures::klein_hlp;
    use crate::builders::groups::FiniteGroup;

    #[test]
    fn identity_functor_is_covering_with_trivial_kernel() {
        let i = Arc::new(interval());
        let id = OrderedFunctor::identity(i.clone());
        assert!(validate_functor(&i, &i, id.map()).unwrap().passed());
        assert!(star_class(&id).bijective());
        let k = kernel(&id);
        assert_eq!(
            k.arrows(),
            i.object_ids().map(|x| i.identity(x)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn klein_projection_is_fibration_not_immersion() {
        let k = klein_hlp();
        assert!(validate_functor(k.g.as_ref(), k.h.as_ref(), k.p.map())
            .unwrap()
            .passed());
        let c = star_class(&k.p);
        assert!(c.surjective && !c.injective);
    }

    #[test]
    fn klein_kernel_by_direct_evaluation() {
        let k = klein_hlp();
        // oracle: evaluate p on every non-identity arrow and keep those hitting an identity
        let mut expected: Vec<&str> =
            k.g.arrows()
                .filter(|&a| k.h.is_identity(k.p.apply(a)))
                .map(|a| k.g.label(a))
                .collect();
        expected.sort();
        let mut got: Vec<&str> = kernel(&k.p)
            .arrows()
            .iter()
            .map(|&a| k.g.label(a))
            .collect();
        got.sort();
        assert_eq!(got, expected);
        assert_eq!(got, vec!["ab@z", "id:e", "id:f", "id:z"]);
        // star-injective iff kernel is the identities
        assert!(!star_class(&k.p).injective);
    }

    #[test]
    fn constant_functor_kernel_is_everything() {
        let g = Arc::new(one_object_group(&FiniteGroup::cyclic(4)));
        let pt = Arc::new(one_object_group(&FiniteGroup::cyclic(1)));
        let c = OrderedFunctor::new(g.clone(), pt, vec![ArrowId(0); 4]).unwrap();
        assert_eq!(kernel(&c).arrows().len(), 4);
    }

    #[test]
    fn deleting_an_order_pair_breaks_klein_projection() {
        let k = klein_hlp();
        let mut raw = k.h.to_raw();
        // drop y@0 <= x@1 from H
        let x = k.h.arrow_by_label("x@1").unwrap();
        let y = k.h.arrow_by_label("y@0").unwrap();
        raw.arrow_leq = crate::relation::BitMatrix::from_fn(raw.arrow_labels.len(), |i, j| {
            raw.arrow_leq.get(i, j) && !(i == y.index() && j == x.index())
        });
        // H without the pair fails OG3, so compare against an order-scan oracle
        // on the map alone
        let rescan = k.g.arrows().any(|a| {
            k.g.up(a).iter().any(|&b| {
                !raw.arrow_leq
                    .get(k.p.apply(a).index(), k.p.apply(b).index())
            })
        });
        assert!(rescan);
        let corrupted = crate::groupoid::validate_ogpd(&raw).unwrap();
        assert!(!corrupted.passed());
    }

    #[test]
    fn inclusion_of_objects_is_immersion_only() {
        let i = Arc::new(interval());
        let objs = Arc::new(OrderedGroupoid::discrete(i.objects().clone()));
        let map = objs.arrows().map(|a| i.identity(ObjectId(a.0))).collect();
        let inc = OrderedFunctor::new(objs, i, map).unwrap();
        let c = star_class(&inc);
        assert!(c.injective && !c.surjective);
    }
}
