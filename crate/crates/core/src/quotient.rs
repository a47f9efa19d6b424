//! Normal ordered subgroupoids and the quotient `G ⫽ A`.
//!
//! Two arrows are identified when each sits, up to multiplication by
//! arrows of `A` on both sides, below the other. Objects of the quotient
//! are the classes of identities.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{breach, structural, Error, Result};
use crate::functor::{kernel, same, star_class, OrderedFunctor};
use crate::groupoid::{OrderedGroupoid, RawGroupoid};
use crate::ids::{ArrowId, ObjectId};
use crate::relation::BitMatrix;
use crate::report::{Axiom, ValidationReport};
use crate::subgroupoid::Subgroupoid;

/// Wide, closed, restriction-closed and conjugation-closed.
pub fn is_normal(a: &Subgroupoid) -> ValidationReport {
    let g = a.parent();
    let mut report = a.check_wide();
    for u in a.arrows() {
        for e in g.object_ids() {
            if e != g.dom(u) && g.object_leq(e, g.dom(u)) {
                let r = g
                    .restriction(e, u)
                    .expect("restriction exists in a validated groupoid");
                if !a.contains(r) {
                    report.record(
                        Axiom::RestrictionClosure,
                        &[u.0, e.0],
                        "restriction leaves the subgroupoid",
                    );
                }
            }
        }
    }
    for u in a.arrows() {
        if g.is_identity(u) {
            continue;
        }
        for &h in g.star(g.dom(u)) {
            for &k in g.star(g.cod(u)) {
                if !common_upper_bound(g, h, k) {
                    continue;
                }
                let conj = g
                    .compose_path(&[g.inverse(h), u, k])
                    .expect("h⁻¹ak is composable by construction");
                if !a.contains(conj) {
                    report.record(
                        Axiom::Conjugation,
                        &[u.0, h.0, k.0],
                        "h⁻¹ak leaves the subgroupoid",
                    );
                }
            }
        }
    }
    report
}

fn common_upper_bound(g: &OrderedGroupoid, h: ArrowId, k: ArrowId) -> bool {
    let up_k = g.up(k);
    g.up(h).iter().any(|x| up_k.contains(x))
}

/// A subgroupoid that passed [`is_normal`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalSubgroupoid(Subgroupoid);

impl NormalSubgroupoid {
    pub fn new(a: Subgroupoid) -> Result<Self> {
        let report = is_normal(&a);
        if report.passed() {
            Ok(NormalSubgroupoid(a))
        } else {
            Err(Error::Axioms(report))
        }
    }

    /// Kernels of ordered functors are always normal; this still checks.
    pub fn kernel_of(theta: &OrderedFunctor) -> Result<Self> {
        Self::new(kernel(theta))
    }

    pub fn identities(parent: Arc<OrderedGroupoid>) -> Self {
        NormalSubgroupoid(Subgroupoid::identities(parent))
    }

    pub fn whole(parent: Arc<OrderedGroupoid>) -> Self {
        NormalSubgroupoid(Subgroupoid::whole(parent))
    }

    pub fn subgroupoid(&self) -> &Subgroupoid {
        &self.0
    }

    pub fn parent(&self) -> &Arc<OrderedGroupoid> {
        self.0.parent()
    }

    pub fn contains(&self, a: ArrowId) -> bool {
        self.0.contains(a)
    }
}

/// The least normal subgroupoid containing `seeds`.
pub fn normal_closure(g: &Arc<OrderedGroupoid>, seeds: &[ArrowId]) -> Result<NormalSubgroupoid> {
    let mut inside = FixedBitSet::with_capacity(g.num_arrows());
    let mut queue: Vec<ArrowId> = g.object_ids().map(|x| g.identity(x)).collect();
    queue.extend_from_slice(seeds);
    let mut members = Vec::new();
    while let Some(u) = queue.pop() {
        if u.index() >= g.num_arrows() {
            return Err(structural(format!("seed {u} is not an arrow")));
        }
        if inside.put(u.index()) {
            continue;
        }
        members.push(u);
        let mut found = vec![g.inverse(u)];
        for &v in &members {
            found.extend(g.compose(u, v));
            found.extend(g.compose(v, u));
        }
        for e in g.object_ids() {
            if g.object_leq(e, g.dom(u)) {
                found.push(g.restriction(e, u).expect("restrictions exist"));
            }
        }
        for &h in g.star(g.dom(u)) {
            for &k in g.star(g.cod(u)) {
                if common_upper_bound(g, h, k) {
                    found.push(g.compose_path(&[g.inverse(h), u, k]).expect("composable"));
                }
            }
        }
        queue.extend(found.into_iter().filter(|x| !inside.contains(x.index())));
    }
    NormalSubgroupoid::new(Subgroupoid::from_arrows(g.clone(), &members, false)?)
}

/// `a, p ∈ A` with `a𝐝 ≤ e`, `a𝐫 = f`, `p𝐝 ≤ f`, `p𝐫 = e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nexus {
    pub a: ArrowId,
    pub p: ArrowId,
}

fn half_nexus(a: &NormalSubgroupoid, e: ObjectId, f: ObjectId) -> Vec<ArrowId> {
    let g = a.parent();
    g.costar(f)
        .iter()
        .copied()
        .filter(|&u| a.contains(u) && g.object_leq(g.dom(u), e))
        .collect()
}

/// Every nexus between `e` and `f`, in increasing `(a, p)` order.
pub fn all_nexuses(a: &NormalSubgroupoid, e: ObjectId, f: ObjectId) -> Vec<Nexus> {
    let firsts = half_nexus(a, e, f);
    let seconds = half_nexus(a, f, e);
    let mut out = Vec::with_capacity(firsts.len() * seconds.len());
    for &x in &firsts {
        for &p in &seconds {
            out.push(Nexus { a: x, p });
        }
    }
    out.sort();
    out
}

/// The least nexus between `e` and `f`, if `e ≃_A f`.
pub fn find_nexus(a: &NormalSubgroupoid, e: ObjectId, f: ObjectId) -> Option<Nexus> {
    let x = half_nexus(a, e, f).into_iter().min()?;
    let p = half_nexus(a, f, e).into_iter().min()?;
    Some(Nexus { a: x, p })
}

/// `[g][h]` computed from a particular nexus between `g𝐫` and `h𝐝`: the
/// arrow `g'ah` with `g' = (g|a𝐝)`.
pub fn nexus_composite(g: &OrderedGroupoid, x: ArrowId, y: ArrowId, n: Nexus) -> Result<ArrowId> {
    let g1 = g.corestriction(x, g.dom(n.a))?;
    g.compose_path(&[g1, n.a, y])
        .ok_or_else(|| breach("nexus composite is not composable"))
}

/// `reach[g]` holds every `k` with `agb ≤ k` for some `a, b ∈ A`.
pub fn reach_relation(a: &NormalSubgroupoid) -> BitMatrix {
    let g = a.parent();
    let n = g.num_arrows();
    let mut m = BitMatrix::new(n);
    for x in g.arrows() {
        let left: Vec<ArrowId> = g
            .costar(g.dom(x))
            .iter()
            .copied()
            .filter(|&u| a.contains(u))
            .collect();
        let right: Vec<ArrowId> = g
            .star(g.cod(x))
            .iter()
            .copied()
            .filter(|&u| a.contains(u))
            .collect();
        let mut seen = FixedBitSet::with_capacity(n);
        for &l in &left {
            let lx = g.compose(l, x).expect("l ends where x starts");
            for &r in &right {
                let y = g.compose(lx, r).expect("r starts where x ends");
                if seen.put(y.index()) {
                    continue;
                }
                for &k in g.up(y) {
                    m.set(x.index(), k.index());
                }
            }
        }
    }
    m
}

/// `G ⫽ A` with the class data and the projection `ϖ`.
#[derive(Clone, Debug)]
pub struct QuotientGroupoid {
    normal: NormalSubgroupoid,
    class_of: Vec<usize>,
    classes: Vec<Vec<ArrowId>>,
    groupoid: Arc<OrderedGroupoid>,
    projection: OrderedFunctor,
}

impl QuotientGroupoid {
    pub fn parent(&self) -> &Arc<OrderedGroupoid> {
        self.normal.parent()
    }

    pub fn normal(&self) -> &NormalSubgroupoid {
        &self.normal
    }

    pub fn groupoid(&self) -> &Arc<OrderedGroupoid> {
        &self.groupoid
    }

    /// `ϖ: G → G ⫽ A`.
    pub fn projection(&self) -> &OrderedFunctor {
        &self.projection
    }

    pub fn classes(&self) -> &[Vec<ArrowId>] {
        &self.classes
    }

    /// The quotient arrow containing `g`.
    pub fn class_of(&self, g: ArrowId) -> ArrowId {
        ArrowId::new(self.class_of[g.index()])
    }

    /// Least arrow id in a class.
    pub fn representative(&self, c: ArrowId) -> ArrowId {
        self.classes[c.index()][0]
    }

    pub fn members(&self, c: ArrowId) -> &[ArrowId] {
        &self.classes[c.index()]
    }

    /// Recomputes `[g][h]` for every member pair of every composable class
    /// pair and every nexus, failing on the first disagreement.
    pub fn check_nexus_independence(&self) -> Result<()> {
        let g = self.parent();
        let q = &self.groupoid;
        for c in q.arrows() {
            for &d in q.star(q.cod(c)) {
                let expected = q.compose(c, d).expect("composable classes");
                for &x in self.members(c) {
                    for &y in self.members(d) {
                        let nexuses = all_nexuses(&self.normal, g.cod(x), g.dom(y));
                        if nexuses.is_empty() {
                            return Err(breach("composable classes without a nexus"));
                        }
                        for n in nexuses {
                            let r = nexus_composite(g, x, y, n)?;
                            if self.class_of(r) != expected {
                                return Err(breach(format!(
                                    "composite of {} and {} depends on the nexus",
                                    g.label(x),
                                    g.label(y)
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds `G ⫽ A`, validating the result and checking that `ϖ` is a fibration.
pub fn quotient(a: &NormalSubgroupoid) -> Result<QuotientGroupoid> {
    let g = a.parent().clone();
    let n = g.num_arrows();
    let reach = reach_relation(a);
    for x in 0..n {
        for y in reach.row(x).ones() {
            if !reach.row(y).is_subset(reach.row(x)) {
                return Err(breach("the class preorder is not transitive"));
            }
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<ArrowId>> = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let members: Vec<ArrowId> = (x..n)
            .filter(|&y| reach.get(x, y) && reach.get(y, x))
            .map(ArrowId::new)
            .collect();
        for m in &members {
            if class_of[m.index()] != usize::MAX {
                return Err(breach("classes overlap"));
            }
            class_of[m.index()] = c;
        }
        classes.push(members);
    }
    let k = classes.len();
    let rep = |c: usize| classes[c][0];

    // objects: classes of identities, in class order
    let mut object_of_class = vec![usize::MAX; k];
    let mut object_classes = Vec::new();
    for (c, members) in classes.iter().enumerate() {
        if g.is_identity(members[0]) {
            object_of_class[c] = object_classes.len();
            object_classes.push(c);
        }
    }
    let mut dom = Vec::with_capacity(k);
    let mut cod = Vec::with_capacity(k);
    for c in 0..k {
        let r = rep(c);
        let dc = class_of[g.identity(g.dom(r)).index()];
        let cc = class_of[g.identity(g.cod(r)).index()];
        if object_of_class[dc] == usize::MAX || object_of_class[cc] == usize::MAX {
            return Err(breach(
                "identity class contains a non-identity representative",
            ));
        }
        dom.push(ObjectId::new(object_of_class[dc]));
        cod.push(ObjectId::new(object_of_class[cc]));
    }
    let object_labels: Vec<String> = object_classes
        .iter()
        .map(|&c| g.object_label(g.dom(rep(c))).to_string())
        .collect();
    let arrow_labels: Vec<String> = (0..k)
        .map(|c| {
            if object_of_class[c] != usize::MAX {
                format!("id:{}", object_labels[object_of_class[c]])
            } else if classes[c].len() == 1 {
                g.label(rep(c)).to_string()
            } else {
                format!("[{}]", g.label(rep(c)))
            }
        })
        .collect();
    let identity: Vec<ArrowId> = object_classes.iter().map(|&c| ArrowId::new(c)).collect();
    let inverse: Vec<ArrowId> = (0..k)
        .map(|c| ArrowId::new(class_of[g.inverse(rep(c)).index()]))
        .collect();

    let mut table = vec![Vec::new(); k];
    for c in 0..k {
        for (d, &dd) in dom.iter().enumerate() {
            if cod[c] != dd {
                continue;
            }
            let (x, y) = (rep(c), rep(d));
            let nx = find_nexus(a, g.cod(x), g.dom(y))
                .ok_or_else(|| breach("composable classes without a nexus"))?;
            let r = nexus_composite(&g, x, y, nx)?;
            table[c].push((d, class_of[r.index()]));
        }
    }
    let object_leq = BitMatrix::from_fn(object_classes.len(), |i, j| {
        reach.get(
            rep(object_classes[i]).index(),
            rep(object_classes[j]).index(),
        )
    });
    let raw = RawGroupoid::from_parts(
        object_labels,
        object_leq,
        arrow_labels,
        dom,
        cod,
        identity,
        inverse,
        |c, d| {
            let row = &table[c.index()];
            let pos = row
                .iter()
                .position(|&(e, _)| e == d.index())
                .expect("composable pair in table");
            ArrowId::new(row[pos].1)
        },
        |i, j| reach.get(rep(i).index(), rep(j).index()),
    );
    let quotient = Arc::new(OrderedGroupoid::new(raw).map_err(|e| match e {
        Error::Axioms(r) => breach(format!("quotient fails the axioms: {r}")),
        other => other,
    })?);
    let projection = OrderedFunctor::new(
        g.clone(),
        quotient.clone(),
        class_of.iter().map(|&c| ArrowId::new(c)).collect(),
    )
    .map_err(|e| breach(format!("ϖ is not an ordered functor: {e}")))?;
    if !star_class(&projection).surjective {
        return Err(breach("ϖ is not star-surjective"));
    }
    Ok(QuotientGroupoid {
        normal: a.clone(),
        class_of,
        classes,
        groupoid: quotient,
        projection,
    })
}

/// `θ = ϖψ` with `ϖ: G → G ⫽ ker θ` a fibration and `ψ` star-injective.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub quotient: QuotientGroupoid,
    pub psi: OrderedFunctor,
}

impl Factorization {
    pub fn varpi(&self) -> &OrderedFunctor {
        self.quotient.projection()
    }
}

pub fn factorize(theta: &OrderedFunctor) -> Result<Factorization> {
    let normal = NormalSubgroupoid::kernel_of(theta)
        .map_err(|e| breach(format!("kernel is not normal: {e}")))?;
    let quotient = quotient(&normal)?;
    let mut map = Vec::with_capacity(quotient.classes().len());
    for members in quotient.classes() {
        let image = theta.apply(members[0]);
        if members.iter().any(|&m| theta.apply(m) != image) {
            return Err(breach("θ is not constant on a class"));
        }
        map.push(image);
    }
    let psi = OrderedFunctor::new(quotient.groupoid().clone(), theta.target().clone(), map)
        .map_err(|e| breach(format!("ψ is not an ordered functor: {e}")))?;
    let composite = quotient.projection().then(&psi)?;
    if composite.map() != theta.map() || !same(composite.target(), theta.target()) {
        return Err(breach("θ ≠ ϖψ"));
    }
    let sc = star_class(&psi);
    if !sc.injective {
        return Err(breach("ψ is not star-injective"));
    }
    if star_class(theta).surjective && !sc.surjective {
        return Err(breach("ψ is not a covering although θ is a fibration"));
    }
    Ok(Factorization { quotient, psi })
}

/// Rejects subsets naming arrows outside the parent.
pub fn subgroupoid_from_labels(g: Arc<OrderedGroupoid>, labels: &[&str]) -> Result<Subgroupoid> {
    let mut ids = Vec::with_capacity(labels.len());
    for l in labels {
        ids.push(
            g.arrow_by_label(l)
                .ok_or_else(|| structural(format!("unknown arrow {l}")))?,
        );
    }
    Subgroupoid::from_arrows(g, &ids, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::fixtures::{example_vi, klein_hlp};
    use crate::groupoid::pi0_quotient;

    #[test]
    fn identities_give_isomorphic_quotient() {
        let k = klein_hlp();
        let q = quotient(&NormalSubgroupoid::identities(k.g.clone())).unwrap();
        assert_eq!(q.groupoid().num_arrows(), k.g.num_arrows());
        assert!(q.projection().is_bijective());
        assert!(q.projection().is_ordered_embedding());
    }

    #[test]
    fn example_vi_collapses_to_five_objects() {
        let ex = example_vi();
        let a = NormalSubgroupoid::whole(ex.s.clone());
        let k = ex.s.object_by_label("k").unwrap();
        let l = ex.s.object_by_label("l").unwrap();
        let n = find_nexus(&a, k, l).unwrap();
        assert_eq!((ex.s.label(n.a), ex.s.label(n.p)), ("ι", "ι⁻¹"));
        let x = ex.s.object_by_label("x").unwrap();
        let y = ex.s.object_by_label("y").unwrap();
        assert!(find_nexus(&a, x, y).is_none());
        let q = quotient(&a).unwrap();
        assert_eq!(q.groupoid().num_objects(), 5);
        assert!(q.groupoid().is_trivial());
        assert!(!q.groupoid().is_inductive());
        q.check_nexus_independence().unwrap();
    }

    #[test]
    fn whole_groupoid_matches_components() {
        let k = klein_hlp();
        let q = quotient(&NormalSubgroupoid::whole(k.g.clone())).unwrap();
        let pi = pi0_quotient(&k.g);
        assert_eq!(q.groupoid().num_objects(), pi.poset.len());
        assert!(q.groupoid().is_trivial());
    }

    #[test]
    fn klein_factorization_is_covering() {
        let k = klein_hlp();
        let f = factorize(&k.p).unwrap();
        assert!(star_class(&f.psi).is_covering());
        f.quotient.check_nexus_independence().unwrap();
    }

    #[test]
    fn non_normal_subgroup_fails_conjugation() {
        use crate::builders::basic::one_object_group;
        use crate::builders::groups::FiniteGroup;
        let s3 = FiniteGroup::symmetric3();
        let g = Arc::new(one_object_group(&s3));
        let t = s3
            .subgroups()
            .into_iter()
            .find(|h| h.len() == 2 && !s3.is_normal(h))
            .unwrap();
        let ids: Vec<ArrowId> = t.iter().map(|&x| ArrowId::new(x)).collect();
        let sub = Subgroupoid::from_arrows(g, &ids, true).unwrap();
        let r = is_normal(&sub);
        assert!(r.has(Axiom::Conjugation));
        assert!(NormalSubgroupoid::new(sub).is_err());
    }
}
