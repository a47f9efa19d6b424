//! Finite ordered groupoids stored as explicit tables.
//!
//! Arrows compose left to right: `compose(a, b)` is defined when
//! `cod(a) == dom(b)`. Objects are identified with their identity arrows, and
//! the object poset must agree with the order on identity arrows.

use std::collections::HashMap;
use std::fmt;

use crate::error::{breach, domain, structural, Error, Result};
use crate::ids::{ArrowId, ObjectId};
use crate::poset::{check_partial_order, Poset};
use crate::relation::BitMatrix;
use crate::report::{Axiom, ValidationReport};

/// Unvalidated groupoid data, as produced by a parser or a construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawGroupoid {
    pub object_labels: Vec<String>,
    /// `object_leq.get(x, y)` iff `x <= y`; must be the full relation.
    pub object_leq: BitMatrix,
    pub arrow_labels: Vec<String>,
    pub dom: Vec<ObjectId>,
    pub cod: Vec<ObjectId>,
    pub identity: Vec<ArrowId>,
    pub inverse: Vec<ArrowId>,
    /// Triples `(a, b, ab)`.
    pub compose: Vec<(ArrowId, ArrowId, ArrowId)>,
    /// `arrow_leq.get(a, b)` iff `a <= b`; must be the full relation.
    pub arrow_leq: BitMatrix,
}

impl RawGroupoid {
    /// Assembles raw data from closures. `compose` is called for every pair
    /// with `cod(a) == dom(b)`; `leq` for every ordered pair of arrows.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        object_labels: Vec<String>,
        object_leq: BitMatrix,
        arrow_labels: Vec<String>,
        dom: Vec<ObjectId>,
        cod: Vec<ObjectId>,
        identity: Vec<ArrowId>,
        inverse: Vec<ArrowId>,
        mut compose: impl FnMut(ArrowId, ArrowId) -> ArrowId,
        leq: impl FnMut(usize, usize) -> bool,
    ) -> Self {
        let n = arrow_labels.len();
        let mut by_dom: Vec<Vec<ArrowId>> = vec![Vec::new(); object_labels.len()];
        for (a, d) in dom.iter().enumerate() {
            if let Some(list) = by_dom.get_mut(d.index()) {
                list.push(ArrowId::new(a));
            }
        }
        let mut triples = Vec::new();
        for (a, c) in cod.iter().enumerate() {
            if let Some(list) = by_dom.get(c.index()) {
                for &b in list {
                    let a = ArrowId::new(a);
                    triples.push((a, b, compose(a, b)));
                }
            }
        }
        RawGroupoid {
            object_labels,
            object_leq,
            arrow_labels,
            dom,
            cod,
            identity,
            inverse,
            compose: triples,
            arrow_leq: BitMatrix::from_fn(n, leq),
        }
    }
}

/// A validated finite ordered groupoid. Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct OrderedGroupoid {
    objects: Poset,
    arrow_labels: Vec<String>,
    dom: Vec<ObjectId>,
    cod: Vec<ObjectId>,
    identity: Vec<ArrowId>,
    identity_of: Vec<Option<ObjectId>>,
    inverse: Vec<ArrowId>,
    star: Vec<Vec<ArrowId>>,
    costar: Vec<Vec<ArrowId>>,
    star_pos: Vec<u32>,
    compose_row: Vec<Vec<ArrowId>>,
    leq: BitMatrix,
    down: Vec<Vec<ArrowId>>,
    up: Vec<Vec<ArrowId>>,
}

impl fmt::Debug for OrderedGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrderedGroupoid")
            .field("objects", &self.objects.labels())
            .field("arrows", &self.arrow_labels)
            .finish()
    }
}

fn check_structure(raw: &RawGroupoid) -> Result<()> {
    let m = raw.object_labels.len();
    let n = raw.arrow_labels.len();
    if raw.object_leq.len() != m {
        return Err(structural("object order size mismatch"));
    }
    if raw.arrow_leq.len() != n {
        return Err(structural("arrow order size mismatch"));
    }
    if raw.dom.len() != n || raw.cod.len() != n || raw.inverse.len() != n {
        return Err(structural("arrow table size mismatch"));
    }
    if raw.identity.len() != m {
        return Err(structural("identity table size mismatch"));
    }
    for a in 0..n {
        if raw.dom[a].index() >= m || raw.cod[a].index() >= m {
            return Err(structural(format!(
                "arrow {} has dangling endpoint",
                raw.arrow_labels[a]
            )));
        }
        if raw.inverse[a].index() >= n {
            return Err(structural(format!(
                "arrow {} has dangling inverse",
                raw.arrow_labels[a]
            )));
        }
    }
    let mut seen = vec![false; n];
    for (x, &i) in raw.identity.iter().enumerate() {
        if i.index() >= n {
            return Err(structural(format!("identity of object {x} is dangling")));
        }
        if raw.dom[i.index()].index() != x || raw.cod[i.index()].index() != x {
            return Err(structural(format!(
                "identity {} is not a loop at object {}",
                raw.arrow_labels[i.index()],
                raw.object_labels[x]
            )));
        }
        if seen[i.index()] {
            return Err(structural("one arrow is the identity of two objects"));
        }
        seen[i.index()] = true;
    }
    let mut table: HashMap<(ArrowId, ArrowId), ArrowId> = HashMap::new();
    for &(a, b, c) in &raw.compose {
        if a.index() >= n || b.index() >= n || c.index() >= n {
            return Err(structural("composition triple has dangling arrow"));
        }
        if let Some(prev) = table.insert((a, b), c) {
            if prev != c {
                return Err(structural(format!(
                    "composite of {} and {} given twice with different values",
                    raw.arrow_labels[a.index()],
                    raw.arrow_labels[b.index()]
                )));
            }
        }
    }
    Ok(())
}

/// Checks every ordered-groupoid axiom by exhaustive scan.
///
/// Malformed references are reported as [`Error::Structural`]; axiom
/// failures go into the returned report with the first witness per axiom.
pub fn validate_ogpd(raw: &RawGroupoid) -> Result<ValidationReport> {
    check_structure(raw)?;
    let m = raw.object_labels.len();
    let n = raw.arrow_labels.len();
    let mut report = ValidationReport::new();
    let w = |xs: &[ArrowId]| xs.iter().map(|a| a.0).collect::<Vec<u32>>();

    let mut table: HashMap<(ArrowId, ArrowId), ArrowId> = HashMap::new();
    for &(a, b, c) in &raw.compose {
        table.insert((a, b), c);
        if raw.cod[a.index()] != raw.dom[b.index()] {
            report.record(
                Axiom::ComposeDomain,
                &w(&[a, b]),
                "composite given for a non-composable pair",
            );
        } else if raw.dom[c.index()] != raw.dom[a.index()]
            || raw.cod[c.index()] != raw.cod[b.index()]
        {
            report.record(
                Axiom::ComposeDomain,
                &w(&[a, b, c]),
                "composite has wrong endpoints",
            );
        }
    }
    let mut star: Vec<Vec<ArrowId>> = vec![Vec::new(); m];
    for a in 0..n {
        star[raw.dom[a].index()].push(ArrowId::new(a));
    }
    let comp = |a: ArrowId, b: ArrowId| table.get(&(a, b)).copied();
    for a in 0..n {
        let a = ArrowId::new(a);
        for &b in &star[raw.cod[a.index()].index()] {
            if comp(a, b).is_none() {
                report.record(
                    Axiom::ComposeDomain,
                    &w(&[a, b]),
                    "composable pair has no composite",
                );
            }
        }
    }
    for a in 0..n {
        let a = ArrowId::new(a);
        let id_d = raw.identity[raw.dom[a.index()].index()];
        let id_c = raw.identity[raw.cod[a.index()].index()];
        if comp(id_d, a) != Some(a) || comp(a, id_c) != Some(a) {
            report.record(Axiom::IdentityLaw, &w(&[a]), "identity is not neutral");
        }
        let inv = raw.inverse[a.index()];
        if comp(a, inv) != Some(id_d) || comp(inv, a) != Some(id_c) {
            report.record(Axiom::InverseLaw, &w(&[a, inv]), "inverse law fails");
        }
    }
    'assoc: for a in 0..n {
        let a = ArrowId::new(a);
        for &b in &star[raw.cod[a.index()].index()] {
            for &c in &star[raw.cod[b.index()].index()] {
                let left = comp(a, b).and_then(|ab| comp(ab, c));
                let right = comp(b, c).and_then(|bc| comp(a, bc));
                if left.is_some() && right.is_some() && left != right {
                    report.record(Axiom::Associativity, &w(&[a, b, c]), "(ab)c != a(bc)");
                    break 'assoc;
                }
            }
        }
    }

    let order_report = check_partial_order(&raw.arrow_leq);
    report.merge(order_report);
    let obj_report = check_partial_order(&raw.object_leq);
    for v in obj_report.violations {
        report.record(
            Axiom::ObjectOrderAgreement,
            &v.witness,
            format!("object order is not a partial order: {}", v.axiom),
        );
    }
    'agree: for x in 0..m {
        for y in 0..m {
            let by_obj = raw.object_leq.get(x, y);
            let by_arrow = raw
                .arrow_leq
                .get(raw.identity[x].index(), raw.identity[y].index());
            if by_obj != by_arrow {
                report.record(
                    Axiom::ObjectOrderAgreement,
                    &[x as u32, y as u32],
                    "object order differs from identity-arrow order",
                );
                break 'agree;
            }
        }
    }

    let leq = &raw.arrow_leq;
    'og1: for (g, h) in leq.pairs() {
        if !leq.get(raw.inverse[g].index(), raw.inverse[h].index()) {
            report.record(Axiom::OG1, &[g as u32, h as u32], "g<=h but not g^-1<=h^-1");
            break 'og1;
        }
    }
    let pairs: Vec<(usize, usize)> = leq.pairs().collect();
    'og2: for &(g1, g2) in &pairs {
        let c1 = raw.cod[g1].index();
        let c2 = raw.cod[g2].index();
        for &h1 in &star[c1] {
            for h2 in leq.row(h1.index()).ones() {
                if raw.dom[h2].index() != c2 {
                    continue;
                }
                let h2 = ArrowId::new(h2);
                let (Some(p1), Some(p2)) = (comp(ArrowId::new(g1), h1), comp(ArrowId::new(g2), h2))
                else {
                    continue;
                };
                if !leq.get(p1.index(), p2.index()) {
                    report.record(
                        Axiom::OG2,
                        &[g1 as u32, g2 as u32, h1.0, h2.0],
                        "g1<=g2, h1<=h2 but g1h1 not <= g2h2",
                    );
                    break 'og2;
                }
            }
        }
    }
    let leq_t = leq.transpose();
    let mut found_exist = false;
    let mut found_unique = false;
    for g in 0..n {
        if found_exist && found_unique {
            break;
        }
        let gd = raw.dom[g].index();
        let mut count = vec![0u32; m];
        let mut witness = vec![usize::MAX; m];
        for h in leq_t.row(g).ones() {
            let hd = raw.dom[h].index();
            count[hd] += 1;
            witness[hd] = h;
        }
        for f in 0..m {
            if !raw.object_leq.get(f, gd) {
                continue;
            }
            if count[f] == 0 && !found_exist {
                report.record(
                    Axiom::OG3Existence,
                    &[g as u32, f as u32],
                    "no restriction of arrow to object below its domain",
                );
                found_exist = true;
            } else if count[f] > 1 && !found_unique {
                report.record(
                    Axiom::OG3Uniqueness,
                    &[g as u32, f as u32, witness[f] as u32],
                    "more than one restriction",
                );
                found_unique = true;
            }
        }
    }
    Ok(report)
}

impl OrderedGroupoid {
    /// Validates and builds. Axiom failures return [`Error::Axioms`].
    pub fn new(raw: RawGroupoid) -> Result<Self> {
        let report = validate_ogpd(&raw)?;
        if !report.passed() {
            return Err(Error::Axioms(report));
        }
        Ok(Self::assemble(raw))
    }

    fn assemble(raw: RawGroupoid) -> Self {
        let m = raw.object_labels.len();
        let n = raw.arrow_labels.len();
        let mut star: Vec<Vec<ArrowId>> = vec![Vec::new(); m];
        let mut costar: Vec<Vec<ArrowId>> = vec![Vec::new(); m];
        let mut star_pos = vec![0u32; n];
        for a in 0..n {
            let d = raw.dom[a].index();
            star_pos[a] = star[d].len() as u32;
            star[d].push(ArrowId::new(a));
            costar[raw.cod[a].index()].push(ArrowId::new(a));
        }
        let mut compose_row: Vec<Vec<ArrowId>> = (0..n)
            .map(|a| vec![ArrowId(u32::MAX); star[raw.cod[a].index()].len()])
            .collect();
        for &(a, b, c) in &raw.compose {
            compose_row[a.index()][star_pos[b.index()] as usize] = c;
        }
        let mut identity_of = vec![None; n];
        for (x, &i) in raw.identity.iter().enumerate() {
            identity_of[i.index()] = Some(ObjectId::new(x));
        }
        let leq = raw.arrow_leq;
        let down: Vec<Vec<ArrowId>> = {
            let t = leq.transpose();
            (0..n)
                .map(|a| t.row(a).ones().map(ArrowId::new).collect())
                .collect()
        };
        let up: Vec<Vec<ArrowId>> = (0..n)
            .map(|a| leq.row(a).ones().map(ArrowId::new).collect())
            .collect();
        let objects =
            Poset::from_matrix(raw.object_labels, raw.object_leq).expect("object order validated");
        OrderedGroupoid {
            objects,
            arrow_labels: raw.arrow_labels,
            dom: raw.dom,
            cod: raw.cod,
            identity: raw.identity,
            identity_of,
            inverse: raw.inverse,
            star,
            costar,
            star_pos,
            compose_row,
            leq,
            down,
            up,
        }
    }

    /// Recovers raw data equivalent to this groupoid.
    pub fn to_raw(&self) -> RawGroupoid {
        let mut compose = Vec::new();
        for a in self.arrows() {
            for &b in self.star(self.cod(a)) {
                compose.push((a, b, self.compose(a, b).expect("composable")));
            }
        }
        RawGroupoid {
            object_labels: self.objects.labels().to_vec(),
            object_leq: self.objects.relation().clone(),
            arrow_labels: self.arrow_labels.clone(),
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            identity: self.identity.clone(),
            inverse: self.inverse.clone(),
            compose,
            arrow_leq: self.leq.clone(),
        }
    }

    /// The trivial ordered groupoid on a poset: only identity arrows.
    pub fn discrete(objects: Poset) -> Self {
        let m = objects.len();
        let labels: Vec<String> = objects.labels().iter().map(|l| format!("id:{l}")).collect();
        let ids: Vec<ObjectId> = (0..m).map(ObjectId::new).collect();
        let arrows: Vec<ArrowId> = (0..m).map(ArrowId::new).collect();
        let rel = objects.relation().clone();
        let raw = RawGroupoid::from_parts(
            objects.labels().to_vec(),
            rel.clone(),
            labels,
            ids.clone(),
            ids,
            arrows.clone(),
            arrows,
            |a, _| a,
            |a, b| rel.get(a, b),
        );
        Self::new(raw).expect("trivial groupoid on a poset is ordered")
    }

    pub fn objects(&self) -> &Poset {
        &self.objects
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrow_labels.len()
    }

    pub fn object_ids(&self) -> impl Iterator<Item = ObjectId> {
        (0..self.num_objects()).map(ObjectId::new)
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> {
        (0..self.num_arrows()).map(ArrowId::new)
    }

    pub fn label(&self, a: ArrowId) -> &str {
        &self.arrow_labels[a.index()]
    }

    pub fn arrow_labels(&self) -> &[String] {
        &self.arrow_labels
    }

    pub fn object_label(&self, x: ObjectId) -> &str {
        self.objects.label(x)
    }

    pub fn arrow_by_label(&self, label: &str) -> Option<ArrowId> {
        self.arrow_labels
            .iter()
            .position(|l| l == label)
            .map(ArrowId::new)
    }

    pub fn object_by_label(&self, label: &str) -> Option<ObjectId> {
        self.objects.index_of(label)
    }

    #[inline]
    pub fn dom(&self, a: ArrowId) -> ObjectId {
        self.dom[a.index()]
    }

    #[inline]
    pub fn cod(&self, a: ArrowId) -> ObjectId {
        self.cod[a.index()]
    }

    #[inline]
    pub fn identity(&self, x: ObjectId) -> ArrowId {
        self.identity[x.index()]
    }

    /// The object an identity arrow belongs to, or `None` for non-identities.
    #[inline]
    pub fn identity_object(&self, a: ArrowId) -> Option<ObjectId> {
        self.identity_of[a.index()]
    }

    #[inline]
    pub fn is_identity(&self, a: ArrowId) -> bool {
        self.identity_of[a.index()].is_some()
    }

    #[inline]
    pub fn inverse(&self, a: ArrowId) -> ArrowId {
        self.inverse[a.index()]
    }

    #[inline]
    pub fn compose(&self, a: ArrowId, b: ArrowId) -> Option<ArrowId> {
        if self.cod[a.index()] != self.dom[b.index()] {
            return None;
        }
        Some(self.compose_row[a.index()][self.star_pos[b.index()] as usize])
    }

    /// Composite of a left-to-right path, if every step is defined.
    pub fn compose_path(&self, path: &[ArrowId]) -> Option<ArrowId> {
        let (&first, rest) = path.split_first()?;
        rest.iter().try_fold(first, |acc, &b| self.compose(acc, b))
    }

    #[inline]
    pub fn leq(&self, a: ArrowId, b: ArrowId) -> bool {
        self.leq.get(a.index(), b.index())
    }

    pub fn leq_matrix(&self) -> &BitMatrix {
        &self.leq
    }

    #[inline]
    pub fn object_leq(&self, x: ObjectId, y: ObjectId) -> bool {
        self.objects.leq(x, y)
    }

    /// Arrows below `a`, including `a`.
    pub fn down(&self, a: ArrowId) -> &[ArrowId] {
        &self.down[a.index()]
    }

    /// Arrows above `a`, including `a`.
    pub fn up(&self, a: ArrowId) -> &[ArrowId] {
        &self.up[a.index()]
    }

    /// All arrows with domain `e`.
    pub fn star(&self, e: ObjectId) -> &[ArrowId] {
        &self.star[e.index()]
    }

    /// All arrows with codomain `e`.
    pub fn costar(&self, e: ObjectId) -> &[ArrowId] {
        &self.costar[e.index()]
    }

    pub fn checked_star(&self, e: ObjectId) -> Result<&[ArrowId]> {
        self.star
            .get(e.index())
            .map(|v| v.as_slice())
            .ok_or_else(|| domain(format!("unknown object {e}")))
    }

    /// The local group at `e`: loops at `e`.
    pub fn local_group(&self, e: ObjectId) -> Vec<ArrowId> {
        self.star(e)
            .iter()
            .copied()
            .filter(|&a| self.cod(a) == e)
            .collect()
    }

    /// Arrows from `x` to `y`.
    pub fn hom(&self, x: ObjectId, y: ObjectId) -> Vec<ArrowId> {
        self.star(x)
            .iter()
            .copied()
            .filter(|&a| self.cod(a) == y)
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows().all(|a| self.is_identity(a))
    }

    /// The restriction `(f|g)`: the unique arrow below `g` with domain `f`.
    pub fn restriction(&self, f: ObjectId, g: ArrowId) -> Result<ArrowId> {
        if f.index() >= self.num_objects() || g.index() >= self.num_arrows() {
            return Err(domain("restriction: unknown id"));
        }
        if !self.object_leq(f, self.dom(g)) {
            return Err(domain(format!(
                "restriction: {} is not below the domain of {}",
                self.object_label(f),
                self.label(g)
            )));
        }
        let mut found = self.down(g).iter().copied().filter(|&h| self.dom(h) == f);
        match (found.next(), found.next()) {
            (Some(h), None) => Ok(h),
            (None, _) => Err(breach("restriction does not exist")),
            (Some(_), Some(_)) => Err(breach("restriction is not unique")),
        }
    }

    /// The corestriction `(g|f)`, computed as `(f|g^-1)^-1`.
    pub fn corestriction(&self, g: ArrowId, f: ObjectId) -> Result<ArrowId> {
        Ok(self.inverse(self.restriction(f, self.inverse(g))?))
    }

    /// `a * b`, defined when the codomain of `a` and domain of `b` have a
    /// greatest lower bound in the object poset.
    pub fn pseudoproduct(&self, a: ArrowId, b: ArrowId) -> Option<ArrowId> {
        let m = self.objects.meet(self.cod(a), self.dom(b))?;
        let left = self.corestriction(a, m).ok()?;
        let right = self.restriction(m, b).ok()?;
        self.compose(left, right)
    }

    /// Whether the object poset is a meet semilattice.
    pub fn is_inductive(&self) -> bool {
        self.objects.is_meet_semilattice()
    }

    /// Checks that `arrows` is closed under inverse and defined composition.
    pub fn is_closed_subset(&self, arrows: &[bool]) -> bool {
        self.arrows().all(|a| {
            !arrows[a.index()]
                || (arrows[self.inverse(a).index()]
                    && self
                        .star(self.cod(a))
                        .iter()
                        .filter(|b| arrows[b.index()])
                        .all(|&b| arrows[self.compose(a, b).unwrap().index()]))
        })
    }
}

/// The product of two ordered groupoids with componentwise structure.
///
/// Arrow `(a, b)` has index `a * |B| + b`; object `(x, y)` has index
/// `x * |B_0| + y`.
pub fn product(a: &OrderedGroupoid, b: &OrderedGroupoid) -> OrderedGroupoid {
    let (ma, mb) = (a.num_objects(), b.num_objects());
    let (na, nb) = (a.num_arrows(), b.num_arrows());
    let obj = |x: usize, y: usize| ObjectId::new(x * mb + y);
    let arr = |p: ArrowId, q: ArrowId| ArrowId::new(p.index() * nb + q.index());
    let mut object_labels = Vec::with_capacity(ma * mb);
    for x in a.object_ids() {
        for y in b.object_ids() {
            object_labels.push(format!("({},{})", a.object_label(x), b.object_label(y)));
        }
    }
    let object_leq = BitMatrix::from_fn(ma * mb, |i, j| {
        a.object_leq(ObjectId::new(i / mb), ObjectId::new(j / mb))
            && b.object_leq(ObjectId::new(i % mb), ObjectId::new(j % mb))
    });
    let mut labels = Vec::with_capacity(na * nb);
    let mut dom = Vec::with_capacity(na * nb);
    let mut cod = Vec::with_capacity(na * nb);
    let mut inverse = Vec::with_capacity(na * nb);
    for p in a.arrows() {
        for q in b.arrows() {
            labels.push(format!("({},{})", a.label(p), b.label(q)));
            dom.push(obj(a.dom(p).index(), b.dom(q).index()));
            cod.push(obj(a.cod(p).index(), b.cod(q).index()));
            inverse.push(arr(a.inverse(p), b.inverse(q)));
        }
    }
    let mut identity = Vec::with_capacity(ma * mb);
    for x in a.object_ids() {
        for y in b.object_ids() {
            identity.push(arr(a.identity(x), b.identity(y)));
        }
    }
    let split = |u: ArrowId| (ArrowId::new(u.index() / nb), ArrowId::new(u.index() % nb));
    let raw = RawGroupoid::from_parts(
        object_labels,
        object_leq,
        labels,
        dom,
        cod,
        identity,
        inverse,
        |u, v| {
            let (p1, q1) = split(u);
            let (p2, q2) = split(v);
            arr(a.compose(p1, p2).unwrap(), b.compose(q1, q2).unwrap())
        },
        |i, j| {
            a.leq(ArrowId::new(i / nb), ArrowId::new(j / nb))
                && b.leq(ArrowId::new(i % nb), ArrowId::new(j % nb))
        },
    );
    OrderedGroupoid::new(raw).expect("product of ordered groupoids is ordered")
}

/// Connected components with their induced preorder and poset reflection.
#[derive(Clone, Debug)]
pub struct Pi0 {
    /// Component index of every arrow.
    pub component_of: Vec<usize>,
    pub components: Vec<Vec<ArrowId>>,
    /// `preorder.get(c, d)`: every arrow of `d` has some arrow of `c` below it.
    pub preorder: BitMatrix,
    /// Poset reflection of the preorder.
    pub poset: Poset,
    /// Element of `poset` that each component collapses to.
    pub class_of_component: Vec<usize>,
}

/// Connected components of `g`, the preorder induced by the arrow order, and
/// its partially ordered quotient.
pub fn pi0_quotient(g: &OrderedGroupoid) -> Pi0 {
    let m = g.num_objects();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for a in g.arrows() {
        let (x, y) = (
            find(&mut parent, g.dom(a).index()),
            find(&mut parent, g.cod(a).index()),
        );
        if x != y {
            parent[x.max(y)] = x.min(y);
        }
    }
    let mut root_to_comp: HashMap<usize, usize> = HashMap::new();
    let mut comp_of_object = vec![0; m];
    for (x, slot) in comp_of_object.iter_mut().enumerate() {
        let r = find(&mut parent, x);
        let next = root_to_comp.len();
        *slot = *root_to_comp.entry(r).or_insert(next);
    }
    let k = root_to_comp.len();
    let mut components = vec![Vec::new(); k];
    let component_of: Vec<usize> = g
        .arrows()
        .map(|a| comp_of_object[g.dom(a).index()])
        .collect();
    for a in g.arrows() {
        components[component_of[a.index()]].push(a);
    }
    let preorder = BitMatrix::from_fn(k, |c, d| {
        components[d]
            .iter()
            .all(|&h| g.down(h).iter().any(|&gp| component_of[gp.index()] == c))
    });
    let mut class_of_component = vec![usize::MAX; k];
    let mut reps: Vec<usize> = Vec::new();
    for (c, slot) in class_of_component.iter_mut().enumerate() {
        if let Some(pos) = reps
            .iter()
            .position(|&r| preorder.get(c, r) && preorder.get(r, c))
        {
            *slot = pos;
        } else {
            *slot = reps.len();
            reps.push(c);
        }
    }
    let labels: Vec<String> = reps
        .iter()
        .map(|&r| {
            let objs: Vec<&str> = components[r]
                .iter()
                .filter_map(|&a| g.identity_object(a))
                .map(|x| g.object_label(x))
                .collect();
            format!("{{{}}}", objs.join(","))
        })
        .collect();
    let poset = Poset::from_fn(labels, |i, j| preorder.get(reps[i], reps[j]))
        .expect("poset reflection of a preorder");
    Pi0 {
        component_of,
        components,
        preorder,
        poset,
        class_of_component,
    }
}
