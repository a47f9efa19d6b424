//! Enlargements and the maximum enlargement of a star-injective functor.

use std::collections::HashMap;
use std::sync::Arc;

use crate::action::{semidirect_product, GroupoidAction, SemidirectProduct};
use crate::error::{breach, domain, Error, Result};
use crate::functor::{star_class, OrderedFunctor};
use crate::groupoid::OrderedGroupoid;
use crate::ids::{ArrowId, ObjectId};
use crate::poset::Poset;
use crate::quotient::{factorize, Factorization};
use crate::relation::BitMatrix;
use crate::report::{Axiom, ValidationReport};
use crate::search::{enumerate_functors_where, Budget};

/// An inclusion `A → B` shown to be an enlargement, with a connecting arrow
/// `b_e` (`b_e𝐝 = e`, `b_e𝐫 ∈ A₀`) for every object `e` of `B`.
#[derive(Clone, Debug)]
pub struct EnlargementWitness {
    pub inclusion: OrderedFunctor,
    pub connecting: Vec<ArrowId>,
}

/// Checks the three enlargement conditions for the image of an injective
/// ordered functor. Connecting arrows are the least ids available.
pub fn is_enlargement(inclusion: &OrderedFunctor) -> Result<EnlargementWitness> {
    if !inclusion.is_ordered_embedding() {
        return Err(domain("inclusion is not an ordered embedding"));
    }
    let (a, b) = (inclusion.source(), inclusion.target());
    let mut in_a0 = vec![false; b.num_objects()];
    for x in a.object_ids() {
        in_a0[inclusion.apply_object(x).index()] = true;
    }
    let mut in_a = vec![false; b.num_arrows()];
    for u in a.arrows() {
        in_a[inclusion.apply(u).index()] = true;
    }
    let mut report = ValidationReport::new();
    if !b.objects().is_order_ideal(&in_a0) {
        report.record(Axiom::OrderIdeal, &[], "A₀ is not an order ideal of B₀");
    }
    for v in b.arrows() {
        if in_a0[b.dom(v).index()] && in_a0[b.cod(v).index()] && !in_a[v.index()] {
            report.record(
                Axiom::Full,
                &[v.0],
                "arrow between objects of A lies outside A",
            );
        }
    }
    let mut connecting = Vec::with_capacity(b.num_objects());
    for e in b.object_ids() {
        match b
            .star(e)
            .iter()
            .copied()
            .filter(|&v| in_a0[b.cod(v).index()])
            .min()
        {
            Some(v) => connecting.push(v),
            None => {
                report.record(Axiom::Connected, &[e.0], "object is not joined to A₀");
                connecting.push(b.identity(e));
            }
        }
    }
    if report.passed() {
        Ok(EnlargementWitness {
            inclusion: inclusion.clone(),
            connecting,
        })
    } else {
        Err(Error::Axioms(report))
    }
}

/// Pairs `(e, h)` with `eφ = h𝐝` grouped into classes `e ⊗ h`, with the
/// relation `C ≤ D` iff some members satisfy `x ≤ e` and `l ≤ k`.
#[derive(Clone, Debug)]
pub struct TensorRelation {
    pub pairs: Vec<(ObjectId, ArrowId)>,
    pub class_of: Vec<usize>,
    /// Members of each class, least pair first.
    pub classes: Vec<Vec<usize>>,
    pub leq: BitMatrix,
}

impl TensorRelation {
    pub fn is_antisymmetric(&self) -> bool {
        let n = self.classes.len();
        (0..n).all(|i| (0..n).all(|j| i == j || !(self.leq.get(i, j) && self.leq.get(j, i))))
    }
}

/// The classes and induced relation, without requiring star-injectivity.
pub fn tensor_relation(phi: &OrderedFunctor) -> TensorRelation {
    let (u, h) = (phi.source(), phi.target());
    let mut pairs = Vec::new();
    for e in u.object_ids() {
        for &k in h.star(phi.apply_object(e)) {
            pairs.push((e, k));
        }
    }
    pairs.sort();
    let pos: HashMap<(ObjectId, ArrowId), usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut class_of = vec![usize::MAX; pairs.len()];
    let mut classes = Vec::new();
    for i in 0..pairs.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let (e, k) = pairs[i];
        let c = classes.len();
        let mut members = Vec::new();
        // (e, k) ≡ (v𝐫, (vφ)⁻¹k) for v ∈ star_U(e)
        for &v in u.star(e) {
            let l = h
                .compose(h.inverse(phi.apply(v)), k)
                .expect("vφ starts at eφ = k𝐝");
            let j = pos[&(u.cod(v), l)];
            if class_of[j] == usize::MAX {
                class_of[j] = c;
                members.push(j);
            }
        }
        members.sort();
        classes.push(members);
    }
    let n = classes.len();
    let mut leq = BitMatrix::new(n);
    for (i, &(x, l)) in pairs.iter().enumerate() {
        for (j, &(e, k)) in pairs.iter().enumerate() {
            if u.object_leq(x, e) && h.leq(l, k) {
                leq.set(class_of[i], class_of[j]);
            }
        }
    }
    TensorRelation {
        pairs,
        class_of,
        classes,
        leq,
    }
}

/// `U₀ ⊗ ΩH` as a poset with the right `H`-action `(f ⊗ h) ◁ m = f ⊗ hm`.
#[derive(Clone, Debug)]
pub struct TensorPoset {
    pub phi: OrderedFunctor,
    pub relation: TensorRelation,
    pub action: GroupoidAction,
}

impl TensorPoset {
    pub fn poset(&self) -> &Poset {
        self.action.carrier().objects()
    }

    /// The element `e ⊗ h`.
    pub fn element(&self, e: ObjectId, h: ArrowId) -> Option<ObjectId> {
        let r = &self.relation;
        r.pairs
            .iter()
            .position(|&p| p == (e, h))
            .map(|i| ObjectId::new(r.class_of[i]))
    }

    /// The least pair in a class.
    pub fn representative(&self, x: ObjectId) -> (ObjectId, ArrowId) {
        let r = &self.relation;
        r.pairs[r.classes[x.index()][0]]
    }
}

pub fn tensor_poset(phi: &OrderedFunctor) -> Result<TensorPoset> {
    if !star_class(phi).injective {
        return Err(domain("tensor poset needs a star-injective functor"));
    }
    let relation = tensor_relation(phi);
    if !relation.is_antisymmetric() {
        return Err(breach("tensor order is not antisymmetric"));
    }
    let h = phi.target().clone();
    let labels = relation
        .classes
        .iter()
        .map(|m| {
            let (e, k) = relation.pairs[m[0]];
            format!("{}⊗{}", phi.source().object_label(e), h.label(k))
        })
        .collect();
    let poset = Poset::from_matrix(labels, relation.leq.clone())
        .map_err(|e| breach(format!("tensor order is not a partial order: {e}")))?;
    let omega = relation
        .classes
        .iter()
        .map(|m| h.cod(relation.pairs[m[0]].1))
        .collect();
    let pos: HashMap<(ObjectId, ArrowId), usize> = relation
        .pairs
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i))
        .collect();
    let act = |x: ObjectId, m: ArrowId| -> ObjectId {
        let (e, k) = relation.pairs[relation.classes[x.index()][0]];
        let km = h.compose(k, m).expect("k𝐫 = m𝐝");
        ObjectId::new(relation.class_of[pos[&(e, km)]])
    };
    let action = GroupoidAction::on_poset(h.clone(), poset, omega, act)?;
    // the action must not depend on the representative
    for m in &relation.classes {
        let x = ObjectId::new(relation.class_of[m[0]]);
        for &i in m {
            let (e, k) = relation.pairs[i];
            for &n in h.star(h.cod(k)) {
                let km = h.compose(k, n).expect("composable");
                if action.act_object(x, n) != Some(ObjectId::new(relation.class_of[pos[&(e, km)]]))
                {
                    return Err(breach("tensor action depends on the representative"));
                }
            }
        }
    }
    Ok(TensorPoset {
        phi: phi.clone(),
        relation,
        action,
    })
}

/// `H̃_φ = H ⋉ (U₀ ⊗ ΩH)` with `i: U → H̃_φ` and the covering `π`.
#[derive(Clone, Debug)]
pub struct MaximumEnlargement {
    pub tensor: TensorPoset,
    pub sdp: SemidirectProduct,
    pub i: OrderedFunctor,
    pub pi: OrderedFunctor,
    pub witness: EnlargementWitness,
}

impl MaximumEnlargement {
    pub fn groupoid(&self) -> &Arc<OrderedGroupoid> {
        self.sdp.groupoid()
    }
}

pub fn maximum_enlargement(phi: &OrderedFunctor) -> Result<MaximumEnlargement> {
    let tensor = tensor_poset(phi)?;
    let sdp = semidirect_product(&tensor.action)?;
    let u = phi.source();
    let carrier = tensor.action.carrier();
    let mut map = Vec::with_capacity(u.num_arrows());
    for v in u.arrows() {
        let x = tensor
            .element(u.dom(v), phi.apply(v))
            .ok_or_else(|| breach("u𝐝 ⊗ uφ is not a tensor element"))?;
        map.push(
            sdp.arrow_of(phi.apply(v), carrier.identity(x))
                .ok_or_else(|| breach("(uφ, u𝐝 ⊗ uφ) is not in the semidirect product"))?,
        );
    }
    let i = OrderedFunctor::new(u.clone(), sdp.groupoid().clone(), map)
        .map_err(|e| breach(format!("i is not an ordered functor: {e}")))?;
    if !i.is_ordered_embedding() {
        return Err(breach("i is not an ordered embedding"));
    }
    let pi = sdp.projection().clone();
    if !star_class(&pi).is_covering() {
        return Err(breach("π is not a covering"));
    }
    if i.then(&pi)?.map() != phi.map() {
        return Err(breach("φ ≠ iπ"));
    }
    let witness =
        is_enlargement(&i).map_err(|e| breach(format!("H̃ is not an enlargement of Ui: {e}")))?;
    Ok(MaximumEnlargement {
        tensor,
        sdp,
        i,
        pi,
        witness,
    })
}

/// The comparison `ν: H̃_φ → C` for `φ = jξ`, and how many functors satisfy
/// `j = iν` and `π = νξ`.
#[derive(Clone, Debug)]
pub struct UniversalMap {
    pub nu: OrderedFunctor,
    pub solutions: usize,
}

pub fn universal_map(
    enl: &MaximumEnlargement,
    j: &OrderedFunctor,
    xi: &OrderedFunctor,
    budget: Budget,
) -> Result<UniversalMap> {
    let phi = &enl.tensor.phi;
    if !j.is_ordered_embedding() {
        return Err(domain("j is not an ordered embedding"));
    }
    if !star_class(xi).is_covering() {
        return Err(domain("ξ is not a covering"));
    }
    if j.then(xi)?.map() != phi.map() {
        return Err(domain("φ ≠ jξ"));
    }
    let c = xi.source();
    let ht = enl.groupoid();
    let carrier = enl.tensor.action.carrier();
    let rel = &enl.tensor.relation;
    let star_lift = |x: ObjectId, target: ArrowId| -> Result<ArrowId> {
        c.star(x)
            .iter()
            .copied()
            .find(|&d| xi.apply(d) == target)
            .ok_or_else(|| breach("covering has no star lift"))
    };
    let mut map = Vec::with_capacity(ht.num_arrows());
    for w in ht.arrows() {
        let (h, a) = enl.sdp.pair(w);
        let class = carrier.dom(a);
        let mut image = None;
        for &m in &rel.classes[class.index()] {
            let (e, k) = rel.pairs[m];
            let cc = star_lift(j.apply_object(e), k)?;
            let q = c.inverse(star_lift(c.cod(cc), enl.pi.target().inverse(h))?);
            match image {
                None => image = Some(q),
                Some(p) if p != q => return Err(breach("ν depends on the representative")),
                Some(_) => {}
            }
        }
        map.push(image.expect("classes are non-empty"));
    }
    let nu = OrderedFunctor::new(ht.clone(), c.clone(), map)
        .map_err(|e| breach(format!("ν is not an ordered functor: {e}")))?;
    if enl.i.then(&nu)?.map() != j.map() {
        return Err(breach("j ≠ iν"));
    }
    if nu.then(xi)?.map() != enl.pi.map() {
        return Err(breach("π ≠ νξ"));
    }
    let pi = &enl.pi;
    let all = enumerate_functors_where(ht, c, budget, &|w, v| xi.apply(v) == pi.apply(w))?;
    let solutions = all
        .iter()
        .filter(|m| enl.i.then(m).map(|f| f.map() == j.map()).unwrap_or(false))
        .count();
    Ok(UniversalMap { nu, solutions })
}

/// `φ = ϖ i π`: fibration onto `G ⫽ ker φ`, enlargement, covering.
#[derive(Clone, Debug)]
pub struct TripleFactorization {
    pub factorization: Factorization,
    pub enlargement: MaximumEnlargement,
}

impl TripleFactorization {
    pub fn varpi(&self) -> &OrderedFunctor {
        self.factorization.varpi()
    }
    pub fn i(&self) -> &OrderedFunctor {
        &self.enlargement.i
    }
    pub fn pi(&self) -> &OrderedFunctor {
        &self.enlargement.pi
    }
}

pub fn triple_factorization(phi: &OrderedFunctor) -> Result<TripleFactorization> {
    let factorization = factorize(phi)?;
    let enlargement = maximum_enlargement(&factorization.psi)?;
    let composite = factorization
        .varpi()
        .then(&enlargement.i)?
        .then(&enlargement.pi)?;
    if composite.map() != phi.map() {
        return Err(breach("ϖiπ ≠ φ"));
    }
    if !star_class(factorization.varpi()).is_fibration() {
        return Err(breach("ϖ is not a fibration"));
    }
    Ok(TripleFactorization {
        factorization,
        enlargement,
    })
}
