//! Presheaves of groups over a poset and their ordered groupoids.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::builders::groups::FiniteGroup;
use crate::error::{structural, Result};
use crate::functor::OrderedFunctor;
use crate::groupoid::{OrderedGroupoid, RawGroupoid};
use crate::ids::{ArrowId, ObjectId};
use crate::poset::Poset;

/// Groups `G_x` for `x` in a poset with linking homomorphisms
/// `α^x_y : G_x → G_y` for every `y <= x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafSpec {
    pub base: Poset,
    pub groups: Vec<FiniteGroup>,
    /// Keyed by `(x, y)` with `y <= x`.
    pub linking: BTreeMap<(ObjectId, ObjectId), Vec<usize>>,
}

impl PresheafSpec {
    /// Builds every linking map from those on covering pairs `y ⋖ x`,
    /// composing along a chosen chain. Inconsistent diamonds are caught by
    /// [`PresheafSpec::check`].
    pub fn from_covers(
        base: Poset,
        groups: Vec<FiniteGroup>,
        covers: &BTreeMap<(ObjectId, ObjectId), Vec<usize>>,
    ) -> Result<Self> {
        if groups.len() != base.len() {
            return Err(structural("one group per poset element is required"));
        }
        let mut linking = BTreeMap::new();
        for y in base.linear_extension() {
            linking.insert((y, y), groups[y.index()].identity_map());
        }
        // process x in increasing order so maps from lower elements exist
        for x in base.linear_extension() {
            for y in base.linear_extension() {
                if x == y || !base.leq(y, x) {
                    continue;
                }
                let w = base
                    .covers()
                    .into_iter()
                    .find(|&(lo, hi)| hi == x && base.leq(y, lo))
                    .map(|(lo, _)| lo)
                    .ok_or_else(|| structural("poset has no cover chain"))?;
                let first = covers
                    .get(&(x, w))
                    .ok_or_else(|| structural(format!("missing linking map on cover {x} > {w}")))?;
                let second: &Vec<usize> = linking
                    .get(&(w, y))
                    .ok_or_else(|| structural("linking maps out of order"))?;
                let composed = first.iter().map(|&g| second[g]).collect();
                linking.insert((x, y), composed);
            }
        }
        let spec = PresheafSpec {
            base,
            groups,
            linking,
        };
        spec.check()?;
        Ok(spec)
    }

    /// Checks `α^x_x = id`, homomorphism, and `α^x_y α^y_z = α^x_z`.
    pub fn check(&self) -> Result<()> {
        let p = &self.base;
        if self.groups.len() != p.len() {
            return Err(structural("one group per poset element is required"));
        }
        for x in p.elements() {
            for y in p.elements() {
                if !p.leq(y, x) {
                    continue;
                }
                let map = self
                    .linking
                    .get(&(x, y))
                    .ok_or_else(|| structural(format!("missing linking map {x} > {y}")))?;
                let (gx, gy) = (&self.groups[x.index()], &self.groups[y.index()]);
                if !gx.is_homomorphism(gy, map) {
                    return Err(structural(format!(
                        "linking map {x} > {y} is not a homomorphism"
                    )));
                }
                if x == y && *map != gx.identity_map() {
                    return Err(structural(format!(
                        "linking map at {x} is not the identity"
                    )));
                }
                for z in p.elements() {
                    if p.leq(z, y) {
                        let direct = &self.linking[&(x, z)];
                        let second = &self.linking[&(y, z)];
                        if (0..gx.order()).any(|g| second[map[g]] != direct[g]) {
                            return Err(structural(format!(
                                "linking maps {x} > {y} > {z} do not compose"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn link(&self, x: ObjectId, y: ObjectId) -> Option<&[usize]> {
        self.linking.get(&(x, y)).map(|v| v.as_slice())
    }
}

/// The ordered groupoid of a presheaf with its fibre coordinates.
#[derive(Clone, Debug)]
pub struct PresheafGroupoid {
    pub spec: PresheafSpec,
    pub groupoid: Arc<OrderedGroupoid>,
    offsets: Vec<usize>,
}

impl PresheafGroupoid {
    pub fn arrow(&self, x: ObjectId, g: usize) -> ArrowId {
        ArrowId::new(self.offsets[x.index()] + g)
    }

    pub fn arrow_named(&self, x: ObjectId, name: &str) -> Option<ArrowId> {
        self.spec.groups[x.index()]
            .element(name)
            .map(|g| self.arrow(x, g))
    }

    /// Fibre and group element of an arrow.
    pub fn coordinates(&self, a: ArrowId) -> (ObjectId, usize) {
        let x = self.groupoid.dom(a);
        (x, a.index() - self.offsets[x.index()])
    }
}

/// Disjoint union of the groups with `g >= g α^x_y`.
pub fn presheaf_groupoid(spec: PresheafSpec) -> Result<PresheafGroupoid> {
    spec.check()?;
    let p = &spec.base;
    let mut offsets = Vec::with_capacity(p.len());
    let mut total = 0;
    for g in &spec.groups {
        offsets.push(total);
        total += g.order();
    }
    let mut fibre = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    for x in p.elements() {
        let gx = &spec.groups[x.index()];
        for g in 0..gx.order() {
            fibre.push((x, g));
            labels.push(if g == 0 {
                format!("id:{}", p.label(x))
            } else {
                format!("{}@{}", gx.name(g), p.label(x))
            });
        }
    }
    let at = |x: ObjectId, g: usize| ArrowId::new(offsets[x.index()] + g);
    let raw = RawGroupoid::from_parts(
        p.labels().to_vec(),
        p.relation().clone(),
        labels,
        fibre.iter().map(|f| f.0).collect(),
        fibre.iter().map(|f| f.0).collect(),
        p.elements().map(|x| at(x, 0)).collect(),
        fibre
            .iter()
            .map(|&(x, g)| at(x, spec.groups[x.index()].inv(g)))
            .collect(),
        |a, b| {
            let (x, g) = fibre[a.index()];
            let (_, h) = fibre[b.index()];
            at(x, spec.groups[x.index()].mul(g, h))
        },
        |i, j| {
            let (y, h) = fibre[i];
            let (x, g) = fibre[j];
            p.leq(y, x) && spec.linking[&(x, y)][g] == h
        },
    );
    let groupoid = Arc::new(OrderedGroupoid::new(raw)?);
    Ok(PresheafGroupoid {
        spec,
        groupoid,
        offsets,
    })
}

/// The ordered functor induced by a monotone base map and fibrewise
/// homomorphisms `θ_x : G_x → H_{xμ}`.
pub fn presheaf_morphism(
    source: &PresheafGroupoid,
    target: &PresheafGroupoid,
    base_map: &[ObjectId],
    homs: &[Vec<usize>],
) -> Result<OrderedFunctor> {
    let p = &source.spec.base;
    if base_map.len() != p.len() || homs.len() != p.len() {
        return Err(structural("presheaf morphism data has wrong length"));
    }
    let mut map = Vec::with_capacity(source.groupoid.num_arrows());
    for a in source.groupoid.arrows() {
        let (x, g) = source.coordinates(a);
        let y = base_map[x.index()];
        let h = *homs[x.index()]
            .get(g)
            .ok_or_else(|| structural("homomorphism table too short"))?;
        if y.index() >= target.spec.base.len() || h >= target.spec.groups[y.index()].order() {
            return Err(structural("presheaf morphism points outside the target"));
        }
        map.push(target.arrow(y, h));
    }
    OrderedFunctor::new(source.groupoid.clone(), target.groupoid.clone(), map)
}

/// The relation matrix of a poset given by `(lower, upper)` pairs with labels.
pub(crate) fn named_poset(labels: &[&str], pairs: &[(&str, &str)]) -> Poset {
    let idx = |s: &str| labels.iter().position(|l| *l == s).expect("known label");
    let gen: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (idx(a), idx(b))).collect();
    Poset::generated(labels.iter().map(|s| s.to_string()).collect(), &gen)
        .expect("poset pairs are acyclic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::validate_ogpd;
    use crate::relation::BitMatrix;
    use crate::report::Axiom;

    fn chain3_spec() -> PresheafSpec {
        let base = Poset::chain(vec!["0".into(), "1".into(), "2".into()]);
        let groups = vec![
            FiniteGroup::cyclic(2),
            FiniteGroup::cyclic(4),
            FiniteGroup::cyclic(8),
        ];
        let mut covers = BTreeMap::new();
        covers.insert((ObjectId(1), ObjectId(0)), vec![0, 1, 0, 1]);
        covers.insert((ObjectId(2), ObjectId(1)), (0..8).map(|g| g % 4).collect());
        PresheafSpec::from_covers(base, groups, &covers).unwrap()
    }

    #[test]
    fn chain_presheaf_validates() {
        let pg = presheaf_groupoid(chain3_spec()).unwrap();
        assert_eq!(pg.groupoid.num_arrows(), 14);
        assert!(validate_ogpd(&pg.groupoid.to_raw()).unwrap().passed());
        // restriction is the linking map
        let g = pg.arrow(ObjectId(2), 5);
        assert_eq!(
            pg.groupoid.restriction(ObjectId(0), g).unwrap(),
            pg.arrow(ObjectId(0), 1)
        );
        assert_eq!(pg.groupoid.star(ObjectId(1)).len(), 4);
    }

    #[test]
    fn corrupted_linking_value_breaks_og2() {
        let pg = presheaf_groupoid(chain3_spec()).unwrap();
        let mut raw = pg.groupoid.to_raw();
        // send 1@2 to 0 in G_1 instead of 1, keeping 2@2 -> 2
        let g1 = pg.arrow(ObjectId(2), 1);
        let good = pg.arrow(ObjectId(1), 1);
        let bad = pg.arrow(ObjectId(1), 0);
        let n = raw.arrow_labels.len();
        let old = raw.arrow_leq.clone();
        raw.arrow_leq = BitMatrix::from_fn(n, |i, j| {
            if j == g1.index() && i == good.index() {
                false
            } else if j == g1.index() && i == bad.index() {
                true
            } else {
                old.get(i, j)
            }
        });
        let r = validate_ogpd(&raw).unwrap();
        assert!(r.has(Axiom::OG2));
        // oracle: direct OG2 scan over the corrupted order
        let g = &pg.groupoid;
        let mut found = false;
        for a in g.arrows() {
            for b in g.arrows() {
                for c in g.arrows() {
                    for d in g.arrows() {
                        if let (Some(ac), Some(bd)) = (g.compose(a, c), g.compose(b, d)) {
                            if raw.arrow_leq.get(a.index(), b.index())
                                && raw.arrow_leq.get(c.index(), d.index())
                                && !raw.arrow_leq.get(ac.index(), bd.index())
                            {
                                found = true;
                            }
                        }
                    }
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn trivial_groups_give_trivial_groupoid() {
        let base = named_poset(&["a", "b", "c"], &[("a", "b"), ("a", "c")]);
        let groups = vec![FiniteGroup::trivial(); 3];
        let mut covers = BTreeMap::new();
        covers.insert((ObjectId(1), ObjectId(0)), vec![0]);
        covers.insert((ObjectId(2), ObjectId(0)), vec![0]);
        let pg =
            presheaf_groupoid(PresheafSpec::from_covers(base.clone(), groups, &covers).unwrap())
                .unwrap();
        assert_eq!(*pg.groupoid, OrderedGroupoid::discrete(base));
    }

    #[test]
    fn non_homomorphism_rejected() {
        let base = Poset::chain(vec!["0".into(), "1".into()]);
        let mut covers = BTreeMap::new();
        covers.insert((ObjectId(1), ObjectId(0)), vec![0, 1, 1]);
        let r = PresheafSpec::from_covers(base, vec![FiniteGroup::cyclic(3); 2], &covers);
        assert!(r.is_err());
    }
}
