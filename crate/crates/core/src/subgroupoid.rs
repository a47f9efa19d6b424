//! Arrow subsets of an ordered groupoid, with closure checks.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{structural, Result};
use crate::groupoid::{OrderedGroupoid, RawGroupoid};
use crate::ids::{ArrowId, ObjectId};
use crate::poset::Poset;
use crate::relation::BitMatrix;
use crate::report::{Axiom, ValidationReport};

/// A set of arrows of a fixed parent groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroupoid {
    parent: Arc<OrderedGroupoid>,
    members: FixedBitSet,
}

impl Subgroupoid {
    /// Builds the subset; with `with_identities` every identity of the parent is added.
    pub fn from_arrows(
        parent: Arc<OrderedGroupoid>,
        arrows: &[ArrowId],
        with_identities: bool,
    ) -> Result<Self> {
        let mut members = FixedBitSet::with_capacity(parent.num_arrows());
        for &a in arrows {
            if a.index() >= parent.num_arrows() {
                return Err(structural(format!("subgroupoid names dangling arrow {a}")));
            }
            members.insert(a.index());
        }
        if with_identities {
            for x in parent.object_ids() {
                members.insert(parent.identity(x).index());
            }
        }
        Ok(Subgroupoid { parent, members })
    }

    pub fn identities(parent: Arc<OrderedGroupoid>) -> Self {
        Self::from_arrows(parent, &[], true).expect("no arrows given")
    }

    pub fn whole(parent: Arc<OrderedGroupoid>) -> Self {
        let all: Vec<ArrowId> = parent.arrows().collect();
        Self::from_arrows(parent, &all, false).expect("arrows in range")
    }

    pub fn parent(&self) -> &Arc<OrderedGroupoid> {
        &self.parent
    }

    pub fn contains(&self, a: ArrowId) -> bool {
        self.members.contains(a.index())
    }

    pub fn mask(&self) -> Vec<bool> {
        self.parent.arrows().map(|a| self.contains(a)).collect()
    }

    pub fn arrows(&self) -> Vec<ArrowId> {
        self.members.ones().map(ArrowId::new).collect()
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Objects whose identity lies in the subset.
    pub fn objects(&self) -> Vec<ObjectId> {
        self.parent
            .object_ids()
            .filter(|&x| self.contains(self.parent.identity(x)))
            .collect()
    }

    pub fn is_wide(&self) -> bool {
        self.parent
            .object_ids()
            .all(|x| self.contains(self.parent.identity(x)))
    }

    /// Closure under endpoints' identities, inverses and defined composites.
    pub fn check_closed(&self) -> ValidationReport {
        let g = &self.parent;
        let mut report = ValidationReport::new();
        for a in self.arrows() {
            for e in [g.dom(a), g.cod(a)] {
                if !self.contains(g.identity(e)) {
                    report.record(
                        Axiom::SubgroupoidClosure,
                        &[a.0],
                        "missing endpoint identity",
                    );
                }
            }
            if !self.contains(g.inverse(a)) {
                report.record(Axiom::SubgroupoidClosure, &[a.0], "missing inverse");
            }
            for &b in g.star(g.cod(a)) {
                if self.contains(b) && !self.contains(g.compose(a, b).expect("composable")) {
                    report.record(Axiom::SubgroupoidClosure, &[a.0, b.0], "missing composite");
                }
            }
        }
        report
    }

    /// Wide, closed subgroupoid.
    pub fn check_wide(&self) -> ValidationReport {
        let mut report = self.check_closed();
        for x in self.parent.object_ids() {
            let i = self.parent.identity(x);
            if !self.contains(i) {
                report.record(Axiom::Wide, &[i.0], "identity missing");
            }
        }
        report
    }

    /// The subset as an ordered groupoid with the induced order, together
    /// with the ids of the parent arrows in order.
    pub fn induced(&self) -> Result<(OrderedGroupoid, Vec<ArrowId>)> {
        let g = &self.parent;
        let objs = self.objects();
        let mut obj_pos = vec![usize::MAX; g.num_objects()];
        for (i, &x) in objs.iter().enumerate() {
            obj_pos[x.index()] = i;
        }
        let arrows = self.arrows();
        let mut pos = vec![usize::MAX; g.num_arrows()];
        for (i, &a) in arrows.iter().enumerate() {
            pos[a.index()] = i;
        }
        let to_obj = |x: ObjectId| -> Result<ObjectId> {
            match obj_pos[x.index()] {
                usize::MAX => Err(structural("subset is not closed under endpoints")),
                i => Ok(ObjectId::new(i)),
            }
        };
        let to_arrow = |a: ArrowId| -> Result<ArrowId> {
            match pos[a.index()] {
                usize::MAX => Err(structural("subset is not closed")),
                i => Ok(ArrowId::new(i)),
            }
        };
        let object_labels: Vec<String> = objs
            .iter()
            .map(|&x| g.object_label(x).to_string())
            .collect();
        let poset = Poset::from_fn(object_labels.clone(), |i, j| g.object_leq(objs[i], objs[j]))?;
        let mut dom = Vec::new();
        let mut cod = Vec::new();
        let mut inverse = Vec::new();
        for &a in &arrows {
            dom.push(to_obj(g.dom(a))?);
            cod.push(to_obj(g.cod(a))?);
            inverse.push(to_arrow(g.inverse(a))?);
        }
        let identity = objs
            .iter()
            .map(|&x| to_arrow(g.identity(x)))
            .collect::<Result<Vec<_>>>()?;
        let mut compose = Vec::new();
        for &a in &arrows {
            for &b in g.star(g.cod(a)) {
                if self.contains(b) {
                    let c = g.compose(a, b).expect("composable");
                    compose.push((to_arrow(a)?, to_arrow(b)?, to_arrow(c)?));
                }
            }
        }
        let raw = RawGroupoid {
            object_labels,
            object_leq: poset.relation().clone(),
            arrow_labels: arrows.iter().map(|&a| g.label(a).to_string()).collect(),
            dom,
            cod,
            identity,
            inverse,
            compose,
            arrow_leq: BitMatrix::from_fn(arrows.len(), |i, j| g.leq(arrows[i], arrows[j])),
        };
        Ok((OrderedGroupoid::new(raw)?, arrows))
    }
}
