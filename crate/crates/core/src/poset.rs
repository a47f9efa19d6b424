use crate::error::{structural, Error, Result};
use crate::ids::ObjectId;
use crate::relation::BitMatrix;
use crate::report::{Axiom, ValidationReport};

/// A finite partially ordered set with labelled elements.
///
/// `leq.get(x, y)` means `x <= y`. The relation is checked to be a partial
/// order on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    leq: BitMatrix,
}

impl Poset {
    /// Builds a poset from the full relation, given as `(lesser, greater)` pairs.
    pub fn new(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut leq = BitMatrix::new(n);
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(structural(format!("order pair ({x},{y}) out of range {n}")));
            }
            leq.set(x, y);
        }
        Self::from_matrix(labels, leq)
    }

    /// Builds a poset from the reflexive-transitive closure of `pairs`.
    pub fn generated(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut rel = BitMatrix::new(n);
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(structural(format!("order pair ({x},{y}) out of range {n}")));
            }
            rel.set(x, y);
        }
        Self::from_matrix(labels, rel.reflexive_transitive_closure())
    }

    pub fn from_matrix(labels: Vec<String>, leq: BitMatrix) -> Result<Self> {
        if labels.len() != leq.len() {
            return Err(structural("label count does not match relation size"));
        }
        let report = check_partial_order(&leq);
        if !report.passed() {
            return Err(Error::Axioms(report));
        }
        Ok(Poset { labels, leq })
    }

    pub fn from_fn(labels: Vec<String>, f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let n = labels.len();
        Self::from_matrix(labels, BitMatrix::from_fn(n, f))
    }

    /// The antichain on `n` points.
    pub fn discrete(labels: Vec<String>) -> Self {
        let n = labels.len();
        Poset {
            labels,
            leq: BitMatrix::from_fn(n, |i, j| i == j),
        }
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(labels: Vec<String>) -> Self {
        let n = labels.len();
        Poset {
            labels,
            leq: BitMatrix::from_fn(n, |i, j| i <= j),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: ObjectId) -> &str {
        &self.labels[x.index()]
    }

    pub fn index_of(&self, label: &str) -> Option<ObjectId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(ObjectId::new)
    }

    pub fn elements(&self) -> impl Iterator<Item = ObjectId> {
        (0..self.len()).map(ObjectId::new)
    }

    #[inline]
    pub fn leq(&self, x: ObjectId, y: ObjectId) -> bool {
        self.leq.get(x.index(), y.index())
    }

    pub fn relation(&self) -> &BitMatrix {
        &self.leq
    }

    pub fn lower_bounds(&self, x: ObjectId, y: ObjectId) -> Vec<ObjectId> {
        self.elements()
            .filter(|&z| self.leq(z, x) && self.leq(z, y))
            .collect()
    }

    /// Greatest lower bound, if one exists.
    pub fn meet(&self, x: ObjectId, y: ObjectId) -> Option<ObjectId> {
        let lower = self.lower_bounds(x, y);
        lower
            .iter()
            .copied()
            .find(|&m| lower.iter().all(|&z| self.leq(z, m)))
    }

    pub fn is_meet_semilattice(&self) -> bool {
        self.elements()
            .all(|x| self.elements().all(|y| self.meet(x, y).is_some()))
    }

    /// A linear extension listing minimal elements first. Ties are broken by
    /// index so the result is deterministic.
    pub fn linear_extension(&self) -> Vec<ObjectId> {
        let n = self.len();
        let mut placed = vec![false; n];
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let next = (0..n)
                .find(|&x| !placed[x] && (0..n).all(|y| y == x || placed[y] || !self.leq.get(y, x)))
                .expect("partial order has a minimal unplaced element");
            placed[next] = true;
            out.push(ObjectId::new(next));
        }
        out
    }

    /// Covering pairs `(x, y)` with `x < y` and nothing strictly between.
    pub fn covers(&self) -> Vec<(ObjectId, ObjectId)> {
        let mut out = Vec::new();
        for x in self.elements() {
            for y in self.elements() {
                if x != y && self.leq(x, y) {
                    let between = self
                        .elements()
                        .any(|z| z != x && z != y && self.leq(x, z) && self.leq(z, y));
                    if !between {
                        out.push((x, y));
                    }
                }
            }
        }
        out
    }

    pub fn is_order_ideal(&self, subset: &[bool]) -> bool {
        self.elements().all(|y| {
            !subset[y.index()]
                || self
                    .elements()
                    .all(|x| !self.leq(x, y) || subset[x.index()])
        })
    }
}

pub(crate) fn check_partial_order(leq: &BitMatrix) -> ValidationReport {
    let n = leq.len();
    let mut report = ValidationReport::new();
    for i in 0..n {
        if !leq.get(i, i) {
            report.record(Axiom::Reflexive, &[i as u32], "missing reflexive pair");
            break;
        }
    }
    'anti: for i in 0..n {
        for j in leq.row(i).ones() {
            if i != j && leq.get(j, i) {
                report.record(
                    Axiom::Antisymmetric,
                    &[i as u32, j as u32],
                    "distinct elements below each other",
                );
                break 'anti;
            }
        }
    }
    'trans: for i in 0..n {
        for j in leq.row(i).ones() {
            let mut missing = leq.row(j).clone();
            missing.difference_with(leq.row(i));
            if let Some(k) = missing.ones().next() {
                report.record(
                    Axiom::Transitive,
                    &[i as u32, j as u32, k as u32],
                    "x<=y, y<=z but not x<=z",
                );
                break 'trans;
            }
        }
    }
    report
}
