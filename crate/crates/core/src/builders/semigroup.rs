//! Finite inverse semigroups as multiplication tables, and the passage to and
//! from inductive groupoids.

use crate::builders::groups::FiniteGroup;
use crate::error::{breach, structural, Error, Result};
use crate::groupoid::{OrderedGroupoid, RawGroupoid};
use crate::ids::{ArrowId, ObjectId};
use crate::relation::BitMatrix;
use crate::report::{Axiom, ValidationReport};

/// A validated finite inverse semigroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseSemigroupTable {
    names: Vec<String>,
    mul: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

/// Scans associativity, existence and uniqueness of inverses, and
/// commutation of idempotents. Shape errors are reported as `Err`.
pub fn validate_semigroup(names: &[String], mul: &[Vec<usize>]) -> Result<ValidationReport> {
    let n = names.len();
    if n == 0
        || mul.len() != n
        || mul
            .iter()
            .any(|r| r.len() != n || r.iter().any(|&v| v >= n))
    {
        return Err(structural("semigroup table has wrong shape"));
    }
    let mut report = ValidationReport::new();
    'assoc: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                    report.record(
                        Axiom::Associativity,
                        &[a as u32, b as u32, c as u32],
                        "(ab)c ≠ a(bc)",
                    );
                    break 'assoc;
                }
            }
        }
    }
    for s in 0..n {
        let inverses: Vec<usize> = (0..n)
            .filter(|&t| mul[mul[s][t]][s] == s && mul[mul[t][s]][t] == t)
            .collect();
        if inverses.len() != 1 {
            report.record(
                Axiom::Inverse,
                &[s as u32],
                format!("{} has {} inverses", names[s], inverses.len()),
            );
            break;
        }
    }
    let idempotents: Vec<usize> = (0..n).filter(|&e| mul[e][e] == e).collect();
    'comm: for &e in &idempotents {
        for &f in &idempotents {
            if mul[e][f] != mul[f][e] {
                report.record(Axiom::IdempotentsCommute, &[e as u32, f as u32], "ef ≠ fe");
                break 'comm;
            }
        }
    }
    Ok(report)
}

impl InverseSemigroupTable {
    pub fn new(names: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self> {
        let report = validate_semigroup(&names, &mul)?;
        if !report.passed() {
            return Err(Error::Axioms(report));
        }
        let n = names.len();
        let inverse = (0..n)
            .map(|s| {
                (0..n)
                    .find(|&t| mul[mul[s][t]][s] == s && mul[mul[t][s]][t] == t)
                    .expect("validated")
            })
            .collect();
        Ok(InverseSemigroupTable {
            names,
            mul,
            inverse,
        })
    }

    pub fn from_fn(names: Vec<String>, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let n = names.len();
        let mul = (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect();
        Self::new(names, mul)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.mul[e][e] == e
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&e| self.is_idempotent(e)).collect()
    }

    /// The natural partial order `s ≤ t` iff `s = (ss⁻¹)t`.
    pub fn natural_leq(&self, s: usize, t: usize) -> bool {
        self.mul(self.mul(s, self.inv(s)), t) == s
    }

    /// A group read as an inverse semigroup.
    pub fn from_group(g: &FiniteGroup) -> Self {
        Self::from_fn(g.names().to_vec(), |a, b| g.mul(a, b))
            .expect("groups are inverse semigroups")
    }

    /// The symmetric inverse monoid on `n` points, composing left to right.
    /// Each element is named by its image word, `-` marking an undefined point.
    pub fn symmetric_inverse_monoid(n: usize) -> Self {
        let mut maps: Vec<Vec<Option<usize>>> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for m in &maps {
                let mut none = m.clone();
                none.push(None);
                next.push(none);
                for v in 0..n {
                    if !m.contains(&Some(v)) {
                        let mut with = m.clone();
                        with.push(Some(v));
                        next.push(with);
                    }
                }
            }
            maps = next;
        }
        maps.sort();
        let names = maps
            .iter()
            .map(|m| {
                m.iter()
                    .map(|v| v.map_or('-', |d| char::from_digit(d as u32, 36).expect("small n")))
                    .collect()
            })
            .collect();
        let find =
            |m: &Vec<Option<usize>>| maps.binary_search(m).expect("closed under composition");
        Self::from_fn(names, |a, b| {
            let c: Vec<Option<usize>> =
                maps[a].iter().map(|x| x.and_then(|y| maps[b][y])).collect();
            find(&c)
        })
        .expect("partial bijections form an inverse monoid")
    }

    /// The Brandt semigroup `B(G, n)`: `(i, g, j)(j, h, l) = (i, gh, l)`,
    /// every other product is the zero, listed first.
    pub fn brandt(g: &FiniteGroup, n: usize) -> Self {
        let k = g.order();
        let mut names = vec!["0".to_string()];
        for i in 0..n {
            for x in 0..k {
                for j in 0..n {
                    names.push(format!("({i},{},{j})", g.name(x)));
                }
            }
        }
        let decode = |s: usize| {
            let s = s - 1;
            (s / (k * n), (s / n) % k, s % n)
        };
        let encode = |i: usize, x: usize, j: usize| 1 + i * k * n + x * n + j;
        Self::from_fn(names, |a, b| {
            if a == 0 || b == 0 {
                return 0;
            }
            let (i, x, j) = decode(a);
            let (j2, y, l) = decode(b);
            if j == j2 {
                encode(i, g.mul(x, y), l)
            } else {
                0
            }
        })
        .expect("Brandt semigroups are inverse")
    }
}

/// `G(S)`: objects are the idempotents, `s: ss⁻¹ → s⁻¹s`, composition is
/// the product where `s⁻¹s = tt⁻¹`, ordered naturally. Arrow `s` is the
/// element with index `s`.
pub fn groupoid_of(s: &InverseSemigroupTable) -> Result<OrderedGroupoid> {
    let idem = s.idempotents();
    let mut obj = vec![usize::MAX; s.len()];
    for (i, &e) in idem.iter().enumerate() {
        obj[e] = i;
    }
    let object_leq = BitMatrix::from_fn(idem.len(), |i, j| s.mul(idem[i], idem[j]) == idem[i]);
    let raw = RawGroupoid::from_parts(
        idem.iter().map(|&e| s.names[e].clone()).collect(),
        object_leq,
        s.names.clone(),
        (0..s.len())
            .map(|a| ObjectId::new(obj[s.mul(a, s.inv(a))]))
            .collect(),
        (0..s.len())
            .map(|a| ObjectId::new(obj[s.mul(s.inv(a), a)]))
            .collect(),
        idem.iter().map(|&e| ArrowId::new(e)).collect(),
        (0..s.len()).map(|a| ArrowId::new(s.inv(a))).collect(),
        |a, b| ArrowId::new(s.mul(a.index(), b.index())),
        |a, b| s.natural_leq(a, b),
    );
    OrderedGroupoid::new(raw)
}

/// The table of an inductive groupoid under the pseudoproduct.
pub fn table_from_inductive(g: &OrderedGroupoid) -> Result<InverseSemigroupTable> {
    if !g.is_inductive() {
        return Err(structural("groupoid is not inductive"));
    }
    let mul = g
        .arrows()
        .map(|a| {
            g.arrows()
                .map(|b| g.pseudoproduct(a, b).map(|c| c.index()))
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| breach("pseudoproduct undefined in an inductive groupoid"))?;
    InverseSemigroupTable::new(g.arrow_labels().to_vec(), mul)
}

/// The first triple violating `(a∗b)∗c = a∗(b∗c)`, if any.
pub fn pseudoproduct_associativity(g: &OrderedGroupoid) -> Option<(ArrowId, ArrowId, ArrowId)> {
    let pp = |a, b| g.pseudoproduct(a, b);
    for a in g.arrows() {
        for b in g.arrows() {
            for c in g.arrows() {
                let left = pp(a, b).and_then(|ab| pp(ab, c));
                let right = pp(b, c).and_then(|bc| pp(a, bc));
                if left.is_none() || left != right {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// `S → G(S) → S`, asserting inductivity and that the table comes back unchanged.
pub fn inverse_semigroup_roundtrip(
    s: &InverseSemigroupTable,
) -> Result<(OrderedGroupoid, InverseSemigroupTable)> {
    let g = groupoid_of(s)?;
    if !g.is_inductive() {
        return Err(breach("G(S) is not inductive"));
    }
    let back = table_from_inductive(&g)?;
    if back.mul != s.mul {
        return Err(breach("pseudoproduct table differs from the semigroup"));
    }
    Ok((g, back))
}
