//! The interval groupoid, trivial groupoids, groups, and simplicial groupoids.

use crate::builders::groups::FiniteGroup;
use crate::error::{structural, Result};
use crate::groupoid::{OrderedGroupoid, RawGroupoid};
use crate::ids::{ArrowId, ObjectId};
use crate::poset::Poset;
use crate::relation::BitMatrix;

pub const INTERVAL_ZERO: ObjectId = ObjectId(0);
pub const INTERVAL_ONE: ObjectId = ObjectId(1);
pub const INTERVAL_ID0: ArrowId = ArrowId(0);
pub const INTERVAL_ID1: ArrowId = ArrowId(1);
/// `ι: 0 → 1`.
pub const IOTA: ArrowId = ArrowId(2);
/// `ι⁻¹: 1 → 0`.
pub const IOTA_INV: ArrowId = ArrowId(3);

/// The groupoid with two objects and a single isomorphism between them,
/// trivially ordered.
pub fn interval() -> OrderedGroupoid {
    let o = |i| ObjectId(i);
    let raw = RawGroupoid::from_parts(
        vec!["0".into(), "1".into()],
        BitMatrix::from_fn(2, |i, j| i == j),
        vec!["id:0".into(), "id:1".into(), "ι".into(), "ι⁻¹".into()],
        vec![o(0), o(1), o(0), o(1)],
        vec![o(0), o(1), o(1), o(0)],
        vec![INTERVAL_ID0, INTERVAL_ID1],
        vec![INTERVAL_ID0, INTERVAL_ID1, IOTA_INV, IOTA],
        |a, b| match (a.0, b.0) {
            (0, x) | (x, 1) => ArrowId(x),
            (x, 0) | (1, x) => ArrowId(x),
            (2, 3) => INTERVAL_ID0,
            (3, 2) => INTERVAL_ID1,
            _ => unreachable!("not composable"),
        },
        |i, j| i == j,
    );
    OrderedGroupoid::new(raw).expect("interval is an ordered groupoid")
}

pub fn trivial_on(poset: Poset) -> OrderedGroupoid {
    OrderedGroupoid::discrete(poset)
}

/// A group as a one-object groupoid named `*`, with the trivial order.
pub fn one_object_group(group: &FiniteGroup) -> OrderedGroupoid {
    let n = group.order();
    let labels = (0..n)
        .map(|g| {
            if g == 0 {
                "id:*".to_string()
            } else {
                group.name(g).to_string()
            }
        })
        .collect();
    let raw = RawGroupoid::from_parts(
        vec!["*".into()],
        BitMatrix::from_fn(1, |_, _| true),
        labels,
        vec![ObjectId(0); n],
        vec![ObjectId(0); n],
        vec![ArrowId(0)],
        (0..n).map(|g| ArrowId::new(group.inv(g))).collect(),
        |a, b| ArrowId::new(group.mul(a.index(), b.index())),
        |i, j| i == j,
    );
    OrderedGroupoid::new(raw).expect("group is an ordered groupoid")
}

/// The simplicial groupoid on `{0, ..., n}`: one arrow between every ordered
/// pair of objects, trivially ordered. Arrow `(i, j)` has index `i*(n+1)+j`.
pub fn simplicial(n: usize) -> OrderedGroupoid {
    let m = n + 1;
    let labels = (0..m * m)
        .map(|k| {
            let (i, j) = (k / m, k % m);
            if i == j {
                format!("id:{i}")
            } else {
                format!("{i}>{j}")
            }
        })
        .collect();
    let raw = RawGroupoid::from_parts(
        (0..m).map(|i| i.to_string()).collect(),
        BitMatrix::from_fn(m, |i, j| i == j),
        labels,
        (0..m * m).map(|k| ObjectId::new(k / m)).collect(),
        (0..m * m).map(|k| ObjectId::new(k % m)).collect(),
        (0..m).map(|i| ArrowId::new(i * m + i)).collect(),
        (0..m * m)
            .map(|k| ArrowId::new((k % m) * m + k / m))
            .collect(),
        |a, b| ArrowId::new((a.index() / m) * m + b.index() % m),
        |i, j| i == j,
    );
    OrderedGroupoid::new(raw).expect("simplicial groupoid is an ordered groupoid")
}

/// Named elementary groupoids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasicKind {
    Interval,
    Trivial(Poset),
    Simplicial(usize),
    Group(FiniteGroup),
}

impl BasicKind {
    /// Parses `interval`, `simplicial:<n>`, `cyclic:<n>`, `klein`,
    /// `symmetric3`, `quaternion`, `dihedral:<n>`, `chain:<n>`, `antichain:<n>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, arg) = match spec.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (spec, None),
        };
        let num = || -> Result<usize> {
            arg.and_then(|a| a.parse().ok())
                .ok_or_else(|| structural(format!("kind {name} needs a numeric parameter")))
        };
        let labels = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
        Ok(match name {
            "interval" => BasicKind::Interval,
            "simplicial" => BasicKind::Simplicial(num()?),
            "cyclic" => BasicKind::Group(FiniteGroup::cyclic(num()?.max(1))),
            "dihedral" => BasicKind::Group(FiniteGroup::dihedral(num()?.max(1))),
            "klein" => BasicKind::Group(FiniteGroup::klein()),
            "symmetric3" => BasicKind::Group(FiniteGroup::symmetric3()),
            "quaternion" => BasicKind::Group(FiniteGroup::quaternion()),
            "chain" => BasicKind::Trivial(Poset::chain(labels(num()?))),
            "antichain" => BasicKind::Trivial(Poset::discrete(labels(num()?))),
            other => return Err(structural(format!("unknown groupoid kind {other}"))),
        })
    }
}

pub fn basic_groupoid(kind: &BasicKind) -> OrderedGroupoid {
    match kind {
        BasicKind::Interval => interval(),
        BasicKind::Trivial(p) => trivial_on(p.clone()),
        BasicKind::Simplicial(n) => simplicial(*n),
        BasicKind::Group(g) => one_object_group(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::validate_ogpd;

    #[test]
    fn interval_counts() {
        let i = interval();
        assert_eq!((i.num_objects(), i.num_arrows()), (2, 4));
        assert_eq!(i.compose(IOTA, IOTA_INV), Some(INTERVAL_ID0));
        assert_eq!(i.inverse(IOTA), IOTA_INV);
    }

    #[test]
    fn simplicial_counts() {
        for n in 0..4 {
            let d = simplicial(n);
            assert_eq!(d.num_objects(), n + 1);
            assert_eq!(d.num_arrows(), (n + 1) * (n + 1));
            assert!(validate_ogpd(&d.to_raw()).unwrap().passed());
        }
    }

    #[test]
    fn one_point_trivial() {
        let t = trivial_on(Poset::chain(vec!["*".into()]));
        assert_eq!(t.num_arrows(), 1);
    }

    #[test]
    fn parse_kinds() {
        assert_eq!(
            basic_groupoid(&BasicKind::parse("simplicial:2").unwrap()).num_arrows(),
            9
        );
        assert_eq!(
            basic_groupoid(&BasicKind::parse("klein").unwrap()).num_arrows(),
            4
        );
        assert!(BasicKind::parse("bicyclic").is_err());
        assert!(BasicKind::parse("cyclic").is_err());
    }
}
