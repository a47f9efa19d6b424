//! Fixed small examples: the Klein-four lifting failure, its mapping-groupoid
//! companion, and a non-inductive quotient.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::builders::groups::FiniteGroup;
use crate::builders::presheaf::{
    named_poset, presheaf_groupoid, presheaf_morphism, PresheafGroupoid, PresheafSpec,
};
use crate::error::{structural, Result};
use crate::functor::{NaturalTransformation, OrderedFunctor};
use crate::groupoid::{OrderedGroupoid, RawGroupoid};
use crate::homotopy::HomotopySquare;
use crate::ids::{ArrowId, ObjectId};
use crate::poset::Poset;

/// `E = {e, f, z}` with `z` below `e` and `f`, the semilattice of groups
/// `G` over `E`, the two-element chain of groups `H`, `i: E → G`, `p: G → H`
/// and the square with `(e, ι)F = x = (f, ι)F`.
#[derive(Clone, Debug)]
pub struct KleinHlp {
    pub e: Arc<OrderedGroupoid>,
    pub g: Arc<OrderedGroupoid>,
    pub h: Arc<OrderedGroupoid>,
    pub g_presheaf: PresheafGroupoid,
    pub h_presheaf: PresheafGroupoid,
    pub i: OrderedFunctor,
    pub p: OrderedFunctor,
    pub square: HomotopySquare,
}

pub fn klein_semilattice() -> Poset {
    named_poset(&["e", "f", "z"], &[("z", "e"), ("z", "f")])
}

fn named(group: FiniteGroup, names: &[&str]) -> FiniteGroup {
    group
        .with_names(names.iter().map(|s| s.to_string()).collect())
        .expect("names match order")
}

fn klein_g() -> PresheafGroupoid {
    let base = klein_semilattice();
    let groups = vec![
        named(FiniteGroup::cyclic(2), &["1", "a"]),
        named(FiniteGroup::cyclic(2), &["1", "b"]),
        FiniteGroup::klein(),
    ];
    let mut covers = BTreeMap::new();
    covers.insert((ObjectId(0), ObjectId(2)), vec![0, 1]);
    covers.insert((ObjectId(1), ObjectId(2)), vec![0, 2]);
    presheaf_groupoid(PresheafSpec::from_covers(base, groups, &covers).expect("inclusions"))
        .expect("semilattice of groups")
}

fn klein_h() -> PresheafGroupoid {
    let base = Poset::chain(vec!["0".into(), "1".into()]);
    let groups = vec![
        named(FiniteGroup::cyclic(2), &["1", "y"]),
        named(FiniteGroup::cyclic(2), &["1", "x"]),
    ];
    let mut covers = BTreeMap::new();
    covers.insert((ObjectId(1), ObjectId(0)), vec![0, 1]);
    presheaf_groupoid(PresheafSpec::from_covers(base, groups, &covers).expect("ψ: x ↦ y"))
        .expect("chain of groups")
}

fn klein_parts() -> (
    Arc<OrderedGroupoid>,
    PresheafGroupoid,
    PresheafGroupoid,
    OrderedFunctor,
    OrderedFunctor,
) {
    let gp = klein_g();
    let hp = klein_h();
    let e = Arc::new(OrderedGroupoid::discrete(klein_semilattice()));
    let i = OrderedFunctor::new(
        e.clone(),
        gp.groupoid.clone(),
        e.arrows()
            .map(|u| gp.groupoid.identity(ObjectId(u.0)))
            .collect(),
    )
    .expect("inclusion of identities");
    let p = presheaf_morphism(
        &gp,
        &hp,
        &[ObjectId(1), ObjectId(1), ObjectId(0)],
        &[vec![0, 1], vec![0, 1], vec![0, 1, 1, 0]],
    )
    .expect("p is an ordered functor");
    (e, gp, hp, i, p)
}

pub fn klein_hlp() -> KleinHlp {
    let (e, gp, hp, i, p) = klein_parts();
    let h = hp.groupoid.clone();
    let x = h.arrow_by_label("x@1").expect("x");
    let y = h.arrow_by_label("y@0").expect("y");
    let square = HomotopySquare::from_iota_images(e.clone(), p.clone(), i.clone(), &[x, x, y])
        .expect("F is an ordered homotopy");
    KleinHlp {
        e,
        g: gp.groupoid.clone(),
        h,
        g_presheaf: gp,
        h_presheaf: hp,
        i,
        p,
        square,
    }
}

/// The same `E, G, H, p` with `τ: ip ⇒ ip` given by `eτ = x = fτ`, `zτ = y`.
#[derive(Clone, Debug)]
pub struct PStar {
    pub e: Arc<OrderedGroupoid>,
    pub g: Arc<OrderedGroupoid>,
    pub h: Arc<OrderedGroupoid>,
    pub i: OrderedFunctor,
    pub p: OrderedFunctor,
    pub tau: NaturalTransformation,
}

pub fn pstar() -> PStar {
    let (e, gp, hp, i, p) = klein_parts();
    let h = hp.groupoid.clone();
    let x = h.arrow_by_label("x@1").expect("x");
    let y = h.arrow_by_label("y@0").expect("y");
    let ip = i.then(&p).expect("composable");
    let tau = NaturalTransformation::new(ip.clone(), ip, vec![x, x, y])
        .expect("τ is natural and ordered");
    PStar {
        e,
        g: gp.groupoid.clone(),
        h,
        i,
        p,
        tau,
    }
}

/// `S` with idempotents `x, y, k, l, m, n, z` and arrows `ι: k → l`,
/// `η: m → n`, together with the expected shape of `S ⫽ S`.
#[derive(Clone, Debug)]
pub struct ExampleVi {
    pub s: Arc<OrderedGroupoid>,
    /// Five classes: `{x}`, `{y}`, `{k,l}`, `{m,n}`, `{z}`.
    pub expected_quotient: Poset,
}

pub fn example_vi_groupoid() -> OrderedGroupoid {
    let objects = named_poset(
        &["x", "y", "k", "l", "m", "n", "z"],
        &[
            ("k", "x"),
            ("m", "x"),
            ("l", "y"),
            ("n", "y"),
            ("z", "k"),
            ("z", "l"),
            ("z", "m"),
            ("z", "n"),
        ],
    );
    let o = |s: &str| objects.index_of(s).expect("object");
    let mut labels: Vec<String> = objects.labels().iter().map(|l| format!("id:{l}")).collect();
    let mut dom: Vec<ObjectId> = objects.elements().collect();
    let mut cod = dom.clone();
    let base = labels.len();
    for (name, d, c) in [
        ("ι", "k", "l"),
        ("ι⁻¹", "l", "k"),
        ("η", "m", "n"),
        ("η⁻¹", "n", "m"),
    ] {
        labels.push(name.to_string());
        dom.push(o(d));
        cod.push(o(c));
    }
    let iota = ArrowId::new(base);
    let eta = ArrowId::new(base + 2);
    let inv = |a: ArrowId| -> ArrowId {
        match a.index() - base {
            0 => ArrowId::new(base + 1),
            1 => iota,
            2 => ArrowId::new(base + 3),
            _ => eta,
        }
    };
    let n = labels.len();
    let identity: Vec<ArrowId> = (0..base).map(ArrowId::new).collect();
    let inverse: Vec<ArrowId> = (0..n)
        .map(|a| {
            if a < base {
                ArrowId::new(a)
            } else {
                inv(ArrowId::new(a))
            }
        })
        .collect();
    let dom2 = dom.clone();
    let cod2 = cod.clone();
    let z = o("z").index();
    let rel = objects.relation().clone();
    let raw = RawGroupoid::from_parts(
        objects.labels().to_vec(),
        rel.clone(),
        labels,
        dom,
        cod,
        identity.clone(),
        inverse.clone(),
        |a, b| {
            if a.index() < base {
                b
            } else if b.index() < base {
                a
            } else if inverse[a.index()] == b {
                identity[dom2[a.index()].index()]
            } else {
                unreachable!("no other composable pairs")
            }
        },
        |i, j| {
            if i < base && j < base {
                rel.get(i, j)
            } else if i == j {
                true
            } else {
                i == z && j >= base && cod2[j] != dom2[j]
            }
        },
    );
    OrderedGroupoid::new(raw).expect("example groupoid is ordered")
}

pub fn example_vi() -> ExampleVi {
    let expected = Poset::generated(
        ["{x}", "{y}", "{k,l}", "{m,n}", "{z}"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        &[(2, 0), (3, 0), (2, 1), (3, 1), (4, 2), (4, 3)],
    )
    .expect("quotient shape");
    ExampleVi {
        s: Arc::new(example_vi_groupoid()),
        expected_quotient: expected,
    }
}

/// Names accepted by [`fixture`].
pub const FIXTURE_NAMES: [&str; 3] = ["klein_hlp", "pstar", "example_vi"];

#[derive(Clone, Debug)]
pub enum Fixture {
    KleinHlp(Box<KleinHlp>),
    PStar(Box<PStar>),
    ExampleVi(ExampleVi),
}

pub fn fixture(name: &str) -> Result<Fixture> {
    match name {
        "klein_hlp" => Ok(Fixture::KleinHlp(Box::new(klein_hlp()))),
        "pstar" => Ok(Fixture::PStar(Box::new(pstar()))),
        "example_vi" => Ok(Fixture::ExampleVi(example_vi())),
        other => Err(structural(format!("unknown fixture {other}"))),
    }
}
