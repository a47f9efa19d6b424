//! The `.ogq` text format: TOML with `[[groupoid]]`, `[[functor]]`,
//! `[[subgroupoid]]`, `[[action]]` and `[[square]]` tables.
//!
//! Identities are generated as `id:<object>` and may not be declared.
//! Object and arrow orders are given by generating pairs `[lower, upper]`;
//! the identity order follows the object order. Every composable pair of
//! declared arrows needs a `compose` entry.

use std::collections::HashMap;
use std::ops::Range;

use ogpd::relation::BitMatrix;
use ogpd::{ArrowId, ObjectId, OrderedFunctor, OrderedGroupoid, RawGroupoid};
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::{CliError, Location};

type Pair = Spanned<Vec<Spanned<String>>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    #[serde(default)]
    groupoid: Vec<GroupoidDoc>,
    #[serde(default)]
    functor: Vec<FunctorDoc>,
    #[serde(default)]
    subgroupoid: Vec<SubgroupoidDoc>,
    #[serde(default)]
    action: Vec<ActionDoc>,
    #[serde(default)]
    square: Vec<SquareDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupoidDoc {
    name: Spanned<String>,
    objects: Vec<Spanned<String>>,
    #[serde(default)]
    order: Vec<Pair>,
    #[serde(default)]
    arrows: Vec<Pair>,
    #[serde(default)]
    inverses: Vec<Pair>,
    #[serde(default)]
    compose: Vec<Pair>,
    #[serde(default)]
    arrow_order: Vec<Pair>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctorDoc {
    name: Spanned<String>,
    source: Spanned<String>,
    target: Spanned<String>,
    objects: Vec<Pair>,
    #[serde(default)]
    arrows: Vec<Pair>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubgroupoidDoc {
    name: Spanned<String>,
    groupoid: Spanned<String>,
    #[serde(default)]
    all: bool,
    #[serde(default)]
    arrows: Vec<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionDoc {
    name: Spanned<String>,
    actor: Spanned<String>,
    elements: Vec<Spanned<String>>,
    #[serde(default)]
    order: Vec<Pair>,
    omega: Vec<Pair>,
    act: Vec<Pair>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SquareDoc {
    name: Spanned<String>,
    a: Spanned<String>,
    p: Spanned<String>,
    f: Spanned<String>,
    iota: Vec<Pair>,
}

/// A groupoid as declared, not yet checked against the axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidDecl {
    pub name: String,
    pub raw: RawGroupoid,
    pub at: Location,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorDecl {
    pub name: String,
    pub source: usize,
    pub target: usize,
    /// Image of every source arrow, identities included.
    pub map: Vec<ArrowId>,
    pub at: Location,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupoidDecl {
    pub name: String,
    pub groupoid: usize,
    /// Declared arrows plus every identity.
    pub arrows: Vec<ArrowId>,
    pub at: Location,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionDecl {
    pub name: String,
    pub actor: usize,
    pub elements: Vec<String>,
    pub order: BitMatrix,
    pub omega: Vec<ObjectId>,
    /// `(element, arrow, element)` for every `x` and `g ∈ star(xω)`.
    pub act: Vec<(usize, ArrowId, usize)>,
    pub at: Location,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareDecl {
    pub name: String,
    pub a: usize,
    pub p: usize,
    pub f: usize,
    /// `(x, ι)F` for every object `x` of `A`.
    pub iota: Vec<ArrowId>,
    pub at: Location,
}

/// A parsed file with every reference resolved to an index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupoidFile {
    pub groupoids: Vec<GroupoidDecl>,
    pub functors: Vec<FunctorDecl>,
    pub subgroupoids: Vec<SubgroupoidDecl>,
    pub actions: Vec<ActionDecl>,
    pub squares: Vec<SquareDecl>,
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn loc(&self, span: Range<usize>) -> Location {
        Location::from_offset(self.text, span.start)
    }

    fn err<T>(&self, span: Range<usize>, msg: impl Into<String>) -> Result<T, CliError> {
        Err(CliError::Semantic {
            at: self.loc(span),
            message: msg.into(),
        })
    }

    fn pair<'p>(
        &self,
        p: &'p Pair,
        len: usize,
        what: &str,
    ) -> Result<Vec<&'p Spanned<String>>, CliError> {
        if p.get_ref().len() != len {
            return self.err(p.span(), format!("{what} entries have {len} elements"));
        }
        Ok(p.get_ref().iter().collect())
    }
}

fn index_names(
    ctx: &Ctx,
    names: &[Spanned<String>],
    what: &str,
) -> Result<HashMap<String, usize>, CliError> {
    let mut out = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if out.insert(n.get_ref().clone(), i).is_some() {
            return ctx.err(n.span(), format!("duplicate {what} \"{}\"", n.get_ref()));
        }
    }
    Ok(out)
}

fn lookup(
    ctx: &Ctx,
    map: &HashMap<String, usize>,
    name: &Spanned<String>,
    what: &str,
) -> Result<usize, CliError> {
    match map.get(name.get_ref()) {
        Some(&i) => Ok(i),
        None => ctx.err(
            name.span(),
            format!("unknown {what} \"{}\"", name.get_ref()),
        ),
    }
}

fn closure(n: usize, pairs: &[(usize, usize)]) -> BitMatrix {
    let mut m = BitMatrix::new(n);
    for &(i, j) in pairs {
        m.set(i, j);
    }
    m.reflexive_transitive_closure()
}

fn groupoid(ctx: &Ctx, doc: &GroupoidDoc) -> Result<GroupoidDecl, CliError> {
    let objects = index_names(ctx, &doc.objects, "object")?;
    let m = doc.objects.len();
    let mut order = Vec::new();
    for p in &doc.order {
        let v = ctx.pair(p, 2, "order")?;
        order.push((
            lookup(ctx, &objects, v[0], "object")?,
            lookup(ctx, &objects, v[1], "object")?,
        ));
    }
    let object_leq = closure(m, &order);

    let mut labels: Vec<String> = doc
        .objects
        .iter()
        .map(|o| format!("id:{}", o.get_ref()))
        .collect();
    let mut dom: Vec<ObjectId> = (0..m).map(ObjectId::new).collect();
    let mut cod = dom.clone();
    let mut arrows: HashMap<String, usize> = labels.iter().cloned().zip(0..).collect();
    for p in &doc.arrows {
        let v = ctx.pair(p, 3, "arrow")?;
        let name = v[0].get_ref();
        if name.starts_with("id:") {
            return ctx.err(
                v[0].span(),
                format!("identity \"{name}\" is generated and may not be declared"),
            );
        }
        if arrows.insert(name.clone(), labels.len()).is_some() {
            return ctx.err(v[0].span(), format!("duplicate arrow \"{name}\""));
        }
        labels.push(name.clone());
        dom.push(ObjectId::new(lookup(ctx, &objects, v[1], "object")?));
        cod.push(ObjectId::new(lookup(ctx, &objects, v[2], "object")?));
    }
    let n = labels.len();

    let mut inverse: Vec<Option<ArrowId>> =
        (0..n).map(|a| (a < m).then(|| ArrowId::new(a))).collect();
    for p in &doc.inverses {
        let v = ctx.pair(p, 2, "inverse")?;
        let (a, b) = (
            lookup(ctx, &arrows, v[0], "arrow")?,
            lookup(ctx, &arrows, v[1], "arrow")?,
        );
        for (x, y) in [(a, b), (b, a)] {
            if inverse[x].is_some_and(|old| old.index() != y) {
                return ctx.err(
                    p.span(),
                    format!("conflicting inverse for \"{}\"", labels[x]),
                );
            }
            inverse[x] = Some(ArrowId::new(y));
        }
    }
    let inverse = inverse
        .iter()
        .enumerate()
        .map(|(a, inv)| inv.ok_or(a))
        .collect::<Result<Vec<_>, usize>>()
        .or_else(|a| {
            ctx.err(
                doc.name.span(),
                format!("no inverse declared for \"{}\"", labels[a]),
            )
        })?;

    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    for p in &doc.compose {
        let v = ctx.pair(p, 3, "compose")?;
        let a = lookup(ctx, &arrows, v[0], "arrow")?;
        let b = lookup(ctx, &arrows, v[1], "arrow")?;
        let c = lookup(ctx, &arrows, v[2], "arrow")?;
        if cod[a] != dom[b] {
            return ctx.err(
                p.span(),
                format!("\"{}\" and \"{}\" are not composable", labels[a], labels[b]),
            );
        }
        if table.insert((a, b), c).is_some() {
            return ctx.err(
                p.span(),
                format!(
                    "composite of \"{}\" and \"{}\" given twice",
                    labels[a], labels[b]
                ),
            );
        }
    }
    let mut compose = Vec::new();
    for a in 0..n {
        for b in (0..n).filter(|&b| dom[b] == cod[a]) {
            let c = if a < m {
                b
            } else if b < m {
                a
            } else {
                match table.get(&(a, b)) {
                    Some(&c) => c,
                    None => {
                        return ctx.err(
                            doc.name.span(),
                            format!(
                                "no composite given for \"{}\" and \"{}\"",
                                labels[a], labels[b]
                            ),
                        )
                    }
                }
            };
            compose.push((ArrowId::new(a), ArrowId::new(b), ArrowId::new(c)));
        }
    }

    let mut arrow_pairs = Vec::new();
    for x in 0..m {
        for y in 0..m {
            if object_leq.get(x, y) {
                arrow_pairs.push((x, y));
            }
        }
    }
    for p in &doc.arrow_order {
        let v = ctx.pair(p, 2, "arrow_order")?;
        arrow_pairs.push((
            lookup(ctx, &arrows, v[0], "arrow")?,
            lookup(ctx, &arrows, v[1], "arrow")?,
        ));
    }
    Ok(GroupoidDecl {
        name: doc.name.get_ref().clone(),
        raw: RawGroupoid {
            object_labels: doc.objects.iter().map(|o| o.get_ref().clone()).collect(),
            object_leq,
            arrow_labels: labels,
            dom,
            cod,
            identity: (0..m).map(ArrowId::new).collect(),
            inverse,
            compose,
            arrow_leq: closure(n, &arrow_pairs),
        },
        at: ctx.loc(doc.name.span()),
    })
}

struct Names {
    objects: HashMap<String, usize>,
    arrows: HashMap<String, usize>,
}

impl Names {
    fn of(raw: &RawGroupoid) -> Self {
        Names {
            objects: raw.object_labels.iter().cloned().zip(0..).collect(),
            arrows: raw.arrow_labels.iter().cloned().zip(0..).collect(),
        }
    }
}

fn functor(
    ctx: &Ctx,
    doc: &FunctorDoc,
    groupoids: &HashMap<String, usize>,
    decls: &[GroupoidDecl],
) -> Result<FunctorDecl, CliError> {
    let s = lookup(ctx, groupoids, &doc.source, "groupoid")?;
    let t = lookup(ctx, groupoids, &doc.target, "groupoid")?;
    let (src, tgt) = (&decls[s].raw, &decls[t].raw);
    let (sn, tn) = (Names::of(src), Names::of(tgt));
    let mut map: Vec<Option<ArrowId>> = vec![None; src.arrow_labels.len()];
    for p in &doc.objects {
        let v = ctx.pair(p, 2, "object map")?;
        let x = lookup(ctx, &sn.objects, v[0], "source object")?;
        let y = lookup(ctx, &tn.objects, v[1], "target object")?;
        if map[x].replace(tgt.identity[y]).is_some() {
            return ctx.err(
                p.span(),
                format!("object \"{}\" mapped twice", v[0].get_ref()),
            );
        }
    }
    for p in &doc.arrows {
        let v = ctx.pair(p, 2, "arrow map")?;
        let a = lookup(ctx, &sn.arrows, v[0], "source arrow")?;
        let b = lookup(ctx, &tn.arrows, v[1], "target arrow")?;
        if a < src.object_labels.len() {
            return ctx.err(v[0].span(), "identities follow the object map");
        }
        if map[a].replace(ArrowId::new(b)).is_some() {
            return ctx.err(
                p.span(),
                format!("arrow \"{}\" mapped twice", v[0].get_ref()),
            );
        }
    }
    let map = map
        .iter()
        .enumerate()
        .map(|(a, b)| b.ok_or(a))
        .collect::<Result<Vec<_>, usize>>()
        .or_else(|a| {
            ctx.err(
                doc.name.span(),
                format!("no image given for \"{}\"", src.arrow_labels[a]),
            )
        })?;
    Ok(FunctorDecl {
        name: doc.name.get_ref().clone(),
        source: s,
        target: t,
        map,
        at: ctx.loc(doc.name.span()),
    })
}

fn action(
    ctx: &Ctx,
    doc: &ActionDoc,
    groupoids: &HashMap<String, usize>,
    decls: &[GroupoidDecl],
) -> Result<ActionDecl, CliError> {
    let g = lookup(ctx, groupoids, &doc.actor, "groupoid")?;
    let raw = &decls[g].raw;
    let names = Names::of(raw);
    let elements = index_names(ctx, &doc.elements, "element")?;
    let mut order = Vec::new();
    for p in &doc.order {
        let v = ctx.pair(p, 2, "order")?;
        order.push((
            lookup(ctx, &elements, v[0], "element")?,
            lookup(ctx, &elements, v[1], "element")?,
        ));
    }
    let mut omega = vec![None; doc.elements.len()];
    for p in &doc.omega {
        let v = ctx.pair(p, 2, "omega")?;
        let x = lookup(ctx, &elements, v[0], "element")?;
        omega[x] = Some(ObjectId::new(lookup(ctx, &names.objects, v[1], "object")?));
    }
    let omega = omega
        .iter()
        .enumerate()
        .map(|(x, o)| o.ok_or(x))
        .collect::<Result<Vec<_>, usize>>()
        .or_else(|x| {
            ctx.err(
                doc.elements[x].span(),
                format!("no ω value for \"{}\"", doc.elements[x].get_ref()),
            )
        })?;
    let mut act = Vec::new();
    for p in &doc.act {
        let v = ctx.pair(p, 3, "act")?;
        act.push((
            lookup(ctx, &elements, v[0], "element")?,
            ArrowId::new(lookup(ctx, &names.arrows, v[1], "arrow")?),
            lookup(ctx, &elements, v[2], "element")?,
        ));
    }
    Ok(ActionDecl {
        name: doc.name.get_ref().clone(),
        actor: g,
        elements: doc.elements.iter().map(|e| e.get_ref().clone()).collect(),
        order: closure(doc.elements.len(), &order),
        omega,
        act,
        at: ctx.loc(doc.name.span()),
    })
}

/// Parses and resolves a file. Syntax errors and dangling or duplicate
/// names are reported with their line and column.
pub fn parse(text: &str) -> Result<GroupoidFile, CliError> {
    let doc: Doc = toml::from_str(text).map_err(|e| CliError::Syntax {
        at: e.span().map(|s| Location::from_offset(text, s.start)),
        message: e.message().to_string(),
    })?;
    let ctx = Ctx { text };
    let mut out = GroupoidFile::default();

    let names: Vec<Spanned<String>> = doc.groupoid.iter().map(|g| g.name.clone()).collect();
    let groupoids = index_names(&ctx, &names, "groupoid")?;
    for g in &doc.groupoid {
        out.groupoids.push(groupoid(&ctx, g)?);
    }

    let names: Vec<Spanned<String>> = doc.functor.iter().map(|f| f.name.clone()).collect();
    let functors = index_names(&ctx, &names, "functor")?;
    for f in &doc.functor {
        out.functors
            .push(functor(&ctx, f, &groupoids, &out.groupoids)?);
    }

    let names: Vec<Spanned<String>> = doc.subgroupoid.iter().map(|s| s.name.clone()).collect();
    index_names(&ctx, &names, "subgroupoid")?;
    for s in &doc.subgroupoid {
        let g = lookup(&ctx, &groupoids, &s.groupoid, "groupoid")?;
        let raw = &out.groupoids[g].raw;
        let arrow_names = Names::of(raw).arrows;
        let mut arrows: Vec<ArrowId> = if s.all {
            (0..raw.arrow_labels.len()).map(ArrowId::new).collect()
        } else {
            let mut v = raw.identity.clone();
            for a in &s.arrows {
                v.push(ArrowId::new(lookup(&ctx, &arrow_names, a, "arrow")?));
            }
            v
        };
        arrows.sort();
        arrows.dedup();
        out.subgroupoids.push(SubgroupoidDecl {
            name: s.name.get_ref().clone(),
            groupoid: g,
            arrows,
            at: ctx.loc(s.name.span()),
        });
    }

    let names: Vec<Spanned<String>> = doc.action.iter().map(|a| a.name.clone()).collect();
    index_names(&ctx, &names, "action")?;
    for a in &doc.action {
        out.actions
            .push(action(&ctx, a, &groupoids, &out.groupoids)?);
    }

    let names: Vec<Spanned<String>> = doc.square.iter().map(|s| s.name.clone()).collect();
    index_names(&ctx, &names, "square")?;
    for s in &doc.square {
        let a = lookup(&ctx, &groupoids, &s.a, "groupoid")?;
        let p = lookup(&ctx, &functors, &s.p, "functor")?;
        let f = lookup(&ctx, &functors, &s.f, "functor")?;
        let a_names = Names::of(&out.groupoids[a].raw).objects;
        let target = &out.groupoids[out.functors[p].target].raw;
        let t_names = Names::of(target).arrows;
        let mut iota = vec![None; a_names.len()];
        for e in &s.iota {
            let v = ctx.pair(e, 2, "iota")?;
            let x = lookup(&ctx, &a_names, v[0], "object")?;
            iota[x] = Some(ArrowId::new(lookup(&ctx, &t_names, v[1], "arrow")?));
        }
        let Some(iota) = iota.into_iter().collect::<Option<Vec<ArrowId>>>() else {
            return ctx.err(s.name.span(), "every object of A needs a ι-image");
        };
        out.squares.push(SquareDecl {
            name: s.name.get_ref().clone(),
            a,
            p,
            f,
            iota,
            at: ctx.loc(s.name.span()),
        });
    }
    Ok(out)
}

#[derive(Serialize, Default)]
struct OutDoc {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    groupoid: Vec<OutGroupoid>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    functor: Vec<OutFunctor>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    subgroupoid: Vec<OutSubgroupoid>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    action: Vec<OutAction>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    square: Vec<OutSquare>,
}

#[derive(Serialize)]
struct OutGroupoid {
    name: String,
    objects: Vec<String>,
    order: Vec<[String; 2]>,
    arrows: Vec<[String; 3]>,
    inverses: Vec<[String; 2]>,
    compose: Vec<[String; 3]>,
    arrow_order: Vec<[String; 2]>,
}

#[derive(Serialize)]
struct OutFunctor {
    name: String,
    source: String,
    target: String,
    objects: Vec<[String; 2]>,
    arrows: Vec<[String; 2]>,
}

#[derive(Serialize)]
struct OutSubgroupoid {
    name: String,
    groupoid: String,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    all: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    arrows: Vec<String>,
}

#[derive(Serialize)]
struct OutAction {
    name: String,
    actor: String,
    elements: Vec<String>,
    order: Vec<[String; 2]>,
    omega: Vec<[String; 2]>,
    act: Vec<[String; 3]>,
}

#[derive(Serialize)]
struct OutSquare {
    name: String,
    a: String,
    p: String,
    f: String,
    iota: Vec<[String; 2]>,
}

/// The file name of an arrow: identities are always `id:<object>`.
fn arrow_name(g: &OrderedGroupoid, a: ArrowId) -> String {
    match g.identity_object(a) {
        Some(x) => format!("id:{}", g.object_label(x)),
        None => g.label(a).to_string(),
    }
}

/// Pairs `(i, j)`, `i < j` covering in the order `leq` on `n` elements.
fn covers(n: usize, leq: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && leq(i, j) && !(0..n).any(|k| k != i && k != j && leq(i, k) && leq(k, j)) {
                out.push((i, j));
            }
        }
    }
    out
}

fn out_groupoid(name: &str, g: &OrderedGroupoid) -> OutGroupoid {
    let obj = |x: ObjectId| g.object_label(x).to_string();
    let lab = |a: ArrowId| arrow_name(g, a);
    let declared: Vec<ArrowId> = g.arrows().filter(|&a| !g.is_identity(a)).collect();
    let mut inverses = Vec::new();
    for &a in &declared {
        let b = g.inverse(a);
        if a <= b {
            inverses.push([lab(a), lab(b)]);
        }
    }
    let mut compose = Vec::new();
    for &a in &declared {
        for &b in g.star(g.cod(a)).iter().filter(|&&b| !g.is_identity(b)) {
            compose.push([lab(a), lab(b), lab(g.compose(a, b).expect("composable"))]);
        }
    }
    // identities first, as the parser lays them out
    let listed: Vec<ArrowId> = g
        .object_ids()
        .map(|x| g.identity(x))
        .chain(declared.iter().copied())
        .collect();
    let arrow_order = covers(listed.len(), |i, j| g.leq(listed[i], listed[j]))
        .into_iter()
        .map(|(i, j)| (listed[i], listed[j]))
        .filter(|&(a, b)| !(g.is_identity(a) && g.is_identity(b)))
        .map(|(a, b)| [lab(a), lab(b)])
        .collect();
    OutGroupoid {
        name: name.to_string(),
        objects: g.object_ids().map(obj).collect(),
        order: g
            .objects()
            .covers()
            .into_iter()
            .map(|(lo, hi)| [obj(lo), obj(hi)])
            .collect(),
        arrows: declared
            .iter()
            .map(|&a| [lab(a), obj(g.dom(a)), obj(g.cod(a))])
            .collect(),
        inverses,
        compose,
        arrow_order,
    }
}

/// Builds file text from validated structures. Names are given alongside.
#[derive(Default)]
pub struct Writer {
    doc: OutDoc,
    groupoids: Vec<(String, std::sync::Arc<OrderedGroupoid>)>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    fn groupoid_name(&self, g: &std::sync::Arc<OrderedGroupoid>) -> String {
        let by_ptr = self
            .groupoids
            .iter()
            .find(|(_, h)| std::sync::Arc::ptr_eq(h, g));
        by_ptr
            .or_else(|| self.groupoids.iter().find(|(_, h)| **h == **g))
            .map(|(n, _)| n.clone())
            .expect("groupoid written before use")
    }

    pub fn groupoid(&mut self, name: &str, g: &std::sync::Arc<OrderedGroupoid>) -> &mut Self {
        if !self.groupoids.iter().any(|(n, _)| n == name) {
            self.doc.groupoid.push(out_groupoid(name, g));
            self.groupoids.push((name.to_string(), g.clone()));
        }
        self
    }

    pub fn functor(&mut self, name: &str, f: &OrderedFunctor) -> &mut Self {
        let (s, t) = (f.source(), f.target());
        self.doc.functor.push(OutFunctor {
            name: name.to_string(),
            source: self.groupoid_name(s),
            target: self.groupoid_name(t),
            objects: s
                .object_ids()
                .map(|x| {
                    [
                        s.object_label(x).to_string(),
                        t.object_label(f.apply_object(x)).to_string(),
                    ]
                })
                .collect(),
            arrows: s
                .arrows()
                .filter(|&a| !s.is_identity(a))
                .map(|a| [arrow_name(s, a), arrow_name(t, f.apply(a))])
                .collect(),
        });
        self
    }

    pub fn subgroupoid(
        &mut self,
        name: &str,
        g: &std::sync::Arc<OrderedGroupoid>,
        arrows: &[ArrowId],
    ) -> &mut Self {
        let all = arrows.len() == g.num_arrows();
        let groupoid = self.groupoid_name(g);
        self.doc.subgroupoid.push(OutSubgroupoid {
            name: name.to_string(),
            groupoid,
            all,
            arrows: if all {
                Vec::new()
            } else {
                arrows
                    .iter()
                    .filter(|&&a| !g.is_identity(a))
                    .map(|&a| arrow_name(g, a))
                    .collect()
            },
        });
        self
    }

    pub fn action(&mut self, name: &str, act: &ogpd::GroupoidAction) -> &mut Self {
        let g = act.actor();
        let c = act.carrier();
        let el = |x: ObjectId| c.object_label(x).to_string();
        let mut table = Vec::new();
        for x in c.object_ids() {
            for &a in g.star(act.omega_of(c.identity(x))) {
                let y = act.act_object(x, a).expect("defined on the star");
                table.push([el(x), arrow_name(g, a), el(y)]);
            }
        }
        let actor = self.groupoid_name(g);
        self.doc.action.push(OutAction {
            name: name.to_string(),
            actor,
            elements: c.object_ids().map(el).collect(),
            order: c
                .objects()
                .covers()
                .into_iter()
                .map(|(lo, hi)| [el(lo), el(hi)])
                .collect(),
            omega: c
                .object_ids()
                .map(|x| {
                    [
                        el(x),
                        g.object_label(act.omega_of(c.identity(x))).to_string(),
                    ]
                })
                .collect(),
            act: table,
        });
        self
    }

    pub fn square(
        &mut self,
        name: &str,
        a: &str,
        p: &str,
        f: &str,
        sq: &ogpd::HomotopySquare,
    ) -> &mut Self {
        let h = sq.p().target();
        self.doc.square.push(OutSquare {
            name: name.to_string(),
            a: a.to_string(),
            p: p.to_string(),
            f: f.to_string(),
            iota: sq
                .a()
                .object_ids()
                .map(|x| {
                    [
                        sq.a().object_label(x).to_string(),
                        arrow_name(h, sq.iota_image(x)),
                    ]
                })
                .collect(),
        });
        self
    }

    pub fn finish(&self) -> String {
        toml::to_string(&self.doc).expect("plain strings serialize")
    }
}
