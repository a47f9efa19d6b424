//! Validated structures built from a parsed file.

use std::collections::HashMap;
use std::sync::Arc;

use ogpd::action::GroupoidAction;
use ogpd::{
    validate_ogpd, HomotopySquare, ObjectId, OrderedFunctor, OrderedGroupoid, Poset, Subgroupoid,
    ValidationReport,
};

use crate::error::{CliError, Location};
use crate::format::{ActionDecl, GroupoidFile};

/// Outcome of checking one declaration.
#[derive(Clone, Debug)]
pub struct Check {
    pub kind: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug)]
pub struct Model {
    pub file: GroupoidFile,
    pub groupoids: Vec<Arc<OrderedGroupoid>>,
    pub functors: Vec<OrderedFunctor>,
    pub subgroupoids: Vec<Subgroupoid>,
    pub actions: Vec<GroupoidAction>,
    pub squares: Vec<HomotopySquare>,
}

fn invalid(name: &str, at: Location, e: impl ToString) -> CliError {
    CliError::Invalid {
        name: name.to_string(),
        at,
        message: e.to_string(),
    }
}

fn build_action(d: &ActionDecl, actor: &Arc<OrderedGroupoid>) -> Result<GroupoidAction, CliError> {
    let poset = Poset::from_matrix(d.elements.clone(), d.order.clone())
        .map_err(|e| invalid(&d.name, d.at, e))?;
    let table: HashMap<(usize, usize), usize> =
        d.act.iter().map(|&(x, g, y)| ((x, g.index()), y)).collect();
    for (x, &w) in d.omega.iter().enumerate() {
        for &g in actor.star(w) {
            if !table.contains_key(&(x, g.index())) {
                let msg = format!("no value for {} ◁ {}", d.elements[x], actor.label(g));
                return Err(invalid(&d.name, d.at, msg));
            }
        }
    }
    GroupoidAction::on_poset(actor.clone(), poset, d.omega.clone(), |x: ObjectId, g| {
        ObjectId::new(table[&(x.index(), g.index())])
    })
    .map_err(|e| invalid(&d.name, d.at, e))
}

fn report_text(r: &ValidationReport) -> String {
    r.to_string()
}

/// Checks every declaration, skipping those that depend on a failed one.
pub fn check_all(file: &GroupoidFile) -> Vec<Check> {
    let mut out = Vec::new();
    let mut groupoids: Vec<Option<Arc<OrderedGroupoid>>> = Vec::new();
    for d in &file.groupoids {
        let (passed, detail, g) = match validate_ogpd(&d.raw) {
            Ok(r) if r.passed() => (
                true,
                "passed".to_string(),
                OrderedGroupoid::new(d.raw.clone()).ok().map(Arc::new),
            ),
            Ok(r) => (false, report_text(&r), None),
            Err(e) => (false, e.to_string(), None),
        };
        out.push(Check {
            kind: "groupoid",
            name: d.name.clone(),
            passed,
            detail,
        });
        groupoids.push(g);
    }
    let mut functors = Vec::new();
    for d in &file.functors {
        let check = match (&groupoids[d.source], &groupoids[d.target]) {
            (Some(s), Some(t)) => match OrderedFunctor::new(s.clone(), t.clone(), d.map.clone()) {
                Ok(f) => {
                    functors.push(Some(f));
                    (true, "passed".to_string())
                }
                Err(e) => {
                    functors.push(None);
                    (false, e.to_string())
                }
            },
            _ => {
                functors.push(None);
                (false, "source or target is invalid".to_string())
            }
        };
        out.push(Check {
            kind: "functor",
            name: d.name.clone(),
            passed: check.0,
            detail: check.1,
        });
    }
    for d in &file.subgroupoids {
        let (passed, detail) = match &groupoids[d.groupoid] {
            Some(g) => {
                let s =
                    Subgroupoid::from_arrows(g.clone(), &d.arrows, true).expect("resolved arrows");
                let r = s.check_closed();
                if !r.passed() {
                    (false, report_text(&r))
                } else {
                    let normal = ogpd::quotient::is_normal(&s).passed();
                    (
                        true,
                        format!("closed, {}normal", if normal { "" } else { "not " }),
                    )
                }
            }
            None => (false, "groupoid is invalid".to_string()),
        };
        out.push(Check {
            kind: "subgroupoid",
            name: d.name.clone(),
            passed,
            detail,
        });
    }
    for d in &file.actions {
        let (passed, detail) = match &groupoids[d.actor] {
            Some(g) => match build_action(d, g) {
                Ok(_) => (true, "passed".to_string()),
                Err(e) => (false, e.to_string()),
            },
            None => (false, "actor is invalid".to_string()),
        };
        out.push(Check {
            kind: "action",
            name: d.name.clone(),
            passed,
            detail,
        });
    }
    for d in &file.squares {
        let (passed, detail) = match (&groupoids[d.a], &functors[d.p], &functors[d.f]) {
            (Some(a), Some(p), Some(f)) => {
                match HomotopySquare::from_iota_images(a.clone(), p.clone(), f.clone(), &d.iota) {
                    Ok(_) => (true, "passed".to_string()),
                    Err(e) => (false, e.to_string()),
                }
            }
            _ => (false, "a component is invalid".to_string()),
        };
        out.push(Check {
            kind: "square",
            name: d.name.clone(),
            passed,
            detail,
        });
    }
    out
}

impl Model {
    /// Builds everything, failing on the first invalid declaration.
    pub fn build(file: GroupoidFile) -> Result<Model, CliError> {
        let mut groupoids = Vec::new();
        for d in &file.groupoids {
            let g = OrderedGroupoid::new(d.raw.clone()).map_err(|e| invalid(&d.name, d.at, e))?;
            groupoids.push(Arc::new(g));
        }
        let mut functors = Vec::new();
        for d in &file.functors {
            let f = OrderedFunctor::new(
                groupoids[d.source].clone(),
                groupoids[d.target].clone(),
                d.map.clone(),
            )
            .map_err(|e| invalid(&d.name, d.at, e))?;
            functors.push(f);
        }
        let mut subgroupoids = Vec::new();
        for d in &file.subgroupoids {
            let s = Subgroupoid::from_arrows(groupoids[d.groupoid].clone(), &d.arrows, true)
                .map_err(|e| invalid(&d.name, d.at, e))?;
            let r = s.check_closed();
            if !r.passed() {
                return Err(invalid(&d.name, d.at, r));
            }
            subgroupoids.push(s);
        }
        let mut actions = Vec::new();
        for d in &file.actions {
            actions.push(build_action(d, &groupoids[d.actor])?);
        }
        let mut squares = Vec::new();
        for d in &file.squares {
            let sq = HomotopySquare::from_iota_images(
                groupoids[d.a].clone(),
                functors[d.p].clone(),
                functors[d.f].clone(),
                &d.iota,
            )
            .map_err(|e| invalid(&d.name, d.at, e))?;
            squares.push(sq);
        }
        Ok(Model {
            file,
            groupoids,
            functors,
            subgroupoids,
            actions,
            squares,
        })
    }

    fn pick(names: Vec<&str>, wanted: Option<&str>, kind: &str) -> Result<usize, CliError> {
        match wanted {
            Some(w) => names
                .iter()
                .position(|n| *n == w)
                .ok_or_else(|| CliError::Missing(format!("no {kind} named \"{w}\""))),
            None if names.is_empty() => {
                Err(CliError::Missing(format!("the file declares no {kind}")))
            }
            None => Ok(0),
        }
    }

    pub fn functor(&self, name: Option<&str>) -> Result<(&str, &OrderedFunctor), CliError> {
        let names = self.file.functors.iter().map(|d| d.name.as_str()).collect();
        let i = Self::pick(names, name, "functor")?;
        Ok((&self.file.functors[i].name, &self.functors[i]))
    }

    pub fn subgroupoid(&self, name: Option<&str>) -> Result<(&str, &Subgroupoid), CliError> {
        let names = self
            .file
            .subgroupoids
            .iter()
            .map(|d| d.name.as_str())
            .collect();
        let i = Self::pick(names, name, "subgroupoid")?;
        Ok((&self.file.subgroupoids[i].name, &self.subgroupoids[i]))
    }

    pub fn square(&self, name: Option<&str>) -> Result<(&str, &HomotopySquare), CliError> {
        let names = self.file.squares.iter().map(|d| d.name.as_str()).collect();
        let i = Self::pick(names, name, "square")?;
        Ok((&self.file.squares[i].name, &self.squares[i]))
    }

    pub fn location_of_subgroupoid(&self, name: &str) -> Location {
        self.file
            .subgroupoids
            .iter()
            .find(|d| d.name == name)
            .map_or(Location { line: 1, column: 1 }, |d| d.at)
    }
}

/// Equality up to the order in which objects and arrows are listed.
pub fn same_structure(a: &OrderedGroupoid, b: &OrderedGroupoid) -> bool {
    if a.num_objects() != b.num_objects() || a.num_arrows() != b.num_arrows() {
        return false;
    }
    let Some(obj): Option<Vec<ObjectId>> = a
        .object_ids()
        .map(|x| b.object_by_label(a.object_label(x)))
        .collect()
    else {
        return false;
    };
    let Some(arr): Option<Vec<ogpd::ArrowId>> = a
        .arrows()
        .map(|u| match a.identity_object(u) {
            Some(x) => Some(b.identity(obj[x.index()])),
            None => b.arrow_by_label(a.label(u)).filter(|&v| !b.is_identity(v)),
        })
        .collect()
    else {
        return false;
    };
    let ob = |x: ObjectId| obj[x.index()];
    let ar = |u: ogpd::ArrowId| arr[u.index()];
    a.object_ids().all(|x| {
        a.object_ids()
            .all(|y| a.object_leq(x, y) == b.object_leq(ob(x), ob(y)))
    }) && a.arrows().all(|u| {
        b.dom(ar(u)) == ob(a.dom(u))
            && b.cod(ar(u)) == ob(a.cod(u))
            && b.inverse(ar(u)) == ar(a.inverse(u))
            && a.is_identity(u) == b.is_identity(ar(u))
            && a.arrows().all(|v| {
                a.leq(u, v) == b.leq(ar(u), ar(v))
                    && a.compose(u, v).map(ar) == b.compose(ar(u), ar(v))
            })
    })
}

/// Same arrow map, read through labels.
pub fn same_functor(f: &OrderedFunctor, g: &OrderedFunctor) -> bool {
    let name = |h: &OrderedGroupoid, a: ogpd::ArrowId| match h.identity_object(a) {
        Some(x) => format!("id:{}", h.object_label(x)),
        None => h.label(a).to_string(),
    };
    same_structure(f.source(), g.source())
        && same_structure(f.target(), g.target())
        && f.source().arrows().all(|u| {
            let v = match f.source().identity_object(u) {
                Some(x) => g.source().identity(
                    g.source()
                        .object_by_label(f.source().object_label(x))
                        .expect("same objects"),
                ),
                None => g
                    .source()
                    .arrow_by_label(f.source().label(u))
                    .expect("same labels"),
            };
            name(f.target(), f.apply(u)) == name(g.target(), g.apply(v))
        })
}

impl Model {
    /// Serializes every declaration back to file text.
    pub fn write(&self) -> String {
        let f = &self.file;
        let mut w = crate::format::Writer::new();
        for (d, g) in f.groupoids.iter().zip(&self.groupoids) {
            w.groupoid(&d.name, g);
        }
        for (d, x) in f.functors.iter().zip(&self.functors) {
            w.functor(&d.name, x);
        }
        for (d, s) in f.subgroupoids.iter().zip(&self.subgroupoids) {
            w.subgroupoid(&d.name, s.parent(), &s.arrows());
        }
        for (d, a) in f.actions.iter().zip(&self.actions) {
            w.action(&d.name, a);
        }
        for (d, sq) in f.squares.iter().zip(&self.squares) {
            let (a, p, g) = (
                &f.groupoids[d.a].name,
                &f.functors[d.p].name,
                &f.functors[d.f].name,
            );
            w.square(&d.name, a, p, g, sq);
        }
        w.finish()
    }
}
