//! Bounded backtracking searches: ordered functors and monotone selections.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::RngCore;

use crate::error::{Error, Result};
use crate::functor::OrderedFunctor;
use crate::groupoid::OrderedGroupoid;
use crate::ids::{ArrowId, ObjectId};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Maximum number of partial assignments a search may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

#[derive(Debug)]
pub(crate) struct Meter {
    limit: u64,
    used: u64,
}

impl Meter {
    pub(crate) fn new(budget: Budget) -> Self {
        Meter {
            limit: budget.0,
            used: 0,
        }
    }

    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }
}

const NONE: u32 = u32::MAX;

type Filter<'a> = &'a dyn Fn(ArrowId, ArrowId) -> bool;

struct FunctorState<'a> {
    a: &'a OrderedGroupoid,
    b: &'a OrderedGroupoid,
    allowed: Option<Filter<'a>>,
    assign: Vec<u32>,
    obj_img: Vec<u32>,
    trail: Vec<u32>,
    work: Vec<(ArrowId, ArrowId)>,
}

impl<'a> FunctorState<'a> {
    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let u = self.trail.pop().expect("trail nonempty") as usize;
            self.assign[u] = NONE;
            if let Some(x) = self.a.identity_object(ArrowId::new(u)) {
                self.obj_img[x.index()] = NONE;
            }
        }
    }

    /// Assigns `u ↦ v` and every consequence; on conflict leaves a partial
    /// trail for the caller to undo.
    fn propagate(&mut self, u: ArrowId, v: ArrowId) -> bool {
        let (a, b) = (self.a, self.b);
        self.work.clear();
        self.work.push((u, v));
        while let Some((u, v)) = self.work.pop() {
            let cur = self.assign[u.index()];
            if cur != NONE {
                if cur != v.0 {
                    return false;
                }
                continue;
            }
            if let Some(f) = self.allowed {
                if !f(u, v) {
                    return false;
                }
            }
            if let Some(x) = a.identity_object(u) {
                if !b.is_identity(v) {
                    return false;
                }
                self.obj_img[x.index()] = b.dom(v).0;
            } else {
                let (d, c) = (
                    self.obj_img[a.dom(u).index()],
                    self.obj_img[a.cod(u).index()],
                );
                if d == NONE || c == NONE || b.dom(v).0 != d || b.cod(v).0 != c {
                    return false;
                }
            }
            for &w in a.up(u) {
                let img = self.assign[w.index()];
                if img != NONE && !b.leq(v, ArrowId(img)) {
                    return false;
                }
            }
            for &w in a.down(u) {
                let img = self.assign[w.index()];
                if img != NONE && !b.leq(ArrowId(img), v) {
                    return false;
                }
            }
            self.assign[u.index()] = v.0;
            self.trail.push(u.0);
            self.work.push((a.inverse(u), b.inverse(v)));
            for &w in a.star(a.cod(u)) {
                let img = self.assign[w.index()];
                if img != NONE {
                    let uw = a.compose(u, w).expect("composable");
                    match b.compose(v, ArrowId(img)) {
                        Some(vw) => self.work.push((uw, vw)),
                        None => return false,
                    }
                }
            }
            for &w in a.costar(a.dom(u)) {
                let img = self.assign[w.index()];
                if img != NONE {
                    let wu = a.compose(w, u).expect("composable");
                    match b.compose(ArrowId(img), v) {
                        Some(wv) => self.work.push((wu, wv)),
                        None => return false,
                    }
                }
            }
        }
        true
    }
}

/// Options for [`search_functors`].
#[derive(Default)]
pub struct FunctorSearch<'a> {
    pub budget: Budget,
    /// Only pairs `(u, v)` passing the filter may be assigned.
    pub allowed: Option<Filter<'a>>,
    /// Stop after this many solutions.
    pub limit: Option<usize>,
    /// Shuffle candidate lists with this generator.
    pub rng: Option<&'a mut dyn RngCore>,
}

/// All arrow maps `A → B` that are ordered functors, subject to the options.
/// Without a generator the result is sorted.
pub fn search_functors(
    a: &OrderedGroupoid,
    b: &OrderedGroupoid,
    mut opts: FunctorSearch<'_>,
) -> Result<Vec<Vec<ArrowId>>> {
    let mut order: Vec<ArrowId> = a
        .objects()
        .linear_extension()
        .into_iter()
        .map(|x| a.identity(x))
        .collect();
    order.extend(a.arrows().filter(|&u| !a.is_identity(u)));
    let mut st = FunctorState {
        a,
        b,
        allowed: opts.allowed,
        assign: vec![NONE; a.num_arrows()],
        obj_img: vec![NONE; a.num_objects()],
        trail: Vec::new(),
        work: Vec::new(),
    };
    let mut meter = Meter::new(opts.budget);
    let mut out = Vec::new();
    let shuffled = opts.rng.is_some();
    recurse(
        &mut st,
        &order,
        0,
        &mut meter,
        &mut out,
        opts.limit,
        &mut opts.rng,
    )?;
    if !shuffled {
        out.sort();
    }
    Ok(out)
}

fn recurse(
    st: &mut FunctorState<'_>,
    order: &[ArrowId],
    mut pos: usize,
    meter: &mut Meter,
    out: &mut Vec<Vec<ArrowId>>,
    limit: Option<usize>,
    rng: &mut Option<&mut dyn RngCore>,
) -> Result<()> {
    while pos < order.len() && st.assign[order[pos].index()] != NONE {
        pos += 1;
    }
    if pos == order.len() {
        out.push(st.assign.iter().map(|&v| ArrowId(v)).collect());
        return Ok(());
    }
    let u = order[pos];
    let mut candidates: Vec<ArrowId> = if st.a.is_identity(u) {
        st.b.object_ids().map(|y| st.b.identity(y)).collect()
    } else {
        let d = ObjectId(st.obj_img[st.a.dom(u).index()]);
        let c = ObjectId(st.obj_img[st.a.cod(u).index()]);
        st.b.hom(d, c)
    };
    if let Some(r) = rng.as_mut() {
        candidates.shuffle(r);
    }
    for v in candidates {
        meter.tick()?;
        let mark = st.trail.len();
        if st.propagate(u, v) {
            recurse(st, order, pos + 1, meter, out, limit, rng)?;
            if limit.is_some_and(|l| out.len() >= l) {
                st.undo(mark);
                return Ok(());
            }
        }
        st.undo(mark);
    }
    Ok(())
}

/// Every ordered functor `A → B`, sorted by arrow map.
pub fn enumerate_functors(
    a: &Arc<OrderedGroupoid>,
    b: &Arc<OrderedGroupoid>,
    budget: Budget,
) -> Result<Vec<OrderedFunctor>> {
    enumerate_functors_where(a, b, budget, &|_, _| true)
}

/// Ordered functors `A → B` whose every assignment passes `allowed`.
pub fn enumerate_functors_where(
    a: &Arc<OrderedGroupoid>,
    b: &Arc<OrderedGroupoid>,
    budget: Budget,
    allowed: &dyn Fn(ArrowId, ArrowId) -> bool,
) -> Result<Vec<OrderedFunctor>> {
    let maps = search_functors(
        a,
        b,
        FunctorSearch {
            budget,
            allowed: Some(allowed),
            ..Default::default()
        },
    )?;
    Ok(maps
        .into_iter()
        .map(|m| OrderedFunctor::assemble(a.clone(), b.clone(), m))
        .collect())
}

/// A uniformly shuffled search returning the first functor found.
pub fn random_functor(
    a: &Arc<OrderedGroupoid>,
    b: &Arc<OrderedGroupoid>,
    rng: &mut dyn RngCore,
    budget: Budget,
) -> Result<Option<OrderedFunctor>> {
    let maps = search_functors(
        a,
        b,
        FunctorSearch {
            budget,
            limit: Some(1),
            rng: Some(rng),
            ..Default::default()
        },
    )?;
    Ok(maps
        .into_iter()
        .next()
        .map(|m| OrderedFunctor::assemble(a.clone(), b.clone(), m)))
}

/// Monotone choices `x ↦ s_x ∈ candidates[x]` over a poset: `y <= x`
/// implies `s_y <= s_x`. Objects are placed along `order`.
pub(crate) fn monotone_selections(
    order: &[ObjectId],
    below: &dyn Fn(ObjectId, ObjectId) -> bool,
    candidates: &[Vec<ArrowId>],
    leq: &dyn Fn(ArrowId, ArrowId) -> bool,
    budget: Budget,
    limit: Option<usize>,
) -> Result<Vec<Vec<ArrowId>>> {
    let mut meter = Meter::new(budget);
    let mut sel = vec![ArrowId(NONE); candidates.len()];
    let mut out = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        order: &[ObjectId],
        below: &dyn Fn(ObjectId, ObjectId) -> bool,
        candidates: &[Vec<ArrowId>],
        leq: &dyn Fn(ArrowId, ArrowId) -> bool,
        sel: &mut Vec<ArrowId>,
        out: &mut Vec<Vec<ArrowId>>,
        limit: Option<usize>,
        meter: &mut Meter,
    ) -> Result<bool> {
        if i == order.len() {
            out.push(sel.clone());
            return Ok(limit.is_some_and(|l| out.len() >= l));
        }
        let x = order[i];
        for &c in &candidates[x.index()] {
            meter.tick()?;
            let ok = order[..i].iter().all(|&y| {
                let s = sel[y.index()];
                (!below(y, x) || leq(s, c)) && (!below(x, y) || leq(c, s))
            });
            if ok {
                sel[x.index()] = c;
                if go(i + 1, order, below, candidates, leq, sel, out, limit, meter)? {
                    return Ok(true);
                }
            }
        }
        sel[x.index()] = ArrowId(NONE);
        Ok(false)
    }
    go(
        0, order, below, candidates, leq, &mut sel, &mut out, limit, &mut meter,
    )?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::basic::{interval, one_object_group, trivial_on};
    use crate::builders::groups::FiniteGroup;
    use crate::functor::validate_functor;
    use crate::poset::Poset;
    use rand::SeedableRng;

    #[test]
    fn interval_endofunctors() {
        let i = Arc::new(interval());
        let fs = enumerate_functors(&i, &i, Budget::default()).unwrap();
        assert_eq!(fs.len(), 4);
        for f in &fs {
            assert!(validate_functor(&i, &i, f.map()).unwrap().passed());
        }
    }

    #[test]
    fn point_to_b_gives_one_per_object() {
        let pt = Arc::new(trivial_on(Poset::chain(vec!["*".into()])));
        let b = Arc::new(interval());
        assert_eq!(
            enumerate_functors(&pt, &b, Budget::default())
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn group_homomorphism_counts_match() {
        let c4 = FiniteGroup::cyclic(4);
        let v4 = FiniteGroup::klein();
        let a = Arc::new(one_object_group(&c4));
        let b = Arc::new(one_object_group(&v4));
        let n = enumerate_functors(&a, &b, Budget::default()).unwrap().len();
        assert_eq!(n, c4.homomorphisms(&v4).len());
        assert_eq!(n, 4);
    }

    #[test]
    fn tiny_budget_is_reported() {
        let a = Arc::new(one_object_group(&FiniteGroup::cyclic(6)));
        let err = enumerate_functors(&a, &a, Budget(3)).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { limit: 3 });
    }

    #[test]
    fn random_functor_is_valid() {
        let a = Arc::new(one_object_group(&FiniteGroup::symmetric3()));
        let b = Arc::new(one_object_group(&FiniteGroup::dihedral(4)));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let f = random_functor(&a, &b, &mut rng, Budget::default())
            .unwrap()
            .unwrap();
        assert!(validate_functor(&a, &b, f.map()).unwrap().passed());
    }

    #[test]
    fn monotone_selection_on_chain() {
        let p = Poset::chain(vec!["0".into(), "1".into()]);
        let cands = vec![vec![ArrowId(0), ArrowId(1)], vec![ArrowId(0), ArrowId(1)]];
        // order on candidates: 0 <= 1
        let sols = monotone_selections(
            &p.linear_extension(),
            &|x, y| p.leq(x, y),
            &cands,
            &|a, b| a.0 <= b.0,
            Budget::default(),
            None,
        )
        .unwrap();
        assert_eq!(sols.len(), 3);
    }
}
