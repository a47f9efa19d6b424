//! Explicit isomorphisms of posets and ordered groupoids.

use std::sync::Arc;

use crate::error::Result;
use crate::functor::OrderedFunctor;
use crate::groupoid::OrderedGroupoid;
use crate::ids::{ArrowId, ObjectId};
use crate::poset::Poset;
use crate::search::{search_functors, Budget, FunctorSearch};

fn poset_signature(p: &Poset, x: ObjectId) -> (usize, usize) {
    let up = p.elements().filter(|&y| p.leq(x, y)).count();
    let down = p.elements().filter(|&y| p.leq(y, x)).count();
    (up, down)
}

/// All order isomorphisms `p → q` accepted by `extra(x, y)`, as element maps.
fn poset_isos(
    p: &Poset,
    q: &Poset,
    extra: &dyn Fn(ObjectId, ObjectId) -> bool,
    first_only: bool,
) -> Vec<Vec<ObjectId>> {
    let mut out = Vec::new();
    if p.len() != q.len() {
        return out;
    }
    let order = p.linear_extension();
    let mut image = vec![None; p.len()];
    let mut used = vec![false; q.len()];
    #[allow(clippy::too_many_arguments)]
    fn go(
        p: &Poset,
        q: &Poset,
        order: &[ObjectId],
        pos: usize,
        image: &mut Vec<Option<ObjectId>>,
        used: &mut Vec<bool>,
        extra: &dyn Fn(ObjectId, ObjectId) -> bool,
        out: &mut Vec<Vec<ObjectId>>,
        first_only: bool,
    ) {
        if first_only && !out.is_empty() {
            return;
        }
        let Some(&x) = order.get(pos) else {
            out.push(image.iter().map(|v| v.expect("complete")).collect());
            return;
        };
        for y in q.elements() {
            if used[y.index()] || poset_signature(p, x) != poset_signature(q, y) || !extra(x, y) {
                continue;
            }
            let consistent = order[..pos].iter().all(|&w| {
                let v = image[w.index()].expect("placed earlier");
                p.leq(w, x) == q.leq(v, y) && p.leq(x, w) == q.leq(y, v)
            });
            if !consistent {
                continue;
            }
            image[x.index()] = Some(y);
            used[y.index()] = true;
            go(p, q, order, pos + 1, image, used, extra, out, first_only);
            image[x.index()] = None;
            used[y.index()] = false;
        }
    }
    go(
        p, q, &order, 0, &mut image, &mut used, extra, &mut out, first_only,
    );
    out
}

/// An order isomorphism `p → q`, if one exists.
pub fn find_poset_isomorphism(p: &Poset, q: &Poset) -> Option<Vec<ObjectId>> {
    poset_isos(p, q, &|_, _| true, true).into_iter().next()
}

fn arrow_signature(g: &OrderedGroupoid, a: ArrowId) -> (bool, usize, usize, usize) {
    (
        g.is_identity(a),
        g.down(a).len(),
        g.up(a).len(),
        g.local_group(g.dom(a)).len(),
    )
}

/// A bijective ordered functor `a → b` with ordered inverse, if one exists.
pub fn find_isomorphism(
    a: &Arc<OrderedGroupoid>,
    b: &Arc<OrderedGroupoid>,
    budget: Budget,
) -> Result<Option<OrderedFunctor>> {
    if a.num_arrows() != b.num_arrows() || a.num_objects() != b.num_objects() {
        return Ok(None);
    }
    let object_fits = |x: ObjectId, y: ObjectId| {
        a.local_group(x).len() == b.local_group(y).len() && a.star(x).len() == b.star(y).len()
    };
    for sigma in poset_isos(a.objects(), b.objects(), &object_fits, false) {
        let allowed = |u: ArrowId, v: ArrowId| {
            sigma[a.dom(u).index()] == b.dom(v)
                && sigma[a.cod(u).index()] == b.cod(v)
                && arrow_signature(a, u) == arrow_signature(b, v)
        };
        let maps = search_functors(
            a,
            b,
            FunctorSearch {
                budget,
                allowed: Some(&allowed),
                ..Default::default()
            },
        )?;
        for m in maps {
            let f = OrderedFunctor::assemble(a.clone(), b.clone(), m);
            if is_isomorphism(&f) {
                return Ok(Some(f));
            }
        }
    }
    Ok(None)
}

/// Bijective on arrows and order-reflecting.
pub fn is_isomorphism(f: &OrderedFunctor) -> bool {
    f.is_bijective() && f.is_ordered_embedding()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::basic::{interval, simplicial};
    use crate::builders::fixtures::klein_hlp;

    #[test]
    fn interval_is_simplicial_one() {
        let i = Arc::new(interval());
        let d = Arc::new(simplicial(1));
        let f = find_isomorphism(&i, &d, Budget::default())
            .unwrap()
            .unwrap();
        assert!(is_isomorphism(&f));
    }

    #[test]
    fn klein_g_is_not_h() {
        let k = klein_hlp();
        assert!(find_isomorphism(&k.g, &k.h, Budget::default())
            .unwrap()
            .is_none());
        assert!(find_isomorphism(&k.g, &k.g, Budget::default())
            .unwrap()
            .is_some());
    }

    #[test]
    fn chain_not_antichain() {
        let c = Poset::chain(vec!["a".into(), "b".into()]);
        let d = Poset::discrete(vec!["a".into(), "b".into()]);
        assert!(find_poset_isomorphism(&c, &d).is_none());
        assert_eq!(
            find_poset_isomorphism(&c, &c).unwrap(),
            vec![ObjectId(0), ObjectId(1)]
        );
    }
}
