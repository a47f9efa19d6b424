//! Graphviz output. Objects are nodes, non-identity arrows solid edges and
//! covers of the object order dashed edges from the larger to the smaller.

use std::fmt::Write;

use crate::functor::OrderedFunctor;
use crate::groupoid::OrderedGroupoid;
use crate::quotient::Factorization;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn body(out: &mut String, g: &OrderedGroupoid, prefix: &str, indent: &str) {
    for x in g.object_ids() {
        let _ = writeln!(
            out,
            "{indent}{prefix}{} [label={}];",
            x.0,
            quote(g.object_label(x))
        );
    }
    for a in g.arrows().filter(|&a| !g.is_identity(a)) {
        let _ = writeln!(
            out,
            "{indent}{prefix}{} -> {prefix}{} [label={}];",
            g.dom(a).0,
            g.cod(a).0,
            quote(g.label(a))
        );
    }
    for (lo, hi) in g.objects().covers() {
        let _ = writeln!(
            out,
            "{indent}{prefix}{} -> {prefix}{} [style=dashed, arrowhead=none];",
            hi.0, lo.0
        );
    }
}

pub fn groupoid_dot(g: &OrderedGroupoid, name: &str) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    body(&mut out, g, "o", "  ");
    out.push_str("}\n");
    out
}

fn cluster(out: &mut String, g: &OrderedGroupoid, idx: usize, title: &str) {
    let _ = writeln!(
        out,
        "  subgraph cluster_{idx} {{\n    label={};",
        quote(title)
    );
    body(out, g, &format!("g{idx}_"), "    ");
    out.push_str("  }\n");
}

fn object_map(out: &mut String, f: &OrderedFunctor, from: usize, to: usize) {
    for x in f.source().object_ids() {
        let _ = writeln!(
            out,
            "  g{from}_{} -> g{to}_{} [style=dotted, constraint=false];",
            x.0,
            f.apply_object(x).0
        );
    }
}

/// Source and target side by side with the object map dotted.
pub fn functor_dot(f: &OrderedFunctor, name: &str) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    cluster(&mut out, f.source(), 0, "source");
    cluster(&mut out, f.target(), 1, "target");
    object_map(&mut out, f, 0, 1);
    out.push_str("}\n");
    out
}

/// `G → G ⫽ ker θ → H`.
pub fn factorization_dot(fact: &Factorization, name: &str) -> String {
    let varpi = fact.varpi();
    let mut out = format!("digraph {} {{\n", quote(name));
    cluster(&mut out, varpi.source(), 0, "G");
    cluster(&mut out, varpi.target(), 1, "G ⫽ ker θ");
    cluster(&mut out, fact.psi.target(), 2, "H");
    object_map(&mut out, varpi, 0, 1);
    object_map(&mut out, &fact.psi, 1, 2);
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::basic::trivial_on;
    use crate::builders::fixtures::example_vi;
    use crate::poset::Poset;

    fn count(s: &str, pat: &str) -> usize {
        s.lines().filter(|l| l.contains(pat)).count()
    }

    #[test]
    fn single_node() {
        let g = trivial_on(Poset::discrete(vec!["e".into()]));
        let d = groupoid_dot(&g, "one");
        assert_eq!(count(&d, "[label="), 1);
        assert_eq!(count(&d, "->"), 0);
    }

    #[test]
    fn example_vi_edges() {
        let ex = example_vi();
        let d = groupoid_dot(&ex.s, "S");
        assert_eq!(count(&d, "];") - count(&d, "->"), 7);
        assert_eq!(count(&d, "->") - count(&d, "dashed"), 4);
        assert_eq!(count(&d, "dashed"), 8);
        assert_eq!(d, groupoid_dot(&ex.s, "S"));
    }
}
