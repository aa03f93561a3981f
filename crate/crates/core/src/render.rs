//! Deterministic DOT rendering of spaces and compactification pairs.
//!
//! Finite spaces draw their Hasse diagram. Tail carriers draw the canonical
//! representatives with one ellipsis node per block. In a pair diagram the
//! image of the base space is filled and the remaining target points are
//! hollow.

use std::collections::BTreeSet;

use crate::compactify::CompactificationPair;
use crate::setalg::Point;
use crate::space::SpacePresentation;

fn node_id(p: &Point) -> String {
    format!("\"{}\"", p.to_string().replace('"', "'"))
}

fn hasse_edges(x: &SpacePresentation, pts: &[Point]) -> Vec<(Point, Point)> {
    let mut edges = Vec::new();
    for a in pts {
        for b in pts {
            if a == b || !x.order().le(a, b) {
                continue;
            }
            let covered = pts
                .iter()
                .any(|c| c != a && c != b && x.order().le(a, c) && x.order().le(c, b));
            if !covered {
                edges.push((a.clone(), b.clone()));
            }
        }
    }
    edges
}

fn render_points(x: &SpacePresentation) -> Vec<Point> {
    let mut pts: BTreeSet<Point> = x.representatives(&[]).into_iter().collect();
    if !x.is_finite() {
        // Show the first few elements of each block alongside the supports.
        for b in x.carrier().blocks() {
            for n in 0..3 {
                pts.insert(Point::Elem(b.name.clone(), n));
            }
        }
    }
    pts.into_iter().collect()
}

fn write_space(out: &mut String, x: &SpacePresentation, filled: impl Fn(&Point) -> bool) {
    let pts = render_points(x);
    for p in &pts {
        let style = if filled(p) { "filled" } else { "solid" };
        out.push_str(&format!(
            "  {} [shape=circle, style={style}, fillcolor=black, fontcolor={}];\n",
            node_id(p),
            if filled(p) { "white" } else { "black" },
        ));
    }
    for b in x.carrier().blocks() {
        out.push_str(&format!("  \"{}(...)\" [shape=none];\n", b.name));
    }
    for (a, b) in hasse_edges(x, &pts) {
        out.push_str(&format!("  {} -> {};\n", node_id(&a), node_id(&b)));
    }
}

pub fn space_dot(x: &SpacePresentation) -> String {
    let mut out = String::from("digraph space {\n  rankdir=BT;\n");
    write_space(&mut out, x, |_| true);
    out.push_str("}\n");
    out
}

/// The target space with the embedded image filled and new points hollow.
pub fn pair_dot(p: &CompactificationPair) -> String {
    let img = p.e().image(&crate::setalg::RSet::full(p.x().carrier()));
    let mut out = String::from("digraph pair {\n  rankdir=BT;\n");
    write_space(&mut out, p.y(), |q| img.contains(q));
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn dot_is_deterministic_and_marks_the_image() {
        let pair = corpus::flower_pair();
        let a = pair_dot(&pair);
        let b = pair_dot(&pair);
        assert_eq!(a, b);
        assert!(a.contains("\"inf\" [shape=circle, style=solid"));
        assert!(a.contains("\"N(0)\" [shape=circle, style=filled"));
        assert!(a.contains("\"N(0)\" -> \"inf\""));
    }

    #[test]
    fn finite_hasse_has_cover_edges_only() {
        let x = corpus::poset_space(3, &[(0, 1), (1, 2), (0, 2)]);
        let dot = space_dot(&x);
        assert!(dot.contains("\"0\" -> \"1\""));
        assert!(dot.contains("\"1\" -> \"2\""));
        assert!(!dot.contains("\"0\" -> \"2\""));
    }
}
