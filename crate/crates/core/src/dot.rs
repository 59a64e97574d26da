//! Graphviz export of state systems.

use std::fmt::Write;

use crate::trees::RationalTree;

/// A `digraph` with one node per state labelled by its head; edges carry the
/// argument position and are emitted in argument order. The root is drawn
/// with a double border.
pub fn to_dot(r: &RationalTree, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for (i, s) in r.states().iter().enumerate() {
        let shape = if i == r.root() { ", shape=doublecircle" } else { "" };
        let label = if s.head.is_var() {
            format!("{}", s.head)
        } else {
            format!("{}/{}", s.head, s.succ.len())
        };
        writeln!(out, "  n{i} [label={}{shape}];", quote(&label)).unwrap();
    }
    for (i, s) in r.states().iter().enumerate() {
        for (pos, j) in s.succ.iter().enumerate() {
            writeln!(out, "  n{i} -> n{j} [label=\"{pos}\"];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Head;
    use crate::trees::State;

    #[test]
    fn edges_follow_argument_order() {
        let r = RationalTree::new(
            vec![State::new(Head::op("f"), vec![1, 0]), State::leaf(Head::var("x"))],
            0,
        )
        .unwrap();
        let dot = to_dot(&r, "t");
        assert!(dot.starts_with("digraph \"t\" {"));
        assert!(dot.contains("n0 [label=\"f/2\", shape=doublecircle];"));
        assert!(dot.contains("n1 [label=\"x\"];"));
        let first = dot.find("n0 -> n1 [label=\"0\"]").unwrap();
        let second = dot.find("n0 -> n0 [label=\"1\"]").unwrap();
        assert!(first < second);
    }
}
