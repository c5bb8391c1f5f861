//! Graphviz rendering.

use std::fmt::Write;

use crate::automaton::WeightedAutomaton;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT text for `aut`. Edges are labelled `a/b;w`; sequential interface
/// points hang off their states as dashed boxes. Output depends only on the
/// automaton, so it is stable across runs.
pub fn to_dot(aut: &WeightedAutomaton, title: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(title)).unwrap();
    out.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    for (i, s) in aut.states().iter().enumerate() {
        writeln!(out, "  s{i} [label={}];", quote(&s.to_string())).unwrap();
    }
    for (&(s, a, b, t), w) in aut.table() {
        let label = format!("{}/{};{}", aut.left().label(a), aut.right().label(b), w);
        writeln!(out, "  s{s} -> s{t} [label={}];", quote(&label)).unwrap();
    }
    for (i, (p, s)) in aut.top().iter().enumerate() {
        writeln!(out, "  top{i} [label={}, shape=box, style=dashed];", quote(&p.to_string())).unwrap();
        writeln!(out, "  top{i} -> s{s} [style=dashed, arrowhead=none];").unwrap();
    }
    for (i, (p, s)) in aut.bottom().iter().enumerate() {
        writeln!(out, "  bottom{i} [label={}, shape=box, style=dashed];", quote(&p.to_string())).unwrap();
        writeln!(out, "  s{s} -> bottom{i} [style=dashed, arrowhead=none];").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn example_dot() {
        let dot = to_dot(&fixtures::example(), "Example");
        assert!(dot.starts_with("digraph \"Example\" {"));
        assert!(dot.contains("style=dashed"));
        assert_eq!(dot, to_dot(&fixtures::example(), "Example"));
        let fork = to_dot(&fixtures::fork(), "Fork");
        assert!(fork.contains(";1/3\"]"), "{fork}");
    }
}
