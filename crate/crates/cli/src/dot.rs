//! DOT emission for conversion hierarchies.

use std::fmt::Write;

use slocc_core::catalogue::Hierarchy;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Nodes carry structural label, local ranks and tensor rank; solid edges
/// are witnessed conversions, dashed edges are undecided pairs.
pub fn to_dot(h: &Hierarchy, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  rankdir=TB;").unwrap();
    writeln!(out, "  node [shape=box, fontname=\"Helvetica\"];").unwrap();
    for (i, d) in h.nodes.iter().enumerate() {
        let (a, b, c) = d.local_ranks;
        let mut label = format!(
            "{}\\n({a},{b},{c}) rank {}",
            escape(&d.label),
            d.tensor_rank
        );
        if !d.aliases.is_empty() {
            write!(label, "\\n{}", escape(&d.aliases.join(", "))).unwrap();
        }
        writeln!(out, "  n{i} [label=\"{label}\"];").unwrap();
    }
    for e in &h.edges {
        writeln!(out, "  n{} -> n{};", e.src, e.dst).unwrap();
    }
    for (s, d) in &h.undecided {
        writeln!(out, "  n{s} -> n{d} [style=dashed, color=gray];").unwrap();
    }
    out.push_str("}\n");
    out
}
