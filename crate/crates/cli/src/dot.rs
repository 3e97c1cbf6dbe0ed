use std::fmt::Write;

use num_traits::Zero;
use pga_core::Pga;

/// Renders `a` as a Graphviz digraph.
///
/// Nonzero initial weights become labelled arrows from an invisible start
/// point, nonzero final weights labelled arrows into an exit point. Nodes are
/// emitted in state order, edges in (source, tag, target) order.
pub fn dot_export(a: &Pga) -> String {
    let mut out = String::new();
    out.push_str("digraph pga {\n");
    out.push_str("    rankdir=LR;\n");
    out.push_str("    node [shape=circle, fontsize=10];\n");
    for q in 0..a.num_states() {
        let shape = if a.final_weight(q).is_zero() { "circle" } else { "doublecircle" };
        writeln!(out, "    q{q} [label=\"{q}\", shape={shape}];").unwrap();
        if !a.initial(q).is_zero() {
            writeln!(out, "    in{q} [shape=point, style=invis];").unwrap();
            writeln!(out, "    in{q} -> q{q} [label=\"{}\"];", a.initial(q)).unwrap();
        }
        if !a.final_weight(q).is_zero() {
            writeln!(out, "    out{q} [shape=point, style=invis];").unwrap();
            writeln!(out, "    q{q} -> out{q} [label=\"{}\"];", a.final_weight(q)).unwrap();
        }
    }
    for t in a.transitions() {
        writeln!(out, "    q{} -> q{} [label=\"{}\"];", t.source, t.target, t.label()).unwrap();
    }
    out.push_str("}\n");
    out
}
