use std::fmt::Write;

use super::{children, vertices, weight, Prime};
use crate::error::Result;
use crate::exactnum::format_fraction;

/// Graphviz text for the tree truncated at `depth`; vertices are labelled `n:k`
/// and carry their weight as an exact fraction.
pub fn tree_dot(p: Prime, depth: u32) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "digraph ptree {{");
    let _ = writeln!(out, "  // p = {p}, depth = {depth}");
    for v in vertices(p, depth)? {
        let name = format!("{}:{}", v.level, v.index);
        let _ = writeln!(
            out,
            "  \"{name}\" [label=\"{name}\", weight=\"{}\"];",
            format_fraction(&weight(p, v))
        );
        if v.level < depth {
            for c in children(p, v)? {
                let _ = writeln!(out, "  \"{name}\" -> \"{}:{}\";", c.level, c.index);
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}
