//! Graphviz output for execution graphs and final quotients.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::analysis::AnalysisReport;
use crate::builder::{ExecutionGraph, KindSet};
use crate::trace::TaskInstance;

/// Vertices are named `"<exec_id>: <region_id>"`; parallel edges of
/// different kinds are drawn once with the kinds joined.
pub fn graph_to_dot(g: &ExecutionGraph) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"eg_{}\" {{", g.trace_id).unwrap();
    for v in g.vertices() {
        writeln!(out, "  \"{v}\";").unwrap();
    }
    let mut merged: BTreeMap<(TaskInstance, TaskInstance), KindSet> = BTreeMap::new();
    for e in g.edges() {
        merged.entry((e.from, e.to)).or_default().insert(e.kind);
    }
    for ((from, to), kinds) in merged {
        writeln!(out, "  \"{from}\" -> \"{to}\" [label=\"{kinds}\"];").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Final symmetry quotient of a report; each vertex is named by its member
/// exec ids, ascending and comma separated. `None` when the report has no
/// quotient (cyclic or empty graph).
pub fn quotient_to_dot(report: &AnalysisReport) -> Option<String> {
    let sym = report.sym_explore.as_ref()?;
    let names: Vec<String> = sym
        .blocks
        .iter()
        .map(|b| b.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
        .collect();
    let mut out = String::new();
    writeln!(out, "digraph \"quotient_{}\" {{", report.trace_id).unwrap();
    for name in &names {
        writeln!(out, "  \"{name}\";").unwrap();
    }
    for e in &sym.quotient_edges {
        writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", names[e.from], names[e.to], e.kinds).unwrap();
    }
    out.push_str("}\n");
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::analyze;
    use crate::builder::DependencyKind;

    #[test]
    fn graph_labels_and_merged_kinds() {
        let mut g = ExecutionGraph::new(2);
        let a = TaskInstance::new(1, 1);
        let b = TaskInstance::new(3, 2);
        g.insert_edge(a, b, DependencyKind::WAW);
        g.insert_edge(a, b, DependencyKind::RAW);
        let dot = graph_to_dot(&g);
        assert_eq!(
            dot,
            "digraph \"eg_2\" {\n  \"1: 1\";\n  \"2: 3\";\n  \"1: 1\" -> \"2: 3\" [label=\"RAW,WAW\"];\n}\n"
        );
    }

    #[test]
    fn quotient_blocks() {
        let mut g = ExecutionGraph::new(0);
        for id in 1..=4 {
            g.add_vertex(TaskInstance::new(1, id));
        }
        let dot = quotient_to_dot(&analyze(&g).unwrap()).unwrap();
        assert_eq!(dot, "digraph \"quotient_0\" {\n  \"1,2,3,4\";\n}\n");
        assert!(quotient_to_dot(&analyze(&ExecutionGraph::new(0)).unwrap()).is_none());
    }
}
