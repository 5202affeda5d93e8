use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{
    check_chain, exec_time_quotient, is_completely_parallel, is_completely_serial, longest_path_vertices,
    reachability, sym_explore, AnalysisError, Digraph,
};
use crate::builder::{DependencyKind, ExecutionGraph, KindSet};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// A single vertex: everything runs in one parallel step.
    Parallel,
    Chain,
    Other,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Parallel => "parallel",
            Shape::Chain => "chain",
            Shape::Other => "other",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientEdge {
    pub from: usize,
    pub to: usize,
    pub kinds: KindSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymExploreSummary {
    pub iterations: usize,
    /// Quotient size after each iteration.
    pub quotient_sizes: Vec<usize>,
    pub final_quotient_size: usize,
    pub shape: Shape,
    pub chain: bool,
    pub exec_time: usize,
    pub blocks_independent: bool,
    /// Set when the final quotient is a chain of independent blocks, in which
    /// case `exec_time` was checked against the longest path.
    pub exec_time_minimal: bool,
    /// Member exec ids of each final quotient vertex.
    pub blocks: Vec<Vec<u64>>,
    pub quotient_edges: Vec<QuotientEdge>,
}

/// Everything `analyze` computes for one execution graph. DAG-only fields
/// are `None` for cyclic input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub version: u32,
    pub trace_id: u32,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub is_dag: bool,
    pub completely_serial: Option<bool>,
    pub completely_parallel: Option<bool>,
    pub longest_path_vertices: Option<usize>,
    /// `|[v]_⊥|` keyed by exec id.
    pub ind_class_sizes: Option<BTreeMap<u64, usize>>,
    pub sym_explore: Option<SymExploreSummary>,
}

/// Kinds analysed by default: true dependencies and the extension edges
/// that keep renamed tasks ordered.
pub fn analysis_kinds() -> KindSet {
    KindSet::raw().with(DependencyKind::EXT)
}

pub fn analyze(eg: &ExecutionGraph) -> Result<AnalysisReport, AnalysisError> {
    let g = Digraph::from_execution_graph(eg, analysis_kinds());
    let mut report = AnalysisReport {
        version: REPORT_VERSION,
        trace_id: eg.trace_id,
        vertex_count: g.n(),
        edge_count: g.edge_count(),
        is_dag: g.is_dag(),
        completely_serial: None,
        completely_parallel: None,
        longest_path_vertices: None,
        ind_class_sizes: None,
        sym_explore: None,
    };
    if !report.is_dag {
        return Ok(report);
    }
    let exec_id = |v: usize| g.label(v).expect("projected vertices are labelled").exec_id;

    let r = reachability(&g);
    report.completely_serial = Some(is_completely_serial(&g)?);
    report.completely_parallel = Some(is_completely_parallel(&g)?);
    report.ind_class_sizes = Some(
        (0..g.n())
            .map(|v| Ok((exec_id(v), r.ind_class_size(v)?)))
            .collect::<Result<_, AnalysisError>>()?,
    );
    if g.is_empty() {
        return Ok(report);
    }
    let longest = longest_path_vertices(&g)?;
    report.longest_path_vertices = Some(longest);

    let sym = sym_explore(&g)?;
    let q = &sym.final_quotient;
    let chain = check_chain(&q.graph);
    let exec_time = exec_time_quotient(&r, &sym.composed)?;
    let blocks_independent = sym
        .composed
        .blocks()
        .iter()
        .map(|b| r.is_independent_set(b))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .all(|i| i);
    let exec_time_minimal = chain && blocks_independent;
    if exec_time_minimal && exec_time != longest {
        return Err(AnalysisError::InvariantViolation(format!(
            "chain quotient of independent blocks has ExecT {exec_time} but the longest path has {longest} vertices"
        )));
    }
    let mut sizes = Vec::with_capacity(sym.iterations);
    let mut size = g.n();
    for p in &sym.partitions {
        debug_assert_eq!(p.n(), size);
        size = p.len();
        sizes.push(size);
    }
    let shape = if q.n() == 1 {
        Shape::Parallel
    } else if chain {
        Shape::Chain
    } else {
        Shape::Other
    };
    report.sym_explore = Some(SymExploreSummary {
        iterations: sym.iterations,
        quotient_sizes: sizes,
        final_quotient_size: q.n(),
        shape,
        chain,
        exec_time,
        blocks_independent,
        exec_time_minimal,
        blocks: q
            .members
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&v| exec_id(v)).collect())
            .collect(),
        quotient_edges: q
            .graph
            .edges()
            .map(|(from, to)| QuotientEdge {
                from,
                to,
                kinds: q.graph.edge_kinds(from, to),
            })
            .collect(),
    });
    Ok(report)
}

impl AnalysisReport {
    /// One-line human readable summary.
    pub fn summary_line(&self) -> String {
        fn opt<T: fmt::Display>(v: Option<T>) -> String {
            v.map_or_else(|| "n/a".to_string(), |v| v.to_string())
        }
        let sym = self.sym_explore.as_ref();
        format!(
            "trace_id={} vertices={} edges={} dag={} completely_serial={} completely_parallel={} shape={} chain={} quotient={} ExecT={} longest_path={}",
            self.trace_id,
            self.vertex_count,
            self.edge_count,
            self.is_dag,
            opt(self.completely_serial),
            opt(self.completely_parallel),
            opt(sym.map(|s| s.shape)),
            opt(sym.map(|s| s.chain)),
            opt(sym.map(|s| s.final_quotient_size)),
            opt(sym.map(|s| s.exec_time)),
            opt(self.longest_path_vertices),
        )
    }
}

/// Writes `report` as pretty-printed JSON followed by a newline.
pub fn write_report<W: Write>(report: &AnalysisReport, mut w: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut w, report)?;
    w.write_all(b"\n")
}

pub fn read_report<R: Read>(r: R) -> Result<AnalysisReport, serde_json::Error> {
    serde_json::from_reader(r)
}
