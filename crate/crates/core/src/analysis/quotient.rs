use super::{AnalysisError, Digraph, Partition, Reachability};

/// `G / R`: one vertex per block, an edge between two distinct blocks when
/// any member edge crosses them. Edge kinds of the members are merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientGraph {
    pub graph: Digraph,
    pub members: Partition,
}

impl QuotientGraph {
    pub fn n(&self) -> usize {
        self.graph.n()
    }
}

pub fn quotient(g: &Digraph, p: &Partition) -> Result<QuotientGraph, AnalysisError> {
    if p.n() != g.n() {
        return Err(AnalysisError::InvalidPartition(format!(
            "partition covers {} vertices, graph has {}",
            p.n(),
            g.n()
        )));
    }
    let mut q = Digraph::new(p.len());
    for (u, v) in g.edges() {
        let (bu, bv) = (p.block_of(u), p.block_of(v));
        if bu != bv {
            q.add_labelled_edge(bu, bv, g.edge_kinds(u, v));
        }
    }
    Ok(QuotientGraph {
        graph: q,
        members: p.clone(),
    })
}

pub fn is_dag_preserving(g: &Digraph, p: &Partition) -> Result<bool, AnalysisError> {
    if !g.is_dag() {
        return Err(AnalysisError::NotADag);
    }
    Ok(quotient(g, p)?.graph.is_dag())
}

/// 1 for a block that is independent in the graph `r` was computed from,
/// otherwise its size.
pub fn exec_time_class(r: &Reachability, block: &[usize]) -> Result<usize, AnalysisError> {
    Ok(if r.is_independent_set(block)? { 1 } else { block.len() })
}

pub fn exec_time_quotient(r: &Reachability, p: &Partition) -> Result<usize, AnalysisError> {
    if p.n() != r.n() {
        return Err(AnalysisError::InvalidPartition(format!(
            "partition covers {} vertices, graph has {}",
            p.n(),
            r.n()
        )));
    }
    p.blocks().iter().map(|b| exec_time_class(r, b)).sum()
}

/// Number of vertices on a longest directed path.
pub fn longest_path_vertices(g: &Digraph) -> Result<usize, AnalysisError> {
    if g.is_empty() {
        return Err(AnalysisError::EmptyGraph);
    }
    let order = g.topo_order().ok_or(AnalysisError::NotADag)?;
    let mut len = vec![1usize; g.n()];
    for &v in &order {
        for &w in g.succ(v) {
            len[w] = len[w].max(len[v] + 1);
        }
    }
    Ok(len.into_iter().max().unwrap_or(0))
}

/// True iff the graph is a single directed path `v1 -> ... -> vk`.
pub fn check_chain(g: &Digraph) -> bool {
    let n = g.n();
    if n == 0 || g.edge_count() != n - 1 {
        return false;
    }
    if (0..n).any(|v| g.succ(v).len() > 1 || g.pred(v).len() > 1) {
        return false;
    }
    let sources: Vec<usize> = (0..n).filter(|&v| g.pred(v).is_empty()).collect();
    if sources.len() != 1 {
        return false;
    }
    let mut v = sources[0];
    let mut visited = 1;
    while let Some(&w) = g.succ(v).first() {
        visited += 1;
        if visited > n {
            return false;
        }
        v = w;
    }
    visited == n
}
