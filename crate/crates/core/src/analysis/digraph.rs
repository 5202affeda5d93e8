use std::collections::{BTreeMap, VecDeque};

use crate::builder::{DependencyKind, ExecutionGraph, KindSet};
use crate::trace::TaskInstance;

/// Directed graph over vertices `0..n` with sorted adjacency lists.
///
/// Vertices built from an [`ExecutionGraph`] carry their task instance as a
/// label and are indexed in increasing exec-id order. Edge kinds are kept
/// for display only; no analysis looks at them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Digraph {
    labels: Vec<Option<TaskInstance>>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    kinds: BTreeMap<(usize, usize), KindSet>,
    edge_count: usize,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            labels: vec![None; n],
            succ: vec![Vec::new(); n],
            pred: vec![Vec::new(); n],
            kinds: BTreeMap::new(),
            edge_count: 0,
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Digraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Projection of `eg` onto the edges whose kind is in `kinds`.
    pub fn from_execution_graph(eg: &ExecutionGraph, kinds: KindSet) -> Self {
        let mut g = Digraph::new(eg.vertex_count());
        let mut index = BTreeMap::new();
        for (i, v) in eg.vertices().enumerate() {
            g.labels[i] = Some(v);
            index.insert(v.exec_id, i);
        }
        for e in eg.edges().filter(|e| kinds.contains(e.kind)) {
            g.add_labelled_edge(index[&e.from.exec_id], index[&e.to.exec_id], e.kind.into());
        }
        g
    }

    /// Adds `u -> v`; returns false if the edge was already present.
    ///
    /// # Panics
    /// If either endpoint is out of range.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u < self.n() && v < self.n(), "edge {u} -> {v} out of range");
        match self.succ[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.succ[u].insert(pos, v);
                let pos = self.pred[v].binary_search(&u).unwrap_err();
                self.pred[v].insert(pos, u);
                self.edge_count += 1;
                true
            }
        }
    }

    /// Adds `u -> v` and merges `kinds` into the edge's kind set.
    pub fn add_labelled_edge(&mut self, u: usize, v: usize, kinds: KindSet) {
        self.add_edge(u, v);
        if kinds.is_empty() {
            return;
        }
        let entry = self.kinds.entry((u, v)).or_default();
        *entry = entry.union(kinds);
    }

    pub fn n(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn succ(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn pred(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u].binary_search(&v).is_ok()
    }

    /// Edges in `(from, to)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().map(move |&v| (u, v)))
    }

    pub fn label(&self, v: usize) -> Option<TaskInstance> {
        self.labels[v]
    }

    pub fn set_label(&mut self, v: usize, t: TaskInstance) {
        self.labels[v] = Some(t);
    }

    /// Kinds merged into `u -> v`; empty for unlabelled edges.
    pub fn edge_kinds(&self, u: usize, v: usize) -> KindSet {
        self.kinds.get(&(u, v)).copied().unwrap_or_default()
    }

    pub fn has_kind(&self, u: usize, v: usize, k: DependencyKind) -> bool {
        self.edge_kinds(u, v).contains(k)
    }

    /// Kahn order preferring smaller indices; `None` if there is a cycle.
    pub fn topo_order(&self) -> Option<Vec<usize>> {
        let mut indegree: Vec<usize> = self.pred.iter().map(Vec::len).collect();
        let mut ready: VecDeque<usize> = (0..self.n()).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n());
        while let Some(v) = ready.pop_front() {
            order.push(v);
            for &w in &self.succ[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.push_back(w);
                }
            }
        }
        (order.len() == self.n()).then_some(order)
    }

    pub fn is_dag(&self) -> bool {
        self.topo_order().is_some()
    }
}
