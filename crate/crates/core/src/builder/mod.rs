//! Execution graph construction from a [`ProgramTrace`](crate::trace::ProgramTrace).
//!
//! Records are replayed in order through an [`AddressTable`], which reports
//! the dependencies each access creates; the configured [`DepPolicy`] then
//! turns those into edges between task instances. Under [`DepPolicy::Ext`]
//! a dependency that would point backwards in exec-id order re-ids the
//! dependent task and links old and new instance with an `EXT` edge, so the
//! result is always a DAG topologically ordered by exec id.

mod build;
mod file;
mod table;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::trace::{TaskInstance, TraceError};

pub use build::{add_dep, add_dep_ext, build_eg, project, verify_topo_order, BuildConfig, DepPolicy, RenameMap};
pub use file::{read_graph, write_graph, GraphFile, GraphFileError, GRAPH_FILE_VERSION};
pub use table::{AddressTable, TableMode};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("self dependency on exec id {0}")]
    SelfDependency(u64),
    #[error("kind filter is empty")]
    EmptyKindFilter,
    #[error(transparent)]
    Trace(#[from] TraceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum DependencyKind {
    RAW,
    WAR,
    WAW,
    EXT,
}

impl DependencyKind {
    pub const ALL: [DependencyKind; 4] = [
        DependencyKind::RAW,
        DependencyKind::WAR,
        DependencyKind::WAW,
        DependencyKind::EXT,
    ];

    fn bit(self) -> u8 {
        1 << self as u8
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DependencyKind::RAW => "RAW",
            DependencyKind::WAR => "WAR",
            DependencyKind::WAW => "WAW",
            DependencyKind::EXT => "EXT",
        }
    }
}

impl fmt::Display for DependencyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DependencyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "raw" => Ok(DependencyKind::RAW),
            "war" => Ok(DependencyKind::WAR),
            "waw" => Ok(DependencyKind::WAW),
            "ext" => Ok(DependencyKind::EXT),
            _ => Err(format!("unknown dependency kind {s:?}")),
        }
    }
}

/// A set of [`DependencyKind`]s.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KindSet(u8);

impl KindSet {
    pub const EMPTY: KindSet = KindSet(0);

    pub fn all() -> Self {
        DependencyKind::ALL.into_iter().collect()
    }

    pub fn raw() -> Self {
        KindSet::from(DependencyKind::RAW)
    }

    pub fn contains(self, k: DependencyKind) -> bool {
        self.0 & k.bit() != 0
    }

    pub fn insert(&mut self, k: DependencyKind) {
        self.0 |= k.bit();
    }

    pub fn with(mut self, k: DependencyKind) -> Self {
        self.insert(k);
        self
    }

    pub fn union(self, other: KindSet) -> Self {
        KindSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = DependencyKind> {
        DependencyKind::ALL.into_iter().filter(move |k| self.contains(*k))
    }
}

impl From<DependencyKind> for KindSet {
    fn from(k: DependencyKind) -> Self {
        KindSet(k.bit())
    }
}

impl FromIterator<DependencyKind> for KindSet {
    fn from_iter<I: IntoIterator<Item = DependencyKind>>(iter: I) -> Self {
        let mut s = KindSet::EMPTY;
        iter.into_iter().for_each(|k| s.insert(k));
        s
    }
}

impl fmt::Display for KindSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.iter().map(DependencyKind::as_str).collect();
        f.write_str(&names.join(","))
    }
}

/// Parses a comma separated list such as `raw,war`.
impl FromStr for KindSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let set = s
            .split(',')
            .map(|p| p.trim().parse::<DependencyKind>())
            .collect::<Result<KindSet, _>>()?;
        if set.is_empty() {
            return Err("empty kind list".into());
        }
        Ok(set)
    }
}

impl Serialize for KindSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for KindSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Vec::<DependencyKind>::deserialize(d)?.into_iter().collect())
    }
}

/// A labelled dependency between two task instances. Ordered by
/// `(from, to, kind)` exec ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: TaskInstance,
    pub to: TaskInstance,
    pub kind: DependencyKind,
}

/// Task instances of one trace region and the dependencies between them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExecutionGraph {
    pub trace_id: u32,
    vertices: BTreeMap<u64, TaskInstance>,
    edges: BTreeSet<Edge>,
}

impl ExecutionGraph {
    pub fn new(trace_id: u32) -> Self {
        ExecutionGraph {
            trace_id,
            ..Default::default()
        }
    }

    pub fn add_vertex(&mut self, t: TaskInstance) {
        self.vertices.entry(t.exec_id).or_insert(t);
    }

    /// Inserts an edge and both endpoints; duplicates collapse.
    pub fn insert_edge(&mut self, from: TaskInstance, to: TaskInstance, kind: DependencyKind) {
        self.add_vertex(from);
        self.add_vertex(to);
        self.edges.insert(Edge { from, to, kind });
    }

    pub fn vertex(&self, exec_id: u64) -> Option<TaskInstance> {
        self.vertices.get(&exec_id).copied()
    }

    /// Vertices in increasing exec-id order.
    pub fn vertices(&self) -> impl ExactSizeIterator<Item = TaskInstance> + '_ {
        self.vertices.values().copied()
    }

    /// Edges in `(from, to, kind)` order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = &Edge> + '_ {
        self.edges.iter()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, from: u64, to: u64, kind: DependencyKind) -> bool {
        self.edges.contains(&Edge {
            from: TaskInstance::new(0, from),
            to: TaskInstance::new(0, to),
            kind,
        })
    }

    pub(crate) fn retain_edges(&mut self, mut keep: impl FnMut(&Edge) -> bool) {
        self.edges.retain(|e| keep(e));
    }

    /// Set of `(from, to)` exec-id pairs with the given kind.
    pub fn edge_pairs(&self, kind: DependencyKind) -> BTreeSet<(u64, u64)> {
        self.edges
            .iter()
            .filter(|e| e.kind == kind)
            .map(|e| (e.from.exec_id, e.to.exec_id))
            .collect()
    }
}
