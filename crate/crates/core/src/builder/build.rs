use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{AddressTable, BuildError, DependencyKind, ExecutionGraph, KindSet, TableMode};
use crate::trace::{ProgramTrace, TaskInstance};

/// How dependencies reported by the address table become edges.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DepPolicy {
    /// Insert `prev -> current` unconditionally.
    Plain,
    /// Re-id the dependent task when the edge would point backwards.
    #[default]
    Ext,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildConfig {
    pub table_mode: TableMode,
    pub dep_policy: DepPolicy,
    pub kind_filter: KindSet,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            table_mode: TableMode::MultiReader,
            dep_policy: DepPolicy::Ext,
            kind_filter: KindSet::raw(),
        }
    }
}

impl BuildConfig {
    pub fn new(table_mode: TableMode, dep_policy: DepPolicy, kind_filter: KindSet) -> Self {
        BuildConfig {
            table_mode,
            dep_policy,
            kind_filter,
        }
    }

    /// Kinds that survive the final filter.
    pub fn retained_kinds(&self) -> KindSet {
        match self.dep_policy {
            DepPolicy::Ext => self.kind_filter.with(DependencyKind::EXT),
            DepPolicy::Plain => self.kind_filter,
        }
    }
}

/// Maps exec ids of the trace to the instance currently standing for them
/// after re-identification.
#[derive(Debug, Clone)]
pub struct RenameMap {
    origin: HashMap<u64, u64>,
    current: HashMap<u64, TaskInstance>,
    next_renewed_id: u64,
}

impl RenameMap {
    /// Renewed ids start right above `max_exec_id`.
    pub fn new(max_exec_id: u64) -> Self {
        RenameMap {
            origin: HashMap::new(),
            current: HashMap::new(),
            next_renewed_id: max_exec_id + 1,
        }
    }

    fn origin_of(&self, exec_id: u64) -> u64 {
        self.origin.get(&exec_id).copied().unwrap_or(exec_id)
    }

    pub fn resolve(&self, t: TaskInstance) -> TaskInstance {
        self.current.get(&self.origin_of(t.exec_id)).copied().unwrap_or(t)
    }

    /// Mints a fresh, highest exec id for `t` and rebinds `t`'s original id
    /// to it.
    pub fn renew(&mut self, t: TaskInstance) -> TaskInstance {
        let renewed = TaskInstance::new(t.region_id, self.next_renewed_id);
        self.next_renewed_id += 1;
        let origin = self.origin_of(t.exec_id);
        self.origin.insert(renewed.exec_id, origin);
        self.current.insert(origin, renewed);
        renewed
    }

    pub fn next_renewed_id(&self) -> u64 {
        self.next_renewed_id
    }

    pub fn renewed_count(&self) -> usize {
        self.origin.len()
    }
}

pub fn add_dep(g: &mut ExecutionGraph, prev: TaskInstance, t: TaskInstance, kind: DependencyKind) -> Result<(), BuildError> {
    if prev.exec_id == t.exec_id {
        return Err(BuildError::SelfDependency(t.exec_id));
    }
    g.insert_edge(prev, t, kind);
    Ok(())
}

pub fn add_dep_ext(
    g: &mut ExecutionGraph,
    rmap: &mut RenameMap,
    prev: TaskInstance,
    t: TaskInstance,
    kind: DependencyKind,
) -> Result<(), BuildError> {
    let current = rmap.resolve(t);
    let prev = rmap.resolve(prev);
    if prev.exec_id == current.exec_id {
        return Err(BuildError::SelfDependency(current.exec_id));
    }
    if prev.exec_id >= current.exec_id {
        let renewed = rmap.renew(current);
        g.insert_edge(current, renewed, DependencyKind::EXT);
        g.insert_edge(prev, renewed, kind);
    } else {
        g.insert_edge(prev, current, kind);
    }
    Ok(())
}

/// Builds one execution graph per trace region.
pub fn build_eg(trace: &ProgramTrace, cfg: &BuildConfig) -> Result<BTreeMap<u32, ExecutionGraph>, BuildError> {
    if cfg.kind_filter.is_empty() {
        return Err(BuildError::EmptyKindFilter);
    }
    trace.validate()?;

    struct Region {
        graph: ExecutionGraph,
        table: AddressTable,
    }

    let mut regions: BTreeMap<u32, Region> = BTreeMap::new();
    // renewed ids stay unique across all regions of the run
    let mut rmap = RenameMap::new(trace.max_exec_id);

    for r in &trace.records {
        let region = regions.entry(r.trace_id).or_insert_with(|| Region {
            graph: ExecutionGraph::new(r.trace_id),
            table: AddressTable::new(cfg.table_mode),
        });
        let task = rmap.resolve(r.task);
        region.graph.add_vertex(task);
        for (prev, kind) in region.table.update(r.address, task, r.kind) {
            if !prev.is_valid() || rmap.resolve(prev) == rmap.resolve(r.task) {
                continue;
            }
            match cfg.dep_policy {
                DepPolicy::Plain => add_dep(&mut region.graph, rmap.resolve(prev), rmap.resolve(r.task), kind)?,
                DepPolicy::Ext => add_dep_ext(&mut region.graph, &mut rmap, prev, r.task, kind)?,
            }
        }
    }

    let keep = cfg.retained_kinds();
    Ok(regions
        .into_iter()
        .map(|(id, mut region)| {
            region.graph.retain_edges(|e| keep.contains(e.kind));
            (id, region.graph)
        })
        .collect())
}

/// Same vertices, only edges whose kind is in `kinds`.
pub fn project(g: &ExecutionGraph, kinds: KindSet) -> ExecutionGraph {
    let mut out = g.clone();
    out.retain_edges(|e| kinds.contains(e.kind));
    out
}

/// True iff every edge goes from a lower to a higher exec id and the graph
/// has no cycle.
pub fn verify_topo_order(g: &ExecutionGraph) -> bool {
    if g.edges().any(|e| e.from.exec_id >= e.to.exec_id) {
        return false;
    }
    // Kahn's algorithm over exec ids
    let mut indegree: BTreeMap<u64, usize> = g.vertices().map(|v| (v.exec_id, 0)).collect();
    let mut succ: HashMap<u64, Vec<u64>> = HashMap::new();
    for e in g.edges() {
        let (Some(_), Some(_)) = (g.vertex(e.from.exec_id), g.vertex(e.to.exec_id)) else {
            return false;
        };
        *indegree.get_mut(&e.to.exec_id).unwrap() += 1;
        succ.entry(e.from.exec_id).or_default().push(e.to.exec_id);
    }
    let mut ready: Vec<u64> = indegree.iter().filter(|(_, d)| **d == 0).map(|(v, _)| *v).collect();
    let mut visited = 0;
    while let Some(v) = ready.pop() {
        visited += 1;
        for w in succ.get(&v).into_iter().flatten() {
            let d = indegree.get_mut(w).unwrap();
            *d -= 1;
            if *d == 0 {
                ready.push(*w);
            }
        }
    }
    visited == g.vertex_count()
}
