use std::collections::BTreeSet;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{DependencyKind, ExecutionGraph};
use crate::trace::TaskInstance;

pub const GRAPH_FILE_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum GraphFileError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed graph file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported graph file version {0}")]
    Version(u32),
    #[error("invalid graph: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub exec_id: u64,
    pub region_id: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub from: u64,
    pub to: u64,
    pub kind: DependencyKind,
}

/// On-disk form of an [`ExecutionGraph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub version: u32,
    pub trace_id: u32,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
}

impl From<&ExecutionGraph> for GraphFile {
    fn from(g: &ExecutionGraph) -> Self {
        GraphFile {
            version: GRAPH_FILE_VERSION,
            trace_id: g.trace_id,
            vertices: g
                .vertices()
                .map(|v| VertexEntry {
                    exec_id: v.exec_id,
                    region_id: v.region_id,
                })
                .collect(),
            edges: g
                .edges()
                .map(|e| EdgeEntry {
                    from: e.from.exec_id,
                    to: e.to.exec_id,
                    kind: e.kind,
                })
                .collect(),
        }
    }
}

impl GraphFile {
    pub fn into_graph(self) -> Result<ExecutionGraph, GraphFileError> {
        if self.version != GRAPH_FILE_VERSION {
            return Err(GraphFileError::Version(self.version));
        }
        let mut g = ExecutionGraph::new(self.trace_id);
        for v in &self.vertices {
            if v.exec_id == 0 {
                return Err(GraphFileError::Invalid("exec id 0 is reserved".into()));
            }
            if g.vertex(v.exec_id).is_some() {
                return Err(GraphFileError::Invalid(format!("duplicate vertex {}", v.exec_id)));
            }
            g.add_vertex(TaskInstance::new(v.region_id, v.exec_id));
        }
        let mut seen = BTreeSet::new();
        for e in &self.edges {
            let (Some(from), Some(to)) = (g.vertex(e.from), g.vertex(e.to)) else {
                return Err(GraphFileError::Invalid(format!(
                    "edge {} -> {} references an unknown vertex",
                    e.from, e.to
                )));
            };
            if e.from == e.to {
                return Err(GraphFileError::Invalid(format!("self edge on {}", e.from)));
            }
            if !seen.insert((e.from, e.to, e.kind)) {
                return Err(GraphFileError::Invalid(format!(
                    "duplicate edge {} -> {} {}",
                    e.from, e.to, e.kind
                )));
            }
            g.insert_edge(from, to, e.kind);
        }
        Ok(g)
    }
}

/// Writes `g` as pretty-printed JSON followed by a newline.
pub fn write_graph<W: Write>(g: &ExecutionGraph, mut w: W) -> Result<(), GraphFileError> {
    serde_json::to_writer_pretty(&mut w, &GraphFile::from(g))?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn read_graph<R: Read>(r: R) -> Result<ExecutionGraph, GraphFileError> {
    let file: GraphFile = serde_json::from_reader(r)?;
    file.into_graph()
}

#[cfg(test)]
mod tests {
    use super::*;
    use DependencyKind::*;

    fn sample() -> ExecutionGraph {
        let mut g = ExecutionGraph::new(7);
        g.insert_edge(TaskInstance::new(1, 3), TaskInstance::new(2, 5), RAW);
        g.insert_edge(TaskInstance::new(1, 1), TaskInstance::new(1, 3), EXT);
        g.insert_edge(TaskInstance::new(1, 1), TaskInstance::new(1, 3), WAR);
        g.add_vertex(TaskInstance::new(1, 9));
        g
    }

    fn to_string(g: &ExecutionGraph) -> String {
        let mut buf = Vec::new();
        write_graph(g, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn roundtrip() {
        let g = sample();
        let text = to_string(&g);
        let back = read_graph(text.as_bytes()).unwrap();
        assert_eq!(back, g);
        assert_eq!(to_string(&back), text);
    }

    #[test]
    fn sorted_layout() {
        let file = GraphFile::from(&sample());
        let ids: Vec<u64> = file.vertices.iter().map(|v| v.exec_id).collect();
        assert_eq!(ids, vec![1, 3, 5, 9]);
        let edges: Vec<_> = file.edges.iter().map(|e| (e.from, e.to, e.kind)).collect();
        assert_eq!(edges, vec![(1, 3, WAR), (1, 3, EXT), (3, 5, RAW)]);
        let text = to_string(&sample());
        let keys = ["\"version\"", "\"trace_id\"", "\"vertices\"", "\"edges\""];
        let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_files() {
        let bad = [
            r#"{"version":2,"trace_id":0,"vertices":[],"edges":[]}"#,
            r#"{"version":1,"trace_id":0,"vertices":[{"exec_id":1,"region_id":0}],"edges":[{"from":1,"to":2,"kind":"RAW"}]}"#,
            r#"{"version":1,"trace_id":0,"vertices":[{"exec_id":1,"region_id":0}],"edges":[{"from":1,"to":1,"kind":"RAW"}]}"#,
            r#"{"version":1,"trace_id":0,"vertices":[{"exec_id":1,"region_id":0},{"exec_id":1,"region_id":0}],"edges":[]}"#,
            r#"{"version":1,"trace_id":0,"vertices":[{"exec_id":0,"region_id":0}],"edges":[]}"#,
            r#"{"version":1,"trace_id":0,"vertices":[],"edges":[],"extra":1}"#,
            r#"{"version":1,"trace_id":0,"vertices":[{"exec_id":1,"region_id":0},{"exec_id":2,"region_id":0}],"edges":[{"from":1,"to":2,"kind":"XYZ"}]}"#,
            "not json",
        ];
        for text in bad {
            assert!(read_graph(text.as_bytes()).is_err(), "{text}");
        }
    }
}
