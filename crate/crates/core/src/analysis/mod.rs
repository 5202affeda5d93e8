//! Structural analysis of execution graphs.
//!
//! Graphs are first projected onto a plain [`Digraph`] over vertex indices.
//! On top of the transitive closure ([`Reachability`]) live the independence
//! relation, serial/parallel characterisations, quotients by vertex
//! partitions and their execution time, and automorphism groups. The
//! symmetry reduction [`sym_explore`] repeatedly quotients a DAG by the
//! orbits of its automorphism group; [`analyze`] bundles all of it into an
//! [`AnalysisReport`].

mod aut;
mod digraph;
mod partition;
mod quotient;
mod reach;
mod report;
mod sym;

pub use aut::{automorphism_group, brute_force_aut, is_automorphism, orbit_partition, AutGroup, BRUTE_FORCE_MAX_VERTICES};
pub use digraph::Digraph;
pub use partition::Partition;
pub use quotient::{
    check_chain, exec_time_class, exec_time_quotient, is_dag_preserving, longest_path_vertices, quotient,
    QuotientGraph,
};
pub use reach::{is_completely_parallel, is_completely_serial, reachability, Reachability};
pub use report::{
    analysis_kinds, analyze, read_report, write_report, AnalysisReport, QuotientEdge, Shape, SymExploreSummary,
    REPORT_VERSION,
};
pub use sym::{sym_explore, SymExploreResult};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("graph has a cycle")]
    NotADag,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex set is empty")]
    EmptySet,
    #[error("independence needs two distinct vertices, got {0} twice")]
    SamePair(usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("{0} vertices is too many for exhaustive search")]
    TooLarge(usize),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}
