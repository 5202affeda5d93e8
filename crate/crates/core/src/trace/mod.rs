//! Task-granular memory access traces.
//!
//! A [`Recorder`] models the tracing runtime that an instrumented sequential
//! program links against: it hands out execution ids for task regions,
//! keeps the stack of currently open task instances and appends one
//! [`AccessRecord`] per traced load or store. [`Recorder::finalize`] turns
//! the buffer into an immutable [`ProgramTrace`], which can be written to and
//! read back from the line-oriented text format in [`format`].

mod format;
mod recorder;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

pub use format::{read_trace, write_trace, TRACE_MAGIC, TRACE_VERSION};
pub use recorder::Recorder;

/// Execution id that never names a task; issued ids start at 1.
pub const INVALID_EXEC_ID: u64 = 0;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("a trace region is already open")]
    NestedTrace,
    #[error("no trace region is open")]
    NoOpenTrace,
    #[error("end_task called with an empty task stack")]
    EmptyTaskStack,
    #[error("unclosed region: {0}")]
    UnclosedRegion(String),
    #[error("malformed trace at line {line}: {reason}")]
    MalformedTrace { line: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AccessKind {
    Read,
    Write,
}

impl AccessKind {
    pub fn is_write(self) -> bool {
        matches!(self, AccessKind::Write)
    }
}

/// Symbolic element address: an array identity plus an element offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Address {
    pub array_id: u32,
    pub offset: u64,
}

impl Address {
    pub const fn new(array_id: u32, offset: u64) -> Self {
        Address { array_id, offset }
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.array_id, self.offset)
    }
}

/// A task region paired with the execution id of one of its dynamic
/// instances.
///
/// Equality, ordering and hashing only look at `exec_id`; the region id is
/// carried along as metadata.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TaskInstance {
    pub region_id: u32,
    pub exec_id: u64,
}

impl TaskInstance {
    pub const fn new(region_id: u32, exec_id: u64) -> Self {
        TaskInstance { region_id, exec_id }
    }

    pub fn is_valid(&self) -> bool {
        self.exec_id != INVALID_EXEC_ID
    }
}

impl PartialEq for TaskInstance {
    fn eq(&self, other: &Self) -> bool {
        self.exec_id == other.exec_id
    }
}

impl Eq for TaskInstance {}

impl Hash for TaskInstance {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.exec_id.hash(state);
    }
}

impl PartialOrd for TaskInstance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TaskInstance {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exec_id.cmp(&other.exec_id)
    }
}

impl fmt::Display for TaskInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.exec_id, self.region_id)
    }
}

/// One traced memory access.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccessRecord {
    pub trace_id: u32,
    pub task: TaskInstance,
    pub address: Address,
    pub kind: AccessKind,
    pub instr_id: u32,
}

/// The finalized, ordered list of access records of one program run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProgramTrace {
    pub records: Vec<AccessRecord>,
    pub dropped_accesses: u64,
    pub max_exec_id: u64,
}

impl ProgramTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Distinct task instances in first-appearance order.
    pub fn tasks(&self) -> Vec<TaskInstance> {
        let mut seen = std::collections::HashSet::new();
        self.records
            .iter()
            .filter(|r| seen.insert(r.task.exec_id))
            .map(|r| r.task)
            .collect()
    }

    /// Checks the structural invariants a recorder always establishes:
    /// valid exec ids, `max_exec_id` bounding every id and a single region id
    /// per exec id.
    ///
    /// First appearances are not required to be increasing: an outer task
    /// that records nothing before opening an inner task first appears after
    /// the inner one.
    pub fn validate(&self) -> Result<(), TraceError> {
        let mut regions = std::collections::HashMap::new();
        for (i, r) in self.records.iter().enumerate() {
            let bad = |reason: String| TraceError::MalformedTrace { line: i + 2, reason };
            if !r.task.is_valid() {
                return Err(bad("exec id 0 is reserved".into()));
            }
            if r.task.exec_id > self.max_exec_id {
                return Err(bad(format!(
                    "exec id {} exceeds max_exec_id {}",
                    r.task.exec_id, self.max_exec_id
                )));
            }
            let region = *regions.entry(r.task.exec_id).or_insert(r.task.region_id);
            if region != r.task.region_id {
                return Err(bad(format!(
                    "exec id {} seen with regions {} and {}",
                    r.task.exec_id, region, r.task.region_id
                )));
            }
        }
        Ok(())
    }
}
