//! Execution graphs of task-annotated sequential programs.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`trace`]: a [`Recorder`] collects one record per memory access,
//!    attributed to the innermost open task instance.
//! 2. [`kernels`]: five small numerical kernels instrumented at a fine or
//!    coarse task grain, used as workloads.
//! 3. [`builder`]: replays a [`ProgramTrace`] into an [`ExecutionGraph`] of
//!    task instances and their data dependencies.
//! 4. [`analysis`]: independence, quotient graphs, execution time and
//!    automorphism based symmetry reduction; [`export`] renders DOT.
//!
//! ```
//! use exg_core::{analyze, build_eg, BuildConfig, Grain, Kernel, KernelSpec};
//!
//! let trace = KernelSpec::new(Kernel::Madd { n: 2 }, Grain::Fine).run().unwrap();
//! let graphs = build_eg(&trace, &BuildConfig::default()).unwrap();
//! let report = analyze(&graphs[&1]).unwrap();
//! assert_eq!(report.completely_parallel, Some(true));
//! assert_eq!(report.sym_explore.unwrap().exec_time, 1);
//! ```

pub mod analysis;
pub mod builder;
pub mod export;
pub mod kernels;
pub mod trace;

pub use analysis::{analyze, AnalysisError, AnalysisReport, Digraph, Partition};
pub use builder::{build_eg, BuildConfig, BuildError, DepPolicy, DependencyKind, ExecutionGraph, KindSet, TableMode};
pub use kernels::{Grain, Kernel, KernelError, KernelSpec};
pub use trace::{AccessKind, AccessRecord, Address, ProgramTrace, Recorder, TaskInstance, TraceError};
