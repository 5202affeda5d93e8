//! Workloads shared by the pipeline benchmarks.

use exg_core::{build_eg, BuildConfig, ExecutionGraph, Grain, Kernel, KernelSpec, ProgramTrace};

/// Fine-grained kernels at sizes where analysis cost is visible.
pub fn workloads() -> Vec<(&'static str, KernelSpec)> {
    [
        ("madd_16", Kernel::Madd { n: 16 }),
        ("mmult_8", Kernel::Mmult { n: 8 }),
        ("heat_32x32", Kernel::Heat { nx: 32, nt: 32 }),
        ("fft_256", Kernel::Fft { len: 256 }),
        ("sw_24x24", Kernel::Sw { len1: 24, len2: 24 }),
    ]
    .into_iter()
    .map(|(name, kernel)| (name, KernelSpec::new(kernel, Grain::Fine)))
    .collect()
}

pub fn trace(spec: &KernelSpec) -> ProgramTrace {
    spec.run().expect("benchmark kernels are valid")
}

/// The single graph of a kernel trace under the default configuration.
pub fn graph(trace: &ProgramTrace) -> ExecutionGraph {
    build_eg(trace, &BuildConfig::default())
        .expect("kernel traces build")
        .pop_first()
        .expect("kernel traces have one region")
        .1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_build_and_analyze() {
        for (name, spec) in workloads() {
            let g = graph(&trace(&spec));
            assert!(g.vertex_count() > 0, "{name}");
            assert!(exg_core::analyze(&g).is_ok(), "{name}");
        }
    }
}
