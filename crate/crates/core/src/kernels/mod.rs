//! Instrumented ports of five small sequential kernels.
//!
//! Every kernel does its real arithmetic while reporting each named array
//! element access to a [`Recorder`]. Scalars and loop indices are never
//! traced. Task regions are opened either around the innermost statement
//! ([`Grain::Fine`]) or around the innermost loop ([`Grain::Coarse`]).
//! Set-up work (zeroing, boundary values, bit reversal) happens before the
//! trace region opens and is therefore invisible to the trace.

mod fft;
mod heat;
mod madd;
mod mmult;
mod sw;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::trace::{Address, ProgramTrace, Recorder, TraceError};

pub use fft::{fft_traced, run_fft, FftRun};
pub use heat::{heat_traced, run_heat, HeatRun};
pub use madd::{madd_traced, run_madd, MaddRun};
pub use mmult::{mmult_traced, run_mmult, MmultRun};
pub use sw::{run_sw, sw_traced, SwRun};

/// Task region id used for fine-grain placements.
pub const FINE_REGION_ID: u32 = 1;
/// Task region id used for coarse-grain placements.
pub const COARSE_REGION_ID: u32 = 2;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("invalid length {0}: must be a power of two >= 2")]
    InvalidLength(usize),
    #[error("invalid parameter {name}={value}: {reason}")]
    InvalidParam {
        name: &'static str,
        value: usize,
        reason: &'static str,
    },
    #[error(transparent)]
    Trace(#[from] TraceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grain {
    Fine,
    Coarse,
}

impl Grain {
    pub fn task_region_id(self) -> u32 {
        match self {
            Grain::Fine => FINE_REGION_ID,
            Grain::Coarse => COARSE_REGION_ID,
        }
    }
}

impl FromStr for Grain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fine" => Ok(Grain::Fine),
            "coarse" => Ok(Grain::Coarse),
            other => Err(format!("unknown grain {other:?} (expected fine or coarse)")),
        }
    }
}

impl fmt::Display for Grain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grain::Fine => "fine",
            Grain::Coarse => "coarse",
        })
    }
}

/// Fixed inputs of the kernels. The dependence structure of every kernel is
/// independent of these values; they only matter for numeric checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig {
    pub seed: u64,
    pub sw_match: i64,
    pub sw_miss: i64,
    pub sw_gap: i64,
    pub heat_h: f64,
    pub heat_k: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            seed: 0x5eed_e8a1,
            sw_match: 3,
            sw_miss: -3,
            sw_gap: -2,
            heat_h: 1.0,
            heat_k: 0.25,
        }
    }
}

impl KernelConfig {
    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// A kernel together with its size parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Madd { n: usize },
    Mmult { n: usize },
    Heat { nx: usize, nt: usize },
    Fft { len: usize },
    Sw { len1: usize, len2: usize },
}

impl Kernel {
    pub const NAMES: [&'static str; 5] = ["madd", "mmult", "heat", "fft", "sw"];

    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Madd { .. } => "madd",
            Kernel::Mmult { .. } => "mmult",
            Kernel::Heat { .. } => "heat",
            Kernel::Fft { .. } => "fft",
            Kernel::Sw { .. } => "sw",
        }
    }

    pub fn trace_region_id(&self) -> u32 {
        match self {
            Kernel::Madd { .. } => madd::TRACE_REGION_ID,
            Kernel::Mmult { .. } => mmult::TRACE_REGION_ID,
            Kernel::Heat { .. } => heat::TRACE_REGION_ID,
            Kernel::Fft { .. } => fft::TRACE_REGION_ID,
            Kernel::Sw { .. } => sw::TRACE_REGION_ID,
        }
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        let positive = |name, value: usize| {
            if value == 0 {
                Err(KernelError::InvalidParam {
                    name,
                    value,
                    reason: "must be at least 1",
                })
            } else {
                Ok(())
            }
        };
        match *self {
            Kernel::Madd { n } | Kernel::Mmult { n } => positive("n", n),
            Kernel::Heat { nx, nt } => positive("nx", nx).and(positive("nt", nt)),
            Kernel::Fft { len } => {
                if len >= 2 && len.is_power_of_two() {
                    Ok(())
                } else {
                    Err(KernelError::InvalidLength(len))
                }
            }
            Kernel::Sw { len1, len2 } => positive("len1", len1).and(positive("len2", len2)),
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Kernel::Madd { n } => write!(f, "madd n={n}"),
            Kernel::Mmult { n } => write!(f, "mmult n={n}"),
            Kernel::Heat { nx, nt } => write!(f, "heat nx={nx} nt={nt}"),
            Kernel::Fft { len } => write!(f, "fft len={len}"),
            Kernel::Sw { len1, len2 } => write!(f, "sw len1={len1} len2={len2}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelSpec {
    pub kernel: Kernel,
    pub grain: Grain,
}

impl KernelSpec {
    pub fn new(kernel: Kernel, grain: Grain) -> Self {
        KernelSpec { kernel, grain }
    }

    pub fn trace_region_id(&self) -> u32 {
        self.kernel.trace_region_id()
    }

    pub fn task_region_id(&self) -> u32 {
        self.grain.task_region_id()
    }

    pub fn run(&self) -> Result<ProgramTrace, KernelError> {
        self.run_with(&KernelConfig::default())
    }

    pub fn run_with(&self, cfg: &KernelConfig) -> Result<ProgramTrace, KernelError> {
        self.kernel.validate()?;
        let g = self.grain;
        Ok(match self.kernel {
            Kernel::Madd { n } => madd::execute(n, g, cfg)?.trace,
            Kernel::Mmult { n } => mmult::execute(n, g, cfg)?.trace,
            Kernel::Heat { nx, nt } => heat::execute(nx, nt, g, cfg)?.trace,
            Kernel::Fft { len } => fft::execute(len, g, cfg)?.trace,
            Kernel::Sw { len1, len2 } => sw::execute(len1, len2, g, cfg)?.trace,
        })
    }
}

/// Row-major 2-D array whose elements map to symbolic addresses.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    pub array_id: u32,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Clone + Default> Grid<T> {
    pub fn new(array_id: u32, rows: usize, cols: usize) -> Self {
        Grid {
            array_id,
            rows,
            cols,
            data: vec![T::default(); rows * cols],
        }
    }
}

impl<T: Copy> Grid<T> {
    pub fn addr(&self, i: usize, j: usize) -> Address {
        Address::new(self.array_id, (i * self.cols + j) as u64)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    /// Reads an element and records the load.
    pub(crate) fn load(&self, rec: &mut Recorder, i: usize, j: usize, instr: u32) -> Result<T, TraceError> {
        rec.read(self.addr(i, j), instr)?;
        Ok(self.get(i, j))
    }

    /// Writes an element and records the store.
    pub(crate) fn store(
        &mut self,
        rec: &mut Recorder,
        i: usize,
        j: usize,
        v: T,
        instr: u32,
    ) -> Result<(), TraceError> {
        rec.write(self.addr(i, j), instr)?;
        self.set(i, j, v);
        Ok(())
    }
}

/// Opens a task when the placement matches the current loop level.
pub(crate) fn open_if(rec: &mut Recorder, grain: Grain, level: Grain) -> Result<(), TraceError> {
    if grain == level {
        rec.begin_task(grain.task_region_id())?;
    }
    Ok(())
}

pub(crate) fn close_if(rec: &mut Recorder, grain: Grain, level: Grain) -> Result<(), TraceError> {
    if grain == level {
        rec.end_task()?;
    }
    Ok(())
}
