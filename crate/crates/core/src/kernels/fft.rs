use num_complex::Complex64;
use rand::Rng;

use super::{close_if, open_if, Grain, Grid, KernelConfig, KernelError};
use crate::trace::{ProgramTrace, Recorder, TraceError};

pub(super) const TRACE_REGION_ID: u32 = 4;

const ARRAY_X: u32 = 0;

#[derive(Debug, Clone)]
pub struct FftRun {
    pub trace: ProgramTrace,
    pub input: Vec<Complex64>,
    pub output: Vec<Complex64>,
}

fn bit_reverse_copy(x: &[Complex64]) -> Vec<Complex64> {
    let bits = x.len().trailing_zeros();
    (0..x.len())
        .map(|i| x[i.reverse_bits() >> (usize::BITS - bits)])
        .collect()
}

/// Iterative radix-2 Cooley-Tukey over a bit-reversed copy of the input.
/// Fine tasks per butterfly, coarse tasks per butterfly group `(s, k)`.
pub fn fft_traced(rec: &mut Recorder, x: &mut Grid<Complex64>, grain: Grain) -> Result<(), TraceError> {
    let len = x.cols;
    let l2n = len.trailing_zeros();
    rec.begin_trace(TRACE_REGION_ID)?;
    for s in 1..=l2n {
        let m = 1usize << s;
        let mh = m >> 1;
        for k in (0..len).step_by(m) {
            open_if(rec, grain, Grain::Coarse)?;
            for j in 0..mh {
                open_if(rec, grain, Grain::Fine)?;
                let a = (-2.0 * j as f64 * std::f64::consts::PI) / m as f64;
                let w = Complex64::from_polar(1.0, a);
                let t = w * x.load(rec, 0, k + j + mh, 1)?;
                let u = x.load(rec, 0, k + j, 2)?;
                x.store(rec, 0, k + j, u + t, 3)?;
                x.store(rec, 0, k + j + mh, u - t, 4)?;
                close_if(rec, grain, Grain::Fine)?;
            }
            close_if(rec, grain, Grain::Coarse)?;
        }
    }
    rec.end_trace()
}

pub(super) fn execute(len: usize, grain: Grain, cfg: &KernelConfig) -> Result<FftRun, KernelError> {
    let mut rng = cfg.rng();
    let input: Vec<Complex64> = (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let (trace, output) = transform(&input, grain)?;
    Ok(FftRun { trace, input, output })
}

/// Traces the transform of a caller-supplied input.
pub(crate) fn transform(input: &[Complex64], grain: Grain) -> Result<(ProgramTrace, Vec<Complex64>), KernelError> {
    super::Kernel::Fft { len: input.len() }.validate()?;
    let mut x = Grid {
        array_id: ARRAY_X,
        rows: 1,
        cols: input.len(),
        data: bit_reverse_copy(input),
    };
    let mut rec = Recorder::new();
    fft_traced(&mut rec, &mut x, grain)?;
    Ok((rec.finalize()?, x.data))
}

pub fn run_fft(len: usize, grain: Grain) -> Result<FftRun, KernelError> {
    super::Kernel::Fft { len }.validate()?;
    execute(len, grain, &KernelConfig::default())
}

impl FftRun {
    /// Runs the traced transform on a given input vector.
    pub fn with_input(input: &[Complex64], grain: Grain) -> Result<FftRun, KernelError> {
        let (trace, output) = transform(input, grain)?;
        Ok(FftRun {
            trace,
            input: input.to_vec(),
            output,
        })
    }
}
