use rand::Rng;

use super::{close_if, open_if, Grain, Grid, KernelConfig, KernelError};
use crate::trace::{ProgramTrace, Recorder, TraceError};

pub(super) const TRACE_REGION_ID: u32 = 1;

const ARRAY_A: u32 = 0;
const ARRAY_B: u32 = 1;
const ARRAY_C: u32 = 2;

#[derive(Debug, Clone)]
pub struct MaddRun {
    pub trace: ProgramTrace,
    pub a: Grid<i64>,
    pub b: Grid<i64>,
    pub c: Grid<i64>,
}

/// `C(i, j) = A(i, j) + B(i, j)`; fine tasks per element, coarse per row.
pub fn madd_traced(
    rec: &mut Recorder,
    c: &mut Grid<i64>,
    a: &Grid<i64>,
    b: &Grid<i64>,
    grain: Grain,
) -> Result<(), TraceError> {
    rec.begin_trace(TRACE_REGION_ID)?;
    for i in 0..c.rows {
        open_if(rec, grain, Grain::Coarse)?;
        for j in 0..c.cols {
            open_if(rec, grain, Grain::Fine)?;
            let x = a.load(rec, i, j, 1)?;
            let y = b.load(rec, i, j, 2)?;
            c.store(rec, i, j, x + y, 3)?;
            close_if(rec, grain, Grain::Fine)?;
        }
        close_if(rec, grain, Grain::Coarse)?;
    }
    rec.end_trace()
}

pub(super) fn execute(n: usize, grain: Grain, cfg: &KernelConfig) -> Result<MaddRun, KernelError> {
    let mut rng = cfg.rng();
    let mut a = Grid::new(ARRAY_A, n, n);
    let mut b = Grid::new(ARRAY_B, n, n);
    a.data.iter_mut().for_each(|v| *v = rng.gen_range(-9..=9));
    b.data.iter_mut().for_each(|v| *v = rng.gen_range(-9..=9));
    let mut c = Grid::new(ARRAY_C, n, n);

    let mut rec = Recorder::new();
    madd_traced(&mut rec, &mut c, &a, &b, grain)?;
    Ok(MaddRun {
        trace: rec.finalize()?,
        a,
        b,
        c,
    })
}

pub fn run_madd(n: usize, grain: Grain) -> Result<MaddRun, KernelError> {
    super::Kernel::Madd { n }.validate()?;
    execute(n, grain, &KernelConfig::default())
}
