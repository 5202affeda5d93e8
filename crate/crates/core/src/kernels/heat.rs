use rand::Rng;

use super::{close_if, open_if, Grain, Grid, KernelConfig, KernelError};
use crate::trace::{ProgramTrace, Recorder, TraceError};

pub(super) const TRACE_REGION_ID: u32 = 3;

const ARRAY_U: u32 = 0;

#[derive(Debug, Clone)]
pub struct HeatRun {
    pub trace: ProgramTrace,
    /// Initial state (time column 0 and both boundary rows filled in).
    pub initial: Grid<f64>,
    /// `u(x, t)` with `x` in `0..=nx+1` as rows and `t` in `0..=nt` as
    /// columns.
    pub u: Grid<f64>,
    pub r: f64,
}

/// Explicit scheme for `u_t = u_xx`; fine tasks per grid point and time
/// step, coarse tasks per time step.
pub fn heat_traced(rec: &mut Recorder, u: &mut Grid<f64>, r: f64, grain: Grain) -> Result<(), TraceError> {
    let nt = u.cols - 1;
    let nx = u.rows - 2;
    rec.begin_trace(TRACE_REGION_ID)?;
    for t in 1..=nt {
        open_if(rec, grain, Grain::Coarse)?;
        for x in 1..=nx {
            open_if(rec, grain, Grain::Fine)?;
            let centre = u.load(rec, x, t - 1, 1)?;
            let right = u.load(rec, x + 1, t - 1, 2)?;
            let left = u.load(rec, x - 1, t - 1, 3)?;
            u.store(rec, x, t, (1.0 - 2.0 * r) * centre + r * right + r * left, 4)?;
            close_if(rec, grain, Grain::Fine)?;
        }
        close_if(rec, grain, Grain::Coarse)?;
    }
    rec.end_trace()
}

pub(super) fn execute(nx: usize, nt: usize, grain: Grain, cfg: &KernelConfig) -> Result<HeatRun, KernelError> {
    let mut rng = cfg.rng();
    let mut u = Grid::new(ARRAY_U, nx + 2, nt + 1);
    for x in 0..nx + 2 {
        u.set(x, 0, rng.gen_range(0.0..1.0));
    }
    for t in 1..=nt {
        u.set(0, t, 0.0);
        u.set(nx + 1, t, 0.0);
    }
    let initial = u.clone();
    let r = cfg.heat_k / (cfg.heat_h * cfg.heat_h);

    let mut rec = Recorder::new();
    heat_traced(&mut rec, &mut u, r, grain)?;
    Ok(HeatRun {
        trace: rec.finalize()?,
        initial,
        u,
        r,
    })
}

pub fn run_heat(nx: usize, nt: usize, grain: Grain) -> Result<HeatRun, KernelError> {
    super::Kernel::Heat { nx, nt }.validate()?;
    execute(nx, nt, grain, &KernelConfig::default())
}
