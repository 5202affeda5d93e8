use rand::Rng;

use super::{close_if, open_if, Grain, Grid, KernelConfig, KernelError};
use crate::trace::{ProgramTrace, Recorder, TraceError};

pub(super) const TRACE_REGION_ID: u32 = 5;

const ARRAY_M: u32 = 0;
const ARRAY_S1: u32 = 1;
const ARRAY_S2: u32 = 2;

const ALPHABET: &[u8] = b"ACGT";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwScores {
    pub matched: i64,
    pub miss: i64,
    pub gap: i64,
}

#[derive(Debug, Clone)]
pub struct SwRun {
    pub trace: ProgramTrace,
    pub s1: Vec<u8>,
    pub s2: Vec<u8>,
    pub scores: SwScores,
    pub m: Grid<i64>,
}

/// Basic Smith-Waterman scoring sweep. Fine tasks per cell, coarse tasks
/// per row. Row 0 and column 0 of `m` must already be zero.
pub fn sw_traced(
    rec: &mut Recorder,
    m: &mut Grid<i64>,
    s1: &Grid<u8>,
    s2: &Grid<u8>,
    scores: SwScores,
    grain: Grain,
) -> Result<(), TraceError> {
    rec.begin_trace(TRACE_REGION_ID)?;
    for i in 1..m.rows {
        open_if(rec, grain, Grain::Coarse)?;
        for j in 1..m.cols {
            open_if(rec, grain, Grain::Fine)?;
            let a = s1.load(rec, 0, i - 1, 1)?;
            let b = s2.load(rec, 0, j - 1, 2)?;
            let sc = if a == b { scores.matched } else { scores.miss };
            let here = m.load(rec, i, j, 3)?;
            let left = m.load(rec, i, j - 1, 4)?;
            let up = m.load(rec, i - 1, j, 5)?;
            let best = (here + sc).max(left + scores.gap).max(up + scores.gap).max(0);
            m.store(rec, i, j, best, 6)?;
            close_if(rec, grain, Grain::Fine)?;
        }
        close_if(rec, grain, Grain::Coarse)?;
    }
    rec.end_trace()
}

fn sequence(array_id: u32, seq: &[u8]) -> Grid<u8> {
    Grid {
        array_id,
        rows: 1,
        cols: seq.len(),
        data: seq.to_vec(),
    }
}

pub(super) fn execute(len1: usize, len2: usize, grain: Grain, cfg: &KernelConfig) -> Result<SwRun, KernelError> {
    let mut rng = cfg.rng();
    let mut draw = |n| -> Vec<u8> { (0..n).map(|_| ALPHABET[rng.gen_range(0..ALPHABET.len())]).collect() };
    let s1 = draw(len1);
    let s2 = draw(len2);
    let scores = SwScores {
        matched: cfg.sw_match,
        miss: cfg.sw_miss,
        gap: cfg.sw_gap,
    };
    align(&s1, &s2, scores, grain)
}

/// Traces the scoring sweep for caller-supplied sequences.
pub(crate) fn align(s1: &[u8], s2: &[u8], scores: SwScores, grain: Grain) -> Result<SwRun, KernelError> {
    super::Kernel::Sw {
        len1: s1.len(),
        len2: s2.len(),
    }
    .validate()?;
    // whole matrix zeroed outside the trace region
    let mut m = Grid::new(ARRAY_M, s1.len() + 1, s2.len() + 1);
    let mut rec = Recorder::new();
    sw_traced(&mut rec, &mut m, &sequence(ARRAY_S1, s1), &sequence(ARRAY_S2, s2), scores, grain)?;
    Ok(SwRun {
        trace: rec.finalize()?,
        s1: s1.to_vec(),
        s2: s2.to_vec(),
        scores,
        m,
    })
}

pub fn run_sw(len1: usize, len2: usize, grain: Grain) -> Result<SwRun, KernelError> {
    super::Kernel::Sw { len1, len2 }.validate()?;
    execute(len1, len2, grain, &KernelConfig::default())
}

impl SwRun {
    pub fn with_sequences(s1: &[u8], s2: &[u8], scores: SwScores, grain: Grain) -> Result<SwRun, KernelError> {
        align(s1, s2, scores, grain)
    }
}
