//! Line-oriented text encoding of a [`ProgramTrace`].
//!
//! ```text
//! EXGTRACE 1
//! T <trace_id> <exec_id> <region_id> <array_id> <offset> <R|W> <instr_id>
//! ...
//! END <record_count> <dropped_count> <max_exec_id>
//! ```

use std::io::{BufRead, Write};
use std::str::FromStr;

use super::{AccessKind, AccessRecord, Address, ProgramTrace, TaskInstance, TraceError};

pub const TRACE_MAGIC: &str = "EXGTRACE";
pub const TRACE_VERSION: u32 = 1;

pub fn write_trace<W: Write>(trace: &ProgramTrace, mut sink: W) -> std::io::Result<()> {
    writeln!(sink, "{TRACE_MAGIC} {TRACE_VERSION}")?;
    for r in &trace.records {
        let kind = match r.kind {
            AccessKind::Read => 'R',
            AccessKind::Write => 'W',
        };
        writeln!(
            sink,
            "T {} {} {} {} {} {} {}",
            r.trace_id,
            r.task.exec_id,
            r.task.region_id,
            r.address.array_id,
            r.address.offset,
            kind,
            r.instr_id
        )?;
    }
    writeln!(
        sink,
        "END {} {} {}",
        trace.records.len(),
        trace.dropped_accesses,
        trace.max_exec_id
    )?;
    sink.flush()
}

pub fn read_trace<R: BufRead>(source: R) -> Result<ProgramTrace, TraceError> {
    let mut lines = source.lines().enumerate().map(|(i, l)| (i + 1, l));
    let malformed = |line: usize, reason: &str| TraceError::MalformedTrace {
        line,
        reason: reason.to_string(),
    };

    let (_, header) = lines.next().ok_or_else(|| malformed(1, "empty input"))?;
    let header = header.map_err(|e| malformed(1, &e.to_string()))?;
    let mut parts = header.split(' ');
    if parts.next() != Some(TRACE_MAGIC) {
        return Err(malformed(1, "missing EXGTRACE header"));
    }
    let version: u32 = field(parts.next(), 1, "version")?;
    if version != TRACE_VERSION {
        return Err(malformed(1, &format!("unsupported trace version {version}")));
    }
    if parts.next().is_some() {
        return Err(malformed(1, "trailing fields in header"));
    }

    let mut records = Vec::new();
    for (line_no, line) in lines.by_ref() {
        let line = line.map_err(|e| malformed(line_no, &e.to_string()))?;
        let fields: Vec<&str> = line.split(' ').collect();
        match fields[0] {
            "T" => {
                if fields.len() != 8 {
                    return Err(malformed(line_no, "record needs 7 fields"));
                }
                let kind = match fields[6] {
                    "R" => AccessKind::Read,
                    "W" => AccessKind::Write,
                    other => return Err(malformed(line_no, &format!("bad access kind {other:?}"))),
                };
                records.push(AccessRecord {
                    trace_id: field(Some(fields[1]), line_no, "trace_id")?,
                    task: TaskInstance::new(
                        field(Some(fields[3]), line_no, "region_id")?,
                        field(Some(fields[2]), line_no, "exec_id")?,
                    ),
                    address: Address::new(
                        field(Some(fields[4]), line_no, "array_id")?,
                        field(Some(fields[5]), line_no, "offset")?,
                    ),
                    kind,
                    instr_id: field(Some(fields[7]), line_no, "instr_id")?,
                });
            }
            "END" => {
                if fields.len() != 4 {
                    return Err(malformed(line_no, "END needs 3 fields"));
                }
                let count: usize = field(Some(fields[1]), line_no, "record_count")?;
                if count != records.len() {
                    return Err(malformed(
                        line_no,
                        &format!("END announces {count} records, found {}", records.len()),
                    ));
                }
                let trace = ProgramTrace {
                    records,
                    dropped_accesses: field(Some(fields[2]), line_no, "dropped_count")?,
                    max_exec_id: field(Some(fields[3]), line_no, "max_exec_id")?,
                };
                if let Some((extra, _)) = lines.next() {
                    return Err(malformed(extra, "content after END"));
                }
                trace.validate()?;
                return Ok(trace);
            }
            _ => return Err(malformed(line_no, "unknown line tag")),
        }
    }
    Err(malformed(records.len() + 2, "missing END line"))
}

fn field<T: FromStr>(raw: Option<&str>, line: usize, name: &str) -> Result<T, TraceError> {
    raw.and_then(|s| {
        // decimal digits only; FromStr would also accept a leading '+'
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            None
        } else {
            s.parse().ok()
        }
    })
    .ok_or_else(|| TraceError::MalformedTrace {
        line,
        reason: format!("invalid {name}"),
    })
}
