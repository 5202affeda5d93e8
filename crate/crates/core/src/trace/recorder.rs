use super::{AccessKind, AccessRecord, Address, ProgramTrace, TaskInstance, TraceError};

/// In-process stand-in for the tracing runtime.
///
/// Single-threaded by contract: it models one sequential program. Exec ids
/// come from one counter shared by all trace regions of the run, starting
/// at 1.
#[derive(Debug)]
pub struct Recorder {
    next_exec_id: u64,
    current_trace: Option<u32>,
    task_stack: Vec<TaskInstance>,
    buffer: Vec<AccessRecord>,
    dropped_accesses: u64,
}

impl Default for Recorder {
    fn default() -> Self {
        Self::new()
    }
}

impl Recorder {
    pub fn new() -> Self {
        Recorder {
            next_exec_id: 1,
            current_trace: None,
            task_stack: Vec::new(),
            buffer: Vec::new(),
            dropped_accesses: 0,
        }
    }

    pub fn begin_trace(&mut self, trace_region_id: u32) -> Result<u32, TraceError> {
        if self.current_trace.is_some() {
            return Err(TraceError::NestedTrace);
        }
        self.current_trace = Some(trace_region_id);
        Ok(trace_region_id)
    }

    pub fn end_trace(&mut self) -> Result<(), TraceError> {
        if self.current_trace.is_none() {
            return Err(TraceError::NoOpenTrace);
        }
        if !self.task_stack.is_empty() {
            return Err(TraceError::UnclosedRegion(format!(
                "{} task region(s) still open at end of trace",
                self.task_stack.len()
            )));
        }
        self.current_trace = None;
        Ok(())
    }

    pub fn begin_task(&mut self, region_id: u32) -> Result<TaskInstance, TraceError> {
        if self.current_trace.is_none() {
            return Err(TraceError::NoOpenTrace);
        }
        let task = TaskInstance::new(region_id, self.next_exec_id);
        self.next_exec_id += 1;
        self.task_stack.push(task);
        Ok(task)
    }

    pub fn end_task(&mut self) -> Result<(), TraceError> {
        self.task_stack
            .pop()
            .map(|_| ())
            .ok_or(TraceError::EmptyTaskStack)
    }

    /// Appends a record attributed to the innermost open task. Accesses made
    /// inside a trace region but outside every task are counted as dropped.
    pub fn record_access(
        &mut self,
        address: Address,
        kind: AccessKind,
        instr_id: u32,
    ) -> Result<(), TraceError> {
        let trace_id = self.current_trace.ok_or(TraceError::NoOpenTrace)?;
        match self.task_stack.last() {
            Some(&task) => self.buffer.push(AccessRecord {
                trace_id,
                task,
                address,
                kind,
                instr_id,
            }),
            None => self.dropped_accesses += 1,
        }
        Ok(())
    }

    pub fn read(&mut self, address: Address, instr_id: u32) -> Result<(), TraceError> {
        self.record_access(address, AccessKind::Read, instr_id)
    }

    pub fn write(&mut self, address: Address, instr_id: u32) -> Result<(), TraceError> {
        self.record_access(address, AccessKind::Write, instr_id)
    }

    pub fn current_task(&self) -> Option<TaskInstance> {
        self.task_stack.last().copied()
    }

    pub fn task_depth(&self) -> usize {
        self.task_stack.len()
    }

    pub fn current_trace(&self) -> Option<u32> {
        self.current_trace
    }

    pub fn records(&self) -> &[AccessRecord] {
        &self.buffer
    }

    pub fn dropped_accesses(&self) -> u64 {
        self.dropped_accesses
    }

    pub fn finalize(self) -> Result<ProgramTrace, TraceError> {
        if !self.task_stack.is_empty() {
            return Err(TraceError::UnclosedRegion(format!(
                "{} task region(s) still open",
                self.task_stack.len()
            )));
        }
        if let Some(id) = self.current_trace {
            return Err(TraceError::UnclosedRegion(format!("trace region {id} still open")));
        }
        Ok(ProgramTrace {
            records: self.buffer,
            dropped_accesses: self.dropped_accesses,
            max_exec_id: self.next_exec_id - 1,
        })
    }
}
