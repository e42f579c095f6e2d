//! Shared workloads for the engine benchmarks.

use fatigue_core::benchmark::bench_workload;
use fatigue_core::{segment_windows, EngineConfig, Result, SignalRecord, WindowPlan, WindowView};

/// A seeded synthetic recording cut into the default window plan.
pub struct Workload {
    pub record: SignalRecord,
    pub plan: WindowPlan,
}

impl Workload {
    /// About `windows` window-channel work items over two channels.
    pub fn new(windows: usize, seed: u64) -> Result<Self> {
        let (record, plan) = bench_workload(windows, seed)?;
        Ok(Self { record, plan })
    }

    pub fn views(&self) -> Vec<WindowView<'_>> {
        segment_windows(&self.record, &self.plan)
    }

    /// Number of window-channel work items.
    pub fn items(&self) -> usize {
        self.plan.window_count(self.record.len()) * self.record.channel_count()
    }
}

/// Engine configuration pinned to `threads` workers.
pub fn engine_config(threads: usize) -> EngineConfig {
    EngineConfig {
        thread_count: threads,
        ..Default::default()
    }
}
