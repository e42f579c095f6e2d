//! Engine throughput across thread counts on a synthetic workload.

use std::fmt::Write as _;
use std::time::Instant;

use log::warn;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::features::{Engine, EngineConfig, FeatureMatrix};
use crate::signal::{SignalRecord, WindowPlan};
use crate::synth::{generate, SynthSpec};

/// Smallest workload the throughput figures are meant for.
pub const MIN_BENCH_WINDOWS: usize = 10_000;
/// Relative spread of repeat timings above which a run is unstable.
pub const UNSTABLE_SPREAD: f64 = 0.20;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    /// Window-channel work items in the workload.
    pub windows: usize,
    pub thread_counts: Vec<usize>,
    pub repeats: usize,
    pub seed: u64,
    pub engine: EngineConfig,
}

impl Default for BenchmarkSpec {
    fn default() -> Self {
        Self {
            windows: MIN_BENCH_WINDOWS,
            thread_counts: vec![1, 2, 4, 8],
            repeats: 3,
            seed: 0,
            engine: EngineConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MachineInfo {
    pub logical_cores: usize,
    pub physical_cores: usize,
    pub os: &'static str,
    pub arch: &'static str,
}

impl MachineInfo {
    pub fn current() -> Self {
        Self {
            logical_cores: num_cpus::get(),
            physical_cores: num_cpus::get_physical(),
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreadTiming {
    pub threads: usize,
    /// Wall-clock seconds of each repeat.
    pub seconds: Vec<f64>,
    /// Throughput at the median repeat.
    pub windows_per_sec: f64,
    pub speedup: f64,
    /// (max − min) / median of the repeat timings.
    pub spread: f64,
    pub unstable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkReport {
    pub windows: usize,
    pub repeats: usize,
    pub timings: Vec<ThreadTiming>,
    /// SHA-256 of the feature matrix shared by every thread count.
    pub checksum: String,
    pub machine: MachineInfo,
}

impl BenchmarkReport {
    pub fn unstable(&self) -> bool {
        self.timings.iter().any(|t| t.unstable)
    }

    pub fn timing(&self, threads: usize) -> Option<&ThreadTiming> {
        self.timings.iter().find(|t| t.threads == threads)
    }

    pub fn render_text(&self) -> String {
        let m = &self.machine;
        let mut s = format!(
            "engine benchmark: {} windows, {} repeats, {}/{} ({} logical, {} physical cores)\n",
            self.windows, self.repeats, m.os, m.arch, m.logical_cores, m.physical_cores
        );
        let _ = writeln!(s, "{:>8} {:>14} {:>9} {:>8}", "threads", "windows/s", "speedup", "spread");
        for t in &self.timings {
            let _ = writeln!(
                s,
                "{:>8} {:>14.1} {:>8.2}x {:>7.1}%{}",
                t.threads,
                t.windows_per_sec,
                t.speedup,
                100.0 * t.spread,
                if t.unstable { "  UNSTABLE" } else { "" }
            );
        }
        let _ = writeln!(s, "checksum {}", self.checksum);
        s
    }

    /// Machine-readable `key=value` lines.
    pub fn render_kv(&self) -> String {
        let m = &self.machine;
        let mut s = String::new();
        let _ = writeln!(s, "windows={}", self.windows);
        let _ = writeln!(s, "repeats={}", self.repeats);
        let _ = writeln!(s, "checksum={}", self.checksum);
        let _ = writeln!(s, "logical_cores={}", m.logical_cores);
        let _ = writeln!(s, "physical_cores={}", m.physical_cores);
        let _ = writeln!(s, "os={}", m.os);
        let _ = writeln!(s, "arch={}", m.arch);
        let _ = writeln!(s, "unstable={}", self.unstable());
        for (i, t) in self.timings.iter().enumerate() {
            let _ = writeln!(s, "run.{i}.threads={}", t.threads);
            let _ = writeln!(s, "run.{i}.windows_per_sec={}", t.windows_per_sec);
            let _ = writeln!(s, "run.{i}.speedup={}", t.speedup);
            let _ = writeln!(s, "run.{i}.spread={}", t.spread);
            let _ = writeln!(s, "run.{i}.unstable={}", t.unstable);
        }
        s
    }
}

/// SHA-256 over window/channel indices, value bits and quality masks.
pub fn matrix_checksum(matrix: &FeatureMatrix) -> String {
    let mut h = Sha256::new();
    for name in &matrix.channels {
        h.update(name.as_bytes());
        h.update([0]);
    }
    for row in &matrix.rows {
        h.update((row.window_index as u64).to_le_bytes());
        h.update((row.channel as u64).to_le_bytes());
        h.update((row.start_sample as u64).to_le_bytes());
        for v in row.values() {
            h.update(v.to_bits().to_le_bytes());
        }
        h.update(row.quality_bitmask().to_le_bytes());
    }
    hex::encode(h.finalize())
}

/// Two-channel synthetic record yielding at least `windows` work items
/// under the default plan.
pub fn bench_workload(windows: usize, seed: u64) -> Result<(SignalRecord, WindowPlan)> {
    let fs = 2000.0;
    let plan = WindowPlan::default_for(fs)?;
    // The generator needs at least three window lengths of signal.
    let per_channel = windows.div_ceil(2).max(5);
    let samples = plan.window_len() + (per_channel - 1) * plan.stride();
    let spec = SynthSpec {
        duration_s: samples as f64 / fs,
        rng_seed: seed,
        ..Default::default()
    };
    Ok((generate(&spec, &plan)?.record, plan))
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

/// Checks that every thread count produces the same matrix, then times
/// each one.
pub fn benchmark_engine(spec: &BenchmarkSpec) -> Result<BenchmarkReport> {
    if spec.repeats == 0 || spec.thread_counts.is_empty() {
        return Err(Error::Config("benchmark needs at least one repeat and one thread count".into()));
    }
    if spec.thread_counts.contains(&0) {
        return Err(Error::Config("thread counts must be positive".into()));
    }
    if spec.windows < MIN_BENCH_WINDOWS {
        warn!(
            "{} windows is below the {MIN_BENCH_WINDOWS}-window benchmark workload; figures are indicative only",
            spec.windows
        );
    }
    let mut threads = vec![1];
    threads.extend(spec.thread_counts.iter().copied().filter(|&t| t != 1));
    threads.dedup();

    let (record, plan) = bench_workload(spec.windows, spec.seed)?;
    let engine_for = |t: usize| {
        Engine::new(EngineConfig {
            thread_count: t,
            ..spec.engine.clone()
        })
    };

    let mut checksum: Option<String> = None;
    for &t in &threads {
        let sum = matrix_checksum(&engine_for(t)?.extract(&record, &plan)?);
        match &checksum {
            None => checksum = Some(sum),
            Some(c) if *c != sum => {
                return Err(Error::Nondeterministic(format!(
                    "{t} threads produced checksum {sum}, 1 thread produced {c}"
                )))
            }
            Some(_) => {}
        }
    }

    let mut timings = Vec::new();
    let mut windows = 0;
    for &t in &threads {
        let engine = engine_for(t)?;
        let mut seconds = Vec::with_capacity(spec.repeats);
        for _ in 0..spec.repeats {
            let start = Instant::now();
            let m = engine.extract(&record, &plan)?;
            seconds.push(start.elapsed().as_secs_f64());
            windows = m.rows.len();
        }
        let med = median(&seconds);
        let spread = if spec.repeats > 1 {
            let max = seconds.iter().copied().fold(f64::MIN, f64::max);
            let min = seconds.iter().copied().fold(f64::MAX, f64::min);
            (max - min) / med
        } else {
            0.0
        };
        timings.push(ThreadTiming {
            threads: t,
            seconds,
            windows_per_sec: windows as f64 / med,
            speedup: 1.0,
            spread,
            unstable: spread > UNSTABLE_SPREAD,
        });
    }
    let base = timings[0].windows_per_sec;
    for t in timings.iter_mut().skip(1) {
        t.speedup = t.windows_per_sec / base;
    }
    let report = BenchmarkReport {
        windows,
        repeats: spec.repeats,
        timings,
        checksum: checksum.expect("at least one thread count"),
        machine: MachineInfo::current(),
    };
    if report.unstable() {
        warn!("timing spread above {:.0}% across repeats; run flagged unstable", 100.0 * UNSTABLE_SPREAD);
    }
    Ok(report)
}
