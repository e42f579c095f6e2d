//! End-to-end orchestration: preprocess, extract, group and export.

mod featmap;
mod labels;
mod sequence;

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::{info, warn};

pub use featmap::{featmap_header, parse_featmap, read_featmap, render_featmap, write_featmap, FEATMAP_VERSION};
pub use labels::{labels_from_sidecar, parse_labels, read_labels, render_labels, write_labels};
pub use sequence::{build_sequences, render_sequences, ChannelSelection, Sequence, SequenceDataset};

use crate::error::{Error, Result};
use crate::features::{Engine, EngineConfig, FeatureId, FeatureMatrix};
use crate::signal::io::{read_signal, sidecar_path, write_signal_csv};
use crate::signal::{design_filters, FatigueLabel, FilterSpec, PhaseMode, SignalRecord, WindowPlan};
use crate::synth::{generate, SynthOutput, SynthSpec};
use crate::trend::{group_features, render_plot_csv, render_trend_csv, FeatureGroups, GroupingMode, ALPHA};

/// Regressor used by the trend test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Regressor {
    #[default]
    WindowIndex,
    /// Per-window RPE from a label file.
    Rpe,
}

impl FromStr for Regressor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "index" | "window_index" => Ok(Self::WindowIndex),
            "rpe" => Ok(Self::Rpe),
            other => Err(Error::Config(format!("unknown regressor {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub filter: FilterSpec,
    pub window_s: f64,
    pub stride_s: f64,
    pub engine: EngineConfig,
    pub grouping: GroupingMode,
    pub seq_len: usize,
    pub seq_channel: ChannelSelection,
    pub regressor: Regressor,
    pub seed: u64,
    /// Default output path for subcommands that write a single file.
    pub output: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            filter: FilterSpec::default(),
            window_s: WindowPlan::DEFAULT_WINDOW_S,
            stride_s: WindowPlan::DEFAULT_STRIDE_S,
            engine: EngineConfig::default(),
            grouping: GroupingMode::Empirical,
            seq_len: 5,
            seq_channel: ChannelSelection::First,
            regressor: Regressor::WindowIndex,
            seed: 0,
            output: None,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value {value:?} for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!("invalid boolean {value:?} for {key}"))),
    }
}

/// Parses `lo:hi` into a band in Hz.
pub fn parse_band(value: &str) -> Result<(f64, f64)> {
    let (lo, hi) = value
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("band must be lo:hi, got {value:?}")))?;
    Ok((parse_value("band", lo.trim())?, parse_value("band", hi.trim())?))
}

impl PipelineConfig {
    /// Sets the preprocessing and spectral analysis band together.
    pub fn set_band(&mut self, low: f64, high: f64) {
        self.filter.band_low = low;
        self.filter.band_high = high;
        self.engine.band_low = low;
        self.engine.band_high = high;
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let e = &mut self.engine;
        match key {
            "band" => {
                let (lo, hi) = parse_band(value)?;
                self.set_band(lo, hi);
            }
            "band_low" => {
                let hi = self.filter.band_high;
                self.set_band(parse_value(key, value)?, hi);
            }
            "band_high" => {
                let lo = self.filter.band_low;
                self.set_band(lo, parse_value(key, value)?);
            }
            "notch" => {
                self.filter.notch_freq = match value.to_ascii_lowercase().as_str() {
                    "none" | "off" => None,
                    v => Some(parse_value(key, v)?),
                }
            }
            "notch_bandwidth" => self.filter.notch_bandwidth = parse_value(key, value)?,
            "filter_order" => self.filter.filter_order = parse_value(key, value)?,
            "zero_phase" => {
                self.filter.phase = if parse_bool(key, value)? {
                    PhaseMode::ZeroPhase
                } else {
                    PhaseMode::Causal
                }
            }
            "window_s" => self.window_s = parse_value(key, value)?,
            "stride_s" => self.stride_s = parse_value(key, value)?,
            "threads" | "thread_count" => e.thread_count = parse_value(key, value)?,
            "zc_threshold" => e.zc_threshold = parse_value(key, value)?,
            "ssc_threshold" => e.ssc_threshold = parse_value(key, value)?,
            "wa_threshold_fraction" => e.wa_threshold_fraction = parse_value(key, value)?,
            "aemg_smoothing_s" => e.aemg_smoothing_s = parse_value(key, value)?,
            "stft_frame_len" => e.stft_frame_len = parse_value(key, value)?,
            "stft_overlap" => e.stft_overlap = parse_value(key, value)?,
            "wavelet_levels" => e.wavelet_levels = parse_value(key, value)?,
            "erhl_low_band" => e.erhl_low_band = parse_band(value)?,
            "erhl_high_band" => e.erhl_high_band = parse_band(value)?,
            "rqa_embedding" => e.rqa_embedding = parse_value(key, value)?,
            "rqa_delay" => e.rqa_delay = parse_value(key, value)?,
            "rqa_threshold_fraction" => e.rqa_threshold_fraction = parse_value(key, value)?,
            "rqa_min_line" => e.rqa_min_line = parse_value(key, value)?,
            "entropy_m" => e.entropy_m = parse_value(key, value)?,
            "entropy_r_fraction" => e.entropy_r_fraction = parse_value(key, value)?,
            "higuchi_k_max" => e.higuchi_k_max = parse_value(key, value)?,
            "permutation_order" => e.permutation_order = parse_value(key, value)?,
            "permutation_delay" => e.permutation_delay = parse_value(key, value)?,
            "dfa_scales" => {
                e.dfa_scales = value
                    .split([' ', ';'])
                    .filter(|s| !s.is_empty())
                    .map(|s| parse_value(key, s))
                    .collect::<Result<_>>()?
            }
            "grouping" => self.grouping = value.parse()?,
            "seq_len" => self.seq_len = parse_value(key, value)?,
            "seq_channel" => self.seq_channel = value.parse()?,
            "regressor" => self.regressor = value.parse()?,
            "seed" => self.seed = parse_value(key, value)?,
            "output" => self.output = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Flat `key = value` text; `#` starts a comment.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text, path)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str, path: &Path) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |msg: String| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                msg,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key = value, found {line:?}")))?;
            self.set(key.trim(), value.trim()).map_err(|e| parse_err(e.to_string()))?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?, path)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seq_len < 1 {
            return Err(Error::Config("seq_len must be at least 1".into()));
        }
        if !(self.window_s > 0.0 && self.stride_s > 0.0) {
            return Err(Error::Config("window and stride must be positive".into()));
        }
        self.engine.validate()
    }

    pub fn plan(&self, sampling_rate: f64) -> Result<WindowPlan> {
        WindowPlan::new(self.window_s, self.stride_s, sampling_rate)
    }
}

/// Fails early when an output file cannot be created in its directory.
pub fn ensure_writable(path: &Path) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if !parent.is_dir() {
        return Err(Error::Config(format!("output directory {} does not exist", parent.display())));
    }
    if path.is_dir() {
        return Err(Error::Config(format!("output path {} is a directory", path.display())));
    }
    Ok(())
}

/// Band-pass (and notch) filtering with the configured design.
pub fn preprocess(record: &SignalRecord, cfg: &PipelineConfig) -> Result<SignalRecord> {
    design_filters(&cfg.filter, record.sampling_rate())?.apply(record)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractSummary {
    pub channels: usize,
    pub windows_per_channel: usize,
    /// Window-channel rows across all channels.
    pub rows: usize,
    pub degenerate: Vec<(FeatureId, usize)>,
    pub labels_written: bool,
}

/// Reads a signal, preprocesses it, extracts features and writes the
/// feature map. Labels are derived from sidecar RPE annotations when
/// `labels_out` is given.
pub fn run_extract(
    input: &Path,
    sidecar: Option<&Path>,
    cfg: &PipelineConfig,
    out: &Path,
    labels_out: Option<&Path>,
) -> Result<ExtractSummary> {
    cfg.validate()?;
    ensure_writable(out)?;
    if let Some(p) = labels_out {
        ensure_writable(p)?;
    }
    let (record, meta) = read_signal(input, sidecar)?;
    let plan = cfg.plan(record.sampling_rate())?;
    let filtered = preprocess(&record, cfg)?;
    let matrix = Engine::new(cfg.engine.clone())?.extract(&filtered, &plan)?;
    write_featmap(&matrix, out)?;

    let degenerate: Vec<(FeatureId, usize)> = FeatureId::ALL
        .iter()
        .zip(matrix.degenerate_counts())
        .filter(|(_, n)| *n > 0)
        .map(|(&id, n)| (id, n))
        .collect();
    let mut summary = ExtractSummary {
        channels: matrix.channels.len(),
        windows_per_channel: matrix.window_count,
        rows: matrix.rows.len(),
        degenerate,
        labels_written: false,
    };
    info!(
        "{} windows per channel, {} window-channel rows over {} channels",
        summary.windows_per_channel, summary.rows, summary.channels
    );
    if summary.degenerate.is_empty() {
        info!("no degenerate values");
    }
    for (id, n) in &summary.degenerate {
        info!("{id}: {n} degenerate values stored as 0");
    }

    if let Some(path) = labels_out {
        match labels_from_sidecar(&meta, &plan, record.len(), record.sampling_rate())? {
            Some(labels) => {
                write_labels(&labels, path)?;
                summary.labels_written = true;
            }
            None => warn!("sidecar has no RPE annotations; no labels written"),
        }
    }
    Ok(summary)
}

/// Groups the feature map's descriptors per the configured mode.
pub fn feature_groups(
    matrix: &FeatureMatrix,
    labels: Option<&[FatigueLabel]>,
    cfg: &PipelineConfig,
) -> Result<FeatureGroups> {
    match cfg.grouping {
        GroupingMode::Table => Ok(FeatureGroups::table()),
        GroupingMode::Empirical => {
            let rpe: Option<Vec<f64>> = match cfg.regressor {
                Regressor::WindowIndex => None,
                Regressor::Rpe => {
                    let labels = labels.ok_or_else(|| Error::Config("the rpe regressor needs a label file".into()))?;
                    if labels.len() != matrix.window_count {
                        return Err(Error::Data(format!(
                            "{} labels for {} windows",
                            labels.len(),
                            matrix.window_count
                        )));
                    }
                    Some(labels.iter().map(|l| f64::from(l.rpe())).collect())
                }
            };
            group_features(matrix, rpe.as_deref(), ALPHA)
        }
    }
}

/// Writes the per-channel trend report and, optionally, plot data.
pub fn run_trends(
    featmap: &Path,
    labels: Option<&Path>,
    cfg: &PipelineConfig,
    out: &Path,
    plot_out: Option<&Path>,
) -> Result<FeatureGroups> {
    ensure_writable(out)?;
    if let Some(p) = plot_out {
        ensure_writable(p)?;
    }
    let matrix = read_featmap(featmap)?;
    let labels = labels.map(read_labels).transpose()?;
    let cfg = PipelineConfig {
        grouping: GroupingMode::Empirical,
        ..cfg.clone()
    };
    let groups = feature_groups(&matrix, labels.as_deref(), &cfg)?;
    fs::write(out, render_trend_csv(&groups.reports, &matrix.channels))?;
    if let Some(p) = plot_out {
        fs::write(p, render_plot_csv(&matrix)?)?;
    }
    info!(
        "{} increasing, {} decreasing, {} non-significant",
        groups.increasing.len(),
        groups.decreasing.len(),
        groups.nonsignificant.len()
    );
    Ok(groups)
}

pub fn run_export_sequences(featmap: &Path, labels: &Path, cfg: &PipelineConfig, out: &Path) -> Result<SequenceDataset> {
    cfg.validate()?;
    ensure_writable(out)?;
    let matrix = read_featmap(featmap)?;
    let labels = read_labels(labels)?;
    let groups = feature_groups(&matrix, Some(&labels), cfg)?;
    let dataset = build_sequences(&matrix, &labels, &groups, &cfg.seq_channel, cfg.seq_len)?;
    fs::write(out, render_sequences(&dataset))?;
    info!(
        "{} sequences of {} windows ({} increasing, {} decreasing features)",
        dataset.sequences.len(),
        dataset.seq_len,
        dataset.increasing.len(),
        dataset.decreasing.len()
    );
    Ok(dataset)
}

/// Default label path next to a signal CSV: `<stem>.labels.csv`.
pub fn default_labels_path(signal_csv: &Path) -> PathBuf {
    signal_csv.with_extension("labels.csv")
}

/// Generates a record and writes the signal CSV, its sidecar and labels.
pub fn run_synth(spec: &SynthSpec, cfg: &PipelineConfig, out: &Path, labels_out: &Path) -> Result<SynthOutput> {
    ensure_writable(out)?;
    ensure_writable(labels_out)?;
    let plan = cfg.plan(spec.sampling_rate)?;
    let output = generate(spec, &plan)?;
    write_signal_csv(&output.record, out, false)?;
    output.sidecar.write(&sidecar_path(out))?;
    write_labels(&output.labels, labels_out)?;
    info!(
        "{} s, {} channels, {} labelled windows",
        spec.duration_s,
        output.record.channel_count(),
        output.labels.len()
    );
    Ok(output)
}
