//! `fatigue`: synthesise, preprocess, extract, group and export sEMG
//! fatigue descriptors.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use fatigue_core::benchmark::{benchmark_engine, BenchmarkSpec, MIN_BENCH_WINDOWS};
use fatigue_core::pipeline::{
    default_labels_path, run_export_sequences, run_extract, run_synth, run_trends, PipelineConfig,
};
use fatigue_core::synth::{LabelPolicy, SynthSpec};
use log::info;

#[derive(Parser)]
#[command(name = "fatigue", version, about = "sEMG muscle-fatigue feature pipeline")]
struct Cli {
    /// Only log warnings and errors.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the descriptor feature map from a signal CSV.
    Extract(ExtractArgs),
    /// Per-feature trend tests and grouping report.
    Trends(TrendsArgs),
    /// Generate a synthetic fatigue recording with labels.
    Synth(SynthArgs),
    /// Measure engine throughput across thread counts.
    Bench(BenchArgs),
    /// Export overlapping window sequences for the sequence model.
    ExportSeq(ExportArgs),
}

/// Settings shared by the pipeline subcommands; flags override the file.
#[derive(Args, Default)]
struct Overrides {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    window_s: Option<f64>,
    #[arg(long)]
    stride_s: Option<f64>,
    /// Pass band in Hz as `low:high`.
    #[arg(long)]
    band: Option<String>,
    /// Notch frequency in Hz, or `none`.
    #[arg(long)]
    notch: Option<String>,
    /// Forward-backward filtering instead of a single causal pass.
    #[arg(long)]
    zero_phase: bool,
    /// Engine worker threads (0 uses every core).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// `empirical` or `table`.
    #[arg(long)]
    grouping: Option<String>,
    #[arg(long)]
    seq_len: Option<usize>,
}

impl Overrides {
    fn resolve(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(path) => PipelineConfig::load(path).with_context(|| format!("loading {}", path.display()))?,
            None => PipelineConfig::default(),
        };
        let mut set = |key: &str, value: Option<String>| -> Result<()> {
            if let Some(v) = value {
                cfg.set(key, &v).with_context(|| format!("--{}", key.replace('_', "-")))?;
            }
            Ok(())
        };
        set("window_s", self.window_s.map(|v| v.to_string()))?;
        set("stride_s", self.stride_s.map(|v| v.to_string()))?;
        set("band", self.band.clone())?;
        set("notch", self.notch.clone())?;
        set("zero_phase", self.zero_phase.then(|| "true".to_string()))?;
        set("threads", self.threads.map(|v| v.to_string()))?;
        set("seed", self.seed.map(|v| v.to_string()))?;
        set("grouping", self.grouping.clone())?;
        set("seq_len", self.seq_len.map(|v| v.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn output_path(flag: Option<PathBuf>, cfg: &PipelineConfig) -> Result<PathBuf> {
    match flag.or_else(|| cfg.output.clone()) {
        Some(p) => Ok(p),
        None => bail!("no output path: pass --out or set `output` in the config file"),
    }
}

#[derive(Args)]
struct ExtractArgs {
    /// Signal CSV (`time_s,<channels...>`).
    input: PathBuf,
    /// Sidecar metadata; defaults to `<input>.meta` when present.
    #[arg(long)]
    sidecar: Option<PathBuf>,
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also write per-window labels from sidecar RPE annotations.
    #[arg(long)]
    labels_out: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct TrendsArgs {
    /// Feature map written by `extract`.
    featmap: PathBuf,
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Channel-averaged trajectories with fitted lines.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Label file; needed for `--regressor rpe`.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// `index` or `rpe`.
    #[arg(long)]
    regressor: Option<String>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct ExportArgs {
    featmap: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// `first`, `all`, or a channel name.
    #[arg(long)]
    channel: Option<String>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Label CSV; defaults to `<out stem>.labels.csv`.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long, default_value_t = 60.0)]
    duration: f64,
    #[arg(long, default_value_t = 2000.0)]
    sampling_rate: f64,
    /// Fractional amplitude growth over the record.
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Fractional centre-frequency drop over the record.
    #[arg(long, default_value_t = 0.4)]
    gamma: f64,
    #[arg(long, default_value_t = 120.0)]
    f0: f64,
    #[arg(long, default_value_t = 60.0)]
    bandwidth: f64,
    #[arg(long, default_value_t = 0.1)]
    noise_floor: f64,
    /// `thirds` or `rpe-ramp`.
    #[arg(long, default_value = "thirds")]
    policy: String,
    /// Comma-separated channel names.
    #[arg(long, default_value = "biceps,triceps", value_delimiter = ',')]
    channels: Vec<String>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated thread counts; 1 is always measured.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 4, 8])]
    threads: Vec<usize>,
    #[arg(long, default_value_t = MIN_BENCH_WINDOWS)]
    windows: usize,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Machine-readable `key=value` report.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn extract(args: ExtractArgs) -> Result<()> {
    let cfg = args.overrides.resolve()?;
    let out = output_path(args.out, &cfg)?;
    let sidecar = args.sidecar.or_else(|| {
        let p = fatigue_core::signal::io::sidecar_path(&args.input);
        p.exists().then_some(p)
    });
    let s = run_extract(&args.input, sidecar.as_deref(), &cfg, &out, args.labels_out.as_deref())
        .with_context(|| format!("extracting {}", args.input.display()))?;
    println!(
        "{}: {} windows per channel x {} channels = {} window-channel rows",
        out.display(),
        s.windows_per_channel,
        s.channels,
        s.rows
    );
    Ok(())
}

fn trends(args: TrendsArgs) -> Result<()> {
    let mut cfg = args.overrides.resolve()?;
    if let Some(r) = &args.regressor {
        cfg.set("regressor", r)?;
    }
    let out = output_path(args.out, &cfg)?;
    let groups = run_trends(&args.featmap, args.labels.as_deref(), &cfg, &out, args.plot.as_deref())?;
    let names = |ids: &[fatigue_core::FeatureId]| ids.iter().map(|f| f.name()).collect::<Vec<_>>().join(" ");
    println!("increasing: {}", names(&groups.increasing));
    println!("decreasing: {}", names(&groups.decreasing));
    println!("non-significant: {}", names(&groups.nonsignificant));
    Ok(())
}

fn export(args: ExportArgs) -> Result<()> {
    let mut cfg = args.overrides.resolve()?;
    if let Some(c) = &args.channel {
        cfg.set("seq_channel", c)?;
    }
    let out = output_path(args.out, &cfg)?;
    let ds = run_export_sequences(&args.featmap, &args.labels, &cfg, &out)?;
    println!(
        "{}: {} sequences of {} windows ({} + {} features)",
        out.display(),
        ds.sequences.len(),
        ds.seq_len,
        ds.increasing.len(),
        ds.decreasing.len()
    );
    Ok(())
}

fn synth(args: SynthArgs) -> Result<()> {
    let cfg = args.overrides.resolve()?;
    let out = output_path(args.out, &cfg)?;
    let labels = args.labels.unwrap_or_else(|| default_labels_path(&out));
    let spec = SynthSpec {
        duration_s: args.duration,
        sampling_rate: args.sampling_rate,
        amplitude_growth: args.beta,
        freq_compression: args.gamma,
        center_freq: args.f0,
        bandwidth: args.bandwidth,
        noise_floor: args.noise_floor,
        rng_seed: cfg.seed,
        label_policy: args.policy.parse::<LabelPolicy>()?,
        channels: args.channels,
        band_low: cfg.filter.band_low,
        ..Default::default()
    };
    let output = run_synth(&spec, &cfg, &out, &labels)?;
    println!(
        "{}: {} samples x {} channels, {} labels in {}",
        out.display(),
        output.record.len(),
        output.record.channel_count(),
        output.labels.len(),
        labels.display()
    );
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    let spec = BenchmarkSpec {
        windows: args.windows,
        thread_counts: args.threads,
        repeats: args.repeats,
        seed: args.seed,
        ..Default::default()
    };
    let report = benchmark_engine(&spec)?;
    print!("{}", report.render_text());
    if let Some(path) = args.out {
        std::fs::write(&path, report.render_kv()).with_context(|| format!("writing {}", path.display()))?;
        info!("wrote {}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Extract(a) => extract(a),
        Command::Trends(a) => trends(a),
        Command::Synth(a) => synth(a),
        Command::Bench(a) => bench(a),
        Command::ExportSeq(a) => export(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
