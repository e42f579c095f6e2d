use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::signal::{segment_windows, SignalRecord, WindowPlan, WindowView};

use super::cache::{build_spectral_cache_with, FftCache};
use super::{
    compute_frequency_features, compute_nonlinear_features, compute_tf_features, compute_time_features,
    compute_wavelet_features, EngineConfig, FeatureMatrix, FeatureVector,
};

/// Feature extractor holding validated configuration and shared FFT plans.
#[derive(Debug)]
pub struct Engine {
    cfg: EngineConfig,
    ffts: FftCache,
}

impl Engine {
    pub fn new(cfg: EngineConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            ffts: FftCache::new(),
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    /// Full-window FFTs performed since construction (or the last reset).
    pub fn full_window_ffts(&self) -> u64 {
        self.ffts.full_window_ffts()
    }

    pub fn reset_fft_counter(&self) {
        self.ffts.reset_counter();
    }

    /// Every canonical descriptor of one window.
    pub fn compute_window(&self, view: &WindowView<'_>) -> FeatureVector {
        let cache = build_spectral_cache_with(view, &self.cfg, &self.ffts);
        let parts = [
            compute_time_features(view, &self.cfg),
            compute_frequency_features(&cache, &self.cfg),
            compute_tf_features(&cache, &self.cfg),
            compute_wavelet_features(&cache, &self.cfg),
            compute_nonlinear_features(view, &cache, &self.cfg),
        ];
        FeatureVector::from_parts(view.window_index, view.channel_index, view.start_sample, &parts)
    }

    /// Descriptors for every (window, channel) pair, window-major.
    ///
    /// Each work item writes only its own output slot, so the result does not
    /// depend on `thread_count`.
    pub fn extract(&self, signal: &SignalRecord, plan: &WindowPlan) -> Result<FeatureMatrix> {
        let views = segment_windows(signal, plan);
        let channels = signal.channels().to_vec();
        if views.is_empty() {
            log::warn!("no complete windows; returning an empty feature matrix");
            return Ok(FeatureMatrix::empty(channels));
        }
        let threads = match self.cfg.thread_count {
            0 => num_cpus::get(),
            n => n,
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {threads} worker threads: {e}")))?;
        let mut rows = Vec::with_capacity(views.len());
        pool.install(|| {
            views
                .par_iter()
                .with_min_len(4)
                .map(|v| self.compute_window(v))
                .collect_into_vec(&mut rows)
        });
        Ok(FeatureMatrix {
            channels,
            window_count: plan.window_count(signal.len()),
            rows,
        })
    }
}

/// One-shot extraction with a fresh [`Engine`].
pub fn extract_features(signal: &SignalRecord, plan: &WindowPlan, cfg: &EngineConfig) -> Result<FeatureMatrix> {
    Engine::new(cfg.clone())?.extract(signal, plan)
}
