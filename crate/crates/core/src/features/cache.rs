use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::signal::WindowView;

use super::dwt::{wavedec, Decomposition, FilterBank};
use super::EngineConfig;

/// Shared FFT plans plus a counter of full-window transforms.
pub struct FftCache {
    plans: Mutex<HashMap<usize, Arc<dyn Fft<f64>>>>,
    full_window_ffts: AtomicU64,
}

impl Default for FftCache {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Debug for FftCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftCache")
            .field("full_window_ffts", &self.full_window_ffts())
            .finish()
    }
}

impl FftCache {
    pub fn new() -> Self {
        Self {
            plans: Mutex::new(HashMap::new()),
            full_window_ffts: AtomicU64::new(0),
        }
    }

    fn plan(&self, len: usize) -> Arc<dyn Fft<f64>> {
        let mut plans = self.plans.lock().unwrap_or_else(|e| e.into_inner());
        plans
            .entry(len)
            .or_insert_with(|| FftPlanner::new().plan_fft_forward(len))
            .clone()
    }

    /// Number of full-window FFTs run through this cache.
    pub fn full_window_ffts(&self) -> u64 {
        self.full_window_ffts.load(Ordering::Relaxed)
    }

    pub fn reset_counter(&self) {
        self.full_window_ffts.store(0, Ordering::Relaxed);
    }
}

/// Periodic Hann taper.
pub fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
        .collect()
}

/// One-sided PSD from a full complex spectrum of a tapered length-`n` frame:
/// `|X_k|^2 / (fs * sum w^2)`, doubled for bins that have a mirror image.
pub fn one_sided_psd(spectrum: &[Complex64], window_power: f64, fs: f64) -> Vec<f64> {
    let n = spectrum.len();
    let scale = 1.0 / (fs * window_power);
    (0..=n / 2)
        .map(|k| {
            let p = spectrum[k].norm_sqr() * scale;
            let mirrored = k != 0 && !(n.is_multiple_of(2) && k == n / 2);
            if mirrored {
                2.0 * p
            } else {
                p
            }
        })
        .collect()
}

/// Power spectral density over a regular frequency grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Psd {
    /// Power per bin, units²/Hz.
    pub power: Vec<f64>,
    /// Bin spacing, Hz.
    pub df: f64,
}

impl Psd {
    pub fn freq(&self, k: usize) -> f64 {
        k as f64 * self.df
    }

    pub fn freqs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.power.len()).map(|k| self.freq(k))
    }

    /// Bins whose frequency lies in `[lo, hi]`.
    pub fn band(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let first = (lo / self.df).ceil().max(0.0) as usize;
        let last = ((hi / self.df).floor() as usize).min(self.power.len().saturating_sub(1));
        first.min(last + 1)..last + 1
    }
}

/// Spectral and wavelet intermediates shared by every spectral descriptor of
/// one window.
#[derive(Debug, Clone)]
pub struct SpectralCache {
    pub sampling_rate: f64,
    pub windowed_samples: Vec<f64>,
    pub spectrum: Vec<Complex64>,
    pub psd: Psd,
    /// Per-frame PSDs of the short-time transform.
    pub stft_frames: Vec<Psd>,
    pub stft_frame_len: usize,
    pub dwt: Decomposition,
}

impl SpectralCache {
    pub fn freq_axis(&self) -> Vec<f64> {
        self.psd.freqs().collect()
    }
}

/// Builds the cache: one FFT of the Hann-tapered window, short-time frame
/// PSDs, and the multilevel DWT of the raw window.
pub fn build_spectral_cache_with(window: &WindowView<'_>, cfg: &EngineConfig, ffts: &FftCache) -> SpectralCache {
    let x = window.samples();
    let n = x.len();
    let fs = window.sampling_rate;

    let taper = hann(n);
    let window_power: f64 = taper.iter().map(|w| w * w).sum();
    let windowed_samples: Vec<f64> = x.iter().zip(&taper).map(|(v, w)| v * w).collect();
    let mut spectrum: Vec<Complex64> = windowed_samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    ffts.plan(n).process(&mut spectrum);
    ffts.full_window_ffts.fetch_add(1, Ordering::Relaxed);
    let psd = Psd {
        power: one_sided_psd(&spectrum, window_power, fs),
        df: fs / n as f64,
    };

    let frame_len = if cfg.stft_frame_len > n {
        log::debug!(
            "window of {n} samples shorter than STFT frame {}; clamping",
            cfg.stft_frame_len
        );
        n
    } else {
        cfg.stft_frame_len
    };
    let hop = cfg.stft_hop(frame_len);
    let frame_taper = hann(frame_len);
    let frame_power: f64 = frame_taper.iter().map(|w| w * w).sum();
    let frame_plan = ffts.plan(frame_len);
    let mut buf = vec![Complex64::new(0.0, 0.0); frame_len];
    let stft_frames = (0..=(n - frame_len) / hop)
        .map(|f| {
            let start = f * hop;
            for (b, (v, w)) in buf.iter_mut().zip(x[start..start + frame_len].iter().zip(&frame_taper)) {
                *b = Complex64::new(v * w, 0.0);
            }
            frame_plan.process(&mut buf);
            Psd {
                power: one_sided_psd(&buf, frame_power, fs),
                df: fs / frame_len as f64,
            }
        })
        .collect();

    let dwt = wavedec(x, cfg.wavelet_levels, &FilterBank::db4());

    SpectralCache {
        sampling_rate: fs,
        windowed_samples,
        spectrum,
        psd,
        stft_frames,
        stft_frame_len: frame_len,
        dwt,
    }
}

/// [`build_spectral_cache_with`] using a private FFT cache.
pub fn build_spectral_cache(window: &WindowView<'_>, cfg: &EngineConfig) -> SpectralCache {
    build_spectral_cache_with(window, cfg, &FftCache::new())
}
