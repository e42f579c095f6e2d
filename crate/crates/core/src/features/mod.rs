//! Windowed sEMG descriptor engine.
//!
//! Each window is processed independently: one Hann-tapered FFT, short-time
//! frame spectra and a 5-level Daubechies-4 decomposition are computed once
//! ([`SpectralCache`]) and shared by every spectral, time–frequency and
//! wavelet descriptor.

mod cache;
mod config;
pub mod dwt;
mod engine;
mod frequency;
mod id;
pub mod nonlinear;
mod time;
mod timefreq;
mod vector;
mod wavelet;

pub use cache::{build_spectral_cache, build_spectral_cache_with, hann, one_sided_psd, FftCache, Psd, SpectralCache};
pub use config::EngineConfig;
pub use engine::{extract_features, Engine};
pub use frequency::{compute_frequency_features, frame_trajectories, mean_power_frequency, median_frequency};
pub use id::{Domain, FeatureId, TableGroup, FEATURE_COUNT, GROUPED_COUNT};
pub use nonlinear::compute_nonlinear_features;
pub use time::compute_time_features;
pub use timefreq::compute_tf_features;
pub use vector::{FeatureMatrix, FeatureVector, PartialFeatures};
pub use wavelet::compute_wavelet_features;
