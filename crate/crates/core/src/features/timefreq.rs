use super::cache::SpectralCache;
use super::frequency::frame_trajectories;
use super::id::FeatureId;
use super::{EngineConfig, PartialFeatures};

/// ERHL, IMNF and IMFB from the short-time frame PSDs.
///
/// IMNF and IMFB are mean instantaneous periods: frame averages of 1/MPF and
/// 1/MDF, in seconds.
pub fn compute_tf_features(cache: &SpectralCache, cfg: &EngineConfig) -> PartialFeatures {
    let mut out = PartialFeatures::default();

    let (mut low, mut high) = (0.0, 0.0);
    for frame in &cache.stft_frames {
        let (lo_a, lo_b) = cfg.erhl_low_band;
        let (hi_a, hi_b) = cfg.erhl_high_band;
        low += frame.power[frame.band(lo_a, lo_b)].iter().sum::<f64>();
        high += frame.power[frame.band(hi_a, hi_b)].iter().sum::<f64>();
    }
    let enough_frames = cache.stft_frames.len() >= 2;
    out.set_or_flag(FeatureId::Erhl, (enough_frames && high > 0.0).then(|| low / high));

    let (mpf, mdf) = frame_trajectories(cache, cfg);
    let mean_period = |fs: &[f64]| {
        (enough_frames && !fs.is_empty()).then(|| fs.iter().map(|f| 1.0 / f).sum::<f64>() / fs.len() as f64)
    };
    out.set_or_flag(FeatureId::Imnf, mean_period(&mpf));
    out.set_or_flag(FeatureId::Imfb, mean_period(&mdf));
    out
}
