use super::cache::SpectralCache;
use super::dwt::{detail_reconstruction, FilterBank};
use super::id::FeatureId;
use super::{EngineConfig, PartialFeatures};

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| num / den)
}

fn waveform_length(x: &[f64]) -> f64 {
    x.windows(2).map(|p| (p[1] - p[0]).abs()).sum()
}

/// Wavelet index ratios between the deepest detail level and the finer ones,
/// plus the wavelet energy entropy.
pub fn compute_wavelet_features(cache: &SpectralCache, _cfg: &EngineConfig) -> PartialFeatures {
    let dec = &cache.dwt;
    let mut out = PartialFeatures::default();
    let levels = dec.levels();
    let energy: Vec<f64> = dec.details.iter().map(|d| d.iter().map(|c| c * c).sum()).collect();
    let abs_sum: Vec<f64> = dec.details.iter().map(|d| d.iter().map(|c| c.abs()).sum()).collect();
    let deep = levels - 1;

    out.set_or_flag(FeatureId::Wire51, ratio(energy[deep], energy[0]));
    out.set_or_flag(FeatureId::Wirm1551, ratio(abs_sum[deep], abs_sum[0]));
    out.set_or_flag(FeatureId::Wirm1522, ratio(energy[deep].sqrt(), energy[1].sqrt()));

    let bank = FilterBank::db4();
    let wl_deep = waveform_length(&detail_reconstruction(dec, levels, &bank));
    let wl_fine = waveform_length(&detail_reconstruction(dec, 1, &bank));
    out.set_or_flag(FeatureId::Wirw51, ratio(wl_deep, wl_fine));

    let approx_energy: f64 = dec.approx.iter().map(|c| c * c).sum();
    let total = energy.iter().sum::<f64>() + approx_energy;
    let wee = (total > 0.0).then(|| {
        energy
            .iter()
            .chain(std::iter::once(&approx_energy))
            .map(|e| e / total)
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.ln())
            .sum()
    });
    out.set_or_flag(FeatureId::Wee, wee);
    out
}
