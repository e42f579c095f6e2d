use super::cache::{Psd, SpectralCache};
use super::id::FeatureId;
use super::{EngineConfig, PartialFeatures};

/// Power-weighted mean frequency over the given bins; `None` when there is
/// no power.
pub fn mean_power_frequency(psd: &Psd, band: std::ops::Range<usize>) -> Option<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for k in band {
        num += psd.freq(k) * psd.power[k];
        den += psd.power[k];
    }
    (den > 0.0).then(|| num / den)
}

/// Frequency where cumulative in-band power reaches half the total, with
/// linear interpolation inside the crossing bin.
pub fn median_frequency(psd: &Psd, band: std::ops::Range<usize>) -> Option<f64> {
    let total: f64 = psd.power[band.clone()].iter().sum();
    if !(total > 0.0) {
        return None;
    }
    let half = total / 2.0;
    let mut cum = 0.0;
    for k in band.clone() {
        let p = psd.power[k];
        if cum + p >= half {
            if k == band.start || p == 0.0 {
                return Some(psd.freq(k));
            }
            return Some(psd.freq(k - 1) + (half - cum) / p * psd.df);
        }
        cum += p;
    }
    Some(psd.freq(band.end - 1))
}

/// Frame-wise MPF and MDF over every STFT frame with in-band power.
pub fn frame_trajectories(cache: &SpectralCache, cfg: &EngineConfig) -> (Vec<f64>, Vec<f64>) {
    let mut mpf = Vec::with_capacity(cache.stft_frames.len());
    let mut mdf = Vec::with_capacity(cache.stft_frames.len());
    for frame in &cache.stft_frames {
        let band = frame.band(cfg.band_low, cfg.band_high);
        if let (Some(a), Some(b)) = (mean_power_frequency(frame, band.clone()), median_frequency(frame, band)) {
            mpf.push(a);
            mdf.push(b);
        }
    }
    (mpf, mdf)
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Spectral descriptors plus the auxiliary peak frequency (PKF).
pub fn compute_frequency_features(cache: &SpectralCache, cfg: &EngineConfig) -> PartialFeatures {
    let psd = &cache.psd;
    let band = psd.band(cfg.band_low, cfg.band_high);
    let mut out = PartialFeatures::default();

    let in_band = &psd.power[band.clone()];
    let band_power: f64 = in_band.iter().sum();
    if !(band_power > 0.0) {
        for id in [
            FeatureId::Smr,
            FeatureId::Fsm2,
            FeatureId::Tp,
            FeatureId::Mpf,
            FeatureId::Mf,
            FeatureId::Mdf,
            FeatureId::Bse,
            FeatureId::Pkf,
        ] {
            out.flag(id);
        }
    } else {
        out.set(FeatureId::Tp, band_power * psd.df);
        out.set_or_flag(FeatureId::Mpf, mean_power_frequency(psd, band.clone()));

        let (mut amp_num, mut amp_den) = (0.0, 0.0);
        let (mut inv_moment, mut sq_moment) = (0.0, 0.0);
        let mut entropy = 0.0;
        let mut peak = (band.start, f64::NEG_INFINITY);
        for k in band.clone() {
            let f = psd.freq(k);
            let p = psd.power[k];
            let a = p.sqrt();
            amp_num += f * a;
            amp_den += a;
            inv_moment += p / f;
            sq_moment += f * f * p;
            let q = p / band_power;
            if q > 0.0 {
                entropy -= q * q.ln();
            }
            if p > peak.1 {
                peak = (k, p);
            }
        }
        out.set(FeatureId::Mf, amp_num / amp_den);
        out.set_or_flag(FeatureId::Mdf, median_frequency(psd, band.clone()));
        out.set(FeatureId::Fsm2, inv_moment / sq_moment);
        let bins = band.len();
        out.set_or_flag(FeatureId::Bse, (bins > 1).then(|| entropy / (bins as f64).ln()));
        out.set(FeatureId::Pkf, psd.freq(peak.0));

        let below: f64 = psd
            .freqs()
            .zip(&psd.power)
            .take_while(|(f, _)| *f < cfg.band_low)
            .map(|(_, p)| p)
            .sum();
        out.set_or_flag(FeatureId::Smr, (below > 0.0).then(|| band_power / below));
    }

    let (mpf, mdf) = frame_trajectories(cache, cfg);
    out.set_or_flag(FeatureId::Impf, mean(&mpf));
    out.set_or_flag(FeatureId::Imf, mean(&mdf));
    out
}
