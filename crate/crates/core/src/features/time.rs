use crate::signal::WindowView;

use super::id::{Domain, FeatureId};
use super::{EngineConfig, PartialFeatures};

/// Amplitude and count descriptors computed directly on the samples.
///
/// An all-zero window yields zeros for every time-domain value, each flagged.
pub fn compute_time_features(window: &WindowView<'_>, cfg: &EngineConfig) -> PartialFeatures {
    let x = window.samples();
    let n = x.len();
    let mut out = PartialFeatures::default();
    if n < 2 || x.iter().all(|&v| v == 0.0) {
        for id in FeatureId::of_domain(Domain::Time) {
            out.flag(id);
        }
        return out;
    }
    let nf = n as f64;

    let iemg: f64 = x.iter().map(|v| v.abs()).sum();
    let sum_sq: f64 = x.iter().map(|v| v * v).sum();
    let (mut abs_diff, mut sq_diff) = (0.0, 0.0);
    for pair in x.windows(2) {
        let d = pair[1] - pair[0];
        abs_diff += d.abs();
        sq_diff += d * d;
    }

    let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let wa_threshold = cfg.wa_threshold_fraction * peak;
    let mut zc = 0u32;
    let mut wa = 0u32;
    for pair in x.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let step = (a - b).abs();
        if ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)) && step >= cfg.zc_threshold {
            zc += 1;
        }
        if step > wa_threshold {
            wa += 1;
        }
    }
    let ssc = x
        .windows(3)
        .filter(|t| (t[1] - t[0]) * (t[1] - t[2]) > cfg.ssc_threshold)
        .count();

    out.set(FeatureId::Aemg, smoothed_rectified_mean(x, window.sampling_rate, cfg.aemg_smoothing_s));
    out.set(FeatureId::Iemg, iemg);
    out.set(FeatureId::Rms, (sum_sq / nf).sqrt());
    out.set(FeatureId::Mav, iemg / nf);
    out.set(FeatureId::Mcv, abs_diff / (nf - 1.0));
    out.set(FeatureId::Dasdv, (sq_diff / (nf - 1.0)).sqrt());
    out.set(FeatureId::Zc, zc as f64);
    out.set(FeatureId::Ssc, ssc as f64);
    out.set(FeatureId::Wa, wa as f64);
    out
}

/// Mean of the rectified signal after a moving average of `span_s` seconds
/// (valid positions only; the span is clamped to the window).
fn smoothed_rectified_mean(x: &[f64], fs: f64, span_s: f64) -> f64 {
    let n = x.len();
    let span = ((span_s * fs).round() as usize).clamp(1, n);
    let positions = n - span + 1;
    let mut running: f64 = x[..span].iter().map(|v| v.abs()).sum();
    let mut total = running;
    for i in span..n {
        running += x[i].abs() - x[i - span].abs();
        total += running;
    }
    total / (span as f64 * positions as f64)
}
