#![allow(dead_code)]

pub mod oracle;
pub mod stats;

use fatigue_core::pipeline::{preprocess, PipelineConfig};
use fatigue_core::synth::{generate, SynthSpec};
use fatigue_core::WindowPlan;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const FS: f64 = 2000.0;

pub fn white_noise(n: usize, sigma: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| sigma * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng))
        .collect()
}

pub fn sine(freq: f64, n: usize, fs: f64) -> Vec<f64> {
    (0..n)
        .map(|i| (2.0 * std::f64::consts::PI * freq * i as f64 / fs).sin())
        .collect()
}

/// A filtered 1000-sample window of synthetic sEMG; odd seeds use white
/// noise instead, centre frequency and scale vary with the seed.
pub fn seeded_window(seed: u64) -> Vec<f64> {
    let plan = WindowPlan::default_for(FS).unwrap();
    let spec = SynthSpec {
        duration_s: 1.5,
        center_freq: 60.0 + 15.0 * (seed % 12) as f64,
        base_amplitude: 0.01 * (1 + seed % 5) as f64,
        rng_seed: seed,
        channels: vec!["m".into()],
        ..Default::default()
    };
    let raw = if seed.is_multiple_of(2) {
        generate(&spec, &plan).unwrap().record
    } else {
        fatigue_core::SignalRecord::mono("m", white_noise(3000, spec.base_amplitude, seed), FS).unwrap()
    };
    let filtered = preprocess(&raw, &PipelineConfig::default()).unwrap();
    filtered.channel(0)[1000..2000].to_vec()
}

/// |a − b| ≤ tol·max(|a|, |b|).
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn tolerance(name: &str) -> Option<f64> {
    match name {
        "ZC" | "SSC" | "WA" => None,
        "AEMG" | "iEMG" | "RMS" | "MAV" | "MCV" | "DASDV" => Some(1e-12),
        _ => Some(1e-9),
    }
}

/// Compares engine output with the naive oracle on `count` seeded windows;
/// returns one message per mismatch.
pub fn oracle_mismatches(count: u64) -> Vec<String> {
    use fatigue_core::features::nonlinear::{lz_phrase_count, median_binarize};
    use fatigue_core::{Engine, EngineConfig, FeatureId, WindowView};

    let engine = Engine::new(EngineConfig::default()).unwrap();
    let mut failures = Vec::new();
    for seed in 0..count {
        let x = seeded_window(seed);
        let got = engine.compute_window(&WindowView::of_slice(&x, FS));
        let expected = oracle::all_features(&x);
        assert_eq!(expected.len(), FeatureId::ALL.len());
        for (name, want) in expected {
            let id: FeatureId = name.parse().unwrap();
            let have = got[id];
            if got.is_degenerate(id) {
                failures.push(format!("seed {seed}: {name} flagged degenerate"));
                continue;
            }
            let ok = match tolerance(name) {
                None => have == want,
                Some(tol) => close(have, want, tol),
            };
            if !ok {
                failures.push(format!("seed {seed}: {name} engine {have:e} oracle {want:e}"));
            }
        }
        let raw = lz_phrase_count(&median_binarize(&x));
        let want = oracle::lz76_phrases(&oracle::median_bits(&x));
        if raw != want {
            failures.push(format!("seed {seed}: LZ phrases engine {raw} oracle {want}"));
        }
    }
    failures
}

/// Checks slope, intercept, Pearson r and p-value against the brute-force
/// oracle on `count` random series; returns one message per mismatch.
pub fn statistics_mismatches(count: u64) -> Vec<String> {
    use fatigue_core::trend::{fit_trend_against, pearson_correlation, ALPHA};
    use rand::Rng;

    let mut failures = Vec::new();
    for seed in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let n = rng.random_range(5..300);
        let slope = rng.random_range(-0.05..0.05);
        let sigma = rng.random_range(0.1..3.0);
        let x: Vec<f64> = (0..n).map(|i| i as f64 + rng.random_range(-0.4..0.4)).collect();
        let noise = white_noise(n, sigma, seed);
        let y: Vec<f64> = x.iter().zip(&noise).map(|(xi, e)| 2.0 + slope * xi + e).collect();
        let fit = fit_trend_against(&x, &y, ALPHA).unwrap();
        let want = stats::ols(&x, &y);
        let r = pearson_correlation(&x, &y).unwrap();
        for (what, have, expect) in [
            ("slope", fit.slope, want.slope),
            ("intercept", fit.intercept, want.intercept),
            ("r", fit.pearson_r, want.r),
            ("pearson", r, want.r),
            ("p", fit.p_value, want.p),
        ] {
            if !close(have, expect, 1e-10) {
                failures.push(format!("seed {seed} (n={n}): {what} {have:e} vs {expect:e}"));
            }
        }
    }
    failures
}
