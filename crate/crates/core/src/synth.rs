//! Seeded synthetic sEMG with controllable fatigue dynamics.
//!
//! Each channel is unit-variance Gaussian noise shaped by a 4th-order
//! resonant band-pass whose centre drifts downward over the record, scaled
//! by a rising amplitude envelope, plus a white noise floor:
//!
//! `x(t) = a(t)·n_band(t) + floor·a₀·w(t)`, with
//! `a(t) = a₀(1 + β t/T)` and `f_c(t) = f₀(1 − γ t/T)`.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::signal::io::Sidecar;
use crate::signal::{FatigueLabel, SignalRecord, WindowPlan, DEFAULT_SAMPLING_RATE};

/// Coefficients are recomputed at this interval and interpolated in between.
const BLOCK_S: f64 = 0.05;
/// Noise run through the shaping filter before the record starts.
const WARMUP_S: f64 = 0.5;
const IMPULSE_LEN: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelPolicy {
    /// Equal-duration relaxed / exerted / fatigued thirds.
    #[default]
    Thirds,
    /// RPE rising linearly from 6 to 20 over the record.
    RpeRamp,
}

impl FromStr for LabelPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "thirds" => Ok(Self::Thirds),
            "rpe-ramp" | "rperamp" | "ramp" => Ok(Self::RpeRamp),
            other => Err(Error::Config(format!("unknown label policy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub duration_s: f64,
    pub sampling_rate: f64,
    pub base_amplitude: f64,
    /// Fractional amplitude increase over the full record (β).
    pub amplitude_growth: f64,
    pub center_freq: f64,
    /// Fractional decrease of the centre frequency over the record (γ).
    pub freq_compression: f64,
    /// Bandwidth at `center_freq`; it shrinks in proportion as the centre drifts.
    pub bandwidth: f64,
    /// White-noise standard deviation as a fraction of `base_amplitude`.
    pub noise_floor: f64,
    pub rng_seed: u64,
    pub label_policy: LabelPolicy,
    pub channels: Vec<String>,
    /// Lowest frequency the downstream analysis keeps; the drifting centre
    /// must stay above it.
    pub band_low: f64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            duration_s: 60.0,
            sampling_rate: DEFAULT_SAMPLING_RATE,
            base_amplitude: 1.0,
            amplitude_growth: 0.5,
            center_freq: 120.0,
            freq_compression: 0.4,
            bandwidth: 60.0,
            noise_floor: 0.1,
            rng_seed: 0,
            label_policy: LabelPolicy::Thirds,
            channels: vec!["biceps".into(), "triceps".into()],
            band_low: 20.0,
        }
    }
}

impl SynthSpec {
    /// Same spec with no fatigue dynamics.
    pub fn stationary(mut self) -> Self {
        self.amplitude_growth = 0.0;
        self.freq_compression = 0.0;
        self
    }

    pub fn validate(&self, plan: &WindowPlan) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.sampling_rate > 0.0 && self.duration_s > 0.0) {
            return bad("duration and sampling rate must be positive".into());
        }
        let window_s = plan.window_len() as f64 / self.sampling_rate;
        if self.duration_s < 3.0 * window_s {
            return bad(format!(
                "duration {} s shorter than three {window_s} s windows",
                self.duration_s
            ));
        }
        if !(self.center_freq * (1.0 - self.freq_compression) > self.band_low) {
            return bad(format!(
                "centre frequency falls to {} Hz, below the {} Hz band edge",
                self.center_freq * (1.0 - self.freq_compression),
                self.band_low
            ));
        }
        if !(self.center_freq < self.sampling_rate / 2.0 && self.bandwidth > 0.0) {
            return bad("centre frequency must be below Nyquist with positive bandwidth".into());
        }
        if !(self.base_amplitude > 0.0 && self.noise_floor >= 0.0 && self.amplitude_growth > -1.0) {
            return bad("amplitude parameters out of range".into());
        }
        if self.channels.is_empty() {
            return bad("at least one channel is required".into());
        }
        Ok(())
    }

    fn samples(&self) -> usize {
        (self.duration_s * self.sampling_rate).round() as usize
    }

    pub fn amplitude_at(&self, t: f64) -> f64 {
        self.base_amplitude * (1.0 + self.amplitude_growth * t / self.duration_s)
    }

    pub fn center_at(&self, t: f64) -> f64 {
        self.center_freq * (1.0 - self.freq_compression * t / self.duration_s)
    }

    /// Label for a window starting at `t` seconds.
    pub fn label_at(&self, t: f64) -> FatigueLabel {
        let progress = (t / self.duration_s).clamp(0.0, 1.0);
        let rpe = match self.label_policy {
            LabelPolicy::Thirds => match (3.0 * progress) as u8 {
                0 => 8,
                1 => 13,
                _ => 18,
            },
            LabelPolicy::RpeRamp => (6.0 + 14.0 * progress).round().clamp(6.0, 20.0) as u8,
        };
        FatigueLabel::from_rpe(rpe).expect("rpe within 6..=20")
    }
}

/// Generator output with the internal fatigue trajectories.
#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub record: SignalRecord,
    /// One label per window of the plan.
    pub labels: Vec<FatigueLabel>,
    /// Metadata including one RPE annotation per second.
    pub sidecar: Sidecar,
    /// Amplitude envelope and centre frequency at each coefficient block.
    pub amplitude: Vec<f64>,
    pub center: Vec<f64>,
}

#[derive(Clone, Copy)]
struct Resonator {
    b0: f64,
    a1: f64,
    a2: f64,
}

impl Resonator {
    /// Constant 0 dB peak-gain band-pass (b1 = 0, b2 = -b0).
    fn new(fc: f64, q: f64, fs: f64) -> Self {
        let w0 = 2.0 * PI * fc / fs;
        let alpha = w0.sin() / (2.0 * q);
        let a0 = 1.0 + alpha;
        Self {
            b0: alpha / a0,
            a1: -2.0 * w0.cos() / a0,
            a2: (1.0 - alpha) / a0,
        }
    }

    fn lerp(&self, other: &Self, u: f64) -> Self {
        Self {
            b0: self.b0 + (other.b0 - self.b0) * u,
            a1: self.a1 + (other.a1 - self.a1) * u,
            a2: self.a2 + (other.a2 - self.a2) * u,
        }
    }
}

/// Two identical resonators in series, direct form I state.
#[derive(Default, Clone, Copy)]
struct Cascade {
    x: [[f64; 2]; 2],
    y: [[f64; 2]; 2],
}

impl Cascade {
    fn step(&mut self, r: &Resonator, input: f64) -> f64 {
        let mut v = input;
        for s in 0..2 {
            let out = r.b0 * (v - self.x[s][1]) - r.a1 * self.y[s][0] - r.a2 * self.y[s][1];
            self.x[s] = [v, self.x[s][0]];
            self.y[s] = [out, self.y[s][0]];
            v = out;
        }
        v
    }
}

/// Output standard deviation of the cascade for unit-variance white input.
fn cascade_gain(r: &Resonator) -> f64 {
    let mut c = Cascade::default();
    let mut energy = 0.0;
    for i in 0..IMPULSE_LEN {
        let h = c.step(r, if i == 0 { 1.0 } else { 0.0 });
        energy += h * h;
    }
    energy.sqrt()
}

pub fn generate(spec: &SynthSpec, plan: &WindowPlan) -> Result<SynthOutput> {
    spec.validate(plan)?;
    let fs = spec.sampling_rate;
    let n = spec.samples();
    let block = ((BLOCK_S * fs).round() as usize).max(1);
    let blocks = n.div_ceil(block);

    let block_times: Vec<f64> = (0..=blocks).map(|b| (b * block) as f64 / fs).collect();
    let amplitude: Vec<f64> = block_times.iter().map(|&t| spec.amplitude_at(t)).collect();
    let center: Vec<f64> = block_times.iter().map(|&t| spec.center_at(t)).collect();
    // Constant Q: the whole band compresses with the centre frequency.
    let q = spec.center_freq / spec.bandwidth;
    let resonators: Vec<Resonator> = center.iter().map(|&f| Resonator::new(f, q, fs)).collect();
    let gains: Vec<f64> = resonators.iter().map(cascade_gain).collect();

    let mut samples = Vec::with_capacity(spec.channels.len());
    for channel in 0..spec.channels.len() {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
        rng.set_stream(channel as u64);
        let mut gauss = || -> f64 { StandardNormal.sample(&mut rng) };
        let mut state = Cascade::default();
        for _ in 0..(WARMUP_S * fs) as usize {
            state.step(&resonators[0], gauss());
        }
        let mut x = Vec::with_capacity(n);
        for i in 0..n {
            let b = i / block;
            let u = (i % block) as f64 / block as f64;
            let r = resonators[b].lerp(&resonators[b + 1], u);
            let gain = gains[b] + (gains[b + 1] - gains[b]) * u;
            let t = i as f64 / fs;
            let shaped = state.step(&r, gauss()) / gain;
            let floor = spec.noise_floor * spec.base_amplitude * gauss();
            x.push(spec.amplitude_at(t) * shaped + floor);
        }
        samples.push(x);
    }
    let record = SignalRecord::new(spec.channels.clone(), samples, fs)?;

    let labels = (0..plan.window_count(n))
        .map(|w| spec.label_at(plan.start_of(w) as f64 / fs))
        .collect();
    let sidecar = Sidecar {
        sampling_rate: Some(fs),
        mvc_level: None,
        subject_id: Some(format!("synth-{}", spec.rng_seed)),
        rpe: (0..spec.duration_s.ceil() as usize)
            .map(|s| (s as f64, spec.label_at(s as f64).rpe()))
            .collect(),
    };
    Ok(SynthOutput {
        record,
        labels,
        sidecar,
        amplitude,
        center,
    })
}
