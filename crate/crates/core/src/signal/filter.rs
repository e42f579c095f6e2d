use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};

use super::SignalRecord;

/// Preprocessing filter parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    pub band_low: f64,
    pub band_high: f64,
    /// `None` disables the notch stage.
    pub notch_freq: Option<f64>,
    pub notch_bandwidth: f64,
    /// Order of each Butterworth edge (high-pass and low-pass).
    pub filter_order: usize,
    pub phase: PhaseMode,
}

impl Default for FilterSpec {
    fn default() -> Self {
        Self {
            band_low: 20.0,
            band_high: 450.0,
            notch_freq: Some(50.0),
            notch_bandwidth: 2.0,
            filter_order: 4,
            phase: PhaseMode::Causal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseMode {
    /// Single forward pass.
    #[default]
    Causal,
    /// Forward-backward pass with reflect padding; squares the magnitude response.
    ZeroPhase,
}

impl FilterSpec {
    pub fn validate(&self, sampling_rate: f64) -> Result<()> {
        let nyquist = sampling_rate / 2.0;
        if !(sampling_rate.is_finite() && sampling_rate > 0.0) {
            return Err(Error::Config(format!("bad sampling rate {sampling_rate}")));
        }
        if !(self.band_low > 0.0 && self.band_low < self.band_high && self.band_high < nyquist) {
            return Err(Error::Config(format!(
                "band edges must satisfy 0 < {} < {} < {nyquist}",
                self.band_low, self.band_high
            )));
        }
        if self.filter_order == 0 {
            return Err(Error::Config("filter_order must be positive".into()));
        }
        if let Some(f0) = self.notch_freq {
            if !(f0 > 0.0 && f0 < nyquist) {
                return Err(Error::Config(format!(
                    "notch frequency {f0} outside (0, {nyquist})"
                )));
            }
            if !(self.notch_bandwidth > 0.0) {
                return Err(Error::Config("notch bandwidth must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Second-order IIR section, normalised so that `a0 == 1`.
///
/// First-order sections are stored with `b2 == a2 == 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl Biquad {
    /// Poles of `z^2 + a1 z + a2` (or the single pole of a first-order section).
    pub fn poles(&self) -> Vec<Complex64> {
        let [a1, a2] = self.a;
        if a2 == 0.0 {
            return vec![Complex64::new(-a1, 0.0)];
        }
        let disc = Complex64::new(a1 * a1 - 4.0 * a2, 0.0).sqrt();
        vec![(-a1 + disc) / 2.0, (-a1 - disc) / 2.0]
    }

    pub fn is_stable(&self) -> bool {
        self.poles().iter().all(|p| p.norm() < 1.0)
    }

    /// Largest pole radius.
    pub fn pole_radius(&self) -> f64 {
        self.poles().iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// Complex response at normalised angular frequency `w` (rad/sample).
    pub fn response(&self, w: f64) -> Complex64 {
        let z1 = Complex64::from_polar(1.0, -w);
        let z2 = z1 * z1;
        let num = self.b[0] + z1 * self.b[1] + z2 * self.b[2];
        let den = 1.0 + z1 * self.a[0] + z2 * self.a[1];
        num / den
    }

    /// Transposed direct form II, in place, starting from rest.
    fn run(&self, x: &mut [f64]) {
        let [b0, b1, b2] = self.b;
        let [a1, a2] = self.a;
        let (mut s1, mut s2) = (0.0, 0.0);
        for v in x.iter_mut() {
            let input = *v;
            let y = b0 * input + s1;
            s1 = b1 * input - a1 * y + s2;
            s2 = b2 * input - a2 * y;
            *v = y;
        }
    }

    fn order(&self) -> usize {
        if self.a[1] == 0.0 && self.b[2] == 0.0 {
            1
        } else {
            2
        }
    }
}

/// Cascade of IIR sections designed for a fixed sampling rate.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterChain {
    sections: Vec<Biquad>,
    sampling_rate: f64,
    phase: PhaseMode,
}

impl FilterChain {
    pub fn sections(&self) -> &[Biquad] {
        &self.sections
    }

    pub fn sampling_rate(&self) -> f64 {
        self.sampling_rate
    }

    pub fn phase(&self) -> PhaseMode {
        self.phase
    }

    pub fn with_phase(mut self, phase: PhaseMode) -> Self {
        self.phase = phase;
        self
    }

    /// Total order of the cascade.
    pub fn order(&self) -> usize {
        self.sections.iter().map(Biquad::order).sum()
    }

    /// Single-pass complex response at `freq_hz`.
    pub fn response(&self, freq_hz: f64) -> Complex64 {
        let w = 2.0 * PI * freq_hz / self.sampling_rate;
        self.sections
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, s| acc * s.response(w))
    }

    /// Magnitude of the effective response, including the second pass in
    /// zero-phase mode.
    pub fn magnitude(&self, freq_hz: f64) -> f64 {
        let m = self.response(freq_hz).norm();
        match self.phase {
            PhaseMode::Causal => m,
            PhaseMode::ZeroPhase => m * m,
        }
    }

    pub fn magnitude_db(&self, freq_hz: f64) -> f64 {
        20.0 * self.magnitude(freq_hz).log10()
    }

    /// Filters one channel.
    pub fn filter_channel(&self, x: &[f64]) -> Vec<f64> {
        match self.phase {
            PhaseMode::Causal => {
                let mut y = x.to_vec();
                self.forward(&mut y);
                y
            }
            PhaseMode::ZeroPhase => self.filtfilt(x),
        }
    }

    pub fn apply(&self, signal: &SignalRecord) -> Result<SignalRecord> {
        let rel = (signal.sampling_rate() - self.sampling_rate).abs() / self.sampling_rate;
        if rel > 1e-9 {
            return Err(Error::Usage(format!(
                "filter chain designed for {} Hz applied to a {} Hz signal",
                self.sampling_rate,
                signal.sampling_rate()
            )));
        }
        let out = signal
            .samples()
            .iter()
            .map(|ch| self.filter_channel(ch))
            .collect();
        Ok(signal.with_samples(out))
    }

    fn forward(&self, x: &mut [f64]) {
        for s in &self.sections {
            s.run(x);
        }
    }

    fn filtfilt(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let pad = (3 * self.order()).min(n.saturating_sub(1));
        let mut buf = Vec::with_capacity(n + 2 * pad);
        // reflect without repeating the edge sample
        buf.extend((1..=pad).rev().map(|i| x[i]));
        buf.extend_from_slice(x);
        buf.extend((1..=pad).map(|i| x[n - 1 - i]));
        self.forward(&mut buf);
        buf.reverse();
        self.forward(&mut buf);
        buf.reverse();
        buf[pad..pad + n].to_vec()
    }
}

/// Poles closer than this to the unit circle are treated as unstable: a
/// coefficient rounding error of one ulp moves a near-double pole by about
/// `sqrt(f64::EPSILON)`.
const POLE_MARGIN: f64 = 1e-8;

/// Butterworth band-pass (high-pass and low-pass cascade) plus optional notch.
pub fn design_filters(spec: &FilterSpec, sampling_rate: f64) -> Result<FilterChain> {
    spec.validate(sampling_rate)?;
    let mut sections = butterworth(spec.filter_order, spec.band_low, sampling_rate, Edge::HighPass);
    sections.extend(butterworth(spec.filter_order, spec.band_high, sampling_rate, Edge::LowPass));
    if let Some(f0) = spec.notch_freq {
        sections.push(notch(f0, f0 / spec.notch_bandwidth, sampling_rate));
    }
    for (i, s) in sections.iter().enumerate() {
        let all_finite = s.b.iter().chain(s.a.iter()).all(|c| c.is_finite());
        if !all_finite || s.pole_radius() >= 1.0 - POLE_MARGIN {
            return Err(Error::Design(format!(
                "section {i} has poles on or outside the unit circle: {:?}",
                s.poles()
            )));
        }
    }
    Ok(FilterChain {
        sections,
        sampling_rate,
        phase: spec.phase,
    })
}

#[derive(Clone, Copy)]
enum Edge {
    LowPass,
    HighPass,
}

fn butterworth(order: usize, cutoff: f64, fs: f64, edge: Edge) -> Vec<Biquad> {
    let k = 2.0 * fs;
    // prewarped analog cutoff
    let wc = k * (PI * cutoff / fs).tan();
    let bilinear = |p: Complex64| (k + p) / (k - p);
    let mut sections = Vec::with_capacity(order.div_ceil(2));
    for i in 0..order / 2 {
        let theta = PI * (2 * i + order + 1) as f64 / (2 * order) as f64;
        let proto = Complex64::from_polar(1.0, theta);
        let analog = match edge {
            Edge::LowPass => proto * wc,
            Edge::HighPass => wc / proto,
        };
        let z = bilinear(analog);
        let a = [-2.0 * z.re, z.norm_sqr()];
        let section = match edge {
            Edge::LowPass => {
                let g = (1.0 + a[0] + a[1]) / 4.0;
                Biquad { b: [g, 2.0 * g, g], a }
            }
            Edge::HighPass => {
                let g = (1.0 - a[0] + a[1]) / 4.0;
                Biquad { b: [g, -2.0 * g, g], a }
            }
        };
        sections.push(section);
    }
    if order % 2 == 1 {
        let z = bilinear(Complex64::new(-wc, 0.0)).re;
        sections.push(match edge {
            Edge::LowPass => {
                let g = (1.0 - z) / 2.0;
                Biquad { b: [g, g, 0.0], a: [-z, 0.0] }
            }
            Edge::HighPass => {
                let g = (1.0 + z) / 2.0;
                Biquad { b: [g, -g, 0.0], a: [-z, 0.0] }
            }
        });
    }
    sections
}

fn notch(f0: f64, q: f64, fs: f64) -> Biquad {
    let w0 = 2.0 * PI * f0 / fs;
    let alpha = w0.sin() / (2.0 * q);
    let cw = w0.cos();
    let a0 = 1.0 + alpha;
    Biquad {
        b: [1.0 / a0, -2.0 * cw / a0, 1.0 / a0],
        a: [-2.0 * cw / a0, (1.0 - alpha) / a0],
    }
}
