use crate::error::{Error, Result};

/// Sampling rate used by the acquisition setup when none is given.
pub const DEFAULT_SAMPLING_RATE: f64 = 2000.0;

/// Contraction intensity as a percentage of maximum voluntary contraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MvcLevel(u8);

impl MvcLevel {
    pub const ALLOWED: [u8; 4] = [20, 40, 60, 80];

    pub fn new(percent: u8) -> Result<Self> {
        if Self::ALLOWED.contains(&percent) {
            Ok(Self(percent))
        } else {
            Err(Error::Config(format!(
                "mvc_level must be one of {:?}, got {percent}",
                Self::ALLOWED
            )))
        }
    }

    pub fn percent(self) -> u8 {
        self.0
    }
}

/// Multi-channel sEMG recording.
///
/// Samples are stored channel-major; every channel has the same length.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalRecord {
    samples: Vec<Vec<f64>>,
    sampling_rate: f64,
    channels: Vec<String>,
    pub mvc_level: Option<MvcLevel>,
    pub subject_id: Option<String>,
}

impl SignalRecord {
    pub fn new(channels: Vec<String>, samples: Vec<Vec<f64>>, sampling_rate: f64) -> Result<Self> {
        if !(sampling_rate.is_finite() && sampling_rate > 0.0) {
            return Err(Error::Config(format!(
                "sampling_rate must be positive, got {sampling_rate}"
            )));
        }
        if samples.is_empty() || channels.len() != samples.len() {
            return Err(Error::Data(format!(
                "{} channel labels for {} sample channels",
                channels.len(),
                samples.len()
            )));
        }
        let len = samples[0].len();
        if len == 0 {
            return Err(Error::Data("no samples".into()));
        }
        if let Some((i, ch)) = samples.iter().enumerate().find(|(_, ch)| ch.len() != len) {
            return Err(Error::Data(format!(
                "channel {} has {} samples, expected {len}",
                channels[i],
                ch.len()
            )));
        }
        Ok(Self {
            samples,
            sampling_rate,
            channels,
            mvc_level: None,
            subject_id: None,
        })
    }

    /// Single-channel convenience constructor.
    pub fn mono(name: &str, samples: Vec<f64>, sampling_rate: f64) -> Result<Self> {
        Self::new(vec![name.to_string()], vec![samples], sampling_rate)
    }

    pub fn sampling_rate(&self) -> f64 {
        self.sampling_rate
    }

    pub fn channels(&self) -> &[String] {
        &self.channels
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    /// Samples per channel.
    pub fn len(&self) -> usize {
        self.samples[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn duration_s(&self) -> f64 {
        self.len() as f64 / self.sampling_rate
    }

    pub fn channel(&self, index: usize) -> &[f64] {
        &self.samples[index]
    }

    pub fn channel_index(&self, name: &str) -> Option<usize> {
        self.channels.iter().position(|c| c == name)
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    /// Same metadata, new sample data. Lengths must match the channel count.
    pub(crate) fn with_samples(&self, samples: Vec<Vec<f64>>) -> Self {
        debug_assert_eq!(samples.len(), self.channels.len());
        Self {
            samples,
            sampling_rate: self.sampling_rate,
            channels: self.channels.clone(),
            mvc_level: self.mvc_level,
            subject_id: self.subject_id.clone(),
        }
    }
}
