use std::ops::Index;

use super::id::{FeatureId, FEATURE_COUNT};

/// A subset of descriptor values produced by one feature family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialFeatures {
    values: [Option<f64>; FEATURE_COUNT],
    degenerate: u64,
}

impl Default for PartialFeatures {
    fn default() -> Self {
        Self {
            values: [None; FEATURE_COUNT],
            degenerate: 0,
        }
    }
}

impl PartialFeatures {
    /// Records a value. Non-finite values are stored as 0 and flagged.
    pub fn set(&mut self, id: FeatureId, value: f64) {
        if value.is_finite() {
            self.values[id.index()] = Some(value);
        } else {
            self.flag(id);
        }
    }

    /// Marks `id` degenerate and stores 0.
    pub fn flag(&mut self, id: FeatureId) {
        self.values[id.index()] = Some(0.0);
        self.degenerate |= id.bit();
    }

    pub fn set_or_flag(&mut self, id: FeatureId, value: Option<f64>) {
        match value {
            Some(v) => self.set(id, v),
            None => self.flag(id),
        }
    }

    pub fn get(&self, id: FeatureId) -> Option<f64> {
        self.values[id.index()]
    }

    pub fn is_degenerate(&self, id: FeatureId) -> bool {
        self.degenerate & id.bit() != 0
    }

    pub fn ids(&self) -> impl Iterator<Item = FeatureId> + '_ {
        FeatureId::ALL
            .into_iter()
            .filter(|f| self.values[f.index()].is_some())
    }
}

/// Every canonical descriptor for one window of one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub window_index: usize,
    pub channel: usize,
    pub start_sample: usize,
    values: [f64; FEATURE_COUNT],
    /// Bit `FeatureId::index()` set when that value is degenerate.
    quality: u64,
}

impl FeatureVector {
    /// Combines family outputs; every canonical id must be present exactly once.
    pub fn from_parts(
        window_index: usize,
        channel: usize,
        start_sample: usize,
        parts: &[PartialFeatures],
    ) -> Self {
        let mut values = [0.0; FEATURE_COUNT];
        let mut seen = 0u64;
        let mut quality = 0u64;
        for part in parts {
            for id in part.ids() {
                assert!(seen & id.bit() == 0, "{id} produced twice");
                seen |= id.bit();
                values[id.index()] = part.values[id.index()].unwrap_or(0.0);
            }
            quality |= part.degenerate;
        }
        assert_eq!(
            seen.count_ones() as usize,
            FEATURE_COUNT,
            "missing features in window {window_index}"
        );
        Self {
            window_index,
            channel,
            start_sample,
            values,
            quality,
        }
    }

    pub fn from_raw(
        window_index: usize,
        channel: usize,
        start_sample: usize,
        values: [f64; FEATURE_COUNT],
        quality: u64,
    ) -> Self {
        Self {
            window_index,
            channel,
            start_sample,
            values,
            quality,
        }
    }

    pub fn get(&self, id: FeatureId) -> f64 {
        self.values[id.index()]
    }

    pub fn values(&self) -> &[f64; FEATURE_COUNT] {
        &self.values
    }

    pub fn quality_bitmask(&self) -> u64 {
        self.quality
    }

    pub fn is_degenerate(&self, id: FeatureId) -> bool {
        self.quality & id.bit() != 0
    }
}

impl Index<FeatureId> for FeatureVector {
    type Output = f64;

    fn index(&self, id: FeatureId) -> &f64 {
        &self.values[id.index()]
    }
}

/// Descriptor vectors for every (window, channel) pair, window-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub channels: Vec<String>,
    pub window_count: usize,
    pub rows: Vec<FeatureVector>,
}

impl FeatureMatrix {
    pub fn empty(channels: Vec<String>) -> Self {
        Self {
            channels,
            window_count: 0,
            rows: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, window: usize, channel: usize) -> &FeatureVector {
        &self.rows[window * self.channels.len() + channel]
    }

    /// Time series of one descriptor on one channel, in window order.
    pub fn series(&self, id: FeatureId, channel: usize) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.channel == channel)
            .map(|r| r.get(id))
            .collect()
    }

    /// Count of degenerate values per feature.
    pub fn degenerate_counts(&self) -> [usize; FEATURE_COUNT] {
        let mut counts = [0; FEATURE_COUNT];
        for row in &self.rows {
            for id in FeatureId::ALL {
                if row.is_degenerate(id) {
                    counts[id.index()] += 1;
                }
            }
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_values_are_flagged() {
        let mut p = PartialFeatures::default();
        p.set(FeatureId::Rms, f64::NAN);
        p.set(FeatureId::Mav, f64::INFINITY);
        p.set(FeatureId::Iemg, 3.0);
        assert_eq!(p.get(FeatureId::Rms), Some(0.0));
        assert!(p.is_degenerate(FeatureId::Rms));
        assert!(p.is_degenerate(FeatureId::Mav));
        assert!(!p.is_degenerate(FeatureId::Iemg));
    }

    #[test]
    #[should_panic(expected = "missing features")]
    fn incomplete_vector_panics() {
        let mut p = PartialFeatures::default();
        p.set(FeatureId::Rms, 1.0);
        FeatureVector::from_parts(0, 0, 0, &[p]);
    }
}
