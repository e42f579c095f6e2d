use crate::error::{Error, Result};

/// Parameters of every descriptor computed by the engine.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    /// Analysis band for spectral descriptors, Hz.
    pub band_low: f64,
    pub band_high: f64,
    /// Minimum step magnitude for a zero crossing to count.
    pub zc_threshold: f64,
    /// Minimum slope product for a slope sign change to count.
    pub ssc_threshold: f64,
    /// Willison amplitude threshold as a fraction of the window's peak |x|.
    pub wa_threshold_fraction: f64,
    /// Moving-average span used for AEMG, seconds.
    pub aemg_smoothing_s: f64,
    pub stft_frame_len: usize,
    /// Fraction of a frame shared with the next one, in [0, 1).
    pub stft_overlap: f64,
    pub wavelet_levels: usize,
    /// Low and high bands of the ERHL energy ratio, Hz.
    pub erhl_low_band: (f64, f64),
    pub erhl_high_band: (f64, f64),
    pub rqa_embedding: usize,
    pub rqa_delay: usize,
    /// Recurrence radius as a fraction of the largest phase-space distance.
    pub rqa_threshold_fraction: f64,
    pub rqa_min_line: usize,
    pub entropy_m: usize,
    /// Tolerance as a fraction of the window standard deviation.
    pub entropy_r_fraction: f64,
    pub higuchi_k_max: usize,
    pub permutation_order: usize,
    pub permutation_delay: usize,
    pub dfa_scales: Vec<usize>,
    /// Worker threads for `extract_features`; 0 uses every available core.
    pub thread_count: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            band_low: 20.0,
            band_high: 450.0,
            zc_threshold: 0.0,
            ssc_threshold: 0.0,
            wa_threshold_fraction: 0.05,
            aemg_smoothing_s: 0.05,
            stft_frame_len: 128,
            stft_overlap: 0.5,
            wavelet_levels: 5,
            erhl_low_band: (20.0, 80.0),
            erhl_high_band: (150.0, 450.0),
            rqa_embedding: 3,
            rqa_delay: 2,
            rqa_threshold_fraction: 0.10,
            rqa_min_line: 2,
            entropy_m: 2,
            entropy_r_fraction: 0.2,
            higuchi_k_max: 8,
            permutation_order: 3,
            permutation_delay: 1,
            dfa_scales: vec![4, 8, 16, 32, 64],
            thread_count: 0,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.band_low > 0.0 && self.band_low < self.band_high) {
            return bad(format!("band {}..{} Hz is empty", self.band_low, self.band_high));
        }
        let thresholds = [
            self.zc_threshold,
            self.ssc_threshold,
            self.wa_threshold_fraction,
            self.rqa_threshold_fraction,
            self.entropy_r_fraction,
        ];
        if thresholds.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return bad("thresholds must be finite and non-negative".into());
        }
        if self.stft_frame_len < 4 {
            return bad(format!("stft_frame_len {} too short", self.stft_frame_len));
        }
        if !(0.0..1.0).contains(&self.stft_overlap) {
            return bad(format!("stft_overlap {} outside [0, 1)", self.stft_overlap));
        }
        if self.wavelet_levels < 2 {
            return bad("wavelet ratios need at least 2 levels".into());
        }
        if self.rqa_embedding == 0 || self.rqa_delay == 0 || self.rqa_min_line < 1 {
            return bad("RQA embedding, delay and minimum line must be positive".into());
        }
        if self.entropy_m == 0 || self.higuchi_k_max < 2 {
            return bad("entropy m must be positive and Higuchi k_max at least 2".into());
        }
        if !(2..=8).contains(&self.permutation_order) || self.permutation_delay == 0 {
            return bad("permutation order must be 2..=8 with positive delay".into());
        }
        if self.dfa_scales.len() < 2 || self.dfa_scales.iter().any(|&s| s < 3) {
            return bad("DFA needs at least two scales of 3+ samples".into());
        }
        Ok(())
    }

    /// Hop between STFT frames for a given frame length.
    pub fn stft_hop(&self, frame_len: usize) -> usize {
        let overlap = (frame_len as f64 * self.stft_overlap).round() as usize;
        (frame_len - overlap.min(frame_len - 1)).max(1)
    }
}
