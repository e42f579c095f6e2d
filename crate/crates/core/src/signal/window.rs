use crate::error::{Error, Result};

use super::SignalRecord;

/// Sliding-window layout expressed in seconds and resolved to samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowPlan {
    pub window_len_s: f64,
    pub stride_s: f64,
    window_len: usize,
    stride: usize,
}

impl WindowPlan {
    pub const DEFAULT_WINDOW_S: f64 = 0.5;
    pub const DEFAULT_STRIDE_S: f64 = 0.25;

    pub fn new(window_len_s: f64, stride_s: f64, sampling_rate: f64) -> Result<Self> {
        if !(window_len_s > 0.0 && stride_s > 0.0 && sampling_rate > 0.0) {
            return Err(Error::Config(format!(
                "window ({window_len_s} s), stride ({stride_s} s) and rate must be positive"
            )));
        }
        let window_len = (window_len_s * sampling_rate).round() as usize;
        let stride = (stride_s * sampling_rate).round() as usize;
        let mut plan = Self::from_samples(window_len, stride)?;
        plan.window_len_s = window_len_s;
        plan.stride_s = stride_s;
        Ok(plan)
    }

    /// 0.5 s windows with a 0.25 s stride.
    pub fn default_for(sampling_rate: f64) -> Result<Self> {
        Self::new(Self::DEFAULT_WINDOW_S, Self::DEFAULT_STRIDE_S, sampling_rate)
    }

    /// Plan given directly in samples. Second-valued fields are left as
    /// sample counts (unit rate).
    pub fn from_samples(window_len: usize, stride: usize) -> Result<Self> {
        if window_len < 2 {
            return Err(Error::Config(format!(
                "window must span at least 2 samples, got {window_len}"
            )));
        }
        if stride < 1 || stride > window_len {
            return Err(Error::Config(format!(
                "stride must be in 1..={window_len} samples, got {stride}"
            )));
        }
        Ok(Self {
            window_len_s: window_len as f64,
            stride_s: stride as f64,
            window_len,
            stride,
        })
    }

    pub fn window_len(&self) -> usize {
        self.window_len
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    /// Number of complete windows in a signal of `n` samples.
    pub fn window_count(&self, n: usize) -> usize {
        if n < self.window_len {
            0
        } else {
            (n - self.window_len) / self.stride + 1
        }
    }

    pub fn start_of(&self, window_index: usize) -> usize {
        window_index * self.stride
    }
}

/// Borrowed window over one channel of a parent signal.
#[derive(Debug, Clone, Copy)]
pub struct WindowView<'a> {
    pub window_index: usize,
    pub channel_index: usize,
    pub start_sample: usize,
    pub sampling_rate: f64,
    samples: &'a [f64],
}

impl<'a> WindowView<'a> {
    pub fn new(
        parent: &'a [f64],
        window_index: usize,
        channel_index: usize,
        start_sample: usize,
        length: usize,
        sampling_rate: f64,
    ) -> Result<Self> {
        let end = start_sample
            .checked_add(length)
            .filter(|&end| end <= parent.len())
            .ok_or_else(|| {
                Error::Usage(format!(
                    "window {start_sample}+{length} exceeds signal length {}",
                    parent.len()
                ))
            })?;
        Ok(Self {
            window_index,
            channel_index,
            start_sample,
            sampling_rate,
            samples: &parent[start_sample..end],
        })
    }

    /// View over a standalone slice (window 0, channel 0).
    pub fn of_slice(samples: &'a [f64], sampling_rate: f64) -> Self {
        Self {
            window_index: 0,
            channel_index: 0,
            start_sample: 0,
            sampling_rate,
            samples,
        }
    }

    pub fn samples(&self) -> &'a [f64] {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Windows in window-major order: all channels of window 0, then window 1, …
pub fn segment_windows<'a>(signal: &'a SignalRecord, plan: &WindowPlan) -> Vec<WindowView<'a>> {
    let n = signal.len();
    let count = plan.window_count(n);
    if count == 0 {
        log::warn!(
            "signal of {n} samples is shorter than one {}-sample window; no windows produced",
            plan.window_len()
        );
        return Vec::new();
    }
    let mut views = Vec::with_capacity(count * signal.channel_count());
    for w in 0..count {
        let start = plan.start_of(w);
        for ch in 0..signal.channel_count() {
            let data = signal.channel(ch);
            views.push(WindowView {
                window_index: w,
                channel_index: ch,
                start_sample: start,
                sampling_rate: signal.sampling_rate(),
                samples: &data[start..start + plan.window_len()],
            });
        }
    }
    views
}
