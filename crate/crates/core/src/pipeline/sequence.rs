//! Overlapping window sequences for the sequence model.
//!
//! CSV: `seq_index,window_offset,inc:<name>...,dec:<name>...,label`, one row
//! per (sequence, offset). Sequences advance by one window and carry the
//! class index of their final window's label.

use std::fmt::Write as _;
use std::str::FromStr;

use log::warn;

use crate::error::{Error, Result};
use crate::features::{FeatureId, FeatureMatrix};
use crate::signal::FatigueLabel;
use crate::trend::FeatureGroups;

/// Which channels contribute sequences.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ChannelSelection {
    /// The first channel of the feature map.
    #[default]
    First,
    Named(String),
    /// Every channel in turn, sequence indices continuing across channels.
    All,
}

impl FromStr for ChannelSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "" => return Err(Error::Config("empty channel selection".into())),
            "first" => Self::First,
            "all" => Self::All,
            name => Self::Named(name.to_string()),
        })
    }
}

impl ChannelSelection {
    fn resolve(&self, matrix: &FeatureMatrix) -> Result<Vec<usize>> {
        match self {
            Self::First if matrix.channels.is_empty() => Err(Error::Data("feature map has no channels".into())),
            Self::First => Ok(vec![0]),
            Self::All => Ok((0..matrix.channels.len()).collect()),
            Self::Named(name) => matrix
                .channels
                .iter()
                .position(|c| c == name)
                .map(|c| vec![c])
                .ok_or_else(|| Error::Config(format!("channel {name:?} not in feature map"))),
        }
    }
}

/// One T-window sequence split into the two feature groups.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    pub channel: usize,
    pub start_window: usize,
    /// `increasing[o]` holds the increasing-group values of window `start + o`.
    pub increasing: Vec<Vec<f64>>,
    pub decreasing: Vec<Vec<f64>>,
    pub label: FatigueLabel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceDataset {
    pub seq_len: usize,
    pub increasing: Vec<FeatureId>,
    pub decreasing: Vec<FeatureId>,
    pub sequences: Vec<Sequence>,
}

pub fn build_sequences(
    matrix: &FeatureMatrix,
    labels: &[FatigueLabel],
    groups: &FeatureGroups,
    channels: &ChannelSelection,
    seq_len: usize,
) -> Result<SequenceDataset> {
    if seq_len == 0 {
        return Err(Error::Config("sequence length must be at least 1".into()));
    }
    if labels.len() != matrix.window_count {
        return Err(Error::Data(format!(
            "{} labels for {} windows; labels must align with window_index",
            labels.len(),
            matrix.window_count
        )));
    }
    let mut dataset = SequenceDataset {
        seq_len,
        increasing: groups.increasing.clone(),
        decreasing: groups.decreasing.clone(),
        sequences: Vec::new(),
    };
    if matrix.window_count < seq_len {
        warn!(
            "{} windows is fewer than the sequence length {seq_len}; no sequences exported",
            matrix.window_count
        );
        return Ok(dataset);
    }
    let pick = |ids: &[FeatureId], w: usize, c: usize| -> Vec<f64> {
        let row = matrix.row(w, c);
        ids.iter().map(|&id| row.get(id)).collect()
    };
    for channel in channels.resolve(matrix)? {
        for start in 0..=matrix.window_count - seq_len {
            let windows = start..start + seq_len;
            dataset.sequences.push(Sequence {
                channel,
                start_window: start,
                increasing: windows.clone().map(|w| pick(&groups.increasing, w, channel)).collect(),
                decreasing: windows.map(|w| pick(&groups.decreasing, w, channel)).collect(),
                label: labels[start + seq_len - 1],
            });
        }
    }
    Ok(dataset)
}

pub fn render_sequences(dataset: &SequenceDataset) -> String {
    let mut s = String::from("seq_index,window_offset");
    for id in &dataset.increasing {
        let _ = write!(s, ",inc:{id}");
    }
    for id in &dataset.decreasing {
        let _ = write!(s, ",dec:{id}");
    }
    s.push_str(",label\n");
    for (i, seq) in dataset.sequences.iter().enumerate() {
        for offset in 0..dataset.seq_len {
            let _ = write!(s, "{i},{offset}");
            for v in seq.increasing[offset].iter().chain(&seq.decreasing[offset]) {
                let _ = write!(s, ",{v:.16e}");
            }
            let _ = writeln!(s, ",{}", seq.label.state().class_index());
        }
    }
    s
}
