//! sEMG muscle-fatigue analysis: preprocessing, a parallel windowed
//! descriptor engine, trend-based feature grouping and a synthetic fatigue
//! signal generator.

// `!(x > 0.0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmark;
pub mod error;
pub mod features;
pub mod pipeline;
pub mod signal;
pub mod synth;
pub mod trend;

pub use error::{Error, Result};
pub use features::{extract_features, Engine, EngineConfig, FeatureId, FeatureMatrix, FeatureVector};
pub use signal::{design_filters, segment_windows, FilterSpec, SignalRecord, WindowPlan, WindowView};
pub use synth::{generate, SynthSpec};
pub use trend::{fit_trend, group_features, pearson_correlation, FeatureGroups, GroupingMode, TrendClass};
