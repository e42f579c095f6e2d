//! Signal representation, preprocessing filters and sliding-window segmentation.

mod filter;
pub mod io;
mod label;
mod record;
mod window;

pub use filter::{design_filters, Biquad, FilterChain, FilterSpec, PhaseMode};
pub use label::{FatigueLabel, FatigueState};
pub use record::{MvcLevel, SignalRecord, DEFAULT_SAMPLING_RATE};
pub use window::{segment_windows, WindowPlan, WindowView};
