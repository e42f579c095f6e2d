use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Three-level fatigue state used as the classification target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FatigueState {
    Relaxed,
    Exerted,
    Fatigued,
}

impl FatigueState {
    pub const ALL: [FatigueState; 3] = [Self::Relaxed, Self::Exerted, Self::Fatigued];

    /// Class index used by the sequence dataset (0, 1, 2).
    pub fn class_index(self) -> u8 {
        self as u8
    }

    pub fn from_class_index(i: u8) -> Option<Self> {
        Self::ALL.get(i as usize).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Relaxed => "relaxed",
            Self::Exerted => "exerted",
            Self::Fatigued => "fatigued",
        }
    }
}

impl fmt::Display for FatigueState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FatigueState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "relaxed" | "0" => Ok(Self::Relaxed),
            "exerted" | "1" => Ok(Self::Exerted),
            "fatigued" | "2" => Ok(Self::Fatigued),
            other => Err(Error::Data(format!("unknown fatigue state {other:?}"))),
        }
    }
}

/// Borg RPE rating together with the state it maps to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FatigueLabel {
    rpe: u8,
    state: FatigueState,
}

impl FatigueLabel {
    pub const RPE_MIN: u8 = 6;
    pub const RPE_MAX: u8 = 20;

    /// Maps 6–10 to relaxed, 11–15 to exerted and 16–20 to fatigued.
    pub fn from_rpe(rpe: u8) -> Result<Self> {
        let state = match rpe {
            6..=10 => FatigueState::Relaxed,
            11..=15 => FatigueState::Exerted,
            16..=20 => FatigueState::Fatigued,
            _ => return Err(Error::Data(format!("RPE {rpe} outside 6..=20"))),
        };
        Ok(Self { rpe, state })
    }

    pub fn rpe(self) -> u8 {
        self.rpe
    }

    pub fn state(self) -> FatigueState {
        self.state
    }
}
