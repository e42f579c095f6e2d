use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Signal-processing family a descriptor belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Time,
    Frequency,
    TimeFrequency,
    Wavelet,
    Nonlinear,
    Auxiliary,
}

/// Reference trend group of a descriptor under fatigue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableGroup {
    Increasing,
    Decreasing,
    Auxiliary,
}

macro_rules! feature_ids {
    ($($variant:ident => $name:literal, $domain:ident, $group:ident;)*) => {
        /// Canonical descriptor identifiers. Declaration order is the
        /// normative column order of `featmap_v1`.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        #[repr(u8)]
        pub enum FeatureId {
            $($variant,)*
        }

        impl FeatureId {
            pub const ALL: [FeatureId; FEATURE_COUNT] = [$(FeatureId::$variant,)*];

            pub const fn name(self) -> &'static str {
                match self {
                    $(FeatureId::$variant => $name,)*
                }
            }

            pub const fn domain(self) -> Domain {
                match self {
                    $(FeatureId::$variant => Domain::$domain,)*
                }
            }

            pub const fn table_group(self) -> TableGroup {
                match self {
                    $(FeatureId::$variant => TableGroup::$group,)*
                }
            }
        }
    };
}

/// Number of canonical identifiers, auxiliaries included.
pub const FEATURE_COUNT: usize = 36;
/// Number of identifiers that take part in trend grouping.
pub const GROUPED_COUNT: usize = 34;

feature_ids! {
    Aemg => "AEMG", Time, Increasing;
    Iemg => "iEMG", Time, Increasing;
    Rms => "RMS", Time, Increasing;
    Mav => "MAV", Time, Increasing;
    Mcv => "MCV", Time, Increasing;
    Dasdv => "DASDV", Time, Increasing;
    Zc => "ZC", Time, Decreasing;
    Ssc => "SSC", Time, Decreasing;
    Wa => "WA", Time, Decreasing;
    Smr => "SMR", Frequency, Increasing;
    Fsm2 => "FSM2", Frequency, Increasing;
    Tp => "TP", Frequency, Increasing;
    Mpf => "MPF", Frequency, Decreasing;
    Mf => "MF", Frequency, Decreasing;
    Mdf => "MDF", Frequency, Decreasing;
    Impf => "IMPF", Frequency, Decreasing;
    Imf => "IMF", Frequency, Decreasing;
    Bse => "BSE", Frequency, Decreasing;
    Erhl => "ERHL", TimeFrequency, Increasing;
    Imnf => "IMNF", TimeFrequency, Increasing;
    Imfb => "IMFB", TimeFrequency, Increasing;
    Wirm1551 => "WIRM1551", Wavelet, Increasing;
    Wirm1522 => "WIRM1522", Wavelet, Increasing;
    Wire51 => "WIRE51", Wavelet, Increasing;
    Wirw51 => "WIRW51", Wavelet, Increasing;
    Wee => "WEE", Wavelet, Increasing;
    Det => "DET", Nonlinear, Increasing;
    Acc => "ACC", Nonlinear, Increasing;
    Ae => "AE", Nonlinear, Decreasing;
    Se => "SE", Nonlinear, Decreasing;
    Lzc => "LZC", Nonlinear, Decreasing;
    Fd => "FD", Nonlinear, Decreasing;
    Be => "BE", Nonlinear, Decreasing;
    Went => "WENT", Nonlinear, Decreasing;
    Pkf => "PKF", Auxiliary, Auxiliary;
    Dfa => "DFA", Auxiliary, Auxiliary;
}

impl FeatureId {
    pub const fn index(self) -> usize {
        self as usize
    }

    /// The 34 identifiers that take part in trend grouping.
    pub fn grouped() -> &'static [FeatureId] {
        &Self::ALL[..GROUPED_COUNT]
    }

    pub fn auxiliary() -> &'static [FeatureId] {
        &Self::ALL[GROUPED_COUNT..]
    }

    /// Integer-valued counts (compared exactly by oracles).
    pub fn is_count(self) -> bool {
        matches!(self, Self::Zc | Self::Ssc | Self::Wa)
    }

    pub fn of_domain(domain: Domain) -> impl Iterator<Item = FeatureId> {
        Self::ALL.into_iter().filter(move |f| f.domain() == domain)
    }

    pub fn bit(self) -> u64 {
        1u64 << self.index()
    }
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FeatureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Data(format!("unknown feature {s:?}")))
    }
}
