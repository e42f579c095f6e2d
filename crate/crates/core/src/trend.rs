//! Trend significance analysis: which descriptors rise or fall with fatigue.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::features::{FeatureId, FeatureMatrix, TableGroup};

/// Significance level for a trend to count.
pub const ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrendClass {
    Increasing,
    Decreasing,
    Nonsignificant,
}

impl TrendClass {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Increasing => "increasing",
            Self::Decreasing => "decreasing",
            Self::Nonsignificant => "nonsignificant",
        }
    }
}

impl fmt::Display for TrendClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Least-squares line through a series plus its significance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearTrend {
    pub pearson_r: f64,
    pub slope: f64,
    pub intercept: f64,
    pub t_stat: f64,
    /// Two-sided p-value of the slope (Student t, n − 2 dof).
    pub p_value: f64,
    pub class: TrendClass,
    pub n: usize,
}

/// Trend of one descriptor on one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendReport {
    pub feature: FeatureId,
    pub channel: usize,
    pub trend: LinearTrend,
}

struct Moments {
    n: f64,
    mx: f64,
    my: f64,
    sxx: f64,
    syy: f64,
    sxy: f64,
}

fn moments(x: &[f64], y: &[f64]) -> Moments {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    Moments { n, mx, my, sxx, syy, sxy }
}

fn check_lengths(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Usage(format!("series lengths differ: {} vs {}", x.len(), y.len())));
    }
    if x.len() < 3 {
        return Err(Error::Usage(format!("need at least 3 points, got {}", x.len())));
    }
    Ok(())
}

/// Pearson product-moment correlation.
pub fn pearson_correlation(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y)?;
    let m = moments(x, y);
    if !(m.sxx > 0.0 && m.syy > 0.0) {
        return Err(Error::Degenerate("zero variance series".into()));
    }
    Ok((m.sxy / (m.sxx.sqrt() * m.syy.sqrt())).clamp(-1.0, 1.0))
}

/// Two-sided tail probability of a Student t statistic.
pub fn two_sided_p(t: f64, dof: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    let dist = StudentsT::new(0.0, 1.0, dof).expect("positive degrees of freedom");
    (2.0 * dist.sf(t.abs())).clamp(0.0, 1.0)
}

/// OLS fit of `y` against `x` with slope significance at `alpha`.
pub fn fit_trend_against(x: &[f64], y: &[f64], alpha: f64) -> Result<LinearTrend> {
    check_lengths(x, y)?;
    let m = moments(x, y);
    if !(m.sxx > 0.0) {
        return Err(Error::Degenerate("regressor has zero variance".into()));
    }
    let n = x.len();
    if !(m.syy > 0.0) {
        return Ok(LinearTrend {
            pearson_r: 0.0,
            slope: 0.0,
            intercept: m.my,
            t_stat: 0.0,
            p_value: 1.0,
            class: TrendClass::Nonsignificant,
            n,
        });
    }
    let slope = m.sxy / m.sxx;
    let intercept = m.my - slope * m.mx;
    let dof = m.n - 2.0;
    let rss = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum::<f64>();
    let se = (rss / dof / m.sxx).sqrt();
    let t_stat = if se > 0.0 {
        slope / se
    } else if slope == 0.0 {
        0.0
    } else {
        slope.signum() * f64::INFINITY
    };
    let p_value = two_sided_p(t_stat, dof);
    let class = if p_value < alpha && slope > 0.0 {
        TrendClass::Increasing
    } else if p_value < alpha && slope < 0.0 {
        TrendClass::Decreasing
    } else {
        TrendClass::Nonsignificant
    };
    Ok(LinearTrend {
        pearson_r: (m.sxy / (m.sxx.sqrt() * m.syy.sqrt())).clamp(-1.0, 1.0),
        slope,
        intercept,
        t_stat,
        p_value,
        class,
        n,
    })
}

/// Trend of a series against its index (window order) at [`ALPHA`].
pub fn fit_trend(values: &[f64]) -> Result<LinearTrend> {
    let index: Vec<f64> = (0..values.len()).map(|i| i as f64).collect();
    fit_trend_against(&index, values, ALPHA)
}

/// How descriptors are split into increasing and decreasing groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GroupingMode {
    /// From trend analysis of the data at hand.
    #[default]
    Empirical,
    /// The fixed reference grouping.
    Table,
}

impl FromStr for GroupingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "empirical" => Ok(Self::Empirical),
            "table" | "tables2" => Ok(Self::Table),
            other => Err(Error::Config(format!("unknown grouping mode {other:?}"))),
        }
    }
}

/// Partition of the 34 grouped descriptors, each set in canonical order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureGroups {
    pub increasing: Vec<FeatureId>,
    pub decreasing: Vec<FeatureId>,
    pub nonsignificant: Vec<FeatureId>,
    /// Per-channel fits behind an empirical grouping (empty for the table).
    pub reports: Vec<TrendReport>,
}

impl FeatureGroups {
    /// The reference grouping (19 increasing, 15 decreasing).
    pub fn table() -> Self {
        let pick = |g| FeatureId::grouped().iter().copied().filter(|f| f.table_group() == g).collect();
        Self {
            increasing: pick(TableGroup::Increasing),
            decreasing: pick(TableGroup::Decreasing),
            nonsignificant: Vec::new(),
            reports: Vec::new(),
        }
    }

    pub fn class_of(&self, id: FeatureId) -> Option<TrendClass> {
        if self.increasing.contains(&id) {
            Some(TrendClass::Increasing)
        } else if self.decreasing.contains(&id) {
            Some(TrendClass::Decreasing)
        } else if self.nonsignificant.contains(&id) {
            Some(TrendClass::Nonsignificant)
        } else {
            None
        }
    }
}

/// Fits every grouped descriptor on every channel and assigns each feature
/// the class a strict majority of channels agree on (ties are
/// non-significant).
///
/// `regressor` replaces the window index, e.g. with synchronised RPE.
pub fn group_features(matrix: &FeatureMatrix, regressor: Option<&[f64]>, alpha: f64) -> Result<FeatureGroups> {
    let windows = matrix.window_count;
    if windows < 3 {
        return Err(Error::Data(format!("trend analysis needs at least 3 windows, got {windows}")));
    }
    let index: Vec<f64> = (0..windows).map(|i| i as f64).collect();
    let x = regressor.unwrap_or(&index);
    let channels = matrix.channels.len();
    let mut groups = FeatureGroups::default();
    for &feature in FeatureId::grouped() {
        let mut votes = [0usize; 3];
        for channel in 0..channels {
            let series = matrix.series(feature, channel);
            let trend = fit_trend_against(x, &series, alpha)?;
            votes[trend.class as usize] += 1;
            groups.reports.push(TrendReport { feature, channel, trend });
        }
        let winner = if votes[0] * 2 > channels {
            TrendClass::Increasing
        } else if votes[1] * 2 > channels {
            TrendClass::Decreasing
        } else {
            TrendClass::Nonsignificant
        };
        match winner {
            TrendClass::Increasing => groups.increasing.push(feature),
            TrendClass::Decreasing => groups.decreasing.push(feature),
            TrendClass::Nonsignificant => groups.nonsignificant.push(feature),
        }
    }
    Ok(groups)
}

/// `feature,channel,r,slope,intercept,p_value,class`
pub fn render_trend_csv(reports: &[TrendReport], channels: &[String]) -> String {
    let mut s = String::from("feature,channel,r,slope,intercept,p_value,class\n");
    for r in reports {
        let t = &r.trend;
        let _ = writeln!(
            s,
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            r.feature, channels[r.channel], t.pearson_r, t.slope, t.intercept, t.p_value, t.class
        );
    }
    s
}

/// Channel-averaged trajectory of every grouped descriptor with its fitted
/// line: `feature,window_index,mean_value,fitted`.
pub fn render_plot_csv(matrix: &FeatureMatrix) -> Result<String> {
    let mut s = String::from("feature,window_index,mean_value,fitted\n");
    let channels = matrix.channels.len() as f64;
    for &feature in FeatureId::grouped() {
        let mut mean = vec![0.0; matrix.window_count];
        for row in &matrix.rows {
            mean[row.window_index] += row.get(feature) / channels;
        }
        let fit = fit_trend(&mean)?;
        for (i, v) in mean.iter().enumerate() {
            let fitted = fit.intercept + fit.slope * i as f64;
            let _ = writeln!(s, "{feature},{i},{v:.16e},{fitted:.16e}");
        }
    }
    Ok(s)
}
