//! Signal CSV and sidecar metadata files.
//!
//! Signal CSV: header `time_s,<ch1>,<ch2>,...` (the time column is optional),
//! one row per sample. Sidecar: one `key,value` row per line with keys
//! `sampling_rate`, `mvc_level`, `subject_id`, plus any number of
//! `rpe,<t_seconds>,<value>` annotations. `#` starts a comment line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::{MvcLevel, SignalRecord, DEFAULT_SAMPLING_RATE};

const TIME_COLUMN: &str = "time_s";

/// Parsed contents of a sidecar metadata file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sidecar {
    pub sampling_rate: Option<f64>,
    pub mvc_level: Option<MvcLevel>,
    pub subject_id: Option<String>,
    /// `(time in seconds, RPE)` pairs, sorted by time.
    pub rpe: Vec<(f64, u8)>,
}

impl Sidecar {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        };
        let mut out = Sidecar::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            match fields.as_slice() {
                ["sampling_rate", v] => {
                    let fs: f64 = v
                        .parse()
                        .map_err(|_| err(i + 1, format!("bad sampling_rate {v:?}")))?;
                    out.sampling_rate = Some(fs);
                }
                ["mvc_level", v] => {
                    let pct: u8 = v
                        .parse()
                        .map_err(|_| err(i + 1, format!("bad mvc_level {v:?}")))?;
                    out.mvc_level =
                        Some(MvcLevel::new(pct).map_err(|e| err(i + 1, e.to_string()))?);
                }
                ["subject_id", v] => out.subject_id = Some(v.to_string()),
                ["rpe", t, v] => {
                    let t: f64 = t
                        .parse()
                        .map_err(|_| err(i + 1, format!("bad rpe time {t:?}")))?;
                    let v: u8 = v
                        .parse()
                        .ok()
                        .filter(|v| (6..=20).contains(v))
                        .ok_or_else(|| err(i + 1, format!("bad rpe value {v:?}")))?;
                    out.rpe.push((t, v));
                }
                _ => return Err(err(i + 1, format!("unrecognised sidecar row {line:?}"))),
            }
        }
        out.rpe.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(out)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?, path)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        if let Some(fs) = self.sampling_rate {
            let _ = writeln!(s, "sampling_rate,{fs}");
        }
        if let Some(m) = self.mvc_level {
            let _ = writeln!(s, "mvc_level,{}", m.percent());
        }
        if let Some(id) = &self.subject_id {
            let _ = writeln!(s, "subject_id,{id}");
        }
        for (t, v) in &self.rpe {
            let _ = writeln!(s, "rpe,{t},{v}");
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render())?;
        Ok(())
    }

    /// Most recent RPE annotation at or before `t_seconds` (the first one
    /// if `t_seconds` precedes every annotation).
    pub fn rpe_at(&self, t_seconds: f64) -> Option<u8> {
        let first = self.rpe.first()?;
        Some(
            self.rpe
                .iter()
                .take_while(|(t, _)| *t <= t_seconds)
                .last()
                .unwrap_or(first)
                .1,
        )
    }
}

/// Conventional sidecar location: `<signal>.meta` next to the CSV.
pub fn sidecar_path(signal_csv: &Path) -> PathBuf {
    let mut name = signal_csv.as_os_str().to_owned();
    name.push(".meta");
    PathBuf::from(name)
}

/// Parses a signal CSV. The sampling rate comes from the sidecar when given,
/// else from the time column, else falls back to 2000 Hz.
pub fn parse_signal_csv(text: &str, path: &Path, sidecar: Option<&Sidecar>) -> Result<SignalRecord> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let Some((_, header)) = lines.next() else {
        return Err(Error::Data(format!("{}: no samples", path.display())));
    };
    let mut names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let has_time = names.first().is_some_and(|n| n == TIME_COLUMN);
    if has_time {
        names.remove(0);
    }
    if names.is_empty() || names.iter().any(String::is_empty) {
        return Err(err(1, "header must name at least one channel".into()));
    }
    let width = names.len() + usize::from(has_time);
    let mut channels = vec![Vec::new(); names.len()];
    let mut times = Vec::new();
    for (i, line) in lines {
        let mut count = 0;
        for (j, field) in line.split(',').enumerate() {
            count += 1;
            if j >= width {
                continue;
            }
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| err(i + 1, format!("cannot parse {:?} as a number", field.trim())))?;
            if !v.is_finite() {
                return Err(err(i + 1, format!("non-finite value {v}")));
            }
            match (has_time, j) {
                (true, 0) => times.push(v),
                (true, j) => channels[j - 1].push(v),
                (false, j) => channels[j].push(v),
            }
        }
        if count != width {
            return Err(err(i + 1, format!("expected {width} fields, found {count}")));
        }
    }
    if channels[0].is_empty() {
        return Err(Error::Data(format!("{}: no samples", path.display())));
    }
    let fs = match (sidecar.and_then(|s| s.sampling_rate), times.len()) {
        (Some(fs), _) => fs,
        (None, n) if n >= 2 => {
            let dt = (times[n - 1] - times[0]) / (n - 1) as f64;
            if !(dt > 0.0) {
                return Err(Error::Data(format!("{}: time column is not increasing", path.display())));
            }
            1.0 / dt
        }
        _ => {
            log::warn!(
                "{}: no sampling rate given, assuming {DEFAULT_SAMPLING_RATE} Hz",
                path.display()
            );
            DEFAULT_SAMPLING_RATE
        }
    };
    let mut record = SignalRecord::new(names, channels, fs)?;
    if let Some(s) = sidecar {
        record.mvc_level = s.mvc_level;
        record.subject_id = s.subject_id.clone();
    }
    Ok(record)
}

/// Reads a signal CSV plus its sidecar (if `sidecar` is `None`, the
/// conventional `<csv>.meta` path is tried).
pub fn read_signal(path: &Path, sidecar: Option<&Path>) -> Result<(SignalRecord, Sidecar)> {
    let meta_path = sidecar.map(Path::to_path_buf).unwrap_or_else(|| sidecar_path(path));
    let meta = if meta_path.exists() {
        Sidecar::read(&meta_path)?
    } else if sidecar.is_some() {
        return Err(Error::Data(format!("sidecar {} not found", meta_path.display())));
    } else {
        Sidecar::default()
    };
    let text = fs::read_to_string(path)?;
    let record = parse_signal_csv(&text, path, Some(&meta))?;
    Ok((record, meta))
}

pub fn render_signal_csv(record: &SignalRecord, with_time: bool) -> String {
    let n = record.len();
    let mut s = String::with_capacity(n * 12 * (record.channel_count() + 1));
    if with_time {
        s.push_str(TIME_COLUMN);
        s.push(',');
    }
    s.push_str(&record.channels().join(","));
    s.push('\n');
    let fs = record.sampling_rate();
    for i in 0..n {
        if with_time {
            let _ = write!(s, "{},", i as f64 / fs);
        }
        for ch in 0..record.channel_count() {
            if ch > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}", record.channel(ch)[i]);
        }
        s.push('\n');
    }
    s
}

pub fn write_signal_csv(record: &SignalRecord, path: &Path, with_time: bool) -> Result<()> {
    fs::write(path, render_signal_csv(record, with_time))?;
    Ok(())
}
