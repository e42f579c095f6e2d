//! `featmap_v1` feature-map CSV.
//!
//! A `# featmap_v1` version line, then the header
//! `window_index,channel,start_sample,<34 grouped names>,PKF,DFA,quality_bitmask`
//! and one row per (window, channel) in window-major order. Values carry 17
//! significant digits so they parse back bit-identically.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::features::{FeatureId, FeatureMatrix, FeatureVector, FEATURE_COUNT};

pub const FEATMAP_VERSION: &str = "featmap_v1";

pub fn featmap_header() -> String {
    let mut h = String::from("window_index,channel,start_sample");
    for id in FeatureId::ALL {
        h.push(',');
        h.push_str(id.name());
    }
    h.push_str(",quality_bitmask");
    h
}

pub fn render_featmap(matrix: &FeatureMatrix) -> String {
    let mut s = format!("# {FEATMAP_VERSION}\n{}\n", featmap_header());
    for row in &matrix.rows {
        let _ = write!(s, "{},{},{}", row.window_index, matrix.channels[row.channel], row.start_sample);
        for v in row.values() {
            let _ = write!(s, ",{v:.16e}");
        }
        let _ = writeln!(s, ",{}", row.quality_bitmask());
    }
    s
}

pub fn write_featmap(matrix: &FeatureMatrix, path: &Path) -> Result<()> {
    fs::write(path, render_featmap(matrix))?;
    Ok(())
}

pub fn parse_featmap(text: &str, path: &Path) -> Result<FeatureMatrix> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim() == format!("# {FEATMAP_VERSION}") => {}
        Some((i, l)) => return Err(err(i + 1, format!("expected '# {FEATMAP_VERSION}', found {l:?}"))),
        None => return Err(err(1, "empty feature map".into())),
    }
    let header = featmap_header();
    match lines.next() {
        Some((_, l)) if l.trim() == header => {}
        Some((i, _)) => return Err(err(i + 1, "header does not match featmap_v1 column order".into())),
        None => return Err(err(2, "missing header".into())),
    }

    let mut channels: Vec<String> = Vec::new();
    let mut rows = Vec::new();
    for (i, raw) in lines {
        let line_no = i + 1;
        let fields: Vec<&str> = raw.trim().split(',').collect();
        if fields.len() != FEATURE_COUNT + 4 {
            return Err(err(line_no, format!("expected {} fields, found {}", FEATURE_COUNT + 4, fields.len())));
        }
        let int = |s: &str, what: &str| {
            s.parse::<usize>()
                .map_err(|_| err(line_no, format!("invalid {what} {s:?}")))
        };
        let window_index = int(fields[0], "window index")?;
        let start_sample = int(fields[2], "start sample")?;
        let channel = match channels.iter().position(|c| c == fields[1]) {
            Some(c) => c,
            None if window_index == 0 => {
                channels.push(fields[1].to_string());
                channels.len() - 1
            }
            None => return Err(err(line_no, format!("unknown channel {:?}", fields[1]))),
        };
        let mut values = [0.0; FEATURE_COUNT];
        for (k, v) in values.iter_mut().enumerate() {
            let s = fields[3 + k];
            *v = s
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(line_no, format!("invalid value {s:?} for {}", FeatureId::ALL[k])))?;
        }
        let quality = fields[FEATURE_COUNT + 3]
            .parse::<u64>()
            .map_err(|_| err(line_no, "invalid quality bitmask".into()))?;
        let expected = (rows.len() / channels.len().max(1), rows.len() % channels.len().max(1));
        if window_index == 0 && channel == rows.len() {
            // still collecting the channel list from window 0
        } else if (window_index, channel) != expected {
            return Err(err(
                line_no,
                format!("row out of window-major order: window {window_index}, channel {}", fields[1]),
            ));
        }
        rows.push(FeatureVector::from_raw(window_index, channel, start_sample, values, quality));
    }
    if rows.is_empty() {
        return Ok(FeatureMatrix::empty(channels));
    }
    if rows.len() % channels.len() != 0 {
        return Err(err(text.lines().count(), "last window is missing channels".into()));
    }
    Ok(FeatureMatrix {
        window_count: rows.len() / channels.len(),
        channels,
        rows,
    })
}

pub fn read_featmap(path: &Path) -> Result<FeatureMatrix> {
    parse_featmap(&fs::read_to_string(path)?, path)
}
