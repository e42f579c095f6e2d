//! Per-window label CSV: `window_index,rpe,state`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::signal::io::Sidecar;
use crate::signal::{FatigueLabel, WindowPlan};

pub fn render_labels(labels: &[FatigueLabel]) -> String {
    let mut s = String::from("window_index,rpe,state\n");
    for (i, l) in labels.iter().enumerate() {
        let _ = writeln!(s, "{i},{},{}", l.rpe(), l.state());
    }
    s
}

pub fn write_labels(labels: &[FatigueLabel], path: &Path) -> Result<()> {
    fs::write(path, render_labels(labels))?;
    Ok(())
}

/// Parses a label file whose rows must cover windows `0..n` in order.
pub fn parse_labels(text: &str, path: &Path) -> Result<Vec<FatigueLabel>> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut out = Vec::new();
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim() == "window_index,rpe,state" => {}
        Some((i, _)) => return Err(err(i + 1, "expected header window_index,rpe,state".into())),
        None => return Err(err(1, "empty label file".into())),
    }
    for (i, raw) in lines {
        let line_no = i + 1;
        let fields: Vec<&str> = raw.trim().split(',').collect();
        if fields.len() != 3 {
            return Err(err(line_no, format!("expected 3 fields, found {}", fields.len())));
        }
        let index: usize = fields[0]
            .parse()
            .map_err(|_| err(line_no, format!("invalid window index {:?}", fields[0])))?;
        if index != out.len() {
            return Err(err(line_no, format!("expected window {}, found {index}", out.len())));
        }
        let rpe: u8 = fields[1]
            .parse()
            .map_err(|_| err(line_no, format!("invalid rpe {:?}", fields[1])))?;
        let label = FatigueLabel::from_rpe(rpe).map_err(|e| err(line_no, e.to_string()))?;
        let state = fields[2].parse().map_err(|e: Error| err(line_no, e.to_string()))?;
        if label.state() != state {
            return Err(err(line_no, format!("rpe {rpe} does not map to state {}", fields[2])));
        }
        out.push(label);
    }
    Ok(out)
}

pub fn read_labels(path: &Path) -> Result<Vec<FatigueLabel>> {
    parse_labels(&fs::read_to_string(path)?, path)
}

/// Labels from sidecar RPE annotations sampled at each window start.
/// `None` when the sidecar carries no annotations.
pub fn labels_from_sidecar(
    sidecar: &Sidecar,
    plan: &WindowPlan,
    samples: usize,
    sampling_rate: f64,
) -> Result<Option<Vec<FatigueLabel>>> {
    if sidecar.rpe.is_empty() {
        return Ok(None);
    }
    (0..plan.window_count(samples))
        .map(|w| {
            let t = plan.start_of(w) as f64 / sampling_rate;
            let rpe = sidecar
                .rpe_at(t)
                .ok_or_else(|| Error::Data(format!("no RPE annotation at or before {t} s")))?;
            FatigueLabel::from_rpe(rpe)
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}
