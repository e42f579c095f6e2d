use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fatigue(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fatigue"))
        .current_dir(dir)
        .arg("--quiet")
        .args(args)
        .output()
        .expect("spawn fatigue")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = fatigue(dir, args);
    assert!(
        out.status.success(),
        "fatigue {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn data_rows(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(str::to_string)
        .collect()
}

/// Synth record plus feature map and labels in a fresh directory.
fn extracted(seed: u64) -> (tempfile::TempDir, PathBuf, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let seed = seed.to_string();
    ok(dir.path(), &["synth", "--seed", &seed, "-o", "s.csv"]);
    ok(dir.path(), &["extract", "s.csv", "-o", "f.csv", "--labels-out", "l.csv"]);
    let (f, l) = (dir.path().join("f.csv"), dir.path().join("l.csv"));
    (dir, f, l)
}

#[test]
fn empty_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("empty.csv"), "").unwrap();
    let out = fatigue(dir.path(), &["extract", "empty.csv", "-o", "f.csv"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("no samples"), "{err}");
    assert!(!dir.path().join("f.csv").exists());
}

#[test]
fn missing_output_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = fatigue(dir.path(), &["synth", "--duration", "5"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no output path"));
}

#[test]
fn synth_is_reproducible_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    for name in ["a.csv", "b.csv"] {
        ok(p, &["synth", "--seed", "7", "--duration", "10", "-o", name]);
    }
    ok(p, &["synth", "--seed", "8", "--duration", "10", "-o", "c.csv"]);
    let read = |n: &str| fs::read(p.join(n)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    assert_eq!(read("a.labels.csv"), read("b.labels.csv"));
    assert_ne!(read("a.csv"), read("c.csv"));
    assert!(p.join("a.csv.meta").exists());
}

#[test]
fn pipeline_end_to_end() {
    let (dir, featmap, labels) = extracted(3);
    let p = dir.path();

    // 60 s at 0.5 s windows and 0.25 s stride over two channels.
    let rows = data_rows(&featmap);
    assert_eq!(rows.len(), 2 * 239);
    assert_eq!(data_rows(&labels).len(), 239);

    // Reruns with a different thread count are byte-identical.
    ok(p, &["extract", "s.csv", "-o", "g.csv", "--threads", "2"]);
    assert_eq!(fs::read(&featmap).unwrap(), fs::read(p.join("g.csv")).unwrap());

    let stdout = ok(p, &["trends", "f.csv", "-o", "t.csv", "--plot", "plot.csv"]);
    let inc = stdout.lines().find(|l| l.starts_with("increasing:")).unwrap();
    assert!(inc.split_whitespace().any(|w| w == "RMS"), "{stdout}");
    let dec = stdout.lines().find(|l| l.starts_with("decreasing:")).unwrap();
    assert!(dec.split_whitespace().any(|w| w == "MDF"), "{stdout}");
    let report = fs::read_to_string(p.join("t.csv")).unwrap();
    assert!(report.lines().any(|l| l.starts_with("RMS,biceps,") && l.ends_with(",increasing")));
    assert!(p.join("plot.csv").exists());

    ok(p, &["export-seq", "f.csv", "--labels", "l.csv", "-o", "q.csv", "--grouping", "table"]);
    let text = fs::read_to_string(p.join("q.csv")).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    assert_eq!(header.iter().filter(|h| h.starts_with("inc:")).count(), 19);
    assert_eq!(header.iter().filter(|h| h.starts_with("dec:")).count(), 15);
    assert_eq!(*header.last().unwrap(), "label");
    let rows = data_rows(&p.join("q.csv"));
    assert_eq!(rows.len(), 235 * 5);
    let last = rows.last().unwrap();
    assert!(last.starts_with("234,4,"));
    assert!(last.ends_with(",2"), "final windows are labelled fatigued");
    for row in &rows {
        assert_eq!(row.split(',').count(), header.len());
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("run.cfg"), "window_s = 1.0\nstride_s = 1.0\noutput = from_cfg.csv\n").unwrap();
    ok(p, &["synth", "--seed", "1", "--duration", "10", "-o", "s.csv"]);

    ok(p, &["extract", "s.csv", "--config", "run.cfg"]);
    assert_eq!(data_rows(&p.join("from_cfg.csv")).len(), 2 * 10);

    ok(p, &["extract", "s.csv", "--config", "run.cfg", "--stride-s", "0.5", "-o", "flag.csv"]);
    assert_eq!(data_rows(&p.join("flag.csv")).len(), 2 * 19);
}

#[test]
fn invalid_config_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.cfg"), "seed = 1\nwindow = 2\n").unwrap();
    let out = fatigue(dir.path(), &["synth", "--config", "bad.cfg", "-o", "s.csv"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains('2'), "{err}");
}

#[test]
fn bench_single_thread_reports_unit_speedup() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let stdout = ok(p, &["bench", "--threads", "1", "--windows", "100", "--repeats", "1", "-o", "b.txt"]);
    assert!(!stdout.is_empty());
    let kv = fs::read_to_string(p.join("b.txt")).unwrap();
    assert!(kv.lines().any(|l| l == "run.0.threads=1"), "{kv}");
    let speedup = kv.lines().find_map(|l| l.strip_prefix("run.0.speedup=")).unwrap();
    assert_eq!(speedup.parse::<f64>().unwrap(), 1.0);
}
