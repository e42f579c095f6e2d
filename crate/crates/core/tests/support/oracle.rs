//! Naive reference implementations of every descriptor, written directly
//! from the textbook definitions: O(N²) DFT, explicit-padding DWT, full
//! recurrence matrix, exhaustive Lempel–Ziv parse.

use std::collections::HashMap;
use std::f64::consts::PI;

pub const FS: f64 = 2000.0;
pub const BAND: (f64, f64) = (20.0, 450.0);

// ---------------------------------------------------------------- time

pub fn iemg(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

pub fn rms(x: &[f64]) -> f64 {
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

pub fn mcv(x: &[f64]) -> f64 {
    (1..x.len()).map(|i| (x[i] - x[i - 1]).abs()).sum::<f64>() / (x.len() - 1) as f64
}

pub fn dasdv(x: &[f64]) -> f64 {
    ((1..x.len()).map(|i| (x[i] - x[i - 1]).powi(2)).sum::<f64>() / (x.len() - 1) as f64).sqrt()
}

/// Mean of the 50 ms moving average of |x| over valid positions.
pub fn aemg(x: &[f64], fs: f64) -> f64 {
    let span = (0.05 * fs).round() as usize;
    let positions = x.len() - span + 1;
    let mut total = 0.0;
    for p in 0..positions {
        let avg: f64 = x[p..p + span].iter().map(|v| v.abs()).sum::<f64>() / span as f64;
        total += avg;
    }
    total / positions as f64
}

pub fn zero_crossings(x: &[f64]) -> usize {
    (1..x.len()).filter(|&i| x[i - 1] * x[i] < 0.0).count()
}

pub fn slope_sign_changes(x: &[f64]) -> usize {
    (1..x.len() - 1)
        .filter(|&i| (x[i] - x[i - 1]) * (x[i] - x[i + 1]) > 0.0)
        .count()
}

pub fn willison_amplitude(x: &[f64]) -> usize {
    let peak = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    (1..x.len()).filter(|&i| (x[i] - x[i - 1]).abs() > 0.05 * peak).count()
}

// ------------------------------------------------------------ spectral

/// One-sided periodogram of a periodic-Hann tapered frame by direct DFT.
/// Returns (power per bin, bin width).
pub fn periodogram(x: &[f64], fs: f64) -> (Vec<f64>, f64) {
    let n = x.len();
    let w: Vec<f64> = (0..n).map(|i| (PI * i as f64 / n as f64).sin().powi(2)).collect();
    let u: f64 = w.iter().map(|v| v * v).sum();
    let (cos, sin): (Vec<f64>, Vec<f64>) = (0..n)
        .map(|j| {
            let a = 2.0 * PI * j as f64 / n as f64;
            (a.cos(), a.sin())
        })
        .unzip();
    let mut p = Vec::with_capacity(n / 2 + 1);
    for k in 0..=n / 2 {
        let (mut re, mut im) = (0.0, 0.0);
        for t in 0..n {
            let j = (k * t) % n;
            let v = x[t] * w[t];
            re += v * cos[j];
            im -= v * sin[j];
        }
        let mut power = (re * re + im * im) / (fs * u);
        if k != 0 && 2 * k != n {
            power *= 2.0;
        }
        p.push(power);
    }
    (p, fs / n as f64)
}

fn in_band(k: usize, df: f64, lo: f64, hi: f64) -> bool {
    let f = k as f64 * df;
    f >= lo && f <= hi
}

pub struct SpectrumStats {
    pub tp: f64,
    pub mpf: f64,
    pub mf: f64,
    pub mdf: f64,
    pub bse: f64,
    pub fsm2: f64,
    pub smr: f64,
    pub pkf: f64,
}

pub fn spectrum_stats(p: &[f64], df: f64) -> SpectrumStats {
    let bins: Vec<usize> = (0..p.len()).filter(|&k| in_band(k, df, BAND.0, BAND.1)).collect();
    let f = |k: usize| k as f64 * df;
    let total: f64 = bins.iter().map(|&k| p[k]).sum();
    let mpf = bins.iter().map(|&k| f(k) * p[k]).sum::<f64>() / total;
    let mf = bins.iter().map(|&k| f(k) * p[k].sqrt()).sum::<f64>() / bins.iter().map(|&k| p[k].sqrt()).sum::<f64>();
    let mut cumulative = Vec::with_capacity(bins.len());
    let mut acc = 0.0;
    for &k in &bins {
        acc += p[k];
        cumulative.push(acc);
    }
    let half = total / 2.0;
    let pos = cumulative.iter().position(|&c| c >= half).unwrap();
    let mdf = if pos == 0 {
        f(bins[0])
    } else {
        let k = bins[pos];
        f(k - 1) + (half - cumulative[pos - 1]) / p[k] * df
    };
    let bse = -bins
        .iter()
        .map(|&k| p[k] / total)
        .filter(|&q| q > 0.0)
        .map(|q| q * q.ln())
        .sum::<f64>()
        / (bins.len() as f64).ln();
    let fsm2 = bins.iter().map(|&k| p[k] / f(k)).sum::<f64>() / bins.iter().map(|&k| f(k) * f(k) * p[k]).sum::<f64>();
    let below: f64 = (0..p.len()).filter(|&k| f(k) < BAND.0).map(|k| p[k]).sum();
    let mut pk = bins[0];
    for &k in &bins {
        if p[k] > p[pk] {
            pk = k;
        }
    }
    SpectrumStats {
        tp: total * df,
        mpf,
        mf,
        mdf,
        bse,
        fsm2,
        smr: total / below,
        pkf: f(pk),
    }
}

/// Per-frame periodograms of 128-sample frames with 50% overlap.
pub fn stft(x: &[f64], fs: f64) -> Vec<(Vec<f64>, f64)> {
    let (len, hop) = (128, 64);
    let mut frames = Vec::new();
    let mut start = 0;
    while start + len <= x.len() {
        frames.push(periodogram(&x[start..start + len], fs));
        start += hop;
    }
    frames
}

// ------------------------------------------------------------- wavelet

pub const DB4_LO: [f64; 8] = [
    -0.010597401784997278,
    0.032883011666982945,
    0.030841381835986965,
    -0.18703481171888114,
    -0.02798376941698385,
    0.6308807679295904,
    0.7148465705525415,
    0.23037781330885523,
];
pub const DB4_HI: [f64; 8] = [
    -0.23037781330885523,
    0.7148465705525415,
    -0.6308807679295904,
    -0.02798376941698385,
    0.18703481171888114,
    0.030841381835986965,
    -0.032883011666982945,
    -0.010597401784997278,
];

fn reversed(h: &[f64; 8]) -> [f64; 8] {
    let mut r = *h;
    r.reverse();
    r
}

fn full_convolution(x: &[f64], h: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; x.len() + h.len() - 1];
    for (i, xv) in x.iter().enumerate() {
        for (j, hv) in h.iter().enumerate() {
            y[i + j] += xv * hv;
        }
    }
    y
}

/// Half-sample symmetric padding of `pad` samples on each side.
fn symmetric_pad(x: &[f64], pad: usize) -> Vec<f64> {
    let n = x.len() as isize;
    (-(pad as isize)..n + pad as isize)
        .map(|mut i| {
            loop {
                if i < 0 {
                    i = -i - 1;
                } else if i >= n {
                    i = 2 * n - i - 1;
                } else {
                    return x[i as usize];
                }
            }
        })
        .collect()
}

/// Single analysis level: pad by 7, convolve, keep every odd output.
fn analysis(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let padded = symmetric_pad(x, 7);
    let lo = full_convolution(&padded, &DB4_LO);
    let hi = full_convolution(&padded, &DB4_HI);
    let len = (x.len() + 7) / 2;
    // output o sits at original index 2o+1, padded index 2o+8
    let take = |y: &[f64]| (0..len).map(|o| y[2 * o + 8]).collect::<Vec<f64>>();
    (take(&lo), take(&hi))
}

/// Details d1..d5 and approximation a5.
pub fn wavedec5(x: &[f64]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut a = x.to_vec();
    let mut details = Vec::new();
    for _ in 0..5 {
        let (na, d) = analysis(&a);
        details.push(d);
        a = na;
    }
    (details, a)
}

fn upsample(c: &[f64]) -> Vec<f64> {
    let mut u = vec![0.0; 2 * c.len() - 1];
    for (k, v) in c.iter().enumerate() {
        u[2 * k] = *v;
    }
    u
}

/// Synthesis level: upsample, convolve with the reconstruction filters and
/// keep the central `2m - 6` samples.
fn synthesis(a: &[f64], d: &[f64]) -> Vec<f64> {
    let m = d.len();
    let ya = full_convolution(&upsample(a), &reversed(&DB4_LO));
    let yd = full_convolution(&upsample(d), &reversed(&DB4_HI));
    (0..2 * m - 6).map(|n| ya[n + 6] + yd[n + 6]).collect()
}

/// Inverse transform keeping only the selected components.
fn reconstruct(details: &[Vec<f64>], approx: &[f64], keep_approx: bool, keep_level: Option<usize>, n: usize) -> Vec<f64> {
    let mut current = if keep_approx { approx.to_vec() } else { vec![0.0; approx.len()] };
    for j in (1..=details.len()).rev() {
        let d = if keep_level == Some(j) {
            details[j - 1].clone()
        } else {
            vec![0.0; details[j - 1].len()]
        };
        current.truncate(d.len());
        current = synthesis(&current, &d);
    }
    current.truncate(n);
    current
}

/// Time-domain contribution of detail level `level` (1-based) alone.
pub fn detail_signal(details: &[Vec<f64>], approx: &[f64], level: usize, n: usize) -> Vec<f64> {
    reconstruct(details, approx, false, Some(level), n)
}

/// Time-domain contribution of the final approximation alone.
pub fn approx_signal(details: &[Vec<f64>], approx: &[f64], n: usize) -> Vec<f64> {
    reconstruct(details, approx, true, None, n)
}

// ----------------------------------------------------------- nonlinear

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

pub fn population_std(x: &[f64]) -> f64 {
    let m = mean(x);
    (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / x.len() as f64).sqrt()
}

/// Determinism from the full recurrence matrix (embedding 3, delay 2,
/// radius 10% of the largest distance, lines of length ≥ 2, identity
/// line excluded).
pub fn determinism(x: &[f64]) -> f64 {
    let (m, tau) = (3, 2);
    let p = x.len() - (m - 1) * tau;
    let dist = |i: usize, j: usize| {
        (0..m)
            .map(|k| (x[i + k * tau] - x[j + k * tau]).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let d: Vec<Vec<f64>> = (0..p).map(|i| (0..p).map(|j| dist(i, j)).collect()).collect();
    let max = (0..p)
        .flat_map(|i| (0..p).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| d[i][j])
        .fold(0.0f64, f64::max);
    let eps = 0.1 * max;
    let rec = |i: usize, j: usize| i != j && d[i][j] <= eps;
    let mut recurrent = 0usize;
    let mut on_lines = 0usize;
    for i in 0..p {
        for j in 0..p {
            if !rec(i, j) {
                continue;
            }
            recurrent += 1;
            let before = i > 0 && j > 0 && rec(i - 1, j - 1);
            let after = i + 1 < p && j + 1 < p && rec(i + 1, j + 1);
            if before || after {
                on_lines += 1;
            }
        }
    }
    on_lines as f64 / recurrent as f64
}

pub fn autocorrelation_lag1(x: &[f64]) -> f64 {
    let m = mean(x);
    let num: f64 = (0..x.len() - 1).map(|i| (x[i] - m) * (x[i + 1] - m)).sum();
    let den: f64 = x.iter().map(|v| (v - m).powi(2)).sum();
    num / den
}

fn chebyshev_close(x: &[f64], i: usize, j: usize, len: usize, r: f64) -> bool {
    (0..len).all(|k| (x[i + k] - x[j + k]).abs() <= r)
}

/// Pincus approximate entropy; self-matches included.
pub fn approximate_entropy(x: &[f64], m: usize, r: f64) -> f64 {
    let phi = |len: usize| {
        let count = x.len() - len + 1;
        (0..count)
            .map(|i| {
                let c = (0..count).filter(|&j| chebyshev_close(x, i, j, len, r)).count();
                (c as f64 / count as f64).ln()
            })
            .sum::<f64>()
            / count as f64
    };
    phi(m) - phi(m + 1)
}

/// Richman–Moorman sample entropy over the first N − m templates.
pub fn sample_entropy(x: &[f64], m: usize, r: f64) -> f64 {
    let count = x.len() - m;
    let (mut a, mut b) = (0usize, 0usize);
    for i in 0..count {
        for j in i + 1..count {
            if chebyshev_close(x, i, j, m, r) {
                b += 1;
                if chebyshev_close(x, i, j, m + 1, r) {
                    a += 1;
                }
            }
        }
    }
    -(a as f64 / b as f64).ln()
}

pub fn median_bits(x: &[f64]) -> Vec<u8> {
    let mut s = x.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len();
    let median = if n % 2 == 1 { s[n / 2] } else { 0.5 * (s[n / 2 - 1] + s[n / 2]) };
    x.iter().map(|&v| u8::from(v > median)).collect()
}

/// Exhaustive LZ76 parse: each phrase extends the longest prefix of the
/// remainder that already occurs starting inside the history, plus one
/// new symbol.
pub fn lz76_phrases(s: &[u8]) -> usize {
    let n = s.len();
    let mut p = 0;
    let mut phrases = 0;
    while p < n {
        let mut len = 0;
        // find longest len such that s[p..p+len] occurs at some start < p
        while p + len < n {
            let cand = &s[p..p + len + 1];
            let found = (0..p).any(|start| start + cand.len() <= p + len && &s[start..start + cand.len()] == cand);
            if found {
                len += 1;
            } else {
                break;
            }
        }
        phrases += 1;
        p += len + 1;
    }
    phrases
}

pub fn lz_complexity(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    lz76_phrases(&median_bits(x)) as f64 / (n / n.log2())
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Higuchi fractal dimension with 1-based offsets m = 1..k.
pub fn higuchi(x: &[f64], k_max: usize) -> f64 {
    let n = x.len();
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for k in 1..=k_max {
        let mut sum = 0.0;
        for m in 1..=k {
            let steps = (n - m) / k;
            let mut path = 0.0;
            for i in 1..=steps {
                path += (x[m - 1 + i * k] - x[m - 1 + (i - 1) * k]).abs();
            }
            sum += path * (n - 1) as f64 / (steps * k) as f64 / k as f64;
        }
        lx.push((1.0 / k as f64).ln());
        ly.push((sum / k as f64).ln());
    }
    slope(&lx, &ly)
}

/// Normalised permutation entropy, order 3, delay 1; ties by position.
pub fn permutation_entropy(x: &[f64]) -> f64 {
    let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
    let total = x.len() - 2;
    for s in 0..total {
        let mut idx = vec![0, 1, 2];
        idx.sort_by(|&a, &b| x[s + a].partial_cmp(&x[s + b]).unwrap().then(a.cmp(&b)));
        *counts.entry(idx).or_default() += 1;
    }
    let h: f64 = counts
        .values()
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.ln()
        })
        .sum();
    h / 6f64.ln()
}

pub fn coefficient_entropy(coeffs: &[f64]) -> f64 {
    let total: f64 = coeffs.iter().map(|c| c * c).sum();
    -coeffs
        .iter()
        .map(|c| c * c / total)
        .filter(|&q| q > 0.0)
        .map(|q| q * q.ln())
        .sum::<f64>()
}

/// DFA exponent: non-overlapping boxes, least-squares line per box.
pub fn dfa(x: &[f64], scales: &[usize]) -> f64 {
    let m = mean(x);
    let mut y = Vec::new();
    let mut acc = 0.0;
    for v in x {
        acc += v - m;
        y.push(acc);
    }
    let mut ls = Vec::new();
    let mut lf = Vec::new();
    for &s in scales {
        let boxes = y.len() / s;
        let mut rss = 0.0;
        for b in 0..boxes {
            let seg = &y[b * s..(b + 1) * s];
            let t: Vec<f64> = (0..s).map(|i| i as f64).collect();
            let beta = slope(&t, seg);
            let alpha = mean(seg) - beta * mean(&t);
            rss += seg.iter().zip(&t).map(|(v, tt)| (v - alpha - beta * tt).powi(2)).sum::<f64>();
        }
        ls.push((s as f64).ln());
        lf.push((rss / (boxes * s) as f64).sqrt().ln());
    }
    slope(&ls, &lf)
}

// ---------------------------------------------------------------- all

fn waveform_length(x: &[f64]) -> f64 {
    (1..x.len()).map(|i| (x[i] - x[i - 1]).abs()).sum()
}

/// Every descriptor of one window under the default configuration.
pub fn all_features(x: &[f64]) -> Vec<(&'static str, f64)> {
    let n = x.len();
    let (p, df) = periodogram(x, FS);
    let s = spectrum_stats(&p, df);
    let frames = stft(x, FS);
    let frame_stats: Vec<SpectrumStats> = frames.iter().map(|(fp, fdf)| spectrum_stats(fp, *fdf)).collect();
    let frame_mean = |g: &dyn Fn(&SpectrumStats) -> f64| frame_stats.iter().map(g).sum::<f64>() / frame_stats.len() as f64;
    let band_sum = |lo: f64, hi: f64| -> f64 {
        frames
            .iter()
            .map(|(fp, fdf)| (0..fp.len()).filter(|&k| in_band(k, *fdf, lo, hi)).map(|k| fp[k]).sum::<f64>())
            .sum()
    };

    let (details, approx) = wavedec5(x);
    let energy: Vec<f64> = details.iter().map(|d| d.iter().map(|c| c * c).sum()).collect();
    let abs_sum: Vec<f64> = details.iter().map(|d| d.iter().map(|c| c.abs()).sum()).collect();
    let approx_energy: f64 = approx.iter().map(|c| c * c).sum();
    let total_energy: f64 = energy.iter().sum::<f64>() + approx_energy;
    let wee = -energy
        .iter()
        .chain(std::iter::once(&approx_energy))
        .map(|e| e / total_energy)
        .map(|q| q * q.ln())
        .sum::<f64>();
    let rec1 = detail_signal(&details, &approx, 1, n);
    let rec5 = detail_signal(&details, &approx, 5, n);
    let pooled: Vec<f64> = details.iter().flatten().chain(&approx).copied().collect();

    let r = 0.2 * population_std(x);
    vec![
        ("AEMG", aemg(x, FS)),
        ("iEMG", iemg(x)),
        ("RMS", rms(x)),
        ("MAV", iemg(x) / n as f64),
        ("MCV", mcv(x)),
        ("DASDV", dasdv(x)),
        ("ZC", zero_crossings(x) as f64),
        ("SSC", slope_sign_changes(x) as f64),
        ("WA", willison_amplitude(x) as f64),
        ("SMR", s.smr),
        ("FSM2", s.fsm2),
        ("TP", s.tp),
        ("MPF", s.mpf),
        ("MF", s.mf),
        ("MDF", s.mdf),
        ("IMPF", frame_mean(&|f| f.mpf)),
        ("IMF", frame_mean(&|f| f.mdf)),
        ("BSE", s.bse),
        ("ERHL", band_sum(20.0, 80.0) / band_sum(150.0, 450.0)),
        ("IMNF", frame_mean(&|f| 1.0 / f.mpf)),
        ("IMFB", frame_mean(&|f| 1.0 / f.mdf)),
        ("WIRM1551", abs_sum[4] / abs_sum[0]),
        ("WIRM1522", energy[4].sqrt() / energy[1].sqrt()),
        ("WIRE51", energy[4] / energy[0]),
        ("WIRW51", waveform_length(&rec5) / waveform_length(&rec1)),
        ("WEE", wee),
        ("DET", determinism(x)),
        ("ACC", autocorrelation_lag1(x)),
        ("AE", approximate_entropy(x, 2, r)),
        ("SE", sample_entropy(x, 2, r)),
        ("LZC", lz_complexity(x)),
        ("FD", higuchi(x, 8)),
        ("BE", permutation_entropy(x)),
        ("WENT", coefficient_entropy(&pooled)),
        ("PKF", s.pkf),
        ("DFA", dfa(x, &[4, 8, 16, 32, 64])),
    ]
}
