//! Multilevel discrete wavelet transform with Daubechies-4 filters and
//! half-sample symmetric boundary extension.

/// Daubechies-4 (8-tap) decomposition low-pass filter.
pub const DB4_DEC_LO: [f64; 8] = [
    -0.010597401784997278,
    0.032883011666982945,
    0.030841381835986965,
    -0.18703481171888114,
    -0.02798376941698385,
    0.6308807679295904,
    0.7148465705525415,
    0.23037781330885523,
];

const TAPS: usize = DB4_DEC_LO.len();

/// Quadrature-mirror filter bank derived from the decomposition low-pass.
#[derive(Debug, Clone, Copy)]
pub struct FilterBank {
    pub dec_lo: [f64; TAPS],
    pub dec_hi: [f64; TAPS],
    pub rec_lo: [f64; TAPS],
    pub rec_hi: [f64; TAPS],
}

impl FilterBank {
    pub fn db4() -> Self {
        let dec_lo = DB4_DEC_LO;
        let mut rec_lo = dec_lo;
        rec_lo.reverse();
        let mut dec_hi = [0.0; TAPS];
        for (k, h) in dec_hi.iter_mut().enumerate() {
            let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
            *h = sign * rec_lo[k];
        }
        let mut rec_hi = dec_hi;
        rec_hi.reverse();
        Self {
            dec_lo,
            dec_hi,
            rec_lo,
            rec_hi,
        }
    }
}

/// Detail coefficients `details[0] = d1 … details[L-1] = dL` plus the
/// final approximation `aL`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Decomposition {
    pub details: Vec<Vec<f64>>,
    pub approx: Vec<f64>,
    pub signal_len: usize,
}

impl Decomposition {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    /// All coefficients, details first (d1..dL) then the approximation.
    pub fn all_coefficients(&self) -> impl Iterator<Item = f64> + Clone + '_ {
        self.details.iter().flatten().chain(&self.approx).copied()
    }
}

/// Index into a half-sample symmetric extension of a length-`n` signal.
fn symmetric_index(mut k: isize, n: usize) -> usize {
    let n = n as isize;
    let period = 2 * n;
    k = k.rem_euclid(period);
    if k >= n {
        (period - 1 - k) as usize
    } else {
        k as usize
    }
}

/// One analysis step: returns `(approximation, detail)`, each of length
/// `(n + 7) / 2`.
pub fn dwt_step(x: &[f64], bank: &FilterBank) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let out_len = (n + TAPS - 1) / 2;
    let mut approx = Vec::with_capacity(out_len);
    let mut detail = Vec::with_capacity(out_len);
    for o in 0..out_len {
        let i = (2 * o + 1) as isize;
        let (mut a, mut d) = (0.0, 0.0);
        for j in 0..TAPS {
            let k = i - j as isize;
            let v = if k >= 0 && (k as usize) < n {
                x[k as usize]
            } else {
                x[symmetric_index(k, n)]
            };
            a += bank.dec_lo[j] * v;
            d += bank.dec_hi[j] * v;
        }
        approx.push(a);
        detail.push(d);
    }
    (approx, detail)
}

/// One synthesis step from coefficient arrays of equal length `m`;
/// output length `2m - 6`. Either input may be absent (treated as zeros).
pub fn idwt_step(approx: Option<&[f64]>, detail: Option<&[f64]>, bank: &FilterBank) -> Vec<f64> {
    let m = approx.or(detail).map_or(0, <[f64]>::len);
    let out_len = (2 * m).saturating_sub(TAPS - 2);
    let mut out = vec![0.0; out_len];
    for (n, y) in out.iter_mut().enumerate() {
        // y[n] = sum_k c[k] * rec[n + TAPS - 2 - 2k]
        let t = n + TAPS - 2;
        let k_lo = (t + 1).saturating_sub(TAPS).div_ceil(2);
        let k_hi = (t / 2).min(m - 1);
        let mut acc = 0.0;
        for k in k_lo..=k_hi {
            let tap = t - 2 * k;
            if let Some(a) = approx {
                acc += a[k] * bank.rec_lo[tap];
            }
            if let Some(d) = detail {
                acc += d[k] * bank.rec_hi[tap];
            }
        }
        *y = acc;
    }
    out
}

pub fn wavedec(x: &[f64], levels: usize, bank: &FilterBank) -> Decomposition {
    let mut details = Vec::with_capacity(levels);
    let mut approx = x.to_vec();
    for _ in 0..levels {
        let (a, d) = dwt_step(&approx, bank);
        details.push(d);
        approx = a;
    }
    Decomposition {
        details,
        approx,
        signal_len: x.len(),
    }
}

/// Inverse of [`wavedec`], trimmed to the original signal length.
/// `include_approx == false` and `keep_detail` select a single component,
/// which is how single-level reconstructions are formed.
fn reconstruct(dec: &Decomposition, include_approx: bool, keep_detail: Option<usize>, bank: &FilterBank) -> Vec<f64> {
    let levels = dec.levels();
    let mut current: Option<Vec<f64>> = include_approx.then(|| dec.approx.clone());
    for level in (0..levels).rev() {
        let d = &dec.details[level];
        let use_detail = keep_detail.is_none_or(|k| k == level);
        let a = current.as_mut().map(|a| {
            a.truncate(d.len());
            a.resize(d.len(), 0.0);
            a.as_slice()
        });
        let next = idwt_step(a, use_detail.then_some(d.as_slice()), bank);
        current = Some(next);
    }
    let mut out = current.unwrap_or_default();
    out.resize(dec.signal_len, 0.0);
    out
}

pub fn waverec(dec: &Decomposition, bank: &FilterBank) -> Vec<f64> {
    reconstruct(dec, true, None, bank)
}

/// Time-domain signal of detail level `level` (1-based) alone.
pub fn detail_reconstruction(dec: &Decomposition, level: usize, bank: &FilterBank) -> Vec<f64> {
    assert!((1..=dec.levels()).contains(&level), "level {level} out of range");
    reconstruct(dec, false, Some(level - 1), bank)
}

/// Time-domain signal of the final approximation alone.
pub fn approx_reconstruction(dec: &Decomposition, bank: &FilterBank) -> Vec<f64> {
    let empty = Decomposition {
        details: dec.details.iter().map(|d| vec![0.0; d.len()]).collect(),
        approx: dec.approx.clone(),
        signal_len: dec.signal_len,
    };
    reconstruct(&empty, true, None, bank)
}
