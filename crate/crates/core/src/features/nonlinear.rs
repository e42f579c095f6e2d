//! Complexity, entropy and recurrence descriptors.

use super::cache::SpectralCache;
use super::id::{Domain, FeatureId};
use super::{EngineConfig, PartialFeatures};

/// Shortest window the nonlinear descriptors are computed on.
pub const MIN_NONLINEAR_LEN: usize = 100;

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Population standard deviation.
pub fn std_dev(x: &[f64]) -> f64 {
    let mu = mean(x);
    (x.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / x.len() as f64).sqrt()
}

/// Outcome of a recurrence analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recurrence {
    /// Recurrent off-diagonal pairs (upper triangle).
    pub recurrent: u64,
    /// Of those, pairs lying on diagonal lines of at least the minimum length.
    pub on_lines: u64,
    pub radius: f64,
}

impl Recurrence {
    pub fn determinism(&self) -> Option<f64> {
        (self.radius > 0.0 && self.recurrent > 0).then(|| self.on_lines as f64 / self.recurrent as f64)
    }
}

/// Recurrence quantification on a delay embedding with Euclidean distance.
/// The radius is `threshold_fraction` of the largest pairwise distance; the
/// line of identity is excluded.
///
/// The distance matrix is scanned one diagonal at a time: along offset `o`,
/// `d²(i, i+o) = Σ_k e[i + kτ]` with `e[i] = (x[i] - x[i+o])²`.
pub fn recurrence(x: &[f64], embedding: usize, delay: usize, threshold_fraction: f64, min_line: usize) -> Recurrence {
    let span = (embedding - 1) * delay;
    if x.len() <= span + 1 {
        return Recurrence {
            recurrent: 0,
            on_lines: 0,
            radius: 0.0,
        };
    }
    let points = x.len() - span;
    let mut sq = vec![0.0; x.len()];
    let mut dist2 = vec![0.0; points];
    let mut diagonal = |offset: usize, dist2: &mut [f64]| {
        let n = x.len() - offset;
        for (e, (a, b)) in sq[..n].iter_mut().zip(x.iter().zip(&x[offset..])) {
            let d = a - b;
            *e = d * d;
        }
        let count = points - offset;
        if embedding == 3 {
            let (e0, e1, e2) = (&sq[..count], &sq[delay..delay + count], &sq[2 * delay..2 * delay + count]);
            for (d, ((a, b), c)) in dist2[..count].iter_mut().zip(e0.iter().zip(e1).zip(e2)) {
                *d = a + b + c;
            }
        } else {
            dist2[..count].copy_from_slice(&sq[..count]);
            for k in 1..embedding {
                let shifted = &sq[k * delay..k * delay + count];
                for (d, e) in dist2[..count].iter_mut().zip(shifted) {
                    *d += e;
                }
            }
        }
        count
    };

    let mut lanes = [0.0f64; 4];
    for offset in 1..points {
        let count = diagonal(offset, &mut dist2);
        let chunks = dist2[..count].chunks_exact(4);
        for &d in chunks.remainder() {
            lanes[0] = if d > lanes[0] { d } else { lanes[0] };
        }
        for c in chunks {
            for (l, &d) in lanes.iter_mut().zip(c) {
                *l = if d > *l { d } else { *l };
            }
        }
    }
    let max2 = lanes.iter().copied().fold(0.0f64, f64::max);
    let radius = threshold_fraction * max2.sqrt();
    let radius2 = radius * radius;

    let (mut recurrent, mut on_lines) = (0u64, 0u64);
    let mut mask = vec![0u8; points];
    for offset in 1..points {
        let count = diagonal(offset, &mut dist2);
        for (h, &d) in mask[..count].iter_mut().zip(&dist2[..count]) {
            *h = u8::from(d <= radius2);
        }
        let hits: u64 = mask[..count].iter().map(|&h| u64::from(h)).sum();
        recurrent += hits;
        on_lines += match min_line {
            0 | 1 => hits,
            // everything except isolated points
            2 => hits - isolated_points(&mask[..count]),
            _ => long_run_points(&mask[..count], min_line as u64),
        };
    }
    Recurrence {
        recurrent,
        on_lines,
        radius,
    }
}

fn isolated_points(mask: &[u8]) -> u64 {
    match mask.len() {
        0 => 0,
        1 => u64::from(mask[0]),
        n => {
            let first = mask[0] & !mask[1] & 1;
            let last = mask[n - 1] & !mask[n - 2] & 1;
            let inner: u64 = mask
                .windows(3)
                .map(|w| u64::from(w[1] & !w[0] & !w[2] & 1))
                .sum();
            u64::from(first) + u64::from(last) + inner
        }
    }
}

fn long_run_points(mask: &[u8], min_line: u64) -> u64 {
    let mut total = 0;
    let mut run = 0u64;
    for &h in mask {
        if h != 0 {
            run += 1;
        } else {
            if run >= min_line {
                total += run;
            }
            run = 0;
        }
    }
    if run >= min_line {
        total += run;
    }
    total
}

/// Lag-1 autocorrelation coefficient; `None` for a constant window.
pub fn lag1_autocorrelation(x: &[f64]) -> Option<f64> {
    let mu = mean(x);
    let var: f64 = x.iter().map(|v| (v - mu) * (v - mu)).sum();
    if !(var > 0.0) {
        return None;
    }
    let cov: f64 = x.windows(2).map(|p| (p[0] - mu) * (p[1] - mu)).sum();
    Some(cov / var)
}

/// Approximate entropy and sample entropy with a shared template scan
/// (Chebyshev distance, matches at distance `<= r`).
///
/// Template pairs are visited one diagonal (offset) at a time. Sample
/// entropy is `None` when either template count is zero.
pub fn approximate_and_sample_entropy(x: &[f64], m: usize, r: f64) -> (Option<f64>, Option<f64>) {
    let n = x.len();
    if n < m + 2 {
        return (None, None);
    }
    let templates = n - m + 1;
    let mut count_m = vec![1u32; templates];
    let mut count_m1 = vec![1u32; templates - 1];
    let (mut a, mut b) = (0u64, 0u64);
    let mut close = vec![false; n];
    for offset in 1..templates {
        let len = n - offset;
        for (c, (p, q)) in close[..len].iter_mut().zip(x.iter().zip(&x[offset..])) {
            *c = (p - q).abs() <= r;
        }
        // consecutive close positions ending at i + m - 1
        let mut run = close[..m - 1].iter().rev().take_while(|&&c| c).count();
        for i in 0..templates - offset {
            run = if close[i + m - 1] { run + 1 } else { 0 };
            if run < m {
                continue;
            }
            let j = i + offset;
            count_m[i] += 1;
            count_m[j] += 1;
            if j < templates - 1 {
                b += 1;
                if close[i + m] {
                    a += 1;
                    count_m1[i] += 1;
                    count_m1[j] += 1;
                }
            }
        }
    }
    let phi = |counts: &[u32]| {
        let len = counts.len() as f64;
        counts.iter().map(|&c| (c as f64 / len).ln()).sum::<f64>() / len
    };
    let apen = phi(&count_m) - phi(&count_m1);
    let sampen = (a > 0 && b > 0).then(|| -(a as f64 / b as f64).ln());
    (Some(apen), sampen)
}

/// Binarises around the median: 1 where the sample exceeds it.
pub fn median_binarize(x: &[f64]) -> Vec<u8> {
    let mut buf = x.to_vec();
    let n = buf.len();
    let (below, mid, _) = buf.select_nth_unstable_by(n / 2, f64::total_cmp);
    let upper = *mid;
    let median = if n % 2 == 1 {
        upper
    } else {
        let lower = below.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    };
    x.iter().map(|&v| u8::from(v > median)).collect()
}

/// Lempel–Ziv (1976) phrase count, Kaspar–Schuster scan.
pub fn lz_phrase_count(s: &[u8]) -> usize {
    let n = s.len();
    if n < 2 {
        return n;
    }
    let (mut i, mut k, mut l) = (0usize, 1usize, 1usize);
    let mut c = 1usize;
    let mut k_max = 1usize;
    loop {
        if s[i + k - 1] == s[l + k - 1] {
            k += 1;
            if l + k > n {
                c += 1;
                break;
            }
        } else {
            k_max = k_max.max(k);
            i += 1;
            if i == l {
                c += 1;
                l += k_max;
                if l + 1 > n {
                    break;
                }
                i = 0;
                k = 1;
                k_max = 1;
            } else {
                k = 1;
            }
        }
    }
    c
}

/// Phrase count normalised by `n / log2 n`.
pub fn lempel_ziv_complexity(x: &[f64]) -> f64 {
    let bits = median_binarize(x);
    let n = bits.len() as f64;
    lz_phrase_count(&bits) as f64 * n.log2() / n
}

/// Higuchi fractal dimension; `None` when some curve length is zero.
pub fn higuchi_fd(x: &[f64], k_max: usize) -> Option<f64> {
    let n = x.len();
    let mut log_inv_k = Vec::with_capacity(k_max);
    let mut log_len = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut total = 0.0;
        let mut used = 0usize;
        for m in 0..k {
            let steps = (n - 1 - m) / k;
            if steps == 0 {
                continue;
            }
            let path: f64 = (1..=steps).map(|i| (x[m + i * k] - x[m + (i - 1) * k]).abs()).sum();
            total += path * (n - 1) as f64 / (steps * k) as f64 / k as f64;
            used += 1;
        }
        if used == 0 {
            return None;
        }
        let curve = total / used as f64;
        if !(curve > 0.0) {
            return None;
        }
        log_inv_k.push(-(k as f64).ln());
        log_len.push(curve.ln());
    }
    ols_slope(&log_inv_k, &log_len)
}

fn ols_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Permutation entropy normalised by `ln(order!)`. Ties rank by position.
pub fn permutation_entropy(x: &[f64], order: usize, delay: usize) -> Option<f64> {
    let span = (order - 1) * delay;
    if x.len() <= span {
        return None;
    }
    let patterns = x.len() - span;
    let factorial: usize = (1..=order).product();
    let mut counts = vec![0u32; factorial];
    let mut idx: Vec<usize> = Vec::with_capacity(order);
    for start in 0..patterns {
        idx.clear();
        idx.extend(0..order);
        idx.sort_by(|&a, &b| x[start + a * delay].total_cmp(&x[start + b * delay]).then(a.cmp(&b)));
        counts[lehmer_code(&idx)] += 1;
    }
    let total = patterns as f64;
    let h: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.ln()
        })
        .sum();
    Some(h / (factorial as f64).ln())
}

/// Rank of a permutation in lexicographic order.
fn lehmer_code(perm: &[usize]) -> usize {
    let n = perm.len();
    let mut code = 0;
    for i in 0..n {
        let smaller = perm[i + 1..].iter().filter(|&&p| p < perm[i]).count();
        code = code * (n - i) + smaller;
    }
    code
}

/// Shannon entropy of the normalised squared coefficients pooled across all
/// wavelet levels.
pub fn wavelet_entropy(coeffs: impl Iterator<Item = f64> + Clone) -> Option<f64> {
    let total: f64 = coeffs.clone().map(|c| c * c).sum();
    (total > 0.0).then(|| {
        coeffs
            .map(|c| c * c / total)
            .filter(|&q| q > 0.0)
            .map(|q| -q * q.ln())
            .sum()
    })
}

/// Detrended fluctuation analysis scaling exponent with linear detrending in
/// non-overlapping boxes. Scales longer than the window are skipped.
pub fn dfa_exponent(x: &[f64], scales: &[usize]) -> Option<f64> {
    let mu = mean(x);
    let mut profile = Vec::with_capacity(x.len());
    let mut acc = 0.0;
    for v in x {
        acc += v - mu;
        profile.push(acc);
    }
    let mut log_s = Vec::new();
    let mut log_f = Vec::new();
    for &s in scales {
        let boxes = profile.len() / s;
        if boxes == 0 {
            continue;
        }
        let t_mean = (s - 1) as f64 / 2.0;
        let stt: f64 = (0..s).map(|t| (t as f64 - t_mean).powi(2)).sum();
        let mut rss = 0.0;
        for seg in profile.chunks_exact(s).take(boxes) {
            let y_mean = mean(seg);
            let sty: f64 = seg.iter().enumerate().map(|(t, y)| (t as f64 - t_mean) * (y - y_mean)).sum();
            let slope = sty / stt;
            rss += seg
                .iter()
                .enumerate()
                .map(|(t, y)| {
                    let r = y - y_mean - slope * (t as f64 - t_mean);
                    r * r
                })
                .sum::<f64>();
        }
        let fluct = (rss / (boxes * s) as f64).sqrt();
        if !(fluct > 0.0) {
            return None;
        }
        log_s.push((s as f64).ln());
        log_f.push(fluct.ln());
    }
    if log_s.len() < 2 {
        return None;
    }
    ols_slope(&log_s, &log_f)
}

/// Nonlinear descriptors plus the auxiliary DFA exponent. WENT reads the
/// cached wavelet decomposition.
pub fn compute_nonlinear_features(
    window: &crate::signal::WindowView<'_>,
    cache: &SpectralCache,
    cfg: &EngineConfig,
) -> PartialFeatures {
    let x = window.samples();
    let mut out = PartialFeatures::default();
    out.set_or_flag(FeatureId::Went, wavelet_entropy(cache.dwt.all_coefficients()));
    if x.len() < MIN_NONLINEAR_LEN {
        log::debug!("window of {} samples too short for nonlinear descriptors", x.len());
        for id in FeatureId::of_domain(Domain::Nonlinear).filter(|&f| f != FeatureId::Went) {
            out.flag(id);
        }
        out.flag(FeatureId::Dfa);
        return out;
    }

    let rqa = recurrence(x, cfg.rqa_embedding, cfg.rqa_delay, cfg.rqa_threshold_fraction, cfg.rqa_min_line);
    out.set_or_flag(FeatureId::Det, rqa.determinism());
    out.set_or_flag(FeatureId::Acc, lag1_autocorrelation(x));

    let r = cfg.entropy_r_fraction * std_dev(x);
    let (apen, sampen) = approximate_and_sample_entropy(x, cfg.entropy_m, r);
    out.set_or_flag(FeatureId::Ae, apen);
    if r > 0.0 {
        out.set_or_flag(FeatureId::Se, sampen);
    } else {
        out.flag(FeatureId::Se);
    }
    out.set(FeatureId::Lzc, lempel_ziv_complexity(x));
    out.set_or_flag(FeatureId::Fd, higuchi_fd(x, cfg.higuchi_k_max));
    out.set_or_flag(FeatureId::Be, permutation_entropy(x, cfg.permutation_order, cfg.permutation_delay));
    out.set_or_flag(FeatureId::Dfa, dfa_exponent(x, &cfg.dfa_scales));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::cache::build_spectral_cache;
    use crate::signal::WindowView;

    fn feats(x: &[f64]) -> PartialFeatures {
        let cfg = EngineConfig::default();
        let view = WindowView::of_slice(x, 2000.0);
        compute_nonlinear_features(&view, &build_spectral_cache(&view, &cfg), &cfg)
    }

    fn bits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn lz_known_counts() {
        assert_eq!(lz_phrase_count(&bits("0101010101")), 3);
        assert_eq!(lz_phrase_count(&bits("0000000000")), 2);
        // Kaspar & Schuster's worked example
        assert_eq!(lz_phrase_count(&bits("0001101001000101")), 6);
        assert_eq!(lz_phrase_count(&bits("1")), 1);
    }

    #[test]
    fn constant_window() {
        let f = feats(&[1.5; 1000]);
        assert!(f.is_degenerate(FeatureId::Acc));
        assert!(f.is_degenerate(FeatureId::Det));
        assert!(f.is_degenerate(FeatureId::Se));
        assert_eq!(f.get(FeatureId::Ae), Some(0.0));
        assert!(!f.is_degenerate(FeatureId::Ae));
        let lzc = f.get(FeatureId::Lzc).unwrap();
        assert!((lzc - 2.0 * 1000f64.log2() / 1000.0).abs() < 1e-15);
        assert_eq!(f.get(FeatureId::Be), Some(0.0));
    }

    #[test]
    fn permutation_entropy_bounds() {
        let ramp: Vec<f64> = (0..200).map(|i| i as f64).collect();
        assert_eq!(permutation_entropy(&ramp, 3, 1), Some(0.0));
        // every pattern of order 2 equally often
        let zigzag: Vec<f64> = (0..201).map(|i| (i % 2) as f64).collect();
        let pe = permutation_entropy(&zigzag, 2, 1).unwrap();
        assert!((pe - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lehmer_codes_are_a_bijection() {
        let mut seen = std::collections::HashSet::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    if a != b && b != c && a != c {
                        assert!(seen.insert(lehmer_code(&[a, b, c])));
                    }
                }
            }
        }
        assert_eq!(seen.into_iter().max(), Some(5));
    }

    #[test]
    fn higuchi_of_line_is_one() {
        let line: Vec<f64> = (0..500).map(|i| 0.3 * i as f64).collect();
        let fd = higuchi_fd(&line, 8).unwrap();
        assert!((fd - 1.0).abs() < 1e-3, "{fd}");
    }

    #[test]
    fn dfa_of_white_noise_near_half() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let x: Vec<f64> = (0..4000).map(|_| rng.random_range(-1.0..1.0)).collect();
        let alpha = dfa_exponent(&x, &[4, 8, 16, 32, 64]).unwrap();
        assert!((alpha - 0.5).abs() < 0.12, "{alpha}");
    }

    #[test]
    fn run_counting_paths_agree() {
        let mask = [1, 0, 1, 1, 0, 1, 0, 0, 1, 1, 1, 0, 1];
        assert_eq!(isolated_points(&mask), 3);
        assert_eq!(long_run_points(&mask, 2), 5);
        assert_eq!(long_run_points(&mask, 3), 3);
        assert_eq!(isolated_points(&[1]), 1);
        assert_eq!(isolated_points(&[1, 1]), 0);
    }

    #[test]
    fn sine_autocorrelation() {
        let x: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.05).sin()).collect();
        let acc = lag1_autocorrelation(&x).unwrap();
        assert!((acc - 0.05f64.cos()).abs() < 0.01);
    }
}
