//! Uniform time-series representation and preprocessing primitives:
//! zero-phase low-pass filtering, centered moving average, baseline
//! detrending and prominence-based peak finding.

use crate::error::{Error, Result};

/// A uniformly sampled real-valued signal.
///
/// Samples are immutable after construction; every sample is finite and
/// the sample rate is strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    samples: Vec<f64>,
    sample_rate_hz: f64,
    label: Option<String>,
}

impl TimeSeries {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        if !sample_rate_hz.is_finite() || sample_rate_hz <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sample_rate_hz must be a finite positive number, got {sample_rate_hz}"
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("sample {i} is not finite")));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
            label: None,
        })
    }

    pub fn with_label(
        samples: Vec<f64>,
        sample_rate_hz: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        let mut ts = Self::new(samples, sample_rate_hz)?;
        ts.label = Some(label.into());
        Ok(ts)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    /// Same samples re-labelled with a new sample rate.
    pub fn with_sample_rate(&self, sample_rate_hz: f64) -> Result<Self> {
        let mut ts = Self::new(self.samples.clone(), sample_rate_hz)?;
        ts.label = self.label.clone();
        Ok(ts)
    }

    fn derived(&self, samples: Vec<f64>) -> Self {
        Self {
            samples,
            sample_rate_hz: self.sample_rate_hz,
            label: self.label.clone(),
        }
    }
}

/// Detected peak positions, strictly increasing sample indices.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakList {
    indices: Vec<usize>,
    source_length: usize,
    sample_rate_hz: f64,
}

impl PeakList {
    pub fn new(indices: Vec<usize>, source_length: usize, sample_rate_hz: f64) -> Result<Self> {
        if !sample_rate_hz.is_finite() || sample_rate_hz <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sample_rate_hz must be a finite positive number, got {sample_rate_hz}"
            )));
        }
        for pair in indices.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::InvalidParameter(
                    "peak indices must be strictly increasing".into(),
                ));
            }
        }
        if let Some(&last) = indices.last() {
            if last >= source_length {
                return Err(Error::InvalidParameter(format!(
                    "peak index {last} out of bounds for source length {source_length}"
                )));
            }
        }
        Ok(Self {
            indices,
            source_length,
            sample_rate_hz,
        })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn source_length(&self) -> usize {
        self.source_length
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Low-pass filter
// ---------------------------------------------------------------------------

/// Hamming-window transition-width constant: delta_f ~= 3.3 * fs / taps.
const HAMMING_TRANSITION: f64 = 3.3;
/// Transition band as a fraction of the cutoff frequency.
const TRANSITION_FRACTION: f64 = 0.25;

/// Number of taps for the windowed-sinc design at the given cutoff:
/// the smallest odd length whose transition band is at most 25% of
/// the cutoff frequency.
pub fn low_pass_filter_len(sample_rate_hz: f64, cutoff_hz: f64) -> usize {
    let n = (HAMMING_TRANSITION * sample_rate_hz / (TRANSITION_FRACTION * cutoff_hz)).ceil();
    let n = n as usize;
    if n.is_multiple_of(2) {
        n + 1
    } else {
        n
    }
}

fn design_low_pass(sample_rate_hz: f64, cutoff_hz: f64) -> Vec<f64> {
    let taps = low_pass_filter_len(sample_rate_hz, cutoff_hz);
    let mid = (taps - 1) / 2;
    let fc = cutoff_hz / sample_rate_hz; // normalized cutoff, cycles/sample
    let mut h = Vec::with_capacity(taps);
    for k in 0..taps {
        let m = k as f64 - mid as f64;
        let sinc = if k == mid {
            2.0 * fc
        } else {
            (2.0 * std::f64::consts::PI * fc * m).sin() / (std::f64::consts::PI * m)
        };
        let window =
            0.54 - 0.46 * (2.0 * std::f64::consts::PI * k as f64 / (taps as f64 - 1.0)).cos();
        h.push(sinc * window);
    }
    // Unity gain at DC.
    let sum: f64 = h.iter().sum();
    for c in &mut h {
        *c /= sum;
    }
    h
}

/// Zero-phase FIR low-pass filter (windowed ideal response, Hamming window),
/// applied as a centered convolution with symmetric-reflection edge padding.
///
/// Output has the same length and sample rate as the input, so peak timing
/// is preserved.
pub fn low_pass(signal: &TimeSeries, cutoff_hz: f64) -> Result<TimeSeries> {
    let fs = signal.sample_rate_hz();
    if !cutoff_hz.is_finite() || cutoff_hz <= 0.0 || cutoff_hz >= fs / 2.0 {
        return Err(Error::InvalidParameter(format!(
            "cutoff {cutoff_hz} Hz must lie in (0, {}) for fs {fs} Hz",
            fs / 2.0
        )));
    }
    let h = design_low_pass(fs, cutoff_hz);
    let n = signal.len();
    if n < h.len() {
        return Err(Error::TooShort(format!(
            "signal has {n} samples but the filter needs {}",
            h.len()
        )));
    }
    let mid = (h.len() - 1) / 2;
    let x = signal.samples();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = 0.0;
        for (k, &c) in h.iter().enumerate() {
            let j = i as isize + k as isize - mid as isize;
            acc += c * x[reflect_index(j, n)];
        }
        out.push(acc);
    }
    Ok(signal.derived(out))
}

/// Mirror an out-of-range index back into [0, n) without repeating the
/// edge sample (…x2 x1 | x0 x1 x2 … x{n-1} | x{n-2} x{n-3}…).
fn reflect_index(j: isize, n: usize) -> usize {
    let n = n as isize;
    let mut j = j;
    // Signals are always longer than the pad here, so this resolves in
    // at most two steps.
    loop {
        if j < 0 {
            j = -j;
        } else if j >= n {
            j = 2 * (n - 1) - j;
        } else {
            return j as usize;
        }
    }
}

// ---------------------------------------------------------------------------
// Moving average and detrend
// ---------------------------------------------------------------------------

/// Centered moving average with an odd window. Edge windows shrink to the
/// available samples, so the output has the same length as the input.
///
/// Constant input is returned exactly: the mean is accumulated as
/// deviations from the first sample, which are identically zero then.
pub fn moving_average(signal: &TimeSeries, window_len: usize) -> Result<TimeSeries> {
    let n = signal.len();
    if window_len.is_multiple_of(2) || window_len < 1 || window_len > n {
        return Err(Error::InvalidParameter(format!(
            "window_len {window_len} must be odd and within 1..={n}"
        )));
    }
    let x = signal.samples();
    let anchor = x[0];
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for &v in x {
        acc += v - anchor;
        prefix.push(acc);
    }
    let half = window_len / 2;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let lo = i.saturating_sub(half);
        let hi = (i + half).min(n - 1);
        let count = (hi - lo + 1) as f64;
        out.push(anchor + (prefix[hi + 1] - prefix[lo]) / count);
    }
    Ok(signal.derived(out))
}

/// Round a window given in seconds to the nearest odd sample count.
pub(crate) fn odd_window_len(window_s: f64, sample_rate_hz: f64) -> usize {
    let raw = window_s * sample_rate_hz;
    let k = ((raw - 1.0) / 2.0).round().max(0.0) as usize;
    2 * k + 1
}

/// Subtract the moving-average baseline (window rounded to the nearest odd
/// sample count) from the signal.
pub fn detrend(signal: &TimeSeries, baseline_window_s: f64) -> Result<TimeSeries> {
    let fs = signal.sample_rate_hz();
    if !baseline_window_s.is_finite() || baseline_window_s * fs < 3.0 {
        return Err(Error::InvalidParameter(format!(
            "baseline window of {baseline_window_s} s spans fewer than 3 samples at {fs} Hz"
        )));
    }
    let window = odd_window_len(baseline_window_s, fs);
    if window > signal.len() {
        return Err(Error::InvalidParameter(format!(
            "baseline window of {window} samples exceeds signal length {}",
            signal.len()
        )));
    }
    let baseline = moving_average(signal, window)?;
    let out = signal
        .samples()
        .iter()
        .zip(baseline.samples())
        .map(|(x, b)| x - b)
        .collect();
    Ok(signal.derived(out))
}

// ---------------------------------------------------------------------------
// Peak finding
// ---------------------------------------------------------------------------

/// Find local maxima with topographic prominence >= `min_prominence`,
/// greedily kept in descending prominence order subject to pairwise spacing
/// of at least `min_distance_s * sample_rate_hz` samples.
///
/// Plateau maxima report their leftmost sample. Samples on the signal
/// boundary are never peaks, so a constant signal yields an empty list.
pub fn find_peaks(
    signal: &TimeSeries,
    min_distance_s: f64,
    min_prominence: f64,
) -> Result<PeakList> {
    if !min_distance_s.is_finite() || min_distance_s < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "min_distance_s must be >= 0, got {min_distance_s}"
        )));
    }
    if !min_prominence.is_finite() || min_prominence < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "min_prominence must be >= 0, got {min_prominence}"
        )));
    }
    let x = signal.samples();
    let n = x.len();
    let mut candidates: Vec<(usize, f64)> = Vec::new();
    let mut i = 1;
    while n >= 2 && i < n - 1 {
        if x[i] > x[i - 1] {
            // Walk the plateau of equal values starting at i.
            let mut j = i;
            while j + 1 < n && x[j + 1] == x[i] {
                j += 1;
            }
            if j + 1 < n && x[j + 1] < x[i] {
                let p = prominence(x, i);
                if p >= min_prominence {
                    candidates.push((i, p));
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }

    // Greedy selection: highest prominence first, leftmost on ties.
    candidates.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.cmp(&b.0))
    });
    let min_dist = min_distance_s * signal.sample_rate_hz();
    let mut kept = std::collections::BTreeSet::new();
    for (idx, _) in candidates {
        let left_ok = kept
            .range(..idx)
            .next_back()
            .is_none_or(|&k| (idx - k) as f64 >= min_dist);
        let right_ok = kept
            .range(idx..)
            .next()
            .is_none_or(|&k| (k - idx) as f64 >= min_dist);
        if left_ok && right_ok {
            kept.insert(idx);
        }
    }
    PeakList::new(kept.into_iter().collect(), n, signal.sample_rate_hz())
}

/// Topographic prominence: height above the higher of the two flanking
/// minima found before a strictly higher sample (or the signal border)
/// is reached on each side.
fn prominence(x: &[f64], peak: usize) -> f64 {
    let h = x[peak];
    let mut left_min = h;
    let mut j = peak;
    while j > 0 {
        j -= 1;
        if x[j] > h {
            break;
        }
        if x[j] < left_min {
            left_min = x[j];
        }
    }
    let mut right_min = h;
    let mut j = peak;
    while j + 1 < x.len() {
        j += 1;
        if x[j] > h {
            break;
        }
        if x[j] < right_min {
            right_min = x[j];
        }
    }
    h - left_min.max(right_min)
}
