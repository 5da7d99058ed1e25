//! Synthetic ECG, respiration and camera-frame generators with known
//! ground-truth rates. These are the independent oracles for the
//! round-trip tests of the estimation pipelines.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::ippg::FrameSequence;
use crate::signal::TimeSeries;

/// Parameters for a synthetic periodic signal.
#[derive(Debug, Clone, Copy)]
pub struct SynthSpec {
    /// Target rate in events per minute (bpm or breaths/min).
    pub rate_per_min: f64,
    pub duration_s: f64,
    pub sample_rate_hz: f64,
    /// RMS of additive white Gaussian noise, relative to unit amplitude.
    pub noise_rms: f64,
    /// Amplitude of the sinusoidal baseline drift.
    pub baseline_drift_amp: f64,
}

impl SynthSpec {
    pub fn new(rate_per_min: f64, duration_s: f64, sample_rate_hz: f64) -> Self {
        Self {
            rate_per_min,
            duration_s,
            sample_rate_hz,
            noise_rms: 0.0,
            baseline_drift_amp: 0.0,
        }
    }

    pub fn noise(mut self, noise_rms: f64) -> Self {
        self.noise_rms = noise_rms;
        self
    }

    pub fn drift(mut self, amplitude: f64) -> Self {
        self.baseline_drift_amp = amplitude;
        self
    }

    fn validate(&self) -> Result<()> {
        let all = [
            self.rate_per_min,
            self.duration_s,
            self.sample_rate_hz,
            self.noise_rms,
            self.baseline_drift_amp,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("spec values must be finite".into()));
        }
        if self.rate_per_min <= 0.0 || self.duration_s <= 0.0 || self.sample_rate_hz <= 0.0 {
            return Err(Error::InvalidParameter(
                "rate, duration and sample rate must be positive".into(),
            ));
        }
        if self.noise_rms < 0.0 || self.baseline_drift_amp < 0.0 {
            return Err(Error::InvalidParameter(
                "noise_rms and baseline_drift_amp must be >= 0".into(),
            ));
        }
        if self.rate_per_min * self.duration_s / 60.0 < 3.0 {
            return Err(Error::InvalidParameter(format!(
                "{} per minute over {} s yields fewer than 3 events",
                self.rate_per_min, self.duration_s
            )));
        }
        Ok(())
    }

    fn sample_count(&self) -> usize {
        (self.duration_s * self.sample_rate_hz).round() as usize
    }
}

// ECG template: three Gaussians per beat with amplitudes, centers and
// widths expressed as fractions of the beat period. The P and T humps stay
// well below half the R amplitude, so the peak pipeline's prominence gate
// rejects them even when the beat at the signal edge has no detectable R.
const ECG_WAVES: [(f64, f64, f64); 3] = [
    (0.10, -0.20, 0.030), // P
    (1.00, 0.00, 0.020),  // R
    (0.15, 0.20, 0.040),  // T
];
const ECG_DRIFT_HZ: f64 = 0.2;
const RESP_DRIFT_HZ: f64 = 0.02;

/// Synthetic single-lead ECG: a periodic P-QRS-T-like template with unit
/// R amplitude, seeded Gaussian noise and sinusoidal baseline drift.
/// R-wave instants land on integer-rounded multiples of the beat period.
pub fn synth_ecg(spec: &SynthSpec, seed: u64) -> Result<TimeSeries> {
    spec.validate()?;
    if spec.sample_rate_hz < 100.0 {
        return Err(Error::InvalidParameter(format!(
            "ECG synthesis needs sample_rate_hz >= 100, got {}",
            spec.sample_rate_hz
        )));
    }
    let n = spec.sample_count();
    let period = 60.0 / spec.rate_per_min * spec.sample_rate_hz; // samples
    let mut samples = vec![0.0f64; n];
    let mut beat = 0usize;
    loop {
        let center = (beat as f64 * period).round();
        if center >= n as f64 {
            break;
        }
        for &(amp, offset, width) in &ECG_WAVES {
            add_gaussian(&mut samples, center + offset * period, amp, width * period);
        }
        beat += 1;
    }
    add_noise_and_drift(&mut samples, spec, ECG_DRIFT_HZ, seed);
    TimeSeries::with_label(samples, spec.sample_rate_hz, "ecg")
}

/// Synthetic respiration-band signal: a unit-amplitude sinusoid at
/// `rate_per_min / 60` Hz plus noise and drift.
pub fn synth_resp(spec: &SynthSpec, seed: u64) -> Result<TimeSeries> {
    spec.validate()?;
    let n = spec.sample_count();
    let freq = spec.rate_per_min / 60.0;
    let mut samples: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / spec.sample_rate_hz;
            (2.0 * std::f64::consts::PI * freq * t).sin()
        })
        .collect();
    add_noise_and_drift(&mut samples, spec, RESP_DRIFT_HZ, seed);
    TimeSeries::with_label(samples, spec.sample_rate_hz, "resp")
}

fn add_gaussian(samples: &mut [f64], center: f64, amp: f64, sigma: f64) {
    let reach = (4.0 * sigma).ceil();
    let lo = ((center - reach).floor().max(0.0)) as usize;
    let hi = ((center + reach).ceil().min(samples.len() as f64 - 1.0)) as usize;
    if lo > hi {
        return;
    }
    for (i, v) in samples.iter_mut().enumerate().take(hi + 1).skip(lo) {
        let d = (i as f64 - center) / sigma;
        *v += amp * (-0.5 * d * d).exp();
    }
}

fn add_noise_and_drift(samples: &mut [f64], spec: &SynthSpec, drift_hz: f64, seed: u64) {
    if spec.noise_rms > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, spec.noise_rms).expect("validated noise level");
        for v in samples.iter_mut() {
            *v += normal.sample(&mut rng);
        }
    }
    if spec.baseline_drift_amp > 0.0 {
        for (i, v) in samples.iter_mut().enumerate() {
            let t = i as f64 / spec.sample_rate_hz;
            *v += spec.baseline_drift_amp * (2.0 * std::f64::consts::PI * drift_hz * t).sin();
        }
    }
}

// Frame generator constants: green baseline, cardiac and respiratory
// modulation depths (gray levels), constant red/blue fill. The two depths
// are kept equal so neither band swamps the other after band separation.
const FRAME_GREEN_BASE: f64 = 128.0;
const FRAME_CARDIAC_AMP: f64 = 3.0;
const FRAME_RESP_AMP: f64 = 3.0;
const FRAME_RED: u8 = 100;
const FRAME_BLUE: u8 = 90;

/// Synthetic RGB frame sequence whose green channel carries a cardiac
/// oscillation at `hr_bpm` and a respiratory baseline modulation at
/// `rr_per_min`; red and blue are constant.
///
/// A fixed per-pixel sub-level dither is added before quantization so the
/// spatial mean over any region recovers the modulation with sub-gray
/// resolution. The generator is fully deterministic.
pub fn synth_frames(
    hr_bpm: f64,
    rr_per_min: f64,
    fps: f64,
    duration_s: f64,
    width: usize,
    height: usize,
) -> Result<FrameSequence> {
    if [hr_bpm, rr_per_min, fps, duration_s]
        .iter()
        .any(|v| !v.is_finite())
    {
        return Err(Error::InvalidParameter(
            "frame parameters must be finite".into(),
        ));
    }
    if fps < 15.0 {
        return Err(Error::InvalidParameter(format!(
            "fps must be >= 15, got {fps}"
        )));
    }
    if duration_s < 10.0 {
        return Err(Error::InvalidParameter(format!(
            "duration must be >= 10 s, got {duration_s}"
        )));
    }
    if hr_bpm <= 0.0 || hr_bpm / 60.0 >= fps / 2.0 {
        return Err(Error::InvalidParameter(format!(
            "hr {hr_bpm} bpm must be positive and below the Nyquist rate at {fps} fps"
        )));
    }
    if rr_per_min <= 0.0 || rr_per_min / 60.0 >= fps / 2.0 {
        return Err(Error::InvalidParameter(format!(
            "rr {rr_per_min} must be positive and below the Nyquist rate at {fps} fps"
        )));
    }
    if width == 0 || height == 0 {
        return Err(Error::InvalidParameter(
            "frame dimensions must be positive".into(),
        ));
    }

    let n_frames = (duration_s * fps).round() as usize;
    let n_pixels = width * height;
    // Golden-ratio low-discrepancy dither in [-0.5, 0.5), fixed per pixel.
    let dither: Vec<f64> = (0..n_pixels)
        .map(|p| ((p as f64 + 1.0) * 0.618_033_988_749_894_9).fract() - 0.5)
        .collect();

    let mut frames = Vec::with_capacity(n_frames);
    for f in 0..n_frames {
        let t = f as f64 / fps;
        let green = FRAME_GREEN_BASE
            + FRAME_CARDIAC_AMP * (2.0 * std::f64::consts::PI * hr_bpm / 60.0 * t).sin()
            + FRAME_RESP_AMP * (2.0 * std::f64::consts::PI * rr_per_min / 60.0 * t).sin();
        let mut data = vec![0u8; 3 * n_pixels];
        data[..n_pixels].fill(FRAME_RED);
        for p in 0..n_pixels {
            data[n_pixels + p] = (green + dither[p]).round().clamp(0.0, 255.0) as u8;
        }
        data[2 * n_pixels..].fill(FRAME_BLUE);
        frames.push(data);
    }
    FrameSequence::new(width, height, fps, frames)
}
