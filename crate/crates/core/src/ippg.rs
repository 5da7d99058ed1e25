//! Contact-free comfort-parameter acquisition: reduce an RGB frame
//! sequence to an imaging photoplethysmogram (ROI mean of the green
//! channel) and estimate heart and respiration rates from it.

use crate::error::{Error, Result};
use crate::signal::{detrend, find_peaks, low_pass, moving_average, odd_window_len, TimeSeries};
use crate::vitals::{rate_from_peaks, respiration_rate, robust_amplitude, RateEstimate};

/// A sequence of equally sized RGB frames in planar layout
/// (all red bytes, then all green, then all blue).
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence {
    width: usize,
    height: usize,
    fps: f64,
    frames: Vec<Vec<u8>>,
}

impl FrameSequence {
    pub fn new(width: usize, height: usize, fps: f64, frames: Vec<Vec<u8>>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(
                "frame dimensions must be positive".into(),
            ));
        }
        if !fps.is_finite() || fps <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "fps must be finite and positive, got {fps}"
            )));
        }
        let expected = 3 * width * height;
        if let Some(i) = frames.iter().position(|f| f.len() != expected) {
            return Err(Error::InvalidParameter(format!(
                "frame {i} has {} bytes, expected {expected}",
                frames[i].len()
            )));
        }
        Ok(Self {
            width,
            height,
            fps,
            frames,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn fps(&self) -> f64 {
        self.fps
    }

    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    /// Raw planar bytes of one frame.
    pub fn frame(&self, index: usize) -> &[u8] {
        &self.frames[index]
    }

    fn green_plane(&self, index: usize) -> &[u8] {
        let n = self.width * self.height;
        &self.frames[index][n..2 * n]
    }
}

/// A pixel rectangle inside a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Roi {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

const MIN_ROI_PIXELS: usize = 16;

impl Roi {
    pub fn new(x: usize, y: usize, w: usize, h: usize) -> Self {
        Self { x, y, w, h }
    }

    /// Centered rectangle of 40% width x 30% height, the default when the
    /// caller supplies no region.
    pub fn default_for(frame_width: usize, frame_height: usize) -> Self {
        let w = ((frame_width as f64 * 0.4).round() as usize).max(1);
        let h = ((frame_height as f64 * 0.3).round() as usize).max(1);
        Self {
            x: (frame_width - w) / 2,
            y: (frame_height - h) / 2,
            w,
            h,
        }
    }

    fn validate_in(&self, frame_width: usize, frame_height: usize) -> Result<()> {
        if self.w * self.h < MIN_ROI_PIXELS {
            return Err(Error::InvalidRoi(format!(
                "ROI area {} px is below the {MIN_ROI_PIXELS} px minimum",
                self.w * self.h
            )));
        }
        if self.x + self.w > frame_width || self.y + self.h > frame_height {
            return Err(Error::InvalidRoi(format!(
                "ROI {}x{}+{}+{} does not fit a {frame_width}x{frame_height} frame",
                self.w, self.h, self.x, self.y
            )));
        }
        Ok(())
    }
}

/// Reduce a frame sequence to one sample per frame: the spatial mean of
/// the green channel over the ROI. Green bytes are summed as integers, so
/// the reduction is exact and order-independent.
pub fn extract_ippg(frames: &FrameSequence, roi: &Roi) -> Result<TimeSeries> {
    roi.validate_in(frames.width(), frames.height())?;
    if frames.frame_count() < 2 {
        return Err(Error::TooShort(format!(
            "need at least 2 frames, got {}",
            frames.frame_count()
        )));
    }
    let area = (roi.w * roi.h) as f64;
    let mut samples = Vec::with_capacity(frames.frame_count());
    for i in 0..frames.frame_count() {
        let green = frames.green_plane(i);
        let mut sum: u64 = 0;
        for row in roi.y..roi.y + roi.h {
            let start = row * frames.width() + roi.x;
            sum += green[start..start + roi.w]
                .iter()
                .map(|&v| v as u64)
                .sum::<u64>();
        }
        samples.push(sum as f64 / area);
    }
    TimeSeries::with_label(samples, frames.fps(), "ippg")
}

const IPPG_HR_MIN_DURATION_S: f64 = 10.0;
const IPPG_HR_MIN_FPS: f64 = 15.0;
const IPPG_HR_DETREND_WINDOW_S: f64 = 2.0;
const IPPG_HR_LOW_PASS_HZ: f64 = 3.0;
const IPPG_HR_MIN_PEAK_DISTANCE_S: f64 = 0.33;
const IPPG_HR_PROMINENCE_FRACTION: f64 = 0.5;
const IPPG_HR_INTERVAL_WINDOW_S: (f64, f64) = (0.33, 2.0);
const IPPG_HR_RATE_WINDOW: (f64, f64) = (42.0, 180.0);

const IPPG_RR_MIN_DURATION_S: f64 = 30.0;
const IPPG_RR_BASELINE_WINDOW_S: f64 = 2.0;

/// Heart rate from an iPPG series: band-limit to the cardiac band
/// (detrend 2 s + low-pass 3 Hz), then the peak pipeline with a 0.33 s
/// minimum spacing. Results outside 42-180 bpm fail.
pub fn hr_from_ippg(ippg: &TimeSeries) -> Result<RateEstimate> {
    if ippg.sample_rate_hz() < IPPG_HR_MIN_FPS {
        return Err(Error::InvalidParameter(format!(
            "iPPG heart rate needs >= {IPPG_HR_MIN_FPS} fps, got {}",
            ippg.sample_rate_hz()
        )));
    }
    if ippg.duration_s() < IPPG_HR_MIN_DURATION_S {
        return Err(Error::TooShort(format!(
            "iPPG heart rate needs >= {IPPG_HR_MIN_DURATION_S} s, got {:.3} s",
            ippg.duration_s()
        )));
    }
    let detrended = detrend(ippg, IPPG_HR_DETREND_WINDOW_S)?;
    let prominence = IPPG_HR_PROMINENCE_FRACTION * robust_amplitude(detrended.samples());
    let filtered = low_pass(&detrended, IPPG_HR_LOW_PASS_HZ)?;
    let peaks = find_peaks(&filtered, IPPG_HR_MIN_PEAK_DISTANCE_S, prominence)?;
    let estimate = rate_from_peaks(
        &peaks,
        IPPG_HR_INTERVAL_WINDOW_S.0,
        IPPG_HR_INTERVAL_WINDOW_S.1,
    )?;
    let rate = estimate.rate_per_min();
    if rate < IPPG_HR_RATE_WINDOW.0 || rate > IPPG_HR_RATE_WINDOW.1 {
        return Err(Error::EstimationFailed(format!(
            "rate {rate:.2} bpm outside [{}, {}]",
            IPPG_HR_RATE_WINDOW.0, IPPG_HR_RATE_WINDOW.1
        )));
    }
    Ok(estimate)
}

/// Respiration rate from an iPPG series. The respiratory component rides
/// on the iPPG baseline, so the series is first reduced to its 2 s
/// moving-average baseline and then run through the respiration pipeline
/// (0.1-0.5 Hz band, 6-30 breaths/min).
pub fn rr_from_ippg(ippg: &TimeSeries) -> Result<RateEstimate> {
    if ippg.duration_s() < IPPG_RR_MIN_DURATION_S {
        return Err(Error::TooShort(format!(
            "iPPG respiration needs >= {IPPG_RR_MIN_DURATION_S} s, got {:.3} s",
            ippg.duration_s()
        )));
    }
    let window = odd_window_len(IPPG_RR_BASELINE_WINDOW_S, ippg.sample_rate_hz());
    if window > ippg.len() {
        return Err(Error::TooShort(format!(
            "baseline window of {window} samples exceeds {} samples",
            ippg.len()
        )));
    }
    let baseline = moving_average(ippg, window)?;
    respiration_rate(&baseline)
}
