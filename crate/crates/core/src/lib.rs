//! Physiological comfort parameters from biosignals, and what to wear
//! because of them.
//!
//! The crate extracts heart and respiration rates from ECG, respiration-band
//! and camera-frame (iPPG) recordings via zero-phase preprocessing and
//! peak-to-peak timing, replicates the fabric/fit comfort study statistics
//! over the embedded subjects-by-conditions tables, and emits deterministic
//! garment fabric-and-fit suggestions from comfort parameters, ambient
//! context and emotion scores.

pub mod error;
pub mod garment;
pub mod io;
pub mod ippg;
pub mod signal;
pub mod stats;
pub mod suggest;
pub mod synth;
pub mod vitals;

pub use error::{Error, Result};
pub use garment::{ConditionCode, Fabric, Fit};
pub use ippg::{FrameSequence, Roi};
pub use signal::{PeakList, TimeSeries};
pub use stats::{Measure, StudyReport, StudyTable};
pub use suggest::{Activity, ComfortContext, ComfortReading, EmotionResponse, Suggestion};
pub use synth::SynthSpec;
pub use vitals::RateEstimate;
