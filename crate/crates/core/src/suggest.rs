//! Deterministic garment fabric/fit suggestions from comfort parameters,
//! ambient context and an emotion score, backed by a read-only literature
//! knowledge base.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::garment::{Fabric, Fit};
use crate::vitals::RateEstimate;

/// Wearer activity level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activity {
    Rest,
    Moderate,
    Intense,
}

/// Ambient and usage context for a suggestion.
#[derive(Debug, Clone, PartialEq)]
pub struct ComfortContext {
    pub temperature_c: f64,
    pub humidity_pct: f64,
    pub activity: Activity,
    pub wear_duration_h: f64,
}

impl ComfortContext {
    pub fn new(
        temperature_c: f64,
        humidity_pct: f64,
        activity: Activity,
        wear_duration_h: f64,
    ) -> Result<Self> {
        if !temperature_c.is_finite() || !(-40.0..=60.0).contains(&temperature_c) {
            return Err(Error::InvalidParameter(format!(
                "temperature {temperature_c} C outside [-40, 60]"
            )));
        }
        if !humidity_pct.is_finite() || !(0.0..=100.0).contains(&humidity_pct) {
            return Err(Error::InvalidParameter(format!(
                "humidity {humidity_pct}% outside [0, 100]"
            )));
        }
        if !wear_duration_h.is_finite() || wear_duration_h < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "wear duration {wear_duration_h} h must be >= 0"
            )));
        }
        Ok(Self {
            temperature_c,
            humidity_pct,
            activity,
            wear_duration_h,
        })
    }
}

/// Measured comfort parameters, optionally with a resting heart-rate
/// baseline for elevation checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ComfortReading {
    hr: RateEstimate,
    rr: RateEstimate,
    hr_baseline: Option<f64>,
}

const HR_WINDOW: (f64, f64) = (30.0, 180.0);
const RR_WINDOW: (f64, f64) = (6.0, 30.0);

impl ComfortReading {
    pub fn new(hr: RateEstimate, rr: RateEstimate, hr_baseline: Option<f64>) -> Result<Self> {
        let hr_rate = hr.rate_per_min();
        if hr_rate < HR_WINDOW.0 || hr_rate > HR_WINDOW.1 {
            return Err(Error::InvalidParameter(format!(
                "heart rate {hr_rate:.1} outside [{}, {}]",
                HR_WINDOW.0, HR_WINDOW.1
            )));
        }
        let rr_rate = rr.rate_per_min();
        if rr_rate < RR_WINDOW.0 || rr_rate > RR_WINDOW.1 {
            return Err(Error::InvalidParameter(format!(
                "respiration rate {rr_rate:.1} outside [{}, {}]",
                RR_WINDOW.0, RR_WINDOW.1
            )));
        }
        if let Some(b) = hr_baseline {
            if !b.is_finite() || b <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "heart-rate baseline {b} must be a positive number"
                )));
            }
        }
        Ok(Self {
            hr,
            rr,
            hr_baseline,
        })
    }

    pub fn hr(&self) -> &RateEstimate {
        &self.hr
    }

    pub fn rr(&self) -> &RateEstimate {
        &self.rr
    }

    pub fn hr_baseline(&self) -> Option<f64> {
        self.hr_baseline
    }
}

/// Positive emotion vocabulary items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PositiveItem {
    Soft,
    Comfortable,
    Relaxed,
}

/// Negative emotion vocabulary items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NegativeItem {
    Stiff,
    Itchy,
    Annoyed,
}

/// Checked emotion items from the post-wear survey. The positive and
/// negative vocabularies are disjoint by construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmotionResponse {
    pub positive_items: BTreeSet<PositiveItem>,
    pub negative_items: BTreeSet<NegativeItem>,
}

/// (|positive| - |negative|) / 3, in [-1, 1].
pub fn emotion_score(response: &EmotionResponse) -> f64 {
    (response.positive_items.len() as f64 - response.negative_items.len() as f64) / 3.0
}

/// A fabric/fit suggestion with the rule that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Suggestion {
    pub fabric: Fabric,
    pub fit: Fit,
    pub rule_id: String,
    pub rationale: String,
}

/// Rule identifiers of the ordered decision table, first match wins.
/// R4 is total, so every valid input yields a suggestion.
pub const RULE_IDS: [&str; 4] = ["R1", "R2", "R3", "R4"];

/// Heart rate elevated at least this fraction over the resting baseline
/// counts as exertion.
pub const HR_ELEVATION_THRESHOLD: f64 = 0.20;

/// Emotion score at or below this triggers the tight-fit override.
pub const EMOTION_OVERRIDE_THRESHOLD: f64 = -1.0 / 3.0;

/// Apply the ordered rule table:
///
/// * R1 - intense activity, or heart rate >= 20% over baseline:
///   polyester blend, loose (moisture management under exertion).
/// * R2 - at least 30 C and 50% humidity: polyester blend, loose.
/// * R3 - rest or moderate activity below 30 C: cotton blend, loose.
/// * R4 - default: cotton blend, loose.
///
/// When the emotion score is <= -1/3 and the matched rule chose a tight
/// fit, the fit is overridden to loose and the override is recorded in
/// the rationale.
pub fn suggest_garment(
    reading: &ComfortReading,
    ctx: &ComfortContext,
    emotion: Option<f64>,
) -> Result<Suggestion> {
    if let Some(e) = emotion {
        if !e.is_finite() || !(-1.0..=1.0).contains(&e) {
            return Err(Error::InvalidParameter(format!(
                "emotion score {e} outside [-1, 1]"
            )));
        }
    }

    let hr_elevated = reading.hr_baseline().is_some_and(|baseline| {
        reading.hr().rate_per_min() >= (1.0 + HR_ELEVATION_THRESHOLD) * baseline
    });

    let mut suggestion = if ctx.activity == Activity::Intense || hr_elevated {
        Suggestion {
            fabric: Fabric::PolyesterBlend,
            fit: Fit::Loose,
            rule_id: "R1".into(),
            rationale: "exertion detected; low-moisture-regain polyester dries fastest \
                        (knowledge base: 100% polyester (low moisture regain) -> heart rate High)"
                .into(),
        }
    } else if ctx.temperature_c >= 30.0 && ctx.humidity_pct >= 50.0 {
        Suggestion {
            fabric: Fabric::PolyesterBlend,
            fit: Fit::Loose,
            rule_id: "R2".into(),
            rationale: "hot and humid conditions favor a wicking synthetic \
                        (knowledge base: Wool + cotton (high moisture regain) at 30C/50%)"
                .into(),
        }
    } else if ctx.activity != Activity::Intense && ctx.temperature_c < 30.0 {
        Suggestion {
            fabric: Fabric::CottonBlend,
            fit: Fit::Loose,
            rule_id: "R3".into(),
            rationale: "breathable natural fiber and loose fit for resting wear \
                        (knowledge base: 100% cotton -> heart rate Low)"
                .into(),
        }
    } else {
        Suggestion {
            fabric: Fabric::CottonBlend,
            fit: Fit::Loose,
            rule_id: "R4".into(),
            rationale: "default: breathable natural fiber, loose fit \
                        (knowledge base: Hydrophilic Cotton -> heart rate Low)"
                .into(),
        }
    };

    if let Some(e) = emotion {
        if e <= EMOTION_OVERRIDE_THRESHOLD && suggestion.fit == Fit::Tight {
            suggestion.fit = Fit::Loose;
            suggestion
                .rationale
                .push_str("; negative emotional response overrode the tight fit to loose");
        }
    }
    Ok(suggestion)
}

// ---------------------------------------------------------------------------
// Knowledge base
// ---------------------------------------------------------------------------

/// Qualitative heart-rate level reported by the literature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HeartRateLevel {
    Low,
    High,
}

/// One literature row relating a fabric type to comfort parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KnowledgeRow {
    pub fabric: &'static str,
    pub heart_rate: HeartRateLevel,
    pub temperature: Option<&'static str>,
    pub humidity: Option<&'static str>,
    pub source: &'static str,
}

use HeartRateLevel::{High, Low};

const KNOWLEDGE_ROWS: [KnowledgeRow; 13] = [
    KnowledgeRow {
        fabric: "Hydrophilic Cotton",
        heart_rate: Low,
        temperature: None,
        humidity: None,
        source: "(Liya et al. 2007)",
    },
    KnowledgeRow {
        fabric: "Moisture Management Cotton",
        heart_rate: High,
        temperature: None,
        humidity: None,
        source: "(Liya et al. 2007)",
    },
    KnowledgeRow {
        fabric: "100% cotton",
        heart_rate: Low,
        temperature: Some("High"),
        humidity: Some("High"),
        source: "(Liya et al. 2007)",
    },
    KnowledgeRow {
        fabric: "13.7% viscose 86.3% polyester",
        heart_rate: High,
        temperature: Some("High"),
        humidity: Some("High"),
        source: "(Parvari, Aghaei et al. 2015)",
    },
    KnowledgeRow {
        fabric: "30.2% cotton, 69.8% polyester",
        heart_rate: Low,
        temperature: Some("High"),
        humidity: Some("Low"),
        source: "(Parvari, Aghaei et al. 2015)",
    },
    KnowledgeRow {
        fabric: "13.7% viscose 86.3% polyester",
        heart_rate: High,
        temperature: Some("High"),
        humidity: Some("Low"),
        source: "(Parvari, Aghaei et al. 2015)",
    },
    KnowledgeRow {
        fabric: "100% polyester (low moisture regain)",
        heart_rate: High,
        temperature: None,
        humidity: None,
        source: "(Kwon, Kato et al. 1998)",
    },
    KnowledgeRow {
        fabric: "Wool + cotton (high moisture regain)",
        heart_rate: Low,
        temperature: Some("30C"),
        humidity: Some("50%"),
        source: "(Kwon, Kato et al. 1998)",
    },
    KnowledgeRow {
        fabric: "100% cotton (moderate moisture regain)",
        heart_rate: Low,
        temperature: None,
        humidity: None,
        source: "(Kwon, Kato et al. 1998)",
    },
    KnowledgeRow {
        fabric: "65% polyester, 35% cotton",
        heart_rate: Low,
        temperature: None,
        humidity: None,
        source: "(Li, Keighley et al. 1988)",
    },
    KnowledgeRow {
        fabric: "100% polyester",
        heart_rate: High,
        temperature: None,
        humidity: None,
        source: "(Li, Keighley et al. 1988)",
    },
    KnowledgeRow {
        fabric: "Experimental Clothing- Under Armor",
        heart_rate: Low,
        temperature: None,
        humidity: None,
        source: "(Wickwire, Bishop et al. 2007)",
    },
    KnowledgeRow {
        fabric: "Cotton",
        heart_rate: High,
        temperature: None,
        humidity: None,
        source: "(Wickwire, Bishop et al. 2007)",
    },
];

/// The embedded, read-only fabric/comfort knowledge base.
pub fn knowledge_rows() -> &'static [KnowledgeRow] {
    &KNOWLEDGE_ROWS
}
