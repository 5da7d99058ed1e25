//! Study statistics: descriptive summaries, Pearson correlation, paired
//! and pooled two-sample t-tests, Student-t tail probabilities, and the
//! subjects-by-conditions study analysis with its embedded dataset.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::garment::ConditionCode;

/// Which comfort parameter a study table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    HeartRate,
    RespirationRate,
}

impl Measure {
    pub fn short(&self) -> &'static str {
        match self {
            Measure::HeartRate => "hr",
            Measure::RespirationRate => "rr",
        }
    }

    pub fn from_short(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hr" => Some(Measure::HeartRate),
            "rr" => Some(Measure::RespirationRate),
            _ => None,
        }
    }
}

/// Subjects x four-garment-conditions matrix of per-minute rates.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyTable {
    subject_ids: Vec<String>,
    columns: [Vec<f64>; 4],
    measure: Measure,
}

impl StudyTable {
    pub fn new(subject_ids: Vec<String>, columns: [Vec<f64>; 4], measure: Measure) -> Result<Self> {
        let n = subject_ids.len();
        if n < 2 {
            return Err(Error::InsufficientData(format!(
                "need at least 2 subjects, got {n}"
            )));
        }
        for (i, col) in columns.iter().enumerate() {
            if col.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "column {} has {} rows, expected {n}",
                    ConditionCode::ALL[i].code(),
                    col.len()
                )));
            }
            if col.iter().any(|v| !v.is_finite() || *v <= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "column {} contains a non-finite or non-positive rate",
                    ConditionCode::ALL[i].code()
                )));
            }
        }
        Ok(Self {
            subject_ids,
            columns,
            measure,
        })
    }

    pub fn subject_ids(&self) -> &[String] {
        &self.subject_ids
    }

    pub fn column(&self, condition: ConditionCode) -> &[f64] {
        &self.columns[condition.index()]
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn n_subjects(&self) -> usize {
        self.subject_ids.len()
    }
}

/// Mean, sample standard deviation and sample variance (divisor n-1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Descriptives {
    pub mean: f64,
    pub std_dev: f64,
    pub variance: f64,
}

pub fn descriptive(column: &[f64]) -> Result<Descriptives> {
    if column.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "descriptive statistics need at least 2 values, got {}",
            column.len()
        )));
    }
    let n = column.len() as f64;
    let mean = column.iter().sum::<f64>() / n;
    let variance = column.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok(Descriptives {
        mean,
        std_dev: variance.sqrt(),
        variance,
    })
}

/// Sample Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "pearson needs equal lengths >= 2, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateInput(
            "pearson is undefined for zero-variance input".into(),
        ));
    }
    Ok(sxy / (sxx.sqrt() * syy.sqrt()))
}

/// Result of a paired t-test between two matched condition columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairedTestResult {
    pub pearson_r: f64,
    pub t_stat: f64,
    pub df: usize,
    pub p_one_tail: f64,
}

/// Paired t-test on elementwise differences x - y, with the one-tail
/// probability beyond |t| and the Pearson correlation of the two columns.
pub fn paired_t_test(x: &[f64], y: &[f64]) -> Result<PairedTestResult> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "paired test needs equal lengths >= 2, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let diffs: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let n = diffs.len() as f64;
    let mean = diffs.iter().sum::<f64>() / n;
    let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1.0);
    if var == 0.0 {
        return Err(Error::DegenerateInput(
            "paired differences have zero variance".into(),
        ));
    }
    let t_stat = mean / (var / n).sqrt();
    let df = diffs.len() - 1;
    Ok(PairedTestResult {
        pearson_r: pearson(x, y)?,
        t_stat,
        df,
        p_one_tail: t_tail_probability(t_stat, df)?,
    })
}

/// Result of the pooled equal-variance two-sample t-test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoSampleTestResult {
    pub t_stat: f64,
    pub df: usize,
    pub p_one_tail: f64,
}

/// Two-sample t-test assuming equal variances (pooled), df = n1 + n2 - 2.
/// Kept alongside the paired test because published significance tables of
/// this kind sometimes follow the pooled variant.
pub fn two_sample_t_test_equal_variance(x: &[f64], y: &[f64]) -> Result<TwoSampleTestResult> {
    if x.len() < 2 || y.len() < 2 {
        return Err(Error::InvalidParameter(
            "two-sample test needs >= 2 values per sample".into(),
        ));
    }
    let dx = descriptive(x)?;
    let dy = descriptive(y)?;
    let (n1, n2) = (x.len() as f64, y.len() as f64);
    let pooled = ((n1 - 1.0) * dx.variance + (n2 - 1.0) * dy.variance) / (n1 + n2 - 2.0);
    if pooled == 0.0 {
        return Err(Error::DegenerateInput(
            "both samples have zero variance".into(),
        ));
    }
    let t_stat = (dx.mean - dy.mean) / (pooled * (1.0 / n1 + 1.0 / n2)).sqrt();
    let df = x.len() + y.len() - 2;
    Ok(TwoSampleTestResult {
        t_stat,
        df,
        p_one_tail: t_tail_probability(t_stat, df)?,
    })
}

/// Five-number summary for a box-whisker plot. Quartiles are the medians
/// of the lower and upper halves, including the overall median in each
/// half when the count is odd (inclusive median-split convention).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxSummary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

pub fn box_summary(column: &[f64]) -> Result<BoxSummary> {
    if column.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "a box summary needs at least 2 values, got {}",
            column.len()
        )));
    }
    let mut sorted = column.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite rates"));
    let n = sorted.len();
    let (lower, upper) = if n % 2 == 1 {
        (&sorted[..n / 2 + 1], &sorted[n / 2..])
    } else {
        (&sorted[..n / 2], &sorted[n / 2..])
    };
    Ok(BoxSummary {
        min: sorted[0],
        q1: median_of_sorted(lower),
        median: median_of_sorted(&sorted),
        q3: median_of_sorted(upper),
        max: sorted[n - 1],
    })
}

fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

// ---------------------------------------------------------------------------
// Student-t tail probability
// ---------------------------------------------------------------------------

/// P(T >= |t|) for Student's t with `df` degrees of freedom, via the
/// regularized incomplete beta function; df = 1 and 2 use their closed
/// forms. Absolute error <= 1e-8 over the tabulated range.
pub fn t_tail_probability(t: f64, df: usize) -> Result<f64> {
    if df < 1 {
        return Err(Error::InvalidParameter("df must be >= 1".into()));
    }
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "t must be finite, got {t}"
        )));
    }
    let t = t.abs();
    let p = match df {
        1 => 0.5 - t.atan() / std::f64::consts::PI,
        2 => 0.5 * (1.0 - t / (2.0 + t * t).sqrt()),
        _ => {
            let dff = df as f64;
            let x = dff / (dff + t * t);
            0.5 * regularized_incomplete_beta(dff / 2.0, 0.5, x)
        }
    };
    Ok(p.clamp(0.0, 1.0))
}

/// Regularized incomplete beta function I_x(a, b), evaluated with the
/// Lentz continued fraction; the symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
/// keeps the fraction in its fast-converging region.
fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let front =
        (a * x.ln() + b * (1.0 - x).ln() + ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b)).exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - ln_gamma_front(a, b, 1.0 - x) * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

fn ln_gamma_front(a: f64, b: f64, x: f64) -> f64 {
    (b * x.ln() + a * (1.0 - x).ln() + ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b)).exp()
}

fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 1e-15;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Lanczos approximation (g = 7, 9 coefficients).
#[allow(clippy::excessive_precision)]
fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507343278686905,
        -0.13857109526572012,
        9.984_369_578_019_572e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // Reflection formula.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, &c) in COEFFS.iter().enumerate() {
        acc += c / (x + i as f64 + 1.0);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

// ---------------------------------------------------------------------------
// Study analysis
// ---------------------------------------------------------------------------

/// Significance level for the per-comparison verdicts.
pub const STUDY_ALPHA: f64 = 0.05;

/// The four pairwise comparisons in reporting order.
pub const COMPARISON_PAIRS: [(ConditionCode, ConditionCode); 4] = [
    (ConditionCode::Plf, ConditionCode::Ptf),
    (ConditionCode::Clf, ConditionCode::Ctf),
    (ConditionCode::Plf, ConditionCode::Clf),
    (ConditionCode::Ptf, ConditionCode::Ctf),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NoSignificantDifference,
    SignificantDifference,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionSummary {
    pub condition: ConditionCode,
    #[serde(flatten)]
    pub descriptives: Descriptives,
    #[serde(rename = "box")]
    pub box_summary: BoxSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub left: ConditionCode,
    pub right: ConditionCode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test: Option<PairedTestResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyReport {
    pub measure: Measure,
    pub n_subjects: usize,
    pub alpha: f64,
    pub conditions: Vec<ConditionSummary>,
    pub comparisons: Vec<ComparisonReport>,
}

impl StudyReport {
    pub fn condition(&self, code: ConditionCode) -> &ConditionSummary {
        &self.conditions[code.index()]
    }

    pub fn comparison(&self, left: ConditionCode, right: ConditionCode) -> &ComparisonReport {
        self.comparisons
            .iter()
            .find(|c| c.left == left && c.right == right)
            .expect("all four comparisons are always present")
    }
}

/// Descriptive statistics, box summaries, and the four paired comparisons
/// (PLF-PTF, CLF-CTF, PLF-CLF, PTF-CTF) with verdicts at alpha = 0.05.
/// Degenerate comparisons (zero-variance differences) are reported inline
/// rather than failing the whole analysis.
pub fn analyze_study(table: &StudyTable) -> Result<StudyReport> {
    let mut conditions = Vec::with_capacity(4);
    for code in ConditionCode::ALL {
        let column = table.column(code);
        conditions.push(ConditionSummary {
            condition: code,
            descriptives: descriptive(column)?,
            box_summary: box_summary(column)?,
        });
    }
    let mut comparisons = Vec::with_capacity(4);
    for (left, right) in COMPARISON_PAIRS {
        let outcome = paired_t_test(table.column(left), table.column(right));
        let report = match outcome {
            Ok(test) => ComparisonReport {
                left,
                right,
                verdict: if test.p_one_tail < STUDY_ALPHA {
                    Verdict::SignificantDifference
                } else {
                    Verdict::NoSignificantDifference
                },
                test: Some(test),
                error: None,
            },
            Err(err @ Error::DegenerateInput(_)) => ComparisonReport {
                left,
                right,
                test: None,
                error: Some(err.to_string()),
                verdict: Verdict::Degenerate,
            },
            Err(other) => return Err(other),
        };
        comparisons.push(report);
    }
    Ok(StudyReport {
        measure: table.measure(),
        n_subjects: table.n_subjects(),
        alpha: STUDY_ALPHA,
        conditions,
        comparisons,
    })
}

// ---------------------------------------------------------------------------
// Embedded replication dataset
// ---------------------------------------------------------------------------

/// Heart rates (bpm) for the eleven subjects under PLF, PTF, CLF, CTF.
pub const EMBEDDED_HR_ROWS: [[f64; 4]; 11] = [
    [67.66, 69.18, 63.73, 68.26],
    [81.26, 79.58, 83.93, 84.16],
    [72.28, 73.84, 72.62, 75.29],
    [94.23, 91.97, 91.97, 88.27],
    [69.81, 70.78, 71.77, 70.78],
    [71.77, 73.14, 74.9, 69.5],
    [92.53, 91.42, 92.53, 90.35],
    [95.4, 94.81, 91.7, 91.97],
    [91.42, 91.42, 91.97, 92.53],
    [80.41, 88.27, 83.02, 77.96],
    [76.8, 77.96, 81.7, 83.25],
];

/// Respiration rates (breaths/min) for the same subjects and conditions.
pub const EMBEDDED_RR_ROWS: [[f64; 4]; 11] = [
    [15.11, 15.05, 15.11, 13.96],
    [14.32, 13.42, 14.54, 14.76],
    [13.33, 15.80, 14.38, 14.06],
    [14.27, 12.26, 14.76, 12.80],
    [14.11, 15.93, 11.36, 14.11],
    [12.26, 12.22, 11.60, 12.84],
    [10.97, 11.63, 11.92, 13.91],
    [14.49, 12.59, 12.54, 14.54],
    [17.61, 13.81, 16.13, 16.99],
    [14.94, 14.11, 13.81, 13.61],
    [16.41, 15.73, 13.61, 16.55],
];

/// The embedded study table for the requested measure.
pub fn embedded_study_table(measure: Measure) -> StudyTable {
    let rows: &[[f64; 4]; 11] = match measure {
        Measure::HeartRate => &EMBEDDED_HR_ROWS,
        Measure::RespirationRate => &EMBEDDED_RR_ROWS,
    };
    let subject_ids = (1..=11).map(|i| format!("sub{i}")).collect();
    let columns = [0, 1, 2, 3].map(|c| rows.iter().map(|r| r[c]).collect::<Vec<f64>>());
    StudyTable::new(subject_ids, columns, measure).expect("embedded dataset is valid")
}
