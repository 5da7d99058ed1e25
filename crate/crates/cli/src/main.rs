//! Command-line surface: synthetic signal generation, ECG/respiration/iPPG
//! rate extraction, study-table analysis and garment suggestions.
//!
//! Exit codes: 0 success, 1 usage/IO/parse/invalid-parameter errors,
//! 2 estimation failures (signal readable but no rate could be derived).

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use comfort_core::error::Error as CoreError;
use comfort_core::io;
use comfort_core::ippg::{extract_ippg, hr_from_ippg, rr_from_ippg, Roi};
use comfort_core::stats::{analyze_study, embedded_study_table, Measure, StudyReport};
use comfort_core::suggest::{
    emotion_score, suggest_garment, Activity, ComfortContext, ComfortReading, EmotionResponse,
    NegativeItem, PositiveItem,
};
use comfort_core::synth::{synth_ecg, synth_frames, synth_resp, SynthSpec};
use comfort_core::vitals::{heart_rate_from_ecg, respiration_rate, RateEstimate};
use comfort_core::TimeSeries;

const SEED_ENV: &str = "COMFORT_VITALS_SEED";

#[derive(Parser)]
#[command(
    name = "comfort-vitals",
    version,
    about = "Comfort parameters (heart/respiration rate) from biosignals, study statistics, and garment suggestions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic signals or frame archives with known rates.
    Synth(SynthArgs),
    /// Estimate heart rate from an ECG signal CSV.
    ProcessEcg { path: PathBuf },
    /// Estimate respiration rate from a respiration-band signal CSV.
    ProcessResp { path: PathBuf },
    /// Estimate heart and respiration rate from a frame archive.
    Ippg(IppgArgs),
    /// Descriptive statistics, paired tests and box summaries for a
    /// subjects-by-conditions study table.
    AnalyzeStudy(AnalyzeArgs),
    /// Suggest a garment fabric and fit from context and comfort readings.
    Suggest(SuggestArgs),
}

#[derive(Args)]
struct SynthArgs {
    #[command(subcommand)]
    kind: SynthKind,
}

#[derive(Subcommand)]
enum SynthKind {
    /// Synthetic ECG written as signal CSV.
    Ecg(SignalSynthArgs),
    /// Synthetic respiration-band signal written as signal CSV.
    Resp(SignalSynthArgs),
    /// Synthetic RGB frame archive with cardiac and respiratory modulation.
    Frames(FrameSynthArgs),
}

#[derive(Args)]
struct SignalSynthArgs {
    /// Target rate in events per minute.
    #[arg(long)]
    rate: f64,
    /// Sample rate in Hz.
    #[arg(long, default_value_t = 250.0)]
    fs: f64,
    /// Duration in seconds.
    #[arg(long, default_value_t = 60.0)]
    duration: f64,
    /// Additive white-noise RMS relative to unit amplitude.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Sinusoidal baseline drift amplitude.
    #[arg(long, default_value_t = 0.0)]
    drift: f64,
    /// Generator seed (overridden by COMFORT_VITALS_SEED when set).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FrameSynthArgs {
    #[arg(long)]
    hr: f64,
    #[arg(long)]
    rr: f64,
    #[arg(long, default_value_t = 30.0)]
    fps: f64,
    #[arg(long, default_value_t = 30.0)]
    duration: f64,
    #[arg(long, default_value_t = 64)]
    width: usize,
    #[arg(long, default_value_t = 48)]
    height: usize,
    /// Output archive directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct IppgArgs {
    /// Frame archive directory (meta.json + frame_NNNNNN.rgb files).
    archive: PathBuf,
    /// Region of interest as x,y,w,h (defaults to a centered rectangle
    /// of 40% width x 30% height).
    #[arg(long, value_parser = parse_roi)]
    roi: Option<Roi>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Study CSV path ('# measure=hr|rr' plus subject,PLF,PTF,CLF,CTF rows).
    path: Option<PathBuf>,
    /// Use the embedded replication dataset instead of a file.
    #[arg(long, value_enum, conflicts_with = "path")]
    embedded: Option<MeasureArg>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, ValueEnum)]
enum MeasureArg {
    Hr,
    Rr,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct SuggestArgs {
    /// Ambient temperature in Celsius.
    #[arg(long)]
    temp: f64,
    /// Relative humidity in percent.
    #[arg(long)]
    humidity: f64,
    #[arg(long, value_enum)]
    activity: ActivityArg,
    /// Expected wear duration in hours.
    #[arg(long, default_value_t = 0.0)]
    wear_hours: f64,
    /// Measured heart rate in bpm (default: resting 70).
    #[arg(long)]
    hr: Option<f64>,
    /// Measured respiration rate in breaths/min (default: resting 14).
    #[arg(long)]
    rr: Option<f64>,
    /// Resting heart-rate baseline in bpm for elevation checks.
    #[arg(long)]
    hr_baseline: Option<f64>,
    /// ECG signal CSV; heart rate is estimated from it (overrides --hr).
    #[arg(long)]
    ecg: Option<PathBuf>,
    /// Respiration signal CSV; respiration rate is estimated from it
    /// (overrides --rr).
    #[arg(long)]
    resp: Option<PathBuf>,
    /// Frame archive; heart and respiration rate are both estimated from
    /// its iPPG signal (overrides --hr/--rr and --ecg/--resp).
    #[arg(long)]
    frames: Option<PathBuf>,
    /// Comma-separated positive emotion items: soft,comfortable,relaxed.
    #[arg(long, value_delimiter = ',')]
    positive: Vec<String>,
    /// Comma-separated negative emotion items: stiff,itchy,annoyed.
    #[arg(long, value_delimiter = ',')]
    negative: Vec<String>,
}

#[derive(Copy, Clone, ValueEnum)]
enum ActivityArg {
    Rest,
    Moderate,
    Intense,
}

impl From<ActivityArg> for Activity {
    fn from(a: ActivityArg) -> Self {
        match a {
            ActivityArg::Rest => Activity::Rest,
            ActivityArg::Moderate => Activity::Moderate,
            ActivityArg::Intense => Activity::Intense,
        }
    }
}

fn parse_roi(s: &str) -> Result<Roi, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err("expected x,y,w,h".into());
    }
    let nums: Result<Vec<usize>, _> = parts.iter().map(|p| p.trim().parse()).collect();
    let nums = nums.map_err(|e| format!("bad ROI component: {e}"))?;
    Ok(Roi::new(nums[0], nums[1], nums[2], nums[3]))
}

/// Exit classification: estimation failures are distinguished from
/// usage/parse problems so scripts can tell "bad file" from "bad signal".
fn exit_code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(core) = cause.downcast_ref::<CoreError>() {
            return match core {
                CoreError::TooShort(_)
                | CoreError::InsufficientPeaks(_)
                | CoreError::EstimationFailed(_) => 2,
                _ => 1,
            };
        }
        if let Some(io_err) = cause.downcast_ref::<io::IoError>() {
            if let io::IoError::Domain(core) = io_err {
                return match core {
                    CoreError::TooShort(_)
                    | CoreError::InsufficientPeaks(_)
                    | CoreError::EstimationFailed(_) => 2,
                    _ => 1,
                };
            }
            return 1;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Synth(args) => cmd_synth(args),
        Command::ProcessEcg { path } => cmd_process_signal(path, heart_rate_from_ecg),
        Command::ProcessResp { path } => cmd_process_signal(path, respiration_rate),
        Command::Ippg(args) => cmd_ippg(args),
        Command::AnalyzeStudy(args) => cmd_analyze_study(args),
        Command::Suggest(args) => cmd_suggest(args),
    }
}

fn effective_seed(flag: u64) -> anyhow::Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .with_context(|| format!("{SEED_ENV} must be an unsigned integer, got {text:?}")),
        Err(_) => Ok(flag),
    }
}

fn cmd_synth(args: SynthArgs) -> anyhow::Result<()> {
    match args.kind {
        SynthKind::Ecg(a) => {
            let seed = effective_seed(a.seed)?;
            let spec = SynthSpec::new(a.rate, a.duration, a.fs)
                .noise(a.noise)
                .drift(a.drift);
            let ts = synth_ecg(&spec, seed)?;
            write_signal(&a.out, &ts)
        }
        SynthKind::Resp(a) => {
            let seed = effective_seed(a.seed)?;
            let spec = SynthSpec::new(a.rate, a.duration, a.fs)
                .noise(a.noise)
                .drift(a.drift);
            let ts = synth_resp(&spec, seed)?;
            write_signal(&a.out, &ts)
        }
        SynthKind::Frames(a) => {
            let frames = synth_frames(a.hr, a.rr, a.fps, a.duration, a.width, a.height)?;
            io::write_frame_archive(&a.out, &frames)?;
            eprintln!(
                "wrote {} frames ({}x{} @ {} fps) to {}",
                frames.frame_count(),
                a.width,
                a.height,
                a.fps,
                a.out.display()
            );
            Ok(())
        }
    }
}

fn write_signal(out: &Option<PathBuf>, ts: &TimeSeries) -> anyhow::Result<()> {
    match out {
        Some(path) => io::write_signal_csv_file(path, ts)
            .with_context(|| format!("writing {}", path.display()))?,
        None => io::write_signal_csv(std::io::stdout().lock(), ts)?,
    }
    Ok(())
}

fn rate_json(est: &RateEstimate) -> serde_json::Value {
    serde_json::json!({
        "rate_per_min": est.rate_per_min(),
        "n_peaks": est.n_peaks(),
        "rejected_intervals": est.rejected_intervals(),
    })
}

fn cmd_process_signal(
    path: PathBuf,
    estimator: fn(&TimeSeries) -> comfort_core::Result<RateEstimate>,
) -> anyhow::Result<()> {
    let ts =
        io::read_signal_csv_file(&path).with_context(|| format!("reading {}", path.display()))?;
    let est = estimator(&ts)?;
    println!("{}", serde_json::to_string_pretty(&rate_json(&est))?);
    Ok(())
}

fn cmd_ippg(args: IppgArgs) -> anyhow::Result<()> {
    let frames = io::read_frame_archive(&args.archive)
        .with_context(|| format!("reading archive {}", args.archive.display()))?;
    let roi = args
        .roi
        .unwrap_or_else(|| Roi::default_for(frames.width(), frames.height()));
    let ippg = extract_ippg(&frames, &roi)?;
    let hr = hr_from_ippg(&ippg)?;
    let rr = rr_from_ippg(&ippg)?;
    let report = serde_json::json!({
        "roi": { "x": roi.x, "y": roi.y, "w": roi.w, "h": roi.h },
        "hr": rate_json(&hr),
        "rr": rate_json(&rr),
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn cmd_analyze_study(args: AnalyzeArgs) -> anyhow::Result<()> {
    let table = match (&args.path, args.embedded) {
        (Some(path), None) => {
            io::read_study_csv_file(path).with_context(|| format!("reading {}", path.display()))?
        }
        (None, Some(MeasureArg::Hr)) => embedded_study_table(Measure::HeartRate),
        (None, Some(MeasureArg::Rr)) => embedded_study_table(Measure::RespirationRate),
        _ => return Err(anyhow!("provide a study CSV path or --embedded hr|rr")),
    };
    let report = analyze_study(&table)?;
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Table => print_study_table(&report),
    }
    Ok(())
}

fn print_study_table(report: &StudyReport) {
    println!(
        "measure: {} (n = {})",
        report.measure.short(),
        report.n_subjects
    );
    println!();
    println!(
        "{:<10} {:>9} {:>9} {:>9}",
        "condition", "mean", "std dev", "variance"
    );
    for c in &report.conditions {
        println!(
            "{:<10} {:>9.2} {:>9.2} {:>9.2}",
            c.condition.code(),
            c.descriptives.mean,
            c.descriptives.std_dev,
            c.descriptives.variance
        );
    }
    println!();
    println!(
        "{:<10} {:>11} {:>10} {:>13}  verdict",
        "pair", "pearson r", "t stat", "p (one-tail)"
    );
    for comp in &report.comparisons {
        let pair = format!("{}-{}", comp.left.code(), comp.right.code());
        match (&comp.test, &comp.error) {
            (Some(t), _) => println!(
                "{:<10} {:>11.6} {:>10.5} {:>13.6}  {:?}",
                pair, t.pearson_r, t.t_stat, t.p_one_tail, comp.verdict
            ),
            (None, Some(err)) => println!("{pair:<10} {err}"),
            (None, None) => {}
        }
    }
    println!();
    println!(
        "{:<10} {:>8} {:>8} {:>8} {:>8} {:>8}",
        "condition", "min", "q1", "median", "q3", "max"
    );
    for c in &report.conditions {
        let b = &c.box_summary;
        println!(
            "{:<10} {:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>8.2}",
            c.condition.code(),
            b.min,
            b.q1,
            b.median,
            b.q3,
            b.max
        );
    }
}

fn estimate_from_rate(rate: f64) -> anyhow::Result<RateEstimate> {
    let interval = 60.0 / rate;
    Ok(RateEstimate::from_intervals(
        vec![interval, interval],
        3,
        0,
    )?)
}

fn cmd_suggest(args: SuggestArgs) -> anyhow::Result<()> {
    let ctx = ComfortContext::new(
        args.temp,
        args.humidity,
        args.activity.into(),
        args.wear_hours,
    )?;

    let (hr, rr) = if let Some(dir) = &args.frames {
        let frames = io::read_frame_archive(dir)
            .with_context(|| format!("reading archive {}", dir.display()))?;
        let roi = Roi::default_for(frames.width(), frames.height());
        let ippg = extract_ippg(&frames, &roi)?;
        (hr_from_ippg(&ippg)?, rr_from_ippg(&ippg)?)
    } else {
        let hr = match &args.ecg {
            Some(path) => {
                let ts = io::read_signal_csv_file(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                heart_rate_from_ecg(&ts)?
            }
            None => estimate_from_rate(args.hr.unwrap_or(70.0))?,
        };
        let rr = match &args.resp {
            Some(path) => {
                let ts = io::read_signal_csv_file(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                respiration_rate(&ts)?
            }
            None => estimate_from_rate(args.rr.unwrap_or(14.0))?,
        };
        (hr, rr)
    };
    let reading = ComfortReading::new(hr, rr, args.hr_baseline)?;

    let emotion = if args.positive.is_empty() && args.negative.is_empty() {
        None
    } else {
        let mut response = EmotionResponse::default();
        for item in &args.positive {
            response.positive_items.insert(parse_positive(item)?);
        }
        for item in &args.negative {
            response.negative_items.insert(parse_negative(item)?);
        }
        Some(emotion_score(&response))
    };

    let suggestion = suggest_garment(&reading, &ctx, emotion)?;
    println!("{}", serde_json::to_string_pretty(&suggestion)?);
    Ok(())
}

fn parse_positive(s: &str) -> anyhow::Result<PositiveItem> {
    match s.trim().to_ascii_lowercase().as_str() {
        "soft" => Ok(PositiveItem::Soft),
        "comfortable" => Ok(PositiveItem::Comfortable),
        "relaxed" => Ok(PositiveItem::Relaxed),
        other => Err(anyhow!(
            "unknown positive item {other:?} (expected soft, comfortable or relaxed)"
        )),
    }
}

fn parse_negative(s: &str) -> anyhow::Result<NegativeItem> {
    match s.trim().to_ascii_lowercase().as_str() {
        "stiff" => Ok(NegativeItem::Stiff),
        "itchy" => Ok(NegativeItem::Itchy),
        "annoyed" => Ok(NegativeItem::Annoyed),
        other => Err(anyhow!(
            "unknown negative item {other:?} (expected stiff, itchy or annoyed)"
        )),
    }
}
