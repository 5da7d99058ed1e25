//! File formats: signal CSV, study CSV and the raw-frame archive.
//!
//! Signal CSV carries a mandatory `# sample_rate_hz=<f>` comment and a
//! `t_s,value` or `value` header; values are written with nine significant
//! digits, which round-trips bit-stably through parse-and-rewrite. A frame
//! archive is a directory holding `meta.json` plus one raw planar RGB file
//! per frame in index order.

use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error as DomainError;
use crate::garment::ConditionCode;
use crate::ippg::FrameSequence;
use crate::signal::TimeSeries;
use crate::stats::{Measure, StudyTable};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("io: {0}")]
    Io(std::io::Error),
    #[error("parse: {0}")]
    Parse(String),
    #[error("{0}")]
    Domain(DomainError),
}

impl From<std::io::Error> for IoError {
    fn from(err: std::io::Error) -> Self {
        IoError::Io(err)
    }
}

impl From<DomainError> for IoError {
    fn from(err: DomainError) -> Self {
        IoError::Domain(err)
    }
}

pub type IoResult<T> = std::result::Result<T, IoError>;

fn parse_err(msg: impl Into<String>) -> IoError {
    IoError::Parse(msg.into())
}

// ---------------------------------------------------------------------------
// Signal CSV
// ---------------------------------------------------------------------------

/// Render a sample value with nine significant digits.
fn format_value(v: f64) -> String {
    format!("{v:.8e}")
}

pub fn write_signal_csv(mut w: impl Write, ts: &TimeSeries) -> IoResult<()> {
    writeln!(w, "# sample_rate_hz={}", ts.sample_rate_hz())?;
    if let Some(label) = ts.label() {
        writeln!(w, "# label={label}")?;
    }
    writeln!(w, "t_s,value")?;
    let fs = ts.sample_rate_hz();
    for (i, &v) in ts.samples().iter().enumerate() {
        writeln!(w, "{:.6},{}", i as f64 / fs, format_value(v))?;
    }
    Ok(())
}

pub fn write_signal_csv_file(path: impl AsRef<Path>, ts: &TimeSeries) -> IoResult<()> {
    let mut file = std::io::BufWriter::new(fs::File::create(path)?);
    write_signal_csv(&mut file, ts)?;
    file.flush()?;
    Ok(())
}

pub fn read_signal_csv(r: impl BufRead) -> IoResult<TimeSeries> {
    let mut sample_rate: Option<f64> = None;
    let mut label: Option<String> = None;
    let mut has_time_column: Option<bool> = None;
    let mut samples = Vec::new();

    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                match key.trim() {
                    "sample_rate_hz" => {
                        let fs: f64 = value.trim().parse().map_err(|_| {
                            parse_err(format!("line {}: bad sample rate {value:?}", lineno + 1))
                        })?;
                        sample_rate = Some(fs);
                    }
                    "label" => label = Some(value.trim().to_string()),
                    _ => {}
                }
            }
            continue;
        }
        match has_time_column {
            None => {
                has_time_column = match line {
                    "t_s,value" => Some(true),
                    "value" => Some(false),
                    other => {
                        return Err(parse_err(format!(
                            "line {}: expected header 't_s,value' or 'value', found {other:?}",
                            lineno + 1
                        )))
                    }
                };
            }
            Some(with_time) => {
                let field = if with_time {
                    line.split_once(',')
                        .ok_or_else(|| {
                            parse_err(format!("line {}: expected 't,value' row", lineno + 1))
                        })?
                        .1
                } else {
                    line
                };
                let v: f64 = field.trim().parse().map_err(|_| {
                    parse_err(format!("line {}: bad sample value {field:?}", lineno + 1))
                })?;
                samples.push(v);
            }
        }
    }

    let fs = sample_rate.ok_or_else(|| parse_err("missing '# sample_rate_hz=' comment"))?;
    if has_time_column.is_none() {
        return Err(parse_err("missing 't_s,value' or 'value' header"));
    }
    let ts = match label {
        Some(l) => TimeSeries::with_label(samples, fs, l),
        None => TimeSeries::new(samples, fs),
    };
    ts.map_err(|e| parse_err(format!("invalid signal: {e}")))
}

pub fn read_signal_csv_file(path: impl AsRef<Path>) -> IoResult<TimeSeries> {
    read_signal_csv(std::io::BufReader::new(fs::File::open(path)?))
}

// ---------------------------------------------------------------------------
// Study CSV
// ---------------------------------------------------------------------------

pub fn write_study_csv(mut w: impl Write, table: &StudyTable) -> IoResult<()> {
    writeln!(w, "# measure={}", table.measure().short())?;
    writeln!(w, "subject,PLF,PTF,CLF,CTF")?;
    for (i, id) in table.subject_ids().iter().enumerate() {
        write!(w, "{id}")?;
        for code in ConditionCode::ALL {
            write!(w, ",{}", table.column(code)[i])?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn read_study_csv(r: impl BufRead) -> IoResult<StudyTable> {
    let mut measure: Option<Measure> = None;
    let mut header_seen = false;
    let mut subject_ids = Vec::new();
    let mut columns: [Vec<f64>; 4] = Default::default();

    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "measure" {
                    measure = Some(Measure::from_short(value).ok_or_else(|| {
                        parse_err(format!("line {}: measure must be hr or rr", lineno + 1))
                    })?);
                }
            }
            continue;
        }
        if !header_seen {
            if line != "subject,PLF,PTF,CLF,CTF" {
                return Err(parse_err(format!(
                    "line {}: expected header 'subject,PLF,PTF,CLF,CTF', found {line:?}",
                    lineno + 1
                )));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(parse_err(format!(
                "line {}: expected 5 fields, found {}",
                lineno + 1,
                fields.len()
            )));
        }
        subject_ids.push(fields[0].trim().to_string());
        for (c, field) in fields[1..].iter().enumerate() {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("line {}: bad rate value {field:?}", lineno + 1)))?;
            columns[c].push(v);
        }
    }

    if !header_seen {
        return Err(parse_err("missing 'subject,PLF,PTF,CLF,CTF' header"));
    }
    let measure = measure.ok_or_else(|| parse_err("missing '# measure=hr|rr' comment"))?;
    StudyTable::new(subject_ids, columns, measure)
        .map_err(|e| parse_err(format!("invalid study table: {e}")))
}

pub fn read_study_csv_file(path: impl AsRef<Path>) -> IoResult<StudyTable> {
    read_study_csv(std::io::BufReader::new(fs::File::open(path)?))
}

// ---------------------------------------------------------------------------
// Frame archive
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct ArchiveMeta {
    width: usize,
    height: usize,
    fps: f64,
    frame_count: usize,
}

fn frame_file_name(index: usize) -> String {
    format!("frame_{index:06}.rgb")
}

/// Write a frame sequence as `meta.json` plus raw planar RGB frame files.
pub fn write_frame_archive(dir: impl AsRef<Path>, frames: &FrameSequence) -> IoResult<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let meta = ArchiveMeta {
        width: frames.width(),
        height: frames.height(),
        fps: frames.fps(),
        frame_count: frames.frame_count(),
    };
    fs::write(
        dir.join("meta.json"),
        serde_json::to_vec_pretty(&meta).expect("meta serializes"),
    )?;
    for i in 0..frames.frame_count() {
        fs::write(dir.join(frame_file_name(i)), frames.frame(i))?;
    }
    Ok(())
}

/// Read a frame archive back, validating the frame count and sizes
/// declared by `meta.json`.
pub fn read_frame_archive(dir: impl AsRef<Path>) -> IoResult<FrameSequence> {
    let dir = dir.as_ref();
    let meta_path = dir.join("meta.json");
    if !meta_path.exists() {
        return Err(parse_err(format!("missing meta.json in {}", dir.display())));
    }
    let meta: ArchiveMeta = serde_json::from_slice(&fs::read(&meta_path)?)
        .map_err(|e| parse_err(format!("bad meta.json: {e}")))?;
    let expected_len = 3 * meta.width * meta.height;
    let mut frames = Vec::with_capacity(meta.frame_count);
    for i in 0..meta.frame_count {
        let path = dir.join(frame_file_name(i));
        let data = fs::read(&path)
            .map_err(|e| parse_err(format!("missing frame {}: {e}", path.display())))?;
        if data.len() != expected_len {
            return Err(parse_err(format!(
                "frame {i} has {} bytes, expected {expected_len}",
                data.len()
            )));
        }
        frames.push(data);
    }
    FrameSequence::new(meta.width, meta.height, meta.fps, frames)
        .map_err(|e| parse_err(format!("invalid archive: {e}")))
}
