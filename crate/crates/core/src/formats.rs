//! Plain-text document formats for persisted pipeline data.
//!
//! All documents are line-oriented UTF-8 with a `<name> v1` header line.
//! Floating-point values are written with Rust's shortest round-trip
//! formatting, so writing and re-parsing a document reproduces the original
//! values bit for bit. Lines starting with `#` are comments and ignored by
//! the parsers.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::saliency::{FusionState, InterestPoint};
use crate::segmentation::SegmentationMap;
use crate::session::SessionStep;

fn doc_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Document {
        line,
        reason: reason.into(),
    }
}

/// Splits the value part off a `key value...` line, requiring `key`.
fn expect_key<'a>(line: &'a str, key: &str, lineno: usize) -> Result<&'a str> {
    let rest = line
        .strip_prefix(key)
        .ok_or_else(|| doc_err(lineno, format!("expected `{key}`, found `{line}`")))?;
    if rest.is_empty() {
        return Err(doc_err(lineno, format!("`{key}` line has no value")));
    }
    if !rest.starts_with(char::is_whitespace) {
        return Err(doc_err(lineno, format!("expected `{key}`, found `{line}`")));
    }
    Ok(rest.trim_start())
}

fn parse_num<T: std::str::FromStr>(token: &str, what: &str, lineno: usize) -> Result<T> {
    token
        .parse()
        .map_err(|_| doc_err(lineno, format!("cannot parse `{token}` as {what}")))
}

fn parse_f64_list(rest: &str, expected: usize, what: &str, lineno: usize) -> Result<Vec<f64>> {
    let values: Vec<f64> = rest
        .split_whitespace()
        .map(|tok| parse_num(tok, "a number", lineno))
        .collect::<Result<_>>()?;
    if values.len() != expected {
        return Err(doc_err(
            lineno,
            format!("{what} lists {} values, expected {expected}", values.len()),
        ));
    }
    Ok(values)
}

/// Serializes a fusion state to its text document.
pub fn write_fusion_state(state: &FusionState) -> String {
    let mut out = String::new();
    out.push_str("fusionstate v1\n");
    let _ = writeln!(out, "n_features {}", state.n_features());
    let _ = writeln!(out, "eta {}", state.eta());
    let _ = writeln!(out, "epsilon {}", state.epsilon());
    let _ = writeln!(out, "frames_processed {}", state.frames_processed());
    out.push_str("weights");
    for w in state.weights() {
        let _ = write!(out, " {w}");
    }
    out.push('\n');
    out.push_str("mean_activation_ema");
    for m in state.mean_activation_ema() {
        let _ = write!(out, " {m}");
    }
    out.push('\n');
    out
}

/// Parses a fusion state document, revalidating every state invariant.
pub fn parse_fusion_state(text: &str) -> Result<FusionState> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    let mut next_line = |key: Option<&str>| -> Result<(usize, String)> {
        match lines.next() {
            Some((n, l)) => Ok((n, l.to_string())),
            None => Err(doc_err(
                0,
                match key {
                    Some(k) => format!("document ends before `{k}` line"),
                    None => "document is empty".to_string(),
                },
            )),
        }
    };

    let (n, header) = next_line(None)?;
    if header != "fusionstate v1" {
        return Err(doc_err(
            n,
            format!("expected `fusionstate v1`, found `{header}`"),
        ));
    }
    let (n, line) = next_line(Some("n_features"))?;
    let n_features: usize = parse_num(expect_key(&line, "n_features", n)?, "a count", n)?;
    let (n, line) = next_line(Some("eta"))?;
    let eta: f64 = parse_num(expect_key(&line, "eta", n)?, "a number", n)?;
    let (n, line) = next_line(Some("epsilon"))?;
    let epsilon: f64 = parse_num(expect_key(&line, "epsilon", n)?, "a number", n)?;
    let (n, line) = next_line(Some("frames_processed"))?;
    let frames: u64 = parse_num(expect_key(&line, "frames_processed", n)?, "a count", n)?;
    let (n, line) = next_line(Some("weights"))?;
    let weights = parse_f64_list(expect_key(&line, "weights", n)?, n_features, "weights", n)?;
    let (n, line) = next_line(Some("mean_activation_ema"))?;
    let ema = parse_f64_list(
        expect_key(&line, "mean_activation_ema", n)?,
        n_features,
        "mean_activation_ema",
        n,
    )?;
    let last = n;
    if let Some((n, l)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(doc_err(n, format!("unexpected trailing content `{l}`")));
    }

    FusionState::from_parts(weights, ema, eta, epsilon, frames)
        .map_err(|e| doc_err(last, e.to_string()))
}

/// Serializes ranked interest points to their text document.
pub fn write_points(points: &[InterestPoint]) -> String {
    let mut out = String::from("points v1\n# columns: x y score rank\n");
    for p in points {
        let _ = writeln!(out, "{} {} {} {}", p.x, p.y, p.score, p.rank);
    }
    out
}

/// Parses an interest-point document.
pub fn parse_points(text: &str) -> Result<Vec<InterestPoint>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.trim().is_empty());
    let (n, header) = lines
        .next()
        .ok_or_else(|| doc_err(0, "document is empty"))?;
    if header != "points v1" {
        return Err(doc_err(
            n,
            format!("expected `points v1`, found `{header}`"),
        ));
    }
    let mut points = Vec::new();
    for (n, line) in lines {
        if line.trim_start().starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 4 {
            return Err(doc_err(
                n,
                format!("expected 4 columns, found {}", tokens.len()),
            ));
        }
        let x: u32 = parse_num(tokens[0], "a pixel coordinate", n)?;
        let y: u32 = parse_num(tokens[1], "a pixel coordinate", n)?;
        let score: f64 = parse_num(tokens[2], "a number", n)?;
        let rank: u32 = parse_num(tokens[3], "a rank", n)?;
        if !score.is_finite() {
            return Err(doc_err(n, format!("score `{score}` is not finite")));
        }
        if rank as usize != points.len() {
            return Err(doc_err(
                n,
                format!("rank {rank} out of order, expected {}", points.len()),
            ));
        }
        points.push(InterestPoint { x, y, score, rank });
    }
    Ok(points)
}

/// One parsed line of a trajectory document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRecord {
    pub step: usize,
    pub pan: f64,
    pub tilt: f64,
    /// Fixation pixel location and score, when the step fixated.
    pub fixation: Option<(u32, u32, f64)>,
}

/// Serializes session steps to a trajectory document.
pub fn write_trajectory(steps: &[SessionStep]) -> String {
    let mut out = String::from("trajectory v1\n# columns: step pan tilt fix_x fix_y score\n");
    for step in steps {
        let _ = write!(out, "{} {} {}", step.index, step.pose.pan, step.pose.tilt);
        match &step.chosen {
            Some((f, score)) => {
                let _ = writeln!(out, " {} {} {}", f.x, f.y, score);
            }
            None => out.push_str(" - - -\n"),
        }
    }
    out
}

/// Parses a trajectory document.
pub fn parse_trajectory(text: &str) -> Result<Vec<TrajectoryRecord>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.trim().is_empty());
    let (n, header) = lines
        .next()
        .ok_or_else(|| doc_err(0, "document is empty"))?;
    if header != "trajectory v1" {
        return Err(doc_err(
            n,
            format!("expected `trajectory v1`, found `{header}`"),
        ));
    }
    let mut records = Vec::new();
    for (n, line) in lines {
        if line.trim_start().starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 6 {
            return Err(doc_err(
                n,
                format!("expected 6 columns, found {}", tokens.len()),
            ));
        }
        let step: usize = parse_num(tokens[0], "a step index", n)?;
        let pan: f64 = parse_num(tokens[1], "a number", n)?;
        let tilt: f64 = parse_num(tokens[2], "a number", n)?;
        let fixation = match (tokens[3], tokens[4], tokens[5]) {
            ("-", "-", "-") => None,
            ("-", _, _) | (_, "-", _) | (_, _, "-") => {
                return Err(doc_err(n, "fixation columns must all be set or all `-`"));
            }
            (fx, fy, fs) => Some((
                parse_num(fx, "a pixel coordinate", n)?,
                parse_num(fy, "a pixel coordinate", n)?,
                parse_num(fs, "a number", n)?,
            )),
        };
        records.push(TrajectoryRecord {
            step,
            pan,
            tilt,
            fixation,
        });
    }
    Ok(records)
}

/// Serializes a segmentation's class intervals and region table.
pub fn write_region_table(seg: &SegmentationMap) -> String {
    let mut out = String::from("regions v1\n");
    let _ = writeln!(out, "source {}", seg.source().name());
    for (idx, interval) in seg.class_bounds().iter().enumerate() {
        let _ = writeln!(out, "class {idx} {} {}", interval.lo, interval.hi);
    }
    for (label, region) in seg.regions().iter().enumerate() {
        let _ = writeln!(out, "region {label} {} {}", region.class_id, region.area);
    }
    out
}

/// Region labels narrowed to 16 bits for image export.
pub fn labels_u16(seg: &SegmentationMap) -> Result<Vec<u16>> {
    let count = seg.regions().len();
    if count > usize::from(u16::MAX) + 1 {
        return Err(Error::TooManyRegions { count });
    }
    Ok(seg.labels().iter().map(|&l| l as u16).collect())
}
