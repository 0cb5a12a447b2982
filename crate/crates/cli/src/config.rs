//! Runtime tuning, merged from defaults, an optional config file, and
//! command-line flags (later sources win).

use std::path::Path;

use clap::Args;
use saccade::{FusionState, PipelineParams, SegmentationParams, SessionParams};

use crate::error::{CliError, Result};

/// Every tunable the commands accept.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub q_levels: usize,
    pub offsets: Vec<(i32, i32)>,
    pub peak_frac: f64,
    pub min_separation: usize,
    pub min_region_area: usize,
    pub k_points: usize,
    pub suppression_radius: f64,
    pub min_score: f64,
    pub eta: f64,
    pub epsilon: f64,
    pub window: (u32, u32),
    pub px_per_degree: f64,
    pub inhibition_radius: f64,
    pub max_steps: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let seg = SegmentationParams::default();
        let pipe = PipelineParams::default();
        let session = SessionParams::default();
        Self {
            q_levels: seg.q_levels,
            offsets: seg.offsets,
            peak_frac: seg.peak_frac,
            min_separation: seg.min_separation,
            min_region_area: seg.min_region_area,
            k_points: pipe.k_points,
            suppression_radius: pipe.suppression_radius,
            min_score: pipe.min_score,
            eta: FusionState::DEFAULT_ETA,
            epsilon: FusionState::DEFAULT_EPSILON,
            window: session.window,
            px_per_degree: session.px_per_degree,
            inhibition_radius: session.inhibition_radius,
            max_steps: session.max_steps,
        }
    }
}

/// Optional per-field overrides exposed as command-line flags.
#[derive(Debug, Clone, Default, Args)]
pub struct TuningArgs {
    /// Quantization levels for co-occurrence segmentation.
    #[arg(long)]
    pub q_levels: Option<usize>,
    /// Co-occurrence offsets, e.g. "1,0;0,1".
    #[arg(long)]
    pub offsets: Option<String>,
    /// Fraction of the strongest diagonal peak a class peak must reach.
    #[arg(long)]
    pub peak_frac: Option<f64>,
    /// Minimum level separation between class peaks.
    #[arg(long)]
    pub min_separation: Option<usize>,
    /// Regions smaller than this are merged into a neighbor.
    #[arg(long)]
    pub min_region_area: Option<usize>,
    /// Maximum interest points extracted per frame.
    #[arg(long)]
    pub k_points: Option<usize>,
    /// Exclusion radius between interest points, in pixels.
    #[arg(long)]
    pub suppression_radius: Option<f64>,
    /// Minimum interest value for a pixel to become a point.
    #[arg(long)]
    pub min_score: Option<f64>,
    /// Habituation rate of the fusion weights.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Weight floor of the fusion update.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Session capture window, e.g. "160x120".
    #[arg(long)]
    pub window: Option<String>,
    /// Mosaic pixels per degree of camera rotation.
    #[arg(long)]
    pub px_per_degree: Option<f64>,
    /// Minimum distance between session fixations, in mosaic pixels.
    #[arg(long)]
    pub inhibition_radius: Option<f64>,
    /// Session step limit.
    #[arg(long)]
    pub max_steps: Option<usize>,
}

fn parse_offsets(text: &str, context: &str) -> Result<Vec<(i32, i32)>> {
    let mut offsets = Vec::new();
    for part in text.split(';') {
        let part = part.trim();
        let (a, b) = part.split_once(',').ok_or_else(|| {
            CliError::Config(format!("{context}: offset `{part}` is not `dx,dy`"))
        })?;
        let dx = a
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{context}: `{a}` is not an integer offset")))?;
        let dy = b
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{context}: `{b}` is not an integer offset")))?;
        offsets.push((dx, dy));
    }
    Ok(offsets)
}

fn parse_window(text: &str, context: &str) -> Result<(u32, u32)> {
    let (w, h) = text
        .split_once('x')
        .ok_or_else(|| CliError::Config(format!("{context}: window `{text}` is not `WxH`")))?;
    let w = w
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{context}: `{w}` is not a window width")))?;
    let h = h
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{context}: `{h}` is not a window height")))?;
    Ok((w, h))
}

impl RunConfig {
    /// Defaults, overlaid with the config file (if any), overlaid with flags.
    pub fn resolve(config_path: Option<&Path>, args: &TuningArgs) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = config_path {
            let text = std::fs::read_to_string(path)?;
            cfg.apply_file(&text, &path.display().to_string())?;
        }
        cfg.apply_args(args)?;
        Ok(cfg)
    }

    fn apply_file(&mut self, text: &str, source: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let context = format!("{source}:{}", idx + 1);
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("{context}: expected `key = value`, found `{line}`"))
            })?;
            self.apply_pair(key.trim(), value.trim(), &context)?;
        }
        Ok(())
    }

    fn apply_pair(&mut self, key: &str, value: &str, context: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(value: &str, key: &str, context: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| CliError::Config(format!("{context}: `{value}` is not a valid {key}")))
        }
        match key {
            "q_levels" => self.q_levels = num(value, key, context)?,
            "offsets" => self.offsets = parse_offsets(value, context)?,
            "peak_frac" => self.peak_frac = num(value, key, context)?,
            "min_separation" => self.min_separation = num(value, key, context)?,
            "min_region_area" => self.min_region_area = num(value, key, context)?,
            "k_points" => self.k_points = num(value, key, context)?,
            "suppression_radius" => self.suppression_radius = num(value, key, context)?,
            "min_score" => self.min_score = num(value, key, context)?,
            "eta" => self.eta = num(value, key, context)?,
            "epsilon" => self.epsilon = num(value, key, context)?,
            "window" => self.window = parse_window(value, context)?,
            "px_per_degree" => self.px_per_degree = num(value, key, context)?,
            "inhibition_radius" => self.inhibition_radius = num(value, key, context)?,
            "max_steps" => self.max_steps = num(value, key, context)?,
            other => {
                return Err(CliError::Config(format!(
                    "{context}: unknown key `{other}`"
                )));
            }
        }
        Ok(())
    }

    fn apply_args(&mut self, args: &TuningArgs) -> Result<()> {
        if let Some(v) = args.q_levels {
            self.q_levels = v;
        }
        if let Some(text) = &args.offsets {
            self.offsets = parse_offsets(text, "--offsets")?;
        }
        if let Some(v) = args.peak_frac {
            self.peak_frac = v;
        }
        if let Some(v) = args.min_separation {
            self.min_separation = v;
        }
        if let Some(v) = args.min_region_area {
            self.min_region_area = v;
        }
        if let Some(v) = args.k_points {
            self.k_points = v;
        }
        if let Some(v) = args.suppression_radius {
            self.suppression_radius = v;
        }
        if let Some(v) = args.min_score {
            self.min_score = v;
        }
        if let Some(v) = args.eta {
            self.eta = v;
        }
        if let Some(v) = args.epsilon {
            self.epsilon = v;
        }
        if let Some(text) = &args.window {
            self.window = parse_window(text, "--window")?;
        }
        if let Some(v) = args.px_per_degree {
            self.px_per_degree = v;
        }
        if let Some(v) = args.inhibition_radius {
            self.inhibition_radius = v;
        }
        if let Some(v) = args.max_steps {
            self.max_steps = v;
        }
        Ok(())
    }

    pub fn segmentation_params(&self) -> SegmentationParams {
        SegmentationParams {
            q_levels: self.q_levels,
            offsets: self.offsets.clone(),
            peak_frac: self.peak_frac,
            min_separation: self.min_separation,
            min_region_area: self.min_region_area,
        }
    }

    pub fn pipeline_params(&self) -> PipelineParams {
        PipelineParams {
            segmentation: self.segmentation_params(),
            k_points: self.k_points,
            suppression_radius: self.suppression_radius,
            min_score: self.min_score,
        }
    }

    pub fn session_params(&self) -> SessionParams {
        SessionParams {
            window: self.window,
            px_per_degree: self.px_per_degree,
            inhibition_radius: self.inhibition_radius,
            max_steps: self.max_steps,
            eta: self.eta,
            epsilon: self.epsilon,
            pipeline: self.pipeline_params(),
            ..SessionParams::default()
        }
    }
}
