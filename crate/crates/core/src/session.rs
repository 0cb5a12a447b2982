//! Simulated pan-tilt camera sessions over a large mosaic image.
//!
//! A session owns a mosaic, a camera pose, and a persistent fusion state.
//! Each step captures the window the camera currently sees, runs the full
//! analysis pipeline on it, and either slews toward the best novel interest
//! point or — when nothing novel qualifies — advances along a raster scan
//! pattern. Previously fixated locations inhibit re-selection, so the camera
//! keeps exploring instead of staring at the same spot.

use crate::error::{Error, Result};
use crate::pipeline::{pipeline, PipelineParams, N_FEATURES};
use crate::raster::{FeatureMap, Image, MIN_DIM};
use crate::saliency::FusionState;

/// Mechanical travel limits of the simulated mount, in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanTiltLimits {
    pub pan_min: f64,
    pub pan_max: f64,
    pub tilt_min: f64,
    pub tilt_max: f64,
}

impl Default for PanTiltLimits {
    fn default() -> Self {
        Self {
            pan_min: -180.0,
            pan_max: 180.0,
            tilt_min: -90.0,
            tilt_max: 90.0,
        }
    }
}

impl PanTiltLimits {
    fn valid(&self) -> bool {
        self.pan_min.is_finite()
            && self.pan_max.is_finite()
            && self.tilt_min.is_finite()
            && self.tilt_max.is_finite()
            && self.pan_min <= self.pan_max
            && self.tilt_min <= self.tilt_max
    }

    fn clamp_pose(&self, pose: PanTiltPose) -> PanTiltPose {
        PanTiltPose {
            pan: pose.pan.clamp(self.pan_min, self.pan_max),
            tilt: pose.tilt.clamp(self.tilt_min, self.tilt_max),
        }
    }
}

/// Camera orientation in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PanTiltPose {
    pub pan: f64,
    pub tilt: f64,
}

/// A location the camera has fixated, in mosaic pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fixation {
    pub x: u32,
    pub y: u32,
    /// Zero-based index of the step that produced this fixation.
    pub step: usize,
}

/// Configuration of a simulated session.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionParams {
    /// Capture window size (width, height) in mosaic pixels.
    pub window: (u32, u32),
    /// Mosaic pixels swept per degree of camera rotation.
    pub px_per_degree: f64,
    /// Minimum mosaic-pixel distance between a new fixation and all earlier
    /// ones.
    pub inhibition_radius: f64,
    /// Maximum number of steps the session may take.
    pub max_steps: usize,
    pub limits: PanTiltLimits,
    /// Habituation rate of the fusion state created for the session.
    pub eta: f64,
    /// Weight floor of the fusion state created for the session.
    pub epsilon: f64,
    pub pipeline: PipelineParams,
}

impl Default for SessionParams {
    fn default() -> Self {
        Self {
            window: (160, 120),
            px_per_degree: 10.0,
            inhibition_radius: 40.0,
            max_steps: 20,
            limits: PanTiltLimits::default(),
            eta: FusionState::DEFAULT_ETA,
            epsilon: FusionState::DEFAULT_EPSILON,
            pipeline: PipelineParams::default(),
        }
    }
}

/// Everything a single session step produced.
#[derive(Debug, Clone)]
pub struct SessionStep {
    /// Zero-based step index.
    pub index: usize,
    /// Camera pose after the step's motion.
    pub pose: PanTiltPose,
    /// Top-left mosaic coordinate of the captured window.
    pub crop_origin: (u32, u32),
    /// The fixation made this step with its interest score, if any point
    /// qualified.
    pub chosen: Option<(Fixation, f64)>,
    /// Interest map of the captured window.
    pub interest: FeatureMap,
}

/// Live state of a session.
#[derive(Debug, Clone)]
pub struct SessionState {
    mosaic: Image,
    params: SessionParams,
    pose: PanTiltPose,
    fusion: FusionState,
    fixations: Vec<Fixation>,
    steps_taken: usize,
}

/// A completed session: final state plus the per-step record.
#[derive(Debug, Clone)]
pub struct SessionRun {
    pub state: SessionState,
    pub steps: Vec<SessionStep>,
}

impl SessionState {
    /// Creates a session over `mosaic`, aimed straight ahead (pan 0, tilt 0,
    /// clamped into the travel limits).
    pub fn new(mosaic: Image, params: SessionParams) -> Result<Self> {
        let (ww, wh) = params.window;
        if ww < MIN_DIM || wh < MIN_DIM {
            return Err(Error::InvalidParameter {
                name: "window",
                reason: format!("{ww}x{wh} is below the {MIN_DIM}x{MIN_DIM} minimum"),
            });
        }
        if ww > mosaic.width() || wh > mosaic.height() {
            return Err(Error::MosaicTooSmall {
                mosaic_w: mosaic.width(),
                mosaic_h: mosaic.height(),
                window_w: ww,
                window_h: wh,
            });
        }
        if !(params.px_per_degree > 0.0 && params.px_per_degree.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "px_per_degree",
                reason: format!("{} is not a positive finite value", params.px_per_degree),
            });
        }
        if !(params.inhibition_radius >= 0.0 && params.inhibition_radius.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "inhibition_radius",
                reason: format!(
                    "{} is not a non-negative finite value",
                    params.inhibition_radius
                ),
            });
        }
        if !params.limits.valid() {
            return Err(Error::InvalidParameter {
                name: "limits",
                reason: "pan/tilt limits must be finite and ordered".into(),
            });
        }
        let fusion = FusionState::with_rates(N_FEATURES, params.eta, params.epsilon)?;
        let pose = params.limits.clamp_pose(PanTiltPose::default());
        Ok(Self {
            mosaic,
            params,
            pose,
            fusion,
            fixations: Vec::new(),
            steps_taken: 0,
        })
    }

    pub fn mosaic(&self) -> &Image {
        &self.mosaic
    }

    pub fn params(&self) -> &SessionParams {
        &self.params
    }

    pub fn pose(&self) -> PanTiltPose {
        self.pose
    }

    pub fn fusion(&self) -> &FusionState {
        &self.fusion
    }

    pub fn fixations(&self) -> &[Fixation] {
        &self.fixations
    }

    pub fn steps_taken(&self) -> usize {
        self.steps_taken
    }

    /// Top-left corner of the window the camera currently sees.
    ///
    /// The window is centered on the point the pose aims at — mosaic center
    /// plus `pose * px_per_degree` — rounded to the nearest pixel and clamped
    /// so the window stays inside the mosaic.
    pub fn capture_origin(&self) -> (u32, u32) {
        let (ww, wh) = self.params.window;
        let rho = self.params.px_per_degree;
        let aim_x = f64::from(self.mosaic.width()) / 2.0 + self.pose.pan * rho;
        let aim_y = f64::from(self.mosaic.height()) / 2.0 + self.pose.tilt * rho;
        let max_left = f64::from(self.mosaic.width() - ww);
        let max_top = f64::from(self.mosaic.height() - wh);
        let left = (aim_x - f64::from(ww) / 2.0).round().clamp(0.0, max_left);
        let top = (aim_y - f64::from(wh) / 2.0).round().clamp(0.0, max_top);
        (left as u32, top as u32)
    }

    /// The frame the camera currently sees.
    pub fn capture(&self) -> Image {
        let (left, top) = self.capture_origin();
        let (ww, wh) = self.params.window;
        self.mosaic
            .crop(left, top, ww, wh)
            .expect("clamped origin keeps the window inside the mosaic")
    }
}

/// Angular turn that re-centers the window on pixel (x, y) of the current
/// window.
pub(crate) fn slew_delta(x: u32, y: u32, window: (u32, u32), px_per_degree: f64) -> (f64, f64) {
    let dpan = (f64::from(x) - f64::from(window.0) / 2.0) / px_per_degree;
    let dtilt = (f64::from(y) - f64::from(window.1) / 2.0) / px_per_degree;
    (dpan, dtilt)
}

/// Runs one step of the session.
///
/// Captures the current window, runs the pipeline, and picks the
/// highest-ranked interest point whose mosaic location is farther than
/// `inhibition_radius` from every earlier fixation. If one exists, the
/// camera slews toward it and the location is recorded as a new fixation;
/// otherwise the camera advances one window width along a raster scan,
/// wrapping pan (and stepping tilt by one window height) at the travel
/// limits.
pub fn session_step(state: &mut SessionState) -> Result<SessionStep> {
    if state.steps_taken >= state.params.max_steps {
        return Err(Error::StepLimit {
            max_steps: state.params.max_steps,
        });
    }
    let index = state.steps_taken;
    let origin = state.capture_origin();
    let frame = state.capture();

    let out = pipeline(&frame, &state.fusion, &state.params.pipeline)?;
    state.fusion = out.state;

    let radius = state.params.inhibition_radius;
    let chosen = out.points.iter().find_map(|p| {
        let mx = origin.0 + p.x;
        let my = origin.1 + p.y;
        let novel = state.fixations.iter().all(|f| {
            let dx = f64::from(f.x) - f64::from(mx);
            let dy = f64::from(f.y) - f64::from(my);
            (dx * dx + dy * dy).sqrt() > radius
        });
        novel.then_some((mx, my, p.x, p.y, p.score))
    });

    match chosen {
        Some((mx, my, wx, wy, _)) => {
            let (dpan, dtilt) = slew_delta(wx, wy, state.params.window, state.params.px_per_degree);
            state.pose = state.params.limits.clamp_pose(PanTiltPose {
                pan: state.pose.pan + dpan,
                tilt: state.pose.tilt + dtilt,
            });
            state.fixations.push(Fixation {
                x: mx,
                y: my,
                step: index,
            });
        }
        None => {
            let rho = state.params.px_per_degree;
            let limits = state.params.limits;
            let mut pan = state.pose.pan + f64::from(state.params.window.0) / rho;
            let mut tilt = state.pose.tilt;
            if pan > limits.pan_max {
                pan = limits.pan_min;
                tilt += f64::from(state.params.window.1) / rho;
                if tilt > limits.tilt_max {
                    tilt = limits.tilt_min;
                }
            }
            state.pose = PanTiltPose { pan, tilt };
        }
    }
    state.steps_taken += 1;

    Ok(SessionStep {
        index,
        pose: state.pose,
        crop_origin: origin,
        chosen: chosen.map(|(mx, my, _, _, score)| {
            (
                Fixation {
                    x: mx,
                    y: my,
                    step: index,
                },
                score,
            )
        }),
        interest: out.interest,
    })
}

/// Runs the session to its step limit and returns the full record.
pub fn run_session(mut state: SessionState) -> Result<SessionRun> {
    let mut steps =
        Vec::with_capacity(state.params.max_steps - state.steps_taken.min(state.params.max_steps));
    while state.steps_taken < state.params.max_steps {
        steps.push(session_step(&mut state)?);
    }
    Ok(SessionRun { state, steps })
}
