//! Domain types shared by every metric module.
//!
//! Constructors validate the invariants of each type, so a value that exists
//! is always usable by the metrics that accept it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the spacing between consecutive timestamps, in seconds.
pub const TIMESTAMP_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(t: f64, x: f64, y: f64) -> Self {
        Point { t, x, y }
    }
}

/// A uniformly sampled planar path in meters.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    points: Vec<Point>,
    rate: f64,
    extrapolated_from: Option<usize>,
}

impl Trajectory {
    /// Builds a trajectory from timestamped points, checking that timestamps
    /// are strictly increasing and uniformly spaced.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TooShort {
                len: points.len(),
                min: 2,
            });
        }
        if let Some(p) = points
            .iter()
            .find(|p| !(p.t.is_finite() && p.x.is_finite() && p.y.is_finite()))
        {
            return Err(Error::Invalid(format!("non-finite trajectory point {p:?}")));
        }
        let n = points.len();
        let dt = (points[n - 1].t - points[0].t) / (n - 1) as f64;
        for (i, w) in points.windows(2).enumerate() {
            let step = w[1].t - w[0].t;
            if step <= 0.0 {
                return Err(Error::Invalid(format!(
                    "timestamps not strictly increasing at index {}",
                    i + 1
                )));
            }
            if (step - dt).abs() > TIMESTAMP_TOLERANCE {
                return Err(Error::Invalid(format!(
                    "non-uniform sampling at index {}: step {step} s, expected {dt} s",
                    i + 1
                )));
            }
        }
        Ok(Trajectory {
            points,
            rate: 1.0 / dt,
            extrapolated_from: None,
        })
    }

    /// Samples `xy` at `rate` Hz starting at t = 0.
    pub fn from_xy(xy: &[(f64, f64)], rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::Invalid(format!("rate must be positive, got {rate}")));
        }
        Self::new(
            xy.iter()
                .enumerate()
                .map(|(i, &(x, y))| Point::new(i as f64 / rate, x, y))
                .collect(),
        )
    }

    pub fn with_extrapolated_from(mut self, index: Option<usize>) -> Result<Self> {
        if let Some(i) = index {
            if i >= self.points.len() {
                return Err(Error::Invalid(format!(
                    "extrapolated_from {i} out of range for {} points",
                    self.points.len()
                )));
            }
        }
        self.extrapolated_from = index;
        Ok(self)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Samples per second.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Sampling interval in seconds.
    pub fn dt(&self) -> f64 {
        (self.points[self.len() - 1].t - self.points[0].t) / (self.len() - 1) as f64
    }

    pub fn extrapolated_from(&self) -> Option<usize> {
        self.extrapolated_from
    }

    pub fn xy(&self) -> impl ExactSizeIterator<Item = (f64, f64)> + '_ {
        self.points.iter().map(|p| (p.x, p.y))
    }

    /// Applies a rigid transform (rotation by `angle` followed by translation).
    pub fn transformed(&self, angle: f64, dx: f64, dy: f64) -> Trajectory {
        let (s, c) = angle.sin_cos();
        Trajectory {
            points: self
                .points
                .iter()
                .map(|p| Point::new(p.t, c * p.x - s * p.y + dx, s * p.x + c * p.y + dy))
                .collect(),
            rate: self.rate,
            extrapolated_from: self.extrapolated_from,
        }
    }
}

/// A set of equal-length real vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingSet {
    dim: usize,
    vectors: Vec<Vec<f64>>,
    labels: Option<Vec<String>>,
}

impl EmbeddingSet {
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let dim = vectors.first().map(Vec::len).unwrap_or(0);
        if vectors.is_empty() || dim == 0 {
            return Err(Error::Invalid("embedding set is empty".into()));
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Invalid("non-finite embedding value".into()));
            }
        }
        Ok(EmbeddingSet {
            dim,
            vectors,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.vectors.len() {
            return Err(Error::Invalid(format!(
                "{} labels for {} vectors",
                labels.len(),
                self.vectors.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
}

/// Frame-mean luminance of one clip.
#[derive(Clone, Debug, PartialEq)]
pub struct LuminanceSeries {
    pub values: Vec<f64>,
    pub rate: f64,
}

impl LuminanceSeries {
    pub fn new(values: Vec<f64>, rate: f64) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!("non-finite luminance {v}")));
        }
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::Invalid(format!("rate must be positive, got {rate}")));
        }
        Ok(LuminanceSeries { values, rate })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameFeature {
    pub frame: usize,
    pub feature: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowSample {
    pub frame: usize,
    pub median_flow: f64,
}

/// Per-frame scene features and per-frame median optical-flow magnitudes.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FrameFeatures {
    pub per_frame: Vec<FrameFeature>,
    pub flow_median: Vec<FlowSample>,
}

impl FrameFeatures {
    pub fn new(per_frame: Vec<FrameFeature>, flow_median: Vec<FlowSample>) -> Result<Self> {
        check_increasing(per_frame.iter().map(|f| f.frame), "frame features")?;
        check_increasing(flow_median.iter().map(|f| f.frame), "flow")?;
        if let Some(first) = per_frame.first() {
            let dim = first.feature.len();
            for f in &per_frame {
                if f.feature.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        actual: f.feature.len(),
                    });
                }
                if f.feature.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Invalid(format!(
                        "non-finite feature at frame {}",
                        f.frame
                    )));
                }
            }
        }
        if let Some(f) = flow_median
            .iter()
            .find(|f| !(f.median_flow.is_finite() && f.median_flow >= 0.0))
        {
            return Err(Error::Invalid(format!(
                "flow magnitude must be finite and >= 0, got {} at frame {}",
                f.median_flow, f.frame
            )));
        }
        Ok(FrameFeatures {
            per_frame,
            flow_median,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Natural,
    Unnatural,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AgentObservation {
    pub frame: usize,
    /// `(x, y, w, h)` in pixels.
    pub bbox: [f64; 4],
    pub feature: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AgentTrack {
    pub agent_id: String,
    pub observations: Vec<AgentObservation>,
    pub verdict: Option<Verdict>,
}

impl AgentTrack {
    pub fn new(
        agent_id: impl Into<String>,
        observations: Vec<AgentObservation>,
        verdict: Option<Verdict>,
    ) -> Result<Self> {
        let agent_id = agent_id.into();
        check_increasing(observations.iter().map(|o| o.frame), "agent observations")?;
        for o in &observations {
            let [_, _, w, h] = o.bbox;
            if !(w > 0.0 && h > 0.0) {
                return Err(Error::Invalid(format!(
                    "agent `{agent_id}` frame {}: box must have positive width and height",
                    o.frame
                )));
            }
        }
        if let Some(first) = observations.first() {
            if observations.iter().any(|o| o.feature.len() != first.feature.len()) {
                return Err(Error::Invalid(format!(
                    "agent `{agent_id}`: feature dimension varies across frames"
                )));
            }
        }
        Ok(AgentTrack {
            agent_id,
            observations,
            verdict,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Track {
    #[serde(alias = "OpenDomain")]
    OpenDomain,
    #[serde(alias = "EgoConditioned")]
    EgoConditioned,
}

impl Track {
    pub fn as_str(&self) -> &'static str {
        match self {
            Track::OpenDomain => "open_domain",
            Track::EgoConditioned => "ego_conditioned",
        }
    }

    pub fn title(&self) -> &'static str {
        match self {
            Track::OpenDomain => "Open-Domain Track",
            Track::EgoConditioned => "Ego-Conditioned Track",
        }
    }
}

impl fmt::Display for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// All artifacts extracted from one generated video.
#[derive(Clone, Debug, PartialEq)]
pub struct VideoRecord {
    pub video_id: String,
    pub model_id: String,
    pub track: Track,
    pub trajectory: Trajectory,
    pub reference_trajectory: Option<Trajectory>,
    pub frame_features: Option<FrameFeatures>,
    pub luminance: Option<LuminanceSeries>,
    pub agents: Vec<AgentTrack>,
    pub video_embedding: Option<Vec<f64>>,
    pub subjective_quality: Option<f64>,
    /// Precomputed trajectory-window embeddings, indexed by window.
    pub window_embeddings: Option<Vec<Vec<f64>>>,
    /// Target length for pose completion when trajectory recovery stopped early.
    pub complete_to: Option<usize>,
}

impl VideoRecord {
    /// A record carrying only the mandatory trajectory.
    pub fn minimal(
        video_id: impl Into<String>,
        model_id: impl Into<String>,
        track: Track,
        trajectory: Trajectory,
    ) -> Self {
        VideoRecord {
            video_id: video_id.into(),
            model_id: model_id.into(),
            track,
            trajectory,
            reference_trajectory: None,
            frame_features: None,
            luminance: None,
            agents: Vec::new(),
            video_embedding: None,
            subjective_quality: None,
            window_embeddings: None,
            complete_to: None,
        }
    }
}

fn check_increasing(frames: impl Iterator<Item = usize>, what: &str) -> Result<()> {
    let mut prev: Option<usize> = None;
    for f in frames {
        if prev.is_some_and(|p| f <= p) {
            return Err(Error::Invalid(format!(
                "{what}: frame indices not strictly increasing at frame {f}"
            )));
        }
        prev = Some(f);
    }
    Ok(())
}
