//! Seeded synthetic datasets. Model quality degrades with its position in
//! the model list, so the first model is best on every metric.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::Result;
use crate::io::{write_dataset, Dataset, TrackReference};
use crate::model::{
    AgentObservation, AgentTrack, EmbeddingSet, FlowSample, FrameFeature, FrameFeatures,
    LuminanceSeries, Track, Trajectory, Verdict, VideoRecord,
};

const RATE: f64 = 10.0;
const REFERENCE_SPEED: f64 = 6.0;
const EMBEDDING_DIM: usize = 8;
const FEATURE_DIM: usize = 16;
const AGENTS_PER_VIDEO: usize = 3;
const AGENT_FRAMES: usize = 20;

#[derive(Clone, Debug)]
pub struct FixtureSpec {
    pub seed: u64,
    pub tracks: Vec<Track>,
    pub models: Vec<String>,
    pub videos_per_model: usize,
    pub frames: usize,
    pub reference_size: usize,
    /// The last video of the last model is cut to this many points and asks
    /// to be completed back to `frames`.
    pub truncate_to: Option<usize>,
}

impl Default for FixtureSpec {
    fn default() -> Self {
        FixtureSpec {
            seed: 7,
            tracks: vec![Track::EgoConditioned],
            models: ["A", "B", "C"].map(String::from).to_vec(),
            videos_per_model: 4,
            frames: 60,
            reference_size: 16,
            truncate_to: Some(40),
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    Normal::new(0.0, sigma).expect("finite sigma").sample(rng)
}

/// Gently weaving route driven at `speed`, with positional noise.
fn route(rng: &mut ChaCha8Rng, phase: f64, speed: f64, noise: f64, n: usize) -> Vec<(f64, f64)> {
    let dt = 1.0 / RATE;
    let (mut x, mut y) = (0.0, 0.0);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push((x + gaussian(rng, noise), y + gaussian(rng, noise)));
        let heading = 0.15 * (0.5 * i as f64 * dt + phase).sin();
        x += speed * dt * heading.cos();
        y += speed * dt * heading.sin();
    }
    out
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

fn luminance(rng: &mut ChaCha8Rng, n: usize, flicker: bool) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = i as f64 / RATE;
            let mut v = 120.0 + 5.0 * (TAU * 0.1 * t).sin() + gaussian(rng, 0.5);
            if flicker {
                v += 10.0 * (TAU * 3.0 * t).sin();
            }
            v.clamp(0.0, 255.0)
        })
        .collect()
}

fn frame_features(rng: &mut ChaCha8Rng, n: usize, noise: f64) -> Result<FrameFeatures> {
    let base: Vec<f64> = (0..FEATURE_DIM).map(|_| gaussian(rng, 1.0)).collect();
    let drift: Vec<f64> = (0..FEATURE_DIM).map(|_| gaussian(rng, 1.0)).collect();
    let per_frame = (0..n)
        .map(|f| {
            let s = f as f64 / n as f64;
            let feature = base
                .iter()
                .zip(&drift)
                .map(|(b, d)| b + 0.3 * s * d + gaussian(rng, noise))
                .collect();
            FrameFeature {
                frame: f,
                feature: unit(feature),
            }
        })
        .collect();
    let flow = (0..n.saturating_sub(1))
        .map(|f| FlowSample {
            frame: f,
            median_flow: 4.0 + gaussian(rng, 0.2).abs(),
        })
        .collect();
    FrameFeatures::new(per_frame, flow)
}

fn agents(rng: &mut ChaCha8Rng, noise: f64, unnatural: bool) -> Result<Vec<AgentTrack>> {
    (0..AGENTS_PER_VIDEO)
        .map(|a| {
            let base: Vec<f64> = (0..FEATURE_DIM).map(|_| gaussian(rng, 1.0)).collect();
            let start = 3 * a;
            let observations = (start..start + AGENT_FRAMES)
                .map(|frame| AgentObservation {
                    frame,
                    bbox: [10.0 + frame as f64, 20.0, 30.0, 25.0],
                    feature: unit(base.iter().map(|b| b + gaussian(rng, noise)).collect()),
                })
                .collect();
            let verdict = if unnatural && a == 0 {
                Verdict::Unnatural
            } else {
                Verdict::Natural
            };
            AgentTrack::new(format!("agent-{a}"), observations, Some(verdict))
        })
        .collect()
}

fn track_prefix(track: Track) -> &'static str {
    match track {
        Track::OpenDomain => "od",
        Track::EgoConditioned => "ego",
    }
}

pub fn synthetic_dataset(spec: &FixtureSpec) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut tracks = Vec::new();
    let mut records = Vec::new();
    for &track in &spec.tracks {
        let prefix = track_prefix(track);
        let mut reference = TrackReference::empty(track);
        for i in 0..spec.reference_size {
            let phase = rng.random_range(0.0..TAU);
            let xy = route(&mut rng, phase, REFERENCE_SPEED, 0.005, spec.frames);
            reference
                .trajectories
                .push((format!("{prefix}-ref-{i:02}"), Trajectory::from_xy(&xy, RATE)?));
        }
        let vectors = (0..spec.reference_size)
            .map(|_| (0..EMBEDDING_DIM).map(|_| gaussian(&mut rng, 1.0)).collect())
            .collect();
        reference.video_embeddings = Some(EmbeddingSet::new(vectors)?);
        tracks.push(reference);

        for (level, model) in spec.models.iter().enumerate() {
            let lvl = level as f64;
            let speed = REFERENCE_SPEED - 1.5 * lvl;
            let noise = 0.005 + 0.03 * lvl;
            let feature_noise = 0.05 + 0.25 * lvl;
            let last_model = level + 1 == spec.models.len();
            for v in 0..spec.videos_per_model {
                let video_id = format!("{prefix}-{model}-{v:02}");
                let phase = rng.random_range(0.0..TAU);
                let mut n = spec.frames;
                let mut complete_to = None;
                if let Some(cut) = spec.truncate_to.filter(|_| last_model && v + 1 == spec.videos_per_model) {
                    n = cut.min(spec.frames);
                    complete_to = Some(spec.frames);
                }
                let xy = route(&mut rng, phase, speed, noise, n);
                let mut r = VideoRecord::minimal(&video_id, model, track, Trajectory::from_xy(&xy, RATE)?);
                r.complete_to = complete_to;
                if track == Track::EgoConditioned {
                    let gt = route(&mut rng, phase, REFERENCE_SPEED, 0.0, spec.frames);
                    r.reference_trajectory = Some(Trajectory::from_xy(&gt, RATE)?);
                }
                r.video_embedding = Some(
                    (0..EMBEDDING_DIM)
                        .map(|_| 1.5 * lvl + gaussian(&mut rng, 1.0))
                        .collect(),
                );
                r.subjective_quality =
                    Some((0.9 - 0.2 * lvl + rng.random_range(-0.02..0.02)).clamp(0.0, 1.0));
                r.luminance = Some(LuminanceSeries::new(luminance(&mut rng, spec.frames, v < level), RATE)?);
                r.frame_features = Some(frame_features(&mut rng, spec.frames, feature_noise)?);
                r.agents = agents(&mut rng, feature_noise, v < level)?;
                records.push(r);
            }
        }
    }
    Ok(Dataset {
        tracks,
        models: spec.models.clone(),
        records,
    })
}

/// Generates and writes a synthetic dataset; returns the manifest path.
pub fn write_synthetic(spec: &FixtureSpec, dir: &Path) -> Result<PathBuf> {
    write_dataset(&synthetic_dataset(spec)?, dir)
}
