//! Completion of pose tracks that stopped early: the last pose is carried
//! forward at constant speed while its heading takes small random steps.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::kinematics::wrap_angle;
use crate::model::{Point, Trajectory, TIMESTAMP_TOLERANCE};

pub const DEFAULT_JITTER_DEG: f64 = 0.5;

/// How per-video seeds are derived; recorded verbatim in reports.
pub const SEED_DERIVATION: &str =
    "video_seed = seed XOR u64_le(sha256(video_id)[0..8]); rng = ChaCha8";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoseTrack {
    poses: Vec<Pose>,
    rate: f64,
}

impl PoseTrack {
    pub fn new(poses: Vec<Pose>) -> Result<Self> {
        if let Some(p) = poses.iter().find(|p| !(p.heading > -std::f64::consts::PI && p.heading <= std::f64::consts::PI)) {
            return Err(Error::Invalid(format!("heading {} outside (-pi, pi]", p.heading)));
        }
        // Reuse the trajectory checks for timestamps.
        let traj = Trajectory::new(poses.iter().map(|p| Point::new(p.t, p.x, p.y)).collect())?;
        Ok(PoseTrack {
            poses,
            rate: traj.rate(),
        })
    }

    /// Headings taken from the direction of travel; stationary steps keep
    /// the previous heading.
    pub fn from_trajectory(traj: &Trajectory) -> Self {
        let pts = traj.points();
        let n = pts.len();
        let mut poses = Vec::with_capacity(n);
        let mut heading = 0.0;
        for i in 0..n {
            let (a, b) = if i + 1 < n { (pts[i], pts[i + 1]) } else { (pts[i - 1], pts[i]) };
            let (dx, dy) = (b.x - a.x, b.y - a.y);
            if dx != 0.0 || dy != 0.0 {
                heading = wrap_angle(dy.atan2(dx));
            }
            poses.push(Pose {
                t: pts[i].t,
                x: pts[i].x,
                y: pts[i].y,
                heading,
            });
        }
        PoseTrack {
            poses,
            rate: traj.rate(),
        }
    }

    pub fn poses(&self) -> &[Pose] {
        &self.poses
    }

    pub fn len(&self) -> usize {
        self.poses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poses.is_empty()
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn to_trajectory(&self, extrapolated_from: Option<usize>) -> Result<Trajectory> {
        Trajectory::new(self.poses.iter().map(|p| Point::new(p.t, p.x, p.y)).collect())?
            .with_extrapolated_from(extrapolated_from)
    }
}

/// Seed for one video, independent across videos and reproducible.
pub fn derive_video_seed(seed: u64, video_id: &str) -> u64 {
    let digest = Sha256::digest(video_id.as_bytes());
    let mut head = [0u8; 8];
    head.copy_from_slice(&digest[..8]);
    seed ^ u64::from_le_bytes(head)
}

/// Extends `track` to `target_len` poses.
///
/// The step length is the displacement between the last two poses. Each new
/// pose advances along the current heading, after which the heading receives
/// a zero-mean Gaussian perturbation with standard deviation `jitter_deg`.
pub fn complete(track: &PoseTrack, target_len: usize, jitter_deg: f64, seed: u64) -> Result<PoseTrack> {
    let n = track.len();
    if n < 2 {
        return Err(Error::TooShort { len: n, min: 2 });
    }
    if target_len < n {
        return Err(Error::Invalid(format!(
            "target length {target_len} shorter than input length {n}"
        )));
    }
    if !(jitter_deg.is_finite() && jitter_deg >= 0.0) {
        return Err(Error::Invalid(format!("jitter_deg must be >= 0, got {jitter_deg}")));
    }
    let noise = Normal::new(0.0, jitter_deg.to_radians())
        .map_err(|e| Error::Invalid(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let poses = &track.poses;
    let (prev, last) = (poses[n - 2], poses[n - 1]);
    let step = (last.x - prev.x).hypot(last.y - prev.y);
    let dt = (last.t - poses[0].t) / (n - 1) as f64;
    debug_assert!((last.t - prev.t - dt).abs() <= TIMESTAMP_TOLERANCE);

    let mut out = poses.clone();
    out.reserve(target_len - n);
    let mut current = last;
    for k in 1..=target_len - n {
        let (s, c) = current.heading.sin_cos();
        let heading = current.heading;
        current = Pose {
            t: last.t + k as f64 * dt,
            x: current.x + step * c,
            y: current.y + step * s,
            heading: wrap_angle(heading + noise.sample(&mut rng)),
        };
        out.push(current);
    }
    Ok(PoseTrack {
        poses: out,
        rate: track.rate,
    })
}

/// Completes a trajectory and marks where extrapolation took over.
pub fn complete_trajectory(traj: &Trajectory, target_len: usize, jitter_deg: f64, seed: u64) -> Result<Trajectory> {
    let n = traj.len();
    let done = complete(&PoseTrack::from_trajectory(traj), target_len, jitter_deg, seed)?;
    done.to_trajectory((target_len > n).then_some(n).or(traj.extrapolated_from()))
}
