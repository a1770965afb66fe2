//! Motion-adaptive video consistency, agent appearance consistency and the
//! abnormal-disappearance score.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AgentTrack, FrameFeatures, VideoRecord, Verdict};

/// Flow medians below this are treated as this value when computing the stride.
const FLOW_FLOOR: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyConfig {
    /// Per-step displacement the downsampling aims for (pixels/frame).
    pub target_flow: f64,
    pub max_stride: usize,
    /// Weight of first-frame similarity in the agent score.
    pub blend_first: f64,
}

impl Default for ConsistencyConfig {
    fn default() -> Self {
        ConsistencyConfig {
            target_flow: 8.0,
            max_stride: 16,
            blend_first: 0.5,
        }
    }
}

impl ConsistencyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_flow.is_finite() && self.target_flow > 0.0) {
            return Err(Error::Config(format!(
                "target_flow must be positive, got {}",
                self.target_flow
            )));
        }
        if self.max_stride < 1 {
            return Err(Error::Config("max_stride must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.blend_first) {
            return Err(Error::Config(format!(
                "blend_first must lie in [0, 1], got {}",
                self.blend_first
            )));
        }
        Ok(())
    }
}

/// Cosine similarity clamped below at 0.
pub fn clamped_cosine(a: &[f64], b: &[f64]) -> Option<f64> {
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return None;
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    Some((dot / (na * nb)).max(0.0))
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Frame stride that brings the per-step displacement of a `frames`-long
/// video up to `target_flow`.
pub fn adaptive_stride(flow: &[f64], frames: usize, cfg: &ConsistencyConfig) -> Result<usize> {
    if flow.is_empty() {
        return Err(Error::Invalid("empty flow list".into()));
    }
    if let Some(f) = flow.iter().find(|f| !(f.is_finite() && **f >= 0.0)) {
        return Err(Error::Invalid(format!("flow magnitude must be >= 0, got {f}")));
    }
    let m = median(flow);
    let raw = (cfg.target_flow / m.max(FLOW_FLOOR)).round();
    let upper = cfg.max_stride.min(frames.saturating_sub(1)).max(1);
    Ok((raw.max(1.0) as usize).clamp(1, upper))
}

/// Mean clamped cosine between consecutive frames sampled at the adaptive stride.
pub fn video_consistency(feats: &FrameFeatures, cfg: &ConsistencyConfig) -> Result<f64> {
    let flow: Vec<f64> = feats.flow_median.iter().map(|f| f.median_flow).collect();
    let stride = adaptive_stride(&flow, feats.per_frame.len(), cfg)?;
    let sampled: Vec<&[f64]> = feats
        .per_frame
        .iter()
        .step_by(stride)
        .map(|f| f.feature.as_slice())
        .collect();
    if sampled.len() < 2 {
        return Err(Error::Invalid(format!(
            "{} sampled frame(s) at stride {stride}, need 2",
            sampled.len()
        )));
    }
    let sims = sampled
        .windows(2)
        .enumerate()
        .map(|(i, w)| clamped_cosine(w[0], w[1]).ok_or(Error::ZeroNorm(i * stride)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(sims.iter().sum::<f64>() / sims.len() as f64)
}

/// Score of one agent, or `None` when it has fewer than two observations.
pub fn agent_score(agent: &AgentTrack, cfg: &ConsistencyConfig) -> Result<Option<f64>> {
    let obs = &agent.observations;
    if obs.len() < 2 {
        return Ok(None);
    }
    let sim = |i: usize, j: usize| {
        clamped_cosine(&obs[i].feature, &obs[j].feature)
            .ok_or_else(|| Error::ZeroNorm(if obs[i].feature.iter().all(|x| *x == 0.0) { i } else { j }))
    };
    let n = obs.len();
    let consecutive = (1..n).map(|i| sim(i - 1, i)).sum::<Result<f64>>()? / (n - 1) as f64;
    let to_first = (1..n).map(|i| sim(0, i)).sum::<Result<f64>>()? / (n - 1) as f64;
    Ok(Some(
        (1.0 - cfg.blend_first) * consecutive + cfg.blend_first * to_first,
    ))
}

/// Mean over eligible agents; `None` when no agent has two observations.
pub fn agent_consistency(agents: &[AgentTrack], cfg: &ConsistencyConfig) -> Result<Option<f64>> {
    let scores: Vec<f64> = agents
        .iter()
        .map(|a| agent_score(a, cfg))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    if scores.is_empty() {
        return Ok(None);
    }
    Ok(Some((scores.iter().sum::<f64>() / scores.len() as f64).max(0.0)))
}

/// A video is clean when no agent was judged to vanish unnaturally.
pub fn is_clean(record: &VideoRecord) -> bool {
    record
        .agents
        .iter()
        .all(|a| a.verdict != Some(Verdict::Unnatural))
}

/// Fraction of clean videos.
pub fn disappearance_score(records: &[&VideoRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::NoVideos);
    }
    let clean = records.iter().filter(|r| is_clean(r)).count();
    Ok(clean as f64 / records.len() as f64)
}
