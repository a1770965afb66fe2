//! Orchestration: per-video metrics, per-model aggregates, average ranks and
//! report output.

mod emit;
mod rank;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use emit::{emit, parse_formats, render_json, render_markdown, ReportFormat};
pub use rank::rank;

use crate::alignment;
use crate::completion::{complete_trajectory, derive_video_seed, SEED_DERIVATION};
use crate::config::EngineConfig;
use crate::consistency;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::flicker;
use crate::frechet::{self, PrecomputedWindows, ReferenceFeaturizer, WindowFeaturizer};
use crate::io::{load_manifest_with_fps, Dataset, TrackReference};
use crate::kinematics;
use crate::metric::{Metric, MetricSelection, MetricSpec};
use crate::model::{EmbeddingSet, Track, Trajectory, VideoRecord};
use crate::validate::{validate, ValidationReport};

/// Shown next to every average-rank column.
pub const RANK_NOTE: &str =
    "Avg. Rank is a quick summary across metrics, not a definitive score.";

/// Rounds to 6 significant digits, the precision of every reported value.
pub fn quantize(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VideoScores {
    pub track: Track,
    /// `None` marks an undefined value; see [`MetricReport::undefined`].
    pub values: BTreeMap<String, Option<f64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UndefinedValue {
    pub model_id: String,
    pub video_id: String,
    pub metric: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackRanking {
    /// Metrics the ranking averages over.
    pub metrics: Vec<String>,
    pub ranks: BTreeMap<String, f64>,
    /// Models left out of the ranking, with the metrics they lack.
    pub excluded: BTreeMap<String, Vec<String>>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CompletionLog {
    pub video_id: String,
    pub original_len: usize,
    pub target_len: usize,
    pub video_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    pub config: EngineConfig,
    pub seed: u64,
    pub seed_derivation: String,
    /// Metrics computed per track.
    pub metrics: BTreeMap<String, Vec<String>>,
    /// Window featurizer used for FTD per track.
    pub featurizers: BTreeMap<String, String>,
    pub completions: Vec<CompletionLog>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    /// model → video → scores.
    pub per_video: BTreeMap<String, BTreeMap<String, VideoScores>>,
    /// model → track → metric → aggregate.
    pub per_model: BTreeMap<String, BTreeMap<String, BTreeMap<String, Option<f64>>>>,
    /// track → ranking.
    pub ranks: BTreeMap<String, TrackRanking>,
    pub undefined: Vec<UndefinedValue>,
    pub config_snapshot: ConfigSnapshot,
}

impl MetricReport {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("report: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    /// Recomputes every track's ranking from the reported aggregates.
    pub fn rerank(&self) -> Result<BTreeMap<String, TrackRanking>> {
        self.config_snapshot
            .metrics
            .iter()
            .map(|(track, names)| {
                let metrics = names
                    .iter()
                    .map(|n| n.parse::<Metric>())
                    .collect::<Result<Vec<_>>>()?;
                Ok((track.clone(), rank_track(&self.per_model, track, &metrics)?))
            })
            .collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub config: EngineConfig,
    pub seed: u64,
    pub selection: MetricSelection,
    pub exec: Execution,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("validation failed with {} error(s)", .0.errors().count())]
    Validation(ValidationReport),
    #[error(transparent)]
    Failed(#[from] Error),
}

/// Completes every record that asks for it; returns the updated records and
/// a log of what was extrapolated.
pub fn complete_pending(
    records: &[VideoRecord],
    seed: u64,
    jitter_deg: f64,
) -> Result<(Vec<VideoRecord>, Vec<CompletionLog>)> {
    let mut out = Vec::with_capacity(records.len());
    let mut log = Vec::new();
    for r in records {
        let mut r = r.clone();
        if let Some(target) = r.complete_to.filter(|&t| t > r.trajectory.len()) {
            let video_seed = derive_video_seed(seed, &r.video_id);
            let original_len = r.trajectory.len();
            r.trajectory = complete_trajectory(&r.trajectory, target, jitter_deg, video_seed)
                .map_err(|e| Error::record(&r.video_id, "trajectory", e))?;
            log.push(CompletionLog {
                video_id: r.video_id.clone(),
                original_len,
                target_len: target,
                video_seed,
            });
        }
        out.push(r);
    }
    log.sort();
    Ok((out, log))
}

/// Pose completion followed by validation, as `run` does it.
pub fn prepare_and_validate(
    dataset: &Dataset,
    opts: &RunOptions,
) -> Result<(Vec<VideoRecord>, Vec<CompletionLog>, ValidationReport)> {
    opts.config.validate()?;
    let (records, log) = complete_pending(&dataset.records, opts.seed, opts.config.jitter_deg)?;
    let report = validate(&records, &dataset.tracks, &opts.selection, &opts.config);
    Ok((records, log, report))
}

pub fn run_manifest(path: &Path, opts: &RunOptions) -> Result<MetricReport, RunError> {
    let dataset = load_manifest_with_fps(path, opts.config.mmp.rate)?;
    run(&dataset, opts)
}

pub fn run(dataset: &Dataset, opts: &RunOptions) -> Result<MetricReport, RunError> {
    if opts.selection.is_empty() {
        return Err(Error::NothingToReport.into());
    }
    let (records, completions, validation) = prepare_and_validate(dataset, opts)?;
    if validation.has_errors() {
        return Err(RunError::Validation(validation));
    }
    let cfg = &opts.config;

    let tracks: BTreeSet<Track> = records.iter().map(|r| r.track).collect();
    if tracks.is_empty() {
        return Err(Error::NoVideos.into());
    }
    let metrics_by_track: BTreeMap<Track, Vec<Metric>> = tracks
        .iter()
        .map(|&t| (t, opts.selection.for_track(t)))
        .collect();

    let scored: Vec<Vec<(Metric, std::result::Result<f64, String>)>> =
        opts.exec.map(&records, |r| {
            metrics_by_track[&r.track]
                .iter()
                .filter(|m| !m.is_distributional())
                .map(|&m| (m, video_metric(r, m, cfg).map(quantize)))
                .collect()
        });

    let mut per_video: BTreeMap<String, BTreeMap<String, VideoScores>> = BTreeMap::new();
    let mut undefined = Vec::new();
    for (r, values) in records.iter().zip(scored) {
        let mut map = BTreeMap::new();
        for (m, v) in values {
            match v {
                Ok(x) => {
                    map.insert(m.name().to_string(), Some(x));
                }
                Err(reason) => {
                    undefined.push(UndefinedValue {
                        model_id: r.model_id.clone(),
                        video_id: r.video_id.clone(),
                        metric: m.name().to_string(),
                        reason,
                    });
                    map.insert(m.name().to_string(), None);
                }
            }
        }
        per_video.entry(r.model_id.clone()).or_default().insert(
            r.video_id.clone(),
            VideoScores {
                track: r.track,
                values: map,
            },
        );
    }
    undefined.sort();

    let mut groups: BTreeMap<(String, Track), Vec<&VideoRecord>> = BTreeMap::new();
    for r in &records {
        groups.entry((r.model_id.clone(), r.track)).or_default().push(r);
    }

    let mut featurizers = BTreeMap::new();
    let mut per_model: BTreeMap<String, BTreeMap<String, BTreeMap<String, Option<f64>>>> =
        BTreeMap::new();
    for ((model, track), group) in &groups {
        let reference = dataset
            .reference(*track)
            .cloned()
            .unwrap_or_else(|| TrackReference::empty(*track));
        let mut aggregates = BTreeMap::new();
        for &m in &metrics_by_track[track] {
            let value = match m {
                Metric::Fvd => Some(quantize(model_fvd(group, &reference, cfg)?)),
                Metric::Ftd => {
                    let (d, name) = model_ftd(group, &reference, cfg, opts.exec)?;
                    featurizers.insert(track.to_string(), name);
                    Some(quantize(d))
                }
                _ => {
                    let defined: Vec<f64> = group
                        .iter()
                        .filter_map(|r| per_video[model][&r.video_id].values[m.name()])
                        .collect();
                    (!defined.is_empty())
                        .then(|| quantize(defined.iter().sum::<f64>() / defined.len() as f64))
                }
            };
            aggregates.insert(m.name().to_string(), value);
        }
        per_model
            .entry(model.clone())
            .or_default()
            .insert(track.to_string(), aggregates);
    }

    let ranks = metrics_by_track
        .iter()
        .map(|(track, metrics)| {
            Ok((
                track.to_string(),
                rank_track(&per_model, track.as_str(), metrics)?,
            ))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;

    Ok(MetricReport {
        per_video,
        per_model,
        ranks,
        undefined,
        config_snapshot: ConfigSnapshot {
            config: *cfg,
            seed: opts.seed,
            seed_derivation: SEED_DERIVATION.to_string(),
            metrics: metrics_by_track
                .iter()
                .map(|(t, ms)| (t.to_string(), ms.iter().map(|m| m.name().to_string()).collect()))
                .collect(),
            featurizers,
            completions,
        },
    })
}

fn rank_track(
    per_model: &BTreeMap<String, BTreeMap<String, BTreeMap<String, Option<f64>>>>,
    track: &str,
    metrics: &[Metric],
) -> Result<TrackRanking> {
    let specs: Vec<MetricSpec> = metrics.iter().map(|m| m.spec()).collect();
    let mut complete = BTreeMap::new();
    let mut excluded = BTreeMap::new();
    for (model, by_track) in per_model {
        let Some(values) = by_track.get(track) else {
            continue;
        };
        let missing: Vec<String> = specs
            .iter()
            .filter(|s| !matches!(values.get(&s.name), Some(Some(_))))
            .map(|s| s.name.clone())
            .collect();
        if missing.is_empty() {
            complete.insert(
                model.clone(),
                values
                    .iter()
                    .filter_map(|(k, v)| v.map(|v| (k.clone(), v)))
                    .collect::<BTreeMap<String, f64>>(),
            );
        } else {
            excluded.insert(model.clone(), missing);
        }
    }
    let ranks = if complete.is_empty() {
        BTreeMap::new()
    } else {
        rank(&complete, &specs)?
            .into_iter()
            .map(|(m, r)| (m, quantize(r)))
            .collect()
    };
    Ok(TrackRanking {
        metrics: specs.into_iter().map(|s| s.name).collect(),
        ranks,
        excluded,
        note: RANK_NOTE.to_string(),
    })
}

/// One per-video metric; `Err` carries the reason the value is undefined.
fn video_metric(r: &VideoRecord, metric: Metric, cfg: &EngineConfig) -> std::result::Result<f64, String> {
    let undefined = |why: &str| Err(why.to_string());
    let fail = |e: Error| e.to_string();
    match metric {
        Metric::SubjectiveQuality => r.subjective_quality.ok_or_else(|| "subjective_quality missing".into()),
        Metric::ObjectiveQuality => {
            let lum = r.luminance.as_ref().ok_or("luminance missing")?;
            flicker::mmp(lum, &cfg.mmp).map(f64::from).map_err(fail)
        }
        Metric::TrajectoryQuality => match kinematics::trajectory_quality(&r.trajectory, &cfg.quality).map_err(fail)? {
            Some(v) => Ok(v),
            None => undefined("all quality submetrics undefined"),
        },
        Metric::TrajectoryConsistency => kinematics::trajectory_consistency(&r.trajectory).map_err(fail),
        Metric::VideoConsistency => {
            let ff = r.frame_features.as_ref().ok_or("frame_features missing")?;
            consistency::video_consistency(ff, &cfg.consistency).map_err(fail)
        }
        Metric::AgentConsistency => match consistency::agent_consistency(&r.agents, &cfg.consistency).map_err(fail)? {
            Some(v) => Ok(v),
            None => undefined("no eligible agents"),
        },
        Metric::AgentMissing => Ok(if consistency::is_clean(r) { 1.0 } else { 0.0 }),
        Metric::Ade | Metric::Dtw => {
            let reference = r.reference_trajectory.as_ref().ok_or("reference_trajectory missing")?;
            let f = if metric == Metric::Ade { alignment::ade } else { alignment::dtw };
            f(&r.trajectory, reference).map_err(fail)
        }
        Metric::Fvd | Metric::Ftd => undefined("distributional metric"),
    }
}

fn model_fvd(group: &[&VideoRecord], reference: &TrackReference, cfg: &EngineConfig) -> Result<f64> {
    let gen = EmbeddingSet::new(
        group
            .iter()
            .map(|r| {
                r.video_embedding
                    .clone()
                    .ok_or_else(|| Error::record(&r.video_id, "video_embedding", "missing"))
            })
            .collect::<Result<Vec<_>>>()?,
    )?;
    let reference = reference
        .video_embeddings
        .as_ref()
        .ok_or_else(|| Error::Manifest(format!("{} reference video_embeddings missing", reference.track)))?;
    frechet::fvd(&gen, reference, cfg.fvd_epsilon)
}

fn model_ftd(
    group: &[&VideoRecord],
    reference: &TrackReference,
    cfg: &EngineConfig,
    exec: Execution,
) -> Result<(f64, String)> {
    const REFERENCE_PREFIX: &str = "reference:";
    let ref_keys: Vec<String> = reference
        .trajectories
        .iter()
        .map(|(id, _)| format!("{REFERENCE_PREFIX}{id}"))
        .collect();
    let gen: Vec<(&str, &Trajectory)> = group.iter().map(|r| (r.video_id.as_str(), &r.trajectory)).collect();
    let refs: Vec<(&str, &Trajectory)> = ref_keys
        .iter()
        .zip(&reference.trajectories)
        .map(|(k, (_, t))| (k.as_str(), t))
        .collect();
    let featurizer: Box<dyn WindowFeaturizer> = match &reference.window_embeddings {
        Some(ref_windows) => {
            let mut pre = PrecomputedWindows::new();
            for r in group {
                let w = r
                    .window_embeddings
                    .clone()
                    .ok_or_else(|| Error::record(&r.video_id, "window_embeddings", "missing"))?;
                pre.insert(r.video_id.clone(), w);
            }
            for (id, windows) in ref_windows {
                pre.insert(format!("{REFERENCE_PREFIX}{id}"), windows.clone());
            }
            Box::new(pre)
        }
        None => Box::new(ReferenceFeaturizer {
            horizon: cfg.ftd.horizon,
        }),
    };
    let d = frechet::ftd(&gen, &refs, &cfg.ftd, featurizer.as_ref(), exec)?;
    Ok((d, featurizer.name().to_string()))
}
