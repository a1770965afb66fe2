//! Manifest and JSONL interchange files.
//!
//! A manifest names the tracks under evaluation (with their reference sets),
//! the models, and one entry per generated video whose `files` point at
//! JSONL artifacts relative to the manifest's directory.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flicker::luminance_from_pgm_dir;
use crate::model::{
    AgentObservation, AgentTrack, EmbeddingSet, FlowSample, FrameFeature, FrameFeatures,
    LuminanceSeries, Point, Track, Trajectory, Verdict, VideoRecord,
};

/// Frame rate assigned to luminance series on load.
pub const DEFAULT_FPS: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub tracks: Vec<TrackEntry>,
    pub models: Vec<String>,
    pub videos: Vec<VideoEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrackEntry {
    pub track: Track,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceEntry>,
}

/// Real-data side of the distributional metrics for one track.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceEntry {
    /// Trajectory files; each file's stem is its id in window-embedding rows.
    #[serde(default)]
    pub trajectories: Vec<String>,
    /// One `{"feature": [...]}` row per reference video.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub video_embeddings: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_embeddings: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VideoEntry {
    pub video_id: String,
    pub model_id: String,
    pub track: Track,
    pub files: FileEntry,
    /// Horizon to complete the trajectory to when pose recovery stopped early.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete_to: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileEntry {
    pub trajectory: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_trajectory: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame_features: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flow: Option<String>,
    /// A luminance JSONL file, or a directory of 8-bit PGM frames.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub luminance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agents: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub video_embedding: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subjective_quality: Option<SubjectiveEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_embeddings: Option<String>,
}

/// Either the score itself or a file holding `{"subjective_quality": x}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubjectiveEntry {
    Value(f64),
    Path(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrajectoryRow {
    t: f64,
    x: f64,
    y: f64,
    /// Altitude is accepted and dropped.
    #[serde(default, rename = "z", skip_serializing)]
    _altitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    extrapolated_from: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FeatureRow {
    frame: usize,
    feature: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlowRow {
    frame: usize,
    median_flow: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LuminanceRow {
    frame: usize,
    mean_luminance: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentRow {
    agent_id: String,
    frame: usize,
    bbox: [f64; 4],
    feature: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    verdict: Option<Verdict>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EmbeddingRow {
    feature: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WindowRow {
    video_id: String,
    window: usize,
    feature: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubjectiveRow {
    subjective_quality: f64,
}

/// Reference data for one track.
#[derive(Clone, Debug, PartialEq)]
pub struct TrackReference {
    pub track: Track,
    pub trajectories: Vec<(String, Trajectory)>,
    pub video_embeddings: Option<EmbeddingSet>,
    pub window_embeddings: Option<BTreeMap<String, Vec<Vec<f64>>>>,
}

impl TrackReference {
    pub fn empty(track: Track) -> Self {
        TrackReference {
            track,
            trajectories: Vec::new(),
            video_embeddings: None,
            window_embeddings: None,
        }
    }
}

/// Everything a manifest describes, fully loaded and validated.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub tracks: Vec<TrackReference>,
    pub models: Vec<String>,
    pub records: Vec<VideoRecord>,
}

impl Dataset {
    pub fn reference(&self, track: Track) -> Option<&TrackReference> {
        self.tracks.iter().find(|t| t.track == track)
    }
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            serde_json::from_str(line).map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut out = Vec::new();
    for row in rows {
        serde_json::to_writer(&mut out, row).expect("rows serialize");
        out.push(b'\n');
    }
    write_file(path, &out)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(bytes).map_err(|e| Error::io(path, e))
}

pub fn read_trajectory(path: &Path) -> Result<Trajectory> {
    let rows: Vec<TrajectoryRow> = read_jsonl(path)?;
    let mut marker: Option<usize> = None;
    for r in &rows {
        if let Some(m) = r.extrapolated_from {
            if marker.is_some_and(|prev| prev != m) {
                return Err(Error::Invalid("conflicting extrapolated_from values".into()));
            }
            marker = Some(m);
        }
    }
    Trajectory::new(rows.iter().map(|r| Point::new(r.t, r.x, r.y)).collect())?
        .with_extrapolated_from(marker)
}

pub fn write_trajectory(path: &Path, traj: &Trajectory) -> Result<()> {
    let rows: Vec<TrajectoryRow> = traj
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| TrajectoryRow {
            t: p.t,
            x: p.x,
            y: p.y,
            _altitude: None,
            extrapolated_from: if i == 0 { traj.extrapolated_from() } else { None },
        })
        .collect();
    write_jsonl(path, &rows)
}

fn read_window_embeddings(path: &Path) -> Result<BTreeMap<String, Vec<Vec<f64>>>> {
    let rows: Vec<WindowRow> = read_jsonl(path)?;
    let mut grouped: BTreeMap<String, BTreeMap<usize, Vec<f64>>> = BTreeMap::new();
    for r in rows {
        let windows = grouped.entry(r.video_id.clone()).or_default();
        if windows.insert(r.window, r.feature).is_some() {
            return Err(Error::Invalid(format!(
                "duplicate window {} for `{}`",
                r.window, r.video_id
            )));
        }
    }
    grouped
        .into_iter()
        .map(|(id, windows)| {
            if windows.keys().copied().ne(0..windows.len()) {
                return Err(Error::Invalid(format!(
                    "window indices for `{id}` are not contiguous from 0"
                )));
            }
            let feats: Vec<Vec<f64>> = windows.into_values().collect();
            EmbeddingSet::new(feats.clone())?;
            Ok((id, feats))
        })
        .collect()
}

fn write_window_embeddings(path: &Path, by_id: &BTreeMap<String, Vec<Vec<f64>>>) -> Result<()> {
    let rows: Vec<WindowRow> = by_id
        .iter()
        .flat_map(|(id, windows)| {
            windows.iter().enumerate().map(|(window, f)| WindowRow {
                video_id: id.clone(),
                window,
                feature: f.clone(),
            })
        })
        .collect();
    write_jsonl(path, &rows)
}

fn read_embeddings(path: &Path) -> Result<EmbeddingSet> {
    let rows: Vec<EmbeddingRow> = read_jsonl(path)?;
    EmbeddingSet::new(rows.into_iter().map(|r| r.feature).collect())
}

fn read_luminance(path: &Path, rate: f64) -> Result<LuminanceSeries> {
    if path.is_dir() {
        return luminance_from_pgm_dir(path, rate);
    }
    let rows: Vec<LuminanceRow> = read_jsonl(path)?;
    for w in rows.windows(2) {
        if w[1].frame <= w[0].frame {
            return Err(Error::Invalid(format!(
                "luminance frames not strictly increasing at frame {}",
                w[1].frame
            )));
        }
    }
    if let Some(r) = rows.iter().find(|r| !(0.0..=255.0).contains(&r.mean_luminance)) {
        return Err(Error::Invalid(format!(
            "luminance {} at frame {} outside [0, 255]",
            r.mean_luminance, r.frame
        )));
    }
    LuminanceSeries::new(rows.iter().map(|r| r.mean_luminance).collect(), rate)
}

fn read_agents(path: &Path) -> Result<Vec<AgentTrack>> {
    let rows: Vec<AgentRow> = read_jsonl(path)?;
    let mut order: Vec<String> = Vec::new();
    let mut grouped: BTreeMap<String, (Vec<AgentObservation>, Option<Verdict>)> = BTreeMap::new();
    for r in rows {
        let entry = grouped.entry(r.agent_id.clone()).or_insert_with(|| {
            order.push(r.agent_id.clone());
            (Vec::new(), None)
        });
        if let Some(v) = r.verdict {
            if entry.1.is_some_and(|prev| prev != v) {
                return Err(Error::Invalid(format!(
                    "agent `{}` has conflicting verdicts",
                    r.agent_id
                )));
            }
            entry.1 = Some(v);
        }
        entry.0.push(AgentObservation {
            frame: r.frame,
            bbox: r.bbox,
            feature: r.feature,
        });
    }
    order
        .into_iter()
        .map(|id| {
            let (obs, verdict) = grouped.remove(&id).expect("grouped");
            AgentTrack::new(id, obs, verdict)
        })
        .collect()
}

fn write_agents(path: &Path, agents: &[AgentTrack]) -> Result<()> {
    let rows: Vec<AgentRow> = agents
        .iter()
        .flat_map(|a| {
            a.observations.iter().map(|o| AgentRow {
                agent_id: a.agent_id.clone(),
                frame: o.frame,
                bbox: o.bbox,
                feature: o.feature.clone(),
                verdict: a.verdict,
            })
        })
        .collect();
    write_jsonl(path, &rows)
}

fn resolve(root: &Path, rel: &str) -> PathBuf {
    root.join(rel)
}

fn load_record(root: &Path, entry: &VideoEntry, fps: f64) -> Result<VideoRecord> {
    let id = entry.video_id.as_str();
    let ctx = |field: &str| {
        let field = field.to_string();
        move |e: Error| Error::record(id, field, e)
    };
    let files = &entry.files;
    let trajectory = read_trajectory(&resolve(root, &files.trajectory)).map_err(ctx("trajectory"))?;
    let reference_trajectory = files
        .reference_trajectory
        .as_ref()
        .map(|p| read_trajectory(&resolve(root, p)))
        .transpose()
        .map_err(ctx("reference_trajectory"))?;
    match (entry.track, &reference_trajectory) {
        (Track::EgoConditioned, None) => {
            return Err(Error::record(
                id,
                "reference_trajectory",
                "ego-conditioned record lacks reference_trajectory",
            ))
        }
        (Track::OpenDomain, Some(_)) => {
            return Err(Error::record(
                id,
                "reference_trajectory",
                "open-domain records carry no reference_trajectory",
            ))
        }
        _ => {}
    }

    let per_frame = files
        .frame_features
        .as_ref()
        .map(|p| read_jsonl::<FeatureRow>(&resolve(root, p)))
        .transpose()
        .map_err(ctx("frame_features"))?;
    let flow = files
        .flow
        .as_ref()
        .map(|p| read_jsonl::<FlowRow>(&resolve(root, p)))
        .transpose()
        .map_err(ctx("flow"))?;
    let frame_features = if per_frame.is_some() || flow.is_some() {
        Some(
            FrameFeatures::new(
                per_frame
                    .unwrap_or_default()
                    .into_iter()
                    .map(|r| FrameFeature {
                        frame: r.frame,
                        feature: r.feature,
                    })
                    .collect(),
                flow.unwrap_or_default()
                    .into_iter()
                    .map(|r| FlowSample {
                        frame: r.frame,
                        median_flow: r.median_flow,
                    })
                    .collect(),
            )
            .map_err(ctx("frame_features"))?,
        )
    } else {
        None
    };

    let luminance = files
        .luminance
        .as_ref()
        .map(|p| read_luminance(&resolve(root, p), fps))
        .transpose()
        .map_err(ctx("luminance"))?;
    let agents = files
        .agents
        .as_ref()
        .map(|p| read_agents(&resolve(root, p)))
        .transpose()
        .map_err(ctx("agents"))?
        .unwrap_or_default();
    let video_embedding = files
        .video_embedding
        .as_ref()
        .map(|p| -> Result<Vec<f64>> {
            let set = read_embeddings(&resolve(root, p))?;
            if set.len() != 1 {
                return Err(Error::Invalid(format!(
                    "expected one embedding row, found {}",
                    set.len()
                )));
            }
            Ok(set.vectors()[0].clone())
        })
        .transpose()
        .map_err(ctx("video_embedding"))?;
    let subjective_quality = match &files.subjective_quality {
        None => None,
        Some(SubjectiveEntry::Value(v)) => Some(*v),
        Some(SubjectiveEntry::Path(p)) => {
            let rows: Vec<SubjectiveRow> =
                read_jsonl(&resolve(root, p)).map_err(ctx("subjective_quality"))?;
            match rows.as_slice() {
                [row] => Some(row.subjective_quality),
                _ => {
                    return Err(Error::record(
                        id,
                        "subjective_quality",
                        "expected exactly one row",
                    ))
                }
            }
        }
    };
    if let Some(q) = subjective_quality {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::record(id, "subjective_quality", format!("{q} outside [0, 1]")));
        }
    }
    let window_embeddings = files
        .window_embeddings
        .as_ref()
        .map(|p| -> Result<Vec<Vec<f64>>> {
            let mut by_id = read_window_embeddings(&resolve(root, p))?;
            let keys: Vec<String> = by_id.keys().cloned().collect();
            by_id.remove(id).filter(|_| keys.len() == 1).ok_or_else(|| {
                Error::Invalid(format!("file must hold rows for `{id}` only, found {keys:?}"))
            })
        })
        .transpose()
        .map_err(ctx("window_embeddings"))?;

    Ok(VideoRecord {
        video_id: entry.video_id.clone(),
        model_id: entry.model_id.clone(),
        track: entry.track,
        trajectory,
        reference_trajectory,
        frame_features,
        luminance,
        agents,
        video_embedding,
        subjective_quality,
        window_embeddings,
        complete_to: entry.complete_to,
    })
}

fn load_reference(root: &Path, entry: &TrackEntry) -> Result<TrackReference> {
    let mut reference = TrackReference::empty(entry.track);
    let Some(spec) = &entry.reference else {
        return Ok(reference);
    };
    let ctx = |field: &'static str| {
        move |e: Error| Error::Manifest(format!("{} reference {field}: {e}", entry.track))
    };
    let mut seen = BTreeSet::new();
    for rel in &spec.trajectories {
        let path = resolve(root, rel);
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| rel.clone());
        if !seen.insert(id.clone()) {
            return Err(Error::Manifest(format!("duplicate reference trajectory id `{id}`")));
        }
        let traj = read_trajectory(&path).map_err(ctx("trajectories"))?;
        reference.trajectories.push((id, traj));
    }
    reference.video_embeddings = spec
        .video_embeddings
        .as_ref()
        .map(|p| read_embeddings(&resolve(root, p)))
        .transpose()
        .map_err(ctx("video_embeddings"))?;
    reference.window_embeddings = spec
        .window_embeddings
        .as_ref()
        .map(|p| read_window_embeddings(&resolve(root, p)))
        .transpose()
        .map_err(ctx("window_embeddings"))?;
    Ok(reference)
}

/// Loads and validates every record a manifest names.
pub fn load_manifest(path: &Path) -> Result<Dataset> {
    load_manifest_with_fps(path, DEFAULT_FPS)
}

pub fn load_manifest_with_fps(path: &Path, fps: f64) -> Result<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        message: e.to_string(),
    })?;
    let root = path.parent().unwrap_or(Path::new("."));
    load_from_manifest(&manifest, root, fps)
}

pub fn load_from_manifest(manifest: &Manifest, root: &Path, fps: f64) -> Result<Dataset> {
    let models: BTreeSet<&str> = manifest.models.iter().map(String::as_str).collect();
    if models.len() != manifest.models.len() {
        return Err(Error::Manifest("duplicate model ids".into()));
    }
    let tracks: BTreeSet<Track> = manifest.tracks.iter().map(|t| t.track).collect();
    if tracks.len() != manifest.tracks.len() {
        return Err(Error::Manifest("duplicate track entries".into()));
    }
    let mut ids = BTreeSet::new();
    for v in &manifest.videos {
        if !ids.insert(v.video_id.as_str()) {
            return Err(Error::record(&v.video_id, "video_id", "duplicate video id"));
        }
        if !models.contains(v.model_id.as_str()) {
            return Err(Error::record(
                &v.video_id,
                "model_id",
                format!("model `{}` not declared", v.model_id),
            ));
        }
        if !tracks.contains(&v.track) {
            return Err(Error::record(
                &v.video_id,
                "track",
                format!("track `{}` not declared", v.track),
            ));
        }
    }
    let tracks = manifest
        .tracks
        .iter()
        .map(|t| load_reference(root, t))
        .collect::<Result<Vec<_>>>()?;
    let records = manifest
        .videos
        .iter()
        .map(|v| load_record(root, v, fps))
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        tracks,
        models: manifest.models.clone(),
        records,
    })
}

/// Writes `dataset` as a manifest plus JSONL files under `dir`; returns the
/// manifest path. Loading the result yields an equal dataset (PGM luminance
/// sources are written back as JSONL).
pub fn write_dataset(dataset: &Dataset, dir: &Path) -> Result<PathBuf> {
    let mut tracks = Vec::new();
    for t in &dataset.tracks {
        let base = format!("reference/{}", t.track);
        let mut entry = ReferenceEntry::default();
        for (id, traj) in &t.trajectories {
            let p = format!("{base}/trajectories/{id}.jsonl");
            write_trajectory(&dir.join(&p), traj)?;
            entry.trajectories.push(p);
        }
        if let Some(set) = &t.video_embeddings {
            let p = format!("{base}/video_embeddings.jsonl");
            let rows: Vec<EmbeddingRow> = set
                .vectors()
                .iter()
                .map(|v| EmbeddingRow { feature: v.clone() })
                .collect();
            write_jsonl(&dir.join(&p), &rows)?;
            entry.video_embeddings = Some(p);
        }
        if let Some(w) = &t.window_embeddings {
            let p = format!("{base}/window_embeddings.jsonl");
            write_window_embeddings(&dir.join(&p), w)?;
            entry.window_embeddings = Some(p);
        }
        let has_reference = !entry.trajectories.is_empty()
            || entry.video_embeddings.is_some()
            || entry.window_embeddings.is_some();
        tracks.push(TrackEntry {
            track: t.track,
            reference: has_reference.then_some(entry),
        });
    }

    let mut videos = Vec::new();
    for r in &dataset.records {
        let base = format!("videos/{}", r.video_id);
        let path = |name: &str| format!("{base}/{name}.jsonl");
        let mut files = FileEntry {
            trajectory: path("trajectory"),
            ..FileEntry::default()
        };
        write_trajectory(&dir.join(&files.trajectory), &r.trajectory)?;
        if let Some(rt) = &r.reference_trajectory {
            let p = path("reference_trajectory");
            write_trajectory(&dir.join(&p), rt)?;
            files.reference_trajectory = Some(p);
        }
        if let Some(ff) = &r.frame_features {
            if !ff.per_frame.is_empty() {
                let p = path("frame_features");
                let rows: Vec<FeatureRow> = ff
                    .per_frame
                    .iter()
                    .map(|f| FeatureRow {
                        frame: f.frame,
                        feature: f.feature.clone(),
                    })
                    .collect();
                write_jsonl(&dir.join(&p), &rows)?;
                files.frame_features = Some(p);
            }
            if !ff.flow_median.is_empty() {
                let p = path("flow");
                let rows: Vec<FlowRow> = ff
                    .flow_median
                    .iter()
                    .map(|f| FlowRow {
                        frame: f.frame,
                        median_flow: f.median_flow,
                    })
                    .collect();
                write_jsonl(&dir.join(&p), &rows)?;
                files.flow = Some(p);
            }
        }
        if let Some(l) = &r.luminance {
            let p = path("luminance");
            let rows: Vec<LuminanceRow> = l
                .values
                .iter()
                .enumerate()
                .map(|(frame, &v)| LuminanceRow {
                    frame,
                    mean_luminance: v,
                })
                .collect();
            write_jsonl(&dir.join(&p), &rows)?;
            files.luminance = Some(p);
        }
        if !r.agents.is_empty() {
            let p = path("agents");
            write_agents(&dir.join(&p), &r.agents)?;
            files.agents = Some(p);
        }
        if let Some(e) = &r.video_embedding {
            let p = path("video_embedding");
            write_jsonl(&dir.join(&p), &[EmbeddingRow { feature: e.clone() }])?;
            files.video_embedding = Some(p);
        }
        files.subjective_quality = r.subjective_quality.map(SubjectiveEntry::Value);
        if let Some(w) = &r.window_embeddings {
            let p = path("window_embeddings");
            let mut by_id = BTreeMap::new();
            by_id.insert(r.video_id.clone(), w.clone());
            write_window_embeddings(&dir.join(&p), &by_id)?;
            files.window_embeddings = Some(p);
        }
        videos.push(VideoEntry {
            video_id: r.video_id.clone(),
            model_id: r.model_id.clone(),
            track: r.track,
            files,
            complete_to: r.complete_to,
        });
    }
    let manifest = Manifest {
        tracks,
        models: dataset.models.clone(),
        videos,
    };
    let manifest_path = dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    write_file(&manifest_path, text.as_bytes())?;
    Ok(manifest_path)
}
