//! Up-front check that every requested metric is computable.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::EngineConfig;
use crate::flicker::MIN_SERIES_LEN;
use crate::io::{Dataset, TrackReference};
use crate::kinematics::MIN_PROFILE_POINTS;
use crate::metric::{Metric, MetricSelection};
use crate::model::{Track, VideoRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Severity {
    /// The metric cannot be computed; the run is refused.
    Error,
    /// The metric will be undefined for this subject and skipped.
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationEntry {
    pub metric: String,
    /// A video id, or a `model/track` or `reference/track` pair for set-level checks.
    pub subject: String,
    pub message: String,
    pub severity: Severity,
}

impl fmt::Display for ValidationEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: [{}] {}: {}", self.metric, self.subject, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub entries: Vec<ValidationEntry>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn errors(&self) -> impl Iterator<Item = &ValidationEntry> {
        self.entries.iter().filter(|e| e.severity == Severity::Error)
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }

    fn push(&mut self, metric: Metric, subject: impl Into<String>, message: impl Into<String>, severity: Severity) {
        self.entries.push(ValidationEntry {
            metric: metric.name().to_string(),
            subject: subject.into(),
            message: message.into(),
            severity,
        });
    }

    fn error(&mut self, metric: Metric, subject: impl Into<String>, message: impl Into<String>) {
        self.push(metric, subject, message, Severity::Error);
    }
}

pub fn validate_dataset(dataset: &Dataset, selection: &MetricSelection, cfg: &EngineConfig) -> ValidationReport {
    validate(&dataset.records, &dataset.tracks, selection, cfg)
}

/// Lists every record (or record set) missing an input a requested metric
/// needs. Trajectory lengths are checked as given, so pose completion should
/// run first.
pub fn validate(
    records: &[VideoRecord],
    references: &[TrackReference],
    selection: &MetricSelection,
    cfg: &EngineConfig,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    for r in records {
        for metric in selection.for_track(r.track) {
            check_record(&mut report, r, metric, cfg);
        }
    }

    let mut groups: BTreeMap<(Track, &str), Vec<&VideoRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.track, r.model_id.as_str())).or_default().push(r);
    }
    for ((track, model), group) in &groups {
        let metrics = selection.for_track(*track);
        let reference = references.iter().find(|t| t.track == *track);
        let subject = format!("{model}/{track}");
        if metrics.contains(&Metric::Fvd) {
            check_fvd(&mut report, &subject, group, reference, *track);
        }
        if metrics.contains(&Metric::Ftd) {
            check_ftd(&mut report, &subject, group, reference, *track, cfg);
        }
    }
    report
}

fn check_record(report: &mut ValidationReport, r: &VideoRecord, metric: Metric, cfg: &EngineConfig) {
    let id = r.video_id.as_str();
    let traj_len = r.trajectory.len();
    match metric {
        Metric::Fvd => {
            if r.video_embedding.is_none() {
                report.error(metric, id, "video_embedding missing");
            }
        }
        Metric::Ftd => {
            if traj_len < cfg.ftd.horizon {
                report.error(
                    metric,
                    id,
                    format!("trajectory too short: {traj_len} points, horizon {}", cfg.ftd.horizon),
                );
            }
        }
        Metric::SubjectiveQuality => {
            if r.subjective_quality.is_none() {
                report.error(metric, id, "subjective_quality missing");
            }
        }
        Metric::ObjectiveQuality => match &r.luminance {
            None => report.error(metric, id, "luminance missing"),
            Some(l) if l.len() < MIN_SERIES_LEN => report.error(
                metric,
                id,
                format!("luminance too short: {} frames, need {MIN_SERIES_LEN}", l.len()),
            ),
            Some(_) => {}
        },
        Metric::TrajectoryQuality | Metric::TrajectoryConsistency => {
            if traj_len < MIN_PROFILE_POINTS {
                report.error(
                    metric,
                    id,
                    format!("trajectory too short: {traj_len} points, need {MIN_PROFILE_POINTS}"),
                );
            }
        }
        Metric::VideoConsistency => match &r.frame_features {
            None => report.error(metric, id, "frame_features missing"),
            Some(ff) => {
                if ff.per_frame.len() < 2 {
                    report.error(metric, id, "frame_features need at least 2 frames");
                }
                if ff.flow_median.is_empty() {
                    report.error(metric, id, "flow missing");
                }
            }
        },
        Metric::AgentConsistency => {
            if r.agents.is_empty() {
                report.push(metric, id, "no agents", Severity::Warning);
            } else if r.agents.iter().all(|a| a.observations.len() < 2) {
                report.push(metric, id, "no agent observed in 2 or more frames", Severity::Warning);
            }
        }
        Metric::AgentMissing => {}
        Metric::Ade | Metric::Dtw => {
            if r.reference_trajectory.is_none() {
                report.error(metric, id, "reference_trajectory required");
            }
        }
    }
}

fn check_fvd(
    report: &mut ValidationReport,
    subject: &str,
    group: &[&VideoRecord],
    reference: Option<&TrackReference>,
    track: Track,
) {
    let metric = Metric::Fvd;
    let embedded: Vec<&Vec<f64>> = group.iter().filter_map(|r| r.video_embedding.as_ref()).collect();
    if group.len() < 2 {
        report.error(metric, subject, format!("need at least 2 videos, got {}", group.len()));
    }
    match reference.and_then(|t| t.video_embeddings.as_ref()) {
        None => report.error(metric, format!("reference/{track}"), "reference video_embeddings missing"),
        Some(set) => {
            if set.len() < 2 {
                report.error(metric, format!("reference/{track}"), "need at least 2 reference embeddings");
            }
            if let Some(bad) = embedded.iter().find(|e| e.len() != set.dim()) {
                report.error(
                    metric,
                    subject,
                    format!("embedding dimension {} differs from reference {}", bad.len(), set.dim()),
                );
            }
        }
    }
    if let Some(first) = embedded.first() {
        if embedded.iter().any(|e| e.len() != first.len()) {
            report.error(metric, subject, "embedding dimension varies across videos");
        }
    }
}

fn check_ftd(
    report: &mut ValidationReport,
    subject: &str,
    group: &[&VideoRecord],
    reference: Option<&TrackReference>,
    track: Track,
    cfg: &EngineConfig,
) {
    let metric = Metric::Ftd;
    let ref_subject = format!("reference/{track}");
    if group.len() < 2 {
        report.error(metric, subject, format!("need at least 2 videos, got {}", group.len()));
    }
    let Some(reference) = reference.filter(|t| !t.trajectories.is_empty()) else {
        report.error(metric, ref_subject, "reference trajectories missing");
        return;
    };
    if reference.trajectories.len() < 2 {
        report.error(metric, &ref_subject, "need at least 2 reference trajectories");
    }
    for (id, t) in &reference.trajectories {
        if t.len() < cfg.ftd.horizon {
            report.error(
                metric,
                &ref_subject,
                format!("reference trajectory `{id}` too short: {} points", t.len()),
            );
        }
    }
    let gen_windows = group.iter().filter(|r| r.window_embeddings.is_some()).count();
    let ref_windows = reference.window_embeddings.is_some();
    let all = gen_windows == group.len() && ref_windows;
    let none = gen_windows == 0 && !ref_windows;
    if !(all || none) {
        report.error(
            metric,
            subject,
            "window embeddings must be supplied for every video and the reference set, or for none",
        );
    }
}
