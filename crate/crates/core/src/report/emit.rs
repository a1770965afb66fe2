use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::MetricReport;
use crate::error::{Error, Result};
use crate::metric::{Direction, Metric};
use crate::model::Track;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ReportFormat {
    Json,
    Markdown,
}

impl ReportFormat {
    pub fn file_name(self) -> &'static str {
        match self {
            ReportFormat::Json => "report.json",
            ReportFormat::Markdown => "leaderboard.md",
        }
    }
}

/// Parses a comma-separated list such as `json,markdown`.
pub fn parse_formats(list: &str) -> Result<Vec<ReportFormat>> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let f = match item.to_ascii_lowercase().as_str() {
            "json" => ReportFormat::Json,
            "markdown" | "md" => ReportFormat::Markdown,
            other => return Err(Error::Config(format!("unknown format '{other}'"))),
        };
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out.sort();
    Ok(out)
}

/// Canonical JSON: keys sorted at every level, two-space indent, trailing newline.
pub fn render_json(report: &MetricReport) -> Result<String> {
    let value = serde_json::to_value(report).map_err(|e| Error::Invalid(e.to_string()))?;
    let mut text = serde_json::to_string_pretty(&value).map_err(|e| Error::Invalid(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn track_title(track: &str) -> String {
    match serde_json::from_value::<Track>(serde_json::Value::String(track.to_string())) {
        Ok(t) => t.title().to_string(),
        Err(_) => track.to_string(),
    }
}

fn cell(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => "–".to_string(),
    }
}

pub fn render_markdown(report: &MetricReport) -> Result<String> {
    let mut md = String::from("# Leaderboard\n");
    for (track, ranking) in &report.ranks {
        let metrics = ranking
            .metrics
            .iter()
            .map(|n| n.parse::<Metric>())
            .collect::<Result<Vec<_>>>()?;
        if metrics.is_empty() {
            continue;
        }
        let _ = write!(md, "\n## {}\n\n", track_title(track));

        let mut groups = String::from("| Model |");
        let mut names = String::from("| |");
        let mut align = String::from("|---|");
        let mut previous = None;
        for m in &metrics {
            let family = m.family();
            if previous == Some(family) {
                groups.push_str(" |");
            } else {
                let _ = write!(groups, " {} |", family.title());
                previous = Some(family);
            }
            let arrow = match m.direction() {
                Direction::LowerBetter => "↓",
                Direction::HigherBetter => "↑",
            };
            let _ = write!(names, " **{} {arrow}** |", m.label());
            align.push_str("---:|");
        }
        groups.push_str(" Avg. Rank |");
        names.push_str(" **↓** |");
        align.push_str("---:|");
        let _ = writeln!(md, "{groups}\n{align}\n{names}");

        let mut models: Vec<(&String, Option<f64>)> = report
            .per_model
            .iter()
            .filter(|(_, by_track)| by_track.contains_key(track))
            .map(|(m, _)| (m, ranking.ranks.get(m).copied()))
            .collect();
        models.sort_by(|a, b| match (a.1, b.1) {
            (Some(x), Some(y)) => x.total_cmp(&y).then_with(|| a.0.cmp(b.0)),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.0.cmp(b.0),
        });
        for (model, avg) in models {
            let values = &report.per_model[model][track];
            let _ = write!(md, "| {model} |");
            for m in &metrics {
                let _ = write!(md, " {} |", cell(values.get(m.name()).copied().flatten()));
            }
            let avg = avg.map_or_else(|| "–".to_string(), |r| format!("{r:.2}"));
            let _ = writeln!(md, " {avg} |");
        }
        let _ = writeln!(md, "\n_{}_", ranking.note);

        if !ranking.excluded.is_empty() {
            md.push_str("\nExcluded from ranking:\n\n");
            for (model, missing) in &ranking.excluded {
                let _ = writeln!(md, "- {model}: missing {}", missing.join(", "));
            }
        }
        let undefined: Vec<_> = report
            .undefined
            .iter()
            .filter(|u| {
                report.per_video[&u.model_id]
                    .get(&u.video_id)
                    .is_some_and(|v| v.track.as_str() == track)
            })
            .collect();
        if !undefined.is_empty() {
            md.push_str("\nUndefined values:\n\n");
            for u in undefined {
                let _ = writeln!(md, "- {} / {} / {}: {}", u.model_id, u.video_id, u.metric, u.reason);
            }
        }
    }
    Ok(md)
}

/// Writes each requested format into `out_dir`; returns the written paths.
pub fn emit(report: &MetricReport, out_dir: &Path, formats: &[ReportFormat]) -> Result<Vec<PathBuf>> {
    if formats.is_empty() || report.config_snapshot.metrics.values().all(Vec::is_empty) {
        return Err(Error::NothingToReport);
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut paths = Vec::new();
    for &f in formats {
        let text = match f {
            ReportFormat::Json => render_json(report)?,
            ReportFormat::Markdown => render_markdown(report)?,
        };
        let path = out_dir.join(f.file_name());
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        paths.push(path);
    }
    Ok(paths)
}
