//! Metric catalogue: names, families, ranking directions and selection.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::Track;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    LowerBetter,
    HigherBetter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    Distribution,
    Quality,
    Consistency,
    Alignment,
}

impl Family {
    pub fn title(self) -> &'static str {
        match self {
            Family::Distribution => "Distribution",
            Family::Quality => "Quality",
            Family::Consistency => "Temporal Consistency",
            Family::Alignment => "Trajectory Alignment",
        }
    }
}

/// Leaderboard columns, in display order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    Fvd,
    Ftd,
    SubjectiveQuality,
    ObjectiveQuality,
    TrajectoryQuality,
    VideoConsistency,
    AgentConsistency,
    AgentMissing,
    TrajectoryConsistency,
    Ade,
    Dtw,
}

impl Metric {
    pub const ALL: [Metric; 11] = [
        Metric::Fvd,
        Metric::Ftd,
        Metric::SubjectiveQuality,
        Metric::ObjectiveQuality,
        Metric::TrajectoryQuality,
        Metric::VideoConsistency,
        Metric::AgentConsistency,
        Metric::AgentMissing,
        Metric::TrajectoryConsistency,
        Metric::Ade,
        Metric::Dtw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Fvd => "fvd",
            Metric::Ftd => "ftd",
            Metric::SubjectiveQuality => "subjective_quality",
            Metric::ObjectiveQuality => "objective_quality",
            Metric::TrajectoryQuality => "trajectory_quality",
            Metric::VideoConsistency => "video_consistency",
            Metric::AgentConsistency => "agent_consistency",
            Metric::AgentMissing => "agent_missing",
            Metric::TrajectoryConsistency => "trajectory_consistency",
            Metric::Ade => "ade",
            Metric::Dtw => "dtw",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Metric::Fvd => "FVD",
            Metric::Ftd => "FTD",
            Metric::SubjectiveQuality => "Subjective Quality",
            Metric::ObjectiveQuality => "Objective Quality",
            Metric::TrajectoryQuality => "Trajectory Quality",
            Metric::VideoConsistency => "Video Consist",
            Metric::AgentConsistency => "Agent Consist",
            Metric::AgentMissing => "Agent Missing",
            Metric::TrajectoryConsistency => "Trajectory Consist",
            Metric::Ade => "ADE",
            Metric::Dtw => "DTW",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            Metric::Fvd | Metric::Ftd | Metric::Ade | Metric::Dtw => Direction::LowerBetter,
            _ => Direction::HigherBetter,
        }
    }

    pub fn family(self) -> Family {
        match self {
            Metric::Fvd | Metric::Ftd => Family::Distribution,
            Metric::SubjectiveQuality | Metric::ObjectiveQuality | Metric::TrajectoryQuality => {
                Family::Quality
            }
            Metric::VideoConsistency
            | Metric::AgentConsistency
            | Metric::AgentMissing
            | Metric::TrajectoryConsistency => Family::Consistency,
            Metric::Ade | Metric::Dtw => Family::Alignment,
        }
    }

    /// Computed over a whole model's video set rather than per video.
    pub fn is_distributional(self) -> bool {
        self.family() == Family::Distribution
    }

    pub fn spec(self) -> MetricSpec {
        MetricSpec {
            name: self.name().to_string(),
            direction: self.direction(),
            family: self.family(),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == key || (key == "mmp" && *m == Metric::ObjectiveQuality))
            .ok_or_else(|| Error::Invalid(format!("unknown metric `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricSpec {
    pub name: String,
    pub direction: Direction,
    pub family: Family,
}

/// Which metrics to compute.
///
/// The default computes every metric, restricting the alignment family to
/// the ego-conditioned track. An explicit list applies to every track, so
/// asking for ADE over open-domain records fails validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MetricSelection {
    explicit: Option<BTreeSet<Metric>>,
}

impl MetricSelection {
    pub fn all() -> Self {
        Self::default()
    }

    pub fn only(metrics: impl IntoIterator<Item = Metric>) -> Self {
        MetricSelection {
            explicit: Some(metrics.into_iter().collect()),
        }
    }

    /// Parses a comma-separated list; `all` selects the default set.
    pub fn parse(list: &str) -> Result<Self, Error> {
        if list.trim().eq_ignore_ascii_case("all") {
            return Ok(Self::all());
        }
        let metrics = list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(str::parse)
            .collect::<Result<BTreeSet<Metric>, _>>()?;
        Ok(MetricSelection {
            explicit: Some(metrics),
        })
    }

    pub fn is_empty(&self) -> bool {
        self.explicit.as_ref().is_some_and(BTreeSet::is_empty)
    }

    pub fn for_track(&self, track: Track) -> Vec<Metric> {
        match &self.explicit {
            Some(set) => set.iter().copied().collect(),
            None => Metric::ALL
                .into_iter()
                .filter(|m| m.family() != Family::Alignment || track == Track::EgoConditioned)
                .collect(),
        }
    }
}
