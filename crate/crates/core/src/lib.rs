//! Evaluation engine for generated driving videos: distribution distances,
//! trajectory and video quality, temporal consistency and trajectory
//! alignment, aggregated into per-model reports and average ranks.

pub mod alignment;
pub mod completion;
pub mod config;
pub mod consistency;
pub mod error;
pub mod exec;
pub mod fixture;
pub mod flicker;
pub mod frechet;
pub mod io;
pub mod kinematics;
pub mod metric;
pub mod model;
pub mod report;
pub mod validate;

pub use config::EngineConfig;
pub use error::{Error, Result};
pub use exec::Execution;
pub use metric::{Metric, MetricSelection};
pub use model::{Track, Trajectory, VideoRecord};
pub use report::{run, MetricReport, RunError, RunOptions};
