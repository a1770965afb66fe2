//! Effective engine parameters and the key-value override file.
//!
//! The override file is flat `key = value` text (a TOML subset):
//!
//! ```text
//! # FTD windowing
//! horizon = 10
//! stride = 5
//! fvd_epsilon = 1e-6
//! jitter_deg = 0.25
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::completion::DEFAULT_JITTER_DEG;
use crate::consistency::ConsistencyConfig;
use crate::error::{Error, Result};
use crate::flicker::MmpConfig;
use crate::frechet::FtdConfig;
use crate::kinematics::QualityConfig;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub ftd: FtdConfig,
    pub fvd_epsilon: f64,
    pub quality: QualityConfig,
    pub mmp: MmpConfig,
    pub consistency: ConsistencyConfig,
    pub jitter_deg: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            ftd: FtdConfig::default(),
            fvd_epsilon: 1e-6,
            quality: QualityConfig::default(),
            mmp: MmpConfig::default(),
            consistency: ConsistencyConfig::default(),
            jitter_deg: DEFAULT_JITTER_DEG,
        }
    }
}

/// Every key accepted in an override file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Overrides {
    horizon: Option<usize>,
    stride: Option<usize>,
    ftd_epsilon: Option<f64>,
    shrinkage_lambda: Option<f64>,
    fvd_epsilon: Option<f64>,
    v_static: Option<f64>,
    v_ref: Option<f64>,
    k: Option<f64>,
    s_jerk: Option<f64>,
    s_lat: Option<f64>,
    s_yaw: Option<f64>,
    min_path: Option<f64>,
    band_hz: Option<f64>,
    thr: Option<f64>,
    low_cut_hz: Option<f64>,
    mmp_epsilon: Option<f64>,
    fps: Option<f64>,
    target_flow: Option<f64>,
    max_stride: Option<usize>,
    blend_first: Option<f64>,
    jitter_deg: Option<f64>,
}

impl EngineConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_str_overrides(&text)
    }

    /// Defaults with the keys in `text` overridden. A `horizon` override
    /// without a `stride` keeps the stride equal to the horizon.
    pub fn from_str_overrides(text: &str) -> Result<Self> {
        let o: Overrides = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut c = EngineConfig::default();
        macro_rules! set {
            ($($key:ident => $($field:ident).+;)*) => {
                $(if let Some(v) = o.$key { c.$($field).+ = v; })*
            };
        }
        set! {
            horizon => ftd.horizon;
            ftd_epsilon => ftd.epsilon;
            shrinkage_lambda => ftd.shrinkage_lambda;
            fvd_epsilon => fvd_epsilon;
            v_static => quality.v_static;
            v_ref => quality.v_ref;
            k => quality.k;
            s_jerk => quality.s_jerk;
            s_lat => quality.s_lat;
            s_yaw => quality.s_yaw;
            min_path => quality.min_path;
            band_hz => mmp.band_hz;
            thr => mmp.thr;
            low_cut_hz => mmp.low_cut_hz;
            mmp_epsilon => mmp.epsilon;
            fps => mmp.rate;
            target_flow => consistency.target_flow;
            max_stride => consistency.max_stride;
            blend_first => consistency.blend_first;
            jitter_deg => jitter_deg;
        }
        c.ftd.stride = o.stride.unwrap_or(c.ftd.horizon);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.ftd.validate()?;
        self.quality.validate()?;
        self.mmp.validate()?;
        self.consistency.validate()?;
        if self.fvd_epsilon.is_nan() || self.fvd_epsilon <= 0.0 {
            return Err(Error::Config(format!(
                "fvd_epsilon must be > 0, got {}",
                self.fvd_epsilon
            )));
        }
        if !(self.jitter_deg.is_finite() && self.jitter_deg >= 0.0) {
            return Err(Error::Config(format!(
                "jitter_deg must be >= 0, got {}",
                self.jitter_deg
            )));
        }
        Ok(())
    }
}
