//! Flicker test on frame-mean luminance: a clip passes when no narrow band
//! around the dominant non-DC frequency carries a meaningful share of the
//! AC power.

use std::path::Path;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{LuminanceSeries, VideoRecord};

pub const MIN_SERIES_LEN: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MmpConfig {
    /// Half-width of the band around the dominant frequency (Hz).
    pub band_hz: f64,
    /// Band-power ratio below which a clip passes.
    pub thr: f64,
    /// Dominant frequencies below this pass outright (Hz).
    pub low_cut_hz: f64,
    pub epsilon: f64,
    /// Frame rate assumed for luminance series (fps).
    pub rate: f64,
}

impl Default for MmpConfig {
    fn default() -> Self {
        MmpConfig {
            band_hz: 0.5,
            thr: 0.05,
            low_cut_hz: 0.2,
            epsilon: 1e-8,
            rate: 10.0,
        }
    }
}

impl MmpConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("band_hz", self.band_hz),
            ("thr", self.thr),
            ("low_cut_hz", self.low_cut_hz),
            ("mmp_epsilon", self.epsilon),
            ("fps", self.rate),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.low_cut_hz >= self.rate / 2.0 {
            return Err(Error::Config(format!(
                "low_cut_hz {} must be below Nyquist {}",
                self.low_cut_hz,
                self.rate / 2.0
            )));
        }
        Ok(())
    }
}

/// One bin of a one-sided periodogram.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralBin {
    pub frequency: f64,
    pub power: f64,
}

/// One-sided periodogram `|X_k|² / T` for `k = 0..=T/2`, no window, no detrend.
pub fn periodogram(series: &LuminanceSeries) -> Result<Vec<SpectralBin>> {
    let n = series.len();
    if n < MIN_SERIES_LEN {
        return Err(Error::TooShort {
            len: n,
            min: MIN_SERIES_LEN,
        });
    }
    let mut buf: Vec<Complex<f64>> = series.values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    Ok(buf[..=n / 2]
        .iter()
        .enumerate()
        .map(|(k, c)| SpectralBin {
            frequency: k as f64 * series.rate / n as f64,
            power: c.norm_sqr() / n as f64,
        })
        .collect())
}

/// Band-power analysis behind the pass/fail decision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlickerAnalysis {
    pub dominant_hz: Option<f64>,
    pub band_ratio: Option<f64>,
    pub pass: bool,
}

pub fn analyze(series: &LuminanceSeries, cfg: &MmpConfig) -> Result<FlickerAnalysis> {
    let bins = periodogram(series)?;
    let ac = &bins[1..];
    let total: f64 = ac.iter().map(|b| b.power).sum();
    if ac.iter().all(|b| b.power < cfg.epsilon) {
        return Ok(FlickerAnalysis {
            dominant_hz: None,
            band_ratio: None,
            pass: true,
        });
    }
    // First maximum wins on ties.
    let peak = ac
        .iter()
        .fold(ac[0], |best, b| if b.power > best.power { *b } else { best });
    let f_star = peak.frequency;
    if f_star < cfg.low_cut_hz {
        return Ok(FlickerAnalysis {
            dominant_hz: Some(f_star),
            band_ratio: None,
            pass: true,
        });
    }
    let band: f64 = ac
        .iter()
        .filter(|b| (b.frequency - f_star).abs() < cfg.band_hz)
        .map(|b| b.power)
        .sum();
    let ratio = band / (total + cfg.epsilon);
    Ok(FlickerAnalysis {
        dominant_hz: Some(f_star),
        band_ratio: Some(ratio),
        pass: ratio < cfg.thr,
    })
}

/// 1 when residual modulation is mitigated, 0 otherwise.
pub fn mmp(series: &LuminanceSeries, cfg: &MmpConfig) -> Result<u8> {
    Ok(u8::from(analyze(series, cfg)?.pass))
}

/// Fraction of clips that pass; each whole clip is one window.
pub fn objective_quality(records: &[&VideoRecord], cfg: &MmpConfig) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::NoVideos);
    }
    let mut passed = 0usize;
    for r in records {
        let lum = r
            .luminance
            .as_ref()
            .ok_or_else(|| Error::record(&r.video_id, "luminance", "luminance missing"))?;
        passed += mmp(lum, cfg)? as usize;
    }
    Ok(passed as f64 / records.len() as f64)
}

/// Mean luminance of every 8-bit PGM frame in `dir`, in file-name order.
pub fn luminance_from_pgm_dir(dir: &Path, rate: f64) -> Result<LuminanceSeries> {
    let mut frames: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext.eq_ignore_ascii_case("pgm")))
        .collect();
    frames.sort();
    let values = frames
        .iter()
        .map(|path| {
            let img = image::ImageReader::open(path)
                .map_err(|e| Error::io(path, e))?
                .with_guessed_format()
                .map_err(|e| Error::io(path, e))?
                .decode()
                .map_err(|e| Error::Parse {
                    path: path.clone(),
                    line: 0,
                    message: e.to_string(),
                })?;
            let luma = img.as_luma8().ok_or_else(|| Error::Parse {
                path: path.clone(),
                line: 0,
                message: "expected an 8-bit grayscale frame".into(),
            })?;
            let sum: u64 = luma.as_raw().iter().map(|&p| p as u64).sum();
            Ok(sum as f64 / luma.as_raw().len().max(1) as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    LuminanceSeries::new(values, rate)
}
