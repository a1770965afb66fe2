//! Finite-difference kinematics, trajectory quality and trajectory consistency.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Trajectory;

/// Minimum trajectory length for [`profile`].
pub const MIN_PROFILE_POINTS: usize = 5;

/// Guard on near-zero means in ratio statistics.
const MEAN_GUARD: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityConfig {
    /// Speed above which a trajectory counts as moving (m/s).
    pub v_static: f64,
    pub v_ref: f64,
    pub k: f64,
    pub s_jerk: f64,
    pub s_lat: f64,
    pub s_yaw: f64,
    /// Paths this short (m) or shorter get no comfort score.
    pub min_path: f64,
}

impl Default for QualityConfig {
    fn default() -> Self {
        QualityConfig {
            v_static: 0.1,
            v_ref: 6.0,
            k: 2.5,
            s_jerk: 1.0,
            s_lat: 1.0,
            s_yaw: 1.0,
            min_path: 1.0,
        }
    }
}

impl QualityConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("v_static", self.v_static),
            ("v_ref", self.v_ref),
            ("k", self.k),
            ("s_jerk", self.s_jerk),
            ("s_lat", self.s_lat),
            ("s_yaw", self.s_yaw),
            ("min_path", self.min_path),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn v_max(&self) -> f64 {
        self.k * self.v_ref
    }
}

/// Per-step kinematic signals of a trajectory. Every array has one entry per
/// trajectory point.
#[derive(Clone, Debug, PartialEq)]
pub struct KinematicProfile {
    pub dt: f64,
    pub velocity: Vec<(f64, f64)>,
    pub speed: Vec<f64>,
    pub accel: Vec<(f64, f64)>,
    pub jerk: Vec<(f64, f64)>,
    pub heading: Vec<f64>,
    pub yaw_rate: Vec<f64>,
    /// `None` where speed is below `v_static`.
    pub curvature: Vec<Option<f64>>,
    pub path_length: f64,
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(2.0 * PI) - PI;
    if w <= -PI {
        w + 2.0 * PI
    } else {
        w
    }
}

/// Centered differences in the interior, one-sided at both ends.
pub fn gradient(values: &[f64], dt: f64) -> Vec<f64> {
    gradient_with(values, dt, |a, b| b - a)
}

fn gradient_with(values: &[f64], dt: f64, diff: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let n = values.len();
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|i| {
                if i == 0 {
                    diff(values[0], values[1]) / dt
                } else if i == n - 1 {
                    diff(values[n - 2], values[n - 1]) / dt
                } else {
                    diff(values[i - 1], values[i + 1]) / (2.0 * dt)
                }
            })
            .collect(),
    }
}

fn gradient2(xs: &[f64], ys: &[f64], dt: f64) -> (Vec<f64>, Vec<f64>) {
    (gradient(xs, dt), gradient(ys, dt))
}

pub fn profile(traj: &Trajectory, v_static: f64) -> Result<KinematicProfile> {
    let n = traj.len();
    if n < MIN_PROFILE_POINTS {
        return Err(Error::TooShort {
            len: n,
            min: MIN_PROFILE_POINTS,
        });
    }
    let dt = traj.dt();
    let (xs, ys): (Vec<f64>, Vec<f64>) = traj.xy().unzip();
    let (vx, vy) = gradient2(&xs, &ys, dt);
    let (ax, ay) = gradient2(&vx, &vy, dt);
    let (jx, jy) = gradient2(&ax, &ay, dt);
    let speed: Vec<f64> = vx.iter().zip(&vy).map(|(x, y)| x.hypot(*y)).collect();
    let heading: Vec<f64> = vx.iter().zip(&vy).map(|(x, y)| y.atan2(*x)).collect();
    let yaw_rate = gradient_with(&heading, dt, |a, b| wrap_angle(b - a));
    let curvature = (0..n)
        .map(|i| {
            (speed[i] >= v_static)
                .then(|| (vx[i] * ay[i] - vy[i] * ax[i]).abs() / speed[i].powi(3))
        })
        .collect();
    let path_length = xs
        .windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| (x[1] - x[0]).hypot(y[1] - y[0]))
        .sum();
    let zip = |a: Vec<f64>, b: Vec<f64>| a.into_iter().zip(b).collect::<Vec<_>>();
    Ok(KinematicProfile {
        dt,
        velocity: zip(vx, vy),
        speed,
        accel: zip(ax, ay),
        jerk: zip(jx, jy),
        heading,
        yaw_rate,
        curvature,
        path_length,
    })
}

impl KinematicProfile {
    pub fn len(&self) -> usize {
        self.speed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.speed.is_empty()
    }

    pub fn is_moving(&self, v_static: f64) -> bool {
        self.speed.iter().any(|&s| s > v_static)
    }

    /// Interior indices; endpoints carry one-sided differences and are left
    /// out of peak and RMS statistics.
    fn interior(&self) -> std::ops::Range<usize> {
        1..self.len() - 1
    }

    /// Peak |longitudinal jerk|, |lateral acceleration| and |yaw rate| over
    /// interior moving samples.
    pub fn peaks(&self, v_static: f64) -> ComfortPeaks {
        let mut peaks = ComfortPeaks::default();
        for i in self.interior() {
            let s = self.speed[i];
            if s < v_static {
                continue;
            }
            let (ux, uy) = (self.velocity[i].0 / s, self.velocity[i].1 / s);
            let (jx, jy) = self.jerk[i];
            let (ax, ay) = self.accel[i];
            peaks.longitudinal_jerk = peaks.longitudinal_jerk.max((jx * ux + jy * uy).abs());
            peaks.lateral_accel = peaks.lateral_accel.max((ax * uy - ay * ux).abs());
            peaks.yaw_rate = peaks.yaw_rate.max(self.yaw_rate[i].abs());
        }
        peaks
    }

    /// RMS of defined interior curvature, `None` if no interior sample is defined.
    pub fn rms_curvature(&self) -> Option<f64> {
        let defined: Vec<f64> = self.interior().filter_map(|i| self.curvature[i]).collect();
        if defined.is_empty() {
            return None;
        }
        Some((defined.iter().map(|k| k * k).sum::<f64>() / defined.len() as f64).sqrt())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComfortPeaks {
    pub longitudinal_jerk: f64,
    pub lateral_accel: f64,
    pub yaw_rate: f64,
}

/// Geometric mean of inverse-transformed per-meter comfort peaks.
///
/// `None` for non-moving trajectories and paths no longer than `min_path`.
pub fn comfort_score(traj: &Trajectory, cfg: &QualityConfig) -> Result<Option<f64>> {
    let p = profile(traj, cfg.v_static)?;
    Ok(comfort_from_profile(&p, cfg))
}

pub fn comfort_from_profile(p: &KinematicProfile, cfg: &QualityConfig) -> Option<f64> {
    if !p.is_moving(cfg.v_static) || p.path_length <= cfg.min_path {
        return None;
    }
    let peaks = p.peaks(cfg.v_static);
    let score = |peak: f64, scale: f64| 1.0 / (1.0 + (peak / p.path_length) / scale);
    let product = score(peaks.longitudinal_jerk, cfg.s_jerk)
        * score(peaks.lateral_accel, cfg.s_lat)
        * score(peaks.yaw_rate, cfg.s_yaw);
    Some(product.cbrt())
}

/// `min(1, ln(1 + mean speed) / ln(1 + k * v_ref))`; 0 when never moving.
pub fn motion_score(traj: &Trajectory, cfg: &QualityConfig) -> Result<f64> {
    let p = profile(traj, cfg.v_static)?;
    Ok(motion_from_profile(&p, cfg))
}

pub fn motion_from_profile(p: &KinematicProfile, cfg: &QualityConfig) -> f64 {
    if !p.is_moving(cfg.v_static) {
        return 0.0;
    }
    let mean = p.speed.iter().sum::<f64>() / p.len() as f64;
    (mean.ln_1p() / cfg.v_max().ln_1p()).min(1.0)
}

/// `1 / (1 + κ_rms)`; `None` when never moving.
pub fn curvature_score(traj: &Trajectory, cfg: &QualityConfig) -> Result<Option<f64>> {
    let p = profile(traj, cfg.v_static)?;
    Ok(curvature_from_profile(&p, cfg))
}

pub fn curvature_from_profile(p: &KinematicProfile, cfg: &QualityConfig) -> Option<f64> {
    if !p.is_moving(cfg.v_static) {
        return None;
    }
    p.rms_curvature().map(|k| 1.0 / (1.0 + k))
}

/// The three quality submetrics and their geometric mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QualityBreakdown {
    pub comfort: Option<f64>,
    pub motion: Option<f64>,
    pub curvature: Option<f64>,
    pub overall: Option<f64>,
}

pub fn quality_breakdown(traj: &Trajectory, cfg: &QualityConfig) -> Result<QualityBreakdown> {
    let p = profile(traj, cfg.v_static)?;
    let comfort = comfort_from_profile(&p, cfg);
    let motion = Some(motion_from_profile(&p, cfg));
    let curvature = curvature_from_profile(&p, cfg);
    Ok(QualityBreakdown {
        comfort,
        motion,
        curvature,
        overall: geometric_mean_defined(&[comfort, motion, curvature]),
    })
}

/// Equal-weight geometric mean of the defined submetrics.
pub fn trajectory_quality(traj: &Trajectory, cfg: &QualityConfig) -> Result<Option<f64>> {
    Ok(quality_breakdown(traj, cfg)?.overall)
}

fn geometric_mean_defined(values: &[Option<f64>]) -> Option<f64> {
    let defined: Vec<f64> = values.iter().flatten().copied().collect();
    if defined.is_empty() {
        return None;
    }
    if defined.iter().any(|&v| v <= 0.0) {
        return Some(0.0);
    }
    let log_mean = defined.iter().map(|v| v.ln()).sum::<f64>() / defined.len() as f64;
    Some(log_mean.exp())
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population standard deviation.
pub fn population_std(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
}

/// Mean of `exp(-std(v)/mean(v))` and `exp(-std(a)/mean|a|)` where `a` is the
/// scalar rate of change of speed.
pub fn trajectory_consistency(traj: &Trajectory) -> Result<f64> {
    let p = profile(traj, 0.0)?;
    Ok(consistency_from_speed(&p.speed, p.dt))
}

pub fn consistency_from_speed(speed: &[f64], dt: f64) -> f64 {
    let r_v = population_std(speed) / mean(speed).max(MEAN_GUARD);
    let s_v = (-r_v).exp();
    let accel = gradient(speed, dt);
    let mean_abs = accel.iter().map(|a| a.abs()).sum::<f64>() / accel.len() as f64;
    let s_a = if mean_abs < MEAN_GUARD {
        1.0
    } else {
        (-population_std(&accel) / mean_abs).exp()
    };
    0.5 * (s_v + s_a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_fn(n: usize, dt: f64, f: impl Fn(f64) -> (f64, f64)) -> Trajectory {
        let xy: Vec<(f64, f64)> = (0..n).map(|i| f(i as f64 * dt)).collect();
        Trajectory::from_xy(&xy, 1.0 / dt).unwrap()
    }

    fn straight(n: usize, speed: f64) -> Trajectory {
        from_fn(n, 0.1, |t| (speed * t, 0.0))
    }

    fn circle(n: usize, radius: f64) -> Trajectory {
        // 100 samples per revolution at dt = 0.1 s.
        let omega = 2.0 * PI / (100.0 * 0.1);
        from_fn(n, 0.1, |t| {
            (radius * (omega * t).cos(), radius * (omega * t).sin())
        })
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
        assert!((wrap_angle(-7.0) - (-7.0 + 2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn straight_line_profile() {
        let p = profile(&straight(30, 5.0), 0.1).unwrap();
        for i in 0..p.len() {
            assert!((p.speed[i] - 5.0).abs() < 1e-9);
            assert!(p.accel[i].0.abs() < 1e-7 && p.accel[i].1 == 0.0);
            assert!(p.jerk[i].0.abs() < 1e-5);
            assert_eq!(p.yaw_rate[i], 0.0);
            assert!(p.curvature[i].unwrap() < 1e-9);
        }
        assert!((p.path_length - 5.0 * 2.9).abs() < 1e-9);
    }

    #[test]
    fn circle_curvature_is_inverse_radius() {
        let p = profile(&circle(100, 10.0), 0.1).unwrap();
        for i in 2..p.len() - 2 {
            let k = p.curvature[i].unwrap();
            assert!((k - 0.1).abs() / 0.1 < 0.02, "index {i}: {k}");
        }
    }

    #[test]
    fn heading_wrap_produces_no_spikes() {
        // Westbound with a small lateral oscillation: heading crosses ±π.
        let t = from_fn(60, 0.1, |t| (-5.0 * t, 0.05 * (3.0 * t).sin()));
        let p = profile(&t, 0.1).unwrap();
        assert!(p.heading.iter().any(|h| *h > 3.0) && p.heading.iter().any(|h| *h < -3.0));
        assert!(p.yaw_rate.iter().all(|w| w.abs() < 1.0), "{:?}", p.yaw_rate);
    }

    #[test]
    fn profile_needs_five_points() {
        assert!(matches!(
            profile(&straight(4, 1.0), 0.1),
            Err(Error::TooShort { len: 4, min: 5 })
        ));
    }

    #[test]
    fn static_trajectory_scores() {
        let cfg = QualityConfig::default();
        let t = Trajectory::from_xy(&[(1.0, 2.0); 20], 10.0).unwrap();
        assert_eq!(comfort_score(&t, &cfg).unwrap(), None);
        assert_eq!(curvature_score(&t, &cfg).unwrap(), None);
        assert_eq!(motion_score(&t, &cfg).unwrap(), 0.0);
        assert_eq!(trajectory_quality(&t, &cfg).unwrap(), Some(0.0));
    }

    #[test]
    fn short_path_gets_no_comfort() {
        let cfg = QualityConfig::default();
        // 0.5 m/s for 1.9 s: 0.95 m.
        let t = straight(20, 0.5);
        assert_eq!(comfort_score(&t, &cfg).unwrap(), None);
        assert!(curvature_score(&t, &cfg).unwrap().is_some());
    }

    #[test]
    fn straight_constant_speed_scores() {
        let cfg = QualityConfig::default();
        let t = straight(50, 5.0);
        assert!((comfort_score(&t, &cfg).unwrap().unwrap() - 1.0).abs() < 1e-6);
        assert!((curvature_score(&t, &cfg).unwrap().unwrap() - 1.0).abs() < 1e-9);
        let motion = motion_score(&t, &cfg).unwrap();
        assert!((motion - 6f64.ln() / 16f64.ln()).abs() < 1e-9);
        assert!((motion - 0.6462).abs() < 1e-4);
        let q = trajectory_quality(&t, &cfg).unwrap().unwrap();
        assert!((q - 0.8645).abs() < 1e-4, "{q}");
    }

    #[test]
    fn motion_saturates_at_v_max() {
        let cfg = QualityConfig::default();
        assert!((motion_score(&straight(30, 15.0), &cfg).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(motion_score(&straight(30, 25.0), &cfg).unwrap(), 1.0);
    }

    #[test]
    fn circle_curvature_score() {
        let cfg = QualityConfig::default();
        let s = curvature_score(&circle(100, 10.0), &cfg).unwrap().unwrap();
        assert!((s - 1.0 / 1.1).abs() / (1.0 / 1.1) < 0.02, "{s}");
    }

    // Oracle: triple numerical derivative of x(t) written out directly.
    fn brake_x(n: usize) -> Vec<f64> {
        let dt = 0.1;
        let mut x = vec![0.0];
        let mut v: f64 = 10.0;
        for i in 1..n {
            if (20..25).contains(&i) {
                v -= 1.0;
            }
            x.push(x[i - 1] + v * dt);
        }
        x
    }

    #[test]
    fn hard_brake_comfort_formula() {
        let cfg = QualityConfig::default();
        let xs = brake_x(50);
        let xy: Vec<(f64, f64)> = xs.iter().map(|&x| (x, 0.0)).collect();
        let t = Trajectory::from_xy(&xy, 10.0).unwrap();

        let d = |s: &[f64]| -> Vec<f64> {
            let n = s.len();
            (0..n)
                .map(|i| match i {
                    0 => (s[1] - s[0]) / 0.1,
                    i if i == n - 1 => (s[n - 1] - s[n - 2]) / 0.1,
                    i => (s[i + 1] - s[i - 1]) / 0.2,
                })
                .collect()
        };
        let jerk = d(&d(&d(&xs)));
        let peak = jerk[1..49].iter().fold(0.0f64, |m, j| m.max(j.abs()));
        let length = xs[49] - xs[0];
        let s_jerk = 1.0 / (1.0 + peak / length);
        assert!(peak > 10.0);

        let comfort = comfort_score(&t, &cfg).unwrap().unwrap();
        assert!((comfort - s_jerk.cbrt()).abs() < 1e-12, "{comfort} vs {}", s_jerk.cbrt());
    }

    #[test]
    fn consistency_of_constant_speed_line() {
        let s = trajectory_consistency(&straight(40, 7.0)).unwrap();
        assert!((s - 1.0).abs() < 1e-9);
    }

    #[test]
    fn consistency_of_alternating_speed() {
        let speed: Vec<f64> = (0..20).map(|i| if i % 2 == 0 { 2.0 } else { 4.0 }).collect();
        // Acceleration: interior centered differences vanish; the one-sided
        // ends are (4 - 2)/0.1 = 20 and (4 - 2)/0.1 = 20.
        let mut accel = [0.0; 20];
        accel[0] = 20.0;
        accel[19] = 20.0;
        let mean_abs = accel.iter().map(|a: &f64| a.abs()).sum::<f64>() / 20.0;
        let mean_a = accel.iter().sum::<f64>() / 20.0;
        let var_a = accel.iter().map(|a| (a - mean_a).powi(2)).sum::<f64>() / 20.0;
        let s_a = (-(var_a.sqrt()) / mean_abs).exp();
        let s_v = (-1.0f64 / 3.0).exp();
        assert!((s_v - 0.7165).abs() < 1e-4);
        let got = consistency_from_speed(&speed, 0.1);
        assert!((got - 0.5 * (s_v + s_a)).abs() < 1e-12);
    }

    #[test]
    fn stop_go_scores_below_cruise() {
        let cruise = from_fn(100, 0.1, |t| (8.0 * t + 0.2 * (0.3 * t).sin(), 0.0));
        let stop_go = from_fn(100, 0.1, |t| (4.0 * t - 4.0 * (1.5 * t).sin() / 1.5, 0.0));
        let a = trajectory_consistency(&cruise).unwrap();
        let b = trajectory_consistency(&stop_go).unwrap();
        assert!(b < a, "stop-go {b} vs cruise {a}");
    }

    #[test]
    fn population_std_convention() {
        assert!((population_std(&[2.0, 4.0, 2.0, 4.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rigid_motion_invariance() {
        let cfg = QualityConfig::default();
        let t = from_fn(80, 0.1, |t| (6.0 * t, 3.0 * (0.4 * t).sin()));
        let moved = t.transformed(1.1, -40.0, 25.0);
        let a = quality_breakdown(&t, &cfg).unwrap();
        let b = quality_breakdown(&moved, &cfg).unwrap();
        let close = |x: Option<f64>, y: Option<f64>| (x.unwrap() - y.unwrap()).abs() < 1e-9;
        assert!(close(a.comfort, b.comfort));
        assert!(close(a.motion, b.motion));
        assert!(close(a.curvature, b.curvature));
        let ca = trajectory_consistency(&t).unwrap();
        let cb = trajectory_consistency(&moved).unwrap();
        assert!((ca - cb).abs() < 1e-9);
    }

    #[test]
    fn velocity_error_is_second_order() {
        let path = |t: f64| (t.sin() * 4.0, (0.5 * t).cos() * 3.0);
        let vel = |t: f64| (4.0 * t.cos(), -1.5 * (0.5 * t).sin());
        let max_err = |dt: f64| {
            let n = (4.0 / dt).round() as usize + 1;
            let p = profile(&from_fn(n, dt, path), 0.1).unwrap();
            (1..n - 1)
                .map(|i| {
                    let (ex, ey) = vel(i as f64 * dt);
                    (p.velocity[i].0 - ex).hypot(p.velocity[i].1 - ey)
                })
                .fold(0.0, f64::max)
        };
        let ratio = max_err(0.1) / max_err(0.05);
        assert!(ratio > 3.5, "{ratio}");
    }
}
