//! Acceptance checks. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any fails.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use dgbench::alignment::{ade_xy, dtw_xy};
use dgbench::completion::{complete, PoseTrack};
use dgbench::consistency::{video_consistency, ConsistencyConfig};
use dgbench::fixture::{synthetic_dataset, write_synthetic, FixtureSpec};
use dgbench::flicker::{analyze, mmp, MmpConfig};
use dgbench::frechet::{fvd, frechet_distance, psd_sqrt, GaussianMoments};
use dgbench::io::{load_manifest, write_trajectory};
use dgbench::kinematics::{
    comfort_score, curvature_score, motion_score, profile, trajectory_consistency, QualityConfig,
};
use dgbench::metric::Metric;
use dgbench::model::{EmbeddingSet, FlowSample, FrameFeature, FrameFeatures, LuminanceSeries, Track, Trajectory};
use dgbench::report::{rank, MetricReport};

const FRECHET_TOL: f64 = 1e-8;
const FRECHET_BUDGET: Duration = Duration::from_secs(1);
const SQRT_REL_TOL: f64 = 1e-6;
const SQRT_BUDGET: Duration = Duration::from_secs(10);
const ADE_TOL: f64 = 1e-12;
const UNIT_SCORE_TOL: f64 = 1e-9;
const CIRCLE_REL_TOL: f64 = 0.02;
const CONVERGENCE_MIN_RATIO: f64 = 3.5;
const JITTER_REL_TOL: f64 = 0.10;
const END_TO_END_BUDGET: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, ok: impl Into<String>, why: impl Into<String>) -> Outcome {
    if cond {
        Ok(ok.into())
    } else {
        Err(why.into())
    }
}

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn moments(mean: &[f64], var: &[f64]) -> GaussianMoments {
    GaussianMoments {
        mean: DVector::from_column_slice(mean),
        cov: DMatrix::from_diagonal(&DVector::from_column_slice(var)),
    }
}

fn closed_form(m1: &[f64], v1: &[f64], m2: &[f64], v2: &[f64], eps: f64) -> f64 {
    let mut d = 0.0;
    for i in 0..m1.len() {
        d += (m1[i] - m2[i]).powi(2);
        d += ((v1[i] + eps).sqrt() - (v2[i] + eps).sqrt()).powi(2);
    }
    d
}

fn frechet_oracle() -> Outcome {
    let start = Instant::now();
    let eps = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for case in 0..200 {
        let dim = if case % 2 == 0 { 1 } else { 2 };
        let draw = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| -> Vec<f64> {
            (0..dim).map(|_| rng.random_range(lo..hi)).collect()
        };
        let (m1, m2) = (draw(&mut rng, -5.0, 5.0), draw(&mut rng, -5.0, 5.0));
        let (v1, v2) = (draw(&mut rng, 0.01, 9.0), draw(&mut rng, 0.01, 9.0));
        let got = frechet_distance(&moments(&m1, &v1), &moments(&m2, &v2), eps).map_err(|e| e.to_string())?;
        worst = worst.max((got - closed_form(&m1, &v1, &m2, &v2, eps)).abs());
    }
    let vectors: Vec<Vec<f64>> = (0..64)
        .map(|_| (0..16).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    let set = EmbeddingSet::new(vectors).map_err(|e| e.to_string())?;
    let same = fvd(&set, &set, eps).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(
        worst <= FRECHET_TOL && same < FRECHET_TOL && elapsed < FRECHET_BUDGET,
        format!("max |err| {worst:.2e}, identical sets {same:.2e}, {elapsed:.2?}"),
        format!("max |err| {worst:.2e}, identical sets {same:.2e}, {elapsed:.2?} (tol {FRECHET_TOL:e}, budget {FRECHET_BUDGET:?})"),
    )
}

fn psd_sqrt_reconstruction() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let n = 1 + (case * 63) / 99;
        let a = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
        let m = &a * a.transpose() / n as f64 + DMatrix::identity(n, n) * 1e-3;
        let s = psd_sqrt(&m).map_err(|e| format!("n={n}: {e}"))?;
        worst = worst.max((&s * &s - &m).norm() / m.norm());
    }
    let elapsed = start.elapsed();
    check(
        worst <= SQRT_REL_TOL && elapsed < SQRT_BUDGET,
        format!("worst relative residual {worst:.2e} over 100 matrices up to 64x64, {elapsed:.2?}"),
        format!("worst relative residual {worst:.2e}, {elapsed:.2?} (tol {SQRT_REL_TOL:e}, budget {SQRT_BUDGET:?})"),
    )
}

/// Minimum over every monotone warping path, enumerated explicitly.
fn dtw_enumerate(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    fn walk(a: &[(f64, f64)], b: &[(f64, f64)], i: usize, j: usize, acc: f64, best: &mut f64) {
        let acc = acc + (a[i].0 - b[j].0).hypot(a[i].1 - b[j].1);
        if i + 1 == a.len() && j + 1 == b.len() {
            *best = best.min(acc);
            return;
        }
        if i + 1 < a.len() {
            walk(a, b, i + 1, j, acc, best);
        }
        if j + 1 < b.len() {
            walk(a, b, i, j + 1, acc, best);
        }
        if i + 1 < a.len() && j + 1 < b.len() {
            walk(a, b, i + 1, j + 1, acc, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(a, b, 0, 0, 0.0, &mut best);
    best
}

fn random_xy(rng: &mut ChaCha8Rng, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| (rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)))
        .collect()
}

fn dtw_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut mismatches = 0;
    for _ in 0..200 {
        let (n, m) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let (a, b) = (random_xy(&mut rng, n), random_xy(&mut rng, m));
        let got = dtw_xy(&a, &b).map_err(|e| e.to_string())?;
        if got != dtw_enumerate(&a, &b) {
            mismatches += 1;
        }
    }
    check(
        mismatches == 0,
        "200 pairs equal to exhaustive enumeration",
        format!("{mismatches} of 200 pairs differ from exhaustive enumeration"),
    )
}

fn ade_translation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(1..200);
        let reference = random_xy(&mut rng, n);
        let shifted: Vec<_> = reference.iter().map(|&(x, y)| (x + 3.0, y + 4.0)).collect();
        worst = worst.max((ade_xy(&shifted, &reference).map_err(|e| e.to_string())? - 5.0).abs());
    }
    check(
        worst <= ADE_TOL,
        format!("max |ade - 5| {worst:.2e}"),
        format!("max |ade - 5| {worst:.2e} (tol {ADE_TOL:e})"),
    )
}

fn kinematic_boundaries() -> Outcome {
    let cfg = QualityConfig::default();
    let e = |e: dgbench::Error| e.to_string();

    let parked = Trajectory::from_xy(&[(3.0, -2.0); 40], 10.0).map_err(e)?;
    let motion = motion_score(&parked, &cfg).map_err(e)?;
    let comfort = comfort_score(&parked, &cfg).map_err(e)?;
    let curvature = curvature_score(&parked, &cfg).map_err(e)?;
    ensure(motion == 0.0 && comfort.is_none() && curvature.is_none(), || {
        format!("static: motion {motion}, comfort {comfort:?}, curvature {curvature:?}")
    })?;

    let line: Vec<(f64, f64)> = (0..60).map(|i| (0.8 * i as f64, 0.6 * i as f64)).collect();
    let line = Trajectory::from_xy(&line, 10.0).map_err(e)?;
    let comfort = comfort_score(&line, &cfg).map_err(e)?.unwrap_or(f64::NAN);
    let curvature = curvature_score(&line, &cfg).map_err(e)?.unwrap_or(f64::NAN);
    let consistency = trajectory_consistency(&line).map_err(e)?;
    let off = [comfort, curvature, consistency].map(|v| (v - 1.0).abs());
    ensure(off.iter().all(|d| *d <= UNIT_SCORE_TOL), || {
        format!("line: comfort {comfort}, curvature {curvature}, consistency {consistency}")
    })?;

    let radius = 10.0;
    let circle: Vec<(f64, f64)> = (0..=200)
        .map(|i| {
            let a = TAU * i as f64 / 100.0;
            (radius * a.cos(), radius * a.sin())
        })
        .collect();
    let circle = Trajectory::from_xy(&circle, 10.0).map_err(e)?;
    let got = curvature_score(&circle, &cfg).map_err(e)?.unwrap_or(f64::NAN);
    let want = 1.0 / (1.0 + 1.0 / radius);
    let rel = (got - want).abs() / want;
    check(
        rel <= CIRCLE_REL_TOL,
        format!("static 0/undef/undef; line scores 1 within {UNIT_SCORE_TOL:e}; circle {got:.6} vs {want:.6}"),
        format!("circle curvature score {got} vs {want} (rel {rel:.3e} > {CIRCLE_REL_TOL})"),
    )
}

fn finite_difference_convergence() -> Outcome {
    let interior_error = |rate: f64| -> Result<f64, String> {
        let dt = 1.0 / rate;
        let n = (4.0 * rate) as usize + 1;
        let xy: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let t = i as f64 * dt;
                (5.0 * t + (1.3 * t).sin(), 2.0 * (0.7 * t).cos())
            })
            .collect();
        let p = profile(&Trajectory::from_xy(&xy, rate).map_err(|e| e.to_string())?, 0.1)
            .map_err(|e| e.to_string())?;
        Ok((1..n - 1)
            .map(|i| {
                let t = i as f64 * dt;
                let (vx, vy) = (5.0 + 1.3 * (1.3 * t).cos(), -1.4 * (0.7 * t).sin());
                (p.velocity[i].0 - vx).hypot(p.velocity[i].1 - vy)
            })
            .fold(0.0, f64::max))
    };
    let coarse = interior_error(10.0)?;
    let fine = interior_error(20.0)?;
    let ratio = coarse / fine;
    check(
        ratio >= CONVERGENCE_MIN_RATIO,
        format!("error {coarse:.3e} -> {fine:.3e}, ratio {ratio:.2}"),
        format!("ratio {ratio:.2} < {CONVERGENCE_MIN_RATIO}"),
    )
}

/// Independent classification: direct DFT, then the band-ratio rule.
fn mmp_direct(values: &[f64], cfg: &MmpConfig) -> u8 {
    let n = values.len();
    let power: Vec<(f64, f64)> = (1..=n / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, v) in values.iter().enumerate() {
                let a = -TAU * (k * t) as f64 / n as f64;
                re += v * a.cos();
                im += v * a.sin();
            }
            (k as f64 * cfg.rate / n as f64, (re * re + im * im) / n as f64)
        })
        .collect();
    if power.iter().all(|(_, p)| *p < cfg.epsilon) {
        return 1;
    }
    let mut peak = power[0];
    for &b in &power[1..] {
        if b.1 > peak.1 {
            peak = b;
        }
    }
    if peak.0 < cfg.low_cut_hz {
        return 1;
    }
    let total: f64 = power.iter().map(|b| b.1).sum();
    let band: f64 = power.iter().filter(|b| (b.0 - peak.0).abs() < cfg.band_hz).map(|b| b.1).sum();
    u8::from(band / (total + cfg.epsilon) < cfg.thr)
}

fn mmp_suite() -> Outcome {
    let cfg = MmpConfig::default();
    let series = |f: &dyn Fn(f64) -> f64, n: usize| {
        LuminanceSeries::new((0..n).map(|i| f(i as f64 / cfg.rate)).collect(), cfg.rate).expect("series")
    };
    let e = |e: dgbench::Error| e.to_string();

    let constant = mmp(&series(&|_| 128.0, 100), &cfg).map_err(e)?;
    let drift = mmp(&series(&|t| 128.0 + 20.0 * (TAU * 0.1 * t).sin(), 100), &cfg).map_err(e)?;
    let flicker = mmp(&series(&|t| 128.0 + 10.0 * (TAU * 2.0 * t).sin(), 100), &cfg).map_err(e)?;
    ensure(constant == 1 && drift == 1 && flicker == 0, || {
        format!("constant {constant}, 0.1 Hz drift {drift}, 2 Hz {flicker}")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let noise = Normal::new(0.0, 1.0).expect("normal");
    let base: Vec<f64> = (0..100).map(|_| noise.sample(&mut rng)).collect();
    for offset in [-60.0, 17.5, 100.0] {
        let a = LuminanceSeries::new(base.iter().map(|v| 120.0 + v).collect(), cfg.rate).map_err(e)?;
        let b = LuminanceSeries::new(base.iter().map(|v| 120.0 + offset + v).collect(), cfg.rate).map_err(e)?;
        let (ra, rb) = (analyze(&a, &cfg).map_err(e)?, analyze(&b, &cfg).map_err(e)?);
        ensure(ra.pass == rb.pass && ra.dominant_hz == rb.dominant_hz, || {
            format!("offset {offset}: {ra:?} vs {rb:?}")
        })?;
    }

    let frequencies = [0.1, 1.3, 2.45, 3.7, 4.9];
    let amplitudes = [0.3, 1.5, 4.0, 12.0];
    let (mut agree, mut passes) = (0, 0);
    for &f in &frequencies {
        for &amp in &amplitudes {
            let values: Vec<f64> = (0..100)
                .map(|i| {
                    let t = i as f64 / cfg.rate;
                    128.0 + 3.0 * (TAU * 0.05 * t).sin() + amp * (TAU * f * t + 0.4).sin() + 0.5 * base[i]
                })
                .collect();
            let got = mmp(&LuminanceSeries::new(values.clone(), cfg.rate).map_err(e)?, &cfg).map_err(e)?;
            agree += usize::from(got == mmp_direct(&values, &cfg));
            passes += usize::from(got);
        }
    }
    check(
        agree == 20,
        format!("boundary cases ok; DC offset invariant; grid 20/20 agree ({passes} pass, {} fail)", 20 - passes),
        format!("grid agreement {agree}/20"),
    )
}

fn consistency_anti_gaming() -> Outcome {
    let cfg = ConsistencyConfig::default();
    let theta = 0.2;
    let feature = |a: f64| vec![a.cos(), a.sin(), 0.3];
    let clip = |frames: usize, per_frame: f64, flow: f64| {
        let per_frame_features = (0..frames)
            .map(|k| FrameFeature {
                frame: k,
                feature: feature(k as f64 * per_frame),
            })
            .collect();
        let flow = (0..frames - 1)
            .map(|k| FlowSample {
                frame: k,
                median_flow: flow,
            })
            .collect();
        FrameFeatures::new(per_frame_features, flow).expect("clip")
    };
    // Same content: the static clip is the moving one slowed down 8x, so
    // feature drift per unit of motion is equal.
    let slowdown = cfg.target_flow;
    let moving = clip(9, theta, cfg.target_flow);
    let still = clip(65, theta / slowdown, 1.0);
    let e = |e: dgbench::Error| e.to_string();
    let (m, s) = (video_consistency(&moving, &cfg).map_err(e)?, video_consistency(&still, &cfg).map_err(e)?);
    let naive = ConsistencyConfig {
        target_flow: 1.0,
        ..cfg
    };
    let gamed = video_consistency(&still, &naive).map_err(e)?;
    check(
        m == s && gamed > m,
        format!("moving {m} == static {s}; without adaptive stride static would score {gamed:.6}"),
        format!("moving {m} vs static {s}, fixed stride {gamed}"),
    )
}

fn pose_completion() -> Outcome {
    let e = |e: dgbench::Error| e.to_string();
    let xy: Vec<(f64, f64)> = (0..12).map(|i| (0.5 * i as f64, 0.0)).collect();
    let track = PoseTrack::from_trajectory(&Trajectory::from_xy(&xy, 10.0).map_err(e)?);
    let straight = complete(&track, 40, 0.0, 1).map_err(e)?;
    ensure(straight.poses()[..12] == track.poses()[..], || "prefix changed".into())?;
    for (k, p) in straight.poses().iter().enumerate() {
        ensure(p.x == 0.5 * k as f64 && p.y == 0.0 && p.heading == 0.0, || {
            format!("zero-jitter pose {k} off the line: {p:?}")
        })?;
    }

    let jitter_deg = 0.5;
    let long = complete(&track, 12 + 10_000, jitter_deg, 99).map_err(e)?;
    ensure(long.poses()[..12] == track.poses()[..], || "prefix changed under jitter".into())?;
    let steps: Vec<f64> = long.poses()[11..]
        .windows(2)
        .map(|w| dgbench::kinematics::wrap_angle(w[1].heading - w[0].heading))
        .collect();
    let mean = steps.iter().sum::<f64>() / steps.len() as f64;
    let std = (steps.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (steps.len() - 1) as f64).sqrt();
    let want = jitter_deg.to_radians();
    let rel = (std - want).abs() / want;
    ensure(rel <= JITTER_REL_TOL, || format!("heading step std {std:.6} vs {want:.6} (rel {rel:.3})"))?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bytes = |seed: u64, name: &str| -> Result<Vec<u8>, String> {
        let t = complete(&track, 200, jitter_deg, seed).map_err(e)?.to_trajectory(Some(12)).map_err(e)?;
        let p = dir.path().join(name);
        write_trajectory(&p, &t).map_err(e)?;
        std::fs::read(&p).map_err(|e| e.to_string())
    };
    let (a, b, c) = (bytes(5, "a")?, bytes(5, "b")?, bytes(6, "c")?);
    check(
        a == b && a != c,
        format!("prefix exact; straight continuation exact; jitter std rel err {rel:.3}; same seed byte-identical"),
        "seed determinism violated",
    )
}

fn rank_oracle() -> Outcome {
    let metrics = [Metric::Fvd, Metric::SubjectiveQuality, Metric::Ade, Metric::VideoConsistency];
    let specs: Vec<_> = metrics.iter().map(|m| m.spec()).collect();
    let rows: [(&str, [f64; 4]); 3] = [
        ("A", [10.0, 0.8, 1.0, 0.90]),
        ("B", [20.0, 0.8, 0.5, 0.95]),
        ("C", [30.0, 0.6, 2.0, 0.85]),
    ];
    let table = rows
        .iter()
        .map(|(m, vals)| {
            let values = metrics.iter().zip(vals).map(|(k, v)| (k.name().to_string(), *v)).collect();
            (m.to_string(), values)
        })
        .collect();
    // FVD: A1 B2 C3; quality tie A/B at 1.5, C3; ADE: B1 A2 C3; consistency: B1 A2 C3.
    let want = [("A", 6.5 / 4.0), ("B", 5.5 / 4.0), ("C", 3.0)];
    let got = rank(&table, &specs).map_err(|e| e.to_string())?;
    let tie = rank(&table, &specs[1..2]).map_err(|e| e.to_string())?;
    let exact = want.iter().all(|(m, r)| got[*m] == *r);
    check(
        exact && tie["A"] == 1.5 && tie["B"] == 1.5 && tie["C"] == 3.0,
        format!("A {} B {} C {}, tied column 1.5/1.5/3", got["A"], got["B"], got["C"]),
        format!("got {got:?}, tied column {tie:?}"),
    )
}

fn bundled_manifest() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/synthetic/manifest.json")
}

fn dgbench(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_dgbench"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())
}

fn run_twice(manifest: &Path, tracks: usize) -> Result<(MetricReport, Duration), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let m = manifest.to_str().ok_or("non-utf8 path")?;
    let start = Instant::now();
    let v = dgbench(&["validate", "--manifest", m])?;
    ensure(v.status.success(), || format!("validate failed: {}", String::from_utf8_lossy(&v.stdout)))?;
    let mut outputs = Vec::new();
    for name in ["first", "second"] {
        let out = dir.path().join(name);
        let r = dgbench(&["run", "--manifest", m, "--out", out.to_str().ok_or("path")?, "--seed", "42"])?;
        ensure(r.status.success(), || format!("run failed: {}", String::from_utf8_lossy(&r.stderr)))?;
        outputs.push(out);
    }
    let elapsed = start.elapsed();
    for file in ["report.json", "leaderboard.md"] {
        let a = std::fs::read(outputs[0].join(file)).map_err(|e| e.to_string())?;
        let b = std::fs::read(outputs[1].join(file)).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{file} differs between runs"))?;
    }
    let md = std::fs::read_to_string(outputs[0].join("leaderboard.md")).map_err(|e| e.to_string())?;
    for family in ["Distribution", "Quality", "Temporal Consistency", "Trajectory Alignment", "Avg. Rank"] {
        ensure(md.contains(family), || format!("leaderboard lacks '{family}'"))?;
    }
    let report = MetricReport::load(&outputs[0].join("report.json")).map_err(|e| e.to_string())?;
    ensure(report.ranks.len() == tracks, || format!("{} ranked tracks", report.ranks.len()))?;
    for (track, ranking) in &report.ranks {
        ensure(ranking.ranks.len() == 3 && ranking.excluded.is_empty(), || {
            format!("{track}: {} ranked, {} excluded", ranking.ranks.len(), ranking.excluded.len())
        })?;
        ensure(ranking.ranks.get("A") == Some(&1.0), || format!("{track}: A ranks {:?}", ranking.ranks.get("A")))?;
    }
    Ok((report, elapsed))
}

fn end_to_end() -> Outcome {
    let bundled = bundled_manifest();
    let regenerated = synthetic_dataset(&FixtureSpec::default()).map_err(|e| e.to_string())?;
    let loaded = load_manifest(&bundled).map_err(|e| e.to_string())?;
    ensure(loaded.records == regenerated.records, || "bundled fixture differs from its generator".into())?;
    ensure(loaded.records.len() == 12, || format!("{} bundled records", loaded.records.len()))?;
    let (_, bundled_time) = run_twice(&bundled, 1)?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let spec = FixtureSpec {
        tracks: vec![Track::OpenDomain, Track::EgoConditioned],
        ..FixtureSpec::default()
    };
    let both = write_synthetic(&spec, dir.path()).map_err(|e| e.to_string())?;
    let (_, both_time) = run_twice(&both, 2)?;
    check(
        bundled_time < END_TO_END_BUDGET && both_time < END_TO_END_BUDGET,
        format!("validate + 2 runs: bundled {bundled_time:.2?}, two-track {both_time:.2?}; byte-identical; A ranks 1.0"),
        format!("too slow: {bundled_time:?} / {both_time:?} (budget {END_TO_END_BUDGET:?})"),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("frechet closed form", frechet_oracle),
        ("psd_sqrt reconstruction", psd_sqrt_reconstruction),
        ("dtw exhaustive", dtw_oracle),
        ("ade translation", ade_translation),
        ("kinematic boundaries", kinematic_boundaries),
        ("finite-difference convergence", finite_difference_convergence),
        ("mmp suite", mmp_suite),
        ("consistency anti-gaming", consistency_anti_gaming),
        ("pose completion", pose_completion),
        ("rank oracle", rank_oracle),
        ("end-to-end", end_to_end),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
