//! Alignment between a generated trajectory and its conditioning trajectory.

use crate::error::{Error, Result};
use crate::model::Trajectory;

/// Mean pointwise Euclidean distance over the common prefix.
pub fn ade(generated: &Trajectory, reference: &Trajectory) -> Result<f64> {
    ade_xy(
        &generated.xy().collect::<Vec<_>>(),
        &reference.xy().collect::<Vec<_>>(),
    )
}

pub fn ade_xy(generated: &[(f64, f64)], reference: &[(f64, f64)]) -> Result<f64> {
    let n = generated.len().min(reference.len());
    if n == 0 {
        return Err(Error::Invalid("empty common horizon".into()));
    }
    let total: f64 = generated
        .iter()
        .zip(reference)
        .map(|(a, b)| dist(*a, *b))
        .sum();
    Ok(total / n as f64)
}

/// Unconstrained dynamic time warping with Euclidean point cost, summed
/// along the optimal path (not normalized).
pub fn dtw(generated: &Trajectory, reference: &Trajectory) -> Result<f64> {
    dtw_xy(
        &generated.xy().collect::<Vec<_>>(),
        &reference.xy().collect::<Vec<_>>(),
    )
}

pub fn dtw_xy(a: &[(f64, f64)], b: &[(f64, f64)]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Invalid("dtw of an empty trajectory".into()));
    }
    // Roll over the longer sequence so storage is O(min(n, m)); DTW is
    // symmetric so swapping sides does not change the result.
    let (outer, inner) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let m = inner.len();
    let mut prev = vec![f64::INFINITY; m];
    let mut curr = vec![f64::INFINITY; m];
    for (i, &p) in outer.iter().enumerate() {
        for (j, &q) in inner.iter().enumerate() {
            let cost = dist(p, q);
            let best = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => curr[j - 1],
                (_, 0) => prev[0],
                _ => prev[j].min(curr[j - 1]).min(prev[j - 1]),
            };
            curr[j] = cost + best;
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    Ok(prev[m - 1])
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}
