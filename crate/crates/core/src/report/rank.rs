use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::metric::{Direction, MetricSpec};

/// Average rank per model across `specs`.
///
/// Per metric, models are ordered best first according to the metric's
/// direction; tied values share the mean of the positions they occupy.
pub fn rank(
    per_model: &BTreeMap<String, BTreeMap<String, f64>>,
    specs: &[MetricSpec],
) -> Result<BTreeMap<String, f64>> {
    if specs.is_empty() {
        return Err(Error::NothingToReport);
    }
    let mut totals: BTreeMap<String, f64> = per_model.keys().map(|m| (m.clone(), 0.0)).collect();
    for spec in specs {
        let mut column: Vec<(&str, f64)> = per_model
            .iter()
            .map(|(model, values)| {
                values
                    .get(&spec.name)
                    .copied()
                    .filter(|v| !v.is_nan())
                    .map(|v| (model.as_str(), v))
                    .ok_or_else(|| Error::MissingValue {
                        model: model.clone(),
                        metric: spec.name.clone(),
                    })
            })
            .collect::<Result<_>>()?;
        column.sort_by(|a, b| match spec.direction {
            Direction::LowerBetter => a.1.total_cmp(&b.1),
            Direction::HigherBetter => b.1.total_cmp(&a.1),
        });
        let mut start = 0;
        while start < column.len() {
            let mut end = start + 1;
            while end < column.len() && column[end].1 == column[start].1 {
                end += 1;
            }
            // Positions start+1 ..= end, averaged.
            let shared = (start + 1 + end) as f64 / 2.0;
            for (model, _) in &column[start..end] {
                *totals.get_mut(*model).expect("model") += shared;
            }
            start = end;
        }
    }
    let n = specs.len() as f64;
    Ok(totals.into_iter().map(|(m, t)| (m, t / n)).collect())
}
