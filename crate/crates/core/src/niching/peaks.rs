//! Peak-recovery metrics against a known optimum list.

use crate::bench::Peak;
use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::individual::Population;

/// How many known peaks a population certified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakReport {
    pub found: usize,
    pub total: usize,
}

impl PeakReport {
    pub fn ratio(&self) -> f64 {
        self.found as f64 / self.total as f64
    }
}

/// A peak counts as found iff some member lies within `dist_tol` of its
/// location (Euclidean) and within `value_tol` of its value; each member
/// can certify at most one peak.
pub fn peak_metrics(
    population: &Population,
    known_peaks: &[Peak],
    value_tol: f64,
    dist_tol: f64,
) -> Result<PeakReport> {
    if known_peaks.is_empty() {
        return Err(Error::InvalidInput("empty peak list".into()));
    }
    let mut used = vec![false; population.len()];
    let mut found = 0;
    for peak in known_peaks {
        for (i, member) in population.members.iter().enumerate() {
            if used[i] {
                continue;
            }
            let values = match &member.genome {
                Genome::RealVector { values, .. } => values,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "peak metrics need real-vector members, got {}",
                        other.variant_name()
                    )))
                }
            };
            if values.len() != peak.location.len() {
                return Err(Error::InvalidInput(
                    "member dimension differs from peak dimension".into(),
                ));
            }
            let dist = values
                .iter()
                .zip(&peak.location)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let fit = member.fitness.ok_or_else(|| {
                Error::Contract(format!("member {i} has not been evaluated"))
            })?;
            if dist <= dist_tol && (fit - peak.value).abs() <= value_tol {
                used[i] = true;
                found += 1;
                break;
            }
        }
    }
    Ok(PeakReport {
        found,
        total: known_peaks.len(),
    })
}
