//! Fitness sharing.

use super::{distance, DistanceMetric};
use crate::error::{Error, Result};
use crate::individual::Population;

/// Shared fitness: each raw fitness is divided by its niche count
/// `Σ_j sh(d_ij)` with the triangular kernel
/// `sh(d) = 1 - (d / radius)^alpha` for `d < radius`, else 0.
///
/// `sh(0) = 1`, so every denominator is at least 1 and shared fitness
/// never exceeds raw fitness. Requires all fitness strictly positive.
pub fn shared_fitness(
    population: &Population,
    sharing_radius: f64,
    alpha: f64,
    metric: DistanceMetric,
) -> Result<Vec<f64>> {
    if !(sharing_radius > 0.0) {
        return Err(Error::InvalidInput(format!(
            "sharing radius {sharing_radius} must be positive"
        )));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidInput(format!("alpha {alpha} must be positive")));
    }
    let fitness = population.fitness_values()?;
    if let Some(bad) = fitness.iter().find(|f| **f <= 0.0) {
        return Err(Error::Contract(format!(
            "fitness sharing requires strictly positive fitness, found {bad}"
        )));
    }
    let n = population.len();
    let mut shared = Vec::with_capacity(n);
    for i in 0..n {
        let mut niche_count = 0.0;
        for j in 0..n {
            let d = distance(
                &population.members[i].genome,
                &population.members[j].genome,
                metric,
            )?;
            if d < sharing_radius {
                niche_count += 1.0 - (d / sharing_radius).powf(alpha);
            }
        }
        shared.push(fitness[i] / niche_count);
    }
    Ok(shared)
}
