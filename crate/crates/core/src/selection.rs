//! Parent and survival selection schemes.

use rand::Rng;

use crate::error::{Error, Result};
use crate::individual::Population;

/// The selection catalog. All schemes return member indices; stochastic
/// schemes draw with replacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionScheme {
    /// Roulette wheel over raw fitness; requires all fitness strictly positive.
    FitnessProportional,
    /// Linear ranking: probability proportional to rank, worst rank = 1.
    RankProportional,
    /// Cycles indices 0..n-1 in order.
    UniformDeterministic,
    /// Uniform draws with replacement.
    UniformStochastic,
    /// Independent two-way fitness contests.
    BinaryTournament,
    /// The k fittest indices, deterministically.
    Truncation,
}

impl SelectionScheme {
    pub fn name(&self) -> &'static str {
        match self {
            SelectionScheme::FitnessProportional => "fitness-proportional",
            SelectionScheme::RankProportional => "rank-proportional",
            SelectionScheme::UniformDeterministic => "uniform-deterministic",
            SelectionScheme::UniformStochastic => "uniform-stochastic",
            SelectionScheme::BinaryTournament => "binary-tournament",
            SelectionScheme::Truncation => "truncation",
        }
    }
}

/// Draws an index proportionally to the given non-negative weights.
/// At least one weight must be positive.
pub(crate) fn roulette<R: Rng>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    debug_assert!(total > 0.0, "roulette requires positive total weight");
    let mut u = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        u -= w;
        if u < 0.0 {
            return i;
        }
    }
    // Floating-point slack: fall back to the last positively weighted slot.
    weights
        .iter()
        .rposition(|&w| w > 0.0)
        .unwrap_or(weights.len() - 1)
}

/// Selects exactly `k` member indices from `population` under `scheme`.
pub fn select<R: Rng>(
    population: &Population,
    scheme: SelectionScheme,
    k: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let fitness = population.fitness_values()?;
    let n = fitness.len();
    match scheme {
        SelectionScheme::FitnessProportional => {
            if let Some(bad) = fitness.iter().find(|f| **f <= 0.0) {
                return Err(Error::Contract(format!(
                    "fitness-proportional selection requires strictly positive fitness, found {bad}"
                )));
            }
            Ok((0..k).map(|_| roulette(&fitness, rng)).collect())
        }
        SelectionScheme::RankProportional => {
            // Worst rank 1, best rank n; equal fitness ordered by index.
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| {
                fitness[a]
                    .partial_cmp(&fitness[b])
                    .unwrap()
                    .then(a.cmp(&b))
            });
            let mut rank = vec![0.0; n];
            for (pos, &idx) in order.iter().enumerate() {
                rank[idx] = (pos + 1) as f64;
            }
            Ok((0..k).map(|_| roulette(&rank, rng)).collect())
        }
        SelectionScheme::UniformDeterministic => Ok((0..k).map(|i| i % n).collect()),
        SelectionScheme::UniformStochastic => {
            Ok((0..k).map(|_| rng.random_range(0..n)).collect())
        }
        SelectionScheme::BinaryTournament => Ok((0..k)
            .map(|_| {
                let a = rng.random_range(0..n);
                let b = rng.random_range(0..n);
                contest_winner(&fitness, a, b)
            })
            .collect()),
        SelectionScheme::Truncation => {
            if k > n {
                return Err(Error::InvalidInput(format!(
                    "truncation selection of {k} from a population of {n}"
                )));
            }
            Ok(ranked_indices(&fitness).into_iter().take(k).collect())
        }
    }
}

/// Indices sorted by descending fitness; ties break by lower index.
pub(crate) fn ranked_indices(fitness: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitness.len()).collect();
    order.sort_by(|&a, &b| {
        fitness[b]
            .partial_cmp(&fitness[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    order
}

fn contest_winner(fitness: &[f64], a: usize, b: usize) -> usize {
    if fitness[a] > fitness[b] {
        a
    } else if fitness[b] > fitness[a] {
        b
    } else {
        a.min(b)
    }
}

/// Returns a copy of the population with all fitness values shifted by
/// `margin - min(fitness)` whenever the minimum is non-positive, making
/// the result usable with [`SelectionScheme::FitnessProportional`].
///
/// Shifting changes selection pressure, which is why the proportional
/// scheme itself rejects non-positive fitness instead of doing this
/// implicitly; apply this wrapper only when that trade-off is intended.
pub fn affine_shifted(population: &Population, margin: f64) -> Result<Population> {
    if margin <= 0.0 {
        return Err(Error::InvalidInput("shift margin must be positive".into()));
    }
    let fitness = population.fitness_values()?;
    let min = fitness.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut shifted = population.clone();
    if min <= 0.0 {
        let offset = margin - min;
        for m in &mut shifted.members {
            m.fitness = Some(m.fitness() + offset);
        }
    }
    Ok(shifted)
}
