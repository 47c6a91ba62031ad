//! Individuals and populations.

use crate::error::{Error, Result};
use crate::genome::Genome;

/// A genome together with its cached fitness (maximization convention)
/// and an optional per-component improvement history used by
/// temporal-locality variants.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Genome,
    /// `Some` once evaluated; always finite when present.
    pub fitness: Option<f64>,
    /// Discounted accumulation of successful improvement vectors; same
    /// dimension as a real-vector genome when present.
    pub delta: Option<Vec<f64>>,
}

impl Individual {
    pub fn new(genome: Genome) -> Self {
        Individual {
            genome,
            fitness: None,
            delta: None,
        }
    }

    pub fn evaluated(genome: Genome, fitness: f64) -> Self {
        Individual {
            genome,
            fitness: Some(fitness),
            delta: None,
        }
    }

    pub fn is_evaluated(&self) -> bool {
        self.fitness.is_some()
    }

    /// Cached fitness. Panics if the individual has not been evaluated;
    /// public entry points validate this contract and return errors instead.
    pub fn fitness(&self) -> f64 {
        self.fitness.expect("individual has not been evaluated")
    }
}

/// An ordered, nonempty list of individuals. Order is stable between
/// operations: indices are meaningful and ties break toward lower indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub members: Vec<Individual>,
}

impl Population {
    pub fn new(members: Vec<Individual>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidInput("population must be nonempty".into()));
        }
        Ok(Population { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn all_evaluated(&self) -> bool {
        self.members.iter().all(Individual::is_evaluated)
    }

    /// Cached fitness values in member order; contract error when any
    /// member is unevaluated.
    pub fn fitness_values(&self) -> Result<Vec<f64>> {
        self.members
            .iter()
            .enumerate()
            .map(|(i, m)| {
                m.fitness
                    .ok_or_else(|| Error::Contract(format!("member {i} has not been evaluated")))
            })
            .collect()
    }

    /// Index of the fittest member; ties break by lower index.
    pub fn best_index(&self) -> usize {
        let mut best = 0;
        for i in 1..self.members.len() {
            if self.members[i].fitness() > self.members[best].fitness() {
                best = i;
            }
        }
        best
    }

    pub fn best(&self) -> &Individual {
        &self.members[self.best_index()]
    }

    pub fn mean_fitness(&self) -> f64 {
        let sum: f64 = self.members.iter().map(Individual::fitness).sum();
        sum / self.members.len() as f64
    }
}
