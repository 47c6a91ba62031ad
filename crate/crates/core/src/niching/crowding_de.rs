//! Crowding differential evolution with spatial and temporal locality.
//!
//! Each target generates an offspring (DE/rand/1 plus recombination for
//! real vectors, per-position mutation for move strings) that competes
//! with its nearest population member under the crowding rule. Spatial
//! locality biases participant choice toward individuals near the target
//! via a distance roulette; temporal locality replays accumulated
//! improvement vectors through a per-individual delta array.

use std::time::Instant;

use rand::Rng;

use super::{distance, nearest_member, DistanceMetric, NichingConfig};
use crate::de::{combine_trial, pick_distinct, recombine, DEConfig};
use crate::error::{Error, Result};
use crate::generational::GenStats;
use crate::genome::Genome;
use crate::individual::{Individual, Population};
use crate::mutation::mutate_random;
use crate::problem::{Evaluation, Problem};
use crate::selection::roulette;
use crate::termination::{check_termination, EvalBudget, RunState, TerminationCondition};

/// Which locality mechanisms a crowding DE run applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrowdingVariant {
    Plain,
    /// Spatial locality in participant selection.
    Spatial,
    /// Temporal locality in the replacement stage.
    Temporal,
    /// Both localities together.
    SpatialTemporal,
}

impl CrowdingVariant {
    pub fn uses_spatial(&self) -> bool {
        matches!(self, CrowdingVariant::Spatial | CrowdingVariant::SpatialTemporal)
    }

    pub fn uses_temporal(&self) -> bool {
        matches!(self, CrowdingVariant::Temporal | CrowdingVariant::SpatialTemporal)
    }

    /// Temporal locality needs vector arithmetic; on non-real genomes it
    /// is dropped and the spatial part (if any) is kept.
    pub fn degraded_for_strings(&self) -> CrowdingVariant {
        match self {
            CrowdingVariant::Temporal => CrowdingVariant::Plain,
            CrowdingVariant::SpatialTemporal => CrowdingVariant::Spatial,
            v => *v,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CrowdingVariant::Plain => "crowding-de",
            CrowdingVariant::Spatial => "crowding-de-sl",
            CrowdingVariant::Temporal => "crowding-de-tl",
            CrowdingVariant::SpatialTemporal => "crowding-de-stl",
        }
    }
}

/// Roulette weights for spatial-locality participant selection around
/// `parent_index`: `w_j = (d_max - d_j) + floor * d_max`, so closer
/// candidates get larger portions and the farthest keeps a nonzero floor.
/// Equal distances (including `d_max = 0`) degrade to uniform weights.
fn sl_weights(
    pop: &Population,
    parent_index: usize,
    metric: DistanceMetric,
    floor: f64,
) -> Result<(Vec<usize>, Vec<f64>)> {
    let mut candidates = Vec::with_capacity(pop.len() - 1);
    let mut dists = Vec::with_capacity(pop.len() - 1);
    for j in 0..pop.len() {
        if j == parent_index {
            continue;
        }
        candidates.push(j);
        dists.push(distance(
            &pop.members[parent_index].genome,
            &pop.members[j].genome,
            metric,
        )?);
    }
    let d_max = dists.iter().cloned().fold(0.0, f64::max);
    let weights = if d_max > 0.0 {
        dists.iter().map(|d| (d_max - d) + floor * d_max).collect()
    } else {
        vec![1.0; dists.len()]
    };
    Ok((candidates, weights))
}

/// Picks three distinct participant indices (all different from
/// `parent_index`) by repeated roulette draws without replacement over
/// the spatial-locality weights.
pub fn sl_pick_indices<R: Rng>(
    pop: &Population,
    parent_index: usize,
    metric: DistanceMetric,
    floor: f64,
    rng: &mut R,
) -> Result<[usize; 3]> {
    if pop.len() < 4 {
        return Err(Error::InvalidInput(format!(
            "spatial-locality selection needs population size >= 4, got {}",
            pop.len()
        )));
    }
    let (mut candidates, mut weights) = sl_weights(pop, parent_index, metric, floor)?;
    let mut picks = [0usize; 3];
    for slot in &mut picks {
        let w = roulette(&weights, rng);
        *slot = candidates.remove(w);
        weights.remove(w);
    }
    Ok(picks)
}

/// Single roulette draw over the spatial-locality weights; used by the
/// move-string trial path, which needs one participant.
fn sl_pick_one<R: Rng>(
    pop: &Population,
    parent_index: usize,
    metric: DistanceMetric,
    floor: f64,
    rng: &mut R,
) -> Result<usize> {
    let (candidates, weights) = sl_weights(pop, parent_index, metric, floor)?;
    Ok(candidates[roulette(&weights, rng)])
}

/// Temporal-locality update, run when an offspring is about to replace
/// its nearest neighbor. The improvement vector plus the neighbor's
/// discounted delta becomes the offspring's delta; a second offspring at
/// `x + delta` is evaluated, and whichever of the two is fitter gets
/// installed, carrying the new delta.
pub fn tl_update<P: Problem + ?Sized>(
    offspring: &Individual,
    nn: &Individual,
    discount: f64,
    policy: crate::de::BoundPolicy,
    problem: &P,
    budget: &mut EvalBudget,
) -> Result<Individual> {
    let (x_off, bounds) = match &offspring.genome {
        Genome::RealVector { values, bounds } => (values, bounds),
        other => {
            return Err(Error::InvalidInput(format!(
                "temporal locality requires real vectors, got {}",
                other.variant_name()
            )))
        }
    };
    let x_nn = nn.genome.real_values().ok_or_else(|| {
        Error::InvalidInput("temporal locality requires real-vector neighbors".into())
    })?;
    if x_nn.len() != x_off.len() {
        return Err(Error::InvalidInput("dimension mismatch in delta update".into()));
    }
    let zeros = vec![0.0; x_off.len()];
    let delta_nn = nn.delta.as_deref().unwrap_or(&zeros);

    let delta: Vec<f64> = x_off
        .iter()
        .zip(x_nn)
        .zip(delta_nn)
        .map(|((&o, &n), &d)| (o - n) + discount * d)
        .collect();

    let mut installed = offspring.clone();
    installed.delta = Some(delta.clone());

    if !budget.exhausted() {
        let second_values: Vec<f64> = x_off
            .iter()
            .zip(&delta)
            .zip(bounds)
            .map(|((&o, &d), &(lo, hi))| policy.apply(o + d, lo, hi))
            .collect();
        let second = Genome::RealVector {
            values: second_values,
            bounds: bounds.clone(),
        };
        budget.record();
        if let Evaluation::Fitness(f2) = problem.evaluate(&second) {
            if f2 > offspring.fitness() {
                installed = Individual {
                    genome: second,
                    fitness: Some(f2),
                    delta: Some(delta),
                };
            }
        }
    }
    Ok(installed)
}

/// Offspring genome for one target under the given variant. Real vectors
/// use DE/rand/1 with participants picked uniformly (plain) or by the
/// spatial roulette; move and bit strings mutate one participant — the
/// target itself when plain, a roulette-picked neighbor under spatial
/// locality.
fn generate_offspring<R: Rng>(
    pop: &Population,
    target_index: usize,
    cfg: &DEConfig,
    niching: &NichingConfig,
    spatial: bool,
    rng: &mut R,
) -> Result<Genome> {
    let target = &pop.members[target_index].genome;
    match target {
        Genome::RealVector { .. } => {
            if pop.len() < 4 {
                return Err(Error::InvalidInput(format!(
                    "crowding DE needs population size >= 4, got {}",
                    pop.len()
                )));
            }
            let [r1, r2, r3] = if spatial {
                sl_pick_indices(pop, target_index, niching.metric, niching.sl_floor, rng)?
            } else {
                pick_distinct(pop.len(), target_index, rng)
            };
            let trial = combine_trial(pop, r1, r2, r3, cfg.scale_factor, cfg.bound_policy)?;
            recombine(target, &trial, cfg.crossover_rate, rng)
        }
        _ => {
            let base = if spatial {
                sl_pick_one(pop, target_index, niching.metric, niching.sl_floor, rng)?
            } else {
                target_index
            };
            let p = cfg.move_mutation(target.len());
            mutate_random(&pop.members[base].genome, p, rng)
        }
    }
}

/// One crowding sweep: for every target in index order, generate and
/// evaluate an offspring and let it compete with its nearest member.
/// Replacements apply immediately, so later targets see them. Rejected
/// (infeasible) offspring are discarded with their evaluation counted.
pub fn crowding_de_step<P: Problem + ?Sized, R: Rng>(
    pop: &mut Population,
    cfg: &DEConfig,
    niching: &NichingConfig,
    variant: CrowdingVariant,
    problem: &P,
    budget: &mut EvalBudget,
    rng: &mut R,
) -> Result<()> {
    cfg.validate()?;
    niching.validate()?;
    if !pop.all_evaluated() {
        return Err(Error::Contract("population has unevaluated members".into()));
    }
    let variant = if matches!(pop.members[0].genome, Genome::RealVector { .. }) {
        variant
    } else {
        variant.degraded_for_strings()
    };
    for i in 0..pop.len() {
        if budget.exhausted() {
            break;
        }
        let child = generate_offspring(pop, i, cfg, niching, variant.uses_spatial(), rng)?;
        budget.record();
        let fitness = match problem.evaluate(&child) {
            Evaluation::Fitness(f) => f,
            Evaluation::Rejected => continue,
        };
        let offspring = Individual::evaluated(child, fitness);
        let nn = nearest_member(pop, &offspring, niching.metric)?;
        if offspring.fitness() > pop.members[nn].fitness() {
            let installed = if variant.uses_temporal() {
                tl_update(
                    &offspring,
                    &pop.members[nn],
                    niching.tl_discount,
                    cfg.bound_policy,
                    problem,
                    budget,
                )?
            } else {
                offspring
            };
            pop.members[nn] = installed;
        }
    }
    Ok(())
}

/// Runs crowding differential evolution until termination.
pub fn run_crowding_de<P: Problem + ?Sized, R: Rng>(
    pop_size: usize,
    cfg: &DEConfig,
    niching: &NichingConfig,
    variant: CrowdingVariant,
    termination: &TerminationCondition,
    init_retries: u64,
    problem: &P,
    rng: &mut R,
    mut observer: impl FnMut(&GenStats, &Population),
) -> Result<(Population, Vec<GenStats>)> {
    cfg.validate()?;
    niching.validate()?;
    termination.validate()?;
    let start = Instant::now();
    let mut budget = EvalBudget::from_termination(termination);
    let mut pop = crate::problem::init_population(problem, pop_size, &mut budget, init_retries, rng)?;

    let mut state = RunState {
        generations: 0,
        evaluations: budget.used(),
        elapsed_seconds: 0.0,
        best_history: vec![pop.best().fitness()],
    };
    let row0 = GenStats {
        generation: 0,
        evaluations: budget.used(),
        best_fitness: pop.best().fitness(),
        mean_fitness: pop.mean_fitness(),
    };
    observer(&row0, &pop);
    let mut stats = vec![row0];

    loop {
        state.elapsed_seconds = start.elapsed().as_secs_f64();
        if check_termination(&state, termination) || budget.exhausted() {
            break;
        }
        let before = budget.used();
        crowding_de_step(&mut pop, cfg, niching, variant, problem, &mut budget, rng)?;
        if budget.used() == before {
            break;
        }
        state.generations += 1;
        state.evaluations = budget.used();
        state.best_history.push(pop.best().fitness());
        let row = GenStats {
            generation: state.generations,
            evaluations: budget.used(),
            best_fitness: pop.best().fitness(),
            mean_fitness: pop.mean_fitness(),
        };
        observer(&row, &pop);
        stats.push(row);
    }
    Ok((pop, stats))
}
