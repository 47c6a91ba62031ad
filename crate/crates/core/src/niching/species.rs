//! Species conservation and the two-stage explosion algorithm.
//!
//! Species seeds are high-fitness representatives kept pairwise at least
//! a species radius apart; they bypass survival selection into the next
//! generation. Species-specific explosion hill-climbs each seed by
//! evaluating mutated copies and keeping the best. The full run starts
//! with an exploration stage (normal breeding plus random injections) and
//! switches to a species-specific stage (breeding restricted to within a
//! species) once a configured fraction of the evaluation budget is spent.

use std::time::Instant;

use rand::Rng;

use super::{distance, DistanceMetric};
use crate::error::{Error, Result};
use crate::generational::{breed_offspring, survival_select, GenStats, RunConfig};
use crate::individual::{Individual, Population};
use crate::mutation::MutationOp;
use crate::problem::{sample_evaluated, Evaluation, Problem};
use crate::selection::{ranked_indices, select};
use crate::termination::{check_termination, EvalBudget, RunState};

/// Parameters of species conservation and explosion.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesConfig {
    /// Minimum distance between any two species seeds.
    pub species_radius: f64,
    /// Mutated copies evaluated per seed each generation.
    pub explosion_copies: usize,
    /// Fraction of the evaluation budget spent in the exploration stage;
    /// 1.0 keeps the run in exploration throughout.
    pub stage_switch_fraction: f64,
    /// Fresh random individuals added to the offspring pool per
    /// exploration-stage generation.
    pub random_injection_count: usize,
}

impl Default for SpeciesConfig {
    fn default() -> Self {
        SpeciesConfig {
            species_radius: 0.1,
            explosion_copies: 5,
            stage_switch_fraction: 0.5,
            random_injection_count: 5,
        }
    }
}

impl SpeciesConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.species_radius > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "species radius {} must be positive",
                self.species_radius
            )));
        }
        if self.explosion_copies < 1 {
            return Err(Error::InvalidConfig("explosion copies must be >= 1".into()));
        }
        if !(self.stage_switch_fraction > 0.0 && self.stage_switch_fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "stage switch fraction {} outside (0, 1]",
                self.stage_switch_fraction
            )));
        }
        Ok(())
    }
}

/// Scans members in descending fitness order; a member becomes a seed iff
/// its distance to every already-chosen seed is at least the species
/// radius. The fittest member is therefore always a seed. Returns seed
/// indices in scan order.
pub fn select_species_seeds(
    population: &Population,
    species_radius: f64,
    metric: DistanceMetric,
) -> Result<Vec<usize>> {
    if !(species_radius > 0.0) {
        return Err(Error::InvalidInput(format!(
            "species radius {species_radius} must be positive"
        )));
    }
    let fitness = population.fitness_values()?;
    let mut seeds: Vec<usize> = Vec::new();
    for idx in ranked_indices(&fitness) {
        let mut isolated = true;
        for &s in &seeds {
            let d = distance(
                &population.members[idx].genome,
                &population.members[s].genome,
                metric,
            )?;
            if d < species_radius {
                isolated = false;
                break;
            }
        }
        if isolated {
            seeds.push(idx);
        }
    }
    Ok(seeds)
}

/// Species-specific explosion: evaluates `copies` mutated clones of the
/// seed and returns the fittest of the seed and its clones, so the seed
/// can only improve. Ties keep the seed.
pub fn species_explosion<P: Problem + ?Sized, R: Rng>(
    seed: &Individual,
    copies: usize,
    mutation: &MutationOp,
    problem: &P,
    budget: &mut EvalBudget,
    rng: &mut R,
) -> Result<Individual> {
    if copies < 1 {
        return Err(Error::InvalidInput("explosion needs at least one copy".into()));
    }
    let mut best = seed.clone();
    for _ in 0..copies {
        if budget.exhausted() {
            break;
        }
        let clone = mutation.apply(&seed.genome, rng)?;
        budget.record();
        if let Evaluation::Fitness(f) = problem.evaluate(&clone) {
            if f > best.fitness() {
                best = Individual::evaluated(clone, f);
            }
        }
    }
    Ok(best)
}

/// Assigns every member to the nearest seed within the species radius;
/// members outside every seed's radius form singleton species. Returns
/// one member-index list per species (seed species first, in seed order).
fn assign_species(
    pop: &Population,
    seeds: &[usize],
    radius: f64,
    metric: DistanceMetric,
) -> Result<Vec<Vec<usize>>> {
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); seeds.len()];
    let mut singletons: Vec<Vec<usize>> = Vec::new();
    for i in 0..pop.len() {
        let mut best: Option<(usize, f64)> = None;
        for (si, &s) in seeds.iter().enumerate() {
            let d = distance(&pop.members[i].genome, &pop.members[s].genome, metric)?;
            if d < radius && best.map_or(true, |(_, bd)| d < bd) {
                best = Some((si, d));
            }
        }
        match best {
            Some((si, _)) => groups[si].push(i),
            None => singletons.push(vec![i]),
        }
    }
    groups.extend(singletons);
    groups.retain(|g| !g.is_empty());
    Ok(groups)
}

/// Breeds `count` offspring with selection and crossover restricted to
/// members of the same species. Offspring slot `j` breeds inside the
/// species of member `j mod n`; singleton species clone and mutate their
/// only member.
fn breed_within_species<P: Problem + ?Sized, R: Rng>(
    pop: &Population,
    species: &[Vec<usize>],
    config: &RunConfig,
    count: usize,
    problem: &P,
    budget: &mut EvalBudget,
    rng: &mut R,
) -> Result<Vec<Individual>> {
    let n = pop.len();
    let mut species_of = vec![0usize; n];
    for (gi, group) in species.iter().enumerate() {
        for &m in group {
            species_of[m] = gi;
        }
    }
    let mut offspring = Vec::with_capacity(count);
    for slot in 0..count {
        if budget.exhausted() {
            break;
        }
        let host = slot % n;
        let group = &species[species_of[host]];
        let mut produced = None;
        for _ in 0..config.infeasible_retry_limit.max(1) {
            if budget.exhausted() {
                break;
            }
            let child = if group.len() >= 2 {
                let sub = Population::new(group.iter().map(|&m| pop.members[m].clone()).collect())?;
                let picks = select(&sub, config.parent_scheme, 2, rng)?;
                let (c, _) = config.crossover.apply(
                    &sub.members[picks[0]].genome,
                    &sub.members[picks[1]].genome,
                    rng,
                )?;
                config.mutation.apply(&c, rng)?
            } else {
                config.mutation.apply(&pop.members[group[0]].genome, rng)?
            };
            budget.record();
            if let Evaluation::Fitness(f) = problem.evaluate(&child) {
                produced = Some(Individual::evaluated(child, f));
                break;
            }
        }
        match produced {
            Some(ind) => offspring.push(ind),
            None => {
                if budget.exhausted() {
                    break;
                }
                offspring.push(pop.members[host].clone());
            }
        }
    }
    Ok(offspring)
}

/// Copies each conserved seed into the next population when survival
/// selection dropped it, overwriting the worst not-yet-conserved member
/// (lowest fitness, ties at the lower index).
fn conserve_seeds(next: &mut Population, seeds: &[Individual]) {
    let mut claimed = vec![false; next.len()];
    for seed in seeds {
        if let Some(pos) = next
            .members
            .iter()
            .position(|m| m.genome == seed.genome)
        {
            claimed[pos] = true;
            continue;
        }
        let mut worst: Option<usize> = None;
        for i in 0..next.len() {
            if claimed[i] {
                continue;
            }
            if worst.map_or(true, |w| next.members[i].fitness() < next.members[w].fitness()) {
                worst = Some(i);
            }
        }
        if let Some(w) = worst {
            next.members[w] = seed.clone();
            claimed[w] = true;
        }
    }
}

/// Runs the two-stage species-conserving algorithm. Requires an
/// evaluation-budget termination so the stage switch point is defined.
/// Returns the final population, the seed indices within it, and the
/// per-generation log.
pub fn run_ease<P: Problem + ?Sized, R: Rng>(
    config: &RunConfig,
    species_cfg: &SpeciesConfig,
    metric: DistanceMetric,
    problem: &P,
    rng: &mut R,
    mut observer: impl FnMut(&GenStats, &Population),
) -> Result<(Population, Vec<usize>, Vec<GenStats>)> {
    config.validate()?;
    species_cfg.validate()?;
    let eval_limit = config.termination.eval_limit().ok_or_else(|| {
        Error::InvalidConfig(
            "species-explosion runs need a max-evaluations termination to place the stage switch"
                .into(),
        )
    })?;
    let switch_at = (species_cfg.stage_switch_fraction * eval_limit as f64) as u64;

    let start = Instant::now();
    let mut budget = EvalBudget::from_termination(&config.termination);
    let mut pop = crate::problem::init_population(
        problem,
        config.population_size,
        &mut budget,
        config.infeasible_retry_limit,
        rng,
    )?;

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
        if check_termination(&state, &config.termination) || budget.exhausted() {
            break;
        }
        let exploring = budget.used() < switch_at;

        let seed_indices = select_species_seeds(&pop, species_cfg.species_radius, metric)?;

        // Explosion improves seeds in place; both stages apply it.
        for &s in &seed_indices {
            let improved = species_explosion(
                &pop.members[s],
                species_cfg.explosion_copies,
                &config.mutation,
                problem,
                &mut budget,
                rng,
            )?;
            pop.members[s] = improved;
        }
        let conserved: Vec<Individual> =
            seed_indices.iter().map(|&s| pop.members[s].clone()).collect();

        let mut offspring = if exploring {
            breed_offspring(&pop, config, config.offspring_size, problem, &mut budget, rng)?
        } else {
            let species =
                assign_species(&pop, &seed_indices, species_cfg.species_radius, metric)?;
            breed_within_species(
                &pop,
                &species,
                config,
                config.offspring_size,
                problem,
                &mut budget,
                rng,
            )?
        };
        if offspring.len() < config.offspring_size {
            break;
        }
        if exploring {
            let mut injected = 0;
            while injected < species_cfg.random_injection_count && !budget.exhausted() {
                offspring.push(sample_evaluated(
                    problem,
                    &mut budget,
                    config.infeasible_retry_limit,
                    rng,
                )?);
                injected += 1;
            }
        }
        let offspring = Population::new(offspring)?;
        let mut next = survival_select(&pop, &offspring, config, rng)?;
        conserve_seeds(&mut next, &conserved);
        pop = next;

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

    let final_seeds = select_species_seeds(&pop, species_cfg.species_radius, metric)?;
    Ok((pop, final_seeds, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::{Genome, GenomeSpec};
    use crate::mutation::MutationOp;
    use crate::problem::FnProblem;
    use crate::rng_from_seed;
    use crate::termination::TerminationCondition;

    fn ind(x: f64, f: f64) -> Individual {
        Individual::evaluated(
            Genome::real_vector(vec![x], vec![(-100.0, 100.0)]).unwrap(),
            f,
        )
    }

    #[test]
    fn one_seed_when_radius_exceeds_diameter() {
        let pop = Population::new(vec![ind(0.0, 1.0), ind(1.0, 5.0), ind(2.0, 3.0)]).unwrap();
        let seeds = select_species_seeds(&pop, 100.0, DistanceMetric::Euclidean).unwrap();
        assert_eq!(seeds, vec![1]);
    }

    #[test]
    fn tiny_radius_makes_every_distinct_genome_a_seed() {
        let pop = Population::new(vec![
            ind(0.0, 1.0),
            ind(1.0, 5.0),
            ind(1.0, 5.0),
            ind(2.0, 3.0),
        ])
        .unwrap();
        let seeds = select_species_seeds(&pop, 1e-12, DistanceMetric::Euclidean).unwrap();
        // The duplicate at x=1 collapses onto the first copy.
        assert_eq!(seeds.len(), 3);
        assert!(seeds.contains(&0) && seeds.contains(&3));
        assert!(seeds.contains(&1) ^ seeds.contains(&2));
    }

    #[test]
    fn three_clusters_give_three_seeds() {
        // Inter-cluster distance > radius > intra-cluster diameter.
        let pop = Population::new(vec![
            ind(0.0, 1.0),
            ind(0.3, 2.0),
            ind(5.0, 7.0),
            ind(5.2, 4.0),
            ind(10.0, 3.0),
            ind(10.4, 6.0),
        ])
        .unwrap();
        let seeds = select_species_seeds(&pop, 2.0, DistanceMetric::Euclidean).unwrap();
        assert_eq!(seeds, vec![2, 5, 1], "cluster bests in descending fitness");
        // Pairwise seed separation honors the radius.
        for (i, &a) in seeds.iter().enumerate() {
            for &b in &seeds[i + 1..] {
                let d = distance(
                    &pop.members[a].genome,
                    &pop.members[b].genome,
                    DistanceMetric::Euclidean,
                )
                .unwrap();
                assert!(d >= 2.0);
            }
        }
    }

    #[test]
    fn explosion_never_worsens_the_seed() {
        let problem = FnProblem::new(GenomeSpec::Reals { bounds: vec![(-1.0, 1.0)] }, |g| {
            -g.real_values().unwrap()[0].powi(2)
        });
        let seed = ind(0.1, -0.01);
        let mut budget = EvalBudget::unlimited();
        let mut rng = rng_from_seed(2);
        let out = species_explosion(
            &seed,
            20,
            &MutationOp::Gaussian { p: 1.0, sigma: 0.05 },
            &problem,
            &mut budget,
            &mut rng,
        )
        .unwrap();
        assert!(out.fitness() >= seed.fitness());
        assert_eq!(budget.used(), 20);
    }

    #[test]
    fn explosion_improves_on_a_smooth_slope() {
        let problem = FnProblem::new(GenomeSpec::Reals { bounds: vec![(-1.0, 1.0)] }, |g| {
            -g.real_values().unwrap()[0].powi(2)
        });
        let mut improved = 0;
        for seed_val in 0..20u64 {
            let seed = ind(0.1, -0.010000000000000002);
            let mut budget = EvalBudget::unlimited();
            let mut rng = rng_from_seed(seed_val);
            let out = species_explosion(
                &seed,
                30,
                &MutationOp::Gaussian { p: 1.0, sigma: 0.05 },
                &problem,
                &mut budget,
                &mut rng,
            )
            .unwrap();
            if out.fitness() > seed.fitness() {
                improved += 1;
            }
        }
        assert!(improved >= 18, "only {improved}/20 explosions improved");
    }

    #[test]
    fn conserve_restores_missing_seeds() {
        let mut next = Population::new(vec![ind(0.0, 5.0), ind(1.0, 0.5), ind(2.0, 1.0)]).unwrap();
        let seed_present = ind(0.0, 5.0);
        let seed_missing = ind(9.0, 4.0);
        conserve_seeds(&mut next, &[seed_present.clone(), seed_missing.clone()]);
        assert_eq!(next.members[0], seed_present);
        // Worst member (index 1, fitness 0.5) was overwritten.
        assert_eq!(next.members[1], seed_missing);
        assert_eq!(next.members[2].fitness(), 1.0);
    }

    #[test]
    fn run_requires_evaluation_budget() {
        let problem = FnProblem::new(GenomeSpec::Reals { bounds: vec![(0.0, 1.0)] }, |_| 0.0);
        let config = RunConfig {
            termination: TerminationCondition::MaxGenerations(5),
            ..RunConfig::default()
        };
        let mut rng = rng_from_seed(1);
        assert!(run_ease(
            &config,
            &SpeciesConfig::default(),
            DistanceMetric::Euclidean,
            &problem,
            &mut rng,
            |_, _| {}
        )
        .is_err());
    }
}
