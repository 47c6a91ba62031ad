//! Differential evolution: DE/rand/1 trial vectors, binomial
//! recombination, and the one-to-one greedy replacement loop.
//!
//! For move-string populations, where vector arithmetic does not apply,
//! trial generation degrades to per-position random mutation of the
//! target; replacement stays one-to-one and greedy.

use std::time::Instant;

use rand::Rng;

use crate::error::{Error, Result};
use crate::generational::GenStats;
use crate::genome::Genome;
use crate::individual::{Individual, Population};
use crate::mutation::mutate_random;
use crate::problem::{Evaluation, Problem};
use crate::termination::{check_termination, EvalBudget, RunState, TerminationCondition};

/// How out-of-bounds trial components are brought back inside the box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundPolicy {
    /// Fold the overshoot back into the interval.
    Reflect,
    /// Pin to the violated bound.
    Clamp,
}

impl BoundPolicy {
    pub fn apply(&self, v: f64, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return lo;
        }
        match self {
            BoundPolicy::Clamp => v.clamp(lo, hi),
            BoundPolicy::Reflect => {
                let period = 2.0 * (hi - lo);
                let mut t = (v - lo) % period;
                if t < 0.0 {
                    t += period;
                }
                lo + if t <= hi - lo { t } else { period - t }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundPolicy::Reflect => "reflect",
            BoundPolicy::Clamp => "clamp",
        }
    }
}

/// Differential-evolution parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct DEConfig {
    /// Difference-vector scale factor F.
    pub scale_factor: f64,
    /// Binomial recombination rate CR.
    pub crossover_rate: f64,
    pub bound_policy: BoundPolicy,
    pub seed: u64,
    /// Per-position mutation probability for the move-string trial path;
    /// `None` defaults to `2 / genome length`.
    pub move_mutation_prob: Option<f64>,
}

impl Default for DEConfig {
    fn default() -> Self {
        DEConfig {
            scale_factor: 0.5,
            crossover_rate: 0.9,
            bound_policy: BoundPolicy::Reflect,
            seed: 0,
            move_mutation_prob: None,
        }
    }
}

impl DEConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.scale_factor > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "scale factor {} must be positive",
                self.scale_factor
            )));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(Error::InvalidConfig(format!(
                "crossover rate {} outside [0, 1]",
                self.crossover_rate
            )));
        }
        if let Some(p) = self.move_mutation_prob {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!(
                    "move mutation probability {p} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn move_mutation(&self, len: usize) -> f64 {
        self.move_mutation_prob
            .unwrap_or_else(|| (2.0 / len.max(1) as f64).min(1.0))
    }
}

/// Draws three distinct indices, all different from `target`, uniformly.
pub(crate) fn pick_distinct<R: Rng>(n: usize, target: usize, rng: &mut R) -> [usize; 3] {
    debug_assert!(n >= 4);
    let mut picks = [0usize; 3];
    for slot in 0..3 {
        loop {
            let c = rng.random_range(0..n);
            if c != target && !picks[..slot].contains(&c) {
                picks[slot] = c;
                break;
            }
        }
    }
    picks
}

/// Base plus scaled difference: `x1 + F * (x2 - x3)`, with the bound
/// policy applied per component.
pub(crate) fn combine_trial(
    pop: &Population,
    r1: usize,
    r2: usize,
    r3: usize,
    scale: f64,
    policy: BoundPolicy,
) -> Result<Genome> {
    let base = real_values(pop, r1)?;
    let d1 = real_values(pop, r2)?;
    let d2 = real_values(pop, r3)?;
    let bounds = match &pop.members[r1].genome {
        Genome::RealVector { bounds, .. } => bounds.clone(),
        _ => unreachable!("checked by real_values"),
    };
    let values = base
        .iter()
        .zip(d1.iter().zip(d2))
        .zip(&bounds)
        .map(|((&b, (&x2, &x3)), &(lo, hi))| policy.apply(b + scale * (x2 - x3), lo, hi))
        .collect();
    Ok(Genome::RealVector { values, bounds })
}

fn real_values<'a>(pop: &'a Population, idx: usize) -> Result<&'a [f64]> {
    pop.members[idx].genome.real_values().ok_or_else(|| {
        Error::InvalidInput(format!(
            "member {idx} is a {}, expected real vector",
            pop.members[idx].genome.variant_name()
        ))
    })
}

/// DE/rand/1 trial vector for the given target: three participants are
/// drawn uniformly, distinct from each other and from the target; the
/// result is `x_r1 + F * (x_r2 - x_r3)` under the bound policy.
pub fn trial_vector<R: Rng>(
    pop: &Population,
    target_index: usize,
    scale: f64,
    policy: BoundPolicy,
    rng: &mut R,
) -> Result<Genome> {
    let n = pop.len();
    if n < 4 {
        return Err(Error::InvalidInput(format!(
            "trial vector generation needs population size >= 4, got {n}"
        )));
    }
    let dim = real_values(pop, 0)?.len();
    for i in 1..n {
        if real_values(pop, i)?.len() != dim {
            return Err(Error::InvalidInput("members have mixed dimensions".into()));
        }
    }
    let [r1, r2, r3] = pick_distinct(n, target_index, rng);
    combine_trial(pop, r1, r2, r3, scale, policy)
}

/// Binomial recombination: each position is taken from the trial with
/// probability `cr`, from the target otherwise, and one uniformly chosen
/// index is always taken from the trial. The forced index is drawn first,
/// then one uniform per remaining position.
pub fn recombine<R: Rng>(target: &Genome, trial: &Genome, cr: f64, rng: &mut R) -> Result<Genome> {
    if !(0.0..=1.0).contains(&cr) {
        return Err(Error::InvalidInput(format!("crossover rate {cr} outside [0, 1]")));
    }
    let len = crate::crossover::check_compatible(target, trial)?;
    if len == 0 {
        return Err(Error::InvalidInput("cannot recombine empty genomes".into()));
    }
    let forced = rng.random_range(0..len);
    let take_trial: Vec<bool> = (0..len)
        .map(|i| i == forced || rng.random::<f64>() < cr)
        .collect();
    let mut child = target.clone();
    match (&mut child, trial) {
        (Genome::BitString(c), Genome::BitString(t)) => {
            for (i, take) in take_trial.iter().enumerate() {
                if *take {
                    c[i] = t[i];
                }
            }
        }
        (Genome::RealVector { values: c, .. }, Genome::RealVector { values: t, .. }) => {
            for (i, take) in take_trial.iter().enumerate() {
                if *take {
                    c[i] = t[i];
                }
            }
        }
        (Genome::MoveString { moves: c, .. }, Genome::MoveString { moves: t, .. }) => {
            for (i, take) in take_trial.iter().enumerate() {
                if *take {
                    c[i] = t[i];
                }
            }
        }
        _ => unreachable!("checked compatible"),
    }
    Ok(child)
}

/// Generates the offspring genome for one target. Real vectors follow
/// DE/rand/1 plus recombination; move and bit strings mutate the target
/// per position.
pub(crate) fn generate_offspring<R: Rng>(
    pop: &Population,
    target_index: usize,
    cfg: &DEConfig,
    rng: &mut R,
) -> Result<Genome> {
    let target = &pop.members[target_index].genome;
    match target {
        Genome::RealVector { .. } => {
            let trial = trial_vector(pop, target_index, cfg.scale_factor, cfg.bound_policy, rng)?;
            recombine(target, &trial, cfg.crossover_rate, rng)
        }
        _ => mutate_random(target, cfg.move_mutation(target.len()), rng),
    }
}

/// One full sweep of Algorithm-style greedy replacement: every member in
/// index order receives an offspring, which replaces it iff strictly
/// fitter; otherwise the parent is kept. A rejected (infeasible)
/// offspring also keeps the parent. Stops early when the budget runs out,
/// carrying the remaining parents over unchanged.
pub fn de_step<P: Problem + ?Sized, R: Rng>(
    pop: &mut Population,
    cfg: &DEConfig,
    problem: &P,
    budget: &mut EvalBudget,
    rng: &mut R,
) -> Result<()> {
    cfg.validate()?;
    if !pop.all_evaluated() {
        return Err(Error::Contract("population has unevaluated members".into()));
    }
    let n = pop.len();
    let mut next = Vec::with_capacity(n);
    for i in 0..n {
        if budget.exhausted() {
            next.extend(pop.members[i..].iter().cloned());
            break;
        }
        let child = generate_offspring(pop, i, cfg, rng)?;
        budget.record();
        match problem.evaluate(&child) {
            Evaluation::Fitness(f) if f > pop.members[i].fitness() => {
                next.push(Individual::evaluated(child, f));
            }
            _ => next.push(pop.members[i].clone()),
        }
    }
    pop.members = next;
    Ok(())
}

/// Runs differential evolution until the termination condition fires.
pub fn run_de<P: Problem + ?Sized, R: Rng>(
    pop_size: usize,
    cfg: &DEConfig,
    termination: &TerminationCondition,
    init_retries: u64,
    problem: &P,
    rng: &mut R,
    mut observer: impl FnMut(&GenStats, &Population),
) -> Result<(Population, Vec<GenStats>)> {
    cfg.validate()?;
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
        de_step(&mut pop, cfg, problem, &mut budget, rng)?;
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
