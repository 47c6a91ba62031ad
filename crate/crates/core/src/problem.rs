//! The problem interface shared by all run drivers.

use rand::Rng;

use crate::bench::Peak;
use crate::error::{Error, Result};
use crate::genome::{Genome, GenomeSpec};
use crate::individual::{Individual, Population};
use crate::termination::EvalBudget;

/// Outcome of evaluating a genome. Fitness follows the maximization
/// convention; minimization problems negate at this boundary. `Rejected`
/// is the delete-policy signal: the genome is infeasible and the caller
/// should resample rather than assign it a numeric fitness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evaluation {
    Fitness(f64),
    Rejected,
}

/// A search problem: a genome representation plus a pure, deterministic
/// fitness function over it.
pub trait Problem {
    fn genome_spec(&self) -> GenomeSpec;

    fn evaluate(&self, genome: &Genome) -> Evaluation;

    /// Known optima, when the problem ships them (benchmark functions).
    fn known_peaks(&self) -> Option<&[Peak]> {
        None
    }
}

/// Adapts a closure over genomes into a [`Problem`]; fitness is taken
/// as-is (never rejected).
pub struct FnProblem<F: Fn(&Genome) -> f64> {
    spec: GenomeSpec,
    f: F,
}

impl<F: Fn(&Genome) -> f64> FnProblem<F> {
    pub fn new(spec: GenomeSpec, f: F) -> Self {
        FnProblem { spec, f }
    }
}

impl<F: Fn(&Genome) -> f64> Problem for FnProblem<F> {
    fn genome_spec(&self) -> GenomeSpec {
        self.spec.clone()
    }

    fn evaluate(&self, genome: &Genome) -> Evaluation {
        Evaluation::Fitness((self.f)(genome))
    }
}

/// Draws and evaluates one feasible individual, retrying rejected samples
/// up to `max_retries` times. Every attempt consumes budget.
pub(crate) fn sample_evaluated<P: Problem + ?Sized, R: Rng>(
    problem: &P,
    budget: &mut EvalBudget,
    max_retries: u64,
    rng: &mut R,
) -> Result<Individual> {
    let spec = problem.genome_spec();
    for _ in 0..max_retries.max(1) {
        if budget.exhausted() {
            return Err(Error::InitFailure(
                "evaluation budget exhausted while sampling feasible individuals".into(),
            ));
        }
        let genome = spec.sample(rng);
        budget.record();
        if let Evaluation::Fitness(f) = problem.evaluate(&genome) {
            return Ok(Individual::evaluated(genome, f));
        }
    }
    Err(Error::InitFailure(format!(
        "no feasible individual found within {max_retries} attempts"
    )))
}

/// Initializes a population of `size` evaluated individuals.
pub fn init_population<P: Problem + ?Sized, R: Rng>(
    problem: &P,
    size: usize,
    budget: &mut EvalBudget,
    max_retries: u64,
    rng: &mut R,
) -> Result<Population> {
    let mut members = Vec::with_capacity(size);
    for _ in 0..size {
        members.push(sample_evaluated(problem, budget, max_retries, rng)?);
    }
    Population::new(members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng_from_seed;

    #[test]
    fn init_counts_every_attempt() {
        let spec = GenomeSpec::Bits { len: 4 };
        let problem = FnProblem::new(spec, |g| g.len() as f64);
        let mut budget = EvalBudget::unlimited();
        let mut rng = rng_from_seed(1);
        let pop = init_population(&problem, 10, &mut budget, 100, &mut rng).unwrap();
        assert_eq!(pop.len(), 10);
        assert_eq!(budget.used(), 10);
        assert!(pop.all_evaluated());
    }

    #[test]
    fn init_fails_when_budget_too_small() {
        let spec = GenomeSpec::Bits { len: 4 };
        let problem = FnProblem::new(spec, |_| 0.0);
        let mut budget = EvalBudget::with_limit(3);
        let mut rng = rng_from_seed(1);
        assert!(init_population(&problem, 10, &mut budget, 100, &mut rng).is_err());
    }

    #[test]
    fn retries_exhausted_is_an_error() {
        struct Hostile;
        impl Problem for Hostile {
            fn genome_spec(&self) -> GenomeSpec {
                GenomeSpec::Bits { len: 2 }
            }
            fn evaluate(&self, _: &Genome) -> Evaluation {
                Evaluation::Rejected
            }
        }
        let mut budget = EvalBudget::unlimited();
        let mut rng = rng_from_seed(1);
        let err = init_population(&Hostile, 1, &mut budget, 25, &mut rng).unwrap_err();
        assert!(matches!(err, Error::InitFailure(_)));
        assert_eq!(budget.used(), 25);
    }
}
