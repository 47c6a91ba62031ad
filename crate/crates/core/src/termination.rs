//! Termination conditions, run-state bookkeeping, and evaluation budgets.

use crate::error::{Error, Result};

/// When a run should stop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TerminationCondition {
    MaxGenerations(u64),
    MaxEvaluations(u64),
    MaxWallClockSeconds(f64),
    /// Fires when best fitness improved by less than `epsilon` over the
    /// last `window` generations.
    MinImprovement { epsilon: f64, window: u64 },
}

impl TerminationCondition {
    pub fn validate(&self) -> Result<()> {
        match *self {
            TerminationCondition::MaxGenerations(n) | TerminationCondition::MaxEvaluations(n) => {
                if n < 1 {
                    return Err(Error::InvalidConfig("termination count must be >= 1".into()));
                }
            }
            TerminationCondition::MaxWallClockSeconds(s) => {
                if !(s > 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "wall-clock limit {s} must be positive"
                    )));
                }
            }
            TerminationCondition::MinImprovement { epsilon, window } => {
                if epsilon < 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "improvement epsilon {epsilon} must be >= 0"
                    )));
                }
                if window < 1 {
                    return Err(Error::InvalidConfig("improvement window must be >= 1".into()));
                }
            }
        }
        Ok(())
    }

    /// Evaluation ceiling implied by this condition, when any.
    pub fn eval_limit(&self) -> Option<u64> {
        match *self {
            TerminationCondition::MaxEvaluations(n) => Some(n),
            _ => None,
        }
    }
}

/// Monotone run counters consulted by [`check_termination`].
#[derive(Debug, Clone, Default)]
pub struct RunState {
    pub generations: u64,
    pub evaluations: u64,
    pub elapsed_seconds: f64,
    /// Best fitness after initialization and after each generation.
    pub best_history: Vec<f64>,
}

/// True iff the condition is met for the given state.
pub fn check_termination(state: &RunState, cond: &TerminationCondition) -> bool {
    match *cond {
        TerminationCondition::MaxGenerations(n) => state.generations >= n,
        TerminationCondition::MaxEvaluations(n) => state.evaluations >= n,
        TerminationCondition::MaxWallClockSeconds(s) => state.elapsed_seconds >= s,
        TerminationCondition::MinImprovement { epsilon, window } => {
            let len = state.best_history.len();
            let w = window as usize;
            if len < w {
                return false;
            }
            let improvement = state.best_history[len - 1] - state.best_history[len - w];
            improvement < epsilon
        }
    }
}

/// Counts fitness evaluations against an optional hard ceiling.
/// Every evaluation attempt is counted, including feasibility-rejected
/// decodes under the delete policy.
#[derive(Debug, Clone)]
pub struct EvalBudget {
    used: u64,
    limit: Option<u64>,
}

impl EvalBudget {
    pub fn unlimited() -> Self {
        EvalBudget { used: 0, limit: None }
    }

    pub fn with_limit(limit: u64) -> Self {
        EvalBudget {
            used: 0,
            limit: Some(limit),
        }
    }

    pub fn from_termination(cond: &TerminationCondition) -> Self {
        match cond.eval_limit() {
            Some(n) => EvalBudget::with_limit(n),
            None => EvalBudget::unlimited(),
        }
    }

    pub fn exhausted(&self) -> bool {
        matches!(self.limit, Some(l) if self.used >= l)
    }

    /// Records one evaluation. Callers check `exhausted()` first.
    pub fn record(&mut self) {
        self.used += 1;
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_count_boundary() {
        let mut state = RunState::default();
        state.generations = 9;
        assert!(!check_termination(&state, &TerminationCondition::MaxGenerations(10)));
        state.generations = 10;
        assert!(check_termination(&state, &TerminationCondition::MaxGenerations(10)));
    }

    #[test]
    fn min_improvement_on_flat_history() {
        let cond = TerminationCondition::MinImprovement {
            epsilon: 0.01,
            window: 5,
        };
        let mut state = RunState::default();
        state.best_history = vec![2.0; 4];
        assert!(!check_termination(&state, &cond), "window not yet filled");
        state.best_history = vec![2.0; 5];
        assert!(check_termination(&state, &cond), "flat history must fire");
        state.best_history = vec![2.0, 2.0, 2.0, 2.0, 2.5];
        assert!(!check_termination(&state, &cond), "improvement 0.5 >= epsilon");
    }

    #[test]
    fn budget_counts_and_limits() {
        let mut b = EvalBudget::with_limit(2);
        assert!(!b.exhausted());
        b.record();
        b.record();
        assert!(b.exhausted());
        assert_eq!(b.used(), 2);
        let mut u = EvalBudget::unlimited();
        for _ in 0..1000 {
            u.record();
        }
        assert!(!u.exhausted());
    }

    #[test]
    fn validation() {
        assert!(TerminationCondition::MaxGenerations(0).validate().is_err());
        assert!(TerminationCondition::MinImprovement { epsilon: -1.0, window: 5 }
            .validate()
            .is_err());
        assert!(TerminationCondition::MinImprovement { epsilon: 0.0, window: 0 }
            .validate()
            .is_err());
        assert!(TerminationCondition::MaxWallClockSeconds(0.0).validate().is_err());
        assert!(TerminationCondition::MaxEvaluations(1).validate().is_ok());
    }
}
