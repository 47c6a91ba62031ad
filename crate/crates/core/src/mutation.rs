//! Mutation operators.
//!
//! Each operator visits genome positions in order and draws its
//! per-position gate first, then the payload value only when the gate
//! fires; this fixes the random stream consumption for reproducibility.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::genome::Genome;

/// Mutation operator choice plus parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MutationOp {
    /// Invert each bit with probability `p` (bit strings only).
    BitFlip { p: f64 },
    /// Resample each position uniformly from its domain with probability `p`.
    Random { p: f64 },
    /// Add or subtract `step` (sign uniform) with probability `p` per
    /// component; real vectors only, clamped to bounds.
    Delta { p: f64, step: f64 },
    /// Add a `N(0, sigma^2)` draw with probability `p` per component;
    /// real vectors only, clamped to bounds.
    Gaussian { p: f64, sigma: f64 },
}

impl MutationOp {
    pub fn validate(&self) -> Result<()> {
        let p = match *self {
            MutationOp::BitFlip { p } => p,
            MutationOp::Random { p } => p,
            MutationOp::Delta { p, step } => {
                if step <= 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "delta mutation step {step} must be positive"
                    )));
                }
                p
            }
            MutationOp::Gaussian { p, sigma } => {
                if sigma <= 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "gaussian mutation sigma {sigma} must be positive"
                    )));
                }
                p
            }
        };
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidConfig(format!(
                "mutation probability {p} outside [0, 1]"
            )));
        }
        Ok(())
    }

    pub fn apply<R: Rng>(&self, g: &Genome, rng: &mut R) -> Result<Genome> {
        match *self {
            MutationOp::BitFlip { p } => mutate_bitflip(g, p, rng),
            MutationOp::Random { p } => mutate_random(g, p, rng),
            MutationOp::Delta { p, step } => mutate_delta(g, p, step, rng),
            MutationOp::Gaussian { p, sigma } => mutate_gaussian(g, p, sigma, rng),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MutationOp::BitFlip { .. } => "bitflip",
            MutationOp::Random { .. } => "random",
            MutationOp::Delta { .. } => "delta",
            MutationOp::Gaussian { .. } => "gaussian",
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!(
            "mutation probability {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Inverts each bit independently with probability `p`.
pub fn mutate_bitflip<R: Rng>(g: &Genome, p: f64, rng: &mut R) -> Result<Genome> {
    check_probability(p)?;
    match g {
        Genome::BitString(bits) => Ok(Genome::BitString(
            bits.iter()
                .map(|&b| if rng.random_bool(p) { !b } else { b })
                .collect(),
        )),
        other => Err(Error::InvalidInput(format!(
            "bitflip mutation requires a bit string, got {}",
            other.variant_name()
        ))),
    }
}

/// Resamples each position uniformly from its domain with probability `p`.
/// Resampling may reproduce the current value.
pub fn mutate_random<R: Rng>(g: &Genome, p: f64, rng: &mut R) -> Result<Genome> {
    check_probability(p)?;
    match g {
        Genome::BitString(bits) => Ok(Genome::BitString(
            bits.iter()
                .map(|&b| if rng.random_bool(p) { rng.random::<bool>() } else { b })
                .collect(),
        )),
        Genome::RealVector { values, bounds } => Ok(Genome::RealVector {
            values: values
                .iter()
                .zip(bounds)
                .map(|(&v, &(lo, hi))| {
                    if rng.random_bool(p) {
                        if hi > lo {
                            rng.random_range(lo..hi)
                        } else {
                            lo
                        }
                    } else {
                        v
                    }
                })
                .collect(),
            bounds: bounds.clone(),
        }),
        Genome::MoveString { moves, alphabet } => Ok(Genome::MoveString {
            moves: moves
                .iter()
                .map(|&m| {
                    if rng.random_bool(p) {
                        alphabet[rng.random_range(0..alphabet.len())]
                    } else {
                        m
                    }
                })
                .collect(),
            alphabet: alphabet.clone(),
        }),
    }
}

/// Adds `+step` or `-step` (sign uniform) with probability `p` per
/// component, clamping to bounds.
pub fn mutate_delta<R: Rng>(g: &Genome, p: f64, step: f64, rng: &mut R) -> Result<Genome> {
    check_probability(p)?;
    if step <= 0.0 {
        return Err(Error::InvalidInput(format!("step {step} must be positive")));
    }
    match g {
        Genome::RealVector { values, bounds } => Ok(Genome::RealVector {
            values: values
                .iter()
                .zip(bounds)
                .map(|(&v, &(lo, hi))| {
                    if rng.random_bool(p) {
                        let signed = if rng.random_bool(0.5) { step } else { -step };
                        (v + signed).clamp(lo, hi)
                    } else {
                        v
                    }
                })
                .collect(),
            bounds: bounds.clone(),
        }),
        other => Err(Error::InvalidInput(format!(
            "delta mutation requires a real vector, got {}",
            other.variant_name()
        ))),
    }
}

/// Adds a `N(0, sigma^2)` perturbation with probability `p` per component,
/// clamping to bounds.
pub fn mutate_gaussian<R: Rng>(g: &Genome, p: f64, sigma: f64, rng: &mut R) -> Result<Genome> {
    check_probability(p)?;
    if sigma <= 0.0 {
        return Err(Error::InvalidInput(format!("sigma {sigma} must be positive")));
    }
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| Error::InvalidInput(format!("bad gaussian parameters: {e}")))?;
    match g {
        Genome::RealVector { values, bounds } => Ok(Genome::RealVector {
            values: values
                .iter()
                .zip(bounds)
                .map(|(&v, &(lo, hi))| {
                    if rng.random_bool(p) {
                        (v + normal.sample(rng)).clamp(lo, hi)
                    } else {
                        v
                    }
                })
                .collect(),
            bounds: bounds.clone(),
        }),
        other => Err(Error::InvalidInput(format!(
            "gaussian mutation requires a real vector, got {}",
            other.variant_name()
        ))),
    }
}
