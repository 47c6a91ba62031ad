//! Crossover operators.
//!
//! One-point, two-point, and uniform crossover swap positions between two
//! genomes of the same variant and length; blend crossover averages two
//! real vectors. All operators preserve representation validity.

use rand::Rng;

use crate::error::{Error, Result};
use crate::genome::Genome;

/// Crossover operator choice plus parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossoverOp {
    OnePoint,
    TwoPoint,
    Uniform { p_swap: f64 },
    Blend { weight: f64 },
}

impl CrossoverOp {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CrossoverOp::Uniform { p_swap } => {
                if !(0.0..=1.0).contains(&p_swap) {
                    return Err(Error::InvalidConfig(format!(
                        "uniform crossover swap probability {p_swap} outside [0, 1]"
                    )));
                }
            }
            CrossoverOp::Blend { weight } => {
                if !(0.0..=1.0).contains(&weight) {
                    return Err(Error::InvalidConfig(format!(
                        "blend weight {weight} outside [0, 1]"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Produces two children. Blend yields the two weighted averages
    /// `w*a + (1-w)*b` and `w*b + (1-w)*a`.
    pub fn apply<R: Rng>(&self, a: &Genome, b: &Genome, rng: &mut R) -> Result<(Genome, Genome)> {
        match *self {
            CrossoverOp::OnePoint => crossover_one_point(a, b, rng),
            CrossoverOp::TwoPoint => crossover_two_point(a, b, rng),
            CrossoverOp::Uniform { p_swap } => crossover_uniform(a, b, p_swap, rng),
            CrossoverOp::Blend { weight } => Ok((
                crossover_blend(a, b, weight)?,
                crossover_blend(b, a, weight)?,
            )),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CrossoverOp::OnePoint => "one-point",
            CrossoverOp::TwoPoint => "two-point",
            CrossoverOp::Uniform { .. } => "uniform",
            CrossoverOp::Blend { .. } => "blend",
        }
    }
}

/// Checks the two parents share variant, length, and domain; returns length.
pub(crate) fn check_compatible(a: &Genome, b: &Genome) -> Result<usize> {
    let ok = match (a, b) {
        (Genome::BitString(x), Genome::BitString(y)) => x.len() == y.len(),
        (
            Genome::RealVector { values: x, bounds: bx },
            Genome::RealVector { values: y, bounds: by },
        ) => x.len() == y.len() && bx == by,
        (
            Genome::MoveString { moves: x, alphabet: ax },
            Genome::MoveString { moves: y, alphabet: ay },
        ) => x.len() == y.len() && ax == ay,
        _ => false,
    };
    if !ok {
        return Err(Error::InvalidInput(format!(
            "incompatible parents: {} of length {} vs {} of length {}",
            a.variant_name(),
            a.len(),
            b.variant_name(),
            b.len()
        )));
    }
    Ok(a.len())
}

/// Swaps positions where `swap_at` is true, returning the two children.
fn swap_positions(a: &Genome, b: &Genome, swap_at: &[bool]) -> (Genome, Genome) {
    let mut ca = a.clone();
    let mut cb = b.clone();
    match (&mut ca, &mut cb) {
        (Genome::BitString(x), Genome::BitString(y)) => {
            for (i, &s) in swap_at.iter().enumerate() {
                if s {
                    std::mem::swap(&mut x[i], &mut y[i]);
                }
            }
        }
        (Genome::RealVector { values: x, .. }, Genome::RealVector { values: y, .. }) => {
            for (i, &s) in swap_at.iter().enumerate() {
                if s {
                    std::mem::swap(&mut x[i], &mut y[i]);
                }
            }
        }
        (Genome::MoveString { moves: x, .. }, Genome::MoveString { moves: y, .. }) => {
            for (i, &s) in swap_at.iter().enumerate() {
                if s {
                    std::mem::swap(&mut x[i], &mut y[i]);
                }
            }
        }
        _ => unreachable!("parents checked compatible"),
    }
    (ca, cb)
}

pub(crate) fn one_point_at(a: &Genome, b: &Genome, cut: usize) -> (Genome, Genome) {
    let len = a.len();
    let swap: Vec<bool> = (0..len).map(|i| i >= cut).collect();
    swap_positions(a, b, &swap)
}

pub(crate) fn two_point_at(a: &Genome, b: &Genome, c1: usize, c2: usize) -> (Genome, Genome) {
    let len = a.len();
    let swap: Vec<bool> = (0..len).map(|i| i >= c1 && i < c2).collect();
    swap_positions(a, b, &swap)
}

/// One-point crossover: a cut position is drawn uniformly from `1..len-1`
/// (inclusive) and the tails after the cut are exchanged.
pub fn crossover_one_point<R: Rng>(a: &Genome, b: &Genome, rng: &mut R) -> Result<(Genome, Genome)> {
    let len = check_compatible(a, b)?;
    if len < 2 {
        return Err(Error::InvalidInput(format!(
            "one-point crossover needs length >= 2, got {len}"
        )));
    }
    let cut = rng.random_range(1..len);
    Ok(one_point_at(a, b, cut))
}

/// Two-point crossover: two distinct interior cut positions `c1 < c2`,
/// sampled uniformly without replacement; the middle segments `[c1, c2)`
/// are exchanged.
pub fn crossover_two_point<R: Rng>(a: &Genome, b: &Genome, rng: &mut R) -> Result<(Genome, Genome)> {
    let len = check_compatible(a, b)?;
    if len < 3 {
        return Err(Error::InvalidInput(format!(
            "two-point crossover needs length >= 3, got {len}"
        )));
    }
    let c1 = rng.random_range(1..len);
    let mut c2 = rng.random_range(1..len);
    while c2 == c1 {
        c2 = rng.random_range(1..len);
    }
    let (c1, c2) = (c1.min(c2), c1.max(c2));
    Ok(two_point_at(a, b, c1, c2))
}

/// Uniform crossover: every position is swapped independently with
/// probability `p_swap`.
pub fn crossover_uniform<R: Rng>(
    a: &Genome,
    b: &Genome,
    p_swap: f64,
    rng: &mut R,
) -> Result<(Genome, Genome)> {
    let len = check_compatible(a, b)?;
    if !(0.0..=1.0).contains(&p_swap) {
        return Err(Error::InvalidInput(format!(
            "swap probability {p_swap} outside [0, 1]"
        )));
    }
    let swap: Vec<bool> = (0..len).map(|_| rng.random_bool(p_swap)).collect();
    Ok(swap_positions(a, b, &swap))
}

/// Blend crossover for real vectors: `w*a + (1-w)*b` componentwise,
/// clamped to the shared bounds.
pub fn crossover_blend(a: &Genome, b: &Genome, weight: f64) -> Result<Genome> {
    check_compatible(a, b)?;
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::InvalidInput(format!(
            "blend weight {weight} outside [0, 1]"
        )));
    }
    match (a, b) {
        (
            Genome::RealVector { values: x, bounds },
            Genome::RealVector { values: y, .. },
        ) => {
            // Exact at the degenerate points: equal genes and the weight
            // endpoints return the inputs bit-for-bit.
            let values = x
                .iter()
                .zip(y)
                .zip(bounds)
                .map(|((&xi, &yi), &(lo, hi))| {
                    let v = if xi == yi || weight == 1.0 {
                        xi
                    } else if weight == 0.0 {
                        yi
                    } else {
                        weight * xi + (1.0 - weight) * yi
                    };
                    v.clamp(lo, hi)
                })
                .collect();
            Ok(Genome::RealVector {
                values,
                bounds: bounds.clone(),
            })
        }
        _ => Err(Error::InvalidInput(format!(
            "blend crossover requires real vectors, got {}",
            a.variant_name()
        ))),
    }
}
