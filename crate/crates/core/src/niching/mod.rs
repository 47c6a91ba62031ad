//! Niching machinery for multimodal optimization: crowding replacement,
//! fitness sharing, species conservation with species-specific explosion,
//! and crowding differential evolution with spatial/temporal locality.

mod crowding_de;
mod peaks;
mod sharing;
mod species;

pub use crowding_de::{
    crowding_de_step, run_crowding_de, sl_pick_indices, tl_update, CrowdingVariant,
};
pub use peaks::{peak_metrics, PeakReport};
pub use sharing::shared_fitness;
pub use species::{run_ease, select_species_seeds, species_explosion, SpeciesConfig};

use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::individual::{Individual, Population};

/// Distance over genomes: Euclidean for real vectors, Hamming (count of
/// differing positions) for bit and move strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMetric {
    Euclidean,
    Hamming,
}

impl DistanceMetric {
    pub fn name(&self) -> &'static str {
        match self {
            DistanceMetric::Euclidean => "euclidean",
            DistanceMetric::Hamming => "hamming",
        }
    }

    /// The natural metric for a genome variant.
    pub fn for_genome(g: &Genome) -> DistanceMetric {
        match g {
            Genome::RealVector { .. } => DistanceMetric::Euclidean,
            _ => DistanceMetric::Hamming,
        }
    }
}

/// Niching parameters shared by the sharing and locality mechanisms.
#[derive(Debug, Clone, PartialEq)]
pub struct NichingConfig {
    /// Fitness-sharing niche radius.
    pub sharing_radius: f64,
    /// Fitness-sharing shape exponent.
    pub sharing_alpha: f64,
    /// Temporal-locality discount factor on the accumulated delta array.
    pub tl_discount: f64,
    /// Spatial-locality roulette floor: the farthest candidate keeps this
    /// fraction of the maximum distance as weight.
    pub sl_floor: f64,
    pub metric: DistanceMetric,
}

impl Default for NichingConfig {
    fn default() -> Self {
        NichingConfig {
            sharing_radius: 0.1,
            sharing_alpha: 1.0,
            tl_discount: 0.5,
            sl_floor: 0.05,
            metric: DistanceMetric::Euclidean,
        }
    }
}

impl NichingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sharing_radius > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "sharing radius {} must be positive",
                self.sharing_radius
            )));
        }
        if !(self.sharing_alpha > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "sharing alpha {} must be positive",
                self.sharing_alpha
            )));
        }
        if !(0.0..1.0).contains(&self.tl_discount) {
            return Err(Error::InvalidConfig(format!(
                "temporal-locality discount {} outside [0, 1)",
                self.tl_discount
            )));
        }
        if !(self.sl_floor > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "spatial-locality floor {} must be positive",
                self.sl_floor
            )));
        }
        Ok(())
    }
}

/// Distance between two genomes of the same variant and length.
pub fn distance(a: &Genome, b: &Genome, metric: DistanceMetric) -> Result<f64> {
    let len = crate::crossover::check_compatible(a, b)?;
    match metric {
        DistanceMetric::Euclidean => match (a, b) {
            (Genome::RealVector { values: x, .. }, Genome::RealVector { values: y, .. }) => Ok(x
                .iter()
                .zip(y)
                .map(|(xi, yi)| (xi - yi) * (xi - yi))
                .sum::<f64>()
                .sqrt()),
            _ => Err(Error::InvalidInput(format!(
                "euclidean distance requires real vectors, got {}",
                a.variant_name()
            ))),
        },
        DistanceMetric::Hamming => {
            let differing = match (a, b) {
                (Genome::BitString(x), Genome::BitString(y)) => {
                    x.iter().zip(y).filter(|(p, q)| p != q).count()
                }
                (Genome::MoveString { moves: x, .. }, Genome::MoveString { moves: y, .. }) => {
                    x.iter().zip(y).filter(|(p, q)| p != q).count()
                }
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "hamming distance requires bit or move strings, got {}",
                        a.variant_name()
                    )))
                }
            };
            let _ = len;
            Ok(differing as f64)
        }
    }
}

/// Index of the member most similar to the candidate; ties break by
/// lower index.
pub fn nearest_member(
    population: &Population,
    candidate: &Individual,
    metric: DistanceMetric,
) -> Result<usize> {
    let mut best = 0;
    let mut best_d = distance(&population.members[0].genome, &candidate.genome, metric)?;
    for i in 1..population.len() {
        let d = distance(&population.members[i].genome, &candidate.genome, metric)?;
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    Ok(best)
}

/// Crowding replacement: the offspring competes only with its nearest
/// member and replaces it iff strictly fitter. Returns whether a
/// replacement happened.
pub fn crowding_replace(
    population: &mut Population,
    offspring: Individual,
    metric: DistanceMetric,
) -> Result<bool> {
    if !offspring.is_evaluated() {
        return Err(Error::Contract("offspring has not been evaluated".into()));
    }
    let nn = nearest_member(population, &offspring, metric)?;
    if offspring.fitness() > population.members[nn].fitness() {
        population.members[nn] = offspring;
        Ok(true)
    } else {
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::bits_from_str;

    fn mv(s: &str) -> Genome {
        Genome::move_string(s.as_bytes().to_vec(), b"FLRUD".to_vec()).unwrap()
    }

    fn rv(v: &[f64]) -> Genome {
        Genome::real_vector(v.to_vec(), vec![(-100.0, 100.0); v.len()]).unwrap()
    }

    fn ind(v: &[f64], f: f64) -> Individual {
        Individual::evaluated(rv(v), f)
    }

    #[test]
    fn distances() {
        assert_eq!(distance(&mv("FFF"), &mv("FFF"), DistanceMetric::Hamming).unwrap(), 0.0);
        assert_eq!(distance(&mv("FFL"), &mv("FRR"), DistanceMetric::Hamming).unwrap(), 2.0);
        assert_eq!(
            distance(&rv(&[0.0, 0.0]), &rv(&[3.0, 4.0]), DistanceMetric::Euclidean).unwrap(),
            5.0
        );
        let b = bits_from_str("1010").unwrap();
        let c = bits_from_str("1001").unwrap();
        assert_eq!(distance(&b, &c, DistanceMetric::Hamming).unwrap(), 2.0);
        // Variant/metric mismatches are rejected.
        assert!(distance(&mv("FF"), &mv("FF"), DistanceMetric::Euclidean).is_err());
        assert!(distance(&rv(&[1.0]), &rv(&[1.0]), DistanceMetric::Hamming).is_err());
        assert!(distance(&mv("FF"), &mv("FFF"), DistanceMetric::Hamming).is_err());
    }

    #[test]
    fn nearest_ties_break_low() {
        let pop = Population::new(vec![
            ind(&[0.0], 1.0),
            ind(&[2.0], 1.0),
            ind(&[5.0], 1.0),
            ind(&[9.0], 1.0),
            ind(&[8.0], 1.0),
        ])
        .unwrap();
        // Candidate equidistant from members 1 (at 2) and 4 (at 8): 3 away.
        let c = ind(&[5.0], 0.0);
        assert_eq!(nearest_member(&pop, &c, DistanceMetric::Euclidean).unwrap(), 2);
        let c = ind(&[9.0], 0.0);
        assert_eq!(nearest_member(&pop, &c, DistanceMetric::Euclidean).unwrap(), 3);
        let c = ind(&[5.5], 0.0);
        // 0.5 from member 2, 2.5 from member 4: member 2.
        assert_eq!(nearest_member(&pop, &c, DistanceMetric::Euclidean).unwrap(), 2);
        // Exact equidistance: members 1 and 2 are both 1.5 from 3.5.
        let c = ind(&[3.5], 0.0);
        assert_eq!(nearest_member(&pop, &c, DistanceMetric::Euclidean).unwrap(), 1);
        // Singleton population.
        let single = Population::new(vec![ind(&[4.0], 0.0)]).unwrap();
        assert_eq!(nearest_member(&single, &c, DistanceMetric::Euclidean).unwrap(), 0);
    }

    #[test]
    fn crowding_replaces_only_strictly_fitter() {
        let base = Population::new(vec![ind(&[0.0], 2.0), ind(&[10.0], 5.0)]).unwrap();
        let mut pop = base.clone();
        let replaced =
            crowding_replace(&mut pop, ind(&[0.5], 3.0), DistanceMetric::Euclidean).unwrap();
        assert!(replaced);
        assert_eq!(pop.len(), 2);
        assert_eq!(pop.members[0].fitness(), 3.0);
        assert_eq!(pop.members[1], base.members[1]);

        let mut pop = base.clone();
        let replaced =
            crowding_replace(&mut pop, ind(&[0.5], 1.0), DistanceMetric::Euclidean).unwrap();
        assert!(!replaced);
        assert_eq!(pop, base);

        // Equal fitness keeps the incumbent.
        let mut pop = base.clone();
        let replaced =
            crowding_replace(&mut pop, ind(&[0.5], 2.0), DistanceMetric::Euclidean).unwrap();
        assert!(!replaced);
        assert_eq!(pop, base);
    }

    #[test]
    fn crowding_respects_niches() {
        // Two clusters; an offspring near cluster A must never displace a
        // cluster-B incumbent while a closer A member exists, even when
        // fitter than everyone.
        let mut pop = Population::new(vec![
            ind(&[0.0], 4.0),
            ind(&[0.2], 3.0),
            ind(&[10.0], 1.0),
            ind(&[10.3], 2.0),
        ])
        .unwrap();
        let b_members = (pop.members[2].clone(), pop.members[3].clone());
        let replaced =
            crowding_replace(&mut pop, ind(&[0.1], 9.0), DistanceMetric::Euclidean).unwrap();
        assert!(replaced);
        assert_eq!(pop.members[2], b_members.0);
        assert_eq!(pop.members[3], b_members.1);
    }
}
