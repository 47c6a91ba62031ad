//! The 3D cubic-lattice HP model: hydrophobic/polar sequences,
//! internal-coordinate move encodings, contact energy, feasibility
//! policies, and an exhaustive small-instance oracle.

mod conformation;
mod energy;
mod enumerate;
mod io;

pub use conformation::{decode_absolute, decode_relative, Conformation};
pub use energy::{energy, fitness, penalty_fitness};
pub use enumerate::enumerate_optimal;
pub use io::{conformation_text, parse_relative_moves, parse_sequences};

use rand::Rng;

use crate::error::{Error, Result};
use crate::genome::{Genome, GenomeSpec};
use crate::problem::{Evaluation, Problem};

/// Relative-encoding move alphabet: forward, left, right, up, down.
/// Backward is omitted, which makes chains one-step self-avoiding by
/// construction. A sequence of n residues uses n-2 moves.
pub const RELATIVE_ALPHABET: [u8; 5] = *b"FLRUD";

/// Absolute-encoding move alphabet: up, down, left, right, forward,
/// backward, in fixed global axes. A sequence of n residues uses n-1 moves.
pub const ABSOLUTE_ALPHABET: [u8; 6] = *b"UDLRFB";

/// A residue is experimentally classified hydrophobic or polar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Residue {
    H,
    P,
}

impl Residue {
    pub fn symbol(&self) -> char {
        match self {
            Residue::H => 'H',
            Residue::P => 'P',
        }
    }
}

/// An amino-acid sequence over {H, P}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPSequence {
    residues: Vec<Residue>,
}

impl HPSequence {
    pub fn new(residues: Vec<Residue>) -> Result<Self> {
        if residues.is_empty() {
            return Err(Error::InvalidInput("empty sequence".into()));
        }
        Ok(HPSequence { residues })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut residues = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                'H' => residues.push(Residue::H),
                'P' => residues.push(Residue::P),
                _ => {
                    return Err(Error::Parse(format!(
                        "invalid residue '{c}' at position {i}; expected H or P"
                    )))
                }
            }
        }
        HPSequence::new(residues)
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn residues(&self) -> &[Residue] {
        &self.residues
    }

    /// Relative move strings for this sequence have length n-2.
    pub fn moves_len(&self) -> usize {
        self.len().saturating_sub(2)
    }
}

impl std::fmt::Display for HPSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in &self.residues {
            write!(f, "{}", r.symbol())?;
        }
        Ok(())
    }
}

/// The 2x2 contact-energy table E(a, b).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyScheme {
    pub e_hh: f64,
    pub e_hp: f64,
    pub e_ph: f64,
    pub e_pp: f64,
}

impl EnergyScheme {
    /// The most widely used table: only H-H contacts count.
    /// E(H,H) = -1, E(H,P) = E(P,H) = E(P,P) = 0.
    pub fn standard() -> Self {
        EnergyScheme { e_hh: -1.0, e_hp: 0.0, e_ph: 0.0, e_pp: 0.0 }
    }

    /// Mixed-contact table: E(H,H) = -2.3, E(H,P) = E(P,H) = -1, E(P,P) = 0.
    pub fn mixed() -> Self {
        EnergyScheme { e_hh: -2.3, e_hp: -1.0, e_ph: -1.0, e_pp: 0.0 }
    }

    /// The functional ("shifted") model: E(H,H) = -2, all other contacts +1.
    pub fn functional() -> Self {
        EnergyScheme { e_hh: -2.0, e_hp: 1.0, e_ph: 1.0, e_pp: 1.0 }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "standard" => Some(Self::standard()),
            "mixed" => Some(Self::mixed()),
            "functional" => Some(Self::functional()),
            _ => None,
        }
    }

    pub fn contact(&self, a: Residue, b: Residue) -> f64 {
        match (a, b) {
            (Residue::H, Residue::H) => self.e_hh,
            (Residue::H, Residue::P) => self.e_hp,
            (Residue::P, Residue::H) => self.e_ph,
            (Residue::P, Residue::P) => self.e_pp,
        }
    }
}

/// How infeasible (self-intersecting) conformations are handled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeasibilityPolicy {
    /// Reject infeasible genomes; callers resample.
    Delete,
    /// Keep them with fitness lowered by `penalty` per lattice collision.
    Penalty { penalty: f64 },
}

impl FeasibilityPolicy {
    pub fn validate(&self) -> Result<()> {
        if let FeasibilityPolicy::Penalty { penalty } = self {
            if *penalty < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "penalty {penalty} must be >= 0"
                )));
            }
        }
        Ok(())
    }
}

/// Extracts the relative move bytes from a genome.
pub(crate) fn relative_moves(genome: &Genome) -> Result<&[u8]> {
    match genome {
        Genome::MoveString { moves, alphabet } if alphabet.as_slice() == RELATIVE_ALPHABET => {
            Ok(moves)
        }
        Genome::MoveString { .. } => Err(Error::InvalidInput(
            "move string uses a non-relative alphabet".into(),
        )),
        other => Err(Error::InvalidInput(format!(
            "expected a move string, got {}",
            other.variant_name()
        ))),
    }
}

/// Draws uniform random relative move strings until one decodes to a
/// feasible (self-avoiding) conformation.
pub fn random_feasible_genome<R: Rng>(
    seq: &HPSequence,
    rng: &mut R,
    max_retries: u64,
) -> Result<Genome> {
    if max_retries < 1 {
        return Err(Error::InvalidInput("max_retries must be >= 1".into()));
    }
    let spec = GenomeSpec::Moves {
        alphabet: RELATIVE_ALPHABET.to_vec(),
        len: seq.moves_len(),
    };
    for _ in 0..max_retries {
        let genome = spec.sample(rng);
        let conf = decode_relative(relative_moves(&genome)?);
        if conf.feasible {
            return Ok(genome);
        }
    }
    Err(Error::InitFailure(format!(
        "no feasible conformation found in {max_retries} draws for a {}-residue sequence",
        seq.len()
    )))
}

/// An HP folding instance as a search problem: relative move strings are
/// the genomes, fitness is negated contact energy (maximization).
#[derive(Debug, Clone)]
pub struct HpProblem {
    pub sequence: HPSequence,
    pub scheme: EnergyScheme,
    pub policy: FeasibilityPolicy,
}

impl HpProblem {
    pub fn new(sequence: HPSequence, scheme: EnergyScheme, policy: FeasibilityPolicy) -> Self {
        HpProblem { sequence, scheme, policy }
    }
}

impl Problem for HpProblem {
    fn genome_spec(&self) -> GenomeSpec {
        GenomeSpec::Moves {
            alphabet: RELATIVE_ALPHABET.to_vec(),
            len: self.sequence.moves_len(),
        }
    }

    fn evaluate(&self, genome: &Genome) -> Evaluation {
        match relative_moves(genome) {
            Ok(moves) => fitness(moves, &self.sequence, &self.scheme, &self.policy),
            Err(_) => Evaluation::Rejected,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng_from_seed;

    #[test]
    fn sequence_parsing() {
        let s = HPSequence::parse("HPHPPH").unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s.moves_len(), 4);
        assert_eq!(s.to_string(), "HPHPPH");
        assert!(HPSequence::parse("HPX").is_err());
        assert!(HPSequence::parse("").is_err());
    }

    #[test]
    fn preset_tables() {
        let s1 = EnergyScheme::standard();
        assert_eq!((s1.e_hh, s1.e_hp, s1.e_ph, s1.e_pp), (-1.0, 0.0, 0.0, 0.0));
        let s2 = EnergyScheme::mixed();
        assert_eq!((s2.e_hh, s2.e_hp, s2.e_ph, s2.e_pp), (-2.3, -1.0, -1.0, 0.0));
        let s3 = EnergyScheme::functional();
        assert_eq!((s3.e_hh, s3.e_hp, s3.e_ph, s3.e_pp), (-2.0, 1.0, 1.0, 1.0));
        assert_eq!(EnergyScheme::by_name("standard"), Some(s1));
        assert_eq!(EnergyScheme::by_name("bogus"), None);
    }

    #[test]
    fn random_feasible_always_decodes_feasible() {
        let seq = HPSequence::parse("HHHHHHHHHH").unwrap();
        let mut rng = rng_from_seed(3);
        for _ in 0..50 {
            let g = random_feasible_genome(&seq, &mut rng, 1000).unwrap();
            let conf = decode_relative(relative_moves(&g).unwrap());
            assert!(conf.feasible);
            assert_eq!(g.len(), 8);
        }
    }

    #[test]
    fn random_feasible_is_deterministic_by_seed() {
        let seq = HPSequence::parse("HPHPHPHP").unwrap();
        let a = random_feasible_genome(&seq, &mut rng_from_seed(9), 1000).unwrap();
        let b = random_feasible_genome(&seq, &mut rng_from_seed(9), 1000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trivial_lengths_always_feasible() {
        // Three residues: any single move is feasible by the alphabet.
        let seq = HPSequence::parse("HPH").unwrap();
        let mut rng = rng_from_seed(1);
        for _ in 0..25 {
            assert!(random_feasible_genome(&seq, &mut rng, 1).is_ok());
        }
    }
}
