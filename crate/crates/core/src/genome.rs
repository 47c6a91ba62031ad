//! Genome representations and genotype decoding.
//!
//! Three fixed-length linear representations are supported: bit strings,
//! bounded real vectors, and move strings over a finite symbol alphabet.
//! Every variation operator in this crate maps valid genomes to valid
//! genomes (bounds respected, symbols within the alphabet, length
//! preserved).

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// The unit of variation: a tagged, fixed-length linear genotype.
#[derive(Debug, Clone, PartialEq)]
pub enum Genome {
    /// Ordered booleans, most significant bit first when decoded as an integer.
    BitString(Vec<bool>),
    /// Real values with per-dimension `[lo, hi]` bounds.
    RealVector {
        values: Vec<f64>,
        bounds: Vec<(f64, f64)>,
    },
    /// Ordered symbols drawn from a fixed alphabet (ASCII bytes).
    MoveString { moves: Vec<u8>, alphabet: Vec<u8> },
}

impl Genome {
    /// Builds a real-vector genome, validating dimension and bound ordering.
    pub fn real_vector(values: Vec<f64>, bounds: Vec<(f64, f64)>) -> Result<Self> {
        if values.len() != bounds.len() {
            return Err(Error::InvalidInput(format!(
                "real vector has {} values but {} bounds",
                values.len(),
                bounds.len()
            )));
        }
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo <= hi) {
                return Err(Error::InvalidInput(format!(
                    "bounds for dimension {i} are inverted: [{lo}, {hi}]"
                )));
            }
        }
        for (i, &v) in values.iter().enumerate() {
            let (lo, hi) = bounds[i];
            if !v.is_finite() || v < lo || v > hi {
                return Err(Error::InvalidInput(format!(
                    "value {v} at dimension {i} outside [{lo}, {hi}]"
                )));
            }
        }
        Ok(Genome::RealVector { values, bounds })
    }

    /// Builds a move-string genome, validating symbol membership.
    pub fn move_string(moves: Vec<u8>, alphabet: Vec<u8>) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::InvalidInput("empty move alphabet".into()));
        }
        for (i, m) in moves.iter().enumerate() {
            if !alphabet.contains(m) {
                return Err(Error::InvalidInput(format!(
                    "move '{}' at position {i} not in alphabet",
                    *m as char
                )));
            }
        }
        Ok(Genome::MoveString { moves, alphabet })
    }

    /// Number of positions (bits, components, or moves).
    pub fn len(&self) -> usize {
        match self {
            Genome::BitString(b) => b.len(),
            Genome::RealVector { values, .. } => values.len(),
            Genome::MoveString { moves, .. } => moves.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The real components, when this is a real vector.
    pub fn real_values(&self) -> Option<&[f64]> {
        match self {
            Genome::RealVector { values, .. } => Some(values),
            _ => None,
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Genome::BitString(_) => "bit string",
            Genome::RealVector { .. } => "real vector",
            Genome::MoveString { .. } => "move string",
        }
    }
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genome::BitString(bits) => {
                for &b in bits {
                    write!(f, "{}", if b { '1' } else { '0' })?;
                }
                Ok(())
            }
            Genome::RealVector { values, .. } => {
                write!(f, "[")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
            Genome::MoveString { moves, .. } => {
                for &m in moves {
                    write!(f, "{}", m as char)?;
                }
                Ok(())
            }
        }
    }
}

/// Shape of the genomes a problem searches over; used for uniform sampling.
#[derive(Debug, Clone, PartialEq)]
pub enum GenomeSpec {
    Bits { len: usize },
    Reals { bounds: Vec<(f64, f64)> },
    Moves { alphabet: Vec<u8>, len: usize },
}

impl GenomeSpec {
    /// Draws one genome uniformly at random from the representation space.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Genome {
        match self {
            GenomeSpec::Bits { len } => {
                Genome::BitString((0..*len).map(|_| rng.random::<bool>()).collect())
            }
            GenomeSpec::Reals { bounds } => Genome::RealVector {
                values: bounds
                    .iter()
                    .map(|&(lo, hi)| if hi > lo { rng.random_range(lo..hi) } else { lo })
                    .collect(),
                bounds: bounds.clone(),
            },
            GenomeSpec::Moves { alphabet, len } => Genome::MoveString {
                moves: (0..*len)
                    .map(|_| alphabet[rng.random_range(0..alphabet.len())])
                    .collect(),
                alphabet: alphabet.clone(),
            },
        }
    }

    pub fn len(&self) -> usize {
        match self {
            GenomeSpec::Bits { len } => *len,
            GenomeSpec::Reals { bounds } => bounds.len(),
            GenomeSpec::Moves { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Decodes a bit string as an unsigned big-endian integer
/// (leftmost bit most significant).
pub fn decode_binary_integer(bits: &Genome) -> Result<u64> {
    let bits = match bits {
        Genome::BitString(b) => b,
        other => {
            return Err(Error::InvalidInput(format!(
                "expected bit string, got {}",
                other.variant_name()
            )))
        }
    };
    decode_bits(bits)
}

fn decode_bits(bits: &[bool]) -> Result<u64> {
    if bits.is_empty() {
        return Err(Error::InvalidInput("empty bit string".into()));
    }
    if bits.len() > 64 {
        return Err(Error::InvalidInput(format!(
            "bit string of length {} exceeds 64-bit integer range",
            bits.len()
        )));
    }
    Ok(bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b)))
}

/// Splits a bit string into fields of the given widths and decodes each
/// field as an unsigned big-endian integer.
pub fn decode_binary_vector(bits: &Genome, field_widths: &[usize]) -> Result<Vec<u64>> {
    let bits = match bits {
        Genome::BitString(b) => b,
        other => {
            return Err(Error::InvalidInput(format!(
                "expected bit string, got {}",
                other.variant_name()
            )))
        }
    };
    let total: usize = field_widths.iter().sum();
    if total != bits.len() {
        return Err(Error::InvalidInput(format!(
            "field widths sum to {total} but bit string has length {}",
            bits.len()
        )));
    }
    if field_widths.iter().any(|&w| w == 0) {
        return Err(Error::InvalidInput("zero-width field".into()));
    }
    let mut out = Vec::with_capacity(field_widths.len());
    let mut offset = 0;
    for &w in field_widths {
        out.push(decode_bits(&bits[offset..offset + w])?);
        offset += w;
    }
    Ok(out)
}

/// Parses a bit string from '0'/'1' text. Test and I/O convenience.
pub fn bits_from_str(s: &str) -> Result<Genome> {
    let mut bits = Vec::with_capacity(s.len());
    for (i, c) in s.chars().enumerate() {
        match c {
            '0' => bits.push(false),
            '1' => bits.push(true),
            _ => {
                return Err(Error::Parse(format!(
                    "invalid bit character '{c}' at position {i}"
                )))
            }
        }
    }
    Ok(Genome::BitString(bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Genome {
        bits_from_str(s).unwrap()
    }

    #[test]
    fn decodes_integers_big_endian() {
        assert_eq!(decode_binary_integer(&bits("10011")).unwrap(), 19);
        assert_eq!(decode_binary_integer(&bits("1101010")).unwrap(), 106);
        assert_eq!(decode_binary_integer(&bits("00011")).unwrap(), 3);
        assert_eq!(decode_binary_integer(&bits("0")).unwrap(), 0);
    }

    #[test]
    fn first_bit_flip_changes_high_order_value() {
        // 10011 -> 00011 is 19 -> 3; 1101010 -> 0101010 is 106 -> 42.
        let mut b = match bits("10011") {
            Genome::BitString(v) => v,
            _ => unreachable!(),
        };
        b[0] = !b[0];
        assert_eq!(decode_bits(&b).unwrap(), 3);
        let mut b = match bits("1101010") {
            Genome::BitString(v) => v,
            _ => unreachable!(),
        };
        b[0] = !b[0];
        assert_eq!(decode_bits(&b).unwrap(), 42);
    }

    #[test]
    fn decodes_fielded_vectors() {
        assert_eq!(
            decode_binary_vector(&bits("1001111110"), &[5, 5]).unwrap(),
            vec![19, 30]
        );
        assert_eq!(decode_binary_vector(&bits("10"), &[1, 1]).unwrap(), vec![1, 0]);
        assert_eq!(decode_binary_vector(&bits("1101010"), &[7]).unwrap(), vec![106]);
    }

    #[test]
    fn rejects_bad_decode_inputs() {
        assert!(decode_binary_integer(&Genome::BitString(vec![])).is_err());
        assert!(decode_binary_vector(&bits("101"), &[2, 2]).is_err());
        assert!(decode_binary_vector(&bits("101"), &[3, 0]).is_err());
    }

    #[test]
    fn real_vector_constructor_validates() {
        assert!(Genome::real_vector(vec![0.5], vec![(0.0, 1.0)]).is_ok());
        assert!(Genome::real_vector(vec![1.5], vec![(0.0, 1.0)]).is_err());
        assert!(Genome::real_vector(vec![0.5, 0.5], vec![(0.0, 1.0)]).is_err());
        assert!(Genome::real_vector(vec![0.5], vec![(1.0, 0.0)]).is_err());
    }

    #[test]
    fn move_string_constructor_validates() {
        assert!(Genome::move_string(b"FFL".to_vec(), b"FLRUD".to_vec()).is_ok());
        assert!(Genome::move_string(b"FFX".to_vec(), b"FLRUD".to_vec()).is_err());
    }

    #[test]
    fn sampling_respects_the_representation() {
        let mut rng = crate::rng_from_seed(7);
        let spec = GenomeSpec::Reals {
            bounds: vec![(-1.0, 1.0), (0.0, 0.0)],
        };
        for _ in 0..100 {
            match spec.sample(&mut rng) {
                Genome::RealVector { values, .. } => {
                    assert!(values[0] >= -1.0 && values[0] <= 1.0);
                    assert_eq!(values[1], 0.0);
                }
                _ => panic!("wrong variant"),
            }
        }
        let spec = GenomeSpec::Moves {
            alphabet: b"FLRUD".to_vec(),
            len: 8,
        };
        for _ in 0..100 {
            match spec.sample(&mut rng) {
                Genome::MoveString { moves, alphabet } => {
                    assert_eq!(moves.len(), 8);
                    assert!(moves.iter().all(|m| alphabet.contains(m)));
                }
                _ => panic!("wrong variant"),
            }
        }
    }

    #[test]
    fn display_round_trips_bits_and_moves() {
        assert_eq!(bits("10011").to_string(), "10011");
        let g = Genome::move_string(b"FFLR".to_vec(), b"FLRUD".to_vec()).unwrap();
        assert_eq!(g.to_string(), "FFLR");
    }
}
