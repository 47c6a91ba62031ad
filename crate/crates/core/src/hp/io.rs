//! Text formats: sequence files and conformation blocks.

use super::conformation::Conformation;
use super::{HPSequence, RELATIVE_ALPHABET};
use crate::error::{Error, Result};
use crate::genome::Genome;

/// Parses a sequence file: one H/P string per line, blank lines skipped,
/// `#` starts a comment line.
pub fn parse_sequences(text: &str) -> Result<Vec<HPSequence>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let seq = HPSequence::parse(line)
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        out.push(seq);
    }
    if out.is_empty() {
        return Err(Error::Parse("no sequences found".into()));
    }
    Ok(out)
}

/// Parses a relative move string from text, validating the alphabet.
pub fn parse_relative_moves(text: &str) -> Result<Genome> {
    let mut moves = Vec::with_capacity(text.len());
    for (i, c) in text.chars().enumerate() {
        let b = c as u8;
        if !c.is_ascii() || !RELATIVE_ALPHABET.contains(&b) {
            return Err(Error::Parse(format!(
                "invalid move '{c}' at position {i}; expected one of F, L, R, U, D"
            )));
        }
        moves.push(b);
    }
    Genome::move_string(moves, RELATIVE_ALPHABET.to_vec())
}

/// Renders a conformation block: the move string, one `x y z residue`
/// line per residue, and the energy value.
pub fn conformation_text(
    moves: &str,
    seq: &HPSequence,
    conf: &Conformation,
    energy: f64,
) -> String {
    let mut out = String::new();
    out.push_str("moves ");
    out.push_str(moves);
    out.push('\n');
    for (pos, residue) in conf.coords.iter().zip(seq.residues()) {
        out.push_str(&format!(
            "{} {} {} {}\n",
            pos[0],
            pos[1],
            pos[2],
            residue.symbol()
        ));
    }
    out.push_str(&format!("energy {energy}\n"));
    out
}
