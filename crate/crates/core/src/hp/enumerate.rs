//! Exhaustive enumeration oracle for small HP instances.

use super::{EnergyScheme, HPSequence, Residue, RELATIVE_ALPHABET};
use crate::error::{Error, Result};

/// Two energies within this distance are treated as the same level; the
/// preset tables are spaced far wider apart than floating-point noise.
const ENERGY_EPS: f64 = 1e-9;

/// Exhaustive depth-first search over relative move strings with
/// self-avoidance pruning. Returns the exact minimum contact energy over
/// all feasible conformations and the number of distinct optimal move
/// strings (raw encodings, no symmetry reduction).
///
/// Refuses sequences longer than `max_n` (pass 12 for the documented
/// default); the search space grows as 5^(n-2).
pub fn enumerate_optimal(
    seq: &HPSequence,
    scheme: &EnergyScheme,
    max_n: usize,
) -> Result<(f64, u64)> {
    let n = seq.len();
    if n > max_n {
        return Err(Error::InvalidInput(format!(
            "sequence of length {n} exceeds the enumeration limit {max_n}"
        )));
    }
    if n <= 2 {
        // Zero or, for a single residue, no moves at all: one trivial
        // conformation with no non-chain pairs.
        return Ok((0.0, 1));
    }

    let residues = seq.residues().to_vec();
    let mut state = Dfs {
        residues,
        scheme: *scheme,
        positions: vec![[0, 0, 0], [1, 0, 0]],
        frames: vec![([1, 0, 0], [0, 0, 1])],
        best: f64::INFINITY,
        count: 0,
        n,
    };
    state.recurse(0.0);
    Ok((state.best, state.count))
}

struct Dfs {
    residues: Vec<Residue>,
    scheme: EnergyScheme,
    positions: Vec<[i32; 3]>,
    frames: Vec<([i32; 3], [i32; 3])>,
    best: f64,
    count: u64,
    n: usize,
}

impl Dfs {
    fn recurse(&mut self, energy: f64) {
        if self.positions.len() == self.n {
            if energy < self.best - ENERGY_EPS {
                self.best = energy;
                self.count = 1;
            } else if (energy - self.best).abs() <= ENERGY_EPS {
                self.count += 1;
            }
            return;
        }
        let (forward, up) = *self.frames.last().unwrap();
        let left = cross(up, forward);
        let last = *self.positions.last().unwrap();
        for &m in RELATIVE_ALPHABET.iter() {
            let (dir, new_up) = match m {
                b'F' => (forward, up),
                b'L' => (left, up),
                b'R' => (neg(left), up),
                b'U' => (up, neg(forward)),
                b'D' => (neg(up), forward),
                _ => unreachable!(),
            };
            let pos = [last[0] + dir[0], last[1] + dir[1], last[2] + dir[2]];
            if self.positions.contains(&pos) {
                continue; // self-avoidance pruning
            }
            // Incremental contacts: the new residue j touches placed
            // residues i <= j-2 on adjacent sites.
            let j = self.positions.len();
            let mut delta = 0.0;
            for (i, p) in self.positions[..j - 1].iter().enumerate() {
                let d = (p[0] - pos[0]).abs() + (p[1] - pos[1]).abs() + (p[2] - pos[2]).abs();
                if d == 1 {
                    delta += self.scheme.contact(self.residues[i], self.residues[j]);
                }
            }
            self.positions.push(pos);
            self.frames.push((dir, new_up));
            self.recurse(energy + delta);
            self.frames.pop();
            self.positions.pop();
        }
    }
}

fn neg(a: [i32; 3]) -> [i32; 3] {
    [-a[0], -a[1], -a[2]]
}

fn cross(a: [i32; 3], b: [i32; 3]) -> [i32; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
