//! Decoding move strings into lattice conformations.

use crate::error::{Error, Result};

type Vec3 = [i32; 3];

fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn neg(a: Vec3) -> Vec3 {
    [-a[0], -a[1], -a[2]]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// An ordered chain of lattice sites decoded from a move string.
/// Connectivity (consecutive sites one unit step apart) holds by
/// construction; self-avoidance is data: `feasible` is false when any
/// site is occupied more than once, and `collision_count` sums the
/// excess occupancies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conformation {
    pub coords: Vec<Vec3>,
    pub feasible: bool,
    pub collision_count: u32,
}

impl Conformation {
    /// Builds a conformation from explicit coordinates, validating the
    /// connectivity invariant and recomputing occupancy.
    pub fn from_coords(coords: Vec<Vec3>) -> Result<Self> {
        for w in coords.windows(2) {
            let d = (w[0][0] - w[1][0]).abs() + (w[0][1] - w[1][1]).abs() + (w[0][2] - w[1][2]).abs();
            if d != 1 {
                return Err(Error::InvalidInput(format!(
                    "consecutive residues at {:?} and {:?} are not one unit step apart",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self::from_walk(coords))
    }

    fn from_walk(coords: Vec<Vec3>) -> Self {
        let collision_count = count_collisions(&coords);
        Conformation {
            feasible: collision_count == 0,
            collision_count,
            coords,
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Lattice sites occupied more than once, summed over excess occupancies.
fn count_collisions(coords: &[Vec3]) -> u32 {
    let mut sorted: Vec<Vec3> = coords.to_vec();
    sorted.sort_unstable();
    let mut collisions: u32 = 0;
    let mut run: u32 = 1;
    for i in 1..sorted.len() {
        if sorted[i] == sorted[i - 1] {
            run += 1;
        } else {
            collisions += run - 1;
            run = 1;
        }
    }
    collisions += run - 1;
    collisions
}

/// Decodes an absolute move string. Residue 0 sits at the origin; the
/// global axes are fixed as L = -x, R = +x, F = +y, B = -y, U = +z,
/// D = -z. A string of n-1 moves yields n residues.
pub fn decode_absolute(moves: &[u8]) -> Conformation {
    let mut coords = Vec::with_capacity(moves.len() + 1);
    let mut pos: Vec3 = [0, 0, 0];
    coords.push(pos);
    for &m in moves {
        let dir: Vec3 = match m {
            b'L' => [-1, 0, 0],
            b'R' => [1, 0, 0],
            b'F' => [0, 1, 0],
            b'B' => [0, -1, 0],
            b'U' => [0, 0, 1],
            b'D' => [0, 0, -1],
            _ => unreachable!("alphabet validated at genome construction"),
        };
        pos = add(pos, dir);
        coords.push(pos);
    }
    Conformation::from_walk(coords)
}

/// Decodes a relative move string. Residues 0 and 1 sit at the origin
/// and (1,0,0); moves are interpreted in a frame carried along the chain
/// as an orthonormal integer pair (forward `f`, up `u`, left `u x f`),
/// initialized f = +x, u = +z.
///
/// Move directions: F -> f, L -> u x f, R -> -(u x f), U -> u, D -> -u.
/// After each step the frame updates to keep (f, u) orthonormal: f
/// becomes the direction just moved; u is unchanged for F/L/R, becomes
/// -f_old for U and +f_old for D. The alphabet has no backward move, so
/// consecutive residues never coincide. A string of n-2 moves yields n
/// residues; the empty string yields the two fixed residues.
pub fn decode_relative(moves: &[u8]) -> Conformation {
    let mut coords = Vec::with_capacity(moves.len() + 2);
    coords.push([0, 0, 0]);
    let mut pos: Vec3 = [1, 0, 0];
    coords.push(pos);
    let mut forward: Vec3 = [1, 0, 0];
    let mut up: Vec3 = [0, 0, 1];
    for &m in moves {
        let left = cross(up, forward);
        let dir: Vec3 = match m {
            b'F' => forward,
            b'L' => left,
            b'R' => neg(left),
            b'U' => up,
            b'D' => neg(up),
            _ => unreachable!("alphabet validated at genome construction"),
        };
        up = match m {
            b'U' => neg(forward),
            b'D' => forward,
            _ => up,
        };
        forward = dir;
        pos = add(pos, dir);
        coords.push(pos);
    }
    Conformation::from_walk(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(a: Vec3, b: Vec3) -> i32 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    #[test]
    fn absolute_straight_chain() {
        let c = decode_absolute(b"FFF");
        assert_eq!(c.coords, vec![[0, 0, 0], [0, 1, 0], [0, 2, 0], [0, 3, 0]]);
        assert!(c.feasible);
        assert_eq!(c.collision_count, 0);
    }

    #[test]
    fn absolute_reversal_collides() {
        let c = decode_absolute(b"FB");
        assert_eq!(c.coords, vec![[0, 0, 0], [0, 1, 0], [0, 0, 0]]);
        assert!(!c.feasible);
        assert_eq!(c.collision_count, 1);
    }

    #[test]
    fn absolute_connectivity_holds() {
        let c = decode_absolute(b"RFLF");
        for w in c.coords.windows(2) {
            let d: i32 = (0..3).map(|k| (w[0][k] - w[1][k]).abs()).sum();
            assert_eq!(d, 1);
        }
    }

    #[test]
    fn relative_straight_chain() {
        let c = decode_relative(b"FF");
        assert_eq!(c.coords, vec![[0, 0, 0], [1, 0, 0], [2, 0, 0], [3, 0, 0]]);
        assert!(c.feasible);
    }

    #[test]
    fn relative_two_lefts_close_a_square() {
        let c = decode_relative(b"LL");
        assert_eq!(c.coords, vec![[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]);
        assert!(c.feasible);
        // Residues 0 and 3 are lattice-adjacent.
        let d: i32 = (0..3).map(|k| (c.coords[0][k] - c.coords[3][k]).abs()).sum();
        assert_eq!(d, 1);
    }

    #[test]
    fn repeated_turns_cycle_back() {
        // Any repeated non-forward move revisits the origin; only the
        // straight chain keeps going.
        for m in [b'L', b'R', b'U', b'D'] {
            let moves = vec![m; 4];
            let c = decode_relative(&moves);
            assert!(!c.feasible, "{} repeated should cycle", m as char);
            assert!(c.coords.contains(&[0, 0, 0]));
        }
        let c = decode_relative(b"FFFF");
        assert!(c.feasible);
    }

    #[test]
    fn frame_stays_orthonormal() {
        // Re-run the decode loop of each move string while checking the
        // frame invariants after every step.
        let strings: &[&[u8]] = &[b"LUDRFLUD", b"UUUU", b"DLRUF", b"RRLLUUDD"];
        for moves in strings {
            let mut forward: Vec3 = [1, 0, 0];
            let mut up: Vec3 = [0, 0, 1];
            for &m in *moves {
                let left = cross(up, forward);
                let dir = match m {
                    b'F' => forward,
                    b'L' => left,
                    b'R' => neg(left),
                    b'U' => up,
                    b'D' => neg(up),
                    _ => unreachable!(),
                };
                up = match m {
                    b'U' => neg(forward),
                    b'D' => forward,
                    _ => up,
                };
                forward = dir;
                assert_eq!(dot(forward, up), 0);
                assert_eq!(dot(forward, forward), 1);
                assert_eq!(dot(up, up), 1);
            }
        }
    }

    #[test]
    fn empty_moves_give_the_fixed_prefix() {
        let c = decode_relative(b"");
        assert_eq!(c.coords, vec![[0, 0, 0], [1, 0, 0]]);
        assert!(c.feasible);
    }

    #[test]
    fn from_coords_validates_connectivity() {
        assert!(Conformation::from_coords(vec![[0, 0, 0], [1, 0, 0], [1, 1, 0]]).is_ok());
        assert!(Conformation::from_coords(vec![[0, 0, 0], [2, 0, 0]]).is_err());
        assert!(Conformation::from_coords(vec![[0, 0, 0], [0, 0, 0]]).is_err());
        assert!(Conformation::from_coords(vec![[0, 0, 0], [1, 1, 0]]).is_err());
    }

    #[test]
    fn collision_counting_sums_excess_occupancy() {
        // A chain that sits on the origin three times: two excess visits.
        let c = decode_absolute(b"FBFB");
        assert_eq!(c.coords.len(), 5);
        assert_eq!(c.collision_count, 1 + 2);
        // [0,0,0] x3 (excess 2), [0,1,0] x2 (excess 1).
    }
}
