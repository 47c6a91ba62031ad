//! Evolutionary optimization with niching, differential evolution, and
//! 3D HP-lattice protein structure prediction.
//!
//! The crate provides:
//!
//! - fixed-length genome representations (bit strings, bounded real
//!   vectors, move strings) and the classic operator catalog: six
//!   selection schemes, four crossovers, four mutations, overlapping and
//!   non-overlapping survival, and the generational loop;
//! - DE/rand/1 differential evolution with greedy one-to-one replacement;
//! - multimodal (niching) machinery: crowding replacement, fitness
//!   sharing, species seeds with species-specific explosion, and crowding
//!   DE with spatial/temporal locality;
//! - the 3D cubic-lattice HP model with absolute and relative
//!   internal-coordinate encodings, three contact-energy tables,
//!   delete/penalty infeasibility handling, and an exhaustive
//!   small-instance oracle;
//! - benchmark functions with known peak lists and a grid-search peak
//!   oracle.
//!
//! Everything is deterministic given a seed: each run consumes a single
//! seeded generator in a fixed sequence.

pub mod bench;
pub mod crossover;
pub mod de;
pub mod error;
pub mod generational;
pub mod genome;
pub mod hp;
pub mod individual;
pub mod mutation;
pub mod niching;
pub mod problem;
pub mod selection;
pub mod termination;

pub use bench::{builtin_suite, grid_peak_oracle, BenchProblem, BenchmarkFunction, Peak};
pub use crossover::{
    crossover_blend, crossover_one_point, crossover_two_point, crossover_uniform, CrossoverOp,
};
pub use de::{de_step, recombine, run_de, trial_vector, BoundPolicy, DEConfig};
pub use error::{Error, Result};
pub use generational::{run_generational, survival_select, GenStats, RunConfig};
pub use genome::{decode_binary_integer, decode_binary_vector, Genome, GenomeSpec};
pub use individual::{Individual, Population};
pub use mutation::{mutate_bitflip, mutate_delta, mutate_gaussian, mutate_random, MutationOp};
pub use niching::{
    crowding_de_step, crowding_replace, distance, nearest_member, peak_metrics, run_crowding_de,
    run_ease, select_species_seeds, shared_fitness, sl_pick_indices, species_explosion, tl_update,
    CrowdingVariant, DistanceMetric, NichingConfig, PeakReport, SpeciesConfig,
};
pub use problem::{init_population, Evaluation, FnProblem, Problem};
pub use selection::{affine_shifted, select, SelectionScheme};
pub use termination::{check_termination, EvalBudget, RunState, TerminationCondition};

/// The run RNG: a small, portable, seedable ChaCha stream.
pub type RunRng = rand_chacha::ChaCha8Rng;

/// Builds the run RNG from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> RunRng {
    use rand::SeedableRng;
    RunRng::seed_from_u64(seed)
}
