//! Experiment execution: problem loading, per-problem defaults, run
//! dispatch, and CSV/JSON/conformation outputs.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use evoniche::hp::{
    conformation_text, decode_relative, energy, HpProblem,
};
use evoniche::{
    peak_metrics, run_crowding_de, run_de, run_ease, run_generational, BenchProblem,
    BenchmarkFunction, CrossoverOp, DEConfig, DistanceMetric, GenStats, Genome, MutationOp,
    NichingConfig, Peak, Population, Problem, RunConfig, SpeciesConfig, TerminationCondition,
};

use crate::config::{Algorithm, ExperimentSpec, ProblemSpec};

/// Paths written by a successful experiment.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
    pub conformation_path: Option<PathBuf>,
}

enum LoadedProblem {
    Bench(BenchProblem),
    Hp(HpProblem),
}

impl LoadedProblem {
    fn as_dyn(&self) -> &dyn Problem {
        match self {
            LoadedProblem::Bench(p) => p,
            LoadedProblem::Hp(p) => p,
        }
    }

    fn known_peaks(&self) -> Option<Vec<Peak>> {
        match self {
            LoadedProblem::Bench(p) => Some(p.function.known_peaks.clone()),
            LoadedProblem::Hp(_) => None,
        }
    }
}

/// Operator and metric defaults resolved against the loaded problem.
struct Resolved {
    crossover: CrossoverOp,
    mutation: MutationOp,
    metric: DistanceMetric,
    species_radius: f64,
    move_mutation_prob: Option<f64>,
}

fn load_problem(spec: &ExperimentSpec) -> Result<LoadedProblem> {
    match &spec.problem {
        ProblemSpec::Bench(name) => {
            let function = BenchmarkFunction::by_name(name, spec.dimension)
                .map_err(|e| anyhow!("{e} (key: problem)"))?;
            Ok(LoadedProblem::Bench(BenchProblem::new(function)))
        }
        ProblemSpec::Hp(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read sequence file {}", path.display()))?;
            let sequences = evoniche::hp::parse_sequences(&text)
                .map_err(|e| anyhow!("{}: {e}", path.display()))?;
            // The first sequence in the file defines the instance.
            let sequence = sequences.into_iter().next().expect("parser rejects empty files");
            if sequence.len() < 3 {
                bail!("{}: sequences need at least 3 residues to search", path.display());
            }
            Ok(LoadedProblem::Hp(HpProblem::new(
                sequence,
                spec.energy_scheme,
                spec.feasibility,
            )))
        }
    }
}

fn resolve_defaults(spec: &ExperimentSpec, problem: &LoadedProblem) -> Resolved {
    match problem {
        LoadedProblem::Bench(p) => {
            let max_range = p
                .function
                .bounds
                .iter()
                .map(|(lo, hi)| hi - lo)
                .fold(0.0f64, f64::max);
            Resolved {
                crossover: spec.crossover.unwrap_or(CrossoverOp::Blend { weight: 0.5 }),
                mutation: spec.mutation.unwrap_or(MutationOp::Gaussian {
                    p: 1.0,
                    sigma: 0.02 * max_range,
                }),
                metric: spec.metric.unwrap_or(DistanceMetric::Euclidean),
                species_radius: spec.species_radius.unwrap_or(0.1 * max_range),
                move_mutation_prob: None,
            }
        }
        LoadedProblem::Hp(p) => {
            let len = p.sequence.moves_len();
            let default_p = (2.0 / len.max(1) as f64).min(1.0);
            let mutation = spec.mutation.unwrap_or(MutationOp::Random { p: default_p });
            let move_mutation_prob = match mutation {
                MutationOp::Random { p } => Some(p),
                _ => None,
            };
            Resolved {
                crossover: spec.crossover.unwrap_or(if len >= 2 {
                    CrossoverOp::OnePoint
                } else {
                    CrossoverOp::Uniform { p_swap: 0.5 }
                }),
                mutation,
                metric: spec.metric.unwrap_or(DistanceMetric::Hamming),
                species_radius: spec.species_radius.unwrap_or((len as f64 / 4.0).max(1.0)),
                move_mutation_prob,
            }
        }
    }
}

fn render_termination(t: &TerminationCondition) -> String {
    match t {
        TerminationCondition::MaxEvaluations(n) => format!("evals:{n}"),
        TerminationCondition::MaxGenerations(n) => format!("gens:{n}"),
        TerminationCondition::MaxWallClockSeconds(s) => format!("wall:{s}"),
        TerminationCondition::MinImprovement { epsilon, window } => {
            format!("improvement:{epsilon}:{window}")
        }
    }
}

fn render_crossover(op: &CrossoverOp) -> String {
    match op {
        CrossoverOp::OnePoint => "one-point".into(),
        CrossoverOp::TwoPoint => "two-point".into(),
        CrossoverOp::Uniform { p_swap } => format!("uniform:{p_swap}"),
        CrossoverOp::Blend { weight } => format!("blend:{weight}"),
    }
}

fn render_mutation(op: &MutationOp) -> String {
    match op {
        MutationOp::BitFlip { p } => format!("bitflip:{p}"),
        MutationOp::Random { p } => format!("random:{p}"),
        MutationOp::Delta { p, step } => format!("delta:{p}:{step}"),
        MutationOp::Gaussian { p, sigma } => format!("gaussian:{p}:{sigma}"),
    }
}

fn render_feasibility(p: &evoniche::hp::FeasibilityPolicy) -> String {
    match p {
        evoniche::hp::FeasibilityPolicy::Delete => "delete".into(),
        evoniche::hp::FeasibilityPolicy::Penalty { penalty } => format!("penalty:{penalty}"),
    }
}

/// Echoes the fully resolved configuration, one `config key=value` line
/// per key, to stdout.
fn echo_config(spec: &ExperimentSpec, resolved: &Resolved) {
    let mut lines: Vec<(String, String)> = vec![
        ("algorithm".into(), spec.algorithm.name().into()),
        ("problem".into(), spec.problem.id()),
        ("seed".into(), spec.seed.to_string()),
        ("repeats".into(), spec.repeats.to_string()),
        ("out".into(), spec.out_dir.display().to_string()),
        ("termination".into(), render_termination(&spec.termination)),
        ("population_size".into(), spec.population_size.to_string()),
        ("offspring_size".into(), spec.offspring_size.to_string()),
        ("breeding_size".into(), spec.breeding_size.to_string()),
        ("overlapping".into(), spec.overlapping.to_string()),
        ("parent_scheme".into(), spec.parent_scheme.name().into()),
        ("survival_scheme".into(), spec.survival_scheme.name().into()),
        ("crossover".into(), render_crossover(&resolved.crossover)),
        ("mutation".into(), render_mutation(&resolved.mutation)),
        ("scale_factor".into(), spec.scale_factor.to_string()),
        ("crossover_rate".into(), spec.crossover_rate.to_string()),
        ("bound_policy".into(), spec.bound_policy.name().into()),
        ("sharing_radius".into(), spec.sharing_radius.to_string()),
        ("sharing_alpha".into(), spec.sharing_alpha.to_string()),
        ("tl_discount".into(), spec.tl_discount.to_string()),
        ("sl_floor".into(), spec.sl_floor.to_string()),
        ("metric".into(), resolved.metric.name().into()),
        ("species_radius".into(), resolved.species_radius.to_string()),
        ("explosion_copies".into(), spec.explosion_copies.to_string()),
        ("stage_switch_fraction".into(), spec.stage_switch_fraction.to_string()),
        ("random_injection_count".into(), spec.random_injection_count.to_string()),
        ("init_retries".into(), spec.init_retries.to_string()),
        ("infeasible_retry_limit".into(), spec.infeasible_retry_limit.to_string()),
        ("value_tol".into(), spec.value_tol.to_string()),
        ("dist_tol".into(), spec.dist_tol.to_string()),
    ];
    if spec.problem.is_hp() {
        let scheme = &spec.energy_scheme;
        lines.push((
            "energy_scheme".into(),
            format!(
                "{} (E(H,H)={}, E(H,P)={}, E(P,H)={}, E(P,P)={})",
                scheme_name(scheme),
                scheme.e_hh,
                scheme.e_hp,
                scheme.e_ph,
                scheme.e_pp
            ),
        ));
        lines.push(("feasibility".into(), render_feasibility(&spec.feasibility)));
    }
    if let Some(d) = spec.dimension {
        lines.push(("dimension".into(), d.to_string()));
    }
    for (k, v) in lines {
        println!("config {k}={v}");
    }
}

fn scheme_name(s: &evoniche::hp::EnergyScheme) -> &'static str {
    if *s == evoniche::hp::EnergyScheme::standard() {
        "standard"
    } else if *s == evoniche::hp::EnergyScheme::mixed() {
        "mixed"
    } else if *s == evoniche::hp::EnergyScheme::functional() {
        "functional"
    } else {
        "custom"
    }
}

fn genome_json(g: &Genome) -> serde_json::Value {
    match g {
        Genome::RealVector { values, .. } => serde_json::json!(values),
        other => serde_json::json!(other.to_string()),
    }
}

#[derive(Serialize)]
struct RunSummary {
    run: u32,
    seed: u64,
    generations: u64,
    evaluations: u64,
    best_fitness: f64,
    best_genome: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    peaks_found: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    peak_ratio: Option<f64>,
}

#[derive(Serialize)]
struct BestBlock {
    run: u32,
    best_fitness: f64,
    best_genome: serde_json::Value,
}

#[derive(Serialize)]
struct Summary {
    algorithm: String,
    problem: String,
    base_seed: u64,
    repeats: u32,
    runs: Vec<RunSummary>,
    best: BestBlock,
}

/// Executes the experiment: `repeats` runs seeded `seed, seed+1, ...`,
/// a per-generation CSV, a JSON summary, and (for HP problems) the best
/// conformation block. Wall-clock timings go to stderr so the output
/// files stay byte-identical across invocations.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<RunArtifacts> {
    let problem = load_problem(spec)?;
    let resolved = resolve_defaults(spec, &problem);
    echo_config(spec, &resolved);

    fs::create_dir_all(&spec.out_dir)
        .with_context(|| format!("cannot create output directory {}", spec.out_dir.display()))?;
    let csv_path = spec.out_dir.join("results.csv");
    let summary_path = spec.out_dir.join("summary.json");

    let peaks = problem.known_peaks();
    let mut csv = String::new();
    csv.push_str("run,generation,evaluations,best_fitness,mean_fitness");
    if peaks.is_some() {
        csv.push_str(",peaks_found");
    }
    csv.push('\n');

    let mut runs: Vec<RunSummary> = Vec::new();
    let mut overall_best: Option<(u32, Population)> = None;

    for r in 0..spec.repeats {
        let run_seed = spec.seed + u64::from(r);
        let mut rng = evoniche::rng_from_seed(run_seed);
        let started = Instant::now();

        let mut rows: Vec<String> = Vec::new();
        let observer = |row: &GenStats, pop: &Population| {
            let mut line = format!(
                "{},{},{},{},{}",
                r, row.generation, row.evaluations, row.best_fitness, row.mean_fitness
            );
            if let Some(pk) = &peaks {
                let found = peak_metrics(pop, pk, spec.value_tol, spec.dist_tol)
                    .map(|rep| rep.found)
                    .unwrap_or(0);
                line.push_str(&format!(",{found}"));
            }
            rows.push(line);
        };

        let (pop, stats) = dispatch(spec, &resolved, &problem, run_seed, &mut rng, observer)?;
        csv.push_str(&rows.join("\n"));
        csv.push('\n');

        let last = stats.last().expect("every run logs generation 0");
        let best = pop.best();
        let (peaks_found, peak_ratio) = match &peaks {
            Some(pk) => {
                let report = peak_metrics(&pop, pk, spec.value_tol, spec.dist_tol)
                    .map_err(|e| anyhow!("peak metrics failed: {e}"))?;
                (Some(report.found), Some(report.ratio()))
            }
            None => (None, None),
        };
        runs.push(RunSummary {
            run: r,
            seed: run_seed,
            generations: last.generation,
            evaluations: last.evaluations,
            best_fitness: best.fitness(),
            best_genome: genome_json(&best.genome),
            peaks_found,
            peak_ratio,
        });
        eprintln!(
            "run {r} (seed {run_seed}): best fitness {} after {} evaluations, wall time {:.3}s",
            best.fitness(),
            last.evaluations,
            started.elapsed().as_secs_f64()
        );

        let better = match &overall_best {
            None => true,
            Some((_, bp)) => best.fitness() > bp.best().fitness(),
        };
        if better {
            overall_best = Some((r, pop));
        }
    }

    let (best_run, best_pop) = overall_best.expect("repeats >= 1");
    let best = best_pop.best().clone();
    let summary = Summary {
        algorithm: spec.algorithm.name().to_string(),
        problem: spec.problem.id(),
        base_seed: spec.seed,
        repeats: spec.repeats,
        runs,
        best: BestBlock {
            run: best_run,
            best_fitness: best.fitness(),
            best_genome: genome_json(&best.genome),
        },
    };

    fs::write(&csv_path, csv).with_context(|| format!("writing {}", csv_path.display()))?;
    let mut summary_text = serde_json::to_string_pretty(&summary)?;
    summary_text.push('\n');
    fs::write(&summary_path, summary_text)
        .with_context(|| format!("writing {}", summary_path.display()))?;

    let conformation_path = match &problem {
        LoadedProblem::Hp(hp) => {
            let moves = match &best.genome {
                Genome::MoveString { moves, .. } => moves.clone(),
                _ => unreachable!("hp runs evolve move strings"),
            };
            let conf = decode_relative(&moves);
            let e = energy(&conf, &hp.sequence, &hp.scheme)
                .map_err(|e| anyhow!("energy of best conformation: {e}"))?;
            let text = conformation_text(&best.genome.to_string(), &hp.sequence, &conf, e);
            let path = spec.out_dir.join("best_conformation.txt");
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            Some(path)
        }
        LoadedProblem::Bench(_) => None,
    };

    // Flush stdout so config echoes land before the process exits.
    std::io::stdout().flush().ok();
    Ok(RunArtifacts {
        csv_path,
        summary_path,
        conformation_path,
    })
}

fn dispatch(
    spec: &ExperimentSpec,
    resolved: &Resolved,
    problem: &LoadedProblem,
    run_seed: u64,
    rng: &mut evoniche::RunRng,
    observer: impl FnMut(&GenStats, &Population),
) -> Result<(Population, Vec<GenStats>)> {
    let p = problem.as_dyn();
    let result = match spec.algorithm {
        Algorithm::Ga => {
            let config = ga_config(spec, resolved, run_seed);
            run_generational(&config, p, rng, observer)
        }
        Algorithm::De => {
            let cfg = de_config(spec, resolved, run_seed);
            run_de(
                spec.population_size,
                &cfg,
                &spec.termination,
                spec.init_retries,
                p,
                rng,
                observer,
            )
        }
        Algorithm::CrowdingDe(variant) => {
            let cfg = de_config(spec, resolved, run_seed);
            let niching = NichingConfig {
                sharing_radius: spec.sharing_radius,
                sharing_alpha: spec.sharing_alpha,
                tl_discount: spec.tl_discount,
                sl_floor: spec.sl_floor,
                metric: resolved.metric,
            };
            run_crowding_de(
                spec.population_size,
                &cfg,
                &niching,
                variant,
                &spec.termination,
                spec.init_retries,
                p,
                rng,
                observer,
            )
        }
        Algorithm::Ease => {
            let config = ga_config(spec, resolved, run_seed);
            let species = SpeciesConfig {
                species_radius: resolved.species_radius,
                explosion_copies: spec.explosion_copies,
                stage_switch_fraction: spec.stage_switch_fraction,
                random_injection_count: spec.random_injection_count,
            };
            run_ease(&config, &species, resolved.metric, p, rng, observer)
                .map(|(pop, _seeds, stats)| (pop, stats))
        }
    };
    result.map_err(|e| anyhow!("run with seed {run_seed} failed: {e}"))
}

fn ga_config(spec: &ExperimentSpec, resolved: &Resolved, run_seed: u64) -> RunConfig {
    RunConfig {
        population_size: spec.population_size,
        offspring_size: spec.offspring_size,
        breeding_size: spec.breeding_size,
        overlapping: spec.overlapping,
        parent_scheme: spec.parent_scheme,
        survival_scheme: spec.survival_scheme,
        crossover: resolved.crossover,
        mutation: resolved.mutation,
        termination: spec.termination,
        seed: run_seed,
        infeasible_retry_limit: spec.infeasible_retry_limit,
    }
}

fn de_config(spec: &ExperimentSpec, resolved: &Resolved, run_seed: u64) -> DEConfig {
    DEConfig {
        scale_factor: spec.scale_factor,
        crossover_rate: spec.crossover_rate,
        bound_policy: spec.bound_policy,
        seed: run_seed,
        move_mutation_prob: resolved.move_mutation_prob,
    }
}
