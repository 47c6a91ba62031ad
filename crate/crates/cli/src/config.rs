//! Experiment configuration: flat key=value or JSON documents, defaults,
//! and validation.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use evoniche::hp::{EnergyScheme, FeasibilityPolicy};
use evoniche::{
    BoundPolicy, CrossoverOp, CrowdingVariant, DistanceMetric, MutationOp, SelectionScheme,
    TerminationCondition,
};

/// One configuration key: name, value syntax, default, description.
/// This table drives both parsing and the --help key listing, so the
/// defaults printed are the defaults used.
pub struct KeyDoc {
    pub name: &'static str,
    pub syntax: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

pub const KEYS: &[KeyDoc] = &[
    KeyDoc { name: "algorithm", syntax: "ga|de|crowding-de|crowding-de-sl|crowding-de-tl|crowding-de-stl|ease", default: "(required)", help: "search algorithm" },
    KeyDoc { name: "problem", syntax: "bench:<name>|hp:<path>", default: "(required)", help: "benchmark function or HP sequence file; bench names: equal-maxima, uneven-decreasing-maxima, himmelblau, six-hump-camel, sphere" },
    KeyDoc { name: "seed", syntax: "u64", default: "1", help: "base seed; repeat r uses seed+r" },
    KeyDoc { name: "repeats", syntax: "u32 >= 1", default: "1", help: "independent runs" },
    KeyDoc { name: "out", syntax: "directory", default: "out", help: "output directory for results.csv, summary.json, best_conformation.txt" },
    KeyDoc { name: "budget", syntax: "u64 >= 1", default: "10000", help: "evaluation budget (shorthand for termination=evals:N)" },
    KeyDoc { name: "termination", syntax: "evals:N|gens:N|wall:SECONDS|improvement:EPS:WINDOW", default: "evals:10000", help: "stop condition; conflicts with budget if both given" },
    KeyDoc { name: "population_size", syntax: "usize >= 1", default: "50", help: "parent population size" },
    KeyDoc { name: "offspring_size", syntax: "usize >= 1", default: "population_size", help: "offspring per generation (ga/ease)" },
    KeyDoc { name: "breeding_size", syntax: "usize >= 1", default: "population_size", help: "breeding pool size (ga/ease)" },
    KeyDoc { name: "overlapping", syntax: "bool", default: "true", help: "survivors from offspring+parents (true) or offspring only (false)" },
    KeyDoc { name: "parent_scheme", syntax: "fitness-proportional|rank-proportional|uniform-deterministic|uniform-stochastic|binary-tournament|truncation", default: "binary-tournament", help: "parent selection (ga/ease)" },
    KeyDoc { name: "survival_scheme", syntax: "same choices as parent_scheme", default: "truncation", help: "survival selection (ga/ease)" },
    KeyDoc { name: "crossover", syntax: "one-point|two-point|uniform[:p]|blend[:w]", default: "blend:0.5 real vectors, one-point strings", help: "crossover operator (ga/ease)" },
    KeyDoc { name: "mutation", syntax: "bitflip:p|random:p|delta:p:step|gaussian:p:sigma", default: "gaussian:1:0.02*range reals, random:2/len strings", help: "mutation operator (ga/ease; DE-family move-string runs reuse a random:p value)" },
    KeyDoc { name: "scale_factor", syntax: "f64 > 0", default: "0.5", help: "DE difference-vector scale F" },
    KeyDoc { name: "crossover_rate", syntax: "0..=1", default: "0.9", help: "DE binomial recombination rate CR" },
    KeyDoc { name: "bound_policy", syntax: "reflect|clamp", default: "reflect", help: "out-of-bounds handling for trial vectors" },
    KeyDoc { name: "sharing_radius", syntax: "f64 > 0", default: "0.1", help: "fitness-sharing niche radius" },
    KeyDoc { name: "sharing_alpha", syntax: "f64 > 0", default: "1", help: "fitness-sharing shape exponent" },
    KeyDoc { name: "tl_discount", syntax: "0..<1", default: "0.5", help: "temporal-locality delta discount" },
    KeyDoc { name: "sl_floor", syntax: "f64 > 0", default: "0.05", help: "spatial-locality roulette floor" },
    KeyDoc { name: "metric", syntax: "euclidean|hamming", default: "euclidean reals, hamming strings", help: "distance metric for niching" },
    KeyDoc { name: "species_radius", syntax: "f64 > 0", default: "0.1*range reals, len/4 strings", help: "minimum seed separation (ease)" },
    KeyDoc { name: "explosion_copies", syntax: "usize >= 1", default: "5", help: "mutated copies per seed per generation (ease)" },
    KeyDoc { name: "stage_switch_fraction", syntax: "0..=1, > 0", default: "0.5", help: "budget fraction spent exploring before the species stage (ease)" },
    KeyDoc { name: "random_injection_count", syntax: "usize", default: "5", help: "fresh random individuals per exploration generation (ease)" },
    KeyDoc { name: "energy_scheme", syntax: "standard|mixed|functional", default: "standard", help: "HP contact-energy table" },
    KeyDoc { name: "feasibility", syntax: "delete|penalty[:c]", default: "delete", help: "HP infeasible-conformation policy; penalty c defaults to 2*|E(H,H)|" },
    KeyDoc { name: "init_retries", syntax: "u64 >= 1", default: "10000", help: "feasible-sample attempts per individual at initialization" },
    KeyDoc { name: "infeasible_retry_limit", syntax: "u64 >= 1", default: "100", help: "variation resample attempts per offspring under delete policy" },
    KeyDoc { name: "dimension", syntax: "usize >= 1", default: "function-specific", help: "dimension override (sphere only)" },
    KeyDoc { name: "value_tol", syntax: "f64 >= 0", default: "0.0001", help: "fitness tolerance for counting a peak as found" },
    KeyDoc { name: "dist_tol", syntax: "f64 >= 0", default: "0.01", help: "location tolerance for counting a peak as found" },
];

/// The key table rendered for --help.
pub fn keys_help() -> String {
    let mut out = String::from("Configuration keys (config file or JSON; flags override):\n");
    for k in KEYS {
        out.push_str(&format!(
            "  {:<24} {}\n{:<27}syntax: {}; default: {}\n",
            k.name, k.help, "", k.syntax, k.default
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Ga,
    De,
    CrowdingDe(CrowdingVariant),
    Ease,
}

impl Algorithm {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "ga" => Algorithm::Ga,
            "de" => Algorithm::De,
            "crowding-de" => Algorithm::CrowdingDe(CrowdingVariant::Plain),
            "crowding-de-sl" => Algorithm::CrowdingDe(CrowdingVariant::Spatial),
            "crowding-de-tl" => Algorithm::CrowdingDe(CrowdingVariant::Temporal),
            "crowding-de-stl" => Algorithm::CrowdingDe(CrowdingVariant::SpatialTemporal),
            "ease" => Algorithm::Ease,
            _ => bail!("unknown algorithm '{s}' (key: algorithm)"),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Ga => "ga",
            Algorithm::De => "de",
            Algorithm::CrowdingDe(v) => v.name(),
            Algorithm::Ease => "ease",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemSpec {
    Bench(String),
    Hp(PathBuf),
}

impl ProblemSpec {
    pub fn parse(s: &str) -> Result<Self> {
        if let Some(name) = s.strip_prefix("bench:") {
            Ok(ProblemSpec::Bench(name.to_string()))
        } else if let Some(path) = s.strip_prefix("hp:") {
            Ok(ProblemSpec::Hp(PathBuf::from(path)))
        } else {
            bail!("problem must be bench:<name> or hp:<path>, got '{s}' (key: problem)")
        }
    }

    pub fn id(&self) -> String {
        match self {
            ProblemSpec::Bench(name) => format!("bench:{name}"),
            ProblemSpec::Hp(path) => format!("hp:{}", path.display()),
        }
    }

    pub fn is_hp(&self) -> bool {
        matches!(self, ProblemSpec::Hp(_))
    }
}

/// Fully validated experiment description. Operator fields left `None`
/// resolve to problem-shaped defaults at run time and are echoed then.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub algorithm: Algorithm,
    pub problem: ProblemSpec,
    pub seed: u64,
    pub repeats: u32,
    pub out_dir: PathBuf,
    pub termination: TerminationCondition,
    pub population_size: usize,
    pub offspring_size: usize,
    pub breeding_size: usize,
    pub overlapping: bool,
    pub parent_scheme: SelectionScheme,
    pub survival_scheme: SelectionScheme,
    pub crossover: Option<CrossoverOp>,
    pub mutation: Option<MutationOp>,
    pub scale_factor: f64,
    pub crossover_rate: f64,
    pub bound_policy: BoundPolicy,
    pub sharing_radius: f64,
    pub sharing_alpha: f64,
    pub tl_discount: f64,
    pub sl_floor: f64,
    pub metric: Option<DistanceMetric>,
    pub species_radius: Option<f64>,
    pub explosion_copies: usize,
    pub stage_switch_fraction: f64,
    pub random_injection_count: usize,
    pub energy_scheme: EnergyScheme,
    pub feasibility: FeasibilityPolicy,
    pub init_retries: u64,
    pub infeasible_retry_limit: u64,
    pub dimension: Option<usize>,
    pub value_tol: f64,
    pub dist_tol: f64,
}

/// Parses a configuration document into a key -> value map. Flat
/// `key = value` lines with `#` comments, or a single JSON object when
/// the first non-space character is `{`.
pub fn parse_document(text: &str) -> Result<BTreeMap<String, String>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let value: serde_json::Value =
            serde_json::from_str(text).context("config is not valid JSON")?;
        let obj = value
            .as_object()
            .ok_or_else(|| anyhow!("JSON config must be an object"))?;
        let mut map = BTreeMap::new();
        for (k, v) in obj {
            let s = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                serde_json::Value::Bool(b) => b.to_string(),
                other => bail!("key '{k}': unsupported JSON value {other}"),
            };
            map.insert(k.clone(), s);
        }
        return Ok(map);
    }
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected key=value, got '{line}'", lineno + 1))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_as<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str, default: T) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    match map.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse::<T>()
            .map_err(|e| anyhow!("key '{key}': cannot parse '{v}': {e}")),
    }
}

fn parse_scheme(map: &BTreeMap<String, String>, key: &str, default: SelectionScheme) -> Result<SelectionScheme> {
    let Some(v) = map.get(key) else { return Ok(default) };
    Ok(match v.as_str() {
        "fitness-proportional" => SelectionScheme::FitnessProportional,
        "rank-proportional" => SelectionScheme::RankProportional,
        "uniform-deterministic" => SelectionScheme::UniformDeterministic,
        "uniform-stochastic" => SelectionScheme::UniformStochastic,
        "binary-tournament" => SelectionScheme::BinaryTournament,
        "truncation" => SelectionScheme::Truncation,
        _ => bail!("key '{key}': unknown selection scheme '{v}'"),
    })
}

fn parse_crossover(v: &str) -> Result<CrossoverOp> {
    let mut parts = v.split(':');
    let id = parts.next().unwrap();
    let param = parts.next();
    if parts.next().is_some() {
        bail!("key 'crossover': too many ':' parameters in '{v}'");
    }
    let op = match (id, param) {
        ("one-point", None) => CrossoverOp::OnePoint,
        ("two-point", None) => CrossoverOp::TwoPoint,
        ("uniform", p) => CrossoverOp::Uniform {
            p_swap: p.map_or(Ok(0.5), |s| s.parse().map_err(|e| anyhow!("key 'crossover': {e}")))?,
        },
        ("blend", p) => CrossoverOp::Blend {
            weight: p.map_or(Ok(0.5), |s| s.parse().map_err(|e| anyhow!("key 'crossover': {e}")))?,
        },
        _ => bail!("key 'crossover': unknown operator '{v}'"),
    };
    op.validate().map_err(|e| anyhow!("key 'crossover': {e}"))?;
    Ok(op)
}

fn parse_mutation(v: &str) -> Result<MutationOp> {
    let parts: Vec<&str> = v.split(':').collect();
    let parse_f = |s: &str| -> Result<f64> {
        s.parse().map_err(|e| anyhow!("key 'mutation': cannot parse '{s}': {e}"))
    };
    let op = match parts.as_slice() {
        ["bitflip", p] => MutationOp::BitFlip { p: parse_f(p)? },
        ["random", p] => MutationOp::Random { p: parse_f(p)? },
        ["delta", p, step] => MutationOp::Delta { p: parse_f(p)?, step: parse_f(step)? },
        ["gaussian", p, sigma] => MutationOp::Gaussian { p: parse_f(p)?, sigma: parse_f(sigma)? },
        _ => bail!("key 'mutation': expected bitflip:p, random:p, delta:p:step, or gaussian:p:sigma, got '{v}'"),
    };
    op.validate().map_err(|e| anyhow!("key 'mutation': {e}"))?;
    Ok(op)
}

fn parse_termination(v: &str) -> Result<TerminationCondition> {
    let parts: Vec<&str> = v.split(':').collect();
    let cond = match parts.as_slice() {
        ["evals", n] => TerminationCondition::MaxEvaluations(
            n.parse().map_err(|e| anyhow!("key 'termination': {e}"))?,
        ),
        ["gens", n] => TerminationCondition::MaxGenerations(
            n.parse().map_err(|e| anyhow!("key 'termination': {e}"))?,
        ),
        ["wall", s] => TerminationCondition::MaxWallClockSeconds(
            s.parse().map_err(|e| anyhow!("key 'termination': {e}"))?,
        ),
        ["improvement", eps, window] => TerminationCondition::MinImprovement {
            epsilon: eps.parse().map_err(|e| anyhow!("key 'termination': {e}"))?,
            window: window.parse().map_err(|e| anyhow!("key 'termination': {e}"))?,
        },
        _ => bail!("key 'termination': expected evals:N, gens:N, wall:S, or improvement:EPS:WINDOW, got '{v}'"),
    };
    cond.validate().map_err(|e| anyhow!("key 'termination': {e}"))?;
    Ok(cond)
}

/// Builds a validated spec from a parsed key map. Returns the spec and
/// any compatibility warnings (e.g. temporal locality degraded on move
/// strings).
pub fn build_spec(map: &BTreeMap<String, String>) -> Result<(ExperimentSpec, Vec<String>)> {
    for key in map.keys() {
        if !KEYS.iter().any(|k| k.name == key) {
            bail!("unknown key '{key}'");
        }
    }

    let algorithm = Algorithm::parse(
        map.get("algorithm")
            .ok_or_else(|| anyhow!("missing required key 'algorithm'"))?,
    )?;
    let problem = ProblemSpec::parse(
        map.get("problem")
            .ok_or_else(|| anyhow!("missing required key 'problem'"))?,
    )?;

    if map.contains_key("budget") && map.contains_key("termination") {
        bail!("keys 'budget' and 'termination' conflict; give one");
    }
    let termination = if let Some(t) = map.get("termination") {
        parse_termination(t)?
    } else {
        TerminationCondition::MaxEvaluations(parse_as(map, "budget", 10_000u64)?)
    };

    let population_size = parse_as(map, "population_size", 50usize)?;
    let offspring_size = parse_as(map, "offspring_size", population_size)?;
    let breeding_size = parse_as(map, "breeding_size", population_size)?;

    let crossover = map.get("crossover").map(|v| parse_crossover(v)).transpose()?;
    let mutation = map.get("mutation").map(|v| parse_mutation(v)).transpose()?;

    let bound_policy = match map.get("bound_policy").map(String::as_str) {
        None | Some("reflect") => BoundPolicy::Reflect,
        Some("clamp") => BoundPolicy::Clamp,
        Some(v) => bail!("key 'bound_policy': unknown policy '{v}'"),
    };
    let metric = match map.get("metric").map(String::as_str) {
        None => None,
        Some("euclidean") => Some(DistanceMetric::Euclidean),
        Some("hamming") => Some(DistanceMetric::Hamming),
        Some(v) => bail!("key 'metric': unknown metric '{v}'"),
    };
    let energy_scheme = match map.get("energy_scheme") {
        None => EnergyScheme::standard(),
        Some(v) => EnergyScheme::by_name(v)
            .ok_or_else(|| anyhow!("key 'energy_scheme': unknown scheme '{v}'"))?,
    };
    let feasibility = match map.get("feasibility").map(String::as_str) {
        None | Some("delete") => FeasibilityPolicy::Delete,
        Some(v) if v == "penalty" => FeasibilityPolicy::Penalty {
            penalty: 2.0 * energy_scheme.e_hh.abs(),
        },
        Some(v) if v.starts_with("penalty:") => FeasibilityPolicy::Penalty {
            penalty: v["penalty:".len()..]
                .parse()
                .map_err(|e| anyhow!("key 'feasibility': {e}"))?,
        },
        Some(v) => bail!("key 'feasibility': expected delete or penalty[:c], got '{v}'"),
    };
    feasibility
        .validate()
        .map_err(|e| anyhow!("key 'feasibility': {e}"))?;

    let spec = ExperimentSpec {
        algorithm,
        problem,
        seed: parse_as(map, "seed", 1u64)?,
        repeats: parse_as(map, "repeats", 1u32)?,
        out_dir: PathBuf::from(map.get("out").cloned().unwrap_or_else(|| "out".into())),
        termination,
        population_size,
        offspring_size,
        breeding_size,
        overlapping: parse_as(map, "overlapping", true)?,
        parent_scheme: parse_scheme(map, "parent_scheme", SelectionScheme::BinaryTournament)?,
        survival_scheme: parse_scheme(map, "survival_scheme", SelectionScheme::Truncation)?,
        crossover,
        mutation,
        scale_factor: parse_as(map, "scale_factor", 0.5f64)?,
        crossover_rate: parse_as(map, "crossover_rate", 0.9f64)?,
        bound_policy,
        sharing_radius: parse_as(map, "sharing_radius", 0.1f64)?,
        sharing_alpha: parse_as(map, "sharing_alpha", 1.0f64)?,
        tl_discount: parse_as(map, "tl_discount", 0.5f64)?,
        sl_floor: parse_as(map, "sl_floor", 0.05f64)?,
        metric,
        species_radius: map
            .get("species_radius")
            .map(|v| v.parse().map_err(|e| anyhow!("key 'species_radius': {e}")))
            .transpose()?,
        explosion_copies: parse_as(map, "explosion_copies", 5usize)?,
        stage_switch_fraction: parse_as(map, "stage_switch_fraction", 0.5f64)?,
        random_injection_count: parse_as(map, "random_injection_count", 5usize)?,
        energy_scheme,
        feasibility,
        init_retries: parse_as(map, "init_retries", 10_000u64)?,
        infeasible_retry_limit: parse_as(map, "infeasible_retry_limit", 100u64)?,
        dimension: map
            .get("dimension")
            .map(|v| v.parse().map_err(|e| anyhow!("key 'dimension': {e}")))
            .transpose()?,
        value_tol: parse_as(map, "value_tol", 1e-4f64)?,
        dist_tol: parse_as(map, "dist_tol", 0.01f64)?,
    };

    let mut warnings = Vec::new();
    validate_spec(&spec, &mut warnings)?;
    Ok((spec, warnings))
}

fn validate_spec(spec: &ExperimentSpec, warnings: &mut Vec<String>) -> Result<()> {
    if spec.repeats == 0 {
        bail!("key 'repeats': must be >= 1");
    }
    if spec.population_size == 0 {
        bail!("key 'population_size': must be >= 1");
    }
    if matches!(spec.algorithm, Algorithm::De | Algorithm::CrowdingDe(_))
        && !spec.problem.is_hp()
        && spec.population_size < 4
    {
        bail!("key 'population_size': DE-family algorithms need at least 4 members");
    }
    if spec.problem.is_hp() {
        if let Algorithm::CrowdingDe(v) = spec.algorithm {
            let degraded = v.degraded_for_strings();
            if degraded != v {
                warnings.push(format!(
                    "temporal locality needs real vectors; {} degrades to {} on move-string problems",
                    v.name(),
                    degraded.name()
                ));
            }
        }
        if let Some(op) = &spec.crossover {
            if matches!(op, CrossoverOp::Blend { .. }) {
                bail!("key 'crossover': blend requires real vectors, not an hp problem");
            }
        }
        if let Some(op) = &spec.mutation {
            if !matches!(op, MutationOp::Random { .. }) {
                bail!(
                    "key 'mutation': hp move strings support only random:p, got {}",
                    op.name()
                );
            }
        }
        if spec.metric == Some(DistanceMetric::Euclidean) {
            bail!("key 'metric': euclidean does not apply to move strings");
        }
        if spec.dimension.is_some() {
            bail!("key 'dimension': applies to benchmark problems only");
        }
    } else {
        if let Some(op) = &spec.mutation {
            if matches!(op, MutationOp::BitFlip { .. }) {
                bail!("key 'mutation': bitflip applies to bit strings, not real vectors");
            }
        }
        if spec.metric == Some(DistanceMetric::Hamming) {
            bail!("key 'metric': hamming does not apply to real vectors");
        }
    }
    if matches!(spec.algorithm, Algorithm::Ease)
        && spec.termination.eval_limit().is_none()
    {
        bail!("key 'termination': ease needs an evaluation budget (evals:N) for its stage switch");
    }
    if matches!(spec.algorithm, Algorithm::Ga | Algorithm::Ease) {
        // Surface size errors now rather than mid-run.
        if spec.breeding_size > spec.population_size {
            bail!("key 'breeding_size': exceeds population_size");
        }
        if !spec.overlapping && spec.offspring_size < spec.population_size {
            bail!("key 'offspring_size': non-overlapping runs need offspring_size >= population_size");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map_of(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn minimal_spec_fills_defaults() {
        let map = map_of(&[("algorithm", "de"), ("problem", "bench:sphere"), ("seed", "1")]);
        let (spec, warnings) = build_spec(&map).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(spec.algorithm, Algorithm::De);
        assert_eq!(spec.seed, 1);
        assert_eq!(spec.population_size, 50);
        assert_eq!(spec.termination, TerminationCondition::MaxEvaluations(10_000));
        assert_eq!(spec.scale_factor, 0.5);
        assert_eq!(spec.crossover_rate, 0.9);
        assert_eq!(spec.repeats, 1);
    }

    #[test]
    fn unknown_keys_are_named() {
        let map = map_of(&[("algorithm", "de"), ("problem", "bench:sphere"), ("budgett", "5")]);
        let err = build_spec(&map).unwrap_err().to_string();
        assert!(err.contains("budgett"), "{err}");
    }

    #[test]
    fn unknown_algorithm_is_named() {
        let map = map_of(&[("algorithm", "sa"), ("problem", "bench:sphere")]);
        let err = build_spec(&map).unwrap_err().to_string();
        assert!(err.contains("sa") && err.contains("algorithm"), "{err}");
    }

    #[test]
    fn temporal_variants_warn_and_degrade_on_hp() {
        let map = map_of(&[("algorithm", "crowding-de-tl"), ("problem", "hp:seq.txt")]);
        let (spec, warnings) = build_spec(&map).unwrap();
        assert_eq!(spec.algorithm, Algorithm::CrowdingDe(CrowdingVariant::Temporal));
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("crowding-de-tl"));
        assert!(warnings[0].contains("crowding-de"));
    }

    #[test]
    fn document_parsing_flat_and_json() {
        let flat = "# comment\nalgorithm = de\nproblem=bench:sphere\n\nseed = 7\n";
        let m1 = parse_document(flat).unwrap();
        let json = r#"{"algorithm": "de", "problem": "bench:sphere", "seed": 7}"#;
        let m2 = parse_document(json).unwrap();
        assert_eq!(m1, m2);
        assert!(parse_document("no equals sign").is_err());
    }

    #[test]
    fn operator_parsing() {
        assert_eq!(parse_crossover("one-point").unwrap(), CrossoverOp::OnePoint);
        assert_eq!(
            parse_crossover("uniform:0.3").unwrap(),
            CrossoverOp::Uniform { p_swap: 0.3 }
        );
        assert_eq!(
            parse_crossover("blend").unwrap(),
            CrossoverOp::Blend { weight: 0.5 }
        );
        assert!(parse_crossover("blend:1.5").is_err());
        assert_eq!(
            parse_mutation("gaussian:1:0.05").unwrap(),
            MutationOp::Gaussian { p: 1.0, sigma: 0.05 }
        );
        assert!(parse_mutation("gaussian:1").is_err());
        assert_eq!(
            parse_termination("improvement:0.001:10").unwrap(),
            TerminationCondition::MinImprovement { epsilon: 0.001, window: 10 }
        );
        assert!(parse_termination("evals").is_err());
    }

    #[test]
    fn conflicting_budget_and_termination() {
        let map = map_of(&[
            ("algorithm", "de"),
            ("problem", "bench:sphere"),
            ("budget", "100"),
            ("termination", "gens:5"),
        ]);
        assert!(build_spec(&map).is_err());
    }

    #[test]
    fn incompatible_operator_problem_combinations() {
        let map = map_of(&[
            ("algorithm", "ga"),
            ("problem", "hp:seq.txt"),
            ("crossover", "blend:0.5"),
        ]);
        assert!(build_spec(&map).is_err());
        let map = map_of(&[
            ("algorithm", "ga"),
            ("problem", "bench:sphere"),
            ("mutation", "bitflip:0.1"),
        ]);
        assert!(build_spec(&map).is_err());
        let map = map_of(&[
            ("algorithm", "ease"),
            ("problem", "bench:sphere"),
            ("termination", "gens:100"),
        ]);
        assert!(build_spec(&map).is_err());
    }

    #[test]
    fn every_key_appears_in_help() {
        let help = keys_help();
        for k in KEYS {
            assert!(help.contains(k.name), "{} missing from help", k.name);
            assert!(help.contains(k.default), "{} default missing from help", k.name);
        }
    }
}
