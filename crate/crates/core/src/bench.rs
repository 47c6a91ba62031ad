//! Synthetic real-valued test functions with known peak lists, plus a
//! grid-search oracle that locates and refines the peaks independently.
//!
//! All evaluators are exposed in maximization form to match the rest of
//! the crate.

use crate::error::{Error, Result};
use crate::genome::{Genome, GenomeSpec};
use crate::problem::{Evaluation, Problem};

/// A known optimum: location and function value there.
#[derive(Debug, Clone, PartialEq)]
pub struct Peak {
    pub location: Vec<f64>,
    pub value: f64,
}

/// A benchmark function with bounds and (when known) its peak list.
#[derive(Debug, Clone)]
pub struct BenchmarkFunction {
    pub name: String,
    pub dimension: usize,
    pub bounds: Vec<(f64, f64)>,
    evaluator: fn(&[f64]) -> f64,
    pub known_peaks: Vec<Peak>,
}

fn equal_maxima_eval(x: &[f64]) -> f64 {
    (5.0 * std::f64::consts::PI * x[0]).sin().powi(6)
}

fn uneven_decreasing_maxima_eval(x: &[f64]) -> f64 {
    let x = x[0];
    let envelope = (-2.0 * (2.0f64).ln() * ((x - 0.08) / 0.854).powi(2)).exp();
    let wave = (5.0 * std::f64::consts::PI * (x.powf(0.75) - 0.05)).sin().powi(6);
    envelope * wave
}

fn himmelblau_eval(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    -((a * a + b - 11.0).powi(2) + (a + b * b - 7.0).powi(2))
}

fn six_hump_camel_eval(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    -((4.0 - 2.1 * a * a + a.powi(4) / 3.0) * a * a + a * b + (-4.0 + 4.0 * b * b) * b * b)
}

fn sphere_eval(x: &[f64]) -> f64 {
    -x.iter().map(|v| v * v).sum::<f64>()
}

impl BenchmarkFunction {
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dimension, "dimension mismatch");
        (self.evaluator)(x)
    }

    /// sin^6(5 pi x) on [0, 1]: five equal peaks of height 1 at
    /// x = 0.1, 0.3, 0.5, 0.7, 0.9.
    pub fn equal_maxima() -> Self {
        BenchmarkFunction {
            name: "equal-maxima".into(),
            dimension: 1,
            bounds: vec![(0.0, 1.0)],
            evaluator: equal_maxima_eval,
            known_peaks: [0.1, 0.3, 0.5, 0.7, 0.9]
                .iter()
                .map(|&x| Peak { location: vec![x], value: 1.0 })
                .collect(),
        }
    }

    /// The same sin^6 waveform with unevenly spaced peaks under an
    /// exponential decay envelope; five peaks of decreasing height.
    /// Peak list derived by the grid oracle at construction.
    pub fn uneven_decreasing_maxima() -> Self {
        let mut f = BenchmarkFunction {
            name: "uneven-decreasing-maxima".into(),
            dimension: 1,
            bounds: vec![(0.0, 1.0)],
            evaluator: uneven_decreasing_maxima_eval,
            known_peaks: Vec::new(),
        };
        f.known_peaks = grid_peak_oracle(&f, 4000).expect("1D oracle cannot fail");
        f
    }

    /// Negated Himmelblau on [-6, 6]^2: four global peaks of value 0.
    pub fn himmelblau() -> Self {
        BenchmarkFunction {
            name: "himmelblau".into(),
            dimension: 2,
            bounds: vec![(-6.0, 6.0); 2],
            evaluator: himmelblau_eval,
            known_peaks: vec![
                Peak { location: vec![3.0, 2.0], value: 0.0 },
                Peak { location: vec![-2.805118086952745, 3.131312518250573], value: 0.0 },
                Peak { location: vec![-3.779310253377747, -3.283185991286170], value: 0.0 },
                Peak { location: vec![3.584428340330492, -1.848126526964404], value: 0.0 },
            ],
        }
    }

    /// Negated six-hump camel on [-3, 3] x [-2, 2]: two global peaks.
    pub fn six_hump_camel() -> Self {
        let v = 1.0316284534898774;
        BenchmarkFunction {
            name: "six-hump-camel".into(),
            dimension: 2,
            bounds: vec![(-3.0, 3.0), (-2.0, 2.0)],
            evaluator: six_hump_camel_eval,
            known_peaks: vec![
                Peak { location: vec![0.08984201368301331, -0.7126564032704135], value: v },
                Peak { location: vec![-0.08984201368301331, 0.7126564032704135], value: v },
            ],
        }
    }

    /// Negated sphere: the unimodal control, one peak at the origin.
    pub fn sphere(dimension: usize) -> Self {
        BenchmarkFunction {
            name: "sphere".into(),
            dimension,
            bounds: vec![(-5.12, 5.12); dimension],
            evaluator: sphere_eval,
            known_peaks: vec![Peak { location: vec![0.0; dimension], value: 0.0 }],
        }
    }

    /// Looks a function up by its CLI name. `dimension` applies to the
    /// sphere; fixed-dimension functions reject overrides.
    pub fn by_name(name: &str, dimension: Option<usize>) -> Result<Self> {
        let f = match name {
            "equal-maxima" => Self::equal_maxima(),
            "uneven-decreasing-maxima" => Self::uneven_decreasing_maxima(),
            "himmelblau" => Self::himmelblau(),
            "six-hump-camel" => Self::six_hump_camel(),
            "sphere" => Self::sphere(dimension.unwrap_or(2)),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "unknown benchmark function '{name}'"
                )))
            }
        };
        if let Some(d) = dimension {
            if f.dimension != d {
                return Err(Error::InvalidConfig(format!(
                    "benchmark '{name}' has fixed dimension {}, cannot use {d}",
                    f.dimension
                )));
            }
        }
        Ok(f)
    }

    pub fn names() -> &'static [&'static str] {
        &[
            "equal-maxima",
            "uneven-decreasing-maxima",
            "himmelblau",
            "six-hump-camel",
            "sphere",
        ]
    }
}

/// The shipped suite: equal peaks, uneven decreasing peaks, two
/// multi-optimum 2D surfaces, and a unimodal control.
pub fn builtin_suite() -> Vec<BenchmarkFunction> {
    vec![
        BenchmarkFunction::equal_maxima(),
        BenchmarkFunction::uneven_decreasing_maxima(),
        BenchmarkFunction::himmelblau(),
        BenchmarkFunction::six_hump_camel(),
        BenchmarkFunction::sphere(2),
    ]
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of a 1D slice.
fn golden_max(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut a = hi - GOLDEN * (hi - lo);
    let mut b = lo + GOLDEN * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    while hi - lo > tol {
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - GOLDEN * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + GOLDEN * (hi - lo);
            fb = f(b);
        }
    }
    0.5 * (lo + hi)
}

/// Locates the local maxima of `f` on a sampled grid and refines each by
/// coordinate-wise golden-section search. Supports dimensions 1 and 2 and
/// needs at least 1000 grid points per dimension.
pub fn grid_peak_oracle(f: &BenchmarkFunction, resolution: usize) -> Result<Vec<Peak>> {
    if f.dimension > 2 {
        return Err(Error::InvalidInput(format!(
            "grid oracle refuses dimension {} (supports 1 and 2)",
            f.dimension
        )));
    }
    if resolution < 1000 {
        return Err(Error::InvalidInput(format!(
            "resolution {resolution} below the 1000-point minimum"
        )));
    }
    match f.dimension {
        1 => oracle_1d(f, resolution),
        2 => oracle_2d(f, resolution),
        _ => unreachable!(),
    }
}

fn oracle_1d(f: &BenchmarkFunction, resolution: usize) -> Result<Vec<Peak>> {
    let (lo, hi) = f.bounds[0];
    let step = (hi - lo) / resolution as f64;
    let xs: Vec<f64> = (0..=resolution).map(|i| lo + i as f64 * step).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f.evaluate(&[x])).collect();
    // Interior maxima only; boundary points are not treated as peaks.
    let mut peaks: Vec<Peak> = Vec::new();
    for i in 1..resolution {
        if !(ys[i] > ys[i - 1] && ys[i] > ys[i + 1]) {
            continue;
        }
        let x = golden_max(|x| f.evaluate(&[x]), xs[i - 1], xs[i + 1], 1e-12);
        push_deduped(&mut peaks, vec![x], f.evaluate(&[x]), (hi - lo) * 1e-6);
    }
    peaks.sort_by(|a, b| a.location[0].partial_cmp(&b.location[0]).unwrap());
    Ok(peaks)
}

fn oracle_2d(f: &BenchmarkFunction, resolution: usize) -> Result<Vec<Peak>> {
    let (lo0, hi0) = f.bounds[0];
    let (lo1, hi1) = f.bounds[1];
    let step0 = (hi0 - lo0) / resolution as f64;
    let step1 = (hi1 - lo1) / resolution as f64;
    let at = |i: usize, j: usize| {
        [lo0 + i as f64 * step0, lo1 + j as f64 * step1]
    };
    let mut values = vec![vec![0.0f64; resolution + 1]; resolution + 1];
    for i in 0..=resolution {
        for j in 0..=resolution {
            let p = at(i, j);
            values[i][j] = f.evaluate(&p);
        }
    }
    let range = (hi0 - lo0).max(hi1 - lo1);
    let mut peaks: Vec<Peak> = Vec::new();
    for i in 1..resolution {
        for j in 1..resolution {
            let v = values[i][j];
            let mut is_max = true;
            'nbrs: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let ni = (i as i64 + di) as usize;
                    let nj = (j as i64 + dj) as usize;
                    if values[ni][nj] >= v {
                        is_max = false;
                        break 'nbrs;
                    }
                }
            }
            if !is_max {
                continue;
            }
            // Coordinate-wise refinement with a re-centered bracket.
            let mut p = at(i, j);
            for _ in 0..40 {
                p[0] = golden_max(
                    |x| f.evaluate(&[x, p[1]]),
                    (p[0] - step0).max(lo0),
                    (p[0] + step0).min(hi0),
                    1e-13,
                );
                p[1] = golden_max(
                    |y| f.evaluate(&[p[0], y]),
                    (p[1] - step1).max(lo1),
                    (p[1] + step1).min(hi1),
                    1e-13,
                );
            }
            let value = f.evaluate(&p);
            push_deduped(&mut peaks, p.to_vec(), value, range * 1e-5);
        }
    }
    peaks.sort_by(|a, b| {
        a.location[0]
            .partial_cmp(&b.location[0])
            .unwrap()
            .then(a.location[1].partial_cmp(&b.location[1]).unwrap())
    });
    Ok(peaks)
}

fn push_deduped(peaks: &mut Vec<Peak>, location: Vec<f64>, value: f64, merge_dist: f64) {
    for existing in peaks.iter_mut() {
        let d = existing
            .location
            .iter()
            .zip(&location)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if d < merge_dist {
            if value > existing.value {
                existing.location = location;
                existing.value = value;
            }
            return;
        }
    }
    peaks.push(Peak { location, value });
}

/// A benchmark function as a search problem over real vectors.
#[derive(Debug, Clone)]
pub struct BenchProblem {
    pub function: BenchmarkFunction,
}

impl BenchProblem {
    pub fn new(function: BenchmarkFunction) -> Self {
        BenchProblem { function }
    }
}

impl Problem for BenchProblem {
    fn genome_spec(&self) -> GenomeSpec {
        GenomeSpec::Reals {
            bounds: self.function.bounds.clone(),
        }
    }

    fn evaluate(&self, genome: &Genome) -> Evaluation {
        match genome.real_values() {
            Some(values) => Evaluation::Fitness(self.function.evaluate(values)),
            None => Evaluation::Rejected,
        }
    }

    fn known_peaks(&self) -> Option<&[Peak]> {
        Some(&self.function.known_peaks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_maxima_point_values() {
        let f = BenchmarkFunction::equal_maxima();
        assert_eq!(f.evaluate(&[0.1]), 1.0);
        assert_eq!(f.evaluate(&[0.0]), 0.0);
        assert!(f.evaluate(&[0.2]) < 1e-10);
    }

    #[test]
    fn sphere_origin_is_the_unique_peak() {
        let f = BenchmarkFunction::sphere(2);
        assert_eq!(f.evaluate(&[0.0, 0.0]), 0.0);
        assert!(f.evaluate(&[0.5, 0.0]) < 0.0);
        let peaks = grid_peak_oracle(&f, 1000).unwrap();
        assert_eq!(peaks.len(), 1);
        assert!(peaks[0].location.iter().all(|v| v.abs() < 1e-6));
    }

    #[test]
    fn oracle_finds_the_five_equal_peaks() {
        let f = BenchmarkFunction::equal_maxima();
        let peaks = grid_peak_oracle(&f, 2000).unwrap();
        assert_eq!(peaks.len(), 5);
        for (peak, want) in peaks.iter().zip([0.1, 0.3, 0.5, 0.7, 0.9]) {
            assert!(
                (peak.location[0] - want).abs() < 1e-6,
                "peak at {} expected near {want}",
                peak.location[0]
            );
            assert!((peak.value - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn oracle_finds_four_equal_himmelblau_peaks() {
        let f = BenchmarkFunction::himmelblau();
        let peaks = grid_peak_oracle(&f, 1000).unwrap();
        assert_eq!(peaks.len(), 4);
        for p in &peaks {
            assert!(p.value.abs() < 1e-6, "peak value {} should be ~0", p.value);
        }
    }

    #[test]
    fn shipped_peak_lists_reproduce_under_the_oracle() {
        for f in builtin_suite() {
            let oracle = grid_peak_oracle(&f, if f.dimension == 1 { 4000 } else { 1200 }).unwrap();
            let range = f
                .bounds
                .iter()
                .map(|(lo, hi)| hi - lo)
                .fold(0.0f64, f64::max);
            for peak in &f.known_peaks {
                let hit = oracle.iter().find(|o| {
                    let d = o
                        .location
                        .iter()
                        .zip(&peak.location)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt();
                    d <= 1e-4 * range.max(1.0)
                });
                let hit = hit.unwrap_or_else(|| {
                    panic!("{}: shipped peak {:?} not found by oracle", f.name, peak.location)
                });
                assert!(
                    (hit.value - peak.value).abs() <= 1e-6,
                    "{}: value {} vs oracle {}",
                    f.name,
                    peak.value,
                    hit.value
                );
            }
        }
    }

    #[test]
    fn uneven_maxima_peaks_decrease() {
        let f = BenchmarkFunction::uneven_decreasing_maxima();
        assert_eq!(f.known_peaks.len(), 5);
        for w in f.known_peaks.windows(2) {
            assert!(w[0].value > w[1].value, "peak heights must decrease");
        }
        assert!((f.known_peaks[0].value - 1.0).abs() < 1e-3);
    }

    #[test]
    fn evaluators_are_pure() {
        for f in builtin_suite() {
            let x: Vec<f64> = f.bounds.iter().map(|(lo, hi)| 0.5 * (lo + hi) + 0.1).collect();
            let a = f.evaluate(&x);
            let b = f.evaluate(&x);
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn oracle_input_validation() {
        let f = BenchmarkFunction::sphere(3);
        assert!(grid_peak_oracle(&f, 1000).is_err(), "dimension 3 refused");
        let f = BenchmarkFunction::sphere(1);
        assert!(grid_peak_oracle(&f, 999).is_err(), "resolution too low");
    }

    #[test]
    fn lookup_by_name() {
        assert!(BenchmarkFunction::by_name("sphere", Some(5)).unwrap().dimension == 5);
        assert!(BenchmarkFunction::by_name("equal-maxima", None).is_ok());
        assert!(BenchmarkFunction::by_name("equal-maxima", Some(3)).is_err());
        assert!(BenchmarkFunction::by_name("nope", None).is_err());
    }
}
