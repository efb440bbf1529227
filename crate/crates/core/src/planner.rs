//! Measure-valued navigation planner for lens spaces.
//!
//! Between two points of the quotient the planner emits a *multipath*: a
//! weighted family of rotation paths upstairs on the sphere whose pointwise
//! evaluation, pushed down to the quotient, is a path of finite-support
//! probability measures from one Dirac endpoint to the other.
//!
//! For odd deck order `p` the family contains, for every deck translate `g.y`
//! of the target, the short rotation path weighted `(1/p) * beta / 2pi` and
//! the long one weighted `(1/p) * alpha / 2pi`, where `alpha + beta = 2pi`.
//! The `1/p` factor normalizes the total mass to one; per orbit point the two
//! weights add to exactly `1/p`, so evaluation at `t = 1` is the uniform
//! measure on the target orbit.
//!
//! For even `p = 2k` the same recipe runs on *lines* through the origin: the
//! index-two subgroup of squares indexes the target lines, line angles
//! satisfy `alpha + beta = pi`, weights are `(1/k) * beta / pi` and
//! `(1/k) * alpha / pi`, and the evaluation lifted to the sphere splits every
//! line into its two unit representatives with half the weight each.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

use crate::geometry::{
    self, line_rotation_paths, perturb, random_sphere_point, rotation_paths, LensAction,
    RotationPath, SpherePoint,
};
use crate::measure::{FiniteMeasure, LensSpace, PathSpace, SampledPath, SphereSpace};
use crate::DEFAULT_MERGE_TOL;

#[derive(Debug, Error, PartialEq)]
pub enum PlannerError {
    #[error("construction needs odd deck order, got {0}")]
    OddOrderRequired(u32),
    #[error("construction needs even deck order, got {0}")]
    EvenOrderRequired(u32),
    #[error("point dimension {got} does not match the action's ambient dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Which of the two constructions produced a multipath.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    /// Odd order: paths between sphere points, one pair per deck element.
    OddSphere,
    /// Even order: paths between lines, one pair per square deck element.
    EvenLine,
}

/// One weighted rotation path of a multipath.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPathEntry {
    pub weight: f64,
    pub path: RotationPath,
}

/// Weighted family of rotation paths; an unordered formal sum.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPath {
    action: LensAction,
    parity: Parity,
    entries: Vec<MultiPathEntry>,
}

impl MultiPath {
    pub fn action(&self) -> &LensAction {
        &self.action
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn entries(&self) -> &[MultiPathEntry] {
        &self.entries
    }

    /// Sum of the entry weights as emitted by the construction, before any
    /// renormalization; should be one up to roundoff.
    pub fn raw_mass(&self) -> f64 {
        self.entries.iter().map(|e| e.weight).sum()
    }

    /// Largest support size any evaluation may have: `2p` for the odd
    /// construction, `p` for the even one (both on sphere and quotient).
    pub fn support_limit(&self) -> usize {
        let p = self.action.order() as usize;
        match self.parity {
            Parity::OddSphere => 2 * p,
            Parity::EvenLine => p,
        }
    }

    /// Evaluation upstairs on the sphere. Even-order entries represent lines
    /// and are lifted to their two unit representatives with half the weight.
    pub fn eval_sphere(&self, t: f64) -> FiniteMeasure<SphereSpace> {
        let ambient = SphereSpace {
            dim: self.action.ambient_dim(),
        };
        let mut raw = Vec::with_capacity(2 * self.entries.len());
        for entry in &self.entries {
            let point = entry.path.eval(t);
            match self.parity {
                Parity::OddSphere => raw.push((point, entry.weight)),
                Parity::EvenLine => {
                    let opposite = point.iter().map(|c| -c).collect();
                    raw.push((point, entry.weight / 2.0));
                    raw.push((opposite, entry.weight / 2.0));
                }
            }
        }
        FiniteMeasure::normalize(ambient, raw, DEFAULT_MERGE_TOL)
            .expect("multipath evaluations carry positive mass")
    }

    /// Evaluation pushed down to the lens-space quotient.
    pub fn eval_lens(&self, t: f64) -> FiniteMeasure<LensSpace> {
        let ambient = LensSpace {
            action: self.action.clone(),
        };
        let raw = self
            .entries
            .iter()
            .map(|entry| (entry.path.eval(t), entry.weight))
            .collect();
        FiniteMeasure::normalize(ambient, raw, DEFAULT_MERGE_TOL)
            .expect("multipath evaluations carry positive mass")
    }

    /// The multipath as a measure on quotient-valued sampled paths, with the
    /// uniform metric over a `t_samples`-point grid as ground distance.
    pub fn path_measure(&self, t_samples: usize) -> FiniteMeasure<PathSpace<LensSpace>> {
        let ambient = PathSpace {
            base: LensSpace {
                action: self.action.clone(),
            },
            samples: t_samples,
        };
        let raw = self
            .entries
            .iter()
            .map(|entry| (SampledPath(entry.path.sample(t_samples)), entry.weight))
            .collect();
        FiniteMeasure::normalize(ambient, raw, DEFAULT_MERGE_TOL)
            .expect("multipath evaluations carry positive mass")
    }
}

fn check_dim(action: &LensAction, x: &SpherePoint) -> Result<(), PlannerError> {
    if x.dim() != action.ambient_dim() {
        return Err(PlannerError::DimensionMismatch {
            expected: action.ambient_dim(),
            got: x.dim(),
        });
    }
    Ok(())
}

/// Odd-order multipath from `x` to the orbit of `y`.
///
/// Zero-weight entries (exact) are dropped, so the entry count is at most
/// `2p` and evaluation at `t = 1` is uniform on the orbit of `y`.
pub fn sphere_multipath(
    action: &LensAction,
    x: &SpherePoint,
    y: &SpherePoint,
) -> Result<MultiPath, PlannerError> {
    if action.order() % 2 == 0 {
        return Err(PlannerError::OddOrderRequired(action.order()));
    }
    check_dim(action, x)?;
    check_dim(action, y)?;
    let p = f64::from(action.order());
    let mut entries = Vec::with_capacity(2 * action.order() as usize);
    for j in 0..i64::from(action.order()) {
        let target = action.act_point(j, y);
        let (short, long) = rotation_paths(x, &target);
        let alpha = short.angle();
        let beta = long.angle();
        debug_assert!((alpha + beta - TAU).abs() < 1e-12);
        for (weight, path) in [(beta / (p * TAU), short), (alpha / (p * TAU), long)] {
            if weight != 0.0 {
                entries.push(MultiPathEntry { weight, path });
            }
        }
    }
    Ok(MultiPath {
        action: action.clone(),
        parity: Parity::OddSphere,
        entries,
    })
}

/// Even-order multipath from the line of `x` to the lines over the orbit of
/// `y`, indexed by the subgroup of squares.
pub fn line_multipath(
    action: &LensAction,
    x: &SpherePoint,
    y: &SpherePoint,
) -> Result<MultiPath, PlannerError> {
    if action.order() % 2 != 0 {
        return Err(PlannerError::EvenOrderRequired(action.order()));
    }
    check_dim(action, x)?;
    check_dim(action, y)?;
    let k = i64::from(action.order() / 2);
    let mut entries = Vec::with_capacity(action.order() as usize);
    for h in 0..k {
        let gy = action.act_point(2 * h, y);
        // Representative of the target line on the same side as x.
        let z = if x.inner(&gy) >= 0.0 { gy } else { gy.antipode() };
        let (short, long) = line_rotation_paths(x, &z);
        let alpha = short.angle();
        let beta = long.angle();
        debug_assert!((alpha + beta - PI).abs() < 1e-12);
        for (weight, path) in [
            (beta / (k as f64 * PI), short),
            (alpha / (k as f64 * PI), long),
        ] {
            if weight != 0.0 {
                entries.push(MultiPathEntry { weight, path });
            }
        }
    }
    Ok(MultiPath {
        action: action.clone(),
        parity: Parity::EvenLine,
        entries,
    })
}

/// Navigation between quotient points given by orbit representatives:
/// dispatches on the parity of the deck order.
pub fn lens_navigation(
    action: &LensAction,
    x: &SpherePoint,
    y: &SpherePoint,
) -> Result<MultiPath, PlannerError> {
    if action.order() % 2 == 0 {
        line_multipath(action, x, y)
    } else {
        sphere_multipath(action, x, y)
    }
}

/// Deck translates `g` for which replacing a representative by its
/// `g`-translate provably reproduces the same quotient path of measures.
///
/// Odd order: every translate. Even order `2k`: the squares always; the odd
/// coset too when `k` is odd, because only then does the coset sweep out the
/// same set of target lines. For `p = 0 mod 4` the odd coset genuinely
/// changes the family of lines and is excluded.
pub fn stable_translates(p: u32) -> Vec<i64> {
    if p % 2 == 1 {
        (0..i64::from(p)).collect()
    } else if (p / 2) % 2 == 1 {
        (0..i64::from(p)).collect()
    } else {
        (0..i64::from(p)).step_by(2).collect()
    }
}

const ENDPOINT_TOL: f64 = 1e-9;
const MASS_TOL: f64 = 1e-9;
const REPRESENTATIVE_TOL: f64 = 1e-9;

/// Configuration for the randomized planner verifier.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifierConfig {
    pub samples: usize,
    pub seed: u64,
    /// Angular margin keeping continuity samples away from degenerate
    /// configurations.
    pub margin: f64,
    /// Size of the random perturbations used for the continuity modulus.
    pub perturbation: f64,
    /// Uniform time grid resolution for all sampled checks.
    pub t_samples: usize,
    /// Pairs probed per offset when approaching degenerate configurations.
    pub probe_pairs: usize,
}

impl VerifierConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        VerifierConfig {
            samples,
            seed,
            margin: 0.1,
            perturbation: 1e-3,
            t_samples: 21,
            probe_pairs: 10,
        }
    }
}

/// Continuity statistics away from degenerate angles.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ContinuityReport {
    pub margin: f64,
    pub perturbation: f64,
    pub pairs_used: usize,
    /// Max over admissible pairs of `W1(path measures) / (d(x,x') + d(y,y'))`.
    pub max_ratio: f64,
}

/// Unasserted ratios on pairs approaching a degenerate configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DegeneracyProbe {
    /// Distance from the exactly degenerate target.
    pub offset: f64,
    pub pairs: usize,
    pub max_ratio: f64,
}

/// Randomized verification report; `failures` lists violated invariants.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PlannerReport {
    pub order: u32,
    pub complex_dim: usize,
    pub sphere_dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub t_samples: usize,
    pub max_endpoint_error: f64,
    pub max_mass_error: f64,
    pub max_support: usize,
    pub support_limit: usize,
    /// Max transport discrepancy between quotient evaluations from different
    /// orbit representatives, over the provably stable translates.
    pub max_representative_discrepancy: f64,
    pub translates_checked: usize,
    pub continuity: ContinuityReport,
    pub degeneracy_probes: Vec<DegeneracyProbe>,
    pub failures: Vec<String>,
}

#[derive(Debug, Default, Clone)]
struct SampleStats {
    endpoint: f64,
    mass: f64,
    support: usize,
    representative: f64,
    continuity: Option<f64>,
}

fn t_grid(count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| i as f64 / (count - 1) as f64)
        .collect()
}

/// Transport discrepancy between two quotient measures, cheap path first.
fn lens_discrepancy(
    a: &FiniteMeasure<LensSpace>,
    b: &FiniteMeasure<LensSpace>,
) -> f64 {
    let bound = a
        .transport_cost_upper_bound(b)
        .expect("same quotient ambient");
    if bound <= 1e-10 {
        bound
    } else {
        a.wasserstein1(b).expect("same quotient ambient")
    }
}

fn margin_ok(action: &LensAction, x: &SpherePoint, y: &SpherePoint, margin: f64) -> bool {
    if action.is_even() {
        let k = i64::from(action.order() / 2);
        (0..k).all(|h| {
            let gy = action.act_point(2 * h, y);
            let line_angle = x.inner(&gy).abs().clamp(-1.0, 1.0).acos();
            line_angle >= margin
        })
    } else {
        (0..i64::from(action.order())).all(|j| {
            let a = geometry::angle(x, &action.act_point(j, y));
            a >= margin && a <= PI - margin
        })
    }
}

fn continuity_ratio(
    action: &LensAction,
    x: &SpherePoint,
    y: &SpherePoint,
    eps: f64,
    t_samples: usize,
    rng: &mut ChaCha8Rng,
) -> Option<f64> {
    let xp = perturb(x, eps, rng);
    let yp = perturb(y, eps, rng);
    let denom = action.quotient_dist(x.coords(), xp.coords())
        + action.quotient_dist(y.coords(), yp.coords());
    if denom < 1e-12 {
        return None;
    }
    let base = lens_navigation(action, x, y).ok()?;
    let moved = lens_navigation(action, &xp, &yp).ok()?;
    // Reported statistic only: the floating-point transport value is
    // accurate to roundoff and vastly cheaper than the certified one.
    let w = base
        .path_measure(t_samples)
        .wasserstein1_approx(&moved.path_measure(t_samples))
        .ok()?;
    Some(w / denom)
}

fn sample_stats(
    action: &LensAction,
    config: &VerifierConfig,
    index: u64,
    translates: &[i64],
) -> SampleStats {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    let dim = action.ambient_dim();
    let x = random_sphere_point(dim, &mut rng);
    let y = random_sphere_point(dim, &mut rng);
    let ambient = LensSpace {
        action: action.clone(),
    };

    let multipath = lens_navigation(action, &x, &y).expect("valid inputs");
    let mut stats = SampleStats {
        mass: (multipath.raw_mass() - 1.0).abs(),
        ..Default::default()
    };

    let start = FiniteMeasure::dirac(ambient.clone(), x.coords().to_vec());
    let end = FiniteMeasure::dirac(ambient.clone(), y.coords().to_vec());
    let w0 = multipath.eval_lens(0.0).wasserstein1(&start).unwrap();
    let w1 = multipath.eval_lens(1.0).wasserstein1(&end).unwrap();
    stats.endpoint = w0.max(w1);

    let grid = t_grid(config.t_samples);
    let evals: Vec<FiniteMeasure<LensSpace>> =
        grid.iter().map(|&t| multipath.eval_lens(t)).collect();
    stats.support = evals.iter().map(FiniteMeasure::support_size).max().unwrap();

    for &g in translates {
        if g == 0 {
            continue;
        }
        let from_gx = lens_navigation(action, &action.act_point(g, &x), &y).unwrap();
        let to_gy = lens_navigation(action, &x, &action.act_point(g, &y)).unwrap();
        for (t, eval) in grid.iter().zip(&evals) {
            let d1 = lens_discrepancy(&from_gx.eval_lens(*t), eval);
            let d2 = lens_discrepancy(&to_gy.eval_lens(*t), eval);
            stats.representative = stats.representative.max(d1).max(d2);
        }
    }

    if margin_ok(action, &x, &y, config.margin) {
        stats.continuity = continuity_ratio(
            action,
            &x,
            &y,
            config.perturbation,
            config.t_samples,
            &mut rng,
        );
    }
    stats
}

/// Runs the randomized planner checks for one lens space.
///
/// Endpoint, mass, support and representative-independence violations are
/// recorded in `failures`; the continuity modulus and the degeneracy probes
/// are reported without assertion. Per-sample generators are seeded
/// independently, so the report does not depend on the worker count.
pub fn verify_planner(action: &LensAction, config: &VerifierConfig) -> PlannerReport {
    let translates = stable_translates(action.order());
    let stats: Vec<SampleStats> = (0..config.samples as u64)
        .into_par_iter()
        .map(|i| sample_stats(action, config, i, &translates))
        .collect();

    let max_endpoint_error = stats.iter().map(|s| s.endpoint).fold(0.0, f64::max);
    let max_mass_error = stats.iter().map(|s| s.mass).fold(0.0, f64::max);
    let max_support = stats.iter().map(|s| s.support).max().unwrap_or(0);
    let max_representative_discrepancy =
        stats.iter().map(|s| s.representative).fold(0.0, f64::max);
    let continuity_ratios: Vec<f64> = stats.iter().filter_map(|s| s.continuity).collect();
    let continuity = ContinuityReport {
        margin: config.margin,
        perturbation: config.perturbation,
        pairs_used: continuity_ratios.len(),
        max_ratio: continuity_ratios.iter().copied().fold(0.0, f64::max),
    };

    let probe_offsets: [f64; 3] = [1e-2, 1e-3, 1e-4];
    let degeneracy_probes = probe_offsets
        .iter()
        .map(|&offset| {
            let ratios: Vec<f64> = (0..config.probe_pairs as u64)
                .into_par_iter()
                .filter_map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed_0ff5e7);
                    rng.set_stream((offset.to_bits() & 0xffff) ^ i);
                    let x = random_sphere_point(action.ambient_dim(), &mut rng);
                    // Target chosen so one translate is exactly degenerate,
                    // then nudged off by `offset`.
                    let degenerate = if action.is_even() {
                        action.act_point(-2, &x)
                    } else {
                        let j = i64::from(action.order() / 2);
                        action.act_point(-j, &x.antipode())
                    };
                    let y = perturb(&degenerate, offset, &mut rng);
                    continuity_ratio(
                        action,
                        &x,
                        &y,
                        config.perturbation,
                        config.t_samples,
                        &mut rng,
                    )
                })
                .collect();
            DegeneracyProbe {
                offset,
                pairs: ratios.len(),
                max_ratio: ratios.iter().copied().fold(0.0, f64::max),
            }
        })
        .collect();

    let support_limit = if action.is_even() {
        action.order() as usize
    } else {
        2 * action.order() as usize
    };
    let mut failures = Vec::new();
    if max_endpoint_error > ENDPOINT_TOL {
        failures.push(format!(
            "endpoint error {max_endpoint_error:.3e} exceeds {ENDPOINT_TOL:.0e}"
        ));
    }
    if max_mass_error > MASS_TOL {
        failures.push(format!(
            "mass error {max_mass_error:.3e} exceeds {MASS_TOL:.0e}"
        ));
    }
    if max_support > support_limit {
        failures.push(format!(
            "support {max_support} exceeds the limit {support_limit}"
        ));
    }
    if max_representative_discrepancy > REPRESENTATIVE_TOL {
        failures.push(format!(
            "representative discrepancy {max_representative_discrepancy:.3e} exceeds {REPRESENTATIVE_TOL:.0e}"
        ));
    }
    if !continuity.max_ratio.is_finite() {
        failures.push("continuity modulus is not finite".to_string());
    }

    PlannerReport {
        order: action.order(),
        complex_dim: action.complex_dim(),
        sphere_dim: action.sphere_dim(),
        samples: config.samples,
        seed: config.seed,
        t_samples: config.t_samples,
        max_endpoint_error,
        max_mass_error,
        max_support,
        support_limit,
        max_representative_discrepancy,
        translates_checked: translates.len(),
        continuity,
        degeneracy_probes,
        failures,
    }
}
