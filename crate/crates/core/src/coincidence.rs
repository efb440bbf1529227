//! Borsuk-Ulam coincidence harness.
//!
//! Odd spheres carrying free cyclic rotation actions are triangulated as
//! joins of regular polygons. A real-valued piecewise-linear function on
//! such a sphere has a *coincidence point* when it is constant on some
//! orbit; whether any exists is decided exactly, one rational feasibility
//! problem per top simplex. On top of the exact decision sit a randomized
//! search for coincidence-free functions (which provably must fail in the
//! Borsuk-Ulam regime) and the two conversions between coincidence-free
//! functions and finite-support measure sections of the quotient map.

use num::{BigRational, FromPrimitive, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::TAU;
use thiserror::Error;

use crate::geometry::euclid;
use crate::groups::FiniteGroup;
use crate::lp::{self, LpOutcome};
use crate::measure::{Euclidean, FiniteMeasure};
use crate::simplicial::{barycentric_subdivision, join, GComplexAction, SimplicialComplex};
use crate::DEFAULT_MERGE_TOL;

/// Tolerance for detecting ties among fiber values or section weights.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum CoincidenceError {
    #[error("sphere parameters out of range: {0}")]
    BadSphere(String),
    #[error("function has {got} values for {expected} vertices")]
    BadFunction { expected: usize, got: usize },
    #[error("coincidence detected on the mesh at orbit {mesh_index}")]
    EmptinessViolated { mesh_index: usize },
    #[error("support {support} at mesh orbit {mesh_index} exceeds the bound {bound}")]
    SupportBound {
        mesh_index: usize,
        support: usize,
        bound: usize,
    },
}

/// A triangulated odd sphere with a free simplicial rotation action.
///
/// The complex is the join of `k` regular `(N p)`-gons, polygon `j` living
/// in coordinates `2j, 2j+1`; the generator of the cyclic group of order
/// `p` advances every polygon by `N` vertices, which is the rotation by
/// `2 pi / p` in each plane.
#[derive(Debug, Clone)]
pub struct FreeSphereComplex {
    action: GComplexAction,
    coords: Vec<Vec<f64>>,
    k: usize,
    p: usize,
    steps: usize,
}

impl FreeSphereComplex {
    pub fn build_sphere(k: usize, p: usize, steps: usize) -> Result<Self, CoincidenceError> {
        if k < 1 || p < 2 || steps < 1 || steps * p < 3 {
            return Err(CoincidenceError::BadSphere(format!(
                "k = {k}, p = {p}, N = {steps}"
            )));
        }
        let ngon = steps * p;
        let polygon = |j: usize| -> SimplicialComplex {
            let edges: Vec<Vec<usize>> = (0..ngon).map(|i| vec![i, (i + 1) % ngon]).collect();
            let labels = (0..ngon).map(|i| format!("s{j}v{i}")).collect();
            SimplicialComplex::from_simplices_with_labels(labels, &edges)
                .expect("polygon circles are small complexes")
        };
        let mut complex = polygon(0);
        for j in 1..k {
            complex = join(&complex, &polygon(j)).map_err(|e| {
                CoincidenceError::BadSphere(format!("join construction failed: {e}"))
            })?;
        }
        let mut coords = vec![vec![0.0; 2 * k]; k * ngon];
        for j in 0..k {
            for i in 0..ngon {
                let theta = TAU * i as f64 / ngon as f64;
                coords[j * ngon + i][2 * j] = theta.cos();
                coords[j * ngon + i][2 * j + 1] = theta.sin();
            }
        }
        let group = FiniteGroup::cyclic(p);
        let perms: Vec<Vec<usize>> = (0..p)
            .map(|g| {
                (0..k * ngon)
                    .map(|v| {
                        let (j, i) = (v / ngon, v % ngon);
                        j * ngon + (i + g * steps) % ngon
                    })
                    .collect()
            })
            .collect();
        let action = GComplexAction::new(group, complex, perms)
            .map_err(|e| CoincidenceError::BadSphere(format!("invalid action: {e}")))?;
        assert!(action.is_free(), "polygon rotations act freely");
        Ok(FreeSphereComplex {
            action,
            coords,
            k,
            p,
            steps,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        self.action.complex()
    }

    pub fn action(&self) -> &GComplexAction {
        &self.action
    }

    pub fn order(&self) -> usize {
        self.p
    }

    pub fn join_factors(&self) -> usize {
        self.k
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Topological dimension of the sphere, `2k - 1`.
    pub fn sphere_dim(&self) -> usize {
        2 * self.k - 1
    }

    pub fn ambient_dim(&self) -> usize {
        2 * self.k
    }

    pub fn vertex_coords(&self, v: usize) -> &[f64] {
        &self.coords[v]
    }

    /// Reduced homology concentrated in the top degree with rank one and no
    /// torsion anywhere: the homology signature of a sphere.
    pub fn is_homology_sphere(&self) -> bool {
        let groups = crate::simplicial::homology(self.complex());
        let top = self.sphere_dim();
        groups.len() == top + 1
            && groups.iter().enumerate().all(|(d, g)| {
                g.torsion.is_empty() && g.betti == usize::from(d == top)
            })
    }

    /// Realization of a barycentric combination of vertices.
    pub fn realize(&self, weights: &[(usize, f64)]) -> Vec<f64> {
        let mut point = vec![0.0; self.ambient_dim()];
        for &(v, w) in weights {
            for (c, x) in point.iter_mut().zip(&self.coords[v]) {
                *c += w * x;
            }
        }
        point
    }

    /// The group translate of a barycentric combination.
    pub fn translate_weights(&self, g: usize, weights: &[(usize, f64)]) -> Vec<(usize, f64)> {
        let perm = self.action.permutation(g);
        let mut out: Vec<(usize, f64)> = weights.iter().map(|&(v, w)| (perm[v], w)).collect();
        out.sort_by_key(|&(v, _)| v);
        out
    }

    /// Affine evaluation of a vertex function at a barycentric combination.
    pub fn eval(&self, f: &PLFunction, weights: &[(usize, f64)]) -> f64 {
        weights.iter().map(|&(v, w)| w * f.0[v]).sum()
    }

    /// The ambient rotation realizing the group element `g` on points.
    pub fn rotate_point(&self, g: usize, point: &[f64]) -> Vec<f64> {
        let angle = TAU * (g % self.p) as f64 / self.p as f64;
        let (sin, cos) = angle.sin_cos();
        let mut out = point.to_vec();
        for j in 0..self.k {
            let (a, b) = (point[2 * j], point[2 * j + 1]);
            out[2 * j] = cos * a - sin * b;
            out[2 * j + 1] = sin * a + cos * b;
        }
        out
    }

    /// Distance between the images of two points in the quotient.
    pub fn quotient_dist(&self, a: &[f64], b: &[f64]) -> f64 {
        (0..self.p)
            .map(|g| euclid(&self.rotate_point(g, a), b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest difference of `f` over the orbit of a barycentric point.
    pub fn orbit_spread(&self, f: &PLFunction, weights: &[(usize, f64)]) -> f64 {
        let values: Vec<f64> = (0..self.p)
            .map(|g| self.eval(f, &self.translate_weights(g, weights)))
            .collect();
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }

    fn check_function(&self, f: &PLFunction) -> Result<(), CoincidenceError> {
        if f.0.len() != self.coords.len() {
            return Err(CoincidenceError::BadFunction {
                expected: self.coords.len(),
                got: f.0.len(),
            });
        }
        Ok(())
    }

    fn sorted_facets(&self) -> Vec<Vec<usize>> {
        let mut facets = self.complex().facets();
        facets.sort();
        facets
    }
}

/// A piecewise-linear function: one value per vertex, affine on simplices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PLFunction(pub Vec<f64>);

/// Outcome of the exact coincidence decision.
#[derive(Debug, Clone, PartialEq)]
pub enum CertificateStatus {
    Empty,
    Witness {
        simplex: Vec<usize>,
        barycentric: Vec<f64>,
    },
}

/// Exact per-simplex record of where orbit-constant points can live.
#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceCertificate {
    pub status: CertificateStatus,
    /// Top simplices whose closed span contains a coincidence point.
    pub feasible_simplices: Vec<Vec<usize>>,
    pub simplices_checked: usize,
}

impl CoincidenceCertificate {
    pub fn is_empty(&self) -> bool {
        matches!(self.status, CertificateStatus::Empty)
    }
}

/// Decides exactly whether `f` is constant on some orbit.
///
/// A point of the closed simplex `sigma` with barycentric coordinates
/// `lambda` maps under `g` to the point of `g sigma` with the same
/// coordinates, so each condition `f(g x) = f(x)` is affine in `lambda`.
/// Per top simplex that is a rational linear feasibility problem, solved
/// with exact arithmetic on the (exactly representable) vertex values.
pub fn coincidence_set(
    x: &FreeSphereComplex,
    f: &PLFunction,
) -> Result<CoincidenceCertificate, CoincidenceError> {
    x.check_function(f)?;
    let facets = x.sorted_facets();
    let rational = |v: f64| BigRational::from_f64(v).expect("finite vertex values");
    let outcomes: Vec<Option<Vec<BigRational>>> = facets
        .par_iter()
        .map(|facet| {
            let n = facet.len();
            let mut rows: Vec<Vec<BigRational>> = vec![vec![rational(1.0); n]];
            let mut rhs = vec![rational(1.0)];
            for g in 1..x.order() {
                let perm = x.action.permutation(g);
                let row: Vec<BigRational> = facet
                    .iter()
                    .map(|&v| rational(f.0[perm[v]]) - rational(f.0[v]))
                    .collect();
                rows.push(row);
                rhs.push(rational(0.0));
            }
            lp::feasible_point(&rows, &rhs)
        })
        .collect();
    let mut feasible_simplices = Vec::new();
    let mut status = CertificateStatus::Empty;
    for (facet, outcome) in facets.iter().zip(&outcomes) {
        if let Some(point) = outcome {
            if status == CertificateStatus::Empty {
                status = CertificateStatus::Witness {
                    simplex: facet.clone(),
                    barycentric: point
                        .iter()
                        .map(|q| q.to_f64().expect("barycentric coordinate"))
                        .collect(),
                };
            }
            feasible_simplices.push(facet.clone());
        }
    }
    Ok(CoincidenceCertificate {
        status,
        feasible_simplices,
        simplices_checked: facets.len(),
    })
}

/// Greatest lower bound on the orbit spread attainable inside one facet:
/// the minimum over the closed simplex of the largest translate deviation,
/// computed as a small linear program. Zero exactly when the facet contains
/// a coincidence point.
fn facet_spread(x: &FreeSphereComplex, f: &PLFunction, facet: &[usize]) -> f64 {
    let n = facet.len();
    let deviations = x.order() - 1;
    let vars = n + 1 + 2 * deviations;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(1 + 2 * deviations);
    let mut rhs: Vec<f64> = Vec::with_capacity(1 + 2 * deviations);
    let mut simplex_row = vec![0.0; vars];
    simplex_row[..n].fill(1.0);
    rows.push(simplex_row);
    rhs.push(1.0);
    for g in 1..x.order() {
        let perm = x.action.permutation(g);
        let delta: Vec<f64> = facet.iter().map(|&v| f.0[perm[v]] - f.0[v]).collect();
        // e_g + s - u_g = 0 and s - e_g - w_g = 0 encode |e_g| <= s.
        let mut plus = vec![0.0; vars];
        let mut minus = vec![0.0; vars];
        plus[..n].copy_from_slice(&delta);
        for (slot, d) in minus[..n].iter_mut().zip(&delta) {
            *slot = -d;
        }
        plus[n] = 1.0;
        minus[n] = 1.0;
        plus[n + 1 + 2 * (g - 1)] = -1.0;
        minus[n + 2 + 2 * (g - 1)] = -1.0;
        rows.push(plus);
        rows.push(minus);
        rhs.push(0.0);
        rhs.push(0.0);
    }
    let mut cost = vec![0.0; vars];
    cost[n] = 1.0;
    match lp::minimize(&cost, &rows, &rhs) {
        LpOutcome::Optimal { value, .. } => value.max(0.0),
        outcome => unreachable!("facet spread program is feasible and bounded: {outcome:?}"),
    }
}

/// Minimum over all facets: positive exactly when `f` is coincidence-free.
pub fn min_spread(x: &FreeSphereComplex, f: &PLFunction) -> Result<f64, CoincidenceError> {
    x.check_function(f)?;
    let facets = x.sorted_facets();
    Ok(facets
        .par_iter()
        .map(|facet| facet_spread(x, f, facet))
        .reduce(|| f64::INFINITY, f64::min))
}

/// Report of the randomized search for a coincidence-free function.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    /// A certified coincidence-free function, when one was found.
    pub found: Option<PLFunction>,
    /// Best candidate overall (the found one, or the best failing one).
    pub best: PLFunction,
    /// Exact-arithmetic-certifiable spread proxy of the best candidate.
    pub best_spread: f64,
    pub restarts: usize,
    pub iterations: usize,
}

struct RestartOutcome {
    values: PLFunction,
    spread: f64,
    certified_empty: bool,
}

fn run_restart(
    x: &FreeSphereComplex,
    iterations: usize,
    seed: u64,
    stream: u64,
) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let vertex_count = x.complex().vertex_count();
    let facets = x.sorted_facets();
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for (i, facet) in facets.iter().enumerate() {
        for &v in facet {
            touching[v].push(i);
        }
    }
    let mut values: Vec<f64> = (0..vertex_count).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut spreads: Vec<f64> = facets
        .iter()
        .map(|facet| facet_spread(x, &PLFunction(values.clone()), facet))
        .collect();
    let objective = |s: &[f64]| s.iter().copied().fold(f64::INFINITY, f64::min);
    let mut current = objective(&spreads);
    let mut best_values = values.clone();
    let mut best = current;
    let t_start: f64 = 0.3;
    let t_end: f64 = 0.005;
    for step in 0..iterations {
        let t = t_start * (t_end / t_start).powf(step as f64 / iterations.max(1) as f64);
        let v = rng.gen_range(0..vertex_count);
        let old_value = values[v];
        values[v] = (old_value + rng.gen_range(-1.0..1.0) * (0.1 + t)).clamp(-1.0, 1.0);
        let f = PLFunction(values.clone());
        let old_spreads: Vec<(usize, f64)> =
            touching[v].iter().map(|&i| (i, spreads[i])).collect();
        for &i in &touching[v] {
            spreads[i] = facet_spread(x, &f, &facets[i]);
        }
        let proposed = objective(&spreads);
        let accept = proposed >= current
            || rng.gen_range(0.0..1.0) < ((proposed - current) / t).exp();
        if accept {
            current = proposed;
            if current > best {
                best = current;
                best_values = values.clone();
            }
        } else {
            values[v] = old_value;
            for (i, s) in old_spreads {
                spreads[i] = s;
            }
        }
    }
    let f = PLFunction(best_values);
    let certified_empty = best > 1e-9
        && coincidence_set(x, &f)
            .map(|c| c.is_empty())
            .unwrap_or(false);
    RestartOutcome {
        values: f,
        spread: best,
        certified_empty,
    }
}

/// Simulated-annealing search for a coincidence-free function: maximizes
/// the minimal facet spread, then certifies the best candidate of each
/// restart exactly. Restarts are independently seeded and run in parallel;
/// the first certified restart (in index order) supplies `found`.
pub fn search_coincidence_free(
    x: &FreeSphereComplex,
    restarts: usize,
    iterations: usize,
    seed: u64,
) -> SearchReport {
    let outcomes: Vec<RestartOutcome> = (0..restarts as u64)
        .into_par_iter()
        .map(|stream| run_restart(x, iterations, seed, stream))
        .collect();
    let found = outcomes
        .iter()
        .find(|o| o.certified_empty)
        .map(|o| o.values.clone());
    let best = outcomes
        .iter()
        .max_by(|a, b| a.spread.partial_cmp(&b.spread).expect("finite spreads"))
        .expect("at least one restart");
    SearchReport {
        found,
        best: best.values.clone(),
        best_spread: best.spread,
        restarts,
        iterations,
    }
}

/// One sample point of the quotient: a barycentric combination of sphere
/// vertices representing its orbit.
#[derive(Debug, Clone)]
pub struct MeshPoint {
    pub weights: Vec<(usize, f64)>,
    pub point: Vec<f64>,
}

/// A finite sample of the quotient space: one representative per orbit of
/// the vertices of the `level`-fold barycentric subdivision.
#[derive(Debug, Clone)]
pub struct QuotientMesh {
    pub level: u32,
    pub reps: Vec<MeshPoint>,
}

impl QuotientMesh {
    /// Level 0 samples the vertex orbits; each further level subdivides
    /// barycentrically, adding the barycenters of all current simplices.
    pub fn new(x: &FreeSphereComplex, level: u32) -> QuotientMesh {
        let mut complex = x.complex().clone();
        let mut weights: Vec<Vec<(usize, f64)>> = (0..complex.vertex_count())
            .map(|v| vec![(v, 1.0)])
            .collect();
        let mut perms: Vec<Vec<usize>> = (0..x.order())
            .map(|g| x.action().permutation(g).to_vec())
            .collect();
        for _ in 0..level {
            let sd = barycentric_subdivision(&complex);
            let index_of: HashMap<Vec<usize>, usize> = sd
                .barycenters
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i))
                .collect();
            let new_weights: Vec<Vec<(usize, f64)>> = sd
                .barycenters
                .iter()
                .map(|simplex| {
                    let mut acc: HashMap<usize, f64> = HashMap::new();
                    for &prev in simplex {
                        for &(v, w) in &weights[prev] {
                            *acc.entry(v).or_insert(0.0) += w / simplex.len() as f64;
                        }
                    }
                    let mut out: Vec<(usize, f64)> = acc.into_iter().collect();
                    out.sort_by_key(|&(v, _)| v);
                    out
                })
                .collect();
            let new_perms: Vec<Vec<usize>> = perms
                .iter()
                .map(|perm| {
                    sd.barycenters
                        .iter()
                        .map(|simplex| {
                            let mut image: Vec<usize> =
                                simplex.iter().map(|&u| perm[u]).collect();
                            image.sort_unstable();
                            index_of[&image]
                        })
                        .collect()
                })
                .collect();
            complex = sd.complex;
            weights = new_weights;
            perms = new_perms;
        }
        // Group the final vertices into orbits; freeness makes every orbit
        // have exactly p members.
        let key = |w: &[(usize, f64)]| -> Vec<(usize, u64)> {
            w.iter().map(|&(v, x)| (v, x.to_bits())).collect()
        };
        let mut orbit_of: HashMap<Vec<(usize, u64)>, usize> = HashMap::new();
        let mut reps: Vec<MeshPoint> = Vec::new();
        for w in &weights {
            if orbit_of.contains_key(&key(w)) {
                continue;
            }
            let orbit_index = reps.len();
            let mut members = 0;
            for perm in &perms {
                let mut translated: Vec<(usize, f64)> =
                    w.iter().map(|&(v, x)| (perm[v], x)).collect();
                translated.sort_by_key(|&(v, _)| v);
                if orbit_of.insert(key(&translated), orbit_index).is_none() {
                    members += 1;
                }
            }
            assert_eq!(members, x.order(), "free actions have full orbits");
            reps.push(MeshPoint {
                weights: w.clone(),
                point: x.realize(w),
            });
        }
        QuotientMesh { level, reps }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// The section measure attached to one mesh orbit.
#[derive(Debug, Clone)]
pub struct SectionEntry {
    pub mesh_index: usize,
    /// `f` evaluated on the fiber, indexed by the group element.
    pub fiber_values: Vec<f64>,
    /// Group elements realizing the fiber maximum.
    pub splus: Vec<usize>,
    /// Distance weights of the maximizers, aligned with `splus`.
    pub lambdas: Vec<f64>,
    pub measure: FiniteMeasure<Euclidean>,
}

/// A finite-support measure over each sampled fiber of the quotient map.
#[derive(Debug, Clone)]
pub struct SectionData {
    /// Maximal allowed support per fiber, one less than the group order.
    pub support_bound: usize,
    pub entries: Vec<SectionEntry>,
}

/// Builds the measure-valued section of the quotient map induced by a
/// coincidence-free function: on each sampled fiber, weight the maximizers
/// of `f` by their distance to the closed complement of the maximizer set.
///
/// Fibers whose maximizer set is degenerate (all weights vanish because a
/// tie put every maximizer into the complement's closure) fall back to the
/// uniform measure on the maximizers, the symmetric limit of the weighting.
pub fn section_from_function(
    x: &FreeSphereComplex,
    f: &PLFunction,
    mesh: &QuotientMesh,
) -> Result<SectionData, CoincidenceError> {
    x.check_function(f)?;
    let p = x.order();
    let fibers: Vec<(Vec<Vec<f64>>, Vec<f64>, Vec<usize>)> = mesh
        .reps
        .iter()
        .map(|rep| {
            let realizations: Vec<Vec<f64>> = (0..p)
                .map(|g| x.realize(&x.translate_weights(g, &rep.weights)))
                .collect();
            let values: Vec<f64> = (0..p)
                .map(|g| x.eval(f, &x.translate_weights(g, &rep.weights)))
                .collect();
            let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let splus: Vec<usize> =
                (0..p).filter(|&g| values[g] >= max - TIE_TOL).collect();
            (realizations, values, splus)
        })
        .collect();
    for (mesh_index, (_, _, splus)) in fibers.iter().enumerate() {
        if splus.len() == p {
            return Err(CoincidenceError::EmptinessViolated { mesh_index });
        }
    }
    // The sampled closed complement of the maximizer sets: every fiber point
    // outside its S+, plus the S+ points of tied fibers (the closure adds
    // them, because nearby fibers exclude them).
    let mut complement: Vec<Vec<f64>> = Vec::new();
    for (realizations, _, splus) in &fibers {
        for g in 0..p {
            if !splus.contains(&g) || splus.len() >= 2 {
                complement.push(realizations[g].clone());
            }
        }
    }
    let ambient = Euclidean {
        dim: x.ambient_dim(),
    };
    let mut entries = Vec::with_capacity(mesh.len());
    for (mesh_index, (realizations, values, splus)) in fibers.into_iter().enumerate() {
        let lambdas: Vec<f64> = splus
            .iter()
            .map(|&g| {
                complement
                    .iter()
                    .map(|y| euclid(&realizations[g], y))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let total: f64 = lambdas.iter().sum();
        let atoms: Vec<(Vec<f64>, f64)> = if total <= TIE_TOL {
            splus
                .iter()
                .map(|&g| (realizations[g].clone(), 1.0 / splus.len() as f64))
                .collect()
        } else {
            splus
                .iter()
                .zip(&lambdas)
                .map(|(&g, &l)| (realizations[g].clone(), l / total))
                .collect()
        };
        let measure = FiniteMeasure::normalize(ambient.clone(), atoms, DEFAULT_MERGE_TOL)
            .expect("maximizer sets are nonempty")
            .with_support_bound(p - 1)
            .map_err(|_| CoincidenceError::SupportBound {
                mesh_index,
                support: splus.len(),
                bound: p - 1,
            })?;
        entries.push(SectionEntry {
            mesh_index,
            fiber_values: values,
            splus,
            lambdas,
            measure,
        });
    }
    Ok(SectionData {
        support_bound: p - 1,
        entries,
    })
}

/// The function recovered from a section: distance to the set of
/// heaviest-weight section atoms, with the per-fiber spread it achieves on
/// the mesh.
#[derive(Debug, Clone)]
pub struct SectionFunction {
    /// The sampled zero set: heaviest atoms of every fiber measure.
    pub zero_set: Vec<Vec<f64>>,
    /// Distance to the zero set at each sphere vertex (a PL proxy).
    pub vertex_function: PLFunction,
    /// Minimum over mesh fibers of (max - min) of the true distance values.
    pub min_fiber_spread: f64,
}

/// Inverts a section into a real function: collect the maximal-weight atom
/// set `A`, take `f = dist(., A)`, and verify that no sampled fiber is
/// constant (each fiber meets `A` in a proper nonempty subset).
pub fn function_from_section(
    x: &FreeSphereComplex,
    section: &SectionData,
    mesh: &QuotientMesh,
) -> Result<SectionFunction, CoincidenceError> {
    let p = x.order();
    let mut zero_set: Vec<Vec<f64>> = Vec::new();
    for entry in &section.entries {
        let support = entry.measure.support_size();
        if support > section.support_bound || support >= p {
            return Err(CoincidenceError::SupportBound {
                mesh_index: entry.mesh_index,
                support,
                bound: section.support_bound,
            });
        }
        let heaviest = entry
            .measure
            .atoms()
            .iter()
            .map(|a| a.weight)
            .fold(f64::NEG_INFINITY, f64::max);
        for atom in entry.measure.atoms() {
            if atom.weight >= heaviest - TIE_TOL {
                zero_set.push(atom.point.clone());
            }
        }
    }
    let dist_to_zero = |point: &[f64]| -> f64 {
        zero_set
            .iter()
            .map(|a| euclid(point, a))
            .fold(f64::INFINITY, f64::min)
    };
    let vertex_function = PLFunction(
        (0..x.complex().vertex_count())
            .map(|v| dist_to_zero(x.vertex_coords(v)))
            .collect(),
    );
    let mut min_fiber_spread = f64::INFINITY;
    for (mesh_index, rep) in mesh.reps.iter().enumerate() {
        let values: Vec<f64> = (0..p)
            .map(|g| dist_to_zero(&x.realize(&x.translate_weights(g, &rep.weights))))
            .collect();
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        if max - min <= TIE_TOL {
            return Err(CoincidenceError::EmptinessViolated { mesh_index });
        }
        min_fiber_spread = min_fiber_spread.min(max - min);
    }
    Ok(SectionFunction {
        zero_set,
        vertex_function,
        min_fiber_spread,
    })
}

/// Transport-vs-distance ratios of a section over neighboring mesh orbits:
/// the sampled stand-in for continuity of the section.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityProfile {
    /// Adjacency threshold: slightly above the largest nearest-neighbor gap.
    pub threshold: f64,
    pub pairs: usize,
    pub max_ratio: f64,
}

pub fn section_continuity(
    x: &FreeSphereComplex,
    section: &SectionData,
    mesh: &QuotientMesh,
) -> ContinuityProfile {
    let n = mesh.len();
    let dist = |i: usize, j: usize| x.quotient_dist(&mesh.reps[i].point, &mesh.reps[j].point);
    let mut largest_gap = 0.0f64;
    for i in 0..n {
        let nearest = (0..n)
            .filter(|&j| j != i)
            .map(|j| dist(i, j))
            .fold(f64::INFINITY, f64::min);
        largest_gap = largest_gap.max(nearest);
    }
    let threshold = 1.15 * largest_gap;
    let mut pairs = 0;
    let mut max_ratio = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            let d = dist(i, j);
            if d <= threshold && d > TIE_TOL {
                pairs += 1;
                let w = section.entries[i]
                    .measure
                    .wasserstein1(&section.entries[j].measure)
                    .expect("same ambient space");
                max_ratio = max_ratio.max(w / d);
            }
        }
    }
    ContinuityProfile {
        threshold,
        pairs,
        max_ratio,
    }
}
