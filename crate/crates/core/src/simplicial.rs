//! Finite simplicial complexes with exact integer homology.
//!
//! The central model: the space of probability measures with at most `n`
//! support points on a finite set `C` is the `(n-1)`-skeleton of the simplex
//! spanned by `C`, so questions about those measure spaces become
//! combinatorics of skeleta, joins, and their reduced homology. Homology is
//! computed over the integers through Smith normal form with
//! arbitrary-precision pivots; group actions on complexes come with
//! fixed-subcomplex extraction inside the barycentric subdivision.

use num::{BigInt, One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::groups::{double_action, FiniteGroup};

/// Hard cap on the number of simplices a complex may hold; keeps Smith
/// normal form runs at desk scale.
pub const MAX_SIMPLICES: usize = 20_000;

#[derive(Debug, Error, PartialEq)]
pub enum ComplexError {
    #[error("vertex index {index} out of range for {count} vertices")]
    BadVertex { index: usize, count: usize },
    #[error("complex would exceed the {MAX_SIMPLICES}-simplex cap")]
    TooLarge,
    #[error("joined complexes share the vertex label {0:?}")]
    VertexCollision(String),
    #[error("operands live on different vertex sets")]
    LabelMismatch,
    #[error("{0} labels supplied for {1} vertices")]
    BadLabelCount(usize, usize),
    #[error("invalid group action: {0}")]
    BadAction(String),
    #[error("could not parse complex: {0}")]
    Parse(String),
}

/// A finite abstract simplicial complex on an indexed vertex set.
///
/// Simplices are stored by dimension as sorted vertex lists; the family is
/// downward closed and duplicate-free by construction. The vertex set may be
/// larger than the union of the simplices (unused labels are legal), and a
/// complex with no simplices at all is the empty complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    by_dim: Vec<Vec<Vec<usize>>>,
}

fn canonical(mut simplex: Vec<usize>) -> Vec<usize> {
    simplex.sort_unstable();
    simplex.dedup();
    simplex
}

impl SimplicialComplex {
    /// Builds the downward closure of the given generating simplices.
    pub fn from_simplices(
        vertex_count: usize,
        generators: &[Vec<usize>],
    ) -> Result<SimplicialComplex, ComplexError> {
        let labels = (0..vertex_count).map(|i| format!("v{i}")).collect();
        SimplicialComplex::from_simplices_with_labels(labels, generators)
    }

    pub fn from_simplices_with_labels(
        labels: Vec<String>,
        generators: &[Vec<usize>],
    ) -> Result<SimplicialComplex, ComplexError> {
        let count = labels.len();
        let mut by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
        for raw in generators {
            for &v in raw {
                if v >= count {
                    return Err(ComplexError::BadVertex { index: v, count });
                }
            }
            let simplex = canonical(raw.clone());
            if simplex.is_empty() {
                continue;
            }
            // Close downward: every nonempty subset is a simplex.
            let k = simplex.len();
            for mask in 1u64..(1 << k) {
                let face: Vec<usize> = (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| simplex[i])
                    .collect();
                let d = face.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize(d + 1, Vec::new());
                }
                by_dim[d].push(face);
            }
        }
        let mut total = 0;
        for level in &mut by_dim {
            level.sort_unstable();
            level.dedup();
            total += level.len();
        }
        if total > MAX_SIMPLICES {
            return Err(ComplexError::TooLarge);
        }
        Ok(SimplicialComplex { labels, by_dim })
    }

    /// The empty complex on `vertex_count` unused labels.
    pub fn empty(vertex_count: usize) -> SimplicialComplex {
        SimplicialComplex::from_simplices(vertex_count, &[]).expect("empty complex is valid")
    }

    /// The full simplex on `m` vertices.
    pub fn full_simplex(m: usize) -> Result<SimplicialComplex, ComplexError> {
        measure_skeleton(m, m as i64)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn relabel(&self, labels: Vec<String>) -> Result<SimplicialComplex, ComplexError> {
        if labels.len() != self.vertex_count() {
            return Err(ComplexError::BadLabelCount(labels.len(), self.vertex_count()));
        }
        Ok(SimplicialComplex {
            labels,
            by_dim: self.by_dim.clone(),
        })
    }

    /// Top dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        if self.by_dim.is_empty() {
            None
        } else {
            Some(self.by_dim.len() - 1)
        }
    }

    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.by_dim.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.by_dim.iter().flatten()
    }

    pub fn simplex_count(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        let simplex = canonical(simplex.to_vec());
        if simplex.is_empty() {
            return false;
        }
        self.simplices(simplex.len() - 1)
            .binary_search(&simplex)
            .is_ok()
    }

    /// Numbers of simplices per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    /// Unreduced Euler characteristic, the alternating sum of the f-vector.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &f)| if d % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    /// Maximal simplices.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for (d, level) in self.by_dim.iter().enumerate() {
            for simplex in level {
                let has_coface = self.simplices(d + 1).iter().any(|tau| {
                    simplex.iter().all(|v| tau.binary_search(v).is_ok())
                });
                if !has_coface {
                    out.push(simplex.clone());
                }
            }
        }
        out
    }

    /// Image of the complex under a vertex bijection.
    pub fn apply_vertex_map(&self, perm: &[usize]) -> Result<SimplicialComplex, ComplexError> {
        if perm.len() != self.vertex_count() {
            return Err(ComplexError::BadLabelCount(perm.len(), self.vertex_count()));
        }
        let generators: Vec<Vec<usize>> = self
            .all_simplices()
            .map(|s| s.iter().map(|&v| perm[v]).collect())
            .collect();
        SimplicialComplex::from_simplices_with_labels(self.labels.clone(), &generators)
    }

    /// Union of two complexes over the same labeled vertex set.
    pub fn union(&self, other: &SimplicialComplex) -> Result<SimplicialComplex, ComplexError> {
        if self.labels != other.labels {
            return Err(ComplexError::LabelMismatch);
        }
        let generators: Vec<Vec<usize>> = self
            .all_simplices()
            .chain(other.all_simplices())
            .cloned()
            .collect();
        SimplicialComplex::from_simplices_with_labels(self.labels.clone(), &generators)
    }

    /// JSON form `{"vertices": [labels], "facets": [[indices]]}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({ "vertices": self.labels, "facets": self.facets() })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<SimplicialComplex, ComplexError> {
        let vertices = value
            .get("vertices")
            .and_then(|v| v.as_array())
            .ok_or_else(|| ComplexError::Parse("missing vertices array".to_string()))?;
        let labels: Vec<String> = vertices
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect();
        let facets = value
            .get("facets")
            .and_then(|v| v.as_array())
            .ok_or_else(|| ComplexError::Parse("missing facets array".to_string()))?;
        let mut generators = Vec::new();
        for facet in facets {
            let indices = facet
                .as_array()
                .ok_or_else(|| ComplexError::Parse("facet is not an array".to_string()))?;
            let mut simplex = Vec::with_capacity(indices.len());
            for ix in indices {
                let v = ix
                    .as_u64()
                    .ok_or_else(|| ComplexError::Parse(format!("bad vertex index {ix}")))?;
                simplex.push(v as usize);
            }
            generators.push(simplex);
        }
        SimplicialComplex::from_simplices_with_labels(labels, &generators)
    }
}

/// The model of measures with at most `n + 1` support points on a set of
/// `size` elements: all subsets of size at most `n + 1`, i.e. the
/// `n`-skeleton of the full simplex. `n = -1` gives the empty complex and
/// any `n` beyond `size - 1` the full simplex.
pub fn measure_skeleton(size: usize, n: i64) -> Result<SimplicialComplex, ComplexError> {
    if n < 0 {
        return Ok(SimplicialComplex::empty(size));
    }
    let max_card = ((n + 1) as usize).min(size);
    let mut generators = Vec::new();
    // All subsets of cardinality max_card generate the skeleton by closure.
    let mut current: Vec<usize> = (0..max_card).collect();
    if max_card == 0 {
        return Ok(SimplicialComplex::empty(size));
    }
    loop {
        generators.push(current.clone());
        // Next combination in lexicographic order.
        let mut i = max_card;
        loop {
            if i == 0 {
                return SimplicialComplex::from_simplices(size, &generators);
            }
            i -= 1;
            if current[i] + 1 <= size - (max_card - i) {
                current[i] += 1;
                for j in i + 1..max_card {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Join of two complexes on disjoint label sets: all unions of a simplex
/// (or nothing) from each side, on the concatenated vertex set.
pub fn join(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
) -> Result<SimplicialComplex, ComplexError> {
    for label in l.labels() {
        if k.labels().contains(label) {
            return Err(ComplexError::VertexCollision(label.clone()));
        }
    }
    let offset = k.vertex_count();
    let labels: Vec<String> = k.labels().iter().chain(l.labels()).cloned().collect();
    let mut generators: Vec<Vec<usize>> = Vec::new();
    let shift = |s: &Vec<usize>| -> Vec<usize> { s.iter().map(|&v| v + offset).collect() };
    for sigma in k.all_simplices() {
        generators.push(sigma.clone());
        for tau in l.all_simplices() {
            let mut joined = sigma.clone();
            joined.extend(shift(tau));
            generators.push(joined);
        }
    }
    for tau in l.all_simplices() {
        generators.push(shift(tau));
    }
    SimplicialComplex::from_simplices_with_labels(labels, &generators)
}

/// Invariant factors (the nonzero diagonal of the Smith normal form) of an
/// integer matrix, each positive and dividing the next.
pub fn smith_invariants(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut invariants = Vec::new();
    let mut t = 0;
    while t < rows && t < cols {
        // Pivot: a nonzero entry of minimal absolute value.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero()
                    && pivot.map_or(true, |(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        // Clear row and column t; reductions can refill, so iterate.
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !m[i][t].is_zero() {
                    let q = div_round(&m[i][t], &m[t][t]);
                    for j in t..cols {
                        let sub = &q * &m[t][j];
                        m[i][j] -= sub;
                    }
                    if !m[i][t].is_zero() {
                        m.swap(t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let q = div_round(&m[t][j], &m[t][t]);
                    for row in m.iter_mut().take(rows).skip(t) {
                        let sub = &q * &row[t];
                        row[j] -= sub;
                    }
                    if !m[t][j].is_zero() {
                        for row in m.iter_mut() {
                            row.swap(t, j);
                        }
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        // Divisibility: the pivot must divide every remaining entry.
        let mut fixed = false;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&m[i][j] % &m[t][t]).is_zero() {
                    for col in t..cols {
                        let add = m[i][col].clone();
                        m[t][col] += add;
                    }
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue;
        }
        if m[t][t].is_negative() {
            let neg = -m[t][t].clone();
            m[t][t] = neg;
        }
        invariants.push(m[t][t].clone());
        t += 1;
    }
    invariants
}

/// Division rounding to the nearest integer; keeps remainders at most half
/// the divisor during Smith reduction.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = num::Integer::div_rem(a, b);
    if r.abs() * two > b.abs() {
        if (r.sign() == b.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Boundary matrix from `d`-chains to `(d-1)`-chains; for `d = 0` the
/// augmentation row sending every vertex to 1 (so homology is reduced).
fn boundary_matrix(k: &SimplicialComplex, d: usize) -> Vec<Vec<BigInt>> {
    let columns = k.simplices(d);
    if d == 0 {
        return vec![vec![BigInt::one(); columns.len()]];
    }
    let rows = k.simplices(d - 1);
    let mut m = vec![vec![BigInt::zero(); columns.len()]; rows.len()];
    for (j, simplex) in columns.iter().enumerate() {
        for drop in 0..simplex.len() {
            let mut face = simplex.clone();
            face.remove(drop);
            let i = rows.binary_search(&face).expect("faces are stored");
            m[i][j] = if drop % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
        }
    }
    m
}

/// One reduced homology group: free rank plus invariant-factor torsion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

/// Reduced integer homology in degrees `0..=dim`, from Smith normal forms
/// of the boundary matrices (computed in parallel per degree).
pub fn homology(k: &SimplicialComplex) -> Vec<HomologyGroup> {
    let Some(top) = k.dim() else {
        return Vec::new();
    };
    let invariants: Vec<Vec<BigInt>> = (0..=top + 1)
        .into_par_iter()
        .map(|d| {
            if d > top {
                Vec::new()
            } else {
                smith_invariants(boundary_matrix(k, d))
            }
        })
        .collect();
    (0..=top)
        .map(|d| {
            let rank_d = invariants[d].len();
            let rank_up = invariants[d + 1].len();
            let betti = k.simplices(d).len() - rank_d - rank_up;
            let torsion: Vec<BigInt> = invariants[d + 1]
                .iter()
                .filter(|inv| !inv.is_one())
                .cloned()
                .collect();
            HomologyGroup { betti, torsion }
        })
        .collect()
}

/// Checks the combinatorial decomposition of the measure model of a disjoint
/// union: the `(n-1)`-skeleton on `A` and `B` together must equal the union
/// over `i` of joins of the `(i-1)`-skeleton on `A` with the `(n-i-1)`-
/// skeleton on `B` (empty complexes covering the degenerate ends).
pub fn decomposition_check(a_size: usize, b_size: usize, n: usize) -> bool {
    let a_labels: Vec<String> = (0..a_size).map(|i| format!("a{i}")).collect();
    let b_labels: Vec<String> = (0..b_size).map(|i| format!("b{i}")).collect();
    let all_labels: Vec<String> = a_labels.iter().chain(&b_labels).cloned().collect();
    let lhs = measure_skeleton(a_size + b_size, n as i64 - 1)
        .and_then(|k| k.relabel(all_labels.clone()))
        .expect("skeleton construction");
    let mut rhs = SimplicialComplex::empty(a_size + b_size)
        .relabel(all_labels)
        .expect("relabel");
    for i in 0..=n {
        let on_a = measure_skeleton(a_size, i as i64 - 1)
            .and_then(|k| k.relabel(a_labels.clone()))
            .expect("skeleton construction");
        let on_b = measure_skeleton(b_size, (n - i) as i64 - 1)
            .and_then(|k| k.relabel(b_labels.clone()))
            .expect("skeleton construction");
        let term = join(&on_a, &on_b).expect("disjoint labels");
        rhs = rhs.union(&term).expect("same vertex set");
    }
    lhs == rhs
}

/// A finite group acting simplicially on a complex by vertex permutations.
#[derive(Debug, Clone)]
pub struct GComplexAction {
    complex: SimplicialComplex,
    group: FiniteGroup,
    perms: Vec<Vec<usize>>,
    free: bool,
}

impl GComplexAction {
    /// Validates that the permutations define a homomorphism sending
    /// simplices to simplices, and computes the freeness flag: the action is
    /// free when no nonidentity element keeps any simplex setwise invariant.
    pub fn new(
        group: FiniteGroup,
        complex: SimplicialComplex,
        perms: Vec<Vec<usize>>,
    ) -> Result<GComplexAction, ComplexError> {
        let v = complex.vertex_count();
        if perms.len() != group.order() {
            return Err(ComplexError::BadAction(format!(
                "{} permutations for a group of order {}",
                perms.len(),
                group.order()
            )));
        }
        for (g, perm) in perms.iter().enumerate() {
            if perm.len() != v {
                return Err(ComplexError::BadAction(format!(
                    "permutation {g} has length {}, expected {v}",
                    perm.len()
                )));
            }
            let mut hit = vec![false; v];
            for &image in perm {
                if image >= v || hit[image] {
                    return Err(ComplexError::BadAction(format!(
                        "permutation {g} is not a bijection"
                    )));
                }
                hit[image] = true;
            }
            for simplex in complex.all_simplices() {
                let image: Vec<usize> = simplex.iter().map(|&x| perm[x]).collect();
                if !complex.contains(&image) {
                    return Err(ComplexError::BadAction(format!(
                        "element {g} maps simplex {simplex:?} outside the complex"
                    )));
                }
            }
        }
        for a in group.elements() {
            for b in group.elements() {
                let ab = group.mul(a, b);
                for x in 0..v {
                    if perms[ab][x] != perms[a][perms[b][x]] {
                        return Err(ComplexError::BadAction(format!(
                            "not a homomorphism at ({a}, {b})"
                        )));
                    }
                }
            }
        }
        let free = group
            .elements()
            .filter(|&g| g != group.identity())
            .all(|g| {
                complex.all_simplices().all(|simplex| {
                    let image = canonical(simplex.iter().map(|&x| perms[g][x]).collect());
                    &image != simplex
                })
            });
        Ok(GComplexAction {
            complex,
            group,
            perms,
            free,
        })
    }

    /// Left-translation action of `group` on the `skeleton_dim`-skeleton of
    /// its own simplex, vertices labeled by group elements.
    pub fn translation(
        group: &FiniteGroup,
        skeleton_dim: i64,
    ) -> Result<GComplexAction, ComplexError> {
        let labels = group.elements().map(|x| group.label(x).to_string()).collect();
        let complex = measure_skeleton(group.order(), skeleton_dim)?.relabel(labels)?;
        let perms = group
            .elements()
            .map(|g| group.elements().map(|x| group.mul(g, x)).collect())
            .collect();
        GComplexAction::new(group.clone(), complex, perms)
    }

    /// Two-sided action of the product group on the simplex over `group`:
    /// the pair `(a, b)` sends the vertex `x` to `a x b^-1`.
    pub fn double_translation(
        group: &FiniteGroup,
        skeleton_dim: i64,
    ) -> Result<GComplexAction, ComplexError> {
        let labels = group.elements().map(|x| group.label(x).to_string()).collect();
        let complex = measure_skeleton(group.order(), skeleton_dim)?.relabel(labels)?;
        let acting = group.product(group);
        let n = group.order();
        let perms = (0..acting.order())
            .map(|pair| {
                let (a, b) = (pair / n, pair % n);
                group
                    .elements()
                    .map(|x| double_action(group, a, b, x))
                    .collect()
            })
            .collect();
        GComplexAction::new(acting, complex, perms)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn permutation(&self, g: usize) -> &[usize] {
        &self.perms[g]
    }

    /// True when no nonidentity element fixes any simplex setwise.
    pub fn is_free(&self) -> bool {
        self.free
    }

    /// Pair index inside a product-group action.
    pub fn pair_index(&self, a: usize, b: usize, base_order: usize) -> usize {
        a * base_order + b
    }
}

/// The fixed subcomplex of a subgroup, realized inside the barycentric
/// subdivision: one vertex per setwise-invariant simplex, simplices given by
/// inclusion chains of invariant simplices.
#[derive(Debug, Clone)]
pub struct FixedSubcomplex {
    pub complex: SimplicialComplex,
    /// The invariant simplex of the original complex behind each vertex.
    pub barycenters: Vec<Vec<usize>>,
    /// False when no simplex is setwise invariant (empty fixed-point set).
    pub nonempty: bool,
}

/// Computes the fixed subcomplex of the elements `subgroup` (indices into
/// the acting group). A simplex carries fixed points exactly when the whole
/// subgroup keeps it setwise invariant; its barycenter witnesses that.
pub fn fixed_subcomplex(action: &GComplexAction, subgroup: &[usize]) -> FixedSubcomplex {
    let mut invariant: Vec<Vec<usize>> = Vec::new();
    for simplex in action.complex().all_simplices() {
        let stays = subgroup.iter().all(|&g| {
            let image = canonical(simplex.iter().map(|&x| action.permutation(g)[x]).collect());
            &image == simplex
        });
        if stays {
            invariant.push(simplex.clone());
        }
    }
    invariant.sort_by_key(|s| (s.len(), s.clone()));
    let nonempty = !invariant.is_empty();
    let labels: Vec<String> = invariant
        .iter()
        .map(|s| {
            let parts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            format!("b({})", parts.join(" "))
        })
        .collect();
    // All inclusion chains among invariant simplices, built by extension.
    let contains = |big: &Vec<usize>, small: &Vec<usize>| -> bool {
        small.iter().all(|v| big.binary_search(v).is_ok())
    };
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..invariant.len()).map(|i| vec![i]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("chains are nonempty");
        for next in last + 1..invariant.len() {
            if invariant[next].len() > invariant[last].len()
                && contains(&invariant[next], &invariant[last])
            {
                let mut extended = chain.clone();
                extended.push(next);
                stack.push(extended);
            }
        }
        chains.push(chain);
    }
    let complex = SimplicialComplex::from_simplices_with_labels(labels, &chains)
        .expect("chain complex construction");
    FixedSubcomplex {
        complex,
        barycenters: invariant,
        nonempty,
    }
}

/// Full barycentric subdivision: the fixed subcomplex of the trivial
/// subgroup under any valid action, or directly of the identity action.
pub fn barycentric_subdivision(k: &SimplicialComplex) -> FixedSubcomplex {
    let group = FiniteGroup::cyclic(1);
    let perms = vec![(0..k.vertex_count()).collect()];
    let action =
        GComplexAction::new(group, k.clone(), perms).expect("identity action is valid");
    fixed_subcomplex(&action, &[0])
}

/// Serializable digest of a homology computation for reports.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct HomologySummary {
    pub f_vector: Vec<usize>,
    pub euler_characteristic: i64,
    pub betti: Vec<usize>,
    /// Invariant-factor torsion per degree, decimal strings.
    pub torsion: Vec<Vec<String>>,
}

pub fn homology_summary(k: &SimplicialComplex) -> HomologySummary {
    let groups = homology(k);
    HomologySummary {
        f_vector: k.f_vector(),
        euler_characteristic: k.euler_characteristic(),
        betti: groups.iter().map(|g| g.betti).collect(),
        torsion: groups
            .iter()
            .map(|g| g.torsion.iter().map(|t| t.to_string()).collect())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn betti_vector(k: &SimplicialComplex) -> Vec<usize> {
        homology(k).iter().map(|g| g.betti).collect()
    }

    #[test]
    fn closure_and_dedup() {
        let k = SimplicialComplex::from_simplices(4, &[vec![0, 1, 2], vec![2, 1, 0], vec![3]])
            .unwrap();
        assert_eq!(k.f_vector(), vec![4, 3, 1]);
        assert!(k.contains(&[1, 2]));
        assert!(k.contains(&[3]));
        assert!(!k.contains(&[0, 3]));
        assert_eq!(k.dim(), Some(2));
        assert_eq!(k.facets().len(), 2);
        assert!(SimplicialComplex::from_simplices(2, &[vec![0, 5]]).is_err());
    }

    #[test]
    fn skeleton_models_of_small_measure_spaces() {
        // Two points, one support point allowed: two isolated vertices.
        let b1 = measure_skeleton(2, 0).unwrap();
        assert_eq!(b1.f_vector(), vec![2]);
        // Four points, pairs allowed: the complete graph.
        let k4 = measure_skeleton(4, 1).unwrap();
        assert_eq!(k4.f_vector(), vec![4, 6]);
        // |G| = 2 with n = |G| - 1: the boundary of an edge, two points.
        let s0 = measure_skeleton(2, 0).unwrap();
        assert_eq!(s0.f_vector(), vec![2]);
        // Beyond the vertex count the full simplex appears.
        let full = measure_skeleton(3, 9).unwrap();
        assert_eq!(full.f_vector(), vec![3, 3, 1]);
        // n = -1 is the empty complex.
        assert_eq!(measure_skeleton(3, -1).unwrap().simplex_count(), 0);
    }

    #[test]
    fn skeleton_is_permutation_invariant() {
        let k = measure_skeleton(5, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let mut perm: Vec<usize> = (0..5).collect();
            for i in (1..5).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            assert_eq!(k.apply_vertex_map(&perm).unwrap(), k);
        }
    }

    #[test]
    fn joins_of_points_and_spheres() {
        let point = SimplicialComplex::from_simplices(1, &[vec![0]]).unwrap();
        let edge = join(&point, &point.relabel(vec!["w0".to_string()]).unwrap()).unwrap();
        assert_eq!(edge.f_vector(), vec![2, 1]);

        let s0 = measure_skeleton(2, 0).unwrap();
        let s0b = s0.relabel(vec!["w0".to_string(), "w1".to_string()]).unwrap();
        let circle = join(&s0, &s0b).unwrap();
        assert_eq!(circle.f_vector(), vec![4, 4]);
        assert_eq!(betti_vector(&circle), vec![0, 1]);

        assert!(matches!(
            join(&s0, &s0),
            Err(ComplexError::VertexCollision(_))
        ));
    }

    #[test]
    fn join_f_vector_convolves() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let ka = random_complex(4, &mut rng, "a");
            let kb = random_complex(4, &mut rng, "b");
            let joined = join(&ka, &kb).unwrap();
            let fa = ka.f_vector();
            let fb = kb.f_vector();
            let f = |v: &Vec<usize>, i: i64| -> i64 {
                if i == -1 {
                    1
                } else {
                    *v.get(i as usize).unwrap_or(&0) as i64
                }
            };
            let top = (fa.len() + fb.len()) as i64;
            // f_k(K * L) convolves the f-vectors with f_{-1} = 1 on both
            // sides; the empty-empty pair only contributes in degree -1.
            for k in 0..top {
                let expected: i64 =
                    (-1..=k).map(|i| f(&fa, i) * f(&fb, k - 1 - i)).sum::<i64>();
                let got = f(&joined.f_vector(), k);
                assert_eq!(got, expected, "degree {k}");
            }
        }
    }

    fn random_complex(
        vertices: usize,
        rng: &mut rand_chacha::ChaCha8Rng,
        prefix: &str,
    ) -> SimplicialComplex {
        let mut generators = Vec::new();
        for _ in 0..rng.gen_range(1..5) {
            let size = rng.gen_range(1..=3.min(vertices));
            let mut simplex: Vec<usize> = (0..vertices).collect();
            for i in (1..vertices).rev() {
                simplex.swap(i, rng.gen_range(0..=i));
            }
            simplex.truncate(size);
            generators.push(simplex);
        }
        let labels = (0..vertices).map(|i| format!("{prefix}{i}")).collect();
        SimplicialComplex::from_simplices_with_labels(labels, &generators).unwrap()
    }

    #[test]
    fn homology_of_skeleta() {
        let k4 = measure_skeleton(4, 1).unwrap();
        assert_eq!(betti_vector(&k4), vec![0, 3]);

        let sphere2 = measure_skeleton(4, 2).unwrap();
        assert_eq!(betti_vector(&sphere2), vec![0, 0, 1]);
        for g in homology(&sphere2) {
            assert!(g.torsion.is_empty());
        }
    }

    #[test]
    fn skeleton_homology_concentrates_in_top_degree() {
        fn choose(m: usize, k: usize) -> usize {
            if k > m {
                return 0;
            }
            let mut out = 1usize;
            for i in 0..k {
                out = out * (m - i) / (i + 1);
            }
            out
        }
        for m in 2..=7usize {
            for n in 0..=4i64 {
                let k = measure_skeleton(m, n).unwrap();
                let betti = betti_vector(&k);
                let top = (n as usize).min(m - 1);
                for (d, &b) in betti.iter().enumerate() {
                    let expected = if d == top { choose(m - 1, top + 1) } else { 0 };
                    assert_eq!(b, expected, "m={m} n={n} degree {d}");
                }
                for g in homology(&k) {
                    assert!(g.torsion.is_empty());
                }
            }
        }
    }

    #[test]
    fn projective_plane_exhibits_torsion() {
        // Six-vertex closed surface with Euler characteristic one.
        let facets: Vec<Vec<usize>> = vec![
            vec![0, 1, 2],
            vec![0, 1, 3],
            vec![0, 2, 4],
            vec![0, 3, 5],
            vec![0, 4, 5],
            vec![1, 2, 5],
            vec![1, 3, 4],
            vec![1, 4, 5],
            vec![2, 3, 4],
            vec![2, 3, 5],
        ];
        let rp2 = SimplicialComplex::from_simplices(6, &facets).unwrap();
        assert_eq!(rp2.euler_characteristic(), 1);
        let groups = homology(&rp2);
        assert_eq!(groups[0].betti, 0);
        assert_eq!(groups[1].betti, 0);
        assert_eq!(groups[2].betti, 0);
        assert!(groups[0].torsion.is_empty());
        assert_eq!(groups[1].torsion, vec![BigInt::from(2)]);
        assert!(groups[2].torsion.is_empty());
    }

    #[test]
    fn boundary_squares_to_zero_and_euler_matches_betti() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..8 {
            let k = random_complex(6, &mut rng, "v");
            if let Some(top) = k.dim() {
                for d in 1..=top {
                    let upper = boundary_matrix(&k, d);
                    let lower = boundary_matrix(&k, d - 1);
                    for j in 0..upper[0].len() {
                        for i in 0..lower.len() {
                            let mut acc = BigInt::zero();
                            for (mid, upper_row) in upper.iter().enumerate() {
                                acc += &lower[i][mid] * &upper_row[j];
                            }
                            assert!(acc.is_zero());
                        }
                    }
                }
            }
            let betti = betti_vector(&k);
            let alternating: i64 = betti
                .iter()
                .enumerate()
                .map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) })
                .sum();
            assert_eq!(k.euler_characteristic() - 1, alternating);
        }
    }

    #[test]
    fn smith_invariants_on_known_matrices() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(4), BigInt::from(4)],
            vec![BigInt::from(-6), BigInt::from(6), BigInt::from(12)],
            vec![BigInt::from(10), BigInt::from(4), BigInt::from(16)],
        ];
        assert_eq!(
            smith_invariants(m),
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]
        );
        let identity = vec![
            vec![BigInt::one(), BigInt::zero()],
            vec![BigInt::zero(), BigInt::one()],
        ];
        assert_eq!(smith_invariants(identity), vec![BigInt::one(), BigInt::one()]);
        assert_eq!(smith_invariants(vec![vec![BigInt::zero()]]), Vec::<BigInt>::new());
        // Divisibility chain on a random-ish integer matrix.
        let m = vec![
            vec![BigInt::from(6), BigInt::from(10)],
            vec![BigInt::from(15), BigInt::from(4)],
        ];
        let inv = smith_invariants(m);
        assert_eq!(inv.len(), 2);
        assert!((&inv[1] % &inv[0]).is_zero());
    }

    #[test]
    fn decomposition_identity_small_cases() {
        // One point on each side, two support points: an edge plus faces.
        assert!(decomposition_check(1, 1, 2));
        let lhs = measure_skeleton(3, 1).unwrap();
        assert_eq!(lhs.simplex_count(), 6);
        assert!(decomposition_check(2, 1, 2));
    }

    #[test]
    fn decomposition_identity_exhaustive() {
        for a in 1..=4 {
            for b in 1..=4 {
                for n in 1..=4 {
                    assert!(decomposition_check(a, b, n), "a={a} b={b} n={n}");
                }
            }
        }
    }

    #[test]
    fn translation_actions_and_freeness() {
        let z3 = FiniteGroup::cyclic(3);
        // On the boundary skeleton no proper subset is translation
        // invariant, so the action is free; on the full simplex the whole
        // vertex set is an invariant top simplex.
        let boundary = GComplexAction::translation(&z3, 3 - 2).unwrap();
        assert!(boundary.is_free());
        let full = GComplexAction::translation(&z3, 3).unwrap();
        assert!(!full.is_free());
        // Composite order: {0, 2} is setwise fixed by the element 2 of Z4.
        let z4 = FiniteGroup::cyclic(4);
        let action = GComplexAction::translation(&z4, 4 - 2).unwrap();
        assert!(!action.is_free());
        let z2 = FiniteGroup::cyclic(2);
        let swap = GComplexAction::translation(&z2, 0).unwrap();
        assert!(swap.is_free());
    }

    #[test]
    fn fixed_subcomplex_of_free_swap_is_empty() {
        let z2 = FiniteGroup::cyclic(2);
        let action = GComplexAction::translation(&z2, 0).unwrap();
        let fixed = fixed_subcomplex(&action, &[1]);
        assert!(!fixed.nonempty);
        assert_eq!(fixed.complex.simplex_count(), 0);
    }

    #[test]
    fn translation_on_boundary_skeleton_has_empty_fixed_set() {
        for p in [2usize, 3, 5, 7] {
            let g = FiniteGroup::cyclic(p);
            let action = GComplexAction::translation(&g, p as i64 - 2).unwrap();
            for generator in 1..p {
                let fixed = fixed_subcomplex(&action, &[generator]);
                assert!(!fixed.nonempty, "p = {p}, g = {generator}");
            }
            // The full translation subgroup at once.
            let all: Vec<usize> = (0..p).collect();
            assert!(!fixed_subcomplex(&action, &all).nonempty);
        }
    }

    #[test]
    fn diagonal_fixed_set_is_the_whole_simplex_for_abelian_groups() {
        let z4 = FiniteGroup::cyclic(4);
        let action = GComplexAction::double_translation(&z4, 4).unwrap();
        // The diagonal over Z(S) = G: pairs (a, a).
        let diagonal: Vec<usize> = (0..4).map(|a| action.pair_index(a, a, 4)).collect();
        let fixed = fixed_subcomplex(&action, &diagonal);
        assert!(fixed.nonempty);
        // Every simplex of the full simplex on G is pointwise fixed, so the
        // fixed subcomplex is its entire barycentric subdivision.
        assert_eq!(fixed.barycenters.len(), 15);
        let singletons = fixed
            .barycenters
            .iter()
            .filter(|s| s.len() == 1)
            .count();
        assert_eq!(singletons, 4);
    }

    #[test]
    fn subdivision_of_an_edge_and_of_a_triangle() {
        let edge = SimplicialComplex::from_simplices(2, &[vec![0, 1]]).unwrap();
        let sd = barycentric_subdivision(&edge);
        assert_eq!(sd.complex.f_vector(), vec![3, 2]);
        let triangle = SimplicialComplex::from_simplices(3, &[vec![0, 1, 2]]).unwrap();
        let sd = barycentric_subdivision(&triangle);
        assert_eq!(sd.complex.f_vector(), vec![7, 12, 6]);
        // Subdivision preserves homology: still contractible.
        assert_eq!(betti_vector(&sd.complex), vec![0, 0, 0]);
    }

    #[test]
    fn json_roundtrip() {
        let k = measure_skeleton(4, 1).unwrap();
        let value = k.to_json();
        let back = SimplicialComplex::from_json(&value).unwrap();
        assert_eq!(back, k);
        assert!(SimplicialComplex::from_json(&json!({"vertices": []})).is_err());
        assert!(
            SimplicialComplex::from_json(&json!({"vertices": ["a"], "facets": [["x"]]}))
                .is_err()
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn union_is_idempotent_and_monotone(seed in 0u64..500) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = random_complex(5, &mut rng, "v");
            let b = random_complex(5, &mut rng, "v");
            let u = a.union(&b).unwrap();
            prop_assert_eq!(u.union(&a).unwrap(), u.clone());
            for s in a.all_simplices() {
                prop_assert!(u.contains(s));
            }
            for s in b.all_simplices() {
                prop_assert!(u.contains(s));
            }
        }
    }
}
