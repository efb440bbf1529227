//! Finite multiplication-table groups, two infinite normal-form groups
//! (discrete Heisenberg and the Klein-bottle group), Frobenius power maps,
//! centralizers, and the two-sided action of `G x G` on the simplex spanned
//! by the elements of `G`.
//!
//! Finite groups are dense multiplication tables validated on construction.
//! The infinite groups are exercised exhaustively on coordinate boxes, which
//! is enough to exhibit the structural contrast the calculators care about:
//! power maps collide immediately in the presence of torsion (and on the
//! Klein-bottle group despite it being torsion-free), while the Heisenberg
//! group admits a closed power formula showing injectivity outright.

use num::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

/// Weight tolerance when deciding whether a permutation of a simplex point's
/// support is weight-compatible. Supports are exact group elements, so only
/// weights need a tolerance.
pub const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum GroupError {
    #[error("bad multiplication table: {0}")]
    BadTable(String),
    #[error("could not parse group description: {0}")]
    Parse(String),
    #[error("element index {index} out of range for a group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },
    #[error("invalid simplex point: {0}")]
    BadSimplexPoint(String),
}

/// A finite group presented by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Validates the group laws on a raw table: entries in range, a two-sided
    /// identity, two-sided inverses, and associativity over all triples.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<FiniteGroup, GroupError> {
        let labels = (0..table.len()).map(|i| format!("g{i}")).collect();
        FiniteGroup::from_table_with_labels(table, labels)
    }

    pub fn from_table_with_labels(
        table: Vec<Vec<usize>>,
        labels: Vec<String>,
    ) -> Result<FiniteGroup, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::BadTable("empty table".to_string()));
        }
        if labels.len() != n {
            return Err(GroupError::BadTable(format!(
                "{} labels for {} elements",
                labels.len(),
                n
            )));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::BadTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&e| e >= n) {
                return Err(GroupError::BadTable(format!(
                    "row {i} contains out-of-range entry {bad}"
                )));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| GroupError::BadTable("no two-sided identity".to_string()))?;
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| {
                    GroupError::BadTable(format!("element {x} has no two-sided inverse"))
                })?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::BadTable(format!(
                            "associativity fails on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            table,
            identity,
            inverse,
            labels,
        })
    }

    /// Cyclic group of order `p` with elements labeled by residues.
    pub fn cyclic(p: usize) -> FiniteGroup {
        assert!(p >= 1, "cyclic group needs positive order");
        let table = (0..p).map(|i| (0..p).map(|j| (i + j) % p).collect()).collect();
        let labels = (0..p).map(|i| i.to_string()).collect();
        FiniteGroup::from_table_with_labels(table, labels).expect("cyclic tables are groups")
    }

    /// Direct product, elements indexed as `i * other.order() + j`.
    pub fn product(&self, other: &FiniteGroup) -> FiniteGroup {
        let n1 = self.order();
        let n2 = other.order();
        let mut table = vec![vec![0usize; n1 * n2]; n1 * n2];
        let mut labels = Vec::with_capacity(n1 * n2);
        for i1 in 0..n1 {
            for i2 in 0..n2 {
                labels.push(format!("({},{})", self.labels[i1], other.labels[i2]));
                for j1 in 0..n1 {
                    for j2 in 0..n2 {
                        table[i1 * n2 + i2][j1 * n2 + j2] =
                            self.table[i1][j1] * n2 + other.table[i2][j2];
                    }
                }
            }
        }
        FiniteGroup::from_table_with_labels(table, labels)
            .expect("products of groups are groups")
    }

    /// `k`-fold direct power of the cyclic group of order `p`.
    pub fn cyclic_power(p: usize, k: usize) -> FiniteGroup {
        assert!(k >= 1);
        let base = FiniteGroup::cyclic(p);
        let mut g = base.clone();
        for _ in 1..k {
            g = g.product(&base);
        }
        g
    }

    /// The symmetric group on three letters, elements in cycle notation.
    pub fn symmetric3() -> FiniteGroup {
        // Images of 0,1,2 under e, (12), (13), (23), (123), (132).
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [1, 0, 2],
            [2, 1, 0],
            [0, 2, 1],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let labels = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let index_of = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| index_of(&[p[q[0]], p[q[1]], p[q[2]]]))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table_with_labels(table, labels).expect("S3 is a group")
    }

    /// Parses the plain-text table format: first line the order `N`, then
    /// `N` whitespace-separated rows of `N` element indices.
    pub fn from_text(text: &str) -> Result<FiniteGroup, GroupError> {
        let mut tokens = text.split_whitespace();
        let n: usize = tokens
            .next()
            .ok_or_else(|| GroupError::Parse("empty input".to_string()))?
            .parse()
            .map_err(|e| GroupError::Parse(format!("bad order: {e}")))?;
        let mut table = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let tok = tokens.next().ok_or_else(|| {
                    GroupError::Parse(format!("table ends early at row {i}, column {j}"))
                })?;
                row.push(
                    tok.parse()
                        .map_err(|e| GroupError::Parse(format!("bad entry {tok:?}: {e}")))?,
                );
            }
            table.push(row);
        }
        if tokens.next().is_some() {
            return Err(GroupError::Parse("trailing tokens after table".to_string()));
        }
        FiniteGroup::from_table(table)
    }

    /// Serializes in the same plain-text format accepted by `from_text`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.order());
        for row in &self.table {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn check_element(&self, a: usize) -> Result<(), GroupError> {
        if a < self.order() {
            Ok(())
        } else {
            Err(GroupError::ElementOutOfRange {
                index: a,
                order: self.order(),
            })
        }
    }
}

/// Element of the discrete Heisenberg group: the unitriangular 3x3 integer
/// matrix with upper entries `a`, `b` and corner `c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeisenbergElement {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl HeisenbergElement {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        HeisenbergElement {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn identity() -> Self {
        HeisenbergElement::new(0, 0, 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        HeisenbergElement {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            c: &self.c + &other.c + &self.a * &other.b,
        }
    }

    pub fn inverse(&self) -> Self {
        HeisenbergElement {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c + &self.a * &self.b,
        }
    }

    /// Closed power formula `(a,b,c)^k = (ka, kb, kc + C(k,2) ab)`,
    /// extended to negative `k` through the inverse.
    pub fn pow(&self, k: i64) -> Self {
        if k < 0 {
            return self.inverse().pow(-k);
        }
        let kk = BigInt::from(k);
        let choose2 = BigInt::from(k) * BigInt::from(k - 1) / BigInt::from(2);
        HeisenbergElement {
            a: &kk * &self.a,
            b: &kk * &self.b,
            c: &kk * &self.c + choose2 * &self.a * &self.b,
        }
    }

    /// Reference power by iterated multiplication, for cross-checks.
    pub fn pow_by_multiplication(&self, k: u64) -> Self {
        let mut acc = HeisenbergElement::identity();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Display for HeisenbergElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Element of the Klein-bottle group `<x, y | y x y^-1 = x^-1>` in the
/// normal form `x^m y^n`. The generators `a = xy`, `b = y` realize the
/// two-generator presentation with the single relation `a^2 = b^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KleinBottleElement {
    pub m: BigInt,
    pub n: BigInt,
}

impl KleinBottleElement {
    pub fn new(m: impl Into<BigInt>, n: impl Into<BigInt>) -> Self {
        KleinBottleElement {
            m: m.into(),
            n: n.into(),
        }
    }

    pub fn identity() -> Self {
        KleinBottleElement::new(0, 0)
    }

    /// The generator `a = xy`.
    pub fn gen_a() -> Self {
        KleinBottleElement::new(1, 1)
    }

    /// The generator `b = y`.
    pub fn gen_b() -> Self {
        KleinBottleElement::new(0, 1)
    }

    fn sign_of_n(&self) -> BigInt {
        if (&self.n % 2i32) == BigInt::from(0) {
            BigInt::from(1)
        } else {
            BigInt::from(-1)
        }
    }

    /// Product rule `(x^m y^n)(x^m' y^n') = x^{m + (-1)^n m'} y^{n + n'}`.
    pub fn mul(&self, other: &Self) -> Self {
        KleinBottleElement {
            m: &self.m + self.sign_of_n() * &other.m,
            n: &self.n + &other.n,
        }
    }

    pub fn inverse(&self) -> Self {
        KleinBottleElement {
            m: -self.sign_of_n() * &self.m,
            n: -&self.n,
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        if k < 0 {
            return self.inverse().pow(-k);
        }
        let mut acc = KleinBottleElement::identity();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Display for KleinBottleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} y^{}", self.m, self.n)
    }
}

/// Result of checking injectivity of the power map `x -> x^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusCheck {
    pub exponent: u64,
    pub injective: bool,
    /// On failure, a pair of distinct elements with equal `k`-th powers.
    pub witness: Option<(usize, usize)>,
}

/// Checks whether the power map `x -> x^k` is injective on `G`.
pub fn frobenius_injective(g: &FiniteGroup, k: u64) -> FrobeniusCheck {
    assert!(k >= 1, "power maps need a positive exponent");
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for x in g.elements() {
        let image = g.pow(x, k);
        if let Some(&earlier) = seen.get(&image) {
            return FrobeniusCheck {
                exponent: k,
                injective: false,
                witness: Some((earlier, x)),
            };
        }
        seen.insert(image, x);
    }
    FrobeniusCheck {
        exponent: k,
        injective: true,
        witness: None,
    }
}

/// Exhaustive collision search for `x -> x^k` on the Heisenberg group over
/// the coordinate box `|a|, |b|, |c| <= bound`. Every power is cross-checked
/// against the closed formula. Torsion-freeness plus the formula make a
/// collision impossible; the search documents that on the tested window.
pub fn heisenberg_witness_search(
    bound: i64,
    k: i64,
) -> Option<(HeisenbergElement, HeisenbergElement)> {
    assert!(bound >= 1 && k >= 2);
    let mut seen: HashMap<HeisenbergElement, HeisenbergElement> = HashMap::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                let x = HeisenbergElement::new(a, b, c);
                let power = x.pow(k);
                assert_eq!(
                    power,
                    x.pow_by_multiplication(k as u64),
                    "closed power formula disagrees with iterated multiplication"
                );
                if let Some(y) = seen.get(&power) {
                    return Some((y.clone(), x));
                }
                seen.insert(power, x);
            }
        }
    }
    None
}

/// Exhaustive collision search for `x -> x^k` on the Klein-bottle group over
/// the box `|m|, |n| <= bound`. For `k = 2` a collision always exists:
/// squaring kills the `x`-coordinate of every element with odd `y`-exponent.
pub fn klein_bottle_witness_search(
    bound: i64,
    k: i64,
) -> Option<(KleinBottleElement, KleinBottleElement)> {
    assert!(bound >= 1 && k >= 2);
    let mut seen: HashMap<KleinBottleElement, KleinBottleElement> = HashMap::new();
    for m in -bound..=bound {
        for n in -bound..=bound {
            let x = KleinBottleElement::new(m, n);
            let power = x.pow(k);
            if let Some(y) = seen.get(&power) {
                return Some((y.clone(), x));
            }
            seen.insert(power, x);
        }
    }
    None
}

/// The centralizer `Z(S) = {x : xs = sx for all s in S}`; `Z(empty) = G`.
pub fn centralizer(g: &FiniteGroup, s: &[usize]) -> Vec<usize> {
    g.elements()
        .filter(|&x| s.iter().all(|&a| g.mul(x, a) == g.mul(a, x)))
        .collect()
}

/// A failure of property (N): `x^n` centralizes `S` but `x` does not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyNViolation {
    pub x: usize,
    pub subset: Vec<usize>,
    pub exponent: u64,
}

/// Searches for property (N) violations over all singleton and two-element
/// subsets `S` and exponents `2..=max_exponent`.
pub fn property_n_check(g: &FiniteGroup, max_exponent: u64) -> Vec<PropertyNViolation> {
    let mut subsets: Vec<Vec<usize>> = g.elements().map(|a| vec![a]).collect();
    for a in g.elements() {
        for b in a + 1..g.order() {
            subsets.push(vec![a, b]);
        }
    }
    let mut violations = Vec::new();
    for subset in subsets {
        let z = centralizer(g, &subset);
        for x in g.elements() {
            if z.contains(&x) {
                continue;
            }
            for n in 2..=max_exponent {
                if z.contains(&g.pow(x, n)) {
                    violations.push(PropertyNViolation {
                        x,
                        subset: subset.clone(),
                        exponent: n,
                    });
                }
            }
        }
    }
    violations
}

/// The two-sided action `(a x b)(x) = a x b^-1` of `G x G` on `G`.
pub fn double_action(g: &FiniteGroup, a: usize, b: usize, x: usize) -> usize {
    g.mul(g.mul(a, x), g.inv(b))
}

/// The subgroup `H_{b,S} = {(a, b a b^-1) : a in Z(S)}` of `G x G`.
pub fn family_d_subgroup(g: &FiniteGroup, b: usize, s: &[usize]) -> Vec<(usize, usize)> {
    centralizer(g, s)
        .into_iter()
        .map(|a| (a, g.mul(g.mul(b, a), g.inv(b))))
        .collect()
}

/// Pairs `(a, b)` of group elements for which neither `Z(a) = Z(b)` nor
/// `Z(a) and Z(b)` intersect trivially. For torsion-free groups with cyclic
/// centralizers no such pair exists; finite groups report pairs freely
/// (every pair involving the identity already qualifies in a nonabelian
/// group, since `Z(e)` is everything).
pub fn centralizer_dichotomy_violations(g: &FiniteGroup) -> Vec<(usize, usize)> {
    let centralizers: Vec<Vec<usize>> = g.elements().map(|a| centralizer(g, &[a])).collect();
    let mut out = Vec::new();
    for a in g.elements() {
        for b in g.elements() {
            if centralizers[a] == centralizers[b] {
                continue;
            }
            let intersection: Vec<usize> = centralizers[a]
                .iter()
                .copied()
                .filter(|x| centralizers[b].contains(x))
                .collect();
            if intersection != vec![g.identity()] {
                out.push((a, b));
            }
        }
    }
    out
}

/// A point of the simplex spanned by the elements of a finite group:
/// positive weights on distinct elements summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    support: Vec<(usize, f64)>,
}

impl SimplexPoint {
    pub fn new(g: &FiniteGroup, support: Vec<(usize, f64)>) -> Result<SimplexPoint, GroupError> {
        if support.is_empty() {
            return Err(GroupError::BadSimplexPoint("empty support".to_string()));
        }
        let mut total = 0.0;
        for &(element, weight) in &support {
            g.check_element(element)?;
            if weight <= 0.0 {
                return Err(GroupError::BadSimplexPoint(format!(
                    "nonpositive weight {weight} on element {element}"
                )));
            }
            total += weight;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(GroupError::BadSimplexPoint(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        let mut support = support;
        support.sort_by_key(|&(element, _)| element);
        if support.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(GroupError::BadSimplexPoint(
                "repeated support element".to_string(),
            ));
        }
        Ok(SimplexPoint { support })
    }

    pub fn vertex(g: &FiniteGroup, element: usize) -> Result<SimplexPoint, GroupError> {
        SimplexPoint::new(g, vec![(element, 1.0)])
    }

    pub fn uniform(g: &FiniteGroup, elements: &[usize]) -> Result<SimplexPoint, GroupError> {
        let w = 1.0 / elements.len() as f64;
        SimplexPoint::new(g, elements.iter().map(|&e| (e, w)).collect())
    }

    pub fn support(&self) -> &[(usize, f64)] {
        &self.support
    }
}

/// Isotropy of a simplex point under the two-sided action, together with the
/// vertex-fixing flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isotropy {
    /// All pairs `(a, b)` whose action permutes the support weight-compatibly.
    pub pairs: Vec<(usize, usize)>,
    /// True iff every pair above fixes each support element individually.
    pub vertexwise_fixed: bool,
}

/// Computes the isotropy subgroup of `z` inside `G x G`: all pairs whose
/// two-sided action maps the support of `z` onto itself with matching
/// weights. The flag records whether stabilizing forces fixing vertexwise;
/// with torsion it can fail (a pair may swap equal-weight vertices).
pub fn simplex_isotropy(g: &FiniteGroup, z: &SimplexPoint) -> Isotropy {
    let mut pairs = Vec::new();
    let mut vertexwise_fixed = true;
    for a in g.elements() {
        for b in g.elements() {
            let mut stabilizes = true;
            let mut fixes_each = true;
            for &(gamma, weight) in z.support() {
                let image = double_action(g, a, b, gamma);
                match z.support().iter().find(|&&(delta, _)| delta == image) {
                    Some(&(delta, image_weight)) if (weight - image_weight).abs() <= WEIGHT_TOL => {
                        if delta != gamma {
                            fixes_each = false;
                        }
                    }
                    _ => {
                        stabilizes = false;
                        break;
                    }
                }
            }
            if stabilizes {
                pairs.push((a, b));
                if !fixes_each {
                    vertexwise_fixed = false;
                }
            }
        }
    }
    Isotropy {
        pairs,
        vertexwise_fixed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups_satisfy_the_laws() {
        let g = FiniteGroup::cyclic(5);
        assert_eq!(g.order(), 5);
        assert_eq!(g.identity(), 0);
        assert!(g.is_abelian());
        assert_eq!(g.mul(3, 4), 2);
        assert_eq!(g.inv(2), 3);
        assert_eq!(g.pow(2, 4), 3);
        assert_eq!(g.pow(2, 0), 0);
    }

    #[test]
    fn symmetric3_is_the_nonabelian_group_of_order_six() {
        let g = FiniteGroup::symmetric3();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        let t12 = 1;
        let t13 = 2;
        let r132 = 5;
        // (12)(13) = (132) when the right factor acts first.
        assert_eq!(g.mul(t12, t13), r132);
        assert_eq!(g.label(4), "(123)");
        // Three-cycles have order three.
        assert_eq!(g.pow(4, 3), g.identity());
    }

    #[test]
    fn products_of_cyclics_are_valid_abelian_groups() {
        let g = FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(4));
        assert_eq!(g.order(), 8);
        assert!(g.is_abelian());
        let h = FiniteGroup::cyclic_power(5, 2);
        assert_eq!(h.order(), 25);
        assert!(h.is_abelian());
        assert_eq!(h.label(0), "(0,0)");
    }

    #[test]
    fn text_roundtrip_and_bad_tables() {
        let g = FiniteGroup::symmetric3();
        let parsed = FiniteGroup::from_text(&g.to_text()).unwrap();
        assert_eq!(parsed.order(), 6);
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(parsed.mul(a, b), g.mul(a, b));
            }
        }
        // Latin square that is not associative: no identity row/column works.
        let err = FiniteGroup::from_table(vec![vec![0, 1], vec![0, 1]]).unwrap_err();
        assert!(matches!(err, GroupError::BadTable(_)));
        let err = FiniteGroup::from_text("2\n0 1\n1").unwrap_err();
        assert!(matches!(err, GroupError::Parse(_)));
        // Entries of Z5 rigged to break associativity.
        let mut table: Vec<Vec<usize>> = (0..5usize)
            .map(|i| (0..5).map(|j| (i + j) % 5).collect())
            .collect();
        table[3][4] = 1;
        assert!(matches!(
            FiniteGroup::from_table(table),
            Err(GroupError::BadTable(_))
        ));
    }

    #[test]
    fn frobenius_on_small_cyclic_groups() {
        let z2 = FiniteGroup::cyclic(2);
        let check = frobenius_injective(&z2, 2);
        assert!(!check.injective);
        assert_eq!(check.witness, Some((0, 1)));

        let z3 = FiniteGroup::cyclic(3);
        assert!(frobenius_injective(&z3, 2).injective);
        let z4 = FiniteGroup::cyclic(4);
        assert!(!frobenius_injective(&z4, 2).injective);

        for g in [z2, z3, z4, FiniteGroup::symmetric3()] {
            let check = frobenius_injective(&g, 1);
            assert!(check.injective);
        }
    }

    #[test]
    fn frobenius_witnesses_verify() {
        let g = FiniteGroup::symmetric3();
        for k in 2..=6 {
            let check = frobenius_injective(&g, k);
            if let Some((x, y)) = check.witness {
                assert!(!check.injective);
                assert_ne!(x, y);
                assert_eq!(g.pow(x, k), g.pow(y, k));
            } else {
                assert!(check.injective);
            }
        }
        // Any k sharing a factor with the order collapses something in S3.
        assert!(!frobenius_injective(&g, 2).injective);
        assert!(!frobenius_injective(&g, 3).injective);
    }

    #[test]
    fn heisenberg_power_formula_matches_iterated_multiplication() {
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                for c in -3i64..=3 {
                    let x = HeisenbergElement::new(a, b, c);
                    for k in 0..=5u64 {
                        assert_eq!(x.pow(k as i64), x.pow_by_multiplication(k));
                    }
                    assert_eq!(x.mul(&x.inverse()), HeisenbergElement::identity());
                    assert_eq!(x.pow(-2), x.inverse().mul(&x.inverse()));
                }
            }
        }
    }

    #[test]
    fn heisenberg_has_no_power_collisions_on_the_box() {
        for k in [2, 3, 4] {
            assert_eq!(heisenberg_witness_search(3, k), None);
        }
    }

    #[test]
    fn klein_bottle_rule_is_associative_and_inverts() {
        let range = -3i64..=3;
        let elements: Vec<KleinBottleElement> = range
            .clone()
            .flat_map(|m| range.clone().map(move |n| KleinBottleElement::new(m, n)))
            .collect();
        for x in &elements {
            assert_eq!(x.mul(&x.inverse()), KleinBottleElement::identity());
            assert_eq!(x.inverse().mul(x), KleinBottleElement::identity());
            for y in &elements {
                for z in &elements {
                    assert_eq!(x.mul(y).mul(z), x.mul(&y.mul(z)));
                }
            }
        }
    }

    #[test]
    fn klein_bottle_squares_collapse() {
        // a = xy and b = y generate with the single relation a^2 = b^2.
        let a = KleinBottleElement::gen_a();
        let b = KleinBottleElement::gen_b();
        assert_ne!(a, b);
        assert_eq!(a.pow(2), b.pow(2));
        assert_eq!(a.pow(2), KleinBottleElement::new(0, 2));
        // Squaring kills the x-coordinate whenever the y-exponent is odd.
        for m in -4i64..=4 {
            for n in [-3i64, -1, 1, 3] {
                let x = KleinBottleElement::new(m, n);
                assert_eq!(x.pow(2), KleinBottleElement::new(0, 2 * n));
            }
        }
        let witness = klein_bottle_witness_search(2, 2).expect("squaring must collide");
        assert_ne!(witness.0, witness.1);
        assert_eq!(witness.0.pow(2), witness.1.pow(2));
        // The Heisenberg contrast: same exponent, no collision there.
        assert!(heisenberg_witness_search(2, 2).is_none());
    }

    #[test]
    fn centralizers_of_small_groups() {
        let z6 = FiniteGroup::cyclic(6);
        for a in z6.elements() {
            assert_eq!(centralizer(&z6, &[a]).len(), 6);
        }
        let s3 = FiniteGroup::symmetric3();
        assert_eq!(centralizer(&s3, &[1]), vec![0, 1]);
        assert_eq!(centralizer(&s3, &[]), (0..6).collect::<Vec<_>>());
        assert_eq!(centralizer(&s3, &[4]), vec![0, 4, 5]);
        // Z(Z(S)) contains S.
        for s in [vec![1], vec![4], vec![1, 2], vec![2, 5]] {
            let z = centralizer(&s3, &s);
            let zz = centralizer(&s3, &z);
            assert!(s.iter().all(|a| zz.contains(a)), "S = {s:?}");
        }
    }

    #[test]
    fn property_n_fails_for_s3_and_holds_for_cyclics() {
        for p in [2, 3, 5, 7] {
            assert!(property_n_check(&FiniteGroup::cyclic(p), 6).is_empty());
        }
        let s3 = FiniteGroup::symmetric3();
        let violations = property_n_check(&s3, 6);
        assert!(!violations.is_empty());
        // The three-cycle cubes to the identity, which centralizes any S.
        assert!(violations.contains(&PropertyNViolation {
            x: 4,
            subset: vec![1],
            exponent: 3,
        }));
        for v in &violations {
            let z = centralizer(&s3, &v.subset);
            assert!(z.contains(&s3.pow(v.x, v.exponent)));
            assert!(!z.contains(&v.x));
        }
    }

    #[test]
    fn double_action_is_an_action() {
        for g in [
            FiniteGroup::symmetric3(),
            FiniteGroup::cyclic(8),
            FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(4)),
        ] {
            let e = g.identity();
            for x in g.elements() {
                assert_eq!(double_action(&g, e, e, x), x);
            }
            for a1 in g.elements() {
                for b1 in g.elements() {
                    for a2 in g.elements() {
                        for b2 in g.elements() {
                            for x in g.elements() {
                                let composed =
                                    double_action(&g, a1, b1, double_action(&g, a2, b2, x));
                                let product = double_action(
                                    &g,
                                    g.mul(a1, a2),
                                    g.mul(b1, b2),
                                    x,
                                );
                                assert_eq!(composed, product);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_pairs_fix_exactly_the_centralized_points() {
        let s3 = FiniteGroup::symmetric3();
        for g in s3.elements() {
            for x in s3.elements() {
                let fixes = double_action(&s3, g, g, x) == x;
                let centralizes = centralizer(&s3, &[x]).contains(&g);
                assert_eq!(fixes, centralizes);
            }
        }
    }

    #[test]
    fn vertex_isotropy_is_the_conjugated_diagonal() {
        let z4 = FiniteGroup::cyclic(4);
        for gamma in z4.elements() {
            let z = SimplexPoint::vertex(&z4, gamma).unwrap();
            let isotropy = simplex_isotropy(&z4, &z);
            assert!(isotropy.vertexwise_fixed);
            assert_eq!(isotropy.pairs.len(), z4.order());
            let mut conjugated = family_d_subgroup(&z4, gamma, &[]);
            conjugated.sort_unstable();
            let mut pairs = isotropy.pairs.clone();
            pairs.sort_unstable();
            assert_eq!(pairs, conjugated);
            // Elementwise: (a, b) fixes gamma iff b = gamma^-1 a gamma.
            for &(a, b) in &isotropy.pairs {
                assert_eq!(b, z4.mul(z4.mul(z4.inv(gamma), a), gamma));
            }
        }
    }

    #[test]
    fn torsion_breaks_vertexwise_fixing() {
        let z2 = FiniteGroup::cyclic(2);
        let z = SimplexPoint::uniform(&z2, &[0, 1]).unwrap();
        let isotropy = simplex_isotropy(&z2, &z);
        assert!(!isotropy.vertexwise_fixed);
        // (tau, e) swaps the two equal-weight vertices yet stabilizes z.
        assert!(isotropy.pairs.contains(&(1, 0)));

        let z3 = FiniteGroup::cyclic(3);
        let uniform = SimplexPoint::uniform(&z3, &[0, 1, 2]).unwrap();
        let isotropy = simplex_isotropy(&z3, &uniform);
        assert_eq!(isotropy.pairs.len(), 9);
        assert!(!isotropy.vertexwise_fixed);
    }

    #[test]
    fn distinct_weights_force_vertexwise_fixing() {
        let z2 = FiniteGroup::cyclic(2);
        let z = SimplexPoint::new(&z2, vec![(0, 0.7), (1, 0.3)]).unwrap();
        let isotropy = simplex_isotropy(&z2, &z);
        assert!(isotropy.vertexwise_fixed);
        assert_eq!(isotropy.pairs.len(), 2);
    }

    #[test]
    fn isotropy_contains_the_intersection_of_vertex_stabilizers() {
        let s3 = FiniteGroup::symmetric3();
        let points = [
            SimplexPoint::uniform(&s3, &[0, 1]).unwrap(),
            SimplexPoint::new(&s3, vec![(0, 0.5), (4, 0.25), (5, 0.25)]).unwrap(),
            SimplexPoint::uniform(&s3, &[1, 2, 3]).unwrap(),
        ];
        for z in points {
            let isotropy = simplex_isotropy(&s3, &z);
            let mut intersection = Vec::new();
            for a in s3.elements() {
                for b in s3.elements() {
                    let fixes_all = z
                        .support()
                        .iter()
                        .all(|&(gamma, _)| double_action(&s3, a, b, gamma) == gamma);
                    if fixes_all {
                        intersection.push((a, b));
                    }
                }
            }
            for pair in &intersection {
                assert!(isotropy.pairs.contains(pair));
            }
            assert_eq!(
                isotropy.pairs.len() == intersection.len(),
                isotropy.vertexwise_fixed
            );
        }
    }

    #[test]
    fn family_d_subgroups_have_centralizer_order() {
        let s3 = FiniteGroup::symmetric3();
        for b in s3.elements() {
            for s in [vec![], vec![1], vec![4], vec![1, 4]] {
                let h = family_d_subgroup(&s3, b, &s);
                assert_eq!(h.len(), centralizer(&s3, &s).len());
                for &(a, conj) in &h {
                    assert_eq!(conj, s3.mul(s3.mul(b, a), s3.inv(b)));
                }
            }
        }
        // In an abelian group with b = e and empty S this is the diagonal.
        let z4 = FiniteGroup::cyclic(4);
        let diagonal = family_d_subgroup(&z4, z4.identity(), &[]);
        assert_eq!(diagonal, (0..4).map(|a| (a, a)).collect::<Vec<_>>());
    }

    #[test]
    fn centralizer_dichotomy_report_for_s3() {
        let s3 = FiniteGroup::symmetric3();
        let violations = centralizer_dichotomy_violations(&s3);
        assert!(!violations.is_empty());
        for &(a, b) in &violations {
            let za = centralizer(&s3, &[a]);
            let zb = centralizer(&s3, &[b]);
            assert_ne!(za, zb);
            let intersection: Vec<usize> =
                za.iter().copied().filter(|x| zb.contains(x)).collect();
            assert_ne!(intersection, vec![s3.identity()]);
        }
        // Away from the identity the dichotomy actually holds in S3.
        assert!(violations
            .iter()
            .all(|&(a, b)| a == s3.identity() || b == s3.identity()));
    }

    #[test]
    fn simplex_points_validate() {
        let z3 = FiniteGroup::cyclic(3);
        assert!(SimplexPoint::new(&z3, vec![]).is_err());
        assert!(SimplexPoint::new(&z3, vec![(0, 0.5), (0, 0.5)]).is_err());
        assert!(SimplexPoint::new(&z3, vec![(0, 0.5), (1, 0.6)]).is_err());
        assert!(SimplexPoint::new(&z3, vec![(0, 1.5), (1, -0.5)]).is_err());
        assert!(SimplexPoint::new(&z3, vec![(7, 1.0)]).is_err());
        let z = SimplexPoint::new(&z3, vec![(2, 0.25), (0, 0.75)]).unwrap();
        assert_eq!(z.support()[0].0, 0);
    }
}
