//! Small dense two-phase simplex solver, generic over the scalar type.
//!
//! The solver handles problems in standard form: minimize `c . x` subject to
//! `A x = b`, `x >= 0`. It runs in exact mode over arbitrary-precision
//! rationals (optimal transport plans, per-simplex coincidence feasibility)
//! and in fast mode over `f64` (search heuristics). Bland's rule guarantees
//! termination on degenerate problems; redundant equality rows are detected
//! and dropped after phase one.

use num::{BigRational, Signed, Zero};

/// Scalar admissible for the simplex pivoting loop.
pub trait LpScalar: Clone + PartialOrd + Signed {
    /// Comparison tolerance; zero for exact arithmetic.
    fn pivot_tol() -> Self;

    fn is_negligible(&self) -> bool {
        self.abs() <= Self::pivot_tol()
    }
}

impl LpScalar for f64 {
    fn pivot_tol() -> f64 {
        1e-11
    }
}

impl LpScalar for BigRational {
    fn pivot_tol() -> BigRational {
        BigRational::zero()
    }
}

/// Result of a linear program in standard form.
#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Infeasible,
    Unbounded,
    Optimal { value: T, point: Vec<T> },
}

struct Tableau<T> {
    /// `rows x (cols + 1)`; the last column is the right-hand side.
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    cols: usize,
}

impl<T: LpScalar> Tableau<T> {
    fn rhs(&self, i: usize) -> &T {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].clone();
        for entry in self.rows[row].iter_mut() {
            *entry = entry.clone() / inv.clone();
        }
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for j in 0..=self.cols {
                let delta = factor.clone() * self.rows[row][j].clone();
                self.rows[i][j] = self.rows[i][j].clone() - delta;
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations for the cost vector `cost` (length `cols`),
    /// choosing entering columns only from `0..active_cols`. Returns `false`
    /// when the problem is unbounded below.
    fn optimize(&mut self, cost: &[T], active_cols: usize) -> bool {
        loop {
            // Reduced costs recomputed from scratch: robust and cheap at the
            // matrix sizes handled here.
            let mut entering = None;
            for j in 0..active_cols {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = cost[j].clone();
                for (i, &bi) in self.basis.iter().enumerate() {
                    if cost[bi].is_zero() {
                        continue;
                    }
                    reduced =
                        reduced - cost[bi].clone() * self.rows[i][j].clone();
                }
                if reduced < -T::pivot_tol() {
                    entering = Some(j); // Bland: first improving index
                    break;
                }
            }
            let Some(col) = entering else {
                return true;
            };

            let mut leaving: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][col] <= T::pivot_tol() {
                    continue;
                }
                let ratio = self.rhs(i).clone() / self.rows[i][col].clone();
                let better = match &leaving {
                    None => true,
                    Some((best_row, best)) => {
                        ratio < *best
                            || (ratio == *best
                                && self.basis[i] < self.basis[*best_row])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((row, _)) = leaving else {
                return false;
            };
            self.pivot(row, col);
        }
    }

    fn objective(&self, cost: &[T]) -> T {
        let mut total = T::zero();
        for (i, &bi) in self.basis.iter().enumerate() {
            if !cost[bi].is_zero() {
                total = total + cost[bi].clone() * self.rhs(i).clone();
            }
        }
        total
    }
}

/// Minimizes `c . x` subject to `A x = b`, `x >= 0`.
pub fn minimize<T: LpScalar>(c: &[T], a: &[Vec<T>], b: &[T]) -> LpOutcome<T> {
    let m = a.len();
    let n = c.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), m);

    // Phase 1 tableau with one artificial column per row; rows are flipped so
    // the right-hand side is nonnegative.
    let cols = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i] < T::zero();
        let mut row: Vec<T> = Vec::with_capacity(cols + 1);
        for j in 0..n {
            let v = a[i][j].clone();
            row.push(if flip { -v } else { v });
        }
        for k in 0..m {
            row.push(if k == i { T::one() } else { T::zero() });
        }
        let rhs = b[i].clone();
        row.push(if flip { -rhs } else { rhs });
        rows.push(row);
    }
    let basis = (n..n + m).collect();
    let mut tableau = Tableau { rows, basis, cols };

    let mut phase1_cost = vec![T::zero(); cols];
    for item in phase1_cost.iter_mut().skip(n) {
        *item = T::one();
    }
    tableau.optimize(&phase1_cost, cols);
    if !tableau.objective(&phase1_cost).is_negligible() {
        return LpOutcome::Infeasible;
    }

    // Drive leftover artificial variables out of the basis; rows where no
    // original column can enter are redundant equalities and are dropped.
    let mut i = 0;
    while i < tableau.basis.len() {
        if tableau.basis[i] >= n {
            let col = (0..n).find(|&j| !tableau.rows[i][j].is_negligible());
            match col {
                Some(j) => tableau.pivot(i, j),
                None => {
                    tableau.rows.remove(i);
                    tableau.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut phase2_cost = vec![T::zero(); cols];
    phase2_cost[..n].clone_from_slice(c);
    if !tableau.optimize(&phase2_cost, n) {
        return LpOutcome::Unbounded;
    }

    let mut point = vec![T::zero(); n];
    for (i, &bi) in tableau.basis.iter().enumerate() {
        if bi < n {
            point[bi] = tableau.rhs(i).clone();
        }
    }
    let value = tableau.objective(&phase2_cost);
    LpOutcome::Optimal { value, point }
}

/// Finds any `x >= 0` with `A x = b`, or `None` when the system is infeasible.
pub fn feasible_point<T: LpScalar>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = a.first().map_or(0, Vec::len);
    match minimize(&vec![T::zero(); n], a, b) {
        LpOutcome::Optimal { point, .. } => Some(point),
        _ => None,
    }
}
