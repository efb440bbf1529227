//! Bound tables for the distributional invariants of lens spaces.
//!
//! Nothing here is computed from scratch: every row transcribes a statement
//! whose hypotheses (primality of the order, dimension thresholds, parity)
//! are checked mechanically before the row is emitted. An equality is only
//! printed when both the upper and the lower statement apply and agree.
//! Each row carries citation tags; the project README lists the statement
//! behind every tag.
//!
//! Conventions: the lens space `L^m_p` is the quotient of the unit sphere
//! `S^m` (odd `m`) by the free rotation action of the cyclic group of order
//! `p`; `dcat` is the distributional Lusternik-Schnirelmann category and
//! `dTC` the distributional topological complexity.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("lens spaces require an odd sphere dimension, got m = {0}")]
    InvalidDimension(u64),
    #[error("parameter out of range: {0}")]
    BadParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Invariant {
    Dcat,
    Dtc,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariant::Dcat => write!(f, "dcat"),
            Invariant::Dtc => write!(f, "dTC"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundStatus {
    /// Upper and lower statements meet: the value is known.
    Equality,
    /// Only partial information: any of lower/upper may be present.
    Bounds,
    /// The row witnesses a failure of the product inequality.
    Counterexample,
}

impl fmt::Display for BoundStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundStatus::Equality => write!(f, "equality"),
            BoundStatus::Bounds => write!(f, "bounds"),
            BoundStatus::Counterexample => write!(f, "counterexample"),
        }
    }
}

/// One row of the bounds table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsEntry {
    /// Space descriptor, e.g. `L^9_3` or `(L^25_5)^2`.
    pub space: String,
    pub invariant: Invariant,
    pub lower: Option<i64>,
    pub upper: Option<i64>,
    pub status: BoundStatus,
    /// Semicolon-separated tags naming the statements behind the numbers.
    pub citation: String,
}

impl BoundsEntry {
    fn checked(self) -> Self {
        if let (Some(lo), Some(hi)) = (self.lower, self.upper) {
            assert!(lo <= hi, "bounds must be ordered in {self:?}");
        }
        if self.status == BoundStatus::Equality {
            assert!(
                self.lower.is_some() && self.lower == self.upper,
                "equality rows must pin a value in {self:?}"
            );
        }
        self
    }
}

/// Trial-division primality test; the orders in scope are tiny.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_pow(p: u64, k: u32) -> Result<i64, BoundsError> {
    i64::try_from(p)
        .ok()
        .and_then(|base| base.checked_pow(k))
        .ok_or_else(|| BoundsError::BadParameter(format!("{p}^{k} overflows")))
}

/// The table of transcribed bounds for `L^m_p` and, for `k >= 2`, its
/// `k`-fold product.
///
/// Base rows: `dcat(L^m_p) <= p-1` always, with equality when `p` is prime
/// and `m >= p-1`; for odd `p`, `dTC(L^m_p) <= m` when `m <= 2p-1` and
/// `<= 2p-1` beyond, while even `p` gives `dTC <= p-1`; `dTC >= p-1` for
/// prime `p` and `m >= p-1`.
///
/// Product rows appear whenever `p` is prime and `m >= p^2`: the square
/// satisfies `dcat >= p^2-1 > 2(p-1)`, beating twice the factor's value,
/// and for `p >= 5` also `p^2-1 > 2(2p-1)`, beating twice the factor's
/// `dTC` upper bound. A requested power `k >= 2` additionally reports
/// `dcat((L^m_p)^k) >= p^k-1` when `m >= p^k`.
pub fn bounds_table(p: u64, m: u64, k: u32) -> Result<Vec<BoundsEntry>, BoundsError> {
    if p < 2 {
        return Err(BoundsError::BadParameter(format!("order {p} < 2")));
    }
    if k < 1 {
        return Err(BoundsError::BadParameter("power k must be >= 1".into()));
    }
    if m % 2 == 0 {
        return Err(BoundsError::InvalidDimension(m));
    }
    let prime = is_prime(p);
    let pm1 = p as i64 - 1;
    let space = format!("L^{m}_{p}");
    let mut rows = Vec::new();

    // dcat of the base space.
    let dcat_lower = (prime && m as i64 >= pm1).then_some(pm1);
    let dcat_equality = dcat_lower == Some(pm1);
    rows.push(
        BoundsEntry {
            space: space.clone(),
            invariant: Invariant::Dcat,
            lower: dcat_lower,
            upper: Some(pm1),
            status: if dcat_equality {
                BoundStatus::Equality
            } else {
                BoundStatus::Bounds
            },
            citation: if dcat_equality {
                "dcat-upper; dcat-lower-prime".into()
            } else {
                "dcat-upper".into()
            },
        }
        .checked(),
    );

    // dTC of the base space.
    let (dtc_upper, mut dtc_tags) = if p % 2 == 0 {
        (pm1, vec!["dtc-even"])
    } else {
        let two_pm1 = 2 * p as i64 - 1;
        ((m as i64).min(two_pm1), vec!["dtc-odd-cases"])
    };
    let dtc_lower = (prime && m as i64 >= pm1).then_some(pm1);
    if dtc_lower.is_some() {
        dtc_tags.push("dtc-lower-prime");
    }
    rows.push(
        BoundsEntry {
            space: space.clone(),
            invariant: Invariant::Dtc,
            lower: dtc_lower,
            upper: Some(dtc_upper),
            status: if dtc_lower == Some(dtc_upper) {
                BoundStatus::Equality
            } else {
                BoundStatus::Bounds
            },
            citation: dtc_tags.join("; "),
        }
        .checked(),
    );

    // Square counterexample rows: emitted whenever the hypotheses of the
    // power lower bound hold for k = 2.
    let square = checked_pow(p, 2)?;
    if prime && m as i64 >= square {
        let square_lower = square - 1;
        assert!(square_lower > 2 * pm1, "square beats twice dcat");
        rows.push(
            BoundsEntry {
                space: format!("({space})^2"),
                invariant: Invariant::Dcat,
                lower: Some(square_lower),
                upper: None,
                status: BoundStatus::Counterexample,
                citation: "dcat-power-lower; product-formula-dcat".into(),
            }
            .checked(),
        );
        if p >= 5 {
            assert!(square_lower > 2 * (2 * p as i64 - 1), "square beats twice dTC");
            rows.push(
                BoundsEntry {
                    space: format!("({space})^2"),
                    invariant: Invariant::Dtc,
                    lower: Some(square_lower),
                    upper: None,
                    status: BoundStatus::Counterexample,
                    citation: "dcat-power-lower; product-formula-dtc".into(),
                }
                .checked(),
            );
        }
    }

    // Requested higher power beyond the automatic square rows.
    if k > 2 {
        let power = checked_pow(p, k)?;
        if prime && m as i64 >= power {
            rows.push(
                BoundsEntry {
                    space: format!("({space})^{k}"),
                    invariant: Invariant::Dcat,
                    lower: Some(power - 1),
                    upper: None,
                    status: BoundStatus::Counterexample,
                    citation: "dcat-power-lower; product-formula-dcat".into(),
                }
                .checked(),
            );
        }
    }

    Ok(rows)
}
