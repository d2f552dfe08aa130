//! Exact non-negative rational costs and the extended value `∞`.
//!
//! Every cost, share and ratio in the crate is a [`Cost`]. Equilibrium
//! checks compare strict and weak inequalities, so floating point is never
//! used anywhere on the evaluation path.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A non-negative exact rational, always in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cost(Ratio<i128>);

impl Cost {
    pub fn new(numer: i128, denom: i128) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Input(format!("zero denominator in {numer}/{denom}")));
        }
        let r = Ratio::new(numer, denom);
        if r < Ratio::zero() {
            return Err(Error::Input(format!("negative cost {r}")));
        }
        Ok(Cost(r))
    }

    /// Shorthand for constants that are known to be valid.
    ///
    /// Panics on a negative value or a zero denominator.
    pub fn frac(numer: i128, denom: i128) -> Self {
        Self::new(numer, denom).expect("invalid cost constant")
    }

    pub fn integer(n: u64) -> Self {
        Cost(Ratio::from_integer(n as i128))
    }

    pub fn zero() -> Self {
        Cost(Ratio::zero())
    }

    pub fn one() -> Self {
        Cost(Ratio::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<i128> {
        self.0
    }

    pub fn checked_sub(self, rhs: Cost) -> Option<Cost> {
        let d = self.0 - rhs.0;
        (d >= Ratio::zero()).then_some(Cost(d))
    }

    /// Division by a positive integer count (an edge share `p_e / x_e`).
    pub fn share(self, users: u32) -> Cost {
        assert!(users > 0, "share of an unused edge");
        Cost(self.0 / Ratio::from_integer(users as i128))
    }

    /// `self / rhs`, or `None` when `rhs` is zero.
    pub fn checked_div(self, rhs: Cost) -> Option<Cost> {
        (!rhs.is_zero()).then(|| Cost(self.0 / rhs.0))
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0 + rhs.0)
    }
}

impl AddAssign for Cost {
    fn add_assign(&mut self, rhs: Cost) {
        self.0 += rhs.0;
    }
}

impl Mul for Cost {
    type Output = Cost;
    fn mul(self, rhs: Cost) -> Cost {
        Cost(self.0 * rhs.0)
    }
}

impl Div for Cost {
    type Output = Cost;
    /// Panics on division by zero; use [`Cost::checked_div`] when the divisor may vanish.
    fn div(self, rhs: Cost) -> Cost {
        self.checked_div(rhs).expect("division by zero cost")
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Cost {
    type Err = Error;

    /// Accepts `"p"` or `"p/q"`. Decimal literals are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('.') || s.contains('e') || s.contains('E') {
            return Err(Error::Input(format!(
                "decimal literal {s:?} rejected: write exact rationals as \"p/q\" (e.g. \"1/10\")"
            )));
        }
        let parse_int = |t: &str| -> Result<i128> {
            t.trim()
                .parse::<i128>()
                .map_err(|_| Error::Input(format!("malformed rational {s:?}")))
        };
        match s.split_once('/') {
            Some((p, q)) => Cost::new(parse_int(p)?, parse_int(q)?),
            None => Cost::new(parse_int(s)?, 1),
        }
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct CostVisitor;

        impl Visitor<'_> for CostVisitor {
            type Value = Cost;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or a \"p/q\" string")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Cost, E> {
                Ok(Cost::integer(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Cost, E> {
                Cost::new(v as i128, 1).map_err(E::custom)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Cost, E> {
                Err(E::custom(format!(
                    "decimal number {v} rejected: write exact rationals as \"p/q\" strings"
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Cost, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(CostVisitor)
    }
}

/// A cost that may be the distinguished value `∞` (infeasible profiles).
///
/// `Infinite` compares greater than every finite cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtCost {
    Finite(Cost),
    Infinite,
}

impl ExtCost {
    pub fn finite(self) -> Option<Cost> {
        match self {
            ExtCost::Finite(c) => Some(c),
            ExtCost::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtCost::Infinite)
    }
}

impl From<Cost> for ExtCost {
    fn from(c: Cost) -> Self {
        ExtCost::Finite(c)
    }
}

impl fmt::Display for ExtCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtCost::Finite(c) => c.fmt(f),
            ExtCost::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtCost {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `H_k = 1 + 1/2 + … + 1/k`, with `H_0 = 0`.
pub fn harmonic(k: u32) -> Cost {
    (1..=k as i128).map(|j| Cost::frac(1, j)).sum()
}
