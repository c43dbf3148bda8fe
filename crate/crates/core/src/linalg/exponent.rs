use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A norm exponent in `[1, ∞]`. Infinity is its own variant so that duality
/// is a total map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);

    /// Validating constructor; `f64::INFINITY` maps to [`Exponent::Infinity`].
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::domain(format!(
                "norm exponent must lie in [1, inf], got {p}"
            )))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn is_one(self) -> bool {
        self == Exponent::ONE
    }

    /// `p` as a float, with `∞` mapped to `f64::INFINITY`.
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// `1/p`, zero for `∞`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    /// Hölder conjugate `p* = p/(p-1)`: `1 ↔ ∞`, `2 → 2`.
    pub fn dual(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::ONE,
            Exponent::Finite(p) if p == 1.0 => Exponent::Infinity,
            Exponent::Finite(p) if p == 2.0 => Exponent::TWO,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }
}

/// Free-function form of [`Exponent::dual`].
pub fn dual_exponent(p: Exponent) -> Exponent {
    p.dual()
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            _ => {
                let p: f64 = t
                    .parse()
                    .map_err(|_| Error::domain(format!("cannot parse exponent {s:?}")))?;
                Exponent::new(p)
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

/// The `(p, q)` pair of an operator norm `‖A‖_{p→q}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentPair {
    pub p: Exponent,
    pub q: Exponent,
}

impl ExponentPair {
    pub fn new(p: Exponent, q: Exponent) -> Self {
        Self { p, q }
    }

    /// Validates and builds from raw floats (`f64::INFINITY` allowed).
    pub fn from_f64(p: f64, q: f64) -> Result<Self> {
        Ok(Self::new(Exponent::new(p)?, Exponent::new(q)?))
    }

    /// The pair `(q*, p*)` governing `‖Aᵀ‖` in the duality identity.
    pub fn dual(self) -> Self {
        Self::new(self.q.dual(), self.p.dual())
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.p, self.q)
    }
}

/// Counting (`Σ`) versus expectation (`E`) normalisation of an ℓ_p norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    #[default]
    Counting,
    Expectation,
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "counting" | "c" => Ok(NormKind::Counting),
            "expectation" | "e" => Ok(NormKind::Expectation),
            other => Err(Error::domain(format!("unknown norm kind {other:?}"))),
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormKind::Counting => "counting",
            NormKind::Expectation => "expectation",
        })
    }
}
