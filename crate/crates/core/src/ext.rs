//! Cardinalities that are either a natural number or countably infinite.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A count in `ω ∪ {ω}`.
///
/// Serializes as a JSON integer, or the string `"omega"` for the infinite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtCount {
    /// A finite count.
    Fin(u64),
    /// Countably infinite.
    Omega,
}

pub use ExtCount::{Fin, Omega};

impl ExtCount {
    /// Zero.
    pub const ZERO: ExtCount = Fin(0);

    /// True for every finite value.
    pub fn is_finite(self) -> bool {
        matches!(self, Fin(_))
    }

    /// True for the infinite value.
    pub fn is_omega(self) -> bool {
        matches!(self, Omega)
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<u64> {
        match self {
            Fin(k) => Some(k),
            Omega => None,
        }
    }

    /// True when the count is zero.
    pub fn is_zero(self) -> bool {
        self == Fin(0)
    }

    /// `self - k`, where `ω - k = ω`; saturates at zero.
    pub fn minus(self, k: u64) -> ExtCount {
        match self {
            Fin(a) => Fin(a.saturating_sub(k)),
            Omega => Omega,
        }
    }

    /// The finite value clipped to `cap`; `ω` maps to `cap`.
    pub fn clip(self, cap: usize) -> usize {
        match self {
            Fin(k) => (k as usize).min(cap),
            Omega => cap,
        }
    }
}

impl Default for ExtCount {
    fn default() -> Self {
        Fin(0)
    }
}

impl From<u64> for ExtCount {
    fn from(k: u64) -> Self {
        Fin(k)
    }
}

impl From<usize> for ExtCount {
    fn from(k: usize) -> Self {
        Fin(k as u64)
    }
}

impl Add for ExtCount {
    type Output = ExtCount;
    fn add(self, rhs: ExtCount) -> ExtCount {
        match (self, rhs) {
            (Fin(a), Fin(b)) => a.checked_add(b).map(Fin).unwrap_or(Omega),
            _ => Omega,
        }
    }
}

impl Mul for ExtCount {
    type Output = ExtCount;
    fn mul(self, rhs: ExtCount) -> ExtCount {
        match (self, rhs) {
            (Fin(0), _) | (_, Fin(0)) => Fin(0),
            (Fin(a), Fin(b)) => a.checked_mul(b).map(Fin).unwrap_or(Omega),
            _ => Omega,
        }
    }
}

impl std::iter::Sum for ExtCount {
    fn sum<I: Iterator<Item = ExtCount>>(iter: I) -> ExtCount {
        iter.fold(Fin(0), |a, b| a + b)
    }
}

impl Ord for ExtCount {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Fin(a), Fin(b)) => a.cmp(b),
            (Fin(_), Omega) => Ordering::Less,
            (Omega, Fin(_)) => Ordering::Greater,
            (Omega, Omega) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtCount {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fin(k) => write!(f, "{k}"),
            Omega => write!(f, "omega"),
        }
    }
}

impl Serialize for ExtCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Fin(k) => s.serialize_u64(*k),
            Omega => s.serialize_str("omega"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtCount;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or \"omega\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtCount, E> {
                Ok(Fin(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtCount, E> {
                u64::try_from(v)
                    .map(Fin)
                    .map_err(|_| E::custom(format!("negative count {v}")))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtCount, E> {
                if v == "omega" {
                    Ok(Omega)
                } else {
                    Err(E::custom(format!("unknown count {v:?}")))
                }
            }
        }
        d.deserialize_any(V)
    }
}
