//! The variable alphabet `{t_{k,i}, a_j, z_j, ℏ}`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A single variable.
///
/// The derived order (`ℏ < a < z < t`) is the canonical order used when
/// printing and when orienting theta arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// The equivariant parameter ℏ.
    Hbar,
    /// Equivariant parameter `a_j` of the D5 brane `A_j` (1-based).
    A(u16),
    /// Kähler (dynamical) parameter `z_j` of the NS5 brane `Z_j` (1-based).
    Z(u16),
    /// Chern root `t_{k,i}` of the tautological bundle on D3 brane `X_k`, `k ≤ 0`.
    T(i16, u16),
}

impl Var {
    /// Shorthand for `a_j`.
    pub fn a(j: usize) -> Var {
        Var::A(j as u16)
    }

    /// Shorthand for `z_j`.
    pub fn z(j: usize) -> Var {
        Var::Z(j as u16)
    }

    /// Shorthand for `t_{k,i}`.
    pub fn t(k: i64, i: usize) -> Var {
        Var::T(k as i16, i as u16)
    }

    /// Whether this is a Chern-root variable.
    pub fn is_t(&self) -> bool {
        matches!(self, Var::T(..))
    }

    /// Whether this is a Chern root on a D3 brane strictly left of `X_0`.
    pub fn is_t_negative(&self) -> bool {
        matches!(self, Var::T(k, _) if *k < 0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Hbar => write!(f, "hbar"),
            Var::A(j) => write!(f, "a_{j}"),
            Var::Z(j) => write!(f, "z_{j}"),
            Var::T(k, i) => write!(f, "t_{{{k},{i}}}"),
        }
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Var> {
        let bad = || Error::Parse(format!("unknown variable `{s}`"));
        if s == "hbar" || s == "h" {
            return Ok(Var::Hbar);
        }
        if let Some(rest) = s.strip_prefix("t_") {
            let inner = rest
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(bad)?;
            let (k, i) = inner.split_once(',').ok_or_else(bad)?;
            let k: i16 = k.trim().parse().map_err(|_| bad())?;
            let i: u16 = i.trim().parse().map_err(|_| bad())?;
            if k > 0 || i == 0 {
                return Err(bad());
            }
            return Ok(Var::T(k, i));
        }
        let idx = |r: &str| -> Result<u16> {
            let j: u16 = r.parse().map_err(|_| bad())?;
            if j == 0 {
                Err(bad())
            } else {
                Ok(j)
            }
        };
        if let Some(rest) = s.strip_prefix("a_") {
            return Ok(Var::A(idx(rest)?));
        }
        if let Some(rest) = s.strip_prefix("z_") {
            return Ok(Var::Z(idx(rest)?));
        }
        Err(bad())
    }
}

impl serde::Serialize for Var {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Var {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Var, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
