use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Yosida level `n` of the smoothing operator `J_n = (I - Delta/n)^{-1}`.
///
/// `Infinite` disables smoothing (`J_inf = I`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegLevel {
    Finite(u64),
    Infinite,
}

impl RegLevel {
    pub fn finite(n: u64) -> Result<RegLevel> {
        if n == 0 {
            Err(Error::InvalidParameter("regularization level must be >= 1".into()))
        } else {
            Ok(RegLevel::Finite(n))
        }
    }

    /// Multiplier `1/(1 + lambda/n)` of `J_n` on an eigenmode.
    #[inline]
    pub fn resolvent(self, lambda: f64) -> f64 {
        match self {
            RegLevel::Finite(n) => 1.0 / (1.0 + lambda / n as f64),
            RegLevel::Infinite => 1.0,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, RegLevel::Infinite)
    }

    /// `n` as a float, `+inf` for the unsmoothed level.
    pub fn as_f64(self) -> f64 {
        match self {
            RegLevel::Finite(n) => n as f64,
            RegLevel::Infinite => f64::INFINITY,
        }
    }

    /// Wire encoding used by checkpoints: 0 stands for infinity.
    pub fn to_wire(self) -> u64 {
        match self {
            RegLevel::Finite(n) => n,
            RegLevel::Infinite => 0,
        }
    }

    pub fn from_wire(w: u64) -> RegLevel {
        if w == 0 {
            RegLevel::Infinite
        } else {
            RegLevel::Finite(w)
        }
    }
}

impl fmt::Display for RegLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegLevel::Finite(n) => write!(f, "{n}"),
            RegLevel::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for RegLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(RegLevel::Infinite),
            other => other
                .parse::<u64>()
                .map_err(|_| Error::InvalidParameter(format!("bad regularization level `{other}`")))
                .and_then(RegLevel::finite),
        }
    }
}

impl Serialize for RegLevel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RegLevel::Finite(n) => s.serialize_u64(*n),
            RegLevel::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for RegLevel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(n) => RegLevel::finite(n).map_err(serde::de::Error::custom),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Which regularized problem a run solves.
///
/// `Strong`: data smoothed by `J_n^2`, nonlinearities smoothed by `J_n^2`.
/// `FiniteEnergy`: data smoothed once by `J_n`, unsmoothed nonlinearities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Strong,
    FiniteEnergy,
}

impl Mode {
    /// Level used inside the nonlinear terms.
    pub fn coupling_level(self, n: RegLevel) -> RegLevel {
        match self {
            Mode::Strong => n,
            Mode::FiniteEnergy => RegLevel::Infinite,
        }
    }

    /// Number of `J_n` applications to the initial data.
    pub fn data_power(self) -> i32 {
        match self {
            Mode::Strong => 2,
            Mode::FiniteEnergy => 1,
        }
    }
}
