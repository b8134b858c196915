//! Exact rational similarity thresholds.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Relative Hamming radius `β ∈ [0, 1]`, kept as a reduced fraction so that
/// threshold tests such as `d_H ≤ β·ℓ` are evaluated in integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Beta(Ratio<u64>);

impl Beta {
    pub const ZERO: Beta = Beta(Ratio::new_raw(0, 1));
    pub const ONE: Beta = Beta(Ratio::new_raw(1, 1));

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("beta denominator is zero".into()));
        }
        if num > den {
            return Err(Error::Domain(format!("beta {num}/{den} exceeds 1")));
        }
        Ok(Beta(Ratio::new(num, den)))
    }

    pub fn ratio(self) -> Ratio<u64> {
        self.0
    }

    pub fn numer(self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(self) -> u64 {
        *self.0.denom()
    }

    pub fn is_zero(self) -> bool {
        self.numer() == 0
    }

    pub fn to_f64(self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// `d ≤ β·len`, i.e. `den·d ≤ num·len`.
    pub fn admits(self, distance: usize, len: usize) -> bool {
        (self.denom() as u128) * (distance as u128) <= (self.numer() as u128) * (len as u128)
    }

    /// `d < β·len`.
    pub fn admits_strictly(self, distance: usize, len: usize) -> bool {
        (self.denom() as u128) * (distance as u128) < (self.numer() as u128) * (len as u128)
    }

    /// `⌊β·len⌋`, the integer Hamming radius for a block of length `len`.
    pub fn radius(self, len: usize) -> usize {
        ((self.numer() as u128 * len as u128) / self.denom() as u128) as usize
    }

    /// `⌈β·len⌉`, the smallest integer distance meeting `d ≥ β·len`.
    pub fn min_distance(self, len: usize) -> usize {
        let prod = self.numer() as u128 * len as u128;
        prod.div_ceil(self.denom() as u128) as usize
    }

    /// Compares `β` against the threshold `(q−1)/q`.
    pub fn cmp_threshold(self, q: usize) -> std::cmp::Ordering {
        let lhs = self.numer() as u128 * q as u128;
        let rhs = (q as u128 - 1) * self.denom() as u128;
        lhs.cmp(&rhs)
    }
}

impl Default for Beta {
    fn default() -> Self {
        Beta::ZERO
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Beta {
    type Err = Error;

    /// Accepts `num/den`, `0` or `1`. Decimal literals are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |part: &str| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad beta literal {s:?}; expected num/den")))
        };
        match s.split_once('/') {
            Some((n, d)) => Beta::new(parse(n)?, parse(d)?),
            None if s == "0" => Ok(Beta::ZERO),
            None if s == "1" => Ok(Beta::ONE),
            None => Err(Error::Parse(format!(
                "bad beta literal {s:?}; expected num/den, 0 or 1"
            ))),
        }
    }
}

impl serde::Serialize for Beta {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Beta {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_literals() {
        assert_eq!("0".parse::<Beta>().unwrap(), Beta::ZERO);
        assert_eq!("1".parse::<Beta>().unwrap(), Beta::ONE);
        assert_eq!("2/4".parse::<Beta>().unwrap(), Beta::new(1, 2).unwrap());
        assert_eq!("3/4".parse::<Beta>().unwrap().to_string(), "3/4");
        assert!("0.5".parse::<Beta>().is_err());
        assert!("5/4".parse::<Beta>().is_err());
        assert!("1/0".parse::<Beta>().is_err());
    }

    #[test]
    fn integer_threshold_tests() {
        let half = Beta::new(1, 2).unwrap();
        assert!(half.admits(1, 2));
        assert!(!half.admits(2, 2));
        assert!(!half.admits_strictly(1, 2));
        assert_eq!(half.radius(5), 2);
        assert_eq!(half.min_distance(5), 3);
        assert_eq!(Beta::new(3, 5).unwrap().min_distance(5), 3);
        assert_eq!(half.cmp_threshold(2), std::cmp::Ordering::Equal);
        assert_eq!(Beta::ONE.cmp_threshold(2), std::cmp::Ordering::Greater);
        assert_eq!(half.cmp_threshold(3), std::cmp::Ordering::Less);
    }
}
