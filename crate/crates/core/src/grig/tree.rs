use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A vertex of the binary rooted tree, given by its path from the root.
/// The level is the number of bits; the empty path is the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(Vec<u8>);

impl Vertex {
    pub fn root() -> Self {
        Vertex(Vec::new())
    }

    /// Panics if any entry is not 0 or 1.
    pub fn from_bits(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "vertex bits must be 0 or 1");
        Vertex(bits)
    }

    /// The vertex of level `level` whose path, read as a binary number with
    /// the first step most significant, equals `index`.
    pub fn from_index(index: usize, level: usize) -> Self {
        Vertex(
            (0..level)
                .map(|i| ((index >> (level - 1 - i)) & 1) as u8)
                .collect(),
        )
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub(crate) fn bits_mut(&mut self) -> &mut [u8] {
        &mut self.0
    }

    pub fn is_prefix_of(&self, other: &Vertex) -> bool {
        other.0.starts_with(&self.0)
    }

    /// All vertices of the given level in index order.
    pub fn level_set(level: usize) -> impl Iterator<Item = Vertex> {
        (0..1usize << level).map(move |i| Vertex::from_index(i, level))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidVertex {
                    input: s.to_string(),
                }),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Vertex)
    }
}

/// An eventually periodic point of the boundary: `preperiod · period^∞`.
///
/// Values are kept in canonical form (primitive period, shortest preperiod),
/// so structural equality is equality of the represented sequences.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryPoint {
    preperiod: Vec<u8>,
    period: Vec<u8>,
}

impl BoundaryPoint {
    pub fn new(preperiod: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        let input = || format!("{preperiod:?}({period:?})");
        if period.is_empty() {
            return Err(Error::InvalidBoundaryPoint {
                input: input(),
                reason: "period must be nonempty",
            });
        }
        if preperiod.iter().chain(&period).any(|&b| b > 1) {
            return Err(Error::InvalidBoundaryPoint {
                input: input(),
                reason: "bits must be 0 or 1",
            });
        }
        Ok(Self::canonical(preperiod, period))
    }

    /// The constant sequence `bit^∞`.
    pub fn constant(bit: u8) -> Self {
        Self::canonical(Vec::new(), vec![bit & 1])
    }

    fn canonical(mut preperiod: Vec<u8>, mut period: Vec<u8>) -> Self {
        let p = period.len();
        if let Some(root) = (1..=p)
            .filter(|d| p % d == 0)
            .find(|&d| (d..p).all(|i| period[i] == period[i - d]))
        {
            period.truncate(root);
        }
        while let Some(&last) = preperiod.last() {
            if last != *period.last().expect("nonempty period") {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        BoundaryPoint { preperiod, period }
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn bit(&self, i: usize) -> u8 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Vertex {
        Vertex((0..n).map(|i| self.bit(i)).collect())
    }

    /// Drops the first `n` coordinates.
    pub fn shift(&self, n: usize) -> BoundaryPoint {
        if n <= self.preperiod.len() {
            Self::canonical(self.preperiod[n..].to_vec(), self.period.clone())
        } else {
            let mut period = self.period.clone();
            period.rotate_left((n - self.preperiod.len()) % self.period.len());
            Self::canonical(Vec::new(), period)
        }
    }

    /// Positions where `self` and `other` differ, or `None` when they differ
    /// in infinitely many coordinates.
    pub fn differences(&self, other: &BoundaryPoint) -> Option<Vec<usize>> {
        let start = self.preperiod.len().max(other.preperiod.len());
        let window = lcm(self.period.len(), other.period.len());
        if (start..start + window).any(|i| self.bit(i) != other.bit(i)) {
            return None;
        }
        Some((0..start).filter(|&i| self.bit(i) != other.bit(i)).collect())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.preperiod {
            write!(f, "{b}")?;
        }
        write!(f, "(")?;
        for b in &self.period {
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for BoundaryPoint {
    type Err = Error;

    /// Parses `"pre(period)"`, e.g. `"01(1)"` for `0111…`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason| Error::InvalidBoundaryPoint {
            input: s.to_string(),
            reason,
        };
        let body = s.strip_suffix(')').ok_or_else(|| bad("missing ')'"))?;
        let (pre, period) = body.split_once('(').ok_or_else(|| bad("missing '('"))?;
        let parse_bits = |part: &str| {
            part.chars()
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    _ => Err(bad("bits must be '0' or '1'")),
                })
                .collect::<Result<Vec<u8>>>()
        };
        let pre = parse_bits(pre)?;
        let period = parse_bits(period)?;
        if period.is_empty() {
            return Err(bad("period must be nonempty"));
        }
        Ok(Self::canonical(pre, period))
    }
}

macro_rules! string_serde {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                serializer.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(
                deserializer: D,
            ) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(deserializer)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(Vertex);
string_serde!(BoundaryPoint);
