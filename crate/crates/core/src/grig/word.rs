use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// One of the four standard generators. Every generator is an involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gen {
    A,
    B,
    C,
    D,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::A, Gen::B, Gen::C, Gen::D];

    pub fn as_char(self) -> char {
        match self {
            Gen::A => 'a',
            Gen::B => 'b',
            Gen::C => 'c',
            Gen::D => 'd',
        }
    }

    pub fn from_char(c: char) -> Option<Gen> {
        match c {
            'a' => Some(Gen::A),
            'b' => Some(Gen::B),
            'c' => Some(Gen::C),
            'd' => Some(Gen::D),
            _ => None,
        }
    }

    /// True for b, c and d, which together with e form a Klein four-group.
    pub fn is_klein(self) -> bool {
        self != Gen::A
    }

    /// Product of two letters when it collapses to at most one letter.
    ///
    /// Returns `Some(None)` for the identity, `Some(Some(g))` for a single
    /// letter and `None` when the pair does not simplify (a next to b, c or d).
    pub fn combine(self, other: Gen) -> Option<Option<Gen>> {
        if self == other {
            return Some(None);
        }
        if self.is_klein() && other.is_klein() {
            let third = [Gen::B, Gen::C, Gen::D]
                .into_iter()
                .find(|g| *g != self && *g != other)
                .expect("three Klein letters");
            return Some(Some(third));
        }
        None
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A word over `{a, b, c, d}`. The empty word is the identity.
///
/// Words compose like functions: in `w = l1 l2 ... lk` the rightmost letter
/// `lk` acts first.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupWord(Vec<Gen>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    pub fn new(letters: Vec<Gen>) -> Self {
        GroupWord(letters)
    }

    pub fn letter(g: Gen) -> Self {
        GroupWord(vec![g])
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The product `self * other`; `other` acts first.
    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        GroupWord(letters)
    }

    /// Group inverse. All generators are involutions, so this is the reversal.
    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().copied().collect())
    }

    /// Free reduction with `a^2 = b^2 = c^2 = d^2 = e` and the Klein table
    /// `bc = cb = d`, `bd = db = c`, `cd = dc = b`.
    ///
    /// The result alternates between `a` and a letter of `{b, c, d}`.
    pub fn reduced(&self) -> GroupWord {
        let mut stack: Vec<Gen> = Vec::with_capacity(self.0.len());
        for &letter in &self.0 {
            let mut incoming = Some(letter);
            while let Some(x) = incoming {
                match stack.last().and_then(|&top| top.combine(x)) {
                    Some(product) => {
                        stack.pop();
                        incoming = product;
                    }
                    None => {
                        stack.push(x);
                        incoming = None;
                    }
                }
            }
        }
        GroupWord(stack)
    }

    pub fn count(&self, g: Gen) -> usize {
        self.0.iter().filter(|&&l| l == g).count()
    }
}

impl From<Gen> for GroupWord {
    fn from(g: Gen) -> Self {
        GroupWord::letter(g)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.0 {
            write!(f, "{}", g.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    /// Parses a string over `abcd`. The letter `e` denotes the identity and
    /// is dropped, so `"e"` and `""` both parse to the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            match Gen::from_char(c) {
                Some(g) => letters.push(g),
                None if c == 'e' => {}
                None => {
                    return Err(Error::InvalidWord {
                        input: s.to_string(),
                        found: c,
                    })
                }
            }
        }
        Ok(GroupWord(letters))
    }
}

impl Serialize for GroupWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Words in length-lexicographic order, the numeration used wherever the
/// group has to be enumerated (the identity comes first).
pub fn words_up_to(max_len: usize) -> impl Iterator<Item = GroupWord> {
    (0..=max_len).flat_map(|len| {
        let total = 4usize.pow(len as u32);
        (0..total).map(move |mut code| {
            let mut letters = vec![Gen::A; len];
            for slot in letters.iter_mut().rev() {
                *slot = Gen::ALL[code % 4];
                code /= 4;
            }
            GroupWord(letters)
        })
    })
}
