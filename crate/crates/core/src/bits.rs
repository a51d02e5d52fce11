//! Bitstrings and the Hamming-weight promise classes shared by every task.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A bitstring `x_1 x_2 ... x_n`. Stored 0-based; the leftmost character of
/// the textual form is `x_1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn zeros(n: usize) -> Self {
        BitString(vec![false; n])
    }

    /// Builds the string whose `x_1` is the most significant of the `n` low bits of `value`.
    pub fn from_u64(value: u64, n: usize) -> Self {
        BitString((0..n).map(|i| (value >> (n - 1 - i)) & 1 == 1).collect())
    }

    pub fn to_u64(&self) -> u64 {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | u64::from(b))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Bit at 0-based position `i`.
    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn hamming(&self, other: &BitString) -> Result<usize> {
        self.check_len(other.len())?;
        Ok(self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count())
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        self.check_len(other.len())?;
        Ok(BitString(
            self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect(),
        ))
    }

    pub fn complement(&self) -> BitString {
        BitString(self.0.iter().map(|b| !b).collect())
    }

    /// Deletes the 1-based positions `i < j`, keeping the rest in ascending order.
    pub fn without_positions(&self, i: usize, j: usize) -> BitString {
        BitString(
            self.0
                .iter()
                .enumerate()
                .filter(|&(p, _)| p + 1 != i && p + 1 != j)
                .map(|(_, &b)| b)
                .collect(),
        )
    }

    /// Every bitstring of length `n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = BitString> {
        assert!(n < 64, "enumeration limited to n < 64");
        (0..1u64 << n).map(move |v| BitString::from_u64(v, n))
    }

    pub fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: self.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Classification of a weight (or distance) `w` against the promise
/// `{0, 1, n-1, n}` (answer 1) versus `{n/2}` (answer 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PromiseClass {
    Yes,
    No,
    Undefined,
}

impl PromiseClass {
    pub fn of_weight(n: usize, w: usize) -> Self {
        if w == 0 || w == 1 || w + 1 == n || w == n {
            PromiseClass::Yes
        } else if 2 * w == n {
            PromiseClass::No
        } else {
            PromiseClass::Undefined
        }
    }

    pub fn answer(self) -> Option<u8> {
        match self {
            PromiseClass::Yes => Some(1),
            PromiseClass::No => Some(0),
            PromiseClass::Undefined => None,
        }
    }

    pub fn is_promise(self) -> bool {
        self != PromiseClass::Undefined
    }
}

/// `n` must be even and at least 4; at `n = 2` the two classes intersect.
pub fn check_n(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::InvalidN {
            n,
            reason: "n must be at least 4",
        });
    }
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidN {
            n,
            reason: "n must be even",
        });
    }
    Ok(())
}

/// Smallest `k` with `2^k >= m` (and 0 for `m <= 1`).
pub fn ceil_log2(m: usize) -> usize {
    if m <= 1 {
        0
    } else {
        (usize::BITS - (m - 1).leading_zeros()) as usize
    }
}
