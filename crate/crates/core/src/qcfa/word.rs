use std::fmt;

use serde::{Serialize, Serializer};

use crate::bits::{BitString, PromiseClass};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    LeftEnd,
    Zero,
    One,
    Hash,
    RightEnd,
}

impl Symbol {
    pub const ALL: [Symbol; 5] = [
        Symbol::LeftEnd,
        Symbol::Zero,
        Symbol::One,
        Symbol::Hash,
        Symbol::RightEnd,
    ];

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Symbol::One
        } else {
            Symbol::Zero
        }
    }

    pub fn bit(self) -> Option<bool> {
        match self {
            Symbol::Zero => Some(false),
            Symbol::One => Some(true),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbol::LeftEnd => "¢",
            Symbol::Zero => "0",
            Symbol::One => "1",
            Symbol::Hash => "#",
            Symbol::RightEnd => "$",
        })
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A tape `¢ w $`: the input word over `{0, 1, #}` between the end-markers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    symbols: Vec<Symbol>,
}

impl Word {
    /// Parses a bare word over `{0, 1, #}` and adds the end-markers.
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text
            .chars()
            .map(|c| match c {
                '0' => Ok(Symbol::Zero),
                '1' => Ok(Symbol::One),
                '#' => Ok(Symbol::Hash),
                other => Err(Error::Parse(format!("invalid word symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_inner(inner))
    }

    fn from_inner(inner: Vec<Symbol>) -> Self {
        let mut symbols = Vec::with_capacity(inner.len() + 2);
        symbols.push(Symbol::LeftEnd);
        symbols.extend(inner);
        symbols.push(Symbol::RightEnd);
        Word { symbols }
    }

    /// `x#y##x#y`.
    pub fn promise_shape(x: &BitString, y: &BitString) -> Self {
        let bits = |s: &BitString| {
            s.bits()
                .iter()
                .map(|&b| Symbol::from_bit(b))
                .collect::<Vec<_>>()
        };
        let mut inner = Vec::with_capacity(4 * x.len() + 3);
        for part in [
            bits(x),
            vec![Symbol::Hash],
            bits(y),
            vec![Symbol::Hash, Symbol::Hash],
        ] {
            inner.extend(part);
        }
        inner.extend(bits(x));
        inner.push(Symbol::Hash);
        inner.extend(bits(y));
        Self::from_inner(inner)
    }

    /// The full tape including end-markers.
    pub fn tape(&self) -> &[Symbol] {
        &self.symbols
    }

    /// The word without end-markers.
    pub fn inner(&self) -> &[Symbol] {
        &self.symbols[1..self.symbols.len() - 1]
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.inner() {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `Yes` for `x#y##x#y` with `H(x,y)` in `{0, 1, n-1, n}`, `No` when
/// `H(x,y) = n/2`, `Undefined` for any other word.
pub fn a_n_oracle(n: usize, word: &Word) -> PromiseClass {
    let parts: Vec<&[Symbol]> = word.inner().split(|&s| s == Symbol::Hash).collect();
    let [x, y, empty, x2, y2] = parts.as_slice() else {
        return PromiseClass::Undefined;
    };
    if !empty.is_empty() || x != x2 || y != y2 || x.len() != n || y.len() != n {
        return PromiseClass::Undefined;
    }
    let distance = x.iter().zip(y.iter()).filter(|(a, b)| a != b).count();
    PromiseClass::of_weight(n, distance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_examples() {
        let w = |s: &str| Word::parse(s).unwrap();
        assert_eq!(a_n_oracle(4, &w("1100#1100##1100#1100")), PromiseClass::Yes);
        assert_eq!(a_n_oracle(4, &w("1100#1010##1100#1010")), PromiseClass::No);
        assert_eq!(
            a_n_oracle(4, &w("1100#1010##1111#1010")),
            PromiseClass::Undefined
        );
        assert_eq!(
            a_n_oracle(4, &w("1100#1010#1100#1010")),
            PromiseClass::Undefined
        );
        assert_eq!(
            a_n_oracle(4, &w("110#101##110#101")),
            PromiseClass::Undefined
        );
    }

    #[test]
    fn promise_shape_round_trips() {
        let x: BitString = "1000".parse().unwrap();
        let y: BitString = "0000".parse().unwrap();
        let w = Word::promise_shape(&x, &y);
        assert_eq!(w.to_string(), "1000#0000##1000#0000");
        assert_eq!(w.tape().first(), Some(&Symbol::LeftEnd));
        assert_eq!(w.tape().last(), Some(&Symbol::RightEnd));
        assert_eq!(Word::parse("1000#0000##1000#0000").unwrap(), w);
    }

    #[test]
    fn rejects_foreign_symbols() {
        assert!(Word::parse("10$1").is_err());
    }
}
