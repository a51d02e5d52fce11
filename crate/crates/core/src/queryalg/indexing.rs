use std::fmt;

use serde::{Serialize, Serializer};

use crate::bits::check_n;
use crate::error::Result;

/// Names of the basis states `|0,0>`, `|i,0>`, `|i,j>` (i < j) and `|k>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    ZeroZero,
    /// `|i,0>`, `1 <= i <= n`.
    Single(usize),
    /// `|i,j>`, `1 <= i < j <= n`.
    Pair(usize, usize),
    /// `|k>`, `1 <= k <= n - 2`.
    Aux(usize),
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::ZeroZero => write!(f, "|0,0>"),
            BasisLabel::Single(i) => write!(f, "|{i},0>"),
            BasisLabel::Pair(i, j) => write!(f, "|{i},{j}>"),
            BasisLabel::Aux(k) => write!(f, "|{k}>"),
        }
    }
}

impl Serialize for BasisLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Bijection between basis labels and `0..dim`, listing `|0,0>`, then the
/// `|i,0>`, then the `|i,j>` in lexicographic order, then the `|k>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisIndexing {
    n: usize,
}

impl BasisIndexing {
    pub fn new(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(BasisIndexing { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `1 + n + n(n-1)/2 + (n-2)`.
    pub fn dim(&self) -> usize {
        1 + self.n + self.pair_count() + (self.n - 2)
    }

    pub fn pair_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    pub fn zero_zero(&self) -> usize {
        0
    }

    pub fn single(&self, i: usize) -> usize {
        assert!((1..=self.n).contains(&i), "|i,0> needs 1 <= i <= n");
        i
    }

    pub fn pair(&self, i: usize, j: usize) -> usize {
        assert!(
            1 <= i && i < j && j <= self.n,
            "|i,j> needs 1 <= i < j <= n"
        );
        // pairs with first index a < i come first: sum of (n - a) for a in 1..i
        let before = (i - 1) * (2 * self.n - i) / 2;
        1 + self.n + before + (j - i - 1)
    }

    pub fn aux(&self, k: usize) -> usize {
        assert!((1..=self.n - 2).contains(&k), "|k> needs 1 <= k <= n-2");
        1 + self.n + self.pair_count() + (k - 1)
    }

    pub fn index(&self, label: BasisLabel) -> usize {
        match label {
            BasisLabel::ZeroZero => self.zero_zero(),
            BasisLabel::Single(i) => self.single(i),
            BasisLabel::Pair(i, j) => self.pair(i, j),
            BasisLabel::Aux(k) => self.aux(k),
        }
    }

    pub fn label(&self, index: usize) -> BasisLabel {
        let n = self.n;
        assert!(index < self.dim(), "basis index out of range");
        if index == 0 {
            return BasisLabel::ZeroZero;
        }
        if index <= n {
            return BasisLabel::Single(index);
        }
        let mut rest = index - 1 - n;
        if rest < self.pair_count() {
            for i in 1..n {
                let row = n - i;
                if rest < row {
                    return BasisLabel::Pair(i, i + 1 + rest);
                }
                rest -= row;
            }
            unreachable!("pair offset within pair_count");
        }
        BasisLabel::Aux(rest - self.pair_count() + 1)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n;
        (1..n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
    }

    pub fn labels(&self) -> Vec<BasisLabel> {
        (0..self.dim()).map(|idx| self.label(idx)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_formula() {
        assert_eq!(BasisIndexing::new(4).unwrap().dim(), 13);
        assert_eq!(BasisIndexing::new(6).unwrap().dim(), 26);
        assert_eq!(BasisIndexing::new(16).unwrap().dim(), 151);
    }

    #[test]
    fn bijection_in_listing_order() {
        for n in (4..=16).step_by(2) {
            let ix = BasisIndexing::new(n).unwrap();
            let labels = ix.labels();
            assert_eq!(labels.len(), ix.dim());
            for (idx, &l) in labels.iter().enumerate() {
                assert_eq!(ix.index(l), idx);
            }
            let mut sorted = labels.clone();
            sorted.sort();
            assert_eq!(
                sorted, labels,
                "listing order must be ZeroZero, Single, Pair(lex), Aux"
            );
        }
    }

    #[test]
    fn n4_layout() {
        let ix = BasisIndexing::new(4).unwrap();
        assert_eq!(ix.pair(1, 2), 5);
        assert_eq!(ix.pair(3, 4), 10);
        assert_eq!(ix.aux(1), 11);
        assert_eq!(ix.aux(2), 12);
        assert_eq!(ix.label(7).to_string(), "|1,4>");
    }

    #[test]
    fn rejects_bad_n() {
        assert!(BasisIndexing::new(5).is_err());
        assert!(BasisIndexing::new(2).is_err());
    }
}
