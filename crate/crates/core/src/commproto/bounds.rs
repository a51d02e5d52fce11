use serde::Serialize;

use super::fooling::{fooling_masks, FoolingCase, FOOLING_MAX_N};
use crate::bits::{check_n, BitString, PromiseClass};
use crate::error::Result;

/// The linear constant claimed for the deterministic lower bound. Reported
/// alongside the exact expression, never asserted.
pub const CLAIMED_LINEAR_CONSTANT: f64 = 0.0073;

/// Search-node budget for the exact maximum-clique search.
pub const CLIQUE_NODE_BUDGET: u64 = 20_000_000;

const BASE: f64 = 1.99;

/// Exact binomial coefficient, `None` on overflow.
fn binomial(n: u64, k: u64) -> Option<u128> {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(c)
}

fn log2_binomial(n: u64, k: u64) -> f64 {
    match binomial(n, k) {
        Some(c) => (c as f64).log2(),
        None => (0..k.min(n - k))
            .map(|i| ((n - i) as f64 / (i + 1) as f64).log2())
            .sum(),
    }
}

/// `|E|`: `2 C(n, n/2)` (even half) or `C(n-1, n/2-1)` (odd half); `None` past `u128`.
fn fooling_set_size(n: usize) -> Option<u128> {
    let n64 = n as u64;
    match FoolingCase::of(n) {
        FoolingCase::EvenHalf => binomial(n64, n64 / 2)?.checked_mul(2),
        FoolingCase::OddHalf => binomial(n64 - 1, n64 / 2 - 1),
    }
}

/// `log2(|E| / 1.99^m)` with `m = n` (even half) or `m = n - 1` (odd half).
pub fn c1_lower_log2(n: usize) -> Result<f64> {
    check_n(n)?;
    let n64 = n as u64;
    Ok(match FoolingCase::of(n) {
        FoolingCase::EvenHalf => 1.0 + log2_binomial(n64, n64 / 2) - n as f64 * BASE.log2(),
        FoolingCase::OddHalf => log2_binomial(n64 - 1, n64 / 2 - 1) - (n - 1) as f64 * BASE.log2(),
    })
}

/// `log2(2^{n+1} / (n 1.99^n))` (even half) or
/// `log2(2^{n-1} / ((n-1) 1.99^{n-1}))` (odd half), evaluated in log space.
pub fn d_lower_formula(n: usize) -> Result<f64> {
    check_n(n)?;
    let m = match FoolingCase::of(n) {
        FoolingCase::EvenHalf => n,
        FoolingCase::OddHalf => n - 1,
    };
    let exponent = match FoolingCase::of(n) {
        FoolingCase::EvenHalf => n + 1,
        FoolingCase::OddHalf => n - 1,
    };
    Ok(exponent as f64 - (m as f64).log2() - m as f64 * BASE.log2())
}

/// A subset of `E` in which every two members are separated by a 0-input cross pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoolingSubset {
    pub members: Vec<(BitString, BitString)>,
    /// False when the node budget ran out before optimality was proved.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub case: FoolingCase,
    pub e_size: Option<u128>,
    pub c1_lower: f64,
    pub d_lower_formula_value: f64,
    /// `0.0073 n`, for comparison only.
    pub linear_constant_value: f64,
    pub exceeds_linear_constant: bool,
    pub fooling_subset_size: Option<usize>,
    pub fooling_subset_exact: Option<bool>,
    pub dfa_size_bound: Option<usize>,
}

/// Smallest `s` with `s^3 >= m`.
pub(crate) fn ceil_cube_root(m: usize) -> usize {
    let mut s = 0;
    while s * s * s < m {
        s += 1;
    }
    s
}

pub fn rectangle_bound(n: usize) -> Result<BoundReport> {
    check_n(n)?;
    let case = FoolingCase::of(n);
    let e_size = fooling_set_size(n);
    let d = d_lower_formula(n)?;
    let linear = CLAIMED_LINEAR_CONSTANT * n as f64;
    let subset = if n <= FOOLING_MAX_N {
        Some(max_pure_fooling_subset(n)?)
    } else {
        None
    };
    Ok(BoundReport {
        n,
        case,
        e_size,
        c1_lower: c1_lower_log2(n)?,
        d_lower_formula_value: d,
        linear_constant_value: linear,
        exceeds_linear_constant: d > linear,
        fooling_subset_size: subset.as_ref().map(|s| s.members.len()),
        fooling_subset_exact: subset.as_ref().map(|s| s.exact),
        dfa_size_bound: subset.as_ref().map(|s| ceil_cube_root(s.members.len())),
    })
}

type Bitset = Vec<u64>;

fn set_bit(set: &mut [u64], i: usize) {
    set[i / 64] |= 1 << (i % 64);
}

fn first_member(set: &[u64]) -> Option<usize> {
    set.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn members(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, &word)| {
        (0..64)
            .filter(move |b| word >> b & 1 == 1)
            .map(move |b| w * 64 + b)
    })
}

/// Largest subset of `E` whose members pairwise conflict: for `(x,x'), (y,y')`
/// at least one of `(x,y')`, `(y,x')` is a 0-input. Found by branch and bound
/// with greedy-colouring bounds, seeded with a greedy clique.
pub fn max_pure_fooling_subset(n: usize) -> Result<FoolingSubset> {
    check_n(n)?;
    if n > FOOLING_MAX_N {
        return Err(crate::error::Error::CostGuard {
            op: "max_pure_fooling_subset",
            n,
            limit: FOOLING_MAX_N,
        });
    }
    let (_, masks) = fooling_masks(n)?;
    let is_zero_input = |a: u64, b: u64| {
        PromiseClass::of_weight(n, (a ^ b).count_ones() as usize) == PromiseClass::No
    };

    let words = masks.len().div_ceil(64);
    let adjacency: Vec<Bitset> = masks
        .iter()
        .enumerate()
        .map(|(a, &(x, xp))| {
            let mut row = vec![0u64; words];
            for (b, &(y, yp)) in masks.iter().enumerate() {
                if a != b && (is_zero_input(x, yp) || is_zero_input(y, xp)) {
                    set_bit(&mut row, b);
                }
            }
            row
        })
        .collect();

    // non-adjacent twins are interchangeable; keep the first of each class
    let mut keep = vec![0u64; words];
    let mut seen: Vec<&Bitset> = Vec::new();
    for (v, row) in adjacency.iter().enumerate() {
        if !seen.contains(&row) {
            seen.push(row);
            set_bit(&mut keep, v);
        }
    }

    let mut search = CliqueSearch {
        adjacency: &adjacency,
        best: Vec::new(),
        nodes: 0,
        budget: CLIQUE_NODE_BUDGET,
    };
    search.best = search.greedy(&keep);
    let mut current = Vec::new();
    search.expand(&mut current, keep);
    let exact = search.nodes <= search.budget;
    let mut best = search.best;
    best.sort_unstable();
    Ok(FoolingSubset {
        members: best
            .into_iter()
            .map(|v| {
                let (a, b) = masks[v];
                (BitString::from_u64(a, n), BitString::from_u64(b, n))
            })
            .collect(),
        exact,
    })
}

struct CliqueSearch<'a> {
    adjacency: &'a [Bitset],
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl CliqueSearch<'_> {
    fn greedy(&self, candidates: &[u64]) -> Vec<usize> {
        let mut clique = Vec::new();
        let mut cand = candidates.to_vec();
        while let Some(v) =
            members(&cand).max_by_key(|&v| intersect_count(&cand, &self.adjacency[v]))
        {
            clique.push(v);
            for (c, a) in cand.iter_mut().zip(&self.adjacency[v]) {
                *c &= a;
            }
        }
        clique
    }

    /// Greedy sequential colouring; returns vertices with their colour bound,
    /// ordered by increasing colour.
    fn colour_order(&self, candidates: &[u64]) -> Vec<(usize, usize)> {
        let mut uncoloured = candidates.to_vec();
        let mut order = Vec::new();
        let mut colour = 0;
        while uncoloured.iter().any(|&w| w != 0) {
            colour += 1;
            let mut available = uncoloured.clone();
            while let Some(v) = first_member(&available) {
                order.push((v, colour));
                available[v / 64] &= !(1 << (v % 64));
                uncoloured[v / 64] &= !(1 << (v % 64));
                for (a, adj) in available.iter_mut().zip(&self.adjacency[v]) {
                    *a &= !adj;
                }
            }
        }
        order
    }

    fn expand(&mut self, current: &mut Vec<usize>, mut candidates: Bitset) {
        self.nodes += 1;
        if self.nodes > self.budget {
            return;
        }
        let order = self.colour_order(&candidates);
        for &(v, colour) in order.iter().rev() {
            if current.len() + colour <= self.best.len() || self.nodes > self.budget {
                return;
            }
            current.push(v);
            let next: Bitset = candidates
                .iter()
                .zip(&self.adjacency[v])
                .map(|(c, a)| c & a)
                .collect();
            if next.iter().all(|&w| w == 0) {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else {
                self.expand(current, next);
            }
            current.pop();
            candidates[v / 64] &= !(1 << (v % 64));
        }
    }
}

fn intersect_count(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n8_formula_value() {
        // 9 - 3 - 8 log2(1.99)
        let expected = 9.0 - 3.0 - 8.0 * 1.99f64.log2();
        assert!((d_lower_formula(8).unwrap() - expected).abs() < 1e-12);
        assert!((d_lower_formula(8).unwrap() + 1.94).abs() < 0.01);
    }

    #[test]
    fn n4_subset_of_three() {
        let s = max_pure_fooling_subset(4).unwrap();
        assert!(s.exact);
        assert_eq!(s.members.len(), 3);
    }

    #[test]
    fn cube_root() {
        assert_eq!(ceil_cube_root(1), 1);
        assert_eq!(ceil_cube_root(3), 2);
        assert_eq!(ceil_cube_root(8), 2);
        assert_eq!(ceil_cube_root(9), 3);
    }

    #[test]
    fn subset_members_pairwise_conflict() {
        let n = 8;
        let s = max_pure_fooling_subset(n).unwrap();
        let zero = |a: &BitString, b: &BitString| 2 * a.hamming(b).unwrap() == n;
        for (i, (x, xp)) in s.members.iter().enumerate() {
            for (y, yp) in &s.members[i + 1..] {
                assert!(zero(x, yp) || zero(y, xp));
            }
        }
    }

    #[test]
    fn closed_form_sizes_match_enumeration() {
        for n in (4..=12).step_by(2) {
            assert_eq!(
                fooling_set_size(n),
                Some(fooling_masks(n).unwrap().1.len() as u128)
            );
        }
    }

    #[test]
    fn large_n_skips_search() {
        let r = rectangle_bound(40).unwrap();
        assert!(r.fooling_subset_size.is_none());
        assert!(!r.exceeds_linear_constant);
    }
}
