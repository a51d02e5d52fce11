use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{check_n, BitString, PromiseClass};
use crate::error::{Error, Result};

pub const FOOLING_MAX_N: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FoolingCase {
    /// `n/2` even: `E = {(x,x), (x, not x) : W(x) = n/2}`.
    EvenHalf,
    /// `n = 4k+2`: `E = {(x,x') : W(x) = n/2, x_n = 1}` with `x'` flipping
    /// every bit but the last.
    OddHalf,
}

impl FoolingCase {
    pub fn of(n: usize) -> Self {
        if (n / 2).is_multiple_of(2) {
            FoolingCase::EvenHalf
        } else {
            FoolingCase::OddHalf
        }
    }

    pub fn number(self) -> u8 {
        match self {
            FoolingCase::EvenHalf => 1,
            FoolingCase::OddHalf => 2,
        }
    }

    /// `|x ^ y|` at which two members are forced apart: `n/4`, or `k+1` for `n = 4k+2`.
    pub fn critical_intersection(self, n: usize) -> usize {
        match self {
            FoolingCase::EvenHalf => n / 4,
            FoolingCase::OddHalf => (n - 2) / 4 + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoolingViolation {
    pub first: usize,
    pub second: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoolingReport {
    pub n: usize,
    pub case: FoolingCase,
    pub pairs: Vec<(BitString, BitString)>,
    pub violations: Vec<FoolingViolation>,
    pub cross_checks_passed: usize,
}

/// Members of `E` as bitmasks, `x_1` most significant.
pub(crate) fn fooling_masks(n: usize) -> Result<(FoolingCase, Vec<(u64, u64)>)> {
    check_n(n)?;
    if n >= 64 {
        return Err(Error::CostGuard {
            op: "build_fooling_set",
            n,
            limit: 63,
        });
    }
    let full = (1u64 << n) - 1;
    let half: Vec<u64> = (0..=full)
        .filter(|x| x.count_ones() as usize == n / 2)
        .collect();
    let case = FoolingCase::of(n);
    let pairs = match case {
        FoolingCase::EvenHalf => half
            .iter()
            .map(|&x| (x, x))
            .chain(half.iter().map(|&x| (x, x ^ full)))
            .collect(),
        FoolingCase::OddHalf => half
            .iter()
            .filter(|&&x| x & 1 == 1)
            .map(|&x| (x, (x ^ full) | 1))
            .collect(),
    };
    Ok((case, pairs))
}

pub fn build_fooling_set(n: usize) -> Result<FoolingReport> {
    let (case, masks) = fooling_masks(n)?;
    Ok(FoolingReport {
        n,
        case,
        pairs: masks
            .iter()
            .map(|&(a, b)| (BitString::from_u64(a, n), BitString::from_u64(b, n)))
            .collect(),
        violations: Vec::new(),
        cross_checks_passed: 0,
    })
}

/// Checks that every member of `E` is a 1-input and that every ordered pair
/// of distinct members `(x,x'), (y,y')` meeting at the critical intersection
/// has `H(x, y') = n/2`, so the cross input is a 0-input.
pub fn verify_fooling_property(n: usize) -> Result<FoolingReport> {
    check_n(n)?;
    if n > FOOLING_MAX_N {
        return Err(Error::CostGuard {
            op: "verify_fooling_property",
            n,
            limit: FOOLING_MAX_N,
        });
    }
    let mut report = build_fooling_set(n)?;
    let (case, masks) = fooling_masks(n)?;
    let critical = case.critical_intersection(n) as u32;
    let dist = |a: u64, b: u64| (a ^ b).count_ones() as usize;

    let mut violations: Vec<FoolingViolation> = masks
        .iter()
        .enumerate()
        .filter(|(_, &(x, xp))| PromiseClass::of_weight(n, dist(x, xp)) != PromiseClass::Yes)
        .map(|(a, &(x, xp))| FoolingViolation {
            first: a,
            second: a,
            detail: format!("member is not a 1-input: H = {}", dist(x, xp)),
        })
        .collect();

    let per_member: Vec<(usize, Vec<FoolingViolation>)> = masks
        .par_iter()
        .enumerate()
        .map(|(a, &(x, _))| {
            let mut passed = 0;
            let mut bad = Vec::new();
            for (b, &(y, yp)) in masks.iter().enumerate() {
                if a == b || (x & y).count_ones() != critical {
                    continue;
                }
                let d = dist(x, yp);
                if 2 * d == n {
                    passed += 1;
                } else {
                    bad.push(FoolingViolation {
                        first: a,
                        second: b,
                        detail: format!("H(x, y') = {d}, expected {}", n / 2),
                    });
                }
            }
            (passed, bad)
        })
        .collect();

    for (passed, bad) in per_member {
        report.cross_checks_passed += passed;
        violations.extend(bad);
    }
    report.violations = violations;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_sizes() {
        assert_eq!(build_fooling_set(4).unwrap().pairs.len(), 12);
        assert_eq!(build_fooling_set(6).unwrap().pairs.len(), 10);
        assert_eq!(build_fooling_set(8).unwrap().pairs.len(), 140);
    }

    #[test]
    fn odd_half_members_share_last_bit() {
        let r = build_fooling_set(6).unwrap();
        assert_eq!(r.case, FoolingCase::OddHalf);
        for (x, xp) in &r.pairs {
            assert!(x.get(5) && xp.get(5));
            assert_eq!(x.hamming(xp).unwrap(), 5);
        }
    }

    #[test]
    fn n4_cross_checks() {
        let r = verify_fooling_property(4).unwrap();
        assert!(r.violations.is_empty());
        // 6 weight-2 strings, each meeting 4 others in one position, times
        // 2 variants on each side
        assert_eq!(r.cross_checks_passed, 96);
    }

    #[test]
    fn guard() {
        assert!(matches!(
            verify_fooling_property(14),
            Err(Error::CostGuard { .. })
        ));
    }
}
