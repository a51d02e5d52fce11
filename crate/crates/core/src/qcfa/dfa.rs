use serde::Serialize;

use super::machine::Verdict;
use super::word::{Symbol, Word};
use crate::bits::{check_n, PromiseClass};
use crate::commproto::max_pure_fooling_subset;
use crate::error::{Error, Result};

pub const DFA_MAX_N: usize = 8;
pub const DFA_LOWER_BOUND_MAX_N: usize = 12;

fn column(symbol: Symbol) -> Option<usize> {
    match symbol {
        Symbol::Zero => Some(0),
        Symbol::One => Some(1),
        Symbol::Hash => Some(2),
        _ => None,
    }
}

/// A complete DFA over `{0, 1, #}`.
#[derive(Debug, Clone, Serialize)]
pub struct DfaSpec {
    pub n: usize,
    /// `transitions[s][c]` for columns `0`, `1`, `#`.
    pub transitions: Vec<[u32; 3]>,
    pub start: u32,
    pub accepting: Vec<bool>,
    pub trap: u32,
}

impl DfaSpec {
    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    /// Number of states reachable from the start state.
    pub fn reachable_count(&self) -> usize {
        let mut seen = vec![false; self.state_count()];
        let mut stack = vec![self.start];
        seen[self.start as usize] = true;
        while let Some(s) = stack.pop() {
            for &t in &self.transitions[s as usize] {
                if !std::mem::replace(&mut seen[t as usize], true) {
                    stack.push(t);
                }
            }
        }
        seen.iter().filter(|&&b| b).count()
    }
}

/// `(2^{n+1}-1)(2^n+1) + 4^n (2n+2) + 3`: x-trie, one y-trie per x, one
/// repetition matcher per (x, y), plus accept, reject and trap.
pub fn reference_dfa_state_count(n: usize) -> u128 {
    let trie = (1u128 << (n + 1)) - 1;
    trie * ((1u128 << n) + 1) + (1u128 << (2 * n)) * (2 * n as u128 + 2) + 3
}

/// Brute-force recognizer: remember `x`, then `y`, then check the repeated
/// `#x#y` symbol by symbol. Pairs outside the promise end in the trap.
pub fn build_reference_dfa(n: usize) -> Result<DfaSpec> {
    check_n(n)?;
    if n > DFA_MAX_N {
        return Err(Error::CostGuard {
            op: "build_reference_dfa",
            n,
            limit: DFA_MAX_N,
        });
    }
    let trie = (1usize << (n + 1)) - 1;
    let node = |depth: usize, prefix: usize| (1usize << depth) - 1 + prefix;
    let x_base = 0;
    let y_base = trie;
    let m_len = 2 * n + 2;
    let m_base = y_base + (1 << n) * trie;
    let accept = m_base + (1 << (2 * n)) * m_len;
    let reject = accept + 1;
    let trap = accept + 2;
    let total = trap + 1;

    let mut transitions = vec![[trap as u32; 3]; total];
    let mut accepting = vec![false; total];
    accepting[accept] = true;
    let mut set = |s: usize, c: usize, t: usize| transitions[s][c] = t as u32;

    for depth in 0..=n {
        for prefix in 0..1usize << depth {
            let s = x_base + node(depth, prefix);
            if depth < n {
                for b in 0..2 {
                    set(s, b, x_base + node(depth + 1, 2 * prefix + b));
                }
            } else {
                set(s, 2, y_base + prefix * trie);
            }
        }
    }
    for x in 0..1usize << n {
        for depth in 0..=n {
            for prefix in 0..1usize << depth {
                let s = y_base + x * trie + node(depth, prefix);
                if depth < n {
                    for b in 0..2 {
                        set(s, b, y_base + x * trie + node(depth + 1, 2 * prefix + b));
                    }
                } else {
                    set(s, 2, m_base + ((x << n) | prefix) * m_len);
                }
            }
        }
    }
    for x in 0..1usize << n {
        for y in 0..1usize << n {
            let base = m_base + ((x << n) | y) * m_len;
            let done = match PromiseClass::of_weight(n, (x ^ y).count_ones() as usize) {
                PromiseClass::Yes => accept,
                PromiseClass::No => reject,
                PromiseClass::Undefined => trap,
            };
            // Expected: the second `#`, then x, `#`, y (MSB first).
            for pos in 0..m_len {
                let expected = if pos == 0 || pos == n + 1 {
                    2
                } else if pos <= n {
                    x >> (n - pos) & 1
                } else {
                    y >> (2 * n + 1 - pos) & 1
                };
                let next = if pos + 1 == m_len {
                    done
                } else {
                    base + pos + 1
                };
                set(base + pos, expected, next);
            }
        }
    }
    Ok(DfaSpec {
        n,
        transitions,
        start: x_base as u32,
        accepting,
        trap: trap as u32,
    })
}

pub fn run_dfa(dfa: &DfaSpec, word: &Word) -> Verdict {
    let mut s = dfa.start;
    for &sym in word.inner() {
        s = match column(sym) {
            Some(c) => dfa.transitions[s as usize][c],
            None => dfa.trap,
        };
    }
    Verdict::from_bool(dfa.accepting[s as usize])
}

/// A lower bound on the state count of any DFA that is correct on the
/// promise words, with the argument spelled out.
#[derive(Debug, Clone, Serialize)]
pub struct DfaLowerBound {
    pub n: usize,
    pub fooling_subset_size: usize,
    pub fooling_subset_exact: bool,
    pub bound: usize,
    pub certificate: String,
}

pub fn dfa_size_lower_bound(n: usize) -> Result<DfaLowerBound> {
    check_n(n)?;
    if n > DFA_LOWER_BOUND_MAX_N {
        return Err(Error::CostGuard {
            op: "dfa_size_lower_bound",
            n,
            limit: DFA_LOWER_BOUND_MAX_N,
        });
    }
    let f = max_pure_fooling_subset(n)?;
    let size = f.members.len();
    let bound = crate::commproto::ceil_cube_root(size);
    let certificate = format!(
        "Let M be a DFA with s states that is correct on every promise word x#y##x#y (n = {n}). \
         Alice holds x, Bob holds y. Alice runs M on ¢x# and sends the state; Bob continues on \
         y## and sends the state; Alice continues on x# and sends the state; Bob finishes on y$ \
         and outputs M's verdict. This deterministic protocol computes the promise problem with \
         3 messages of ceil(log2 s) bits, so it has at most s^3 transcripts. The set F below has \
         {size} 1-inputs (x,y) such that for any two members (x,y), (x',y') one of (x,y'), (x',y) \
         is a 0-input; equal transcripts on two members would force the same transcript, hence \
         the same output, on both cross pairs. So s^3 >= |F| = {size} and s >= {bound}. F: {}",
        f.members
            .iter()
            .map(|(x, y)| format!("({x},{y})"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    Ok(DfaLowerBound {
        n,
        fooling_subset_size: size,
        fooling_subset_exact: f.exact,
        bound,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_matches_builder() {
        for n in [4, 6] {
            let dfa = build_reference_dfa(n).unwrap();
            assert_eq!(dfa.state_count() as u128, reference_dfa_state_count(n));
            assert_eq!(dfa.reachable_count(), dfa.state_count());
        }
        assert_eq!(reference_dfa_state_count(4), 3090);
    }

    #[test]
    fn examples_n4() {
        let dfa = build_reference_dfa(4).unwrap();
        let run = |w: &str| run_dfa(&dfa, &Word::parse(w).unwrap());
        assert_eq!(run("1100#1100##1100#1100"), Verdict::Accept);
        assert_eq!(run("1100#1010##1100#1010"), Verdict::Reject);
        assert_eq!(run("1100#1100##1100#1100#"), Verdict::Reject);
        assert_eq!(run("1100#1100#1100#1100"), Verdict::Reject);
        assert_eq!(run(""), Verdict::Reject);
    }

    #[test]
    fn guards() {
        assert!(build_reference_dfa(10).is_err());
        assert!(dfa_size_lower_bound(14).is_err());
    }

    #[test]
    fn lower_bound_n4() {
        let b = dfa_size_lower_bound(4).unwrap();
        assert_eq!((b.fooling_subset_size, b.bound), (3, 2));
    }
}
