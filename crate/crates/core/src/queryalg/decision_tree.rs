use std::collections::HashMap;

use crate::bits::{check_n, PromiseClass};
use crate::error::{Error, Result};

pub const DT_DEPTH_MAX_N: usize = 8;

/// Exact deterministic query complexity of `DJ'` at `n`, by memoized minimax
/// over partial assignments. A partial assignment is settled once every
/// promise completion gives the same answer.
pub fn classical_dt_depth(n: usize) -> Result<usize> {
    check_n(n)?;
    if n > DT_DEPTH_MAX_N {
        return Err(Error::CostGuard {
            op: "classical_dt_depth",
            n,
            limit: DT_DEPTH_MAX_N,
        });
    }
    let mut memo = HashMap::new();
    Ok(depth(n, 0, 0, &mut memo))
}

/// `known` marks queried positions, `ones` their values.
fn depth(n: usize, known: u32, ones: u32, memo: &mut HashMap<(u32, u32), usize>) -> usize {
    if let Some(&d) = memo.get(&(known, ones)) {
        return d;
    }
    let seen_ones = ones.count_ones() as usize;
    let unknown = n - known.count_ones() as usize;
    let mut answers =
        (seen_ones..=seen_ones + unknown).filter_map(|w| PromiseClass::of_weight(n, w).answer());
    let settled = match answers.next() {
        None => true,
        Some(first) => answers.all(|a| a == first),
    };
    let d = if settled {
        0
    } else {
        1 + (0..n)
            .filter(|&i| known & (1 << i) == 0)
            .map(|i| {
                let bit = 1 << i;
                depth(n, known | bit, ones, memo).max(depth(n, known | bit, ones | bit, memo))
            })
            .min()
            .expect("an unsettled assignment has an unqueried bit")
    };
    memo.insert((known, ones), d);
    d
}
