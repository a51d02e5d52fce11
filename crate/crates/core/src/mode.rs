use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::qcore::{Branch, Tolerances};

/// How measurements are resolved during a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    /// Follow every outcome with probability above the branch threshold.
    Explore,
    /// Draw one outcome per measurement from a seeded generator.
    Sample(u64),
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub mode: RunMode,
    pub tolerances: Tolerances,
    pub allow_nonpromise: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            mode: RunMode::Explore,
            tolerances: Tolerances::default(),
            allow_nonpromise: false,
        }
    }
}

impl RunOptions {
    pub fn explore() -> Self {
        Self::default()
    }

    pub fn sample(seed: u64) -> Self {
        RunOptions {
            mode: RunMode::Sample(seed),
            ..Self::default()
        }
    }

    pub fn allowing_nonpromise(mut self) -> Self {
        self.allow_nonpromise = true;
        self
    }
}

/// Resolves measurement branches according to the run mode. In sample mode
/// a single branch survives, chosen by inverse-CDF over the generator.
pub(crate) struct BranchSelector {
    rng: Option<ChaCha8Rng>,
}

impl BranchSelector {
    pub fn new(mode: RunMode) -> Self {
        BranchSelector {
            rng: match mode {
                RunMode::Explore => None,
                RunMode::Sample(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            },
        }
    }

    pub fn select(&mut self, mut branches: Vec<Branch>) -> Vec<Branch> {
        let Some(rng) = self.rng.as_mut() else {
            return branches;
        };
        let total: f64 = branches.iter().map(|b| b.prob).sum();
        let mut draw = rng.gen::<f64>() * total;
        let mut chosen = branches.len() - 1;
        for (idx, b) in branches.iter().enumerate() {
            if draw < b.prob {
                chosen = idx;
                break;
            }
            draw -= b.prob;
        }
        vec![branches.swap_remove(chosen)]
    }
}
