use serde::Serialize;

use super::indexing::{BasisIndexing, BasisLabel};
use super::operators::DjOperators;
use super::oracle::{OracleMap, PhaseOracle};
use crate::bits::{check_n, BitString, PromiseClass};
use crate::error::{Error, Result};
use crate::mode::{BranchSelector, RunOptions};
use crate::qcore::{basis_state, measure_branches, MeasurementSpec, OutcomeGroup, UnitaryOp};

/// An `n`-bit input to `DJ'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DjInstance {
    n: usize,
    x: BitString,
}

impl DjInstance {
    pub fn new(n: usize, x: BitString) -> Result<Self> {
        check_n(n)?;
        x.check_len(n)?;
        Ok(DjInstance { n, x })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &BitString {
        &self.x
    }

    pub fn weight(&self) -> usize {
        self.x.weight()
    }

    /// Every input of length `n` satisfying the promise, in lexicographic order.
    pub fn promise_inputs(n: usize) -> Result<Vec<DjInstance>> {
        check_n(n)?;
        Ok(BitString::all(n)
            .filter(|x| PromiseClass::of_weight(n, x.weight()).is_promise())
            .map(|x| DjInstance { n, x })
            .collect())
    }
}

/// `1` if `W(x)` is in `{0, 1, n-1, n}`, `0` if `W(x) = n/2`, undefined otherwise.
pub fn dj_prime_oracle(inst: &DjInstance) -> PromiseClass {
    PromiseClass::of_weight(inst.n, inst.weight())
}

/// One root-to-leaf path through the algorithm's measurements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryBranch {
    /// Outcome of the measurement after `U2`.
    pub first: BasisLabel,
    /// Outcome of the final measurement of subalgorithm B, if it ran.
    pub second: Option<BasisLabel>,
    pub prob: f64,
    pub answer: u8,
    pub queries: usize,
}

impl QueryBranch {
    pub fn path(&self) -> Vec<String> {
        std::iter::once(self.first)
            .chain(self.second)
            .map(|l| l.to_string())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryRunResult {
    pub n: usize,
    pub input: BitString,
    /// Set when every branch gives the same answer.
    pub answer: Option<u8>,
    pub query_count: usize,
    pub branches: Vec<QueryBranch>,
}

impl QueryRunResult {
    pub fn total_prob(&self) -> f64 {
        self.branches.iter().map(|b| b.prob).sum()
    }
}

/// Outcome groups `{|0,0>}`, each `{|i,j>}`, and everything else as `"other"`.
fn first_measurement(ix: &BasisIndexing) -> (MeasurementSpec, Vec<Option<BasisLabel>>) {
    let mut groups = vec![OutcomeGroup {
        label: BasisLabel::ZeroZero.to_string(),
        indices: vec![ix.zero_zero()],
    }];
    let mut labels = vec![Some(BasisLabel::ZeroZero)];
    for (i, j) in ix.pairs() {
        let l = BasisLabel::Pair(i, j);
        groups.push(OutcomeGroup {
            label: l.to_string(),
            indices: vec![ix.pair(i, j)],
        });
        labels.push(Some(l));
    }
    let other = (1..=ix.n())
        .map(|i| ix.single(i))
        .chain((1..=ix.n() - 2).map(|k| ix.aux(k)))
        .collect();
    groups.push(OutcomeGroup {
        label: "other".to_string(),
        indices: other,
    });
    labels.push(None);
    let spec = MeasurementSpec::partition(ix.dim(), groups).expect("groups partition the basis");
    (spec, labels)
}

/// Transposition of `|i,j>` and `|1>`, preparing subalgorithm B's start state.
fn prepare_aux_one(ix: &BasisIndexing, i: usize, j: usize) -> UnitaryOp {
    let mut images: Vec<usize> = (0..ix.dim()).collect();
    images.swap(ix.pair(i, j), ix.aux(1));
    UnitaryOp::permutation(&images).expect("transposition is a permutation")
}

pub fn run_dj_prime(inst: &DjInstance, opts: &RunOptions) -> Result<QueryRunResult> {
    let ops = DjOperators::new(inst.n, &opts.tolerances)?;
    run_dj_prime_with(&ops, inst, opts)
}

/// Runs `U1, Q, U2`, measures, and on an `|i,j>` outcome runs subalgorithm B
/// (`U3, Q, U4`, measure) against the residual bits. The `|0,0>` branch still
/// issues its second query, against an empty map, so every path costs two.
pub fn run_dj_prime_with(
    ops: &DjOperators,
    inst: &DjInstance,
    opts: &RunOptions,
) -> Result<QueryRunResult> {
    if ops.n() != inst.n {
        return Err(Error::LengthMismatch {
            expected: ops.n(),
            found: inst.n,
        });
    }
    if !opts.allow_nonpromise && !dj_prime_oracle(inst).is_promise() {
        return Err(Error::PromiseViolation(format!(
            "W({}) = {} is neither in {{0, 1, n-1, n}} nor n/2",
            inst.x,
            inst.weight()
        )));
    }
    let tol = &opts.tolerances;
    let ix = &ops.indexing;
    let mut selector = BranchSelector::new(opts.mode);
    let mut oracle = PhaseOracle::new(&inst.x);

    let psi = basis_state(ix.dim(), ix.zero_zero())?;
    let psi = ops.u1.apply(&psi)?;
    let psi = oracle.query(&psi, &OracleMap::first_query(ix))?;
    let psi = ops.u2.apply(&psi)?;

    let (first_m, first_labels) = first_measurement(ix);
    let second_m = MeasurementSpec::standard_basis(ix.dim());
    let mut branches = Vec::new();

    for b1 in selector.select(measure_branches(&psi, &first_m, tol)?) {
        let Some(first) = first_labels[b1.outcome] else {
            return Err(Error::ImpossibleOutcome {
                outcome: b1.label,
                prob: b1.prob,
            });
        };
        let mut path_oracle = oracle.clone();
        match first {
            BasisLabel::ZeroZero => {
                path_oracle.query(&b1.collapsed, &OracleMap::empty(ix.dim()))?;
                branches.push(QueryBranch {
                    first,
                    second: None,
                    prob: b1.prob,
                    answer: 1,
                    queries: path_oracle.queries(),
                });
            }
            BasisLabel::Pair(i, j) => {
                let psi = prepare_aux_one(ix, i, j).apply(&b1.collapsed)?;
                let psi = ops.u3.apply(&psi)?;
                let psi = path_oracle.query(&psi, &OracleMap::residual(ix, i, j))?;
                let psi = ops.u4.apply(&psi)?;
                for b2 in selector.select(measure_branches(&psi, &second_m, tol)?) {
                    let second = ix.label(b2.outcome);
                    if !matches!(second, BasisLabel::Aux(_)) {
                        return Err(Error::ImpossibleOutcome {
                            outcome: second.to_string(),
                            prob: b1.prob * b2.prob,
                        });
                    }
                    branches.push(QueryBranch {
                        first,
                        second: Some(second),
                        prob: b1.prob * b2.prob,
                        answer: u8::from(second == BasisLabel::Aux(1)),
                        queries: path_oracle.queries(),
                    });
                }
            }
            _ => unreachable!("first measurement labels are |0,0> or |i,j>"),
        }
    }

    let answer = branches
        .first()
        .map(|b| b.answer)
        .filter(|&a| branches.iter().all(|b| b.answer == a));
    let query_count = branches.iter().map(|b| b.queries).max().unwrap_or(0);
    Ok(QueryRunResult {
        n: inst.n,
        input: inst.x.clone(),
        answer,
        query_count,
        branches,
    })
}
