use serde::Serialize;

use super::transcript::{CostLedger, Direction, MessageKind, Payload, Transcript};
use crate::bits::{ceil_log2, check_n, BitString, PromiseClass};
use crate::error::{Error, Result};
use crate::mode::{BranchSelector, RunOptions};
use crate::qcore::{
    basis_state, measure_branches, MeasurementSpec, OutcomeGroup, StateVector, Tolerances,
    UnitaryOp,
};
use crate::queryalg::{BasisIndexing, BasisLabel, DjOperators};

/// Alice's `x` and Bob's `y`, both of length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromisePair {
    n: usize,
    x: BitString,
    y: BitString,
}

impl PromisePair {
    pub fn new(n: usize, x: BitString, y: BitString) -> Result<Self> {
        check_n(n)?;
        x.check_len(n)?;
        y.check_len(n)?;
        Ok(PromisePair { n, x, y })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &BitString {
        &self.x
    }

    pub fn y(&self) -> &BitString {
        &self.y
    }

    pub fn hd(&self) -> usize {
        self.x.hamming(&self.y).expect("lengths checked")
    }

    /// All `(x, y)` with a promise distance, ordered by `x` then `y`.
    pub fn promise_pairs(n: usize) -> Result<Vec<PromisePair>> {
        check_n(n)?;
        let all: Vec<BitString> = BitString::all(n).collect();
        let mut out = Vec::new();
        for x in &all {
            for y in &all {
                let d = x.hamming(y)?;
                if PromiseClass::of_weight(n, d).is_promise() {
                    out.push(PromisePair {
                        n,
                        x: x.clone(),
                        y: y.clone(),
                    });
                }
            }
        }
        Ok(out)
    }
}

/// `1` if `H(x,y)` is in `{0, 1, n-1, n}`, `0` if `H(x,y) = n/2`.
pub fn eq_prime_oracle(p: &PromisePair) -> PromiseClass {
    PromiseClass::of_weight(p.n, p.hd())
}

/// Worst-path charges: `ceil(log2 n^2)` qubits at step 3, `2 ceil(log2 n)`
/// bits at step 6 and `ceil(log2(n-2))` qubits at step 9.
pub fn cost_formula(n: usize) -> Result<CostLedger> {
    check_n(n)?;
    let mut ledger = CostLedger::default();
    ledger.charge(3, MessageKind::Quantum, ceil_log2(n * n));
    ledger.charge(6, MessageKind::Classical, 2 * ceil_log2(n));
    ledger.charge(9, MessageKind::Quantum, ceil_log2(n - 2));
    Ok(ledger)
}

fn encode_index(value: usize, width: usize) -> impl Iterator<Item = bool> {
    (0..width).rev().map(move |b| (value >> b) & 1 == 1)
}

fn decode_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
}

/// `+-1` diagonal flipping every basis state tied to a set bit of `bits`.
fn phase_diagonal(dim: usize, targets: impl Iterator<Item = (usize, bool)>) -> UnitaryOp {
    let mut flips = vec![false; dim];
    for (idx, bit) in targets {
        flips[idx] = bit;
    }
    UnitaryOp::sign_diagonal(&flips)
}

/// Alice sees only `x` and the messages addressed to her.
struct Alice<'a> {
    x: &'a BitString,
    ops: &'a DjOperators,
}

impl Alice<'_> {
    /// Steps 1-2: `U_x U1 |0,0>`.
    fn first_register(&self) -> Result<StateVector> {
        let ix = &self.ops.indexing;
        let psi = self.ops.u1.apply(&basis_state(ix.dim(), ix.zero_zero())?)?;
        let u_x = phase_diagonal(
            ix.dim(),
            (1..=ix.n()).map(|i| (ix.single(i), self.x.get(i - 1))),
        );
        u_x.apply(&psi)
    }

    /// Steps 7-8: delete positions `i, j` from `x`, then `U_{x'} U3 |1>`.
    fn second_register(&self, i: usize, j: usize) -> Result<StateVector> {
        let ix = &self.ops.indexing;
        let x_rest = self.x.without_positions(i, j);
        let psi = self.ops.u3.apply(&basis_state(ix.dim(), ix.aux(1))?)?;
        let u_x = phase_diagonal(
            ix.dim(),
            (1..=ix.n() - 2).map(|k| (ix.aux(k), x_rest.get(k - 1))),
        );
        u_x.apply(&psi)
    }
}

/// Bob sees only `y` and the messages addressed to him.
struct Bob<'a> {
    y: &'a BitString,
    ops: &'a DjOperators,
}

impl Bob<'_> {
    /// Steps 4-5: `U2 U_y` on the received register.
    fn first_round(&self, received: &StateVector) -> Result<StateVector> {
        let ix = &self.ops.indexing;
        let u_y = phase_diagonal(
            ix.dim(),
            (1..=ix.n()).map(|i| (ix.single(i), self.y.get(i - 1))),
        );
        self.ops.u2.apply(&u_y.apply(received)?)
    }

    /// Steps 10-11: `U4 U_{y'}`.
    fn second_round(&self, received: &StateVector, i: usize, j: usize) -> Result<StateVector> {
        let ix = &self.ops.indexing;
        let y_rest = self.y.without_positions(i, j);
        let u_y = phase_diagonal(
            ix.dim(),
            (1..=ix.n() - 2).map(|k| (ix.aux(k), y_rest.get(k - 1))),
        );
        self.ops.u4.apply(&u_y.apply(received)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqBranch {
    /// Bob's outcome at step 6.
    pub first: BasisLabel,
    /// Bob's outcome at step 12, on the long path.
    pub second: Option<BasisLabel>,
    pub prob: f64,
    pub answer: u8,
    pub transcript: Transcript,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqRunResult {
    pub n: usize,
    pub x: BitString,
    pub y: BitString,
    pub answer: Option<u8>,
    pub branches: Vec<EqBranch>,
}

/// The protocol's fixed operators for one `n`.
#[derive(Debug, Clone)]
pub struct EqProtocol {
    ops: DjOperators,
    step6: MeasurementSpec,
    step6_labels: Vec<Option<BasisLabel>>,
}

impl EqProtocol {
    pub fn new(n: usize, tol: &Tolerances) -> Result<Self> {
        let ops = DjOperators::new(n, tol)?;
        let (step6, step6_labels) = step6_measurement(&ops.indexing);
        Ok(EqProtocol {
            ops,
            step6,
            step6_labels,
        })
    }

    pub fn n(&self) -> usize {
        self.ops.n()
    }

    pub fn run(&self, p: &PromisePair, opts: &RunOptions) -> Result<EqRunResult> {
        if p.n != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                found: p.n,
            });
        }
        if !opts.allow_nonpromise && !eq_prime_oracle(p).is_promise() {
            return Err(Error::PromiseViolation(format!(
                "H({}, {}) = {} is neither in {{0, 1, n-1, n}} nor n/2",
                p.x,
                p.y,
                p.hd()
            )));
        }
        let n = self.n();
        let ix = &self.ops.indexing;
        let tol = &opts.tolerances;
        let alice = Alice {
            x: &p.x,
            ops: &self.ops,
        };
        let bob = Bob {
            y: &p.y,
            ops: &self.ops,
        };
        let mut selector = BranchSelector::new(opts.mode);
        let mut transcript = Transcript::new();

        let received = transcript
            .send_quantum(3, Direction::AliceToBob, alice.first_register()?, n * n)
            .clone();
        let psi4 = bob.first_round(&received)?;

        let width = ceil_log2(n);
        let final_m = MeasurementSpec::standard_basis(ix.dim());
        let mut branches = Vec::new();
        for b1 in selector.select(measure_branches(&psi4, &self.step6, tol)?) {
            let first = self.step6_labels[b1.outcome].ok_or_else(|| Error::ImpossibleOutcome {
                outcome: b1.label.clone(),
                prob: b1.prob,
            })?;
            let BasisLabel::Pair(bi, bj) = first else {
                branches.push(EqBranch {
                    first,
                    second: None,
                    prob: b1.prob,
                    answer: 1,
                    transcript: transcript.clone(),
                });
                continue;
            };

            let mut t = transcript.clone();
            let bits = encode_index(bi - 1, width)
                .chain(encode_index(bj - 1, width))
                .collect();
            let received_bits = t.send_classical(6, Direction::BobToAlice, bits);
            let (ai, aj) = (
                decode_index(&received_bits[..width]) + 1,
                decode_index(&received_bits[width..]) + 1,
            );
            let register = alice.second_register(ai, aj)?;
            let received = t
                .send_quantum(9, Direction::AliceToBob, register, n - 2)
                .clone();
            let psi8 = bob.second_round(&received, bi, bj)?;

            for b2 in selector.select(measure_branches(&psi8, &final_m, tol)?) {
                let second = ix.label(b2.outcome);
                if !matches!(second, BasisLabel::Aux(_)) {
                    return Err(Error::ImpossibleOutcome {
                        outcome: second.to_string(),
                        prob: b1.prob * b2.prob,
                    });
                }
                branches.push(EqBranch {
                    first,
                    second: Some(second),
                    prob: b1.prob * b2.prob,
                    answer: u8::from(second == BasisLabel::Aux(1)),
                    transcript: t.clone(),
                });
            }
        }

        let answer = branches
            .first()
            .map(|b| b.answer)
            .filter(|&a| branches.iter().all(|b| b.answer == a));
        Ok(EqRunResult {
            n,
            x: p.x.clone(),
            y: p.y.clone(),
            answer,
            branches,
        })
    }
}

/// Standard-basis measurement restricted to `|0,0>` and the `|i,j>`; the
/// `|i,0>` and `|k>` states form a single impossible group.
fn step6_measurement(ix: &BasisIndexing) -> (MeasurementSpec, Vec<Option<BasisLabel>>) {
    let mut groups = Vec::new();
    let mut labels = Vec::new();
    let mut other = Vec::new();
    for idx in 0..ix.dim() {
        let l = ix.label(idx);
        match l {
            BasisLabel::ZeroZero | BasisLabel::Pair(..) => {
                groups.push(OutcomeGroup {
                    label: l.to_string(),
                    indices: vec![idx],
                });
                labels.push(Some(l));
            }
            _ => other.push(idx),
        }
    }
    groups.push(OutcomeGroup {
        label: "other".to_string(),
        indices: other,
    });
    labels.push(None);
    let spec = MeasurementSpec::partition(ix.dim(), groups).expect("groups partition the basis");
    (spec, labels)
}

pub fn run_eq_protocol(p: &PromisePair, opts: &RunOptions) -> Result<EqRunResult> {
    EqProtocol::new(p.n, &opts.tolerances)?.run(p, opts)
}

impl EqBranch {
    /// The quantum payload of the message sent at `step`, if any.
    pub fn quantum_payload(&self, step: usize) -> Option<&StateVector> {
        self.transcript
            .messages
            .iter()
            .find(|m| m.step == step)
            .and_then(|m| match &m.payload {
                Payload::Quantum { state, .. } => Some(state),
                Payload::Classical(_) => None,
            })
    }
}
