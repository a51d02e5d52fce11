use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{check_n, BitString, PromiseClass};
use crate::commproto::{cost_formula, eq_prime_oracle, EqProtocol, PromisePair};
use crate::error::{Error, Result};
use crate::mode::RunOptions;
use crate::qcfa::{a_n_oracle, build_a_n, build_reference_dfa, run_dfa, run_qcfa, Verdict, Word};
use crate::qcore::Tolerances;
use crate::queryalg::{run_dj_prime_with, DjInstance, DjOperators};

pub const DJ_VERIFY_MAX_N: usize = 16;
pub const EQ_VERIFY_MAX_N: usize = 10;
pub const QCFA_VERIFY_MAX_N: usize = 8;

/// Failure messages kept per report; the count is always exact.
const MAX_EXAMPLES: usize = 16;

fn guard(op: &'static str, n: usize, limit: usize) -> Result<()> {
    check_n(n)?;
    if n > limit {
        return Err(Error::CostGuard { op, n, limit });
    }
    Ok(())
}

fn explore(tol: &Tolerances) -> RunOptions {
    RunOptions {
        tolerances: *tol,
        ..RunOptions::explore()
    }
}

/// Ordered list of per-input failures, flattened and truncated.
fn collect_failures(per_input: Vec<Vec<String>>) -> (usize, Vec<String>) {
    let all: Vec<String> = per_input.into_iter().flatten().collect();
    let count = all.len();
    (count, all.into_iter().take(MAX_EXAMPLES).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct DjVerification {
    pub n: usize,
    pub inputs_checked: usize,
    pub failure_count: usize,
    pub failures: Vec<String>,
}

impl DjVerification {
    pub fn all_exact(&self) -> bool {
        self.failure_count == 0
    }
}

/// Runs `DJ'` in explore mode on every promise input; every branch must
/// answer correctly with two queries and probabilities must sum to 1.
pub fn verify_dj(n: usize, tol: &Tolerances) -> Result<DjVerification> {
    guard("verify_dj", n, DJ_VERIFY_MAX_N)?;
    let ops = DjOperators::new(n, tol)?;
    let opts = explore(tol);
    let inputs = DjInstance::promise_inputs(n)?;
    let per_input = inputs
        .par_iter()
        .map(|inst| -> Result<Vec<String>> {
            let expected = crate::queryalg::dj_prime_oracle(inst).answer();
            let r = run_dj_prime_with(&ops, inst, &opts)?;
            let mut bad = Vec::new();
            for b in &r.branches {
                if Some(b.answer) != expected {
                    bad.push(format!(
                        "x={}: branch {:?} answered {}",
                        inst.x(),
                        b.path(),
                        b.answer
                    ));
                }
                if b.queries != 2 {
                    bad.push(format!(
                        "x={}: branch {:?} used {} queries",
                        inst.x(),
                        b.path(),
                        b.queries
                    ));
                }
            }
            if (r.total_prob() - 1.0).abs() > tol.norm {
                bad.push(format!(
                    "x={}: branch probabilities sum to {}",
                    inst.x(),
                    r.total_prob()
                ));
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?;
    let (failure_count, failures) = collect_failures(per_input);
    Ok(DjVerification {
        n,
        inputs_checked: inputs.len(),
        failure_count,
        failures,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EqVerification {
    pub n: usize,
    pub pairs_checked: usize,
    pub long_paths: usize,
    pub answer_failures: usize,
    pub ledger_failures: usize,
    pub failures: Vec<String>,
}

impl EqVerification {
    pub fn all_exact(&self) -> bool {
        self.answer_failures == 0
    }

    pub fn ledger_ok(&self) -> bool {
        self.ledger_failures == 0
    }
}

/// Runs the `EQ'` protocol on every promise pair. Long paths must be charged
/// exactly the worst-case ledger; the early exit only the first message.
pub fn verify_eq(n: usize, tol: &Tolerances) -> Result<EqVerification> {
    guard("verify_eq", n, EQ_VERIFY_MAX_N)?;
    let protocol = EqProtocol::new(n, tol)?;
    let opts = explore(tol);
    let worst = cost_formula(n)?;
    let pairs = PromisePair::promise_pairs(n)?;

    #[derive(Default)]
    struct Tally {
        long: usize,
        answers: Vec<String>,
        ledgers: Vec<String>,
    }
    let tallies = pairs
        .par_iter()
        .map(|p| -> Result<Tally> {
            let expected = eq_prime_oracle(p).answer();
            let r = protocol.run(p, &opts)?;
            let mut t = Tally::default();
            for b in &r.branches {
                let path = format!("x={}, y={}, outcome {}", p.x(), p.y(), b.first);
                if Some(b.answer) != expected {
                    t.answers.push(format!("{path}: answered {}", b.answer));
                }
                let ledger = &b.transcript.ledger;
                let ok = if b.second.is_some() {
                    t.long += 1;
                    *ledger == worst
                } else {
                    ledger.per_step.as_slice() == &worst.per_step[..1]
                };
                if !ok || !b.transcript.is_consistent() {
                    t.ledgers
                        .push(format!("{path}: ledger {:?}", ledger.per_step));
                }
            }
            let total: f64 = r.branches.iter().map(|b| b.prob).sum();
            if (total - 1.0).abs() > tol.norm {
                t.answers.push(format!(
                    "x={}, y={}: probabilities sum to {total}",
                    p.x(),
                    p.y()
                ));
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;

    let long_paths = tallies.iter().map(|t| t.long).sum();
    let (answer_failures, mut failures) =
        collect_failures(tallies.iter().map(|t| t.answers.clone()).collect());
    let (ledger_failures, ledger_examples) =
        collect_failures(tallies.into_iter().map(|t| t.ledgers).collect());
    failures.extend(ledger_examples);
    failures.truncate(MAX_EXAMPLES);
    Ok(EqVerification {
        n,
        pairs_checked: pairs.len(),
        long_paths,
        answer_failures,
        ledger_failures,
        failures,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct QcfaVerification {
    pub n: usize,
    pub words_checked: usize,
    pub failure_count: usize,
    pub quantum_dim: usize,
    pub classical_states_reachable: usize,
    /// Largest number of distinct classical states visited by one run.
    pub classical_states_used_max: usize,
    pub dfa_states: Option<usize>,
    pub dfa_disagreements: Option<usize>,
    pub failures: Vec<String>,
}

impl QcfaVerification {
    pub fn all_exact(&self) -> bool {
        self.failure_count == 0
    }

    pub fn dfa_agrees(&self) -> Option<bool> {
        self.dfa_disagreements.map(|d| d == 0)
    }
}

/// All promise words `x#y##x#y` at `n`, ordered by `x` then `y`.
pub(crate) fn promise_words(n: usize) -> Vec<Word> {
    let all: Vec<BitString> = BitString::all(n).collect();
    let mut out = Vec::new();
    for x in &all {
        for y in &all {
            let d = x.hamming(y).expect("same length");
            if PromiseClass::of_weight(n, d).is_promise() {
                out.push(Word::promise_shape(x, y));
            }
        }
    }
    out
}

/// Runs `A(n)` in explore mode on every promise word; every branch must end
/// with the oracle's verdict, none trapped. Optionally cross-checks the
/// reference DFA on the same words.
pub fn verify_qcfa(n: usize, tol: &Tolerances, against_dfa: bool) -> Result<QcfaVerification> {
    guard("verify_qcfa", n, QCFA_VERIFY_MAX_N)?;
    let spec = build_a_n(n, tol)?;
    let dfa = if against_dfa {
        Some(build_reference_dfa(n)?)
    } else {
        None
    };
    let opts = explore(tol);
    let words = promise_words(n);

    let results = words
        .par_iter()
        .map(|w| -> Result<(Vec<String>, usize, bool)> {
            let expected = match a_n_oracle(n, w) {
                PromiseClass::Yes => Verdict::Accept,
                PromiseClass::No => Verdict::Reject,
                PromiseClass::Undefined => unreachable!("promise words only"),
            };
            let r = run_qcfa(&spec, w, &opts)?;
            let mut bad = Vec::new();
            for b in &r.branches {
                if b.verdict != expected || b.trapped {
                    let path: Vec<&str> =
                        b.measurements.iter().map(|m| m.outcome.as_str()).collect();
                    bad.push(format!(
                        "{w}: branch {path:?} ended in {} ({})",
                        b.trace.last().expect("non-empty trace"),
                        b.verdict
                    ));
                }
            }
            if (r.total_prob() - 1.0).abs() > tol.norm {
                bad.push(format!("{w}: probabilities sum to {}", r.total_prob()));
            }
            let dfa_ok = dfa.as_ref().is_none_or(|d| run_dfa(d, w) == expected);
            Ok((bad, r.classical_states_used, dfa_ok))
        })
        .collect::<Result<Vec<_>>>()?;

    let used_max = results.iter().map(|r| r.1).max().unwrap_or(0);
    let disagreements = results.iter().filter(|r| !r.2).count();
    let (failure_count, failures) = collect_failures(results.into_iter().map(|r| r.0).collect());
    Ok(QcfaVerification {
        n,
        words_checked: words.len(),
        failure_count,
        quantum_dim: spec.quantum_dim(),
        classical_states_reachable: spec.reachable_states().len(),
        classical_states_used_max: used_max,
        dfa_states: dfa.as_ref().map(|d| d.state_count()),
        dfa_disagreements: dfa.map(|_| disagreements),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_verifications_pass() {
        let tol = Tolerances::default();
        let dj = verify_dj(4, &tol).unwrap();
        assert!(dj.all_exact(), "{:?}", dj.failures);
        assert_eq!(dj.inputs_checked, 16);
        let eq = verify_eq(4, &tol).unwrap();
        assert!(eq.all_exact() && eq.ledger_ok(), "{:?}", eq.failures);
        assert_eq!(eq.pairs_checked, 256);
        let q = verify_qcfa(4, &tol, true).unwrap();
        assert!(q.all_exact(), "{:?}", q.failures);
        assert_eq!((q.words_checked, q.dfa_agrees()), (256, Some(true)));
    }

    #[test]
    fn guards_apply() {
        let tol = Tolerances::default();
        assert!(matches!(verify_eq(12, &tol), Err(Error::CostGuard { .. })));
        assert!(matches!(
            verify_qcfa(3, &tol, false),
            Err(Error::InvalidN { .. })
        ));
    }
}
