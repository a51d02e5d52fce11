use serde::Serialize;

use qlab_core::commproto::{BoundReport, CostLedger, EqRunResult};
use qlab_core::harness::{DjVerification, EqVerification, QcfaVerification};
use qlab_core::qcfa::{DfaLowerBound, QcfaDescription, QcfaRunResult, Verdict};
use qlab_core::queryalg::QueryRunResult;
use qlab_core::{PromiseClass, RunMode};

#[derive(Serialize)]
pub struct Timings {
    pub elapsed_ms: f64,
}

#[derive(Serialize)]
pub struct ModeView {
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl From<RunMode> for ModeView {
    fn from(m: RunMode) -> Self {
        match m {
            RunMode::Explore => ModeView {
                mode: "explore",
                seed: None,
            },
            RunMode::Sample(seed) => ModeView {
                mode: "sample",
                seed: Some(seed),
            },
        }
    }
}

#[derive(Serialize)]
pub struct Input {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
}

#[derive(Serialize)]
pub struct AnswerBranch {
    pub outcome: Vec<String>,
    pub prob: f64,
    pub answer: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qubits: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bits: Option<usize>,
}

#[derive(Serialize)]
pub struct DjRun {
    pub task: &'static str,
    pub n: usize,
    pub input: Input,
    pub promise: PromiseClass,
    #[serde(flatten)]
    pub mode: ModeView,
    pub answer: Option<u8>,
    pub queries: usize,
    pub branches: Vec<AnswerBranch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl DjRun {
    pub fn new(r: &QueryRunResult, promise: PromiseClass, mode: RunMode) -> Self {
        DjRun {
            task: "dj",
            n: r.n,
            input: Input {
                x: Some(r.input.to_string()),
                y: None,
                word: None,
            },
            promise,
            mode: mode.into(),
            answer: r.answer,
            queries: r.query_count,
            branches: r
                .branches
                .iter()
                .map(|b| AnswerBranch {
                    outcome: b.path(),
                    prob: b.prob,
                    answer: b.answer,
                    qubits: None,
                    bits: None,
                })
                .collect(),
            timings: None,
        }
    }
}

#[derive(Serialize)]
pub struct EqRun {
    pub task: &'static str,
    pub n: usize,
    pub input: Input,
    pub promise: PromiseClass,
    #[serde(flatten)]
    pub mode: ModeView,
    pub answer: Option<u8>,
    /// Largest ledger among the explored branches.
    pub ledger: CostLedger,
    pub cost_formula: CostLedger,
    pub branches: Vec<AnswerBranch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl EqRun {
    pub fn new(r: &EqRunResult, promise: PromiseClass, mode: RunMode, formula: CostLedger) -> Self {
        let ledger = r
            .branches
            .iter()
            .map(|b| &b.transcript.ledger)
            .max_by_key(|l| (l.qubits_total + l.bits_total, l.per_step.len()))
            .cloned()
            .unwrap_or_default();
        EqRun {
            task: "eq",
            n: r.n,
            input: Input {
                x: Some(r.x.to_string()),
                y: Some(r.y.to_string()),
                word: None,
            },
            promise,
            mode: mode.into(),
            answer: r.answer,
            ledger,
            cost_formula: formula,
            branches: r
                .branches
                .iter()
                .map(|b| AnswerBranch {
                    outcome: std::iter::once(b.first.to_string())
                        .chain(b.second.map(|s| s.to_string()))
                        .collect(),
                    prob: b.prob,
                    answer: b.answer,
                    qubits: Some(b.transcript.ledger.qubits_total),
                    bits: Some(b.transcript.ledger.bits_total),
                })
                .collect(),
            timings: None,
        }
    }
}

#[derive(Serialize)]
pub struct VerdictBranch {
    pub outcome: Vec<String>,
    pub prob: f64,
    pub verdict: Verdict,
    pub trapped: bool,
}

#[derive(Serialize)]
pub struct QcfaRun {
    pub task: &'static str,
    pub n: usize,
    pub input: Input,
    pub oracle: &'static str,
    #[serde(flatten)]
    pub mode: ModeView,
    pub verdict: Option<Verdict>,
    pub accept_prob: f64,
    pub quantum_dim: usize,
    pub classical_states_used: usize,
    pub branches: Vec<VerdictBranch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl QcfaRun {
    pub fn new(n: usize, r: &QcfaRunResult, oracle: PromiseClass, mode: RunMode) -> Self {
        QcfaRun {
            task: "qcfa",
            n,
            input: Input {
                x: None,
                y: None,
                word: Some(r.word.to_string()),
            },
            oracle: match oracle {
                PromiseClass::Yes => "accept",
                PromiseClass::No => "reject",
                PromiseClass::Undefined => "undefined",
            },
            mode: mode.into(),
            verdict: r.verdict,
            accept_prob: r.accept_prob(),
            quantum_dim: r.quantum_dim,
            classical_states_used: r.classical_states_used,
            branches: r
                .branches
                .iter()
                .map(|b| VerdictBranch {
                    outcome: b.measurements.iter().map(|m| m.outcome.clone()).collect(),
                    prob: b.prob,
                    verdict: b.verdict,
                    trapped: b.trapped,
                })
                .collect(),
            timings: None,
        }
    }
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum VerifyResult {
    Dj(DjVerification),
    Eq(EqVerification),
    Qcfa(QcfaVerification),
}

#[derive(Serialize)]
pub struct Verify {
    pub task: &'static str,
    pub passed: bool,
    pub result: VerifyResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Serialize)]
pub struct ClassicalDepth {
    pub task: &'static str,
    pub n: usize,
    pub depth: usize,
    pub quantum_queries: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Serialize)]
pub struct Bound {
    pub task: &'static str,
    pub n: usize,
    pub bounds: BoundReport,
    pub dfa_lower_bound: Option<DfaLowerBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Serialize)]
pub struct Describe {
    pub task: &'static str,
    pub n: usize,
    pub machine: QcfaDescription,
}
