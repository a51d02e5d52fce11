use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use super::word::{Symbol, Word};
use crate::error::{Error, Result};
use crate::mode::{BranchSelector, RunOptions};
use crate::qcore::{measure_branches, MeasurementSpec, StateVector, Tolerances, UnitaryOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassicalState {
    Normal {
        i: usize,
        j: usize,
        p: usize,
    },
    Accept,
    Reject,
    /// Diagnostic sink for pairs that promise inputs never reach; rejecting.
    Trap,
}

impl ClassicalState {
    pub const fn normal(i: usize, j: usize, p: usize) -> Self {
        ClassicalState::Normal { i, j, p }
    }
}

impl fmt::Display for ClassicalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassicalState::Normal { i, j, p } => write!(f, "S({i},{j},{p})"),
            ClassicalState::Accept => f.write_str("accept"),
            ClassicalState::Reject => f.write_str("reject"),
            ClassicalState::Trap => f.write_str("trap"),
        }
    }
}

impl Serialize for ClassicalState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn from_bool(accept: bool) -> Self {
        if accept {
            Verdict::Accept
        } else {
            Verdict::Reject
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        })
    }
}

#[derive(Debug, Clone)]
struct Transition {
    operator: usize,
    measurement: Option<usize>,
    next: BTreeMap<usize, ClassicalState>,
}

/// A one-way QCFA: quantum register of fixed dimension, finite classical
/// control, and per-(state, symbol) unitary, measurement and classical update.
///
/// Operators and measurements live in tables and transitions refer to them by
/// index, so large machines share the handful of distinct matrices they use.
#[derive(Debug, Clone)]
pub struct QcfaSpec {
    name: String,
    quantum_dim: usize,
    initial_quantum: usize,
    initial_classical: ClassicalState,
    operators: Vec<(String, UnitaryOp)>,
    measurements: Vec<(String, MeasurementSpec)>,
    transitions: BTreeMap<(ClassicalState, Symbol), Transition>,
    accepting: BTreeSet<ClassicalState>,
    rejecting: BTreeSet<ClassicalState>,
    tolerances: Tolerances,
}

impl QcfaSpec {
    pub fn new(
        name: impl Into<String>,
        quantum_dim: usize,
        initial_quantum: usize,
        initial_classical: ClassicalState,
        tolerances: Tolerances,
    ) -> Result<Self> {
        if initial_quantum >= quantum_dim {
            return Err(Error::IndexOutOfRange {
                index: initial_quantum,
                dim: quantum_dim,
            });
        }
        Ok(QcfaSpec {
            name: name.into(),
            quantum_dim,
            initial_quantum,
            initial_classical,
            operators: Vec::new(),
            measurements: Vec::new(),
            transitions: BTreeMap::new(),
            accepting: BTreeSet::new(),
            rejecting: BTreeSet::new(),
            tolerances,
        })
    }

    /// Registers an operator; it is re-checked for unitarity at the machine's tolerance.
    pub fn add_operator(&mut self, name: impl Into<String>, op: UnitaryOp) -> Result<usize> {
        if op.dim() != self.quantum_dim {
            return Err(Error::DimensionMismatch {
                expected: self.quantum_dim,
                found: op.dim(),
            });
        }
        let report = op.check(self.tolerances.unitary);
        if !report.unitary {
            return Err(Error::NotUnitary {
                max_deviation: report.max_deviation,
                row: report.position.0,
                col: report.position.1,
            });
        }
        self.operators.push((name.into(), op));
        Ok(self.operators.len() - 1)
    }

    pub fn add_measurement(
        &mut self,
        name: impl Into<String>,
        m: MeasurementSpec,
    ) -> Result<usize> {
        if !m.is_identity() {
            let covered: usize = m.groups().iter().map(|g| g.indices.len()).sum();
            if covered != self.quantum_dim {
                return Err(Error::DimensionMismatch {
                    expected: self.quantum_dim,
                    found: covered,
                });
            }
        }
        self.measurements.push((name.into(), m));
        Ok(self.measurements.len() - 1)
    }

    /// Sets Θ, Δ and δ for one (state, symbol) pair. `measurement = None`
    /// is the identity measurement, whose single outcome is 0.
    pub fn set_transition(
        &mut self,
        state: ClassicalState,
        symbol: Symbol,
        operator: usize,
        measurement: Option<usize>,
        next: impl IntoIterator<Item = (usize, ClassicalState)>,
    ) -> Result<()> {
        if operator >= self.operators.len() {
            return Err(Error::IndexOutOfRange {
                index: operator,
                dim: self.operators.len(),
            });
        }
        if let Some(m) = measurement {
            if m >= self.measurements.len() {
                return Err(Error::IndexOutOfRange {
                    index: m,
                    dim: self.measurements.len(),
                });
            }
        }
        self.transitions.insert(
            (state, symbol),
            Transition {
                operator,
                measurement,
                next: next.into_iter().collect(),
            },
        );
        Ok(())
    }

    pub fn mark_accepting(&mut self, state: ClassicalState) {
        self.accepting.insert(state);
    }

    pub fn mark_rejecting(&mut self, state: ClassicalState) {
        self.rejecting.insert(state);
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn quantum_dim(&self) -> usize {
        self.quantum_dim
    }

    pub fn initial_classical(&self) -> ClassicalState {
        self.initial_classical
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }

    /// The operator table, in registration order.
    pub fn operators(&self) -> impl Iterator<Item = (&str, &UnitaryOp)> {
        self.operators.iter().map(|(name, op)| (name.as_str(), op))
    }

    pub fn is_halting(&self, state: ClassicalState) -> bool {
        self.accepting.contains(&state) || self.rejecting.contains(&state)
    }

    /// The unitary Θ(state, symbol), if defined.
    pub fn theta(&self, state: ClassicalState, symbol: Symbol) -> Option<&UnitaryOp> {
        self.transitions
            .get(&(state, symbol))
            .map(|t| &self.operators[t.operator].1)
    }

    /// Classical states reachable from the initial one, following every
    /// outcome of every defined measurement (halting states included).
    pub fn reachable_states(&self) -> BTreeSet<ClassicalState> {
        let mut seen = BTreeSet::from([self.initial_classical]);
        let mut stack = vec![self.initial_classical];
        while let Some(s) = stack.pop() {
            if self.is_halting(s) {
                continue;
            }
            for sym in Symbol::ALL {
                if let Some(t) = self.transitions.get(&(s, sym)) {
                    for &next in t.next.values() {
                        if seen.insert(next) {
                            stack.push(next);
                        }
                    }
                }
            }
        }
        seen
    }

    pub fn describe(&self) -> QcfaDescription {
        let transitions = self
            .transitions
            .iter()
            .map(|((state, symbol), t)| TransitionDescription {
                state: *state,
                symbol: *symbol,
                operator: self.operators[t.operator].0.clone(),
                measurement: t.measurement.map(|m| self.measurements[m].0.clone()),
                next: t
                    .next
                    .iter()
                    .map(|(&outcome, &s)| {
                        let label = match t.measurement {
                            Some(m) => self.measurements[m].1.label(outcome).to_string(),
                            None => "c".to_string(),
                        };
                        (label, s)
                    })
                    .collect(),
            })
            .collect();
        QcfaDescription {
            name: self.name.clone(),
            quantum_dim: self.quantum_dim,
            initial_quantum: self.initial_quantum,
            initial_classical: self.initial_classical,
            operators: self.operators.iter().map(|(n, _)| n.clone()).collect(),
            measurements: self.measurements.iter().map(|(n, _)| n.clone()).collect(),
            classical_states: self.reachable_states().into_iter().collect(),
            accepting: self.accepting.iter().copied().collect(),
            rejecting: self.rejecting.iter().copied().collect(),
            transitions,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransitionDescription {
    pub state: ClassicalState,
    pub symbol: Symbol,
    pub operator: String,
    pub measurement: Option<String>,
    pub next: Vec<(String, ClassicalState)>,
}

/// Inspection view of a [`QcfaSpec`]; operators appear by name only.
#[derive(Debug, Clone, Serialize)]
pub struct QcfaDescription {
    pub name: String,
    pub quantum_dim: usize,
    pub initial_quantum: usize,
    pub initial_classical: ClassicalState,
    pub operators: Vec<String>,
    pub measurements: Vec<String>,
    pub classical_states: Vec<ClassicalState>,
    pub accepting: Vec<ClassicalState>,
    pub rejecting: Vec<ClassicalState>,
    pub transitions: Vec<TransitionDescription>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementRecord {
    /// Tape position, 0 being the left end-marker.
    pub position: usize,
    pub symbol: Symbol,
    pub outcome: String,
    pub prob: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct QcfaBranch {
    pub verdict: Verdict,
    pub prob: f64,
    pub trapped: bool,
    pub measurements: Vec<MeasurementRecord>,
    /// Classical state before the first symbol and after each symbol.
    pub trace: Vec<ClassicalState>,
}

#[derive(Debug, Clone, Serialize)]
pub struct QcfaRunResult {
    pub word: Word,
    /// Common verdict of all branches, `None` if they disagree.
    pub verdict: Option<Verdict>,
    pub branches: Vec<QcfaBranch>,
    pub quantum_dim: usize,
    pub classical_states_used: usize,
}

impl QcfaRunResult {
    pub fn total_prob(&self) -> f64 {
        self.branches.iter().map(|b| b.prob).sum()
    }

    pub fn accept_prob(&self) -> f64 {
        self.branches
            .iter()
            .filter(|b| b.verdict == Verdict::Accept)
            .map(|b| b.prob)
            .sum()
    }
}

struct Frame {
    state: ClassicalState,
    psi: StateVector,
    prob: f64,
    measurements: Vec<MeasurementRecord>,
    trace: Vec<ClassicalState>,
}

/// Runs `spec` on `word`. Each symbol applies Θ, then Δ, then δ on the
/// observed outcome; halting states absorb the rest of the tape unchanged.
pub fn run_qcfa(spec: &QcfaSpec, word: &Word, opts: &RunOptions) -> Result<QcfaRunResult> {
    let mut selector = BranchSelector::new(opts.mode);
    let tol = &opts.tolerances;
    let identity = MeasurementSpec::identity();
    let mut frames = vec![Frame {
        state: spec.initial_classical,
        psi: StateVector::from_sparse(spec.quantum_dim, &[(spec.initial_quantum, 1.0.into())])?,
        prob: 1.0,
        measurements: Vec::new(),
        trace: vec![spec.initial_classical],
    }];

    for (position, &symbol) in word.tape().iter().enumerate() {
        let mut next_frames = Vec::with_capacity(frames.len());
        for mut frame in frames {
            if spec.is_halting(frame.state) {
                frame.trace.push(frame.state);
                next_frames.push(frame);
                continue;
            }
            let t = spec
                .transitions
                .get(&(frame.state, symbol))
                .ok_or_else(|| Error::UndefinedTransition {
                    state: frame.state.to_string(),
                    symbol: symbol.to_string(),
                })?;
            let psi = spec.operators[t.operator].1.apply(&frame.psi)?;
            let m = t.measurement.map_or(&identity, |m| &spec.measurements[m].1);
            let branches = selector.select(measure_branches(&psi, m, tol)?);
            for b in branches {
                let next = *t
                    .next
                    .get(&b.outcome)
                    .ok_or_else(|| Error::UndefinedTransition {
                        state: frame.state.to_string(),
                        symbol: format!("{symbol} (outcome {})", b.label),
                    })?;
                let mut measurements = frame.measurements.clone();
                if !m.is_identity() {
                    measurements.push(MeasurementRecord {
                        position,
                        symbol,
                        outcome: b.label.clone(),
                        prob: b.prob,
                    });
                }
                let mut trace = frame.trace.clone();
                trace.push(next);
                next_frames.push(Frame {
                    state: next,
                    psi: b.collapsed,
                    prob: frame.prob * b.prob,
                    measurements,
                    trace,
                });
            }
        }
        frames = next_frames;
    }

    let mut used = BTreeSet::new();
    let branches = frames
        .into_iter()
        .map(|f| {
            used.extend(f.trace.iter().copied());
            let verdict = if spec.accepting.contains(&f.state) {
                Verdict::Accept
            } else if spec.rejecting.contains(&f.state) {
                Verdict::Reject
            } else {
                return Err(Error::NonHaltingEnd {
                    state: f.state.to_string(),
                });
            };
            Ok(QcfaBranch {
                verdict,
                prob: f.prob,
                trapped: f.state == ClassicalState::Trap,
                measurements: f.measurements,
                trace: f.trace,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let verdict = match branches.split_first() {
        Some((first, rest)) if rest.iter().all(|b| b.verdict == first.verdict) => {
            Some(first.verdict)
        }
        _ => None,
    };
    Ok(QcfaRunResult {
        word: word.clone(),
        verdict,
        branches,
        quantum_dim: spec.quantum_dim,
        classical_states_used: used.len(),
    })
}
