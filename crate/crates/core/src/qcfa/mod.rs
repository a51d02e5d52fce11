//! One-way finite automata with quantum and classical states: a general
//! interpreter, the concrete machine for `A(n)`, and a reference DFA with a
//! communication-based size lower bound for comparison.

mod a_n;
mod dfa;
mod machine;
mod word;

pub use a_n::{a_n_quantum_dim, build_a_n};
pub use dfa::{
    build_reference_dfa, dfa_size_lower_bound, reference_dfa_state_count, run_dfa, DfaLowerBound,
    DfaSpec, DFA_LOWER_BOUND_MAX_N, DFA_MAX_N,
};
pub use machine::{
    run_qcfa, ClassicalState, MeasurementRecord, QcfaBranch, QcfaDescription, QcfaRunResult,
    QcfaSpec, Verdict,
};
pub use word::{a_n_oracle, Symbol, Word};
