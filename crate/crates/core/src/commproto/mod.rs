//! Two-party protocols: transcripts with per-message cost accounting, the
//! exact quantum protocol for `EQ'`, and the fooling-set and rectangle bounds
//! on its deterministic complexity.

mod bounds;
mod eq;
mod fooling;
mod transcript;

pub(crate) use bounds::ceil_cube_root;
pub use bounds::{
    c1_lower_log2, d_lower_formula, max_pure_fooling_subset, rectangle_bound, BoundReport,
    FoolingSubset, CLAIMED_LINEAR_CONSTANT, CLIQUE_NODE_BUDGET,
};
pub use eq::{
    cost_formula, eq_prime_oracle, run_eq_protocol, EqBranch, EqProtocol, EqRunResult, PromisePair,
};
pub use fooling::{
    build_fooling_set, verify_fooling_property, FoolingCase, FoolingReport, FoolingViolation,
    FOOLING_MAX_N,
};
pub use transcript::{
    CostLedger, Direction, LedgerEntry, MessageKind, Payload, ProtocolMessage, Transcript,
};
