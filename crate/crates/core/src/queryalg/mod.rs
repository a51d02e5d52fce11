//! Exact quantum query algorithms: the phase-query model, the two-query
//! algorithm for `DJ'` and a brute-force decision-tree baseline.

mod decision_tree;
mod dj;
mod indexing;
mod operators;
mod oracle;

pub use decision_tree::{classical_dt_depth, DT_DEPTH_MAX_N};
pub use dj::{
    dj_prime_oracle, run_dj_prime, run_dj_prime_with, DjInstance, QueryBranch, QueryRunResult,
};
pub use indexing::{BasisIndexing, BasisLabel};
pub use operators::{build_u1, build_u2, build_u3, build_u4, u2_image, DjOperators};
pub use oracle::{apply_phase_query, OracleMap, PhaseOracle};
