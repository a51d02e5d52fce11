//! Exact small-dimension quantum mechanics: state vectors, verified unitary
//! operators, deterministic unitary completion and exhaustive enumeration of
//! measurement branches.

mod measure;
mod state;
mod unitary;

pub use measure::{measure_branches, Branch, MeasurementSpec, OutcomeGroup};
pub use state::{basis_state, Amplitude, StateVector};
pub use unitary::{
    apply_unitary, check_unitary, complete_unitary, ComplexMatrix, UnitarityReport, UnitaryOp,
    GS_RESIDUAL_THRESHOLD,
};

use serde::Serialize;

pub const EPS_UNITARY: f64 = 1e-10;
pub const EPS_NORM: f64 = 1e-9;
pub const EPS_BRANCH: f64 = 1e-12;

/// Numerical tolerances used by every probability-1 claim.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Entrywise bound on `|U^dag U - I|`.
    pub unitary: f64,
    /// Bound on `|sum |amp|^2 - 1|`.
    pub norm: f64,
    /// Branches at or below this probability are not emitted.
    pub branch: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unitary: EPS_UNITARY,
            norm: EPS_NORM,
            branch: EPS_BRANCH,
        }
    }
}
