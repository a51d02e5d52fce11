//! Exhaustive verifiers over all promise inputs, and per-`n` report rows.

mod report;
mod verify;

pub use report::{
    build_report, build_row, rows_to_csv, rows_to_json, BoundValues, ExperimentConfig,
    ReportFormat, ReportRow,
};
pub use verify::{
    verify_dj, verify_eq, verify_qcfa, DjVerification, EqVerification, QcfaVerification,
    DJ_VERIFY_MAX_N, EQ_VERIFY_MAX_N, QCFA_VERIFY_MAX_N,
};
