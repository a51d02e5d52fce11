use std::path::PathBuf;

use serde::Serialize;

use super::verify::{
    verify_dj, verify_eq, verify_qcfa, DJ_VERIFY_MAX_N, EQ_VERIFY_MAX_N, QCFA_VERIFY_MAX_N,
};
use crate::bits::check_n;
use crate::commproto::{cost_formula, rectangle_bound, verify_fooling_property, FOOLING_MAX_N};
use crate::error::{Error, Result};
use crate::mode::RunMode;
use crate::qcfa::{build_reference_dfa, dfa_size_lower_bound, DFA_LOWER_BOUND_MAX_N, DFA_MAX_N};
use crate::qcore::Tolerances;
use crate::queryalg::{classical_dt_depth, DT_DEPTH_MAX_N};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n_list: Vec<usize>,
    pub mode: RunMode,
    pub tolerances: Tolerances,
    pub allow_nonpromise: bool,
    pub out: Option<PathBuf>,
    pub format: ReportFormat,
}

impl ExperimentConfig {
    pub fn new(n_list: Vec<usize>) -> Self {
        ExperimentConfig {
            n_list,
            mode: RunMode::Explore,
            tolerances: Tolerances::default(),
            allow_nonpromise: false,
            out: None,
            format: ReportFormat::Csv,
        }
    }

    /// Reports certify probability-1 claims, so only explore mode is accepted.
    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() {
            return Err(Error::Parse("n list is empty".into()));
        }
        for &n in &self.n_list {
            check_n(n)?;
        }
        if let RunMode::Sample(_) = self.mode {
            return Err(Error::Parse(
                "reports run exhaustive checks and require explore mode".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundValues {
    pub e_size: Option<u128>,
    pub c1_lower: f64,
    pub d_lower_formula: f64,
    pub linear_constant: f64,
    pub fooling_subset_size: Option<usize>,
    pub fooling_subset_exact: Option<bool>,
}

impl BoundValues {
    /// `key=value` pairs joined by `;`, empty values for skipped entries.
    fn csv_field(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        [
            format!("e_size={}", opt(self.e_size.map(|v| v.to_string()))),
            format!("c1_lower={}", self.c1_lower),
            format!("d_lower_formula={}", self.d_lower_formula),
            format!("linear_constant={}", self.linear_constant),
            format!(
                "fooling_subset_size={}",
                opt(self.fooling_subset_size.map(|v| v.to_string()))
            ),
            format!(
                "fooling_subset_exact={}",
                opt(self.fooling_subset_exact.map(|v| v.to_string()))
            ),
        ]
        .join(";")
    }
}

/// One line of the report. `None` marks checks skipped by a cost guard.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub n: usize,
    pub dj_inputs_checked: Option<usize>,
    pub dj_all_exact: Option<bool>,
    pub classical_depth: Option<usize>,
    pub eq_pairs_checked: Option<usize>,
    pub eq_all_exact: Option<bool>,
    pub eq_qubits: usize,
    pub eq_bits: usize,
    pub fooling_violations: Option<usize>,
    pub bound_values: BoundValues,
    pub qcfa_words_checked: Option<usize>,
    pub qcfa_all_exact: Option<bool>,
    pub qcfa_qdim: usize,
    pub qcfa_cstates: Option<usize>,
    pub dfa_ref_states: Option<usize>,
    pub dfa_lower_bound: Option<usize>,
}

impl ReportRow {
    /// True iff no check that ran reported an exception.
    pub fn all_passed(&self) -> bool {
        [self.dj_all_exact, self.eq_all_exact, self.qcfa_all_exact]
            .iter()
            .all(|f| f.unwrap_or(true))
            && self.fooling_violations.unwrap_or(0) == 0
    }
}

pub fn build_row(n: usize, tol: &Tolerances) -> Result<ReportRow> {
    check_n(n)?;
    let dj = (n <= DJ_VERIFY_MAX_N)
        .then(|| verify_dj(n, tol))
        .transpose()?;
    let classical_depth = (n <= DT_DEPTH_MAX_N)
        .then(|| classical_dt_depth(n))
        .transpose()?;
    let eq = (n <= EQ_VERIFY_MAX_N)
        .then(|| verify_eq(n, tol))
        .transpose()?;
    let cost = cost_formula(n)?;
    let fooling = (n <= FOOLING_MAX_N)
        .then(|| verify_fooling_property(n))
        .transpose()?;
    let bound = rectangle_bound(n)?;
    let qcfa = (n <= QCFA_VERIFY_MAX_N)
        .then(|| verify_qcfa(n, tol, false))
        .transpose()?;
    let dfa = (n <= DFA_MAX_N)
        .then(|| build_reference_dfa(n))
        .transpose()?;
    let lower = (n <= DFA_LOWER_BOUND_MAX_N)
        .then(|| dfa_size_lower_bound(n))
        .transpose()?;

    Ok(ReportRow {
        n,
        dj_inputs_checked: dj.as_ref().map(|v| v.inputs_checked),
        dj_all_exact: dj.as_ref().map(|v| v.all_exact()),
        classical_depth,
        eq_pairs_checked: eq.as_ref().map(|v| v.pairs_checked),
        eq_all_exact: eq.as_ref().map(|v| v.all_exact() && v.ledger_ok()),
        eq_qubits: cost.qubits_total,
        eq_bits: cost.bits_total,
        fooling_violations: fooling.as_ref().map(|f| f.violations.len()),
        bound_values: BoundValues {
            e_size: bound.e_size,
            c1_lower: bound.c1_lower,
            d_lower_formula: bound.d_lower_formula_value,
            linear_constant: bound.linear_constant_value,
            fooling_subset_size: bound.fooling_subset_size,
            fooling_subset_exact: bound.fooling_subset_exact,
        },
        qcfa_words_checked: qcfa.as_ref().map(|v| v.words_checked),
        qcfa_all_exact: qcfa.as_ref().map(|v| v.all_exact()),
        qcfa_qdim: crate::qcfa::a_n_quantum_dim(n)?,
        qcfa_cstates: qcfa.as_ref().map(|v| v.classical_states_reachable),
        dfa_ref_states: dfa.map(|d| d.state_count()),
        dfa_lower_bound: lower.map(|l| l.bound),
    })
}

/// One row per `n`, in the order given.
pub fn build_report(config: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    config.validate()?;
    config
        .n_list
        .iter()
        .map(|&n| build_row(n, &config.tolerances))
        .collect()
}

/// Flat CSV view: same columns, `bound_values` packed into one field.
#[derive(Serialize)]
struct CsvRow {
    n: usize,
    dj_inputs_checked: Option<usize>,
    dj_all_exact: Option<bool>,
    classical_depth: Option<usize>,
    eq_pairs_checked: Option<usize>,
    eq_all_exact: Option<bool>,
    eq_qubits: usize,
    eq_bits: usize,
    fooling_violations: Option<usize>,
    bound_values: String,
    qcfa_words_checked: Option<usize>,
    qcfa_all_exact: Option<bool>,
    qcfa_qdim: usize,
    qcfa_cstates: Option<usize>,
    dfa_ref_states: Option<usize>,
    dfa_lower_bound: Option<usize>,
}

pub fn rows_to_csv(rows: &[ReportRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(CsvRow {
            n: r.n,
            dj_inputs_checked: r.dj_inputs_checked,
            dj_all_exact: r.dj_all_exact,
            classical_depth: r.classical_depth,
            eq_pairs_checked: r.eq_pairs_checked,
            eq_all_exact: r.eq_all_exact,
            eq_qubits: r.eq_qubits,
            eq_bits: r.eq_bits,
            fooling_violations: r.fooling_violations,
            bound_values: r.bound_values.csv_field(),
            qcfa_words_checked: r.qcfa_words_checked,
            qcfa_all_exact: r.qcfa_all_exact,
            qcfa_qdim: r.qcfa_qdim,
            qcfa_cstates: r.qcfa_cstates,
            dfa_ref_states: r.dfa_ref_states,
            dfa_lower_bound: r.dfa_lower_bound,
        })
        .map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn rows_to_json(rows: &[ReportRow]) -> Result<String> {
    serde_json::to_string_pretty(rows).map_err(|e| Error::Parse(e.to_string()))
}
