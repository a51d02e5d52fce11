use std::fmt;
use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use serde::Serialize;

use qlab_core::commproto::{
    cost_formula, eq_prime_oracle, rectangle_bound, run_eq_protocol, PromisePair,
};
use qlab_core::harness::{
    build_report, rows_to_csv, rows_to_json, verify_dj, verify_eq, verify_qcfa, ExperimentConfig,
    ReportFormat,
};
use qlab_core::qcfa::{
    a_n_oracle, build_a_n, dfa_size_lower_bound, run_qcfa, Word, DFA_LOWER_BOUND_MAX_N,
};
use qlab_core::qcore::Tolerances;
use qlab_core::queryalg::{classical_dt_depth, dj_prime_oracle, run_dj_prime, DjInstance};
use qlab_core::{BitString, Error, RunMode, RunOptions};

use crate::output::{self, Timings};
use crate::{Common, DjCommand, EqCommand, Format, Mode, QcfaCommand};

pub enum Outcome {
    Success,
    VerificationFailed,
}

impl Outcome {
    fn from_passed(passed: bool) -> Self {
        if passed {
            Outcome::Success
        } else {
            Outcome::VerificationFailed
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            Outcome::Success => ExitCode::SUCCESS,
            Outcome::VerificationFailed => ExitCode::from(1),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad input or I/O trouble.
    Input(String),
    /// A computation failed in a way that indicates a broken construction.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::Internal(_) => ExitCode::from(1),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidN { .. }
            | Error::Parse(_)
            | Error::LengthMismatch { .. }
            | Error::PromiseViolation(_)
            | Error::CostGuard { .. } => CliError::Input(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

type CliResult = Result<Outcome, CliError>;

fn tolerances(c: &Common) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    for (value, slot, name) in [
        (c.epsilon_norm, &mut tol.norm, "--epsilon-norm"),
        (c.epsilon_unitary, &mut tol.unitary, "--epsilon-unitary"),
    ] {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Input(format!("{name} must be a positive number")));
            }
            *slot = v;
        }
    }
    Ok(tol)
}

fn run_options(c: &Common) -> Result<RunOptions, CliError> {
    Ok(RunOptions {
        mode: match c.mode {
            Mode::Explore => RunMode::Explore,
            Mode::Sample => RunMode::Sample(c.seed),
        },
        tolerances: tolerances(c)?,
        allow_nonpromise: c.allow_nonpromise,
    })
}

/// Exhaustive checks certify probability-1 claims, which sampling cannot.
fn require_explore(c: &Common) -> Result<Tolerances, CliError> {
    if c.mode == Mode::Sample {
        return Err(CliError::Input(
            "verification and reports run in explore mode only".into(),
        ));
    }
    tolerances(c)
}

fn bits(text: &str) -> Result<BitString, CliError> {
    Ok(text.parse::<BitString>()?)
}

fn timings(c: &Common, start: Instant) -> Option<Timings> {
    c.timings.then(|| Timings {
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn write_text(c: &Common, text: &str) -> Result<(), CliError> {
    match &c.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit<T: Serialize>(c: &Common, value: &T) -> Result<(), CliError> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    write_text(c, &text)
}

pub fn dj(cmd: DjCommand, c: &Common) -> CliResult {
    let start = Instant::now();
    match cmd {
        DjCommand::Run { n, x } => {
            let opts = run_options(c)?;
            let inst = DjInstance::new(n, bits(&x)?)?;
            let r = run_dj_prime(&inst, &opts)?;
            let mut out = output::DjRun::new(&r, dj_prime_oracle(&inst), opts.mode);
            out.timings = timings(c, start);
            emit(c, &out)?;
            Ok(Outcome::Success)
        }
        DjCommand::Verify { n } => {
            let v = verify_dj(n, &require_explore(c)?)?;
            let passed = v.all_exact();
            emit(
                c,
                &output::Verify {
                    task: "dj-verify",
                    passed,
                    result: output::VerifyResult::Dj(v),
                    timings: timings(c, start),
                },
            )?;
            Ok(Outcome::from_passed(passed))
        }
        DjCommand::ClassicalDepth { n } => {
            let depth = classical_dt_depth(n)?;
            emit(
                c,
                &output::ClassicalDepth {
                    task: "dj-classical-depth",
                    n,
                    depth,
                    quantum_queries: 2,
                    timings: timings(c, start),
                },
            )?;
            Ok(Outcome::Success)
        }
    }
}

pub fn eq(cmd: EqCommand, c: &Common) -> CliResult {
    let start = Instant::now();
    match cmd {
        EqCommand::Run { n, x, y } => {
            let opts = run_options(c)?;
            let pair = PromisePair::new(n, bits(&x)?, bits(&y)?)?;
            let r = run_eq_protocol(&pair, &opts)?;
            let mut out =
                output::EqRun::new(&r, eq_prime_oracle(&pair), opts.mode, cost_formula(n)?);
            out.timings = timings(c, start);
            emit(c, &out)?;
            Ok(Outcome::Success)
        }
        EqCommand::Verify { n } => {
            let v = verify_eq(n, &require_explore(c)?)?;
            let passed = v.all_exact() && v.ledger_ok();
            emit(
                c,
                &output::Verify {
                    task: "eq-verify",
                    passed,
                    result: output::VerifyResult::Eq(v),
                    timings: timings(c, start),
                },
            )?;
            Ok(Outcome::from_passed(passed))
        }
        EqCommand::Bound { n } => {
            let bounds = rectangle_bound(n)?;
            let dfa_lower_bound = (n <= DFA_LOWER_BOUND_MAX_N)
                .then(|| dfa_size_lower_bound(n))
                .transpose()?;
            emit(
                c,
                &output::Bound {
                    task: "eq-bound",
                    n,
                    bounds,
                    dfa_lower_bound,
                    timings: timings(c, start),
                },
            )?;
            Ok(Outcome::Success)
        }
    }
}

pub fn qcfa(cmd: QcfaCommand, c: &Common) -> CliResult {
    let start = Instant::now();
    match cmd {
        QcfaCommand::Run { n, word, x, y } => {
            let opts = run_options(c)?;
            let word = match (word, x, y) {
                (Some(w), None, None) => Word::parse(&w)?,
                (None, Some(x), Some(y)) => {
                    let (x, y) = (bits(&x)?, bits(&y)?);
                    x.check_len(n)?;
                    y.check_len(n)?;
                    Word::promise_shape(&x, &y)
                }
                _ => {
                    return Err(CliError::Input(
                        "give either --word or both --x and --y".into(),
                    ))
                }
            };
            let oracle = a_n_oracle(n, &word);
            if !opts.allow_nonpromise && !oracle.is_promise() {
                return Err(CliError::Input(format!(
                    "{word} is not a promise word for n = {n} (use --allow-nonpromise)"
                )));
            }
            let spec = build_a_n(n, &opts.tolerances)?;
            let r = run_qcfa(&spec, &word, &opts)?;
            let mut out = output::QcfaRun::new(n, &r, oracle, opts.mode);
            out.timings = timings(c, start);
            emit(c, &out)?;
            Ok(Outcome::Success)
        }
        QcfaCommand::Verify { n, against_dfa } => {
            let v = verify_qcfa(n, &require_explore(c)?, against_dfa)?;
            let passed = v.all_exact() && v.dfa_agrees() != Some(false);
            emit(
                c,
                &output::Verify {
                    task: "qcfa-verify",
                    passed,
                    result: output::VerifyResult::Qcfa(v),
                    timings: timings(c, start),
                },
            )?;
            Ok(Outcome::from_passed(passed))
        }
        QcfaCommand::Describe { n } => {
            let spec = build_a_n(n, &tolerances(c)?)?;
            emit(
                c,
                &output::Describe {
                    task: "qcfa-describe",
                    n,
                    machine: spec.describe(),
                },
            )?;
            Ok(Outcome::Success)
        }
    }
}

pub fn report(n_list: Vec<usize>, c: &Common) -> CliResult {
    let tol = require_explore(c)?;
    let format = match c.format {
        Some(Format::Json) => ReportFormat::Json,
        Some(Format::Csv) => ReportFormat::Csv,
        None => match c.out.as_ref().and_then(|p| p.extension()) {
            Some(ext) if ext == "json" => ReportFormat::Json,
            _ => ReportFormat::Csv,
        },
    };
    let config = ExperimentConfig {
        n_list,
        tolerances: tol,
        allow_nonpromise: c.allow_nonpromise,
        out: c.out.clone(),
        format,
        ..ExperimentConfig::new(Vec::new())
    };
    let rows = build_report(&config)?;
    let text = match format {
        ReportFormat::Csv => rows_to_csv(&rows)?,
        ReportFormat::Json => rows_to_json(&rows)? + "\n",
    };
    write_text(c, &text)?;
    Ok(Outcome::from_passed(rows.iter().all(|r| r.all_passed())))
}
