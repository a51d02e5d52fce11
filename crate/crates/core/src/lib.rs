//! Exact quantum query, communication and automaton constructions for the
//! Hamming-distance promise problems `DJ'`, `EQ'` and `A(n)`, with brute-force
//! classical baselines.

pub mod bits;
pub mod commproto;
pub mod error;
pub mod harness;
pub mod mode;
pub mod qcfa;
pub mod qcore;
pub mod queryalg;

pub use bits::{BitString, PromiseClass};
pub use error::{Error, Result};
pub use mode::{RunMode, RunOptions};
