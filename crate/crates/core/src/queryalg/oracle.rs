use super::indexing::BasisIndexing;
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::qcore::StateVector;

/// Which input bit (0-based), if any, each basis state corresponds to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleMap {
    entries: Vec<Option<usize>>,
}

impl OracleMap {
    pub fn new(entries: Vec<Option<usize>>) -> Self {
        OracleMap { entries }
    }

    /// No basis state is tied to an input bit.
    pub fn empty(dim: usize) -> Self {
        OracleMap {
            entries: vec![None; dim],
        }
    }

    /// `|i,0> -> x_i`.
    pub fn first_query(ix: &BasisIndexing) -> Self {
        let mut entries = vec![None; ix.dim()];
        for i in 1..=ix.n() {
            entries[ix.single(i)] = Some(i - 1);
        }
        OracleMap { entries }
    }

    /// `|k> -> y_k`, where `y` is the input with positions `i < j` (1-based)
    /// deleted; the map points at the original position of `y_k`.
    pub fn residual(ix: &BasisIndexing, i: usize, j: usize) -> Self {
        let mut entries = vec![None; ix.dim()];
        let kept = (1..=ix.n()).filter(|&p| p != i && p != j);
        for (k, p) in kept.enumerate() {
            entries[ix.aux(k + 1)] = Some(p - 1);
        }
        OracleMap { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn bit_for(&self, index: usize) -> Option<usize> {
        self.entries[index]
    }

    fn validate(&self, input_len: usize) -> Result<()> {
        match self.entries.iter().flatten().find(|&&b| b >= input_len) {
            Some(b) => Err(Error::MalformedOracle(format!(
                "bit {b} outside input of length {input_len}"
            ))),
            None => Ok(()),
        }
    }
}

/// `Q|psi> = (-1)^{x_i}|psi>` on basis states tied to bit `i`; others unchanged.
pub fn apply_phase_query(psi: &StateVector, map: &OracleMap, x: &BitString) -> Result<StateVector> {
    if map.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim(),
            found: psi.dim(),
        });
    }
    map.validate(x.len())?;
    let mut out = psi.clone();
    for (idx, bit) in map.entries.iter().enumerate() {
        if let Some(b) = *bit {
            if x.get(b) {
                out.scale_entry(idx, -1.0);
            }
        }
    }
    Ok(out)
}

/// Query access to a hidden input, counting every call.
#[derive(Debug, Clone)]
pub struct PhaseOracle<'a> {
    input: &'a BitString,
    queries: usize,
}

impl<'a> PhaseOracle<'a> {
    pub fn new(input: &'a BitString) -> Self {
        PhaseOracle { input, queries: 0 }
    }

    pub fn query(&mut self, psi: &StateVector, map: &OracleMap) -> Result<StateVector> {
        let out = apply_phase_query(psi, map, self.input)?;
        self.queries += 1;
        Ok(out)
    }

    pub fn queries(&self) -> usize {
        self.queries
    }
}
