use num_complex::Complex64;

use super::indexing::BasisIndexing;
use crate::error::Result;
use crate::qcore::{complete_unitary, StateVector, Tolerances, UnitaryOp};

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `U1`: sends `|0,0>` to the uniform superposition of the `|i,0>`.
pub fn build_u1(n: usize, tol: &Tolerances) -> Result<UnitaryOp> {
    let ix = BasisIndexing::new(n)?;
    let a = real(1.0 / (n as f64).sqrt());
    let entries: Vec<_> = (1..=n).map(|i| (ix.single(i), a)).collect();
    let column = StateVector::from_sparse(ix.dim(), &entries)?;
    complete_unitary(ix.dim(), &[(ix.zero_zero(), column)], tol)
}

/// The prescribed image of `|i,0>` under `U2`:
/// `(1/sqrt n) (sum_{j>i} |i,j> - sum_{j<i} |j,i> + |0,0>)`.
pub fn u2_image(ix: &BasisIndexing, i: usize) -> Result<StateVector> {
    let n = ix.n();
    let a = 1.0 / (n as f64).sqrt();
    let mut entries = vec![(ix.zero_zero(), real(a))];
    for j in 1..=n {
        if j > i {
            entries.push((ix.pair(i, j), real(a)));
        } else if j < i {
            entries.push((ix.pair(j, i), real(-a)));
        }
    }
    StateVector::from_sparse(ix.dim(), &entries)
}

/// `U2`: the `|i,0>` columns follow [`u2_image`]; the rest is completed.
pub fn build_u2(n: usize, tol: &Tolerances) -> Result<UnitaryOp> {
    let ix = BasisIndexing::new(n)?;
    let fixed = (1..=n)
        .map(|i| Ok((ix.single(i), u2_image(&ix, i)?)))
        .collect::<Result<Vec<_>>>()?;
    complete_unitary(ix.dim(), &fixed, tol)
}

/// `U3`: sends `|1>` to the uniform superposition of the `|k>`.
pub fn build_u3(n: usize, tol: &Tolerances) -> Result<UnitaryOp> {
    let ix = BasisIndexing::new(n)?;
    let a = real(1.0 / ((n - 2) as f64).sqrt());
    let entries: Vec<_> = (1..=n - 2).map(|k| (ix.aux(k), a)).collect();
    let column = StateVector::from_sparse(ix.dim(), &entries)?;
    complete_unitary(ix.dim(), &[(ix.aux(1), column)], tol)
}

/// `U4 = U3^dag`.
pub fn build_u4(n: usize, tol: &Tolerances) -> Result<UnitaryOp> {
    Ok(build_u3(n, tol)?.adjoint())
}

/// The four fixed operators for a given `n`, built once and shared across runs.
#[derive(Debug, Clone)]
pub struct DjOperators {
    pub indexing: BasisIndexing,
    pub tolerances: Tolerances,
    pub u1: UnitaryOp,
    pub u2: UnitaryOp,
    pub u3: UnitaryOp,
    pub u4: UnitaryOp,
}

impl DjOperators {
    pub fn new(n: usize, tol: &Tolerances) -> Result<Self> {
        let u3 = build_u3(n, tol)?;
        Ok(DjOperators {
            indexing: BasisIndexing::new(n)?,
            tolerances: *tol,
            u1: build_u1(n, tol)?,
            u2: build_u2(n, tol)?,
            u4: u3.adjoint(),
            u3,
        })
    }

    pub fn n(&self) -> usize {
        self.indexing.n()
    }
}
