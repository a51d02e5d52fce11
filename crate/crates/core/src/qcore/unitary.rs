use num_complex::Complex64;

use super::state::{Amplitude, StateVector};
use super::Tolerances;
use crate::error::{Error, Result};

/// Residual norm below which a canonical candidate is skipped during completion.
pub const GS_RESIDUAL_THRESHOLD: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, stored column-major. Column `c` is the image
/// of basis state `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, ONE);
        }
        m
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let dim = columns.len();
        let mut data = Vec::with_capacity(dim * dim);
        for col in columns {
            if col.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: col.len(),
                });
            }
            data.extend_from_slice(col);
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[col * self.dim + row]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[col * self.dim + row] = value;
    }

    pub fn column(&self, col: usize) -> &[Complex64] {
        &self.data[col * self.dim..(col + 1) * self.dim]
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = Self::zeros(self.dim);
        for c in 0..self.dim {
            for r in 0..self.dim {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let mut out = Self::zeros(self.dim);
        for c in 0..self.dim {
            let image = self.mul_vec(rhs.column(c));
            out.data[c * self.dim..(c + 1) * self.dim].copy_from_slice(&image);
        }
        Ok(out)
    }

    /// Matrix-vector product as a sum of columns; exactly-zero inputs are skipped.
    fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.dim];
        for (c, &a) in v.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(self.column(c)) {
                *o += m * a;
            }
        }
        out
    }
}

/// Outcome of a unitarity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitarityReport {
    pub unitary: bool,
    /// Largest entry of `|U^dag U - I|`.
    pub max_deviation: f64,
    /// `(row, col)` of that entry.
    pub position: (usize, usize),
}

/// True iff every entry of `|U^dag U - I|` is at most `eps`.
pub fn check_unitary(u: &ComplexMatrix, eps: f64) -> UnitarityReport {
    let mut max_deviation = 0.0;
    let mut position = (0, 0);
    for a in 0..u.dim {
        let col_a = u.column(a);
        for b in 0..u.dim {
            let ip: Complex64 = col_a
                .iter()
                .zip(u.column(b))
                .map(|(x, y)| x.conj() * y)
                .sum();
            let target = if a == b { ONE } else { ZERO };
            let dev = (ip - target).norm();
            // NaN never compares greater, so force it to register
            if dev > max_deviation || dev.is_nan() {
                max_deviation = if dev.is_nan() { f64::INFINITY } else { dev };
                position = (a, b);
            }
        }
    }
    UnitarityReport {
        unitary: max_deviation <= eps,
        max_deviation,
        position,
    }
}

/// A dense matrix that passed [`check_unitary`] at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    matrix: ComplexMatrix,
}

impl UnitaryOp {
    pub fn new(matrix: ComplexMatrix, eps: f64) -> Result<Self> {
        let report = check_unitary(&matrix, eps);
        if !report.unitary {
            return Err(Error::NotUnitary {
                max_deviation: report.max_deviation,
                row: report.position.0,
                col: report.position.1,
            });
        }
        Ok(UnitaryOp { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryOp {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    /// Diagonal operator with `+1`/`-1` entries; `true` marks a sign flip.
    pub fn sign_diagonal(flips: &[bool]) -> Self {
        let mut matrix = ComplexMatrix::identity(flips.len());
        for (i, &f) in flips.iter().enumerate() {
            if f {
                matrix.set(i, i, -ONE);
            }
        }
        UnitaryOp { matrix }
    }

    /// Permutation operator sending basis state `c` to `images[c]`.
    pub fn permutation(images: &[usize]) -> Result<Self> {
        let dim = images.len();
        let mut seen = vec![false; dim];
        let mut matrix = ComplexMatrix::zeros(dim);
        for (c, &r) in images.iter().enumerate() {
            if r >= dim {
                return Err(Error::IndexOutOfRange { index: r, dim });
            }
            if std::mem::replace(&mut seen[r], true) {
                return Err(Error::DuplicateColumn { index: r });
            }
            matrix.set(r, c, ONE);
        }
        Ok(UnitaryOp { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> UnitaryOp {
        UnitaryOp {
            matrix: self.matrix.adjoint(),
        }
    }

    /// The product `self * rhs` (apply `rhs` first), re-verified at `eps`.
    pub fn compose(&self, rhs: &UnitaryOp, eps: f64) -> Result<UnitaryOp> {
        UnitaryOp::new(self.matrix.mul(&rhs.matrix)?, eps)
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        Ok(StateVector::from_vec_unchecked(
            self.matrix.mul_vec(psi.amps()),
        ))
    }

    pub fn check(&self, eps: f64) -> UnitarityReport {
        check_unitary(&self.matrix, eps)
    }
}

pub fn apply_unitary(u: &UnitaryOp, psi: &StateVector) -> Result<StateVector> {
    u.apply(psi)
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for b in basis {
        let c = inner(b, v);
        for (x, y) in v.iter_mut().zip(b) {
            *x -= c * y;
        }
    }
}

/// Extends the given orthonormal columns to a full unitary.
///
/// Free columns are filled, in ascending index order, by Gram-Schmidt over
/// the canonical vectors `e_0, e_1, ...`; candidates whose residual norm falls
/// below [`GS_RESIDUAL_THRESHOLD`] are skipped. The result depends only on the
/// input, so repeated calls are bit-identical.
pub fn complete_unitary(
    dim: usize,
    fixed_columns: &[(usize, StateVector)],
    tol: &Tolerances,
) -> Result<UnitaryOp> {
    let mut slots: Vec<Option<Vec<Amplitude>>> = vec![None; dim];
    for (index, v) in fixed_columns {
        if *index >= dim {
            return Err(Error::IndexOutOfRange { index: *index, dim });
        }
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        if slots[*index].is_some() {
            return Err(Error::DuplicateColumn { index: *index });
        }
        slots[*index] = Some(v.amps().to_vec());
    }

    for (a, (ia, va)) in fixed_columns.iter().enumerate() {
        for (ib, vb) in &fixed_columns[a..] {
            let ip = inner(va.amps(), vb.amps());
            let target = if ia == ib { ONE } else { ZERO };
            if (ip - target).norm() > tol.unitary {
                return Err(Error::NotOrthonormal {
                    first: *ia,
                    second: *ib,
                    inner: ip,
                });
            }
        }
    }

    let mut basis: Vec<Vec<Amplitude>> = fixed_columns
        .iter()
        .map(|(_, v)| v.amps().to_vec())
        .collect();
    let mut fresh = Vec::with_capacity(dim - basis.len());
    for m in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut r = vec![ZERO; dim];
        r[m] = ONE;
        project_out(&mut r, &basis);
        if norm(&r) < GS_RESIDUAL_THRESHOLD {
            continue;
        }
        // second pass restores orthogonality lost to cancellation
        project_out(&mut r, &basis);
        let len = norm(&r);
        r.iter_mut().for_each(|x| *x /= len);
        basis.push(r.clone());
        fresh.push(r);
    }

    let mut fresh = fresh.into_iter();
    let columns = slots
        .into_iter()
        .map(|slot| slot.or_else(|| fresh.next()))
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::DimensionMismatch {
            expected: dim,
            found: basis.len(),
        })?;
    UnitaryOp::new(ComplexMatrix::from_columns(&columns)?, tol.unitary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::basis_state;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_is_unitary() {
        let r = check_unitary(&ComplexMatrix::identity(5), 1e-10);
        assert!(r.unitary);
        assert_eq!(r.max_deviation, 0.0);
    }

    #[test]
    fn all_ones_is_not_unitary() {
        let ones = ComplexMatrix::from_columns(&vec![vec![c(1.0); 3]; 3]).unwrap();
        let r = check_unitary(&ones, 1e-10);
        assert!(!r.unitary);
        // diagonal of U^dag U is 3, off-diagonal 3: deviation 3 off the diagonal
        assert_eq!(r.max_deviation, 3.0);
        assert!(UnitaryOp::new(ones, 1e-10).is_err());
    }

    #[test]
    fn identity_apply_is_noop() {
        let psi = StateVector::new(vec![c(0.6), Complex64::new(0.0, 0.8)]).unwrap();
        assert_eq!(UnitaryOp::identity(2).apply(&psi).unwrap(), psi);
    }

    #[test]
    fn apply_dimension_mismatch() {
        let psi = basis_state(3, 0).unwrap();
        assert_eq!(
            UnitaryOp::identity(2).apply(&psi),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn completes_hadamard_column() {
        let v = StateVector::new(vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
        let u = complete_unitary(2, &[(0, v)], &Tolerances::default()).unwrap();
        // hand Gram-Schmidt: e_0 - (1/2)(1,1) = (1/2, -1/2), normalized
        assert!((u.matrix().get(0, 1) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((u.matrix().get(1, 1) - c(-FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn all_canonical_columns_give_identity() {
        let fixed: Vec<_> = (0..4).map(|i| (i, basis_state(4, i).unwrap())).collect();
        let u = complete_unitary(4, &fixed, &Tolerances::default()).unwrap();
        assert_eq!(u.matrix(), &ComplexMatrix::identity(4));
    }

    #[test]
    fn no_fixed_columns_gives_identity() {
        let u = complete_unitary(3, &[], &Tolerances::default()).unwrap();
        assert_eq!(u.matrix(), &ComplexMatrix::identity(3));
    }

    #[test]
    fn rejects_non_orthonormal_pair() {
        let a = basis_state(2, 0).unwrap();
        let b = StateVector::new(vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
        match complete_unitary(2, &[(0, a), (1, b)], &Tolerances::default()) {
            Err(Error::NotOrthonormal {
                first,
                second,
                inner,
            }) => {
                assert_eq!((first, second), (0, 1));
                assert!((inner - c(FRAC_1_SQRT_2)).norm() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_unnormalized_column() {
        let v = StateVector::new(vec![c(2.0), c(0.0)]).unwrap();
        assert!(matches!(
            complete_unitary(2, &[(1, v)], &Tolerances::default()),
            Err(Error::NotOrthonormal {
                first: 1,
                second: 1,
                ..
            })
        ));
    }

    #[test]
    fn rejects_duplicate_index() {
        let v = basis_state(2, 0).unwrap();
        assert_eq!(
            complete_unitary(2, &[(0, v.clone()), (0, v)], &Tolerances::default()),
            Err(Error::DuplicateColumn { index: 0 })
        );
    }

    #[test]
    fn permutation_rejects_repeats() {
        assert!(UnitaryOp::permutation(&[1, 0, 2]).is_ok());
        assert!(UnitaryOp::permutation(&[1, 1, 2]).is_err());
        assert!(UnitaryOp::permutation(&[0, 3, 1]).is_err());
    }

    #[test]
    fn compose_applies_right_operand_first() {
        let swap = UnitaryOp::permutation(&[1, 0]).unwrap();
        let flip = UnitaryOp::sign_diagonal(&[true, false]);
        // flip * swap: |0> -> |1> -> |1>; |1> -> |0> -> -|0>
        let u = flip.compose(&swap, 1e-10).unwrap();
        let out = u.apply(&basis_state(2, 1).unwrap()).unwrap();
        assert_eq!(out.amp(0), c(-1.0));
    }
}
