use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Amplitude = Complex64;

/// A vector of complex amplitudes over an indexed finite basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Amplitude>,
}

impl StateVector {
    pub fn new(amps: Vec<Amplitude>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if let Some(index) = amps.iter().position(|a| !a.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(StateVector { amps })
    }

    /// Builds a vector from `(index, amplitude)` pairs; unlisted entries are zero.
    pub fn from_sparse(dim: usize, entries: &[(usize, Amplitude)]) -> Result<Self> {
        let mut amps = vec![Amplitude::new(0.0, 0.0); dim];
        for &(index, a) in entries {
            if index >= dim {
                return Err(Error::IndexOutOfRange { index, dim });
            }
            amps[index] += a;
        }
        StateVector::new(amps)
    }

    pub(crate) fn from_vec_unchecked(amps: Vec<Amplitude>) -> Self {
        StateVector { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Amplitude {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, eps: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= eps
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Amplitude> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Multiplies the amplitude at `index` by `factor` in place.
    pub(crate) fn scale_entry(&mut self, index: usize, factor: f64) {
        self.amps[index] *= factor;
    }
}

/// The canonical basis vector `e_index` of dimension `dim`.
pub fn basis_state(dim: usize, index: usize) -> Result<StateVector> {
    if index >= dim {
        return Err(Error::IndexOutOfRange { index, dim });
    }
    let mut amps = vec![Amplitude::new(0.0, 0.0); dim];
    amps[index] = Amplitude::new(1.0, 0.0);
    Ok(StateVector { amps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_state_places_single_one() {
        let psi = basis_state(2, 0).unwrap();
        assert_eq!(
            psi.amps(),
            &[Amplitude::new(1.0, 0.0), Amplitude::new(0.0, 0.0)]
        );

        let big = basis_state(13, 0).unwrap();
        assert_eq!(big.dim(), 13);
        assert_eq!(big.amp(0), Amplitude::new(1.0, 0.0));
        assert!(big.amps()[1..]
            .iter()
            .all(|a| *a == Amplitude::new(0.0, 0.0)));
    }

    #[test]
    fn basis_state_out_of_range() {
        assert_eq!(
            basis_state(2, 5),
            Err(Error::IndexOutOfRange { index: 5, dim: 2 })
        );
    }

    #[test]
    fn rejects_non_finite() {
        let r = StateVector::new(vec![Amplitude::new(f64::NAN, 0.0)]);
        assert_eq!(r, Err(Error::NonFinite { index: 0 }));
    }

    #[test]
    fn inner_product_is_conjugate_linear() {
        let a = StateVector::new(vec![Amplitude::new(0.0, 1.0), Amplitude::new(0.0, 0.0)]).unwrap();
        let b = basis_state(2, 0).unwrap();
        assert_eq!(a.inner(&b).unwrap(), Amplitude::new(0.0, -1.0));
    }
}
