use super::state::{Amplitude, StateVector};
use super::Tolerances;
use crate::error::{Error, Result};

/// A labeled set of basis indices forming one projector `P(c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeGroup {
    pub label: String,
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    /// `Delta = I`: no measurement, fixed outcome.
    Identity { label: String },
    Projective {
        dim: usize,
        groups: Vec<OutcomeGroup>,
    },
}

/// A projective measurement given as a partition of the basis indices.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSpec {
    kind: Kind,
}

impl MeasurementSpec {
    /// The identity measurement, always yielding outcome 0 labeled `"c"`.
    pub fn identity() -> Self {
        MeasurementSpec {
            kind: Kind::Identity {
                label: "c".to_string(),
            },
        }
    }

    /// One outcome per basis index, labeled by the index.
    pub fn standard_basis(dim: usize) -> Self {
        Self::standard_basis_labeled((0..dim).map(|i| i.to_string()).collect())
    }

    /// One outcome per basis index, with caller-provided labels.
    pub fn standard_basis_labeled(labels: Vec<String>) -> Self {
        let dim = labels.len();
        MeasurementSpec {
            kind: Kind::Projective {
                dim,
                groups: labels
                    .into_iter()
                    .enumerate()
                    .map(|(i, label)| OutcomeGroup {
                        label,
                        indices: vec![i],
                    })
                    .collect(),
            },
        }
    }

    /// A coarse-grained measurement; groups must be disjoint and cover `0..dim`.
    pub fn partition(dim: usize, groups: Vec<OutcomeGroup>) -> Result<Self> {
        let mut owner = vec![None; dim];
        for (g, group) in groups.iter().enumerate() {
            for &i in &group.indices {
                if i >= dim {
                    return Err(Error::MalformedMeasurement(format!(
                        "index {i} in group {:?} exceeds dimension {dim}",
                        group.label
                    )));
                }
                if let Some(prev) = owner[i].replace(g) {
                    return Err(Error::MalformedMeasurement(format!(
                        "index {i} appears in groups {prev} and {g}"
                    )));
                }
            }
        }
        if let Some(i) = owner.iter().position(Option::is_none) {
            return Err(Error::MalformedMeasurement(format!(
                "index {i} not covered by any group"
            )));
        }
        Ok(MeasurementSpec {
            kind: Kind::Projective { dim, groups },
        })
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.kind, Kind::Identity { .. })
    }

    pub fn outcome_count(&self) -> usize {
        match &self.kind {
            Kind::Identity { .. } => 1,
            Kind::Projective { groups, .. } => groups.len(),
        }
    }

    pub fn label(&self, outcome: usize) -> &str {
        match &self.kind {
            Kind::Identity { label } => label,
            Kind::Projective { groups, .. } => &groups[outcome].label,
        }
    }

    pub fn groups(&self) -> &[OutcomeGroup] {
        match &self.kind {
            Kind::Identity { .. } => &[],
            Kind::Projective { groups, .. } => groups,
        }
    }
}

/// One measurement outcome together with its probability and post-measurement state.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub outcome: usize,
    pub label: String,
    pub prob: f64,
    pub collapsed: StateVector,
}

/// Enumerates every outcome of `m` on `psi` with probability above `tol.branch`,
/// in group order.
pub fn measure_branches(
    psi: &StateVector,
    m: &MeasurementSpec,
    tol: &Tolerances,
) -> Result<Vec<Branch>> {
    let norm_sqr = psi.norm_sqr();
    if (norm_sqr - 1.0).abs() > tol.norm {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let (dim, groups) = match &m.kind {
        Kind::Identity { label } => {
            return Ok(vec![Branch {
                outcome: 0,
                label: label.clone(),
                prob: 1.0,
                collapsed: psi.clone(),
            }])
        }
        Kind::Projective { dim, groups } => (*dim, groups),
    };
    if psi.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: psi.dim(),
        });
    }

    let mut branches = Vec::new();
    for (outcome, group) in groups.iter().enumerate() {
        let prob: f64 = group.indices.iter().map(|&i| psi.amp(i).norm_sqr()).sum();
        if prob <= tol.branch {
            continue;
        }
        let scale = prob.sqrt();
        let mut amps = vec![Amplitude::new(0.0, 0.0); dim];
        for &i in &group.indices {
            amps[i] = psi.amp(i) / scale;
        }
        branches.push(Branch {
            outcome,
            label: group.label.clone(),
            prob,
            collapsed: StateVector::from_vec_unchecked(amps),
        });
    }
    Ok(branches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::basis_state;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn basis_state_measures_deterministically() {
        let psi = basis_state(2, 0).unwrap();
        let b = measure_branches(
            &psi,
            &MeasurementSpec::standard_basis(2),
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].outcome, 0);
        assert_eq!(b[0].prob, 1.0);
        assert_eq!(b[0].collapsed, psi);
    }

    #[test]
    fn plus_state_splits_evenly() {
        let psi = StateVector::new(vec![
            Amplitude::new(FRAC_1_SQRT_2, 0.0),
            Amplitude::new(FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        let b = measure_branches(
            &psi,
            &MeasurementSpec::standard_basis(2),
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(b.len(), 2);
        for br in &b {
            assert!((br.prob - 0.5).abs() < 1e-15);
            assert!(br.collapsed.is_normalized(1e-12));
        }
    }

    #[test]
    fn identity_measurement_yields_fixed_outcome() {
        let psi = StateVector::new(vec![
            Amplitude::new(FRAC_1_SQRT_2, 0.0),
            Amplitude::new(0.0, FRAC_1_SQRT_2),
        ])
        .unwrap();
        let b =
            measure_branches(&psi, &MeasurementSpec::identity(), &Tolerances::default()).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].label, "c");
        assert_eq!(b[0].prob, 1.0);
        assert_eq!(b[0].collapsed, psi);
    }

    #[test]
    fn grouped_projection_renormalizes() {
        let half = 0.5;
        let psi = StateVector::new(vec![Amplitude::new(half, 0.0); 4]).unwrap();
        let m = MeasurementSpec::partition(
            4,
            vec![
                OutcomeGroup {
                    label: "low".into(),
                    indices: vec![0, 1, 2],
                },
                OutcomeGroup {
                    label: "high".into(),
                    indices: vec![3],
                },
            ],
        )
        .unwrap();
        let b = measure_branches(&psi, &m, &Tolerances::default()).unwrap();
        assert!((b[0].prob - 0.75).abs() < 1e-15);
        assert!((b[1].prob - 0.25).abs() < 1e-15);
        assert!(b[0].collapsed.is_normalized(1e-12));
        assert_eq!(b[0].collapsed.amp(3), Amplitude::new(0.0, 0.0));
    }

    #[test]
    fn partition_must_be_disjoint_and_covering() {
        let g = |label: &str, indices: Vec<usize>| OutcomeGroup {
            label: label.into(),
            indices,
        };
        assert!(
            MeasurementSpec::partition(3, vec![g("a", vec![0, 1]), g("b", vec![1, 2])]).is_err()
        );
        assert!(MeasurementSpec::partition(3, vec![g("a", vec![0, 1])]).is_err());
        assert!(
            MeasurementSpec::partition(3, vec![g("a", vec![0, 5]), g("b", vec![1, 2])]).is_err()
        );
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let psi = StateVector::new(vec![Amplitude::new(1.0, 0.0); 2]).unwrap();
        assert!(matches!(
            measure_branches(
                &psi,
                &MeasurementSpec::standard_basis(2),
                &Tolerances::default()
            ),
            Err(Error::NotNormalized { .. })
        ));
    }
}
