use super::machine::{ClassicalState, QcfaSpec};
use super::word::Symbol;
use crate::bits::check_n;
use crate::error::Result;
use crate::qcore::{basis_state, complete_unitary, MeasurementSpec, Tolerances, UnitaryOp};
use crate::queryalg::{BasisIndexing, BasisLabel, DjOperators};

/// `1 + n + C(n,2) + (n-2)`.
pub fn a_n_quantum_dim(n: usize) -> Result<usize> {
    Ok(BasisIndexing::new(n)?.dim())
}

/// Operator table indices for the machine.
struct Ops {
    id: usize,
    u1: usize,
    u2: usize,
    u4: usize,
    /// `U_{p,1}`, 1-based in `p`.
    flip_first: Vec<usize>,
    /// `U3 U_{ij}`, in `BasisIndexing::pairs` order.
    u3_uij: Vec<usize>,
    /// Sign flip on `|k>`, 1-based in `k`.
    flip_aux: Vec<usize>,
}

/// Auxiliary index flipped by the bit at position `p` of the second half,
/// after dropping positions `i < j`.
fn residual_aux(i: usize, j: usize, p: usize) -> Option<usize> {
    if p == i || p == j {
        None
    } else if p < i {
        Some(p)
    } else if p < j {
        Some(p - 1)
    } else {
        Some(p - 2)
    }
}

/// Builds the exact one-way QCFA for the promise language `A(n)`.
///
/// Classical control: `S(0,0,p)` scans the first `x`, `S(0,n+1,p)` the
/// first `y`, and `S(i,j,p)` the second half after the `##` measurement
/// selected the pair `(i,j)`. Unused (state, symbol) pairs go to `Trap`.
pub fn build_a_n(n: usize, tol: &Tolerances) -> Result<QcfaSpec> {
    check_n(n)?;
    let dj = DjOperators::new(n, tol)?;
    let ix = &dj.indexing;
    let dim = ix.dim();

    let start = ClassicalState::normal(0, 0, 0);
    let mut spec = QcfaSpec::new(format!("A({n})"), dim, ix.zero_zero(), start, *tol)?;

    let id = spec.add_operator("I", UnitaryOp::identity(dim))?;
    let u1 = spec.add_operator("U1", dj.u1.clone())?;
    let u2 = spec.add_operator("U2", dj.u2.clone())?;
    let u4 = spec.add_operator("U4", dj.u4.clone())?;
    let flip_first = (1..=n)
        .map(|p| {
            let flips: Vec<bool> = (0..dim)
                .map(|idx| match ix.label(idx) {
                    BasisLabel::Single(i) | BasisLabel::Pair(i, _) => i == p,
                    _ => false,
                })
                .collect();
            spec.add_operator(format!("U({p},1)"), UnitaryOp::sign_diagonal(&flips))
        })
        .collect::<Result<Vec<_>>>()?;
    let u3_uij = ix
        .pairs()
        .map(|(i, j)| {
            let uij = complete_unitary(dim, &[(ix.pair(i, j), basis_state(dim, ix.aux(1))?)], tol)?;
            spec.add_operator(format!("U3*U({i},{j})"), dj.u3.compose(&uij, tol.unitary)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let flip_aux = (1..=n - 2)
        .map(|k| {
            let mut flips = vec![false; dim];
            flips[ix.aux(k)] = true;
            spec.add_operator(format!("Z(|{k}>)"), UnitaryOp::sign_diagonal(&flips))
        })
        .collect::<Result<Vec<_>>>()?;
    let ops = Ops {
        id,
        u1,
        u2,
        u4,
        flip_first,
        u3_uij,
        flip_aux,
    };

    let labels: Vec<String> = ix.labels().iter().map(|l| l.to_string()).collect();
    let basis = spec.add_measurement("basis", MeasurementSpec::standard_basis_labeled(labels))?;

    let trap = ClassicalState::Trap;
    let mut defined = Vec::new();
    let mut set = |spec: &mut QcfaSpec,
                   s: ClassicalState,
                   sym: Symbol,
                   op: usize,
                   m: Option<usize>,
                   next: Vec<(usize, ClassicalState)>|
     -> Result<()> {
        defined.push((s, sym));
        spec.set_transition(s, sym, op, m, next)
    };

    set(
        &mut spec,
        start,
        Symbol::LeftEnd,
        ops.u1,
        None,
        vec![(0, ClassicalState::normal(0, 0, 1))],
    )?;

    // First half: x under S(0,0,p), then y under S(0,n+1,p).
    for j in [0, n + 1] {
        for p in 1..=n {
            let s = ClassicalState::normal(0, j, p);
            let next = ClassicalState::normal(0, j, p + 1);
            set(&mut spec, s, Symbol::Zero, ops.id, None, vec![(0, next)])?;
            set(
                &mut spec,
                s,
                Symbol::One,
                ops.flip_first[p - 1],
                None,
                vec![(0, next)],
            )?;
        }
    }
    set(
        &mut spec,
        ClassicalState::normal(0, 0, n + 1),
        Symbol::Hash,
        ops.id,
        None,
        vec![(0, ClassicalState::normal(0, n + 1, 1))],
    )?;
    let outcomes = (0..dim)
        .map(|idx| {
            let next = match ix.label(idx) {
                BasisLabel::ZeroZero => ClassicalState::Accept,
                BasisLabel::Pair(i, j) => ClassicalState::normal(i, j, 0),
                _ => trap,
            };
            (idx, next)
        })
        .collect();
    set(
        &mut spec,
        ClassicalState::normal(0, n + 1, n + 1),
        Symbol::Hash,
        ops.u2,
        Some(basis),
        outcomes,
    )?;

    // Second half, one block of states per measured pair.
    for (pair_idx, (i, j)) in ix.pairs().enumerate() {
        set(
            &mut spec,
            ClassicalState::normal(i, j, 0),
            Symbol::Hash,
            ops.u3_uij[pair_idx],
            None,
            vec![(0, ClassicalState::normal(i, j, 1))],
        )?;
        for p in 1..=n {
            let s = ClassicalState::normal(i, j, p);
            let next = ClassicalState::normal(i, j, p + 1);
            let one = residual_aux(i, j, p).map_or(ops.id, |k| ops.flip_aux[k - 1]);
            set(&mut spec, s, Symbol::Zero, ops.id, None, vec![(0, next)])?;
            set(&mut spec, s, Symbol::One, one, None, vec![(0, next)])?;
        }
        let end = ClassicalState::normal(i, j, n + 1);
        set(
            &mut spec,
            end,
            Symbol::Hash,
            ops.id,
            None,
            vec![(0, ClassicalState::normal(i, j, 1))],
        )?;
        let verdicts = (0..dim)
            .map(|idx| {
                let accept = idx == ix.aux(1);
                (
                    idx,
                    if accept {
                        ClassicalState::Accept
                    } else {
                        ClassicalState::Reject
                    },
                )
            })
            .collect();
        set(
            &mut spec,
            end,
            Symbol::RightEnd,
            ops.u4,
            Some(basis),
            verdicts,
        )?;
    }

    // Everything else in a non-halting state falls into the trap.
    let mut states: Vec<ClassicalState> = defined.iter().map(|&(s, _)| s).collect();
    states.sort();
    states.dedup();
    for s in states {
        for sym in Symbol::ALL {
            if spec.theta(s, sym).is_none() {
                spec.set_transition(s, sym, ops.id, None, [(0, trap)])?;
            }
        }
    }

    spec.mark_accepting(ClassicalState::Accept);
    spec.mark_rejecting(ClassicalState::Reject);
    spec.mark_rejecting(trap);
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;
    use crate::mode::RunOptions;
    use crate::qcfa::{run_qcfa, Verdict, Word};
    use crate::qcore::StateVector;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn census_n4() {
        let spec = build_a_n(4, &tol()).unwrap();
        assert_eq!(spec.quantum_dim(), 13);
        let reachable = spec.reachable_states().len();
        assert!(reachable <= 6 * 6 * 6, "{reachable}");
    }

    #[test]
    fn bit_flip_on_first_index() {
        let spec = build_a_n(4, &tol()).unwrap();
        let ix = BasisIndexing::new(4).unwrap();
        let u = spec
            .theta(ClassicalState::normal(0, 0, 1), Symbol::One)
            .unwrap();
        let out = u.apply(&basis_state(13, ix.single(1)).unwrap()).unwrap();
        assert!((out.amp(ix.single(1)).re + 1.0).abs() < 1e-12);
        let out = u.apply(&basis_state(13, ix.single(2)).unwrap()).unwrap();
        assert!((out.amp(ix.single(2)).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn second_hash_spreads_pair_over_aux() {
        let n = 6;
        let spec = build_a_n(n, &tol()).unwrap();
        let ix = BasisIndexing::new(n).unwrap();
        let u = spec
            .theta(ClassicalState::normal(1, 2, 0), Symbol::Hash)
            .unwrap();
        let out = u
            .apply(&basis_state(ix.dim(), ix.pair(1, 2)).unwrap())
            .unwrap();
        let a = 1.0 / ((n - 2) as f64).sqrt();
        let entries: Vec<_> = (1..=n - 2).map(|k| (ix.aux(k), a.into())).collect();
        let want = StateVector::from_sparse(ix.dim(), &entries).unwrap();
        assert!(out.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn residual_index_rules() {
        assert_eq!(residual_aux(2, 4, 1), Some(1));
        assert_eq!(residual_aux(2, 4, 2), None);
        assert_eq!(residual_aux(2, 4, 3), Some(2));
        assert_eq!(residual_aux(2, 4, 4), None);
        assert_eq!(residual_aux(2, 4, 6), Some(4));
    }

    #[test]
    fn worked_examples_n4() {
        let spec = build_a_n(4, &tol()).unwrap();
        let opts = RunOptions::explore();
        let run = |w: &str| run_qcfa(&spec, &Word::parse(w).unwrap(), &opts).unwrap();

        let r = run("1100#1100##1100#1100");
        assert_eq!(r.verdict, Some(Verdict::Accept));
        assert_eq!(r.branches.len(), 1);
        assert_eq!(r.branches[0].measurements[0].outcome, "|0,0>");

        let r = run("1100#1010##1100#1010");
        assert_eq!(r.verdict, Some(Verdict::Reject));

        let x: BitString = "1000".parse().unwrap();
        let r = run_qcfa(&spec, &Word::promise_shape(&x, &BitString::zeros(4)), &opts).unwrap();
        assert_eq!(r.verdict, Some(Verdict::Accept));
        assert_eq!(r.branches.len(), 4);
        assert!((r.branches[0].prob - 0.25).abs() < 1e-12);
        assert!((r.total_prob() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn malformed_words_are_trapped() {
        let spec = build_a_n(4, &tol()).unwrap();
        let r = run_qcfa(&spec, &Word::parse("10#").unwrap(), &RunOptions::explore()).unwrap();
        assert_eq!(r.verdict, Some(Verdict::Reject));
        assert!(r.branches.iter().all(|b| b.trapped));
    }
}
