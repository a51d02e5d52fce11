use std::collections::BTreeMap;

use proptest::prelude::*;

use qlab_core::qcfa::{
    a_n_oracle, build_a_n, build_reference_dfa, run_dfa, run_qcfa, ClassicalState, Symbol, Verdict,
    Word,
};
use qlab_core::qcore::Tolerances;
use qlab_core::queryalg::{run_dj_prime, DjInstance};
use qlab_core::{BitString, PromiseClass, RunOptions};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn promise_words(n: usize) -> Vec<(BitString, BitString, Word)> {
    let mut out = Vec::new();
    for x in BitString::all(n) {
        for y in BitString::all(n) {
            if PromiseClass::of_weight(n, x.hamming(&y).unwrap()).is_promise() {
                let w = Word::promise_shape(&x, &y);
                out.push((x.clone(), y, w));
            }
        }
    }
    out
}

#[test]
fn worked_examples() {
    let spec = build_a_n(4, &tol()).unwrap();
    let run = |w: &str| run_qcfa(&spec, &Word::parse(w).unwrap(), &RunOptions::explore()).unwrap();

    let r = run("1100#1100##1100#1100");
    assert_eq!((r.verdict, r.branches.len()), (Some(Verdict::Accept), 1));
    assert!((r.branches[0].prob - 1.0).abs() < 1e-12);

    let r = run("1100#1010##1100#1010");
    assert!(r
        .branches
        .iter()
        .all(|b| b.verdict == Verdict::Reject && !b.trapped));

    let r = run("1000#0000##1000#0000");
    assert!(r.branches.iter().all(|b| b.verdict == Verdict::Accept));
    let firsts: Vec<(&str, f64)> = r
        .branches
        .iter()
        .map(|b| (b.measurements[0].outcome.as_str(), b.prob))
        .collect();
    assert_eq!(firsts.len(), 4);
    assert_eq!(firsts[0].0, "|0,0>");
    assert!((firsts[0].1 - 0.25).abs() < 1e-12);
    assert!(firsts[1..]
        .iter()
        .all(|(o, p)| o.starts_with("|1,") && (p - 0.25).abs() < 1e-12));
}

#[test]
fn separator_measurement_matches_query_algorithm_on_xor() {
    for n in [4, 6] {
        let spec = build_a_n(n, &tol()).unwrap();
        for (x, y, w) in promise_words(n) {
            let r = run_qcfa(&spec, &w, &RunOptions::explore()).unwrap();
            let mut automaton: BTreeMap<String, f64> = BTreeMap::new();
            for b in &r.branches {
                *automaton
                    .entry(b.measurements[0].outcome.clone())
                    .or_default() += b.prob;
            }
            let z = x.xor(&y).unwrap();
            let q = run_dj_prime(&DjInstance::new(n, z).unwrap(), &RunOptions::explore()).unwrap();
            let mut query: BTreeMap<String, f64> = BTreeMap::new();
            for b in &q.branches {
                *query.entry(b.first.to_string()).or_default() += b.prob;
            }
            assert_eq!(
                automaton.keys().collect::<Vec<_>>(),
                query.keys().collect::<Vec<_>>(),
                "{w}"
            );
            for (k, p) in &automaton {
                assert!((p - query[k]).abs() < 1e-9, "{w}: {k}");
            }
        }
    }
}

#[test]
fn no_branch_reaches_the_trap_on_promise_words() {
    let spec = build_a_n(6, &tol()).unwrap();
    for (_, _, w) in promise_words(6).iter().step_by(5) {
        let r = run_qcfa(&spec, w, &RunOptions::explore()).unwrap();
        assert!(r.branches.iter().all(|b| !b.trapped), "{w}");
    }
}

#[test]
fn resource_census() {
    for n in [4, 6, 8] {
        let spec = build_a_n(n, &tol()).unwrap();
        assert_eq!(spec.quantum_dim(), 1 + n + n * (n - 1) / 2 + (n - 2));
        let states = spec.reachable_states();
        // Start, two scans of n+1 positions, n+2 states per pair, three sinks.
        let pairs = n * (n - 1) / 2;
        assert_eq!(states.len(), 1 + 2 * (n + 1) + pairs * (n + 2) + 3);
        assert!(states.len() <= (n + 2).pow(3));
        for s in &states {
            if let ClassicalState::Normal { i, j, p } = *s {
                assert!(i <= n + 1 && j <= n + 1 && p <= n + 1);
            }
        }
    }
}

#[test]
fn theta_is_total_on_reachable_states() {
    let spec = build_a_n(4, &tol()).unwrap();
    for s in spec.reachable_states() {
        if !spec.is_halting(s) {
            for sym in Symbol::ALL {
                assert!(spec.theta(s, sym).is_some(), "{s} on {sym}");
            }
        }
    }
}

#[test]
fn description_lists_every_transition() {
    let spec = build_a_n(4, &tol()).unwrap();
    let d = spec.describe();
    let json = serde_json::to_value(&d).unwrap();
    assert_eq!(json["quantum_dim"], 13);
    assert_eq!(
        d.transitions.len(),
        (d.classical_states.len() - 3) * Symbol::ALL.len()
    );
    assert!(d.operators.iter().any(|o| o == "U3*U(1,2)"));
}

#[test]
fn reference_dfa_agrees_with_oracle() {
    for n in [4, 6] {
        let dfa = build_reference_dfa(n).unwrap();
        for (_, _, w) in promise_words(n) {
            let want = a_n_oracle(n, &w) == PromiseClass::Yes;
            assert_eq!(run_dfa(&dfa, &w), Verdict::from_bool(want), "{w}");
        }
    }
}

#[test]
fn reference_dfa_growth() {
    let a = build_reference_dfa(4).unwrap().state_count();
    let b = build_reference_dfa(6).unwrap().state_count();
    assert_eq!(a, 31 + 16 * 31 + 256 * 10 + 3);
    assert_eq!(b, 127 + 64 * 127 + 4096 * 14 + 3);
    assert!(b >= 16 * a);
}

fn any_word(n: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(vec!['0', '1', '#']), 0..(4 * n + 6))
        .prop_map(|v| v.into_iter().collect())
}

proptest! {
    #[test]
    fn machines_halt_on_arbitrary_words(text in any_word(4)) {
        let spec = build_a_n(4, &tol()).unwrap();
        let w = Word::parse(&text).unwrap();
        let r = run_qcfa(&spec, &w, &RunOptions::explore()).unwrap();
        prop_assert!((r.total_prob() - 1.0).abs() < 1e-9);
        let dfa_accepts = run_dfa(&build_reference_dfa(4).unwrap(), &w) == Verdict::Accept;
        prop_assert_eq!(dfa_accepts, a_n_oracle(4, &w) == PromiseClass::Yes);
    }

    #[test]
    fn sampled_runs_follow_the_oracle(idx in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let words = promise_words(4);
        let (_, _, w) = &words[idx.index(words.len())];
        let spec = build_a_n(4, &tol()).unwrap();
        let r = run_qcfa(&spec, w, &RunOptions::sample(seed)).unwrap();
        let want = Verdict::from_bool(a_n_oracle(4, w) == PromiseClass::Yes);
        prop_assert_eq!(r.verdict, Some(want));
    }
}
