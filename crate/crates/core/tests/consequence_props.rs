mod common;

use common::{oracle_atom_count, oracle_entails, p, small_formula};
use jem_core::consequence::{atomize, consistent, countermodel, entails};
use jem_core::syntax::Formula;
use jem_core::{Error, Limits};
use proptest::prelude::*;

/// All formulas with at most `size` connectives over `leaves`.
fn formulas_up_to(leaves: &[Formula], size: usize) -> Vec<Vec<Formula>> {
    let mut by_size: Vec<Vec<Formula>> = vec![leaves.to_vec()];
    for n in 1..=size {
        let mut out: Vec<Formula> = by_size[n - 1].iter().cloned().map(Formula::not).collect();
        for a in 0..n {
            for l in &by_size[a] {
                for r in &by_size[n - 1 - a] {
                    out.push(l.clone().and(r.clone()));
                    out.push(l.clone().or(r.clone()));
                    out.push(l.clone().implies(r.clone()));
                }
            }
        }
        by_size.push(out);
    }
    by_size
}

fn leaves() -> Vec<Formula> {
    vec![Formula::Falsum, p("P"), p("Q"), p("x:P"), p("x:(P /\\ P)")]
}

#[test]
fn exhaustive_goals_match_truth_tables() {
    let all: Vec<Formula> = formulas_up_to(&leaves(), 2).concat();
    assert!(all.len() > 2000);
    let mut valid = 0;
    for f in &all {
        let e = entails(&[], f, &Limits::default()).unwrap();
        assert_eq!(e, oracle_entails(&[], f), "{f}");
        valid += e as usize;
    }
    assert!(valid > 0);
}

#[test]
fn exhaustive_pairs_match_truth_tables() {
    let small: Vec<Formula> = formulas_up_to(&leaves(), 1).concat();
    for h in &small {
        for g in &small {
            let hyps = [h.clone()];
            assert_eq!(entails(&hyps, g, &Limits::default()).unwrap(), oracle_entails(&hyps, g), "{h} |= {g}");
        }
    }
}

#[test]
fn atom_limit_is_configurable() {
    let wide = (0..30).map(|i| format!("A{i}")).collect::<Vec<_>>().join(" /\\ ");
    let f = p(&wide);
    assert_eq!(entails(&[], &f, &Limits::default()), Err(Error::AtomLimit { count: 30, limit: 24 }));
    assert_eq!(entails(&[], &f, &Limits { atoms: 30, ..Limits::default() }), Ok(false));
}

#[test]
fn assertion_keys_are_canonical_prints() {
    let skel = atomize([&p("x:F -> x:(F /\\ F)")]);
    assert!(skel.index_of("x:F").is_some());
    assert!(skel.index_of("x:(F /\\ F)").is_some());
    assert_ne!(skel.index_of("x:F"), skel.index_of("x:(F /\\ F)"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn countermodel_iff_not_entailed(
        hyps in prop::collection::vec(small_formula(), 0..3),
        goal in small_formula(),
    ) {
        prop_assume!(oracle_atom_count(hyps.iter().chain([&goal])) <= 10);
        let e = entails(&hyps, &goal, &Limits::default()).unwrap();
        let cm = countermodel(&hyps, &goal, &Limits::default()).unwrap();
        prop_assert_eq!(e, cm.is_none());
        if let Some(m) = cm {
            for h in &hyps {
                prop_assert!(m.eval_formula(h));
            }
            prop_assert!(!m.eval_formula(&goal));
        }
    }

    #[test]
    fn entailment_monotone_in_hypotheses(
        hyps in prop::collection::vec(small_formula(), 0..3),
        extra in small_formula(),
        goal in small_formula(),
    ) {
        if entails(&hyps, &goal, &Limits::default()).unwrap() {
            let mut more = hyps.clone();
            more.push(extra);
            prop_assert!(entails(&more, &goal, &Limits::default()).unwrap());
        }
    }

    #[test]
    fn consistency_is_non_entailment_of_falsum(hyps in prop::collection::vec(small_formula(), 0..4)) {
        let c = consistent(&hyps, &Limits::default()).unwrap();
        prop_assert_eq!(c, !oracle_entails(&hyps, &Formula::Falsum));
    }
}
