mod common;

use std::collections::BTreeSet;

use common::p;
use jem_core::jem::{TermSet, JEM};
use jem_core::model::{BasicModel, FormulaSet};
use jem_core::multiworld::{
    box_eval, check_fully_explanatory, check_justification_indifference, derive_accessibility,
    extract_kripke, MultiJEM, ModalFormula,
};
use jem_core::syntax::{Formula, Term};
use proptest::prelude::*;

fn universe() -> Vec<Formula> {
    vec![p("P"), p("Q"), p("~P"), p("P \\/ Q"), p("P -> Q"), p("P \\/ ~P")]
}

fn signature() -> Vec<Term> {
    vec![Term::var("x"), Term::var("y"), Term::var("x").app(&Term::var("y"))]
}

fn value() -> impl Strategy<Value = FormulaSet> {
    prop_oneof![
        8 => prop::collection::btree_set(prop::sample::select(universe()), 0..3).prop_map(FormulaSet::Finite),
        1 => Just(FormulaSet::All),
    ]
}

/// A world: letters P and Q plus values for the three signature terms.
fn world() -> impl Strategy<Value = (bool, bool, Vec<FormulaSet>)> {
    (any::<bool>(), any::<bool>(), prop::collection::vec(value(), 3))
}

fn build(worlds: &[(bool, bool, Vec<FormulaSet>)]) -> MultiJEM {
    let ws = worlds.iter().enumerate().map(|(i, (a, b, values))| {
        let mut m = BasicModel::explicit(FormulaSet::empty()).with_atom("P", *a).with_atom("Q", *b);
        for (t, v) in signature().into_iter().zip(values) {
            m.set_term(t, v.clone()).unwrap();
        }
        (format!("w{i}"), JEM::new(m, TermSet::ground(), TermSet::ground()))
    });
    MultiJEM::new(ws.collect::<Vec<_>>(), signature(), universe()).unwrap()
}

/// Every term shares the value of `x`.
fn indifferent((a, b, values): (bool, bool, Vec<FormulaSet>)) -> (bool, bool, Vec<FormulaSet>) {
    (a, b, vec![values[0].clone(); 3])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn accessibility_transfers_justified_truth(ws in prop::collection::vec(world(), 1..4)) {
        let m = build(&ws);
        let r = derive_accessibility(&m);
        for (u, v) in &r {
            let (ju, jv) = (m.world(u).unwrap(), m.world(v).unwrap());
            for t in m.signature() {
                for f in m.universe() {
                    if ju.model.eval_term(t).contains(f) {
                        prop_assert!(jv.model.eval_formula(f));
                    }
                }
            }
        }
        // Maximality: every missing pair has a witness.
        for (u, ju) in m.worlds() {
            for (v, jv) in m.worlds() {
                if !r.contains(&(u.clone(), v.clone())) {
                    let blocked = m.signature().iter().any(|t| {
                        m.universe().iter().any(|f| ju.model.eval_term(t).contains(f) && !jv.model.eval_formula(f))
                    });
                    prop_assert!(blocked);
                }
            }
        }
    }

    #[test]
    fn box_matches_justification_when_explanatory(ws in prop::collection::vec(world().prop_map(indifferent), 1..4)) {
        let m = build(&ws);
        prop_assert!(check_justification_indifference(&m).pass);
        let r = derive_accessibility(&m);
        let k = extract_kripke(&m).unwrap();
        prop_assert_eq!(&k.relation, &r);
        if check_fully_explanatory(&m, &r).pass {
            for (u, j) in m.worlds() {
                for f in m.universe() {
                    let boxed = ModalFormula::forget(f).boxed();
                    for t in m.signature() {
                        prop_assert_eq!(box_eval(&k, u, &boxed), j.model.eval_term(t).contains(f));
                    }
                }
            }
        }
    }

    #[test]
    fn accessibility_antitone(ws in prop::collection::vec(world(), 1..4), extra in prop::sample::select(universe()), which in 0usize..3) {
        let m = build(&ws);
        let mut bigger = ws.clone();
        let target = &mut bigger[0].2[which];
        *target = target.union(&FormulaSet::singleton(extra));
        let m2 = build(&bigger);
        let succ = |r: &BTreeSet<(String, String)>| -> BTreeSet<String> {
            r.iter().filter(|(a, _)| a == "w0").map(|(_, b)| b.clone()).collect()
        };
        let before = succ(&derive_accessibility(&m));
        let after = succ(&derive_accessibility(&m2));
        prop_assert!(after.is_subset(&before));
    }

    #[test]
    fn fully_explanatory_matches_brute_force(ws in prop::collection::vec(world(), 1..4)) {
        let m = build(&ws);
        let r = derive_accessibility(&m);
        let report = check_fully_explanatory(&m, &r);
        let mut expected = 0;
        for (u, ju) in m.worlds() {
            for f in m.universe() {
                let everywhere = r.iter().filter(|(a, _)| a == u).all(|(_, v)| m.world(v).unwrap().model.eval_formula(f));
                let justified = m.signature().iter().any(|t| ju.model.eval_term(t).contains(f));
                expected += (everywhere && !justified) as usize;
            }
        }
        prop_assert_eq!(report.failures.len(), expected);
    }
}

#[test]
fn isolated_empty_world_fails_for_every_formula() {
    let m = build(&[(true, true, vec![FormulaSet::empty(); 3])]);
    let report = check_fully_explanatory(&m, &BTreeSet::new());
    assert_eq!(report.failures.len(), universe().len());
}
