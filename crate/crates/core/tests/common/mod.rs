#![allow(dead_code)]

use jem_core::syntax::{is_variable_name, Formula, Term};
use proptest::prelude::*;

pub fn p(s: &str) -> Formula {
    jem_core::syntax::parse_formula(s).unwrap()
}

pub fn atom_name() -> impl Strategy<Value = String> {
    "[A-Za-z][A-Za-z0-9_]{0,3}"
}

pub fn var_name() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,2}".prop_filter("constant-shaped", |s| is_variable_name(s))
}

pub fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0u32..64).prop_map(Term::constant),
        var_name().prop_map(|v| Term::var(&v)),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| a.app(&b)))
}

pub fn formula_with(depth: u32, atoms: BoxedStrategy<String>, terms: BoxedStrategy<Term>) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![1 => Just(Formula::Falsum), 6 => atoms.prop_map(|a| Formula::atom(&a))];
    leaf.prop_recursive(depth, 48, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)),
            (terms.clone(), inner).prop_map(|(t, g)| Formula::just(t, g)),
        ]
    })
    .boxed()
}

pub fn formula() -> BoxedStrategy<Formula> {
    formula_with(8, atom_name().boxed(), term().boxed())
}

/// Few letters and terms, so that assertions and letters repeat.
pub fn small_formula() -> BoxedStrategy<Formula> {
    let atoms = prop::sample::select(vec!["P".to_string(), "Q".to_string(), "R".to_string()]).boxed();
    let (x, y) = (Term::var("x"), Term::var("y"));
    let terms = prop::sample::select(vec![x.clone(), y.clone(), x.app(&y), Term::constant(0u32)]).boxed();
    formula_with(3, atoms, terms)
}

/// Every term over `leaves` up to application depth `depth`.
pub fn terms_to_depth(leaves: &[Term], depth: usize) -> Vec<Term> {
    let mut all: Vec<Term> = leaves.to_vec();
    for d in 1..=depth {
        let mut next = Vec::new();
        for a in &all {
            for b in &all {
                if a.depth().max(b.depth()) == d - 1 {
                    next.push(a.app(b));
                }
            }
        }
        all.extend(next);
    }
    all
}

// Truth-table oracle: letters and maximal assertions are opaque atoms.

fn oracle_atoms(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::Falsum => {}
        Formula::Atom(_) | Formula::Just(..) => {
            if !out.contains(f) {
                out.push(f.clone());
            }
        }
        Formula::Not(g) => oracle_atoms(g, out),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            oracle_atoms(l, out);
            oracle_atoms(r, out);
        }
    }
}

fn oracle_eval(f: &Formula, v: &[(Formula, bool)]) -> bool {
    match f {
        Formula::Falsum => false,
        Formula::Atom(_) | Formula::Just(..) => v.iter().find(|(a, _)| a == f).unwrap().1,
        Formula::Not(g) => !oracle_eval(g, v),
        Formula::And(l, r) => oracle_eval(l, v) && oracle_eval(r, v),
        Formula::Or(l, r) => oracle_eval(l, v) || oracle_eval(r, v),
        Formula::Implies(l, r) => !oracle_eval(l, v) || oracle_eval(r, v),
    }
}

/// Distinct opaque atoms of the formulas.
pub fn oracle_atom_count<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> usize {
    let mut atoms = Vec::new();
    for f in fs {
        oracle_atoms(f, &mut atoms);
    }
    atoms.len()
}

pub fn oracle_entails(hyps: &[Formula], goal: &Formula) -> bool {
    let mut atoms = Vec::new();
    for f in hyps.iter().chain([goal]) {
        oracle_atoms(f, &mut atoms);
    }
    (0..1u32 << atoms.len()).all(|bits| {
        let v: Vec<(Formula, bool)> =
            atoms.iter().enumerate().map(|(i, a)| (a.clone(), bits & (1 << i) != 0)).collect();
        !hyps.iter().all(|h| oracle_eval(h, &v)) || oracle_eval(goal, &v)
    })
}
