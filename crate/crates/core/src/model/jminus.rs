//! Derivability and refutation tooling for J⁻.
//!
//! J⁻ derivability is classical consequence from Application-axiom
//! instances. [`derive_jminus`] instantiates the Application schema
//! goal-directedly from the assertions in its inputs, so it is sound but
//! only complete up to the instantiation depth. [`find_countermodel_jminus`]
//! searches the models satisfying `s* |> t* ⊆ (s.t)*` on the goal's terms.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use super::axioms::AxiomSchema;
use super::{check_closure, mp_apply, BasicModel, FormulaSet};
use crate::consequence::{entails, for_each_model, refutation_problem, AtomKey};
use crate::error::{Error, Limits, Result};
use crate::syntax::{Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JMinusDerivation {
    /// The goal follows classically from the hypotheses plus these
    /// Application instances.
    Derivable(Vec<Formula>),
    /// No derivation with instances up to this depth; not a proof of
    /// underivability.
    NotFoundAtDepth(usize),
}

fn assertions_in(fs: &[Formula]) -> BTreeSet<(Term, Formula)> {
    let mut out = BTreeSet::new();
    for f in fs {
        f.visit(&mut |g| {
            if let Formula::Just(t, body) = g {
                out.insert((t.clone(), (**body).clone()));
            }
        });
    }
    out
}

pub fn derive_jminus(
    hypotheses: &[Formula],
    goal: &Formula,
    depth: usize,
    limits: &Limits,
) -> Result<JMinusDerivation> {
    let mut inputs = hypotheses.to_vec();
    inputs.push(goal.clone());
    let mut present = assertions_in(&inputs);
    let mut instances: BTreeSet<Formula> = BTreeSet::new();
    for _ in 0..depth {
        let mut fresh = Vec::new();
        for (s, x) in &present {
            let Formula::Implies(f, g) = x else { continue };
            for (t, y) in &present {
                if y != &**f {
                    continue;
                }
                if instances.insert(AxiomSchema::application_instance(s, t, f, g)) {
                    fresh.push((s.app(t), (**g).clone()));
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        present.extend(fresh);
    }

    let mut used: Vec<Formula> = instances.into_iter().collect();
    let with = |used: &[Formula]| -> Result<bool> {
        let mut hyps = hypotheses.to_vec();
        hyps.extend(used.iter().cloned());
        entails(&hyps, goal, limits)
    };
    if !with(&used)? {
        return Ok(JMinusDerivation::NotFoundAtDepth(depth));
    }
    // Drop instances the derivation does not need.
    let mut i = 0;
    while i < used.len() {
        let removed = used.remove(i);
        if !with(&used)? {
            used.insert(i, removed);
            i += 1;
        }
    }
    Ok(JMinusDerivation::Derivable(used))
}

/// Searches for a model of J⁻ falsifying `goal`.
///
/// The model is explicit over the goal's subterms, with every other term
/// valued ALL (so the closure holds outside the signature). Finite values
/// have at most `padding` members. For each Boolean countermodel of the
/// atomized goal, values are chosen bottom-up as small as the assignment
/// and the closure force, except that terms not used as an argument of an
/// application in the signature are valued ALL whenever no assertion about
/// them must be false. Within those bounds the search is complete.
pub fn find_countermodel_jminus(
    goal: &Formula,
    padding: usize,
    limits: &Limits,
) -> Result<Option<BasicModel>> {
    let signature = goal.subterms();
    let mut argument: BTreeSet<&Term> = BTreeSet::new();
    for t in &signature {
        if let Term::Application(l, r) = t {
            argument.insert(l);
            argument.insert(r);
        }
    }
    let mut order: Vec<&Term> = signature.iter().collect();
    order.sort_by_key(|t| t.depth());

    let (skel, constraints) = refutation_problem(&[], goal, limits)?;
    let mut visited = 0usize;
    let mut exhausted = false;
    let found = for_each_model(&constraints, skel.atom_count(), &mut |assign| {
        visited += 1;
        if visited > limits.search {
            exhausted = true;
            return ControlFlow::Break(None);
        }
        let mut required: BTreeMap<&Term, BTreeSet<Formula>> = BTreeMap::new();
        let mut forbidden: BTreeMap<&Term, BTreeSet<Formula>> = BTreeMap::new();
        let mut m = BasicModel::explicit(FormulaSet::All);
        for (key, value) in skel.dictionary.iter().zip(assign) {
            match (key, value) {
                (AtomKey::Letter(name), v) => {
                    m.atoms.insert(name.clone(), v.unwrap_or(false));
                }
                (AtomKey::Assertion(t, x), Some(true)) => {
                    required.entry(signature.get(t).unwrap()).or_default().insert(x.clone());
                }
                (AtomKey::Assertion(t, x), Some(false)) => {
                    forbidden.entry(signature.get(t).unwrap()).or_default().insert(x.clone());
                }
                (AtomKey::Assertion(..), None) => {}
            }
        }
        let none = BTreeSet::new();
        for &t in &order {
            let forb = forbidden.get(t).unwrap_or(&none);
            let mut need = FormulaSet::Finite(required.get(t).cloned().unwrap_or_default());
            if let Term::Application(l, r) = t {
                need = need.union(&mp_apply(&m.eval_term(l), &m.eval_term(r)));
            }
            let value = if forb.is_empty() && !argument.contains(t) {
                FormulaSet::All
            } else {
                match need {
                    FormulaSet::All if forb.is_empty() => FormulaSet::All,
                    FormulaSet::All => return ControlFlow::Continue(()),
                    FormulaSet::Finite(members) => {
                        if members.len() > padding || members.iter().any(|x| forb.contains(x)) {
                            return ControlFlow::Continue(());
                        }
                        FormulaSet::Finite(members)
                    }
                }
            };
            m.set_term(t.clone(), value).expect("explicit model");
        }
        debug_assert!(!m.eval_formula(goal));
        debug_assert!(check_closure(&m, &signature).pass);
        ControlFlow::Break(Some(m))
    });
    if exhausted {
        return Err(Error::SearchLimit { limit: limits.search });
    }
    Ok(found.flatten())
}
