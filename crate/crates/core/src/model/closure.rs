use std::collections::BTreeSet;

use serde::Serialize;

use super::axioms::AxiomSchema;
use super::{mp_apply, BasicModel, FormulaSet};
use crate::error::{Error, Result};
use crate::syntax::{Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureViolation {
    pub left: Term,
    pub right: Term,
    /// A member of `left* |> right*` missing from `[left.right]*`.
    pub witness: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub pass: bool,
    /// Sharp models satisfy the closure with equality by construction.
    pub structural: bool,
    pub applications_checked: usize,
    pub violations: Vec<ClosureViolation>,
}

/// Checks `s* |> t* ⊆ (s.t)*` for every application `s.t` in `signature`.
/// The signature is closed under subterms first.
pub fn check_closure(m: &BasicModel, signature: &BTreeSet<Term>) -> ClosureReport {
    let closed: BTreeSet<Term> = signature.iter().flat_map(Term::subterms).collect();
    let mut violations = Vec::new();
    let mut checked = 0;
    for term in &closed {
        let Term::Application(s, t) = term else { continue };
        checked += 1;
        let produced = mp_apply(&m.eval_term(s), &m.eval_term(t));
        if let Err(witness) = produced.subset_of(&m.eval_term(term)) {
            violations.push(ClosureViolation {
                left: (**s).clone(),
                right: (**t).clone(),
                witness,
            });
        }
    }
    ClosureReport {
        pass: violations.is_empty(),
        structural: m.is_sharp(),
        applications_checked: checked,
        violations,
    }
}

/// Evaluates the Application axiom `s:(F -> G) -> (t:F -> [s.t]:G)` for
/// every pair `(F, G)` of `universe`. Without a universe, the pairs that can
/// make the antecedent true are enumerated, which requires `s*` finite (or
/// `t*` empty).
pub fn application_axiom_valid(
    m: &BasicModel,
    s: &Term,
    t: &Term,
    universe: Option<&[(Formula, Formula)]>,
) -> Result<bool> {
    let check = |f: &Formula, g: &Formula| {
        m.eval_formula(&AxiomSchema::application_instance(s, t, f, g))
    };
    if let Some(pairs) = universe {
        return Ok(pairs.iter().all(|(f, g)| check(f, g)));
    }
    let sv = m.eval_term(s);
    let tv = m.eval_term(t);
    match (&sv, &tv) {
        (FormulaSet::Finite(members), _) => Ok(members.iter().all(|x| match x {
            Formula::Implies(f, g) if tv.contains(f) => check(f, g),
            _ => true,
        })),
        (FormulaSet::All, tv) if tv.is_empty() => Ok(true),
        _ => Err(Error::UnsupportedSymbolic(format!(
            "{s} is valued ALL, so the Application instances for ({s}, {t}) are unbounded"
        ))),
    }
}

/// Every listed term justifies at most one formula.
pub fn is_injective<'a>(m: &BasicModel, terms: impl IntoIterator<Item = &'a Term>) -> bool {
    terms
        .into_iter()
        .all(|t| matches!(m.eval_term(t).len(), Some(n) if n <= 1))
}

/// Every formula `t` justifies is true in `m`. A term valued ALL justifies
/// `_|_` and so is never factive, unless checked against a `universe`.
pub fn is_factive(m: &BasicModel, t: &Term, universe: Option<&BTreeSet<Formula>>) -> Result<bool> {
    match (m.eval_term(t), universe) {
        (FormulaSet::Finite(members), _) => Ok(members.iter().all(|f| m.eval_formula(f))),
        (FormulaSet::All, Some(universe)) => Ok(universe.iter().all(|f| m.eval_formula(f))),
        (FormulaSet::All, None) => Ok(false),
    }
}
