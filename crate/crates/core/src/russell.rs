//! The Prime Minister scenario: a true, justified and believed sentence
//! that is not known, plus the flip refutation behind it.
//!
//! The model has one letter `B` (true) and two variables `w` and `r`, both
//! justifying exactly `B`. Application is sharp and constants follow the
//! Gödel-injective specification. Only `w` is accepted and only `r` is
//! knowledge-producing, so the terms that could yield knowledge are ground.
//! Ground term values never depend on letters, and flipping `B` keeps every
//! ground term factive while making `B` false; hence no such term can
//! justify `B`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::error::{Limits, Result};
use crate::jem::{believed, value_classes, TermFailure, TermSet, JEM};
use crate::model::{is_axiom, BasicModel, ConstantSpecification, FormulaSet};
use crate::syntax::{godel_number, Formula, Term};

pub use crate::model::constant_value;

pub fn build_russell() -> JEM {
    let b = Formula::atom("B");
    let model = BasicModel::sharp(FormulaSet::empty())
        .with_atom("B", true)
        .with_term(Term::var("w"), FormulaSet::singleton(b.clone()))
        .with_term(Term::var("r"), FormulaSet::singleton(b))
        .with_constant_spec(ConstantSpecification::GodelInjective);
    JEM::new(model, TermSet::proper_closure(["w"]), TermSet::proper_closure(["r"]))
}

/// The same model with the listed letters negated; term values untouched.
pub fn flip_model<S: AsRef<str>>(m: &BasicModel, atoms: &[S]) -> BasicModel {
    m.flip_atoms(atoms.iter().map(AsRef::as_ref))
}

/// `w`, `r`, and the sampled constants: `c0` and `c_n` for every axiom
/// of the model's probe universe, which is where non-empty constant values
/// live.
pub fn russell_leaves(j: &JEM) -> Vec<Term> {
    let mut leaves: BTreeSet<Term> = BTreeSet::from([Term::constant(0u32)]);
    leaves.extend(
        crate::model::candidate_axioms(&j.model)
            .iter()
            .map(|a| Term::Constant(godel_number(a))),
    );
    leaves.extend(j.accepted.generator_terms().chain(j.evidence.generator_terms()));
    leaves.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub lemma: u8,
    pub statement: &'static str,
    pub depth: usize,
    pub leaves: usize,
    /// Distinct term values examined.
    pub classes_checked: usize,
    pub pass: bool,
    pub failures: Vec<TermFailure>,
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lemma {}: {} [{}] depth {}, {} leaves, {} value classes",
            self.lemma,
            self.statement,
            if self.pass { "pass" } else { "FAIL" },
            self.depth,
            self.leaves,
            self.classes_checked
        )?;
        for fail in &self.failures {
            write!(f, "\n  {} justifies {}", fail.term, fail.formula)?;
        }
        Ok(())
    }
}

fn unfactive(m: &BasicModel, term: &Term, value: &FormulaSet) -> Option<TermFailure> {
    let formula = match value {
        FormulaSet::All => Some(Formula::Falsum),
        FormulaSet::Finite(fs) => fs.iter().find(|f| !m.eval_formula(f)).cloned(),
    }?;
    Some(TermFailure { term: term.clone(), formula })
}

fn factivity_report(
    lemma: u8,
    statement: &'static str,
    m: &BasicModel,
    leaves: &[Term],
    depth: usize,
) -> Result<LemmaReport> {
    let classes = value_classes(&[m], leaves, depth, Limits::default().search)?;
    let failures: Vec<TermFailure> =
        classes.iter().filter_map(|(t, v)| unfactive(m, t, &v[0])).collect();
    Ok(LemmaReport {
        lemma,
        statement,
        depth,
        leaves: leaves.len(),
        classes_checked: classes.len(),
        pass: failures.is_empty(),
        failures,
    })
}

/// Every term over `w`, `r` and the sampled constants is factive.
pub fn verify_lemma1(depth: usize) -> Result<LemmaReport> {
    let j = build_russell();
    factivity_report(1, "every term is factive", &j.model, &russell_leaves(&j), depth)
}

/// Every term has the same value before and after flipping `B`.
pub fn verify_lemma2(depth: usize) -> Result<LemmaReport> {
    let j = build_russell();
    let flipped = flip_model(&j.model, &["B"]);
    let leaves = russell_leaves(&j);
    let classes = value_classes(&[&j.model, &flipped], &leaves, depth, Limits::default().search)?;
    let failures: Vec<TermFailure> = classes
        .iter()
        .filter(|(_, v)| v[0] != v[1])
        .map(|(t, v)| {
            let diff = match (&v[0], &v[1]) {
                (FormulaSet::Finite(a), FormulaSet::Finite(b)) => {
                    a.symmetric_difference(b).next().cloned().unwrap_or(Formula::Falsum)
                }
                _ => Formula::Falsum,
            };
            TermFailure { term: t.clone(), formula: diff }
        })
        .collect();
    Ok(LemmaReport {
        lemma: 2,
        statement: "term values do not change when B is flipped",
        depth,
        leaves: leaves.len(),
        classes_checked: classes.len(),
        pass: failures.is_empty(),
        failures,
    })
}

/// Every ground term (over the sampled constants) is factive in the
/// flipped model. Cross-checks the structural argument of the certificate.
pub fn verify_lemma3(depth: usize) -> Result<LemmaReport> {
    let j = build_russell();
    let flipped = flip_model(&j.model, &["B"]);
    let leaves: Vec<Term> = russell_leaves(&j).into_iter().filter(Term::is_ground).collect();
    factivity_report(3, "every ground term is factive after flipping B", &flipped, &leaves, depth)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FlipError {
    #[error("the model is not sharp")]
    NotSharp,
    #[error("constant {constant} has value {value}, which is not a set of axioms")]
    ConstantNotGrounded { constant: String, value: String },
    #[error("generator {generator} is not factive in the flipped model: it justifies {formula}")]
    GeneratorNotFactive { generator: Term, formula: Formula },
}

/// Evidence that no term in the known set justifies `conclusion`: the
/// conclusion is false after flipping `flipped`, while every known term
/// stays factive there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlipCertificate {
    pub flipped: Vec<String>,
    /// Variable generators of the known set, each checked factive in the
    /// flipped model.
    pub generators: Vec<Term>,
    pub conclusion: Formula,
}

impl FlipCertificate {
    /// Re-runs the checks that produced the certificate.
    pub fn recheck(&self, j: &JEM) -> bool {
        refute_known_by_flip(j, &self.conclusion, &self.flipped) == Ok(Some(self.clone()))
    }
}

impl fmt::Display for FlipCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(Term::to_string).collect();
        write!(
            f,
            "flipping {{{}}} makes {} false while the known terms (generators {{{}}}) stay factive",
            self.flipped.join(", "),
            self.conclusion,
            gens.join(", ")
        )
    }
}

/// A member of a constant's value that stays true under any flip: an axiom
/// (propositional axioms are tautologies, Application axioms hold in every
/// sharp model) or a true assertion about a constant, whose truth does not
/// depend on letters.
fn grounded(m: &BasicModel, value: &FormulaSet) -> bool {
    match value {
        FormulaSet::All => false,
        FormulaSet::Finite(fs) => fs.iter().all(|g| {
            is_axiom(g) || (matches!(g, Formula::Just(Term::Constant(_), _)) && m.eval_formula(g))
        }),
    }
}

/// Tries to refute knowledge of `f` by flipping `atoms`.
///
/// In a sharp model, application preserves factivity, so if every
/// generator of the known set and every constant is factive in the
/// flipped model, every known term is. Term values do not depend on
/// letters, so a known term justifying `f` would make `f` true there.
/// Returns `Ok(None)` when `f` is still true after the flip.
pub fn refute_known_by_flip<S: AsRef<str>>(
    j: &JEM,
    f: &Formula,
    atoms: &[S],
) -> Result<Option<FlipCertificate>, FlipError> {
    let m = &j.model;
    if !m.is_sharp() {
        return Err(FlipError::NotSharp);
    }
    let check = |constant: String, value: &FormulaSet| {
        if grounded(m, value) {
            Ok(())
        } else {
            Err(FlipError::ConstantNotGrounded { constant, value: value.to_string() })
        }
    };
    for (t, v) in m.assigned_terms() {
        if let Term::Constant(_) = t {
            check(t.to_string(), v)?;
        }
    }
    match &m.constant_spec {
        Some(ConstantSpecification::Total) => {
            check("every constant".into(), &FormulaSet::All)?;
        }
        Some(ConstantSpecification::GodelInjective) => {}
        Some(ConstantSpecification::Custom(set)) => {
            for g in set {
                if let Formula::Just(c @ Term::Constant(n), _) = g {
                    if let Some(v) = m.constant_spec.as_ref().and_then(|cs| cs.realize(n)) {
                        check(c.to_string(), &v)?;
                    }
                }
            }
            check("unlisted constants".into(), m.term_default())?;
        }
        Some(ConstantSpecification::Empty) | None => {
            check("unlisted constants".into(), m.term_default())?;
        }
    }

    let flipped = flip_model(m, atoms);
    if flipped.eval_formula(f) {
        return Ok(None);
    }
    let generators: Vec<Term> = j.known_set().generator_terms().collect();
    for g in &generators {
        if let Some(fail) = unfactive(&flipped, g, &flipped.eval_term(g)) {
            return Err(FlipError::GeneratorNotFactive { generator: fail.term, formula: fail.formula });
        }
    }
    let mut names: Vec<String> = atoms.iter().map(|a| a.as_ref().to_string()).collect();
    names.sort();
    names.dedup();
    Ok(Some(FlipCertificate { flipped: names, generators, conclusion: f.clone() }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem3Report {
    pub formula: Formula,
    pub true_in_model: bool,
    /// A term justifying the formula.
    pub justified_by: Term,
    /// An accepted term justifying the formula.
    pub believed_via: Term,
    pub accepted: String,
    pub not_known: FlipCertificate,
    /// All four verdicts were re-checked before the report was built.
    pub rechecked: bool,
}

impl Theorem3Report {
    pub fn holds(&self) -> bool {
        self.true_in_model && self.rechecked
    }
}

impl fmt::Display for Theorem3Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.formula;
        writeln!(f, "true:      {b} holds in the model")?;
        writeln!(f, "justified: {}:{b} holds", self.justified_by)?;
        writeln!(f, "believed:  {} belongs to {}", self.believed_via, self.accepted)?;
        writeln!(f, "not known: {}", self.not_known)?;
        write!(f, "{b} is true, justified and believed, but not known")
    }
}

/// Builds the scenario and re-checks each verdict.
pub fn theorem3_report() -> Theorem3Report {
    let j = build_russell();
    let b = Formula::atom("B");
    let w = Term::var("w");
    let true_in_model = j.model.eval_formula(&b);
    let justified = j.model.eval_formula(&Formula::just(w.clone(), b.clone()));
    let believed_via = believed(&j, &b, 0)
        .ok()
        .and_then(|a| a.witness().cloned())
        .expect("w is accepted and justifies B");
    let not_known = refute_known_by_flip(&j, &b, &["B"])
        .expect("preconditions hold for the scenario")
        .expect("B is false after the flip");
    let rechecked = true_in_model
        && justified
        && j.accepted.contains(&believed_via)
        && j.model.eval_formula(&Formula::just(believed_via.clone(), b.clone()))
        && not_known.recheck(&j);
    Theorem3Report {
        formula: b,
        true_in_model,
        justified_by: w,
        believed_via,
        accepted: j.accepted.to_string(),
        not_known,
        rechecked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jem::{known, modal_projection, validate_jem, EpistemicAnswer};
    use crate::syntax::parse_formula;
    use num_bigint::BigUint;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn construction() {
        let j = build_russell();
        assert!(j.model.eval_formula(&p("w:B")));
        assert!(j.model.eval_term(&Term::constant(0u32)).is_empty());
        let a1 = p("P -> (Q -> P)");
        let c = Term::Constant(godel_number(&a1));
        assert_eq!(j.model.eval_term(&c), FormulaSet::singleton(a1));
        assert!(validate_jem(&j, 3).unwrap().pass);
    }

    #[test]
    fn flip_is_an_involution() {
        let j = build_russell();
        let once = flip_model(&j.model, &["B"]);
        assert!(!once.eval_formula(&p("B")));
        assert_eq!(once.eval_term(&Term::var("w")), FormulaSet::singleton(p("B")));
        assert_eq!(flip_model(&once, &["B"]), j.model);
    }

    #[test]
    fn w_dot_r_is_empty() {
        let j = build_russell();
        let wr = Term::var("w").app(&Term::var("r"));
        assert!(j.model.eval_term(&wr).is_empty());
        assert!(flip_model(&j.model, &["B"]).eval_term(&wr).is_empty());
    }

    #[test]
    fn lemmas_pass() {
        for report in [verify_lemma1(2).unwrap(), verify_lemma2(3).unwrap(), verify_lemma3(3).unwrap()] {
            assert!(report.pass, "{report}");
        }
    }

    #[test]
    fn theorem3() {
        let report = theorem3_report();
        assert!(report.holds());
        assert_eq!(report.believed_via, Term::var("w"));
        assert_eq!(report.not_known.flipped, ["B"]);
        assert!(report.not_known.generators.is_empty());
        assert_eq!(report, theorem3_report());
    }

    #[test]
    fn axioms_are_not_refuted() {
        let j = build_russell();
        let a = p("B -> (B -> B)");
        assert_eq!(refute_known_by_flip(&j, &a, &["B"]), Ok(None));
        let c = Term::Constant(godel_number(&a));
        assert_eq!(known(&j, &a, 0).unwrap(), EpistemicAnswer::Holds { witness: c.clone() });
        let proj = modal_projection(&j, &a, 0).unwrap();
        assert!(proj.justified.holds() && proj.evidenced.holds() && proj.known.holds());
        assert_eq!(proj.known.witness(), Some(&c));
    }

    #[test]
    fn modal_mismatch() {
        let j = build_russell();
        let proj = modal_projection(&j, &p("B"), 2).unwrap();
        assert_eq!(proj.justified, EpistemicAnswer::Holds { witness: Term::var("w") });
        assert_eq!(proj.evidenced, EpistemicAnswer::Holds { witness: Term::var("r") });
        assert!(matches!(proj.known, EpistemicAnswer::RefutedExact { .. }));
        assert!(proj.j_and_e_without_k());
    }

    #[test]
    fn falsum_is_not_believed() {
        let j = build_russell();
        assert_eq!(
            believed(&j, &Formula::Falsum, 2).unwrap(),
            EpistemicAnswer::NotFoundWithinBound { depth: 2 }
        );
    }

    #[test]
    fn shared_generator_not_factive_after_flip() {
        let m = BasicModel::sharp(FormulaSet::empty())
            .with_atom("P", true)
            .with_term(Term::var("x"), FormulaSet::singleton(p("P")));
        let set = TermSet::proper_closure(["x"]);
        let j = JEM::new(m, set.clone(), set);
        assert_eq!(
            refute_known_by_flip(&j, &p("P"), &["P"]),
            Err(FlipError::GeneratorNotFactive { generator: Term::var("x"), formula: p("P") })
        );
    }

    #[test]
    fn explicit_models_are_rejected() {
        let j = JEM::new(BasicModel::explicit(FormulaSet::empty()), TermSet::ground(), TermSet::ground());
        assert_eq!(refute_known_by_flip(&j, &p("B"), &["B"]), Err(FlipError::NotSharp));
    }

    #[test]
    fn small_constants_are_empty_or_axioms() {
        for n in 0u32..2000 {
            let v = constant_value(&BigUint::from(n));
            match v.as_finite() {
                Some(fs) if fs.is_empty() => {}
                Some(fs) if fs.len() == 1 => {
                    let g = fs.iter().next().unwrap();
                    assert!(is_axiom(g) || matches!(g, Formula::Just(Term::Constant(_), _)));
                }
                _ => panic!("c{n} has value {v}"),
            }
        }
    }
}
