//! Several single-state JEMs indexed by worlds, the accessibility relation
//! they induce, and the collapse to a Kripke model.
//!
//! The induced relation quantifies over all terms and formulas; here the
//! quantifiers range over a finite term signature and formula universe
//! stored with the model, and every report says so.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jem::JEM;
use crate::syntax::{Formula, Term};

pub type World = String;
pub type Relation = BTreeSet<(World, World)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiJEM {
    worlds: BTreeMap<World, JEM>,
    signature: BTreeSet<Term>,
    universe: BTreeSet<Formula>,
}

impl MultiJEM {
    /// The signature is closed under subterms.
    pub fn new(
        worlds: impl IntoIterator<Item = (World, JEM)>,
        signature: impl IntoIterator<Item = Term>,
        universe: impl IntoIterator<Item = Formula>,
    ) -> Result<MultiJEM> {
        let mut map = BTreeMap::new();
        for (name, j) in worlds {
            if map.insert(name.clone(), j).is_some() {
                return Err(Error::InvalidModel(format!("duplicate world {name}")));
            }
        }
        let signature: BTreeSet<Term> = signature.into_iter().flat_map(|t| t.subterms()).collect();
        let universe: BTreeSet<Formula> = universe.into_iter().collect();
        if map.is_empty() {
            return Err(Error::InvalidModel("no worlds".into()));
        }
        if signature.is_empty() || universe.is_empty() {
            return Err(Error::InvalidModel("signature and universe must be nonempty".into()));
        }
        Ok(MultiJEM { worlds: map, signature, universe })
    }

    pub fn worlds(&self) -> impl Iterator<Item = (&World, &JEM)> {
        self.worlds.iter()
    }

    pub fn world(&self, name: &str) -> Option<&JEM> {
        self.worlds.get(name)
    }

    pub fn signature(&self) -> &BTreeSet<Term> {
        &self.signature
    }

    pub fn universe(&self) -> &BTreeSet<Formula> {
        &self.universe
    }

    pub fn restriction(&self) -> String {
        format!(
            "terms range over the {} declared signature terms and formulas over the {} declared universe formulas",
            self.signature.len(),
            self.universe.len()
        )
    }

    fn justified(&self, u: &JEM, f: &Formula) -> Option<&Term> {
        self.signature.iter().find(|t| u.model.eval_term(t).contains(f))
    }
}

/// `u R v` iff every universe formula justified at `u` by a signature term
/// is true at `v`.
pub fn derive_accessibility(m: &MultiJEM) -> Relation {
    let mut r = Relation::new();
    for (u, ju) in &m.worlds {
        let justified: Vec<&Formula> =
            m.universe.iter().filter(|f| m.justified(ju, f).is_some()).collect();
        for (v, jv) in &m.worlds {
            if justified.iter().all(|f| jv.model.eval_formula(f)) {
                r.insert((u.clone(), v.clone()));
            }
        }
    }
    r
}

fn successors<'a>(r: &'a Relation, u: &'a str) -> impl Iterator<Item = &'a World> + 'a {
    r.iter().filter(move |(a, _)| a == u).map(|(_, b)| b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndifferenceFailure {
    pub world: World,
    pub term: Term,
    /// The least signature term, against which every other is compared.
    pub reference: Term,
    /// Justified by exactly one of `term` and `reference`.
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndifferenceReport {
    pub pass: bool,
    pub failures: Vec<IndifferenceFailure>,
    pub restriction: String,
}

impl fmt::Display for IndifferenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "justification indifference: {}", if self.pass { "pass" } else { "FAIL" })?;
        for x in &self.failures {
            writeln!(
                f,
                "  at {}: {} and {} disagree on {}",
                x.world, x.term, x.reference, x.formula
            )?;
        }
        write!(f, "  ({})", self.restriction)
    }
}

/// At each world, all signature terms justify the same universe formulas.
pub fn check_justification_indifference(m: &MultiJEM) -> IndifferenceReport {
    let reference = m.signature.iter().next().expect("nonempty signature");
    let mut failures = Vec::new();
    for (world, j) in &m.worlds {
        let base = j.model.eval_term(reference);
        for t in m.signature.iter().skip(1) {
            let value = j.model.eval_term(t);
            if let Some(f) = m.universe.iter().find(|f| value.contains(f) != base.contains(f)) {
                failures.push(IndifferenceFailure {
                    world: world.clone(),
                    term: t.clone(),
                    reference: reference.clone(),
                    formula: f.clone(),
                });
            }
        }
    }
    IndifferenceReport { pass: failures.is_empty(), failures, restriction: m.restriction() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExplanationFailure {
    pub world: World,
    /// True at every successor but justified by no signature term.
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExplanatoryReport {
    pub pass: bool,
    pub failures: Vec<ExplanationFailure>,
    pub restriction: String,
}

/// Whatever holds at every successor of `u` is justified at `u`.
pub fn check_fully_explanatory(m: &MultiJEM, r: &Relation) -> ExplanatoryReport {
    let mut failures = Vec::new();
    for (u, ju) in &m.worlds {
        let succ: Vec<&JEM> = successors(r, u).filter_map(|v| m.worlds.get(v)).collect();
        for f in &m.universe {
            if succ.iter().all(|jv| jv.model.eval_formula(f)) && m.justified(ju, f).is_none() {
                failures.push(ExplanationFailure { world: u.clone(), formula: f.clone() });
            }
        }
    }
    ExplanatoryReport { pass: failures.is_empty(), failures, restriction: m.restriction() }
}

/// Propositional modal formulas.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModalFormula {
    Falsum,
    Atom(String),
    Not(Box<ModalFormula>),
    And(Box<ModalFormula>, Box<ModalFormula>),
    Or(Box<ModalFormula>, Box<ModalFormula>),
    Implies(Box<ModalFormula>, Box<ModalFormula>),
    Box(Box<ModalFormula>),
}

impl ModalFormula {
    /// Forgets justifications: `t:F` becomes `[]F`.
    pub fn forget(f: &Formula) -> ModalFormula {
        use ModalFormula as M;
        let b = |g: &Formula| Box::new(M::forget(g));
        match f {
            Formula::Falsum => M::Falsum,
            Formula::Atom(a) => M::Atom(a.clone()),
            Formula::Not(g) => M::Not(b(g)),
            Formula::And(l, r) => M::And(b(l), b(r)),
            Formula::Or(l, r) => M::Or(b(l), b(r)),
            Formula::Implies(l, r) => M::Implies(b(l), b(r)),
            Formula::Just(_, g) => M::Box(b(g)),
        }
    }

    pub fn boxed(self) -> ModalFormula {
        ModalFormula::Box(Box::new(self))
    }

    pub fn implies(self, other: ModalFormula) -> ModalFormula {
        ModalFormula::Implies(Box::new(self), Box::new(other))
    }
}

impl fmt::Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModalFormula::Falsum => write!(f, "_|_"),
            ModalFormula::Atom(a) => write!(f, "{a}"),
            ModalFormula::Not(g) => write!(f, "~{g}"),
            ModalFormula::And(l, r) => write!(f, "({l} /\\ {r})"),
            ModalFormula::Or(l, r) => write!(f, "({l} \\/ {r})"),
            ModalFormula::Implies(l, r) => write!(f, "({l} -> {r})"),
            ModalFormula::Box(g) => write!(f, "[]{g}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KripkeModel {
    pub worlds: Vec<World>,
    pub relation: Relation,
    /// Letters true at each world; all others are false.
    pub valuation: BTreeMap<World, BTreeSet<String>>,
    pub restriction: String,
}

impl KripkeModel {
    pub fn is_reflexive(&self) -> bool {
        self.worlds.iter().all(|u| self.relation.contains(&(u.clone(), u.clone())))
    }
}

impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "worlds: {}", self.worlds.join(", "))?;
        let pairs: Vec<String> = self.relation.iter().map(|(u, v)| format!("{u}->{v}")).collect();
        writeln!(f, "R: {}", pairs.join(", "))?;
        for (w, letters) in &self.valuation {
            let l: Vec<&str> = letters.iter().map(String::as_str).collect();
            writeln!(f, "{w}: {{{}}}", l.join(", "))?;
        }
        write!(f, "({})", self.restriction)
    }
}

/// Collapses an indifferent model to the Kripke model of its induced
/// relation, with letters read over the universe and its assertions.
pub fn extract_kripke(m: &MultiJEM) -> std::result::Result<KripkeModel, IndifferenceReport> {
    let report = check_justification_indifference(m);
    if !report.pass {
        return Err(report);
    }
    let letters: BTreeSet<String> = m.universe.iter().flat_map(Formula::atoms).collect();
    let valuation = m
        .worlds
        .iter()
        .map(|(w, j)| {
            let on = letters.iter().filter(|a| j.model.atom_value(a)).cloned().collect();
            (w.clone(), on)
        })
        .collect();
    Ok(KripkeModel {
        worlds: m.worlds.keys().cloned().collect(),
        relation: derive_accessibility(m),
        valuation,
        restriction: m.restriction(),
    })
}

pub fn box_eval(k: &KripkeModel, u: &str, f: &ModalFormula) -> bool {
    match f {
        ModalFormula::Falsum => false,
        ModalFormula::Atom(a) => k.valuation.get(u).is_some_and(|s| s.contains(a)),
        ModalFormula::Not(g) => !box_eval(k, u, g),
        ModalFormula::And(l, r) => box_eval(k, u, l) && box_eval(k, u, r),
        ModalFormula::Or(l, r) => box_eval(k, u, l) || box_eval(k, u, r),
        ModalFormula::Implies(l, r) => !box_eval(k, u, l) || box_eval(k, u, r),
        ModalFormula::Box(g) => successors(&k.relation, u).all(|v| box_eval(k, v, g)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jem::TermSet;
    use crate::model::{BasicModel, FormulaSet};
    use crate::russell::build_russell;
    use crate::syntax::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn jem(model: BasicModel) -> JEM {
        JEM::new(model, TermSet::ground(), TermSet::ground())
    }

    fn fixture() -> MultiJEM {
        let lem = FormulaSet::singleton(p("P \\/ ~P"));
        let world = |v| (String::from(if v { "u1" } else { "u2" }), jem(BasicModel::explicit(lem.clone()).with_atom("P", v)));
        let (x, y) = (Term::var("x"), Term::var("y"));
        MultiJEM::new(
            [world(true), world(false)],
            [x.app(&y)],
            [p("P"), p("~P"), p("P \\/ ~P")],
        )
        .unwrap()
    }

    #[test]
    fn indifferent_fixture() {
        let m = fixture();
        assert_eq!(m.signature().len(), 3);
        let r = derive_accessibility(&m);
        assert_eq!(r.len(), 4);
        assert!(check_justification_indifference(&m).pass);
        assert!(check_fully_explanatory(&m, &r).pass);
        let k = extract_kripke(&m).unwrap();
        assert!(k.is_reflexive());
        for u in &k.worlds {
            for f in m.universe() {
                let phi = ModalFormula::forget(f);
                assert!(box_eval(&k, u, &phi.clone().boxed().implies(phi)));
                let t = Term::var("x");
                assert_eq!(
                    box_eval(&k, u, &ModalFormula::forget(f).boxed()),
                    m.world(u).unwrap().model.eval_term(&t).contains(f)
                );
            }
        }
    }

    #[test]
    fn empty_values_reach_everything() {
        let m = MultiJEM::new(
            [("a".into(), jem(BasicModel::explicit(FormulaSet::empty()))), ("b".into(), jem(BasicModel::explicit(FormulaSet::empty())))],
            [Term::var("t")],
            [p("P")],
        )
        .unwrap();
        assert_eq!(derive_accessibility(&m).len(), 4);
        let none = Relation::new();
        let report = check_fully_explanatory(&m, &none);
        assert_eq!(report.failures.len(), 2);
    }

    #[test]
    fn justified_letter_blocks_access() {
        let t = Term::var("t");
        let u = jem(BasicModel::explicit(FormulaSet::empty()).with_term(t.clone(), FormulaSet::singleton(p("P"))));
        let v = jem(BasicModel::explicit(FormulaSet::empty()).with_atom("P", false));
        let m = MultiJEM::new([("u".into(), u), ("v".into(), v)], [t], [p("P")]).unwrap();
        let r = derive_accessibility(&m);
        assert!(!r.contains(&("u".into(), "v".into())));
        assert!(r.contains(&("v".into(), "u".into())));
    }

    #[test]
    fn russell_world_is_refused() {
        let j = build_russell();
        let m = MultiJEM::new(
            [("u".into(), j)],
            [Term::constant(0u32), Term::var("w"), Term::var("r")],
            [p("B")],
        )
        .unwrap();
        assert!(derive_accessibility(&m).contains(&("u".into(), "u".into())));
        let report = extract_kripke(&m).unwrap_err();
        assert_eq!(
            report.failures[0],
            IndifferenceFailure {
                world: "u".into(),
                term: Term::var("r"),
                reference: Term::constant(0u32),
                formula: p("B"),
            }
        );
        assert!(report.failures.iter().any(|f| f.term == Term::var("w")));
    }

    #[test]
    fn all_valued_terms_are_indifferent() {
        let m = MultiJEM::new([("u".into(), jem(BasicModel::explicit(FormulaSet::All)))], [Term::var("t").app(&Term::var("s"))], [p("P")]).unwrap();
        assert!(check_justification_indifference(&m).pass);
        assert!(check_fully_explanatory(&m, &derive_accessibility(&m)).pass);
    }
}
