//! Justification terms and formulas.
//!
//! Terms are built from constants `c0, c1, ...` and variables by a binary,
//! non-commutative application. Formulas are classical propositional
//! formulas extended with justification assertions `t:F`. Equality is
//! structural throughout, so `F` and `F /\ F` are different formulas.

mod godel;
mod parse;
mod print;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;

pub use godel::{formula_weight, godel_formula, godel_number, term_weight};
pub use parse::{parse_formula, parse_term, ParseError};

/// A justification term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Constant(BigUint),
    /// Variable names are identifiers that do not have the constant shape `c<digits>`.
    Variable(String),
    Application(Box<Term>, Box<Term>),
}

/// A formula of the justification language.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Falsum,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Just(Term, Box<Formula>),
}

impl Term {
    pub fn constant(index: impl Into<BigUint>) -> Term {
        Term::Constant(index.into())
    }

    pub fn var(name: &str) -> Term {
        Term::Variable(name.to_string())
    }

    /// `[self . right]`
    pub fn app(&self, right: &Term) -> Term {
        Term::Application(Box::new(self.clone()), Box::new(right.clone()))
    }

    pub fn is_atomic(&self) -> bool {
        !matches!(self, Term::Application(..))
    }

    /// True iff the term contains no variables.
    pub fn is_ground(&self) -> bool {
        match self {
            Term::Constant(_) => true,
            Term::Variable(_) => false,
            Term::Application(l, r) => l.is_ground() && r.is_ground(),
        }
    }

    /// Application nesting depth; leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Application(l, r) => 1 + l.depth().max(r.depth()),
            _ => 0,
        }
    }

    pub fn variables(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Term::Constant(_) => {}
            Term::Variable(name) => {
                out.insert(name.as_str());
            }
            Term::Application(l, r) => {
                l.collect_variables(out);
                r.collect_variables(out);
            }
        }
    }

    /// All subterms, including the term itself.
    pub fn subterms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        self.collect_subterms(&mut out);
        out
    }

    fn collect_subterms(&self, out: &mut BTreeSet<Term>) {
        if let Term::Application(l, r) = self {
            l.collect_subterms(out);
            r.collect_subterms(out);
        }
        out.insert(self.clone());
    }
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, right: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(right))
    }

    pub fn or(self, right: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(right))
    }

    pub fn implies(self, right: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(right))
    }

    /// `term:body`
    pub fn just(term: Term, body: Formula) -> Formula {
        Formula::Just(term, Box::new(body))
    }

    /// Number of syntax nodes, counting formula and term nodes alike.
    pub fn size(&self) -> usize {
        fn term_size(t: &Term) -> usize {
            match t {
                Term::Application(l, r) => 1 + term_size(l) + term_size(r),
                _ => 1,
            }
        }
        match self {
            Formula::Falsum | Formula::Atom(_) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                1 + l.size() + r.size()
            }
            Formula::Just(t, f) => 1 + term_size(t) + f.size(),
        }
    }

    /// All subformulas, including the formula itself. Bodies of
    /// justification assertions are subformulas.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.contains(self) {
            return;
        }
        match self {
            Formula::Falsum | Formula::Atom(_) => {}
            Formula::Not(f) | Formula::Just(_, f) => f.collect_subformulas(out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.collect_subformulas(out);
                r.collect_subformulas(out);
            }
        }
        out.insert(self.clone());
    }

    /// Every term occurring in the formula, closed under subterms.
    pub fn subterms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Just(t, _) = f {
                t.collect_subterms(&mut out);
            }
        });
        out
    }

    /// Propositional letters occurring anywhere, including inside assertions.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(name) = f {
                out.insert(name.clone());
            }
        });
        out
    }

    /// Pre-order traversal over all subformula occurrences.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Falsum | Formula::Atom(_) => {}
            Formula::Not(g) | Formula::Just(_, g) => g.visit(f),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.visit(f);
                r.visit(f);
            }
        }
    }
}

/// True iff `name` has the reserved constant shape `c<digits>`.
pub(crate) fn is_constant_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next() == Some('c') && name.len() > 1 && chars.all(|c| c.is_ascii_digit())
}

/// True iff `name` is a well-formed identifier usable as an atom.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// True iff `name` is a well-formed variable name.
pub fn is_variable_name(name: &str) -> bool {
    is_identifier(name) && !is_constant_name(name)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_term(f, self)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_formula(f, self)
    }
}

/// Canonical text of a formula.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

impl serde::Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn ground_terms() {
        let c1 = Term::constant(1u32);
        let c2 = Term::constant(2u32);
        assert!(c1.app(&c2).is_ground());
        assert!(!Term::var("w").is_ground());
        assert!(!c1.app(&Term::var("w")).is_ground());
    }

    #[test]
    fn subterms_of_application_formula() {
        let f = p("x:(P -> Q) -> [x.y]:Q");
        let terms = f.subterms();
        let x = Term::var("x");
        let y = Term::var("y");
        assert!(terms.contains(&x));
        assert!(terms.contains(&y));
        assert!(terms.contains(&x.app(&y)));
        assert_eq!(terms.len(), 3);
    }

    #[test]
    fn subformulas_include_assertion_bodies() {
        let f = p("t:(P /\\ Q)");
        let subs = f.subformulas();
        assert!(subs.contains(&p("P /\\ Q")));
        assert!(subs.contains(&p("P")));
        assert!(subs.contains(&f));
        assert_eq!(subs.len(), 4);
    }

    #[test]
    fn hyperintensional_equality() {
        let f = p("F");
        assert_ne!(f, f.clone().and(f.clone()));
    }

    #[test]
    fn constant_names() {
        assert!(is_constant_name("c0"));
        assert!(is_constant_name("c123"));
        assert!(!is_constant_name("c"));
        assert!(!is_constant_name("c1x"));
        assert!(is_variable_name("cx"));
        assert!(!is_variable_name("c7"));
        assert!(!is_variable_name("_x"));
    }
}
