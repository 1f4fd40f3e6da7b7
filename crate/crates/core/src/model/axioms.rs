//! Axiom schemas of J⁻: a Hilbert basis for classical propositional logic
//! plus the Application schema `s:(F -> G) -> (t:F -> [s.t]:G)`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::syntax::{Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AxiomSchema {
    /// `F -> (G -> F)`
    Weakening,
    /// `(F -> (G -> H)) -> ((F -> G) -> (F -> H))`
    Distribution,
    /// `F /\ G -> F`
    AndElimLeft,
    /// `F /\ G -> G`
    AndElimRight,
    /// `F -> (G -> F /\ G)`
    AndIntro,
    /// `F -> F \/ G`
    OrIntroLeft,
    /// `G -> F \/ G`
    OrIntroRight,
    /// `(F -> H) -> ((G -> H) -> (F \/ G -> H))`
    OrElim,
    /// `(F -> G) -> ((F -> ~G) -> ~F)`
    NegIntro,
    /// `~~F -> F`
    DoubleNegation,
    /// `_|_ -> F`
    ExFalso,
    /// `s:(F -> G) -> (t:F -> [s.t]:G)`
    Application,
}

impl AxiomSchema {
    pub const PROPOSITIONAL: [AxiomSchema; 11] = [
        AxiomSchema::Weakening,
        AxiomSchema::Distribution,
        AxiomSchema::AndElimLeft,
        AxiomSchema::AndElimRight,
        AxiomSchema::AndIntro,
        AxiomSchema::OrIntroLeft,
        AxiomSchema::OrIntroRight,
        AxiomSchema::OrElim,
        AxiomSchema::NegIntro,
        AxiomSchema::DoubleNegation,
        AxiomSchema::ExFalso,
    ];

    /// Number of formula letters in the schema.
    pub fn arity(self) -> usize {
        match self {
            AxiomSchema::DoubleNegation | AxiomSchema::ExFalso => 1,
            AxiomSchema::Distribution | AxiomSchema::OrElim => 3,
            _ => 2,
        }
    }

    fn pattern(self) -> Pat {
        use Pat::*;
        let (f, g, h) = (|| Meta(0), || Meta(1), || Meta(2));
        match self {
            AxiomSchema::Weakening => imp(f(), imp(g(), f())),
            AxiomSchema::Distribution => imp(
                imp(f(), imp(g(), h())),
                imp(imp(f(), g()), imp(f(), h())),
            ),
            AxiomSchema::AndElimLeft => imp(and(f(), g()), f()),
            AxiomSchema::AndElimRight => imp(and(f(), g()), g()),
            AxiomSchema::AndIntro => imp(f(), imp(g(), and(f(), g()))),
            AxiomSchema::OrIntroLeft => imp(f(), or(f(), g())),
            AxiomSchema::OrIntroRight => imp(g(), or(f(), g())),
            AxiomSchema::OrElim => {
                imp(imp(f(), h()), imp(imp(g(), h()), imp(or(f(), g()), h())))
            }
            AxiomSchema::NegIntro => imp(imp(f(), g()), imp(imp(f(), not(g())), not(f()))),
            AxiomSchema::DoubleNegation => imp(not(not(f())), f()),
            AxiomSchema::ExFalso => imp(Falsum, f()),
            AxiomSchema::Application => {
                let (s, t) = (TermPat::Meta(0), TermPat::Meta(1));
                let st = TermPat::App(Box::new(TermPat::Meta(0)), Box::new(TermPat::Meta(1)));
                imp(
                    Just(s, Box::new(imp(f(), g()))),
                    imp(Just(t, Box::new(f())), Just(st, Box::new(g()))),
                )
            }
        }
    }

    /// Instance of a propositional schema with the given letters.
    /// Panics if `letters` is shorter than the arity or the schema is `Application`.
    pub fn instantiate(self, letters: &[Formula]) -> Formula {
        assert!(self != AxiomSchema::Application, "use application_instance");
        self.pattern().build(letters, &[])
    }

    /// `s:(F -> G) -> (t:F -> [s.t]:G)`
    pub fn application_instance(s: &Term, t: &Term, f: &Formula, g: &Formula) -> Formula {
        AxiomSchema::Application
            .pattern()
            .build(&[f.clone(), g.clone()], &[s.clone(), t.clone()])
    }
}

#[derive(Clone, Debug)]
enum TermPat {
    Meta(usize),
    App(Box<TermPat>, Box<TermPat>),
}

#[derive(Clone, Debug)]
enum Pat {
    Meta(usize),
    Falsum,
    Not(Box<Pat>),
    And(Box<Pat>, Box<Pat>),
    Or(Box<Pat>, Box<Pat>),
    Implies(Box<Pat>, Box<Pat>),
    Just(TermPat, Box<Pat>),
}

fn imp(a: Pat, b: Pat) -> Pat {
    Pat::Implies(Box::new(a), Box::new(b))
}
fn and(a: Pat, b: Pat) -> Pat {
    Pat::And(Box::new(a), Box::new(b))
}
fn or(a: Pat, b: Pat) -> Pat {
    Pat::Or(Box::new(a), Box::new(b))
}
fn not(a: Pat) -> Pat {
    Pat::Not(Box::new(a))
}

#[derive(Default)]
struct Bindings<'a> {
    formulas: [Option<&'a Formula>; 3],
    terms: [Option<&'a Term>; 2],
}

impl TermPat {
    fn matches<'a>(&self, t: &'a Term, b: &mut Bindings<'a>) -> bool {
        match (self, t) {
            (TermPat::Meta(i), _) => match b.terms[*i] {
                Some(bound) => bound == t,
                None => {
                    b.terms[*i] = Some(t);
                    true
                }
            },
            (TermPat::App(pl, pr), Term::Application(l, r)) => pl.matches(l, b) && pr.matches(r, b),
            _ => false,
        }
    }

    fn build(&self, terms: &[Term]) -> Term {
        match self {
            TermPat::Meta(i) => terms[*i].clone(),
            TermPat::App(l, r) => l.build(terms).app(&r.build(terms)),
        }
    }
}

impl Pat {
    fn matches<'a>(&self, f: &'a Formula, b: &mut Bindings<'a>) -> bool {
        match (self, f) {
            (Pat::Meta(i), _) => match b.formulas[*i] {
                Some(bound) => bound == f,
                None => {
                    b.formulas[*i] = Some(f);
                    true
                }
            },
            (Pat::Falsum, Formula::Falsum) => true,
            (Pat::Not(p), Formula::Not(g)) => p.matches(g, b),
            (Pat::And(pl, pr), Formula::And(l, r))
            | (Pat::Or(pl, pr), Formula::Or(l, r))
            | (Pat::Implies(pl, pr), Formula::Implies(l, r)) => {
                pl.matches(l, b) && pr.matches(r, b)
            }
            (Pat::Just(pt, pb), Formula::Just(t, body)) => pt.matches(t, b) && pb.matches(body, b),
            _ => false,
        }
    }

    fn build(&self, letters: &[Formula], terms: &[Term]) -> Formula {
        match self {
            Pat::Meta(i) => letters[*i].clone(),
            Pat::Falsum => Formula::Falsum,
            Pat::Not(p) => p.build(letters, terms).not(),
            Pat::And(l, r) => l.build(letters, terms).and(r.build(letters, terms)),
            Pat::Or(l, r) => l.build(letters, terms).or(r.build(letters, terms)),
            Pat::Implies(l, r) => l.build(letters, terms).implies(r.build(letters, terms)),
            Pat::Just(t, body) => Formula::just(t.build(terms), body.build(letters, terms)),
        }
    }
}

/// The first schema `f` is an instance of, if any.
pub fn axiom_schema(f: &Formula) -> Option<AxiomSchema> {
    AxiomSchema::PROPOSITIONAL
        .iter()
        .chain([&AxiomSchema::Application])
        .copied()
        .find(|schema| schema.pattern().matches(f, &mut Bindings::default()))
}

/// True iff `f` is an axiom of J⁻ (without constant specification).
pub fn is_axiom(f: &Formula) -> bool {
    axiom_schema(f).is_some()
}

/// A small, deterministic family of axioms over the given letters: every
/// propositional schema instantiated with all combinations of `letters`,
/// and every Application instance over `terms` with `F`, `G` from `letters`.
pub fn probe_axioms(letters: &[Formula], terms: &[Term]) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for schema in AxiomSchema::PROPOSITIONAL {
        let arity = schema.arity();
        let mut idx = vec![0usize; arity];
        'outer: loop {
            let chosen: Vec<Formula> = idx.iter().map(|&i| letters[i].clone()).collect();
            out.insert(schema.instantiate(&chosen));
            for slot in idx.iter_mut().rev() {
                *slot += 1;
                if *slot < letters.len() {
                    continue 'outer;
                }
                *slot = 0;
            }
            break;
        }
    }
    for s in terms {
        for t in terms {
            for f in letters {
                for g in letters {
                    out.insert(AxiomSchema::application_instance(s, t, f, g));
                }
            }
        }
    }
    out
}
