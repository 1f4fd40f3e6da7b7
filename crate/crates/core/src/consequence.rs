//! Classical consequence with justification assertions read as atoms.
//!
//! Every maximal `t:X` becomes an opaque propositional atom keyed by its
//! canonical text, so `t:F` and `t:(F /\ F)` are unrelated atoms. Entailment
//! is decided semantically by backtracking over the abstract atoms with
//! three-valued pruning; a failed refutation yields a Boolean assignment,
//! which is turned into a basic model by `t* = {X | t:X assigned true}`.

use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::error::{Error, Limits, Result};
use crate::model::{BasicModel, FormulaSet};
use crate::syntax::{Formula, Term};

/// Propositional skeleton over abstract atoms `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Prop {
    Var(usize),
    False,
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
}

impl Prop {
    /// Kleene evaluation under a partial assignment.
    fn eval3(&self, assign: &[Option<bool>]) -> Option<bool> {
        match self {
            Prop::Var(i) => assign[*i],
            Prop::False => Some(false),
            Prop::Not(p) => p.eval3(assign).map(|v| !v),
            Prop::And(l, r) => match (l.eval3(assign), r.eval3(assign)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Prop::Or(l, r) => match (l.eval3(assign), r.eval3(assign)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            Prop::Implies(l, r) => match (l.eval3(assign), r.eval3(assign)) {
                (Some(false), _) | (_, Some(true)) => Some(true),
                (Some(true), Some(false)) => Some(false),
                _ => None,
            },
        }
    }

    pub fn eval(&self, assign: &[bool]) -> bool {
        match self {
            Prop::Var(i) => assign[*i],
            Prop::False => false,
            Prop::Not(p) => !p.eval(assign),
            Prop::And(l, r) => l.eval(assign) && r.eval(assign),
            Prop::Or(l, r) => l.eval(assign) || r.eval(assign),
            Prop::Implies(l, r) => !l.eval(assign) || r.eval(assign),
        }
    }
}

/// What an abstract atom stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomKey {
    Letter(String),
    /// A maximal justification assertion `t:X`.
    Assertion(Term, Formula),
}

impl AtomKey {
    pub fn text(&self) -> String {
        match self {
            AtomKey::Letter(name) => name.clone(),
            AtomKey::Assertion(t, x) => Formula::just(t.clone(), x.clone()).to_string(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct AtomizedSkeleton {
    /// One skeleton per input formula, in input order.
    pub skeleton: Vec<Prop>,
    /// Abstract atom `i` stands for `dictionary[i]`.
    pub dictionary: Vec<AtomKey>,
    by_text: HashMap<String, usize>,
}

impl AtomizedSkeleton {
    pub fn atom_count(&self) -> usize {
        self.dictionary.len()
    }

    pub fn index_of(&self, text: &str) -> Option<usize> {
        self.by_text.get(text).copied()
    }

    fn intern(&mut self, key: AtomKey) -> usize {
        let text = key.text();
        if let Some(&i) = self.by_text.get(&text) {
            return i;
        }
        let i = self.dictionary.len();
        self.dictionary.push(key);
        self.by_text.insert(text, i);
        i
    }

    fn translate(&mut self, f: &Formula) -> Prop {
        match f {
            Formula::Falsum => Prop::False,
            Formula::Atom(name) => Prop::Var(self.intern(AtomKey::Letter(name.clone()))),
            Formula::Just(t, body) => {
                Prop::Var(self.intern(AtomKey::Assertion(t.clone(), (**body).clone())))
            }
            Formula::Not(g) => Prop::Not(Box::new(self.translate(g))),
            Formula::And(l, r) => Prop::And(Box::new(self.translate(l)), Box::new(self.translate(r))),
            Formula::Or(l, r) => Prop::Or(Box::new(self.translate(l)), Box::new(self.translate(r))),
            Formula::Implies(l, r) => {
                Prop::Implies(Box::new(self.translate(l)), Box::new(self.translate(r)))
            }
        }
    }
}

/// Replaces every maximal justification assertion by an abstract atom.
pub fn atomize<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> AtomizedSkeleton {
    let mut out = AtomizedSkeleton::default();
    for f in fs {
        let p = out.translate(f);
        out.skeleton.push(p);
    }
    out
}

/// Enumerates partial assignments (cubes) under which every constraint is
/// true; unassigned atoms are free. The cubes are disjoint and together
/// cover all satisfying total assignments.
pub(crate) fn for_each_model<T>(
    constraints: &[Prop],
    atoms: usize,
    visit: &mut impl FnMut(&[Option<bool>]) -> ControlFlow<T>,
) -> Option<T> {
    fn go<T>(
        constraints: &[Prop],
        assign: &mut Vec<Option<bool>>,
        next: usize,
        visit: &mut impl FnMut(&[Option<bool>]) -> ControlFlow<T>,
    ) -> ControlFlow<T> {
        let mut open = false;
        for c in constraints {
            match c.eval3(assign) {
                Some(false) => return ControlFlow::Continue(()),
                None => open = true,
                Some(true) => {}
            }
        }
        if !open {
            return visit(assign);
        }
        // Some constraint is undetermined, so an unassigned atom remains.
        let var = (next..assign.len()).find(|&i| assign[i].is_none()).expect("open constraint");
        for value in [false, true] {
            assign[var] = Some(value);
            go(constraints, assign, var + 1, visit)?;
        }
        assign[var] = None;
        ControlFlow::Continue(())
    }
    match go(constraints, &mut vec![None; atoms], 0, visit) {
        ControlFlow::Break(t) => Some(t),
        ControlFlow::Continue(()) => None,
    }
}

/// Skeleton of `hypotheses ∪ {¬goal}`, checked against the atom limit.
pub(crate) fn refutation_problem(
    hypotheses: &[Formula],
    goal: &Formula,
    limits: &Limits,
) -> Result<(AtomizedSkeleton, Vec<Prop>)> {
    let skel = atomize(hypotheses.iter().chain([goal]));
    if skel.atom_count() > limits.atoms {
        return Err(Error::AtomLimit { count: skel.atom_count(), limit: limits.atoms });
    }
    let mut constraints = skel.skeleton.clone();
    let g = constraints.pop().expect("goal");
    constraints.push(Prop::Not(Box::new(g)));
    Ok((skel, constraints))
}

/// True iff `⋀ hypotheses -> goal` is a tautology of the atomized skeleton.
pub fn entails(hypotheses: &[Formula], goal: &Formula, limits: &Limits) -> Result<bool> {
    let (skel, constraints) = refutation_problem(hypotheses, goal, limits)?;
    Ok(for_each_model(&constraints, skel.atom_count(), &mut |_| ControlFlow::Break(())).is_none())
}

/// True iff `s` does not entail falsum.
pub fn consistent(s: &[Formula], limits: &Limits) -> Result<bool> {
    Ok(!entails(s, &Formula::Falsum, limits)?)
}

/// Reads a basic model off an assignment: letters from the assignment
/// (unassigned letters false) and `t* = {X | t:X assigned true}`, with every
/// other term valued empty.
pub(crate) fn model_from_assignment(skel: &AtomizedSkeleton, assign: &[Option<bool>]) -> BasicModel {
    let mut m = BasicModel::explicit(FormulaSet::empty());
    for (key, value) in skel.dictionary.iter().zip(assign) {
        let value = value.unwrap_or(false);
        match key {
            AtomKey::Letter(name) => {
                m.atoms.insert(name.clone(), value);
            }
            AtomKey::Assertion(t, x) => {
                let current = m.eval_term(t);
                let FormulaSet::Finite(mut members) = current else { unreachable!() };
                if value {
                    members.insert(x.clone());
                }
                m.set_term(t.clone(), FormulaSet::Finite(members)).expect("explicit model");
            }
        }
    }
    m
}

/// A basic model satisfying every hypothesis and falsifying `goal`, or
/// `None` when the entailment holds.
pub fn countermodel(
    hypotheses: &[Formula],
    goal: &Formula,
    limits: &Limits,
) -> Result<Option<BasicModel>> {
    let (skel, constraints) = refutation_problem(hypotheses, goal, limits)?;
    Ok(for_each_model(&constraints, skel.atom_count(), &mut |assign| {
        ControlFlow::Break(model_from_assignment(&skel, assign))
    }))
}
