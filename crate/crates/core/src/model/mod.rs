//! Basic models: a truth assignment for propositional letters plus an
//! assignment of formula sets to justification terms, with `t:X` true iff
//! `X` belongs to the value of `t`.

mod axioms;
mod closure;
mod cs;
mod jminus;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{Formula, Term};

pub use axioms::{axiom_schema, is_axiom, probe_axioms, AxiomSchema};
pub use closure::{
    application_axiom_valid, check_closure, is_factive, is_injective, ClosureReport,
    ClosureViolation,
};
pub(crate) use cs::candidate_axioms;
pub use cs::{constant_value, cs_violation, satisfies_cs, ConstantSpecification};
pub use jminus::{derive_jminus, find_countermodel_jminus, JMinusDerivation};

/// The value of a justification term: a finite set of formulas, or all of them.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormulaSet {
    Finite(BTreeSet<Formula>),
    All,
}

impl FormulaSet {
    pub fn empty() -> FormulaSet {
        FormulaSet::Finite(BTreeSet::new())
    }

    pub fn singleton(f: Formula) -> FormulaSet {
        FormulaSet::Finite(BTreeSet::from([f]))
    }

    pub fn finite(fs: impl IntoIterator<Item = Formula>) -> FormulaSet {
        FormulaSet::Finite(fs.into_iter().collect())
    }

    pub fn contains(&self, f: &Formula) -> bool {
        match self {
            FormulaSet::All => true,
            FormulaSet::Finite(set) => set.contains(f),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, FormulaSet::Finite(set) if set.is_empty())
    }

    /// Number of members, or `None` for the whole of the formula space.
    pub fn len(&self) -> Option<usize> {
        match self {
            FormulaSet::All => None,
            FormulaSet::Finite(set) => Some(set.len()),
        }
    }

    pub fn as_finite(&self) -> Option<&BTreeSet<Formula>> {
        match self {
            FormulaSet::All => None,
            FormulaSet::Finite(set) => Some(set),
        }
    }

    /// `Ok(())` if `self` is a subset of `other`, otherwise a member of
    /// `self` missing from `other`.
    pub fn subset_of(&self, other: &FormulaSet) -> std::result::Result<(), Formula> {
        match (self, other) {
            (_, FormulaSet::All) => Ok(()),
            (FormulaSet::All, FormulaSet::Finite(set)) => Err(fresh_formula(set)),
            (FormulaSet::Finite(a), FormulaSet::Finite(b)) => match a.difference(b).next() {
                Some(f) => Err(f.clone()),
                None => Ok(()),
            },
        }
    }

    pub fn union(&self, other: &FormulaSet) -> FormulaSet {
        match (self, other) {
            (FormulaSet::Finite(a), FormulaSet::Finite(b)) => {
                FormulaSet::Finite(a.union(b).cloned().collect())
            }
            _ => FormulaSet::All,
        }
    }
}

/// A formula outside the finite set `set`: a negation chain over `_|_`
/// longer than any member.
fn fresh_formula(set: &BTreeSet<Formula>) -> Formula {
    let longest = set.iter().map(Formula::size).max().unwrap_or(0);
    (0..longest).fold(Formula::Falsum, |f, _| f.not())
}

impl fmt::Display for FormulaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaSet::All => f.write_str("ALL"),
            FormulaSet::Finite(set) if set.is_empty() => f.write_str("EMPTY"),
            FormulaSet::Finite(set) => {
                f.write_str("{ ")?;
                for (i, x) in set.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(" }")
            }
        }
    }
}

impl serde::Serialize for FormulaSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One Modus Ponens step over all pairs: `{F | G -> F in s, G in t}`.
pub fn mp_apply(s: &FormulaSet, t: &FormulaSet) -> FormulaSet {
    match (s, t) {
        (FormulaSet::All, t) if t.is_empty() => FormulaSet::empty(),
        (FormulaSet::All, _) => FormulaSet::All,
        (FormulaSet::Finite(s), t) => FormulaSet::Finite(
            s.iter()
                .filter_map(|f| match f {
                    Formula::Implies(g, h) if t.contains(g) => Some((**h).clone()),
                    _ => None,
                })
                .collect(),
        ),
    }
}

/// How a model assigns values to terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermValuation {
    /// Every term is looked up; unlisted terms get `default`.
    Explicit { values: BTreeMap<Term, FormulaSet>, default: FormulaSet },
    /// Only constants and variables are listed; applications are computed
    /// by `(s.t)* = s* |> t*`.
    Sharp { leaves: BTreeMap<Term, FormulaSet>, default: FormulaSet },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicModel {
    pub atoms: BTreeMap<String, bool>,
    pub atom_default: bool,
    pub terms: TermValuation,
    /// When present, constants without an explicit value take the value
    /// the specification realizes for them.
    pub constant_spec: Option<ConstantSpecification>,
}

impl BasicModel {
    pub fn explicit(default: FormulaSet) -> BasicModel {
        BasicModel {
            atoms: BTreeMap::new(),
            atom_default: false,
            terms: TermValuation::Explicit { values: BTreeMap::new(), default },
            constant_spec: None,
        }
    }

    pub fn sharp(default: FormulaSet) -> BasicModel {
        BasicModel {
            atoms: BTreeMap::new(),
            atom_default: false,
            terms: TermValuation::Sharp { leaves: BTreeMap::new(), default },
            constant_spec: None,
        }
    }

    pub fn is_sharp(&self) -> bool {
        matches!(self.terms, TermValuation::Sharp { .. })
    }

    pub fn with_atom(mut self, name: &str, value: bool) -> Self {
        self.atoms.insert(name.to_string(), value);
        self
    }

    pub fn with_atom_default(mut self, value: bool) -> Self {
        self.atom_default = value;
        self
    }

    /// Panics when assigning an application term in a sharp model.
    pub fn with_term(mut self, t: Term, value: FormulaSet) -> Self {
        self.set_term(t, value).expect("sharp models only take leaf values");
        self
    }

    pub fn with_constant_spec(mut self, cs: ConstantSpecification) -> Self {
        self.constant_spec = Some(cs);
        self
    }

    pub fn set_term(&mut self, t: Term, value: FormulaSet) -> Result<()> {
        match &mut self.terms {
            TermValuation::Explicit { values, .. } => {
                values.insert(t, value);
            }
            TermValuation::Sharp { leaves, .. } => {
                if !t.is_atomic() {
                    return Err(Error::InvalidModel(format!(
                        "sharp model cannot assign application term {t}"
                    )));
                }
                leaves.insert(t, value);
            }
        }
        Ok(())
    }

    pub fn atom_value(&self, name: &str) -> bool {
        self.atoms.get(name).copied().unwrap_or(self.atom_default)
    }

    /// Terms with an explicitly stored value.
    pub fn assigned_terms(&self) -> impl Iterator<Item = (&Term, &FormulaSet)> {
        match &self.terms {
            TermValuation::Explicit { values, .. } => values.iter(),
            TermValuation::Sharp { leaves, .. } => leaves.iter(),
        }
    }

    pub fn term_default(&self) -> &FormulaSet {
        match &self.terms {
            TermValuation::Explicit { default, .. } | TermValuation::Sharp { default, .. } => {
                default
            }
        }
    }

    fn unlisted(&self, t: &Term) -> FormulaSet {
        if let (Term::Constant(n), Some(cs)) = (t, &self.constant_spec) {
            if let Some(v) = cs.realize(n) {
                return v;
            }
        }
        self.term_default().clone()
    }

    pub fn eval_term(&self, t: &Term) -> FormulaSet {
        match &self.terms {
            TermValuation::Explicit { values, .. } => {
                values.get(t).cloned().unwrap_or_else(|| self.unlisted(t))
            }
            TermValuation::Sharp { leaves, .. } => match t {
                Term::Application(l, r) => mp_apply(&self.eval_term(l), &self.eval_term(r)),
                _ => leaves.get(t).cloned().unwrap_or_else(|| self.unlisted(t)),
            },
        }
    }

    pub fn eval_formula(&self, f: &Formula) -> bool {
        match f {
            Formula::Falsum => false,
            Formula::Atom(name) => self.atom_value(name),
            Formula::Not(g) => !self.eval_formula(g),
            Formula::And(l, r) => self.eval_formula(l) && self.eval_formula(r),
            Formula::Or(l, r) => self.eval_formula(l) || self.eval_formula(r),
            Formula::Implies(l, r) => !self.eval_formula(l) || self.eval_formula(r),
            Formula::Just(t, body) => self.eval_term(t).contains(body),
        }
    }

    /// Subformula closure of every formula mentioned in a finite term value,
    /// together with the letters that have an explicit truth value.
    pub fn formula_universe(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        let mut add = |set: &FormulaSet| {
            if let FormulaSet::Finite(fs) = set {
                for f in fs {
                    out.extend(f.subformulas());
                }
            }
        };
        for (_, v) in self.assigned_terms() {
            add(v);
        }
        add(self.term_default());
        out.extend(self.atoms.keys().map(|a| Formula::atom(a)));
        out
    }

    /// Same model with the listed letters negated. Term values are untouched.
    pub fn flip_atoms<'a>(&self, atoms: impl IntoIterator<Item = &'a str>) -> BasicModel {
        let mut out = self.clone();
        for a in atoms {
            let v = self.atom_value(a);
            out.atoms.insert(a.to_string(), !v);
        }
        out
    }
}

/// Value of `t` in `m`.
pub fn eval_term(m: &BasicModel, t: &Term) -> FormulaSet {
    m.eval_term(t)
}

/// Truth of `f` in `m`.
pub fn eval_formula(m: &BasicModel, f: &Formula) -> bool {
    m.eval_formula(f)
}
