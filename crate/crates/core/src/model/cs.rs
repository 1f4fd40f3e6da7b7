//! Constant specifications: which constants justify which axioms.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;

use super::axioms::{is_axiom, probe_axioms};
use super::{BasicModel, FormulaSet};
use crate::error::{Error, Result};
use crate::syntax::{godel_formula, godel_number, Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstantSpecification {
    Empty,
    /// Every constant justifies every axiom, at every nesting depth.
    Total,
    /// `c_n` justifies `A` iff `A` is an axiom of J⁻(CS) and `n` is the
    /// Gödel number of `A`.
    GodelInjective,
    /// An explicit finite, reflexive set of formulas `c:...:c:A`.
    Custom(BTreeSet<Formula>),
}

/// Strips a chain of constant prefixes, returning `(prefix length, core)`.
fn strip_constants(f: &Formula) -> (usize, &Formula) {
    let mut depth = 0;
    let mut cur = f;
    while let Formula::Just(Term::Constant(_), body) = cur {
        depth += 1;
        cur = body;
    }
    (depth, cur)
}

impl ConstantSpecification {
    /// Validates shape and reflexivity of a custom specification.
    pub fn custom(formulas: impl IntoIterator<Item = Formula>) -> Result<Self> {
        let set: BTreeSet<Formula> = formulas.into_iter().collect();
        for f in &set {
            let (depth, core) = strip_constants(f);
            if depth == 0 || !is_axiom(core) {
                return Err(Error::ConstantSpec(format!(
                    "{f} is not of the form c:...:c:A with A an axiom"
                )));
            }
            if let Formula::Just(_, body) = f {
                if matches!(**body, Formula::Just(..)) && !set.contains(body) {
                    return Err(Error::ConstantSpec(format!(
                        "not reflexive: {f} is listed but {body} is not"
                    )));
                }
            }
        }
        Ok(ConstantSpecification::Custom(set))
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConstantSpecification::Empty => "empty",
            ConstantSpecification::Total => "total",
            ConstantSpecification::GodelInjective => "godel-injective",
            ConstantSpecification::Custom(_) => "custom",
        }
    }

    /// True iff `c_n:f` belongs to the specification.
    pub fn certifies(&self, n: &BigUint, f: &Formula) -> bool {
        match self {
            ConstantSpecification::Empty => false,
            ConstantSpecification::Total => is_axiom(strip_constants(f).1),
            ConstantSpecification::GodelInjective => {
                *n == godel_number(f)
                    && (is_axiom(f)
                        || matches!(f, Formula::Just(Term::Constant(k), g) if self.certifies(k, g)))
            }
            ConstantSpecification::Custom(set) => {
                set.contains(&Formula::just(Term::Constant(n.clone()), f.clone()))
            }
        }
    }

    /// The least value of `c_n` making every specification formula about
    /// `c_n` true, or `None` when the specification says nothing about it.
    pub fn realize(&self, n: &BigUint) -> Option<FormulaSet> {
        match self {
            ConstantSpecification::Empty => None,
            ConstantSpecification::Total => Some(FormulaSet::All),
            ConstantSpecification::GodelInjective => Some(constant_value(n)),
            ConstantSpecification::Custom(set) => {
                let members: BTreeSet<Formula> = set
                    .iter()
                    .filter_map(|f| match f {
                        Formula::Just(Term::Constant(k), body) if k == n => Some((**body).clone()),
                        _ => None,
                    })
                    .collect();
                (!members.is_empty()).then_some(FormulaSet::Finite(members))
            }
        }
    }

    /// Specification formulas of nesting depth at most `depth`, with
    /// innermost axioms drawn from `axioms` and, for `Total`, constants from
    /// `constants`.
    pub fn formulas_up_to(
        &self,
        depth: usize,
        axioms: &BTreeSet<Formula>,
        constants: &[Term],
    ) -> Vec<Formula> {
        let mut out = Vec::new();
        match self {
            ConstantSpecification::Empty => {}
            ConstantSpecification::Custom(set) => {
                out.extend(set.iter().filter(|f| strip_constants(f).0 <= depth).cloned());
            }
            ConstantSpecification::GodelInjective => {
                let mut level: Vec<Formula> = axioms.iter().cloned().collect();
                for _ in 0..depth {
                    level = level
                        .into_iter()
                        .map(|x| Formula::just(Term::Constant(godel_number(&x)), x))
                        .collect();
                    out.extend(level.iter().cloned());
                }
            }
            ConstantSpecification::Total => {
                let mut level: Vec<Formula> = axioms.iter().cloned().collect();
                for _ in 0..depth {
                    level = level
                        .iter()
                        .flat_map(|x| constants.iter().map(move |c| Formula::just(c.clone(), x.clone())))
                        .collect();
                    out.extend(level.iter().cloned());
                }
            }
        }
        out
    }
}

fn memo() -> &'static Mutex<HashMap<BigUint, FormulaSet>> {
    static MEMO: OnceLock<Mutex<HashMap<BigUint, FormulaSet>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Value of `c_n` in the minimal Gödel-injective realization:
/// `{F}` when `n = |F|` and `F` is an axiom of J⁻, or `F = c_k:G` with
/// `c_k* = {G}`; otherwise empty. `c_0` is always empty.
///
/// The recursion only consults `c_k` for `k < n`, since a formula's
/// number exceeds the index of any constant in it.
pub fn constant_value(n: &BigUint) -> FormulaSet {
    if let Some(v) = memo().lock().unwrap().get(n) {
        return v.clone();
    }
    let value = match godel_formula(n) {
        Some(f) if is_axiom(&f) => FormulaSet::singleton(f),
        Some(Formula::Just(Term::Constant(k), g)) => {
            debug_assert!(&k < n);
            if constant_value(&k) == FormulaSet::singleton((*g).clone()) {
                FormulaSet::singleton(Formula::Just(Term::Constant(k), g))
            } else {
                FormulaSet::empty()
            }
        }
        _ => FormulaSet::empty(),
    };
    memo().lock().unwrap().insert(n.clone(), value.clone());
    value
}

/// Axioms used to instantiate infinite specifications against a model:
/// axioms already present in the model's formulas plus the probe family
/// over (up to) two of its letters, `_|_`, and two of its variables.
pub(crate) fn candidate_axioms(m: &BasicModel) -> BTreeSet<Formula> {
    let universe = m.formula_universe();
    let mut letters: Vec<Formula> = universe
        .iter()
        .filter(|f| matches!(f, Formula::Atom(_)))
        .take(2)
        .cloned()
        .collect();
    letters.push(Formula::Falsum);
    let terms: Vec<Term> = m
        .assigned_terms()
        .map(|(t, _)| t)
        .filter(|t| matches!(t, Term::Variable(_)))
        .take(2)
        .cloned()
        .collect();
    let mut axioms = probe_axioms(&letters, &terms);
    axioms.extend(universe.into_iter().filter(is_axiom));
    axioms
}

/// The first specification formula (nesting depth at most `depth`) that is
/// false in `m`, if any.
pub fn cs_violation(m: &BasicModel, cs: &ConstantSpecification, depth: usize) -> Option<Formula> {
    let axioms = candidate_axioms(m);
    let mut constants: Vec<Term> = m
        .assigned_terms()
        .map(|(t, _)| t)
        .filter(|t| matches!(t, Term::Constant(_)))
        .cloned()
        .collect();
    for k in [0u32, 1] {
        let c = Term::constant(k);
        if !constants.contains(&c) {
            constants.push(c);
        }
    }
    cs.formulas_up_to(depth, &axioms, &constants)
        .into_iter()
        .find(|f| !m.eval_formula(f))
}

/// True iff every specification formula of nesting depth at most `depth`
/// holds in `m`. Infinite specifications are instantiated over
/// [`candidate_axioms`].
pub fn satisfies_cs(m: &BasicModel, cs: &ConstantSpecification, depth: usize) -> bool {
    cs_violation(m, cs, depth).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;
    use num_traits::Zero;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn c0_is_empty() {
        assert!(constant_value(&BigUint::zero()).is_empty());
    }

    #[test]
    fn non_axiom_numbers_are_empty() {
        let n = godel_number(&p("P -> P"));
        assert!(constant_value(&n).is_empty());
        let n = godel_number(&p("B"));
        assert!(constant_value(&n).is_empty());
    }

    #[test]
    fn axiom_numbers_justify_their_axiom() {
        let a1 = p("P -> (Q -> P)");
        let n = godel_number(&a1);
        assert_eq!(constant_value(&n), FormulaSet::singleton(a1));
    }

    #[test]
    fn nested_specification_unfolds_once() {
        let a = p("_|_ -> B");
        let k = godel_number(&a);
        let inner = Formula::just(Term::Constant(k.clone()), a.clone());
        let n = godel_number(&inner);
        assert!(k < n);
        assert_eq!(constant_value(&n), FormulaSet::singleton(inner.clone()));
        assert!(ConstantSpecification::GodelInjective.certifies(&n, &inner));
        // A constant that does not justify the body does not certify.
        let wrong = Formula::just(Term::Constant(k + 1u32), a);
        assert!(constant_value(&godel_number(&wrong)).is_empty());
    }

    #[test]
    fn custom_requires_reflexivity() {
        let ok = ConstantSpecification::custom([p("c1:(P -> (Q -> P))"), p("c2:c1:(P -> (Q -> P))")]);
        assert!(ok.is_ok());
        let missing = ConstantSpecification::custom([p("c2:c1:(P -> (Q -> P))")]);
        assert!(matches!(missing, Err(Error::ConstantSpec(_))));
        let not_axiom = ConstantSpecification::custom([p("c1:(P -> P)")]);
        assert!(not_axiom.is_err());
    }

    #[test]
    fn empty_spec_always_satisfied() {
        let m = BasicModel::explicit(FormulaSet::empty());
        assert!(satisfies_cs(&m, &ConstantSpecification::Empty, 3));
    }

    #[test]
    fn total_spec_fails_on_empty_model() {
        let m = BasicModel::explicit(FormulaSet::empty());
        assert!(!satisfies_cs(&m, &ConstantSpecification::Total, 1));
        let m = m.with_constant_spec(ConstantSpecification::Total);
        assert!(satisfies_cs(&m, &ConstantSpecification::Total, 2));
    }

    #[test]
    fn custom_realization() {
        let cs = ConstantSpecification::custom([p("c1:(P -> (Q -> P))")]).unwrap();
        assert_eq!(
            cs.realize(&BigUint::from(1u32)),
            Some(FormulaSet::singleton(p("P -> (Q -> P)")))
        );
        assert_eq!(cs.realize(&BigUint::from(2u32)), None);
        let m = BasicModel::explicit(FormulaSet::empty()).with_constant_spec(cs.clone());
        assert!(satisfies_cs(&m, &cs, 1));
    }
}
