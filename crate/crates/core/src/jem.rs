//! Justification epistemic models: a basic model with a set of accepted
//! justifications and a set of knowledge-producing ones.
//!
//! Term sets are infinite, so queries search terms up to an application
//! depth. In sharp models terms are grouped by value (the value of `s.t`
//! depends only on the values of `s` and `t`), which makes the bounded
//! search exact over the chosen leaves. The constant family is infinite
//! too; searches use a sampled pool of constants, see [`constant_pool`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Limits, Result};
use crate::model::{mp_apply, BasicModel, ConstantSpecification, FormulaSet};
use crate::russell::{refute_known_by_flip, FlipCertificate};
use crate::syntax::{godel_number, is_variable_name, Formula, Term};

/// The least properly closed set containing some variables: every term
/// whose variables are all generators. Always contains every constant.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct TermSet {
    generators: BTreeSet<String>,
}

impl TermSet {
    pub fn proper_closure<S: AsRef<str>>(generators: impl IntoIterator<Item = S>) -> TermSet {
        TermSet { generators: generators.into_iter().map(|g| g.as_ref().to_string()).collect() }
    }

    /// Ground terms only.
    pub fn ground() -> TermSet {
        TermSet::default()
    }

    pub fn generators(&self) -> &BTreeSet<String> {
        &self.generators
    }

    pub fn generator_terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.generators.iter().map(|g| Term::var(g))
    }

    pub fn contains(&self, t: &Term) -> bool {
        t.variables().iter().all(|v| self.generators.contains(*v))
    }

    /// Membership is decided leaf by leaf, so intersecting generators is exact.
    pub fn intersect(&self, other: &TermSet) -> TermSet {
        TermSet { generators: self.generators.intersection(&other.generators).cloned().collect() }
    }
}

impl fmt::Display for TermSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<&str> = self.generators.iter().map(String::as_str).collect();
        write!(f, "closure({})", gens.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JEM {
    pub model: BasicModel,
    /// Accepted justifications.
    pub accepted: TermSet,
    /// Knowledge-producing justifications; required to be factive.
    pub evidence: TermSet,
    /// Whether accepted terms must not justify `_|_`.
    pub require_consistency: bool,
}

impl JEM {
    pub fn new(model: BasicModel, accepted: TermSet, evidence: TermSet) -> JEM {
        JEM { model, accepted, evidence, require_consistency: false }
    }

    pub fn with_consistency(mut self, required: bool) -> JEM {
        self.require_consistency = required;
        self
    }

    pub fn known_set(&self) -> TermSet {
        self.accepted.intersect(&self.evidence)
    }
}

/// Constants used when a search needs concrete constants: `c0`, constants
/// with an explicit value, constants occurring in `goal`, constants of a
/// custom specification, and `c_n` for `n` the number of the goal and of
/// each of its axiom subformulas.
pub fn constant_pool(m: &BasicModel, goal: Option<&Formula>) -> BTreeSet<Term> {
    let mut pool = BTreeSet::from([Term::constant(0u32)]);
    pool.extend(m.assigned_terms().map(|(t, _)| t).filter(|t| matches!(t, Term::Constant(_))).cloned());
    if let Some(ConstantSpecification::Custom(set)) = &m.constant_spec {
        for f in set {
            if let Formula::Just(c @ Term::Constant(_), _) = f {
                pool.insert(c.clone());
            }
        }
    }
    if let Some(goal) = goal {
        pool.extend(goal.subterms().into_iter().filter(|t| matches!(t, Term::Constant(_))));
        pool.insert(Term::Constant(godel_number(goal)));
        for g in goal.subformulas() {
            if crate::model::is_axiom(&g) {
                pool.insert(Term::Constant(godel_number(&g)));
            }
        }
    }
    pool
}

/// Sharp models only: every term over `leaves` up to application depth
/// `depth`, grouped by its tuple of values in `models`. Each class carries
/// its least witness by depth then discovery order. At most `limit` pairs
/// are combined.
pub fn value_classes(
    models: &[&BasicModel],
    leaves: &[Term],
    depth: usize,
    limit: usize,
) -> Result<Vec<(Term, Vec<FormulaSet>)>> {
    if models.iter().any(|m| !m.is_sharp()) {
        return Err(Error::InvalidModel("value classes need sharp models".into()));
    }
    let mut leaves = leaves.to_vec();
    leaves.sort();
    leaves.dedup();
    let mut index: BTreeMap<Vec<FormulaSet>, usize> = BTreeMap::new();
    let mut classes: Vec<(Term, Vec<FormulaSet>)> = Vec::new();
    for leaf in leaves {
        let key: Vec<FormulaSet> = models.iter().map(|m| m.eval_term(&leaf)).collect();
        if !index.contains_key(&key) {
            index.insert(key.clone(), classes.len());
            classes.push((leaf, key));
        }
    }
    let mut pairs = 0usize;
    let mut settled = 0;
    for _ in 0..depth {
        let n = classes.len();
        for i in 0..n {
            for j in 0..n {
                if i < settled && j < settled {
                    continue;
                }
                pairs += 1;
                if pairs > limit {
                    return Err(Error::SearchLimit { limit });
                }
                let key: Vec<FormulaSet> =
                    classes[i].1.iter().zip(&classes[j].1).map(|(a, b)| mp_apply(a, b)).collect();
                if !index.contains_key(&key) {
                    index.insert(key.clone(), classes.len());
                    classes.push((classes[i].0.app(&classes[j].0), key));
                }
            }
        }
        if classes.len() == n {
            break;
        }
        settled = n;
    }
    Ok(classes)
}

/// Explicit models only: the least member of `set` (by depth, then term
/// order) up to `depth` that has no stored value, if any.
fn first_unlisted(m: &BasicModel, set: &TermSet, leaves: &[Term], depth: usize, limit: usize) -> Result<Option<Term>> {
    let listed: BTreeSet<&Term> = m.assigned_terms().map(|(t, _)| t).collect();
    let mut level: Vec<Term> = leaves.iter().filter(|t| set.contains(t)).cloned().collect();
    level.sort();
    let mut all = level.clone();
    let mut seen = 0usize;
    for d in 0..=depth {
        let mut fresh: Vec<&Term> = level.iter().filter(|t| !listed.contains(t)).collect();
        fresh.sort();
        if let Some(t) = fresh.first() {
            return Ok(Some((*t).clone()));
        }
        if d == depth {
            break;
        }
        let mut next = BTreeSet::new();
        for a in &all {
            for b in &all {
                seen += 1;
                if seen > limit {
                    return Err(Error::SearchLimit { limit });
                }
                let t = a.app(b);
                if t.depth() == d + 1 {
                    next.insert(t);
                }
            }
        }
        level = next.into_iter().collect();
        all.extend(level.iter().cloned());
    }
    Ok(None)
}

/// Members of `set` up to `depth` paired with their values, one per
/// distinct value, ordered by (depth, term). Constants come from
/// [`constant_pool`].
pub fn candidate_terms(
    m: &BasicModel,
    set: &TermSet,
    goal: Option<&Formula>,
    depth: usize,
    limits: &Limits,
) -> Result<Vec<(Term, FormulaSet)>> {
    let mut leaves: Vec<Term> = constant_pool(m, goal).into_iter().collect();
    leaves.extend(set.generator_terms());
    if m.is_sharp() {
        let classes = value_classes(&[m], &leaves, depth, limits.search)?;
        return Ok(classes.into_iter().map(|(t, mut v)| (t, v.remove(0))).collect());
    }
    let mut found: Vec<(Term, FormulaSet)> = m
        .assigned_terms()
        .filter(|(t, _)| set.contains(t) && t.depth() <= depth)
        .map(|(t, v)| (t.clone(), v.clone()))
        .collect();
    found.extend(leaves.iter().map(|t| (t.clone(), m.eval_term(t))));
    if let Some(t) = first_unlisted(m, set, &leaves, depth, limits.search)? {
        let v = m.eval_term(&t);
        found.push((t, v));
    }
    found.sort_by(|(a, _), (b, _)| (a.depth(), a).cmp(&(b.depth(), b)));
    let mut seen = BTreeSet::new();
    found.retain(|(_, v)| seen.insert(v.clone()));
    Ok(found)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum EpistemicAnswer {
    Holds { witness: Term },
    NotFoundWithinBound { depth: usize },
    RefutedExact { certificate: FlipCertificate },
}

impl EpistemicAnswer {
    pub fn holds(&self) -> bool {
        matches!(self, EpistemicAnswer::Holds { .. })
    }

    pub fn witness(&self) -> Option<&Term> {
        match self {
            EpistemicAnswer::Holds { witness } => Some(witness),
            _ => None,
        }
    }
}

impl fmt::Display for EpistemicAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpistemicAnswer::Holds { witness } => write!(f, "holds (witness {witness})"),
            EpistemicAnswer::NotFoundWithinBound { depth } => {
                write!(f, "no witness up to depth {depth}")
            }
            EpistemicAnswer::RefutedExact { certificate } => write!(f, "refuted ({certificate})"),
        }
    }
}

fn search(j: &JEM, set: &TermSet, f: &Formula, depth: usize, limits: &Limits) -> Result<EpistemicAnswer> {
    let found = candidate_terms(&j.model, set, Some(f), depth, limits)?
        .into_iter()
        .find(|(_, v)| v.contains(f));
    Ok(match found {
        Some((witness, _)) => EpistemicAnswer::Holds { witness },
        None => EpistemicAnswer::NotFoundWithinBound { depth },
    })
}

/// `f` is believed if some accepted term justifies it.
pub fn believed(j: &JEM, f: &Formula, depth: usize) -> Result<EpistemicAnswer> {
    believed_within(j, f, depth, &Limits::default())
}

pub fn believed_within(j: &JEM, f: &Formula, depth: usize, limits: &Limits) -> Result<EpistemicAnswer> {
    search(j, &j.accepted, f, depth, limits)
}

/// The same search over the knowledge-producing terms.
pub fn evidenced(j: &JEM, f: &Formula, depth: usize, limits: &Limits) -> Result<EpistemicAnswer> {
    search(j, &j.evidence, f, depth, limits)
}

/// `f` is known if a single term that is both accepted and
/// knowledge-producing justifies it. When the bounded search fails, flip
/// refutations over subsets of `f`'s letters are attempted.
pub fn known(j: &JEM, f: &Formula, depth: usize) -> Result<EpistemicAnswer> {
    known_within(j, f, depth, &Limits::default())
}

pub fn known_within(j: &JEM, f: &Formula, depth: usize, limits: &Limits) -> Result<EpistemicAnswer> {
    let answer = search(j, &j.known_set(), f, depth, limits)?;
    if answer.holds() || !j.model.is_sharp() {
        return Ok(answer);
    }
    let letters: Vec<String> = f.atoms().into_iter().collect();
    if letters.len() > 12 {
        return Ok(answer);
    }
    // Larger flips first: they falsify more.
    let mut subsets: Vec<u32> = (1..1u32 << letters.len()).collect();
    subsets.sort_by_key(|s| (std::cmp::Reverse(s.count_ones()), *s));
    for s in subsets {
        let chosen: Vec<&str> = (0..letters.len())
            .filter(|i| s & (1 << i) != 0)
            .map(|i| letters[i].as_str())
            .collect();
        if let Ok(Some(certificate)) = refute_known_by_flip(j, f, &chosen) {
            return Ok(EpistemicAnswer::RefutedExact { certificate });
        }
    }
    Ok(answer)
}

/// The modal reading of a JEM: J is belief, E is evidence, K is knowledge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModalProjection {
    pub formula: Formula,
    pub justified: EpistemicAnswer,
    pub evidenced: EpistemicAnswer,
    pub known: EpistemicAnswer,
}

impl ModalProjection {
    /// True when J and E both hold but K does not: knowledge is not the
    /// conjunction of belief and evidence.
    pub fn j_and_e_without_k(&self) -> bool {
        self.justified.holds() && self.evidenced.holds() && !self.known.holds()
    }
}

impl fmt::Display for ModalProjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "J {}: {}", self.formula, self.justified)?;
        writeln!(f, "E {}: {}", self.formula, self.evidenced)?;
        writeln!(f, "K {}: {}", self.formula, self.known)?;
        if self.j_and_e_without_k() {
            writeln!(f, "J and E hold without K")?;
        }
        Ok(())
    }
}

pub fn modal_projection(j: &JEM, f: &Formula, depth: usize) -> Result<ModalProjection> {
    modal_projection_within(j, f, depth, &Limits::default())
}

pub fn modal_projection_within(j: &JEM, f: &Formula, depth: usize, limits: &Limits) -> Result<ModalProjection> {
    Ok(ModalProjection {
        formula: f.clone(),
        justified: believed_within(j, f, depth, limits)?,
        evidenced: evidenced(j, f, depth, limits)?,
        known: known_within(j, f, depth, limits)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermFailure {
    pub term: Term,
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JemReport {
    pub pass: bool,
    pub depth: usize,
    pub generator_errors: Vec<String>,
    /// Knowledge-producing terms justifying a false formula.
    pub factivity_failures: Vec<TermFailure>,
    /// Accepted terms justifying `_|_` (only when consistency is required).
    pub consistency_failures: Vec<TermFailure>,
    pub terms_checked: usize,
}

/// Checks generator names, factivity of knowledge-producing terms and,
/// when required, consistency of accepted terms, up to `depth`.
pub fn validate_jem(j: &JEM, depth: usize) -> Result<JemReport> {
    validate_jem_within(j, depth, &Limits::default())
}

pub fn validate_jem_within(j: &JEM, depth: usize, limits: &Limits) -> Result<JemReport> {
    let generator_errors: Vec<String> = j
        .accepted
        .generators()
        .iter()
        .chain(j.evidence.generators())
        .filter(|g| !is_variable_name(g))
        .map(|g| format!("{g} is not a variable name"))
        .collect();
    let mut checked = 0;
    let mut factivity_failures = Vec::new();
    for (term, value) in candidate_terms(&j.model, &j.evidence, None, depth, limits)? {
        checked += 1;
        let witness = match &value {
            FormulaSet::All => Some(Formula::Falsum),
            FormulaSet::Finite(fs) => fs.iter().find(|f| !j.model.eval_formula(f)).cloned(),
        };
        if let Some(formula) = witness {
            factivity_failures.push(TermFailure { term, formula });
        }
    }
    let mut consistency_failures = Vec::new();
    if j.require_consistency {
        for (term, value) in candidate_terms(&j.model, &j.accepted, None, depth, limits)? {
            checked += 1;
            if value.contains(&Formula::Falsum) {
                consistency_failures.push(TermFailure { term, formula: Formula::Falsum });
            }
        }
    }
    Ok(JemReport {
        pass: generator_errors.is_empty() && factivity_failures.is_empty() && consistency_failures.is_empty(),
        depth,
        generator_errors,
        factivity_failures,
        consistency_failures,
        terms_checked: checked,
    })
}
