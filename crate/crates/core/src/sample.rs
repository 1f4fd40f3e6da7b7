//! Seeded random syntax and models for bounded checks and property tests.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{BasicModel, FormulaSet};
use crate::syntax::{Formula, Term};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Vocabulary and size bounds for random syntax.
#[derive(Clone, Debug)]
pub struct FormulaShape {
    pub letters: Vec<String>,
    pub variables: Vec<String>,
    /// Constants are drawn from `c0 .. c{constants-1}`.
    pub constants: u32,
    /// Maximum connective nesting.
    pub depth: usize,
    /// Maximum application depth of terms inside assertions.
    pub term_depth: usize,
    /// Whether `t:F` may appear.
    pub justifications: bool,
}

impl Default for FormulaShape {
    fn default() -> Self {
        FormulaShape {
            letters: ["P", "Q", "R"].map(String::from).to_vec(),
            variables: ["x", "y"].map(String::from).to_vec(),
            constants: 2,
            depth: 3,
            term_depth: 1,
            justifications: true,
        }
    }
}

impl FormulaShape {
    pub fn propositional(letters: usize, depth: usize) -> Self {
        FormulaShape {
            letters: (0..letters).map(|i| format!("P{i}")).collect(),
            justifications: false,
            depth,
            ..FormulaShape::default()
        }
    }

    /// Variables and constants as terms.
    pub fn leaves(&self) -> Vec<Term> {
        let mut out: Vec<Term> = (0..self.constants).map(Term::constant).collect();
        out.extend(self.variables.iter().map(|v| Term::var(v)));
        out
    }
}

pub fn random_term(rng: &mut impl Rng, shape: &FormulaShape, depth: usize) -> Term {
    let leaves = shape.leaves();
    if depth == 0 || leaves.is_empty() || rng.gen_bool(0.5) {
        return leaves.choose(rng).cloned().unwrap_or_else(|| Term::var("x"));
    }
    random_term(rng, shape, depth - 1).app(&random_term(rng, shape, depth - 1))
}

fn formula_at(rng: &mut impl Rng, shape: &FormulaShape, depth: usize) -> Formula {
    let leaf = |rng: &mut dyn rand::RngCore| {
        if shape.letters.is_empty() || rng.gen_bool(0.05) {
            Formula::Falsum
        } else {
            Formula::atom(shape.letters.choose(rng).unwrap())
        }
    };
    if depth == 0 || rng.gen_bool(0.25) {
        return leaf(rng);
    }
    let choices = if shape.justifications { 6 } else { 5 };
    let sub = |rng: &mut _| formula_at(rng, shape, depth - 1);
    match rng.gen_range(0..choices) {
        0 => sub(rng).not(),
        1 => sub(rng).and(sub(rng)),
        2 => sub(rng).or(sub(rng)),
        3 | 4 => sub(rng).implies(sub(rng)),
        _ => Formula::just(random_term(rng, shape, shape.term_depth), sub(rng)),
    }
}

pub fn random_formula(rng: &mut impl Rng, shape: &FormulaShape) -> Formula {
    formula_at(rng, shape, shape.depth)
}

/// A finite set of at most `max_len` formulas. Members are kept small and
/// implication-heavy so that `|>` has something to combine.
pub fn random_formula_set(rng: &mut impl Rng, shape: &FormulaShape, max_len: usize) -> FormulaSet {
    let small = FormulaShape { depth: shape.depth.min(2), justifications: false, ..shape.clone() };
    let len = rng.gen_range(0..=max_len);
    let mut out = BTreeSet::new();
    for _ in 0..len {
        let f = if rng.gen_bool(0.5) {
            formula_at(rng, &small, 1).implies(formula_at(rng, &small, 1))
        } else {
            formula_at(rng, &small, 1)
        };
        out.insert(f);
    }
    FormulaSet::Finite(out)
}

/// A sharp model over the shape's leaves with random letter values.
/// Injective models give every leaf (and the default) at most one formula;
/// otherwise a leaf is valued ALL with probability 1/8.
pub fn random_sharp_model(rng: &mut impl Rng, shape: &FormulaShape, injective: bool) -> BasicModel {
    let max_len = if injective { 1 } else { 3 };
    let mut m = BasicModel::sharp(random_formula_set(rng, shape, if injective { 1 } else { 2 }));
    for a in &shape.letters {
        m.atoms.insert(a.clone(), rng.gen());
    }
    for leaf in shape.leaves() {
        let value = if !injective && rng.gen_ratio(1, 8) {
            FormulaSet::All
        } else {
            random_formula_set(rng, shape, max_len)
        };
        m.set_term(leaf, value).expect("leaves are atomic");
    }
    m
}

/// An explicit model with a random finite value for every term of
/// `signature` and the empty set elsewhere.
pub fn random_explicit_model<'a>(
    rng: &mut impl Rng,
    shape: &FormulaShape,
    signature: impl IntoIterator<Item = &'a Term>,
    max_len: usize,
) -> BasicModel {
    let mut m = BasicModel::explicit(FormulaSet::empty());
    for a in &shape.letters {
        m.atoms.insert(a.clone(), rng.gen());
    }
    for t in signature {
        let value = random_formula_set(rng, shape, max_len);
        m.set_term(t.clone(), value).expect("explicit model");
    }
    m
}
