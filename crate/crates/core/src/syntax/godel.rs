//! A monotone Gödel numbering of formulas.
//!
//! Every formula gets a *weight*: leaves weigh `bitlen(i + 1)` where `i` is
//! the leaf's index (a constant's index, or the shortlex index of an
//! identifier), and every inner node adds 1 to the weights of its children.
//! Each weight class is finite. Formulas are numbered from 1 in order of
//! weight and, within a weight class, by a fixed structural order:
//!
//! * formulas: `_|_`, atoms, `~`, `/\`, `\/`, `->`, `t:F`;
//! * terms: constants, variables, applications;
//! * leaves by index, compound nodes by (weight of the first child, rank of
//!   the first child, rank of the second child).
//!
//! Numbers are computed by ranking against exact class counts, so no
//! enumeration takes place. Variable codes whose name has the constant
//! shape `c<digits>` are skipped slots: they consume a number but decode to
//! nothing. Consequences used elsewhere in the crate:
//!
//! * 0 is never assigned;
//! * a proper subformula has a strictly smaller number (weights grow);
//! * `godel_number(c_k:G) > k` for every `k` and `G`, because the
//!   `2^b - 2 >= k` formulas `c_j:_|_` and `c_j:A` with `bitlen(j + 1) < b`
//!   are lighter than `c_k:G` (where `b = bitlen(k + 1)`), as are `_|_`
//!   and `A` themselves.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::{is_constant_name, Formula, Term};

const FIRST: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
const REST: &[u8] = b"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ_abcdefghijklmnopqrstuvwxyz";

fn char_rank(alphabet: &[u8], c: u8) -> Option<u32> {
    alphabet.iter().position(|&a| a == c).map(|p| p as u32)
}

/// Shortlex index of an identifier: all 52 one-letter names first, then the
/// two-letter names in ASCII order, and so on.
pub(crate) fn identifier_index(name: &str) -> BigUint {
    let bytes = name.as_bytes();
    assert!(!bytes.is_empty(), "empty identifier");
    let first = char_rank(FIRST, bytes[0])
        .unwrap_or_else(|| panic!("invalid identifier {name:?}"));
    let rest_base = BigUint::from(REST.len());
    let mut offset = BigUint::zero();
    let mut block = BigUint::from(FIRST.len());
    for _ in 1..bytes.len() {
        offset += &block;
        block *= &rest_base;
    }
    let mut within = BigUint::from(first);
    for &b in &bytes[1..] {
        let r = char_rank(REST, b).unwrap_or_else(|| panic!("invalid identifier {name:?}"));
        within = within * &rest_base + r;
    }
    offset + within
}

pub(crate) fn identifier_of(index: &BigUint) -> String {
    let rest_base = BigUint::from(REST.len());
    let mut idx = index.clone();
    let mut block = BigUint::from(FIRST.len());
    let mut len = 1usize;
    while idx >= block {
        idx -= &block;
        block *= &rest_base;
        len += 1;
    }
    let mut tail = Vec::with_capacity(len);
    for _ in 1..len {
        let digit = (&idx % &rest_base).to_usize().unwrap();
        tail.push(REST[digit]);
        idx /= &rest_base;
    }
    let mut out = String::with_capacity(len);
    out.push(FIRST[idx.to_usize().unwrap()] as char);
    out.extend(tail.iter().rev().map(|&b| b as char));
    out
}

fn leaf_weight(index: &BigUint) -> u64 {
    (index + 1u32).bits()
}

/// Index of the first leaf of weight `w`.
fn leaf_base(w: u64) -> BigUint {
    (BigUint::one() << (w - 1)) - 1u32
}

pub fn term_weight(t: &Term) -> u64 {
    match t {
        Term::Constant(k) => leaf_weight(k),
        Term::Variable(name) => leaf_weight(&identifier_index(name)),
        Term::Application(l, r) => 1 + term_weight(l) + term_weight(r),
    }
}

pub fn formula_weight(f: &Formula) -> u64 {
    match f {
        Formula::Falsum => 1,
        Formula::Atom(name) => leaf_weight(&identifier_index(name)),
        Formula::Not(g) => 1 + formula_weight(g),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            1 + formula_weight(l) + formula_weight(r)
        }
        Formula::Just(t, g) => 1 + term_weight(t) + formula_weight(g),
    }
}

/// Exact class sizes per weight. Index 0 is the empty class.
#[derive(Default)]
struct Tables {
    formulas: Vec<BigUint>,
    terms: Vec<BigUint>,
    /// `sum_a F(a) F(w-1-a)`
    ff: Vec<BigUint>,
    /// `sum_a T(a) F(w-1-a)`
    tf: Vec<BigUint>,
    /// `sum_a T(a) T(w-1-a)`
    tt: Vec<BigUint>,
}

fn convolve(a: &[BigUint], b: &[BigUint], w: usize) -> BigUint {
    (1..w.saturating_sub(1)).map(|i| &a[i] * &b[w - 1 - i]).sum()
}

impl Tables {
    fn leaves(w: u64) -> BigUint {
        BigUint::one() << (w - 1)
    }

    fn extend_to(&mut self, max: usize) {
        if self.formulas.is_empty() {
            for v in [&mut self.formulas, &mut self.terms, &mut self.ff, &mut self.tf, &mut self.tt]
            {
                v.push(BigUint::zero());
            }
        }
        while self.formulas.len() <= max {
            let w = self.formulas.len();
            let leaves = Self::leaves(w as u64);
            let tt = convolve(&self.terms, &self.terms, w);
            self.terms.push(&leaves + &leaves + &tt);
            self.tt.push(tt);
            let ff = convolve(&self.formulas, &self.formulas, w);
            let tf = convolve(&self.terms, &self.formulas, w);
            let falsum = if w == 1 { BigUint::one() } else { BigUint::zero() };
            let count = falsum + &leaves + &self.formulas[w - 1] + &ff * 3u32 + &tf;
            self.formulas.push(count);
            self.ff.push(ff);
            self.tf.push(tf);
        }
    }

    fn atoms_offset(w: u64) -> BigUint {
        if w == 1 {
            BigUint::one()
        } else {
            BigUint::zero()
        }
    }

    fn not_offset(&self, w: u64) -> BigUint {
        Self::atoms_offset(w) + Self::leaves(w)
    }

    /// Offset of connective block `k` (0 = and, 1 = or, 2 = implies, 3 = just).
    fn binary_offset(&self, w: u64, k: u32) -> BigUint {
        self.not_offset(w) + &self.formulas[w as usize - 1] + &self.ff[w as usize] * k
    }

    /// Number of pairs (x, y) with weight(x) < `split`, weight(x) + weight(y) = w - 1.
    fn pairs_below(&self, left: &[BigUint], right: &[BigUint], w: u64, split: u64) -> BigUint {
        let w = w as usize;
        (1..split as usize).map(|a| &left[a] * &right[w - 1 - a]).sum()
    }

    fn rank_term(&self, t: &Term) -> (u64, BigUint) {
        match t {
            Term::Constant(k) => {
                let w = leaf_weight(k);
                (w, k - leaf_base(w))
            }
            Term::Variable(name) => {
                let idx = identifier_index(name);
                let w = leaf_weight(&idx);
                (w, Self::leaves(w) + idx - leaf_base(w))
            }
            Term::Application(l, r) => {
                let (wl, rl) = self.rank_term(l);
                let (wr, rr) = self.rank_term(r);
                let w = 1 + wl + wr;
                let rank = Self::leaves(w) * 2u32
                    + self.pairs_below(&self.terms, &self.terms, w, wl)
                    + rl * &self.terms[wr as usize]
                    + rr;
                (w, rank)
            }
        }
    }

    fn rank_formula(&self, f: &Formula) -> (u64, BigUint) {
        match f {
            Formula::Falsum => (1, BigUint::zero()),
            Formula::Atom(name) => {
                let idx = identifier_index(name);
                let w = leaf_weight(&idx);
                (w, Self::atoms_offset(w) + idx - leaf_base(w))
            }
            Formula::Not(g) => {
                let (wg, rg) = self.rank_formula(g);
                let w = wg + 1;
                (w, self.not_offset(w) + rg)
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                let k = match f {
                    Formula::And(..) => 0,
                    Formula::Or(..) => 1,
                    _ => 2,
                };
                let (wl, rl) = self.rank_formula(l);
                let (wr, rr) = self.rank_formula(r);
                let w = 1 + wl + wr;
                let rank = self.binary_offset(w, k)
                    + self.pairs_below(&self.formulas, &self.formulas, w, wl)
                    + rl * &self.formulas[wr as usize]
                    + rr;
                (w, rank)
            }
            Formula::Just(t, g) => {
                let (wt, rt) = self.rank_term(t);
                let (wg, rg) = self.rank_formula(g);
                let w = 1 + wt + wg;
                let rank = self.binary_offset(w, 3)
                    + self.pairs_below(&self.terms, &self.formulas, w, wt)
                    + rt * &self.formulas[wg as usize]
                    + rg;
                (w, rank)
            }
        }
    }

    /// Splits a rank inside a block of pairs into (left weight, left rank, right rank).
    fn split(
        &self,
        left: &[BigUint],
        right: &[BigUint],
        w: u64,
        mut r: BigUint,
    ) -> Option<(u64, BigUint, BigUint)> {
        let w = w as usize;
        for a in 1..w.saturating_sub(1) {
            let rcount = &right[w - 1 - a];
            let block = &left[a] * rcount;
            if r < block {
                return Some((a as u64, &r / rcount, &r % rcount));
            }
            r -= block;
        }
        None
    }

    fn unrank_term(&self, w: u64, mut r: BigUint) -> Option<Term> {
        let leaves = Self::leaves(w);
        if r < leaves {
            return Some(Term::Constant(leaf_base(w) + r));
        }
        r -= &leaves;
        if r < leaves {
            let name = identifier_of(&(leaf_base(w) + r));
            return (!is_constant_name(&name)).then_some(Term::Variable(name));
        }
        r -= &leaves;
        let (wl, rl, rr) = self.split(&self.terms, &self.terms, w, r)?;
        let l = self.unrank_term(wl, rl)?;
        let rt = self.unrank_term(w - 1 - wl, rr)?;
        Some(Term::Application(Box::new(l), Box::new(rt)))
    }

    fn unrank_formula(&self, w: u64, mut r: BigUint) -> Option<Formula> {
        if w == 1 {
            if r.is_zero() {
                return Some(Formula::Falsum);
            }
            r -= 1u32;
        }
        let leaves = Self::leaves(w);
        if r < leaves {
            return Some(Formula::Atom(identifier_of(&(leaf_base(w) + r))));
        }
        r -= &leaves;
        let below = &self.formulas[w as usize - 1];
        if r < *below {
            return Some(self.unrank_formula(w - 1, r)?.not());
        }
        r -= below;
        let ff = &self.ff[w as usize];
        for k in 0..3 {
            if r < *ff {
                let (wl, rl, rr) = self.split(&self.formulas, &self.formulas, w, r)?;
                let l = self.unrank_formula(wl, rl)?;
                let rf = self.unrank_formula(w - 1 - wl, rr)?;
                return Some(match k {
                    0 => l.and(rf),
                    1 => l.or(rf),
                    _ => l.implies(rf),
                });
            }
            r -= ff;
        }
        let (wt, rt, rg) = self.split(&self.terms, &self.formulas, w, r)?;
        let t = self.unrank_term(wt, rt)?;
        let g = self.unrank_formula(w - 1 - wt, rg)?;
        Some(Formula::just(t, g))
    }
}

fn tables() -> &'static RwLock<Tables> {
    static TABLES: OnceLock<RwLock<Tables>> = OnceLock::new();
    TABLES.get_or_init(|| RwLock::new(Tables::default()))
}

fn with_tables<R>(max_weight: u64, f: impl FnOnce(&Tables) -> R) -> R {
    let max = max_weight as usize;
    {
        let guard = tables().read().unwrap();
        if guard.formulas.len() > max {
            return f(&guard);
        }
    }
    let mut guard = tables().write().unwrap();
    guard.extend_to(max);
    f(&guard)
}

/// The Gödel number of `f`; always at least 1.
///
/// Panics if an atom or variable name is not a valid identifier.
pub fn godel_number(f: &Formula) -> BigUint {
    let w = formula_weight(f);
    with_tables(w, |t| {
        let (w, rank) = t.rank_formula(f);
        let lighter: BigUint = t.formulas[1..w as usize].iter().sum();
        lighter + rank + 1u32
    })
}

/// Inverse of [`godel_number`]; `None` for 0 and for skipped slots.
pub fn godel_formula(n: &BigUint) -> Option<Formula> {
    if n.is_zero() {
        return None;
    }
    let mut rest = n - 1u32;
    let mut w = 1u64;
    loop {
        let count = with_tables(w, |t| t.formulas[w as usize].clone());
        if rest < count {
            break;
        }
        rest -= count;
        w += 1;
    }
    with_tables(w, |t| t.unrank_formula(w, rest))
}
