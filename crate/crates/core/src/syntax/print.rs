use std::fmt::{self, Write};

use super::{Formula, Term};

const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

pub(super) fn write_term(out: &mut impl Write, t: &Term) -> fmt::Result {
    match t {
        Term::Constant(n) => write!(out, "c{n}"),
        Term::Variable(name) => out.write_str(name),
        Term::Application(l, r) => {
            out.write_char('[')?;
            write_application_body(out, l, r)?;
            out.write_char(']')
        }
    }
}

// `[a.b.c]` groups to the left, so a left operand that is itself an
// application is printed without its brackets.
fn write_application_body(out: &mut impl Write, l: &Term, r: &Term) -> fmt::Result {
    match l {
        Term::Application(ll, lr) => write_application_body(out, ll, lr)?,
        _ => write_term(out, l)?,
    }
    out.write_char('.')?;
    write_term(out, r)
}

pub(super) fn write_formula(out: &mut impl Write, f: &Formula) -> fmt::Result {
    write_at(out, f, IMPLIES)
}

fn write_at(out: &mut impl Write, f: &Formula, context: u8) -> fmt::Result {
    let (prec, op, left_ctx, right_ctx) = match f {
        Formula::Falsum => return out.write_str("_|_"),
        Formula::Atom(name) => return out.write_str(name),
        Formula::Not(g) => {
            out.write_char('~')?;
            return write_at(out, g, UNARY);
        }
        Formula::Just(t, g) => {
            write_term(out, t)?;
            out.write_char(':')?;
            return write_at(out, g, UNARY);
        }
        Formula::Implies(..) => (IMPLIES, " -> ", OR, IMPLIES),
        Formula::Or(..) => (OR, " \\/ ", OR, AND),
        Formula::And(..) => (AND, " /\\ ", AND, UNARY),
    };
    let (Formula::Implies(l, r) | Formula::Or(l, r) | Formula::And(l, r)) = f else {
        unreachable!()
    };
    let parens = prec < context;
    if parens {
        out.write_char('(')?;
    }
    write_at(out, l, left_ctx)?;
    out.write_str(op)?;
    write_at(out, r, right_ctx)?;
    if parens {
        out.write_char(')')?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use crate::syntax::{Formula, Term};

    #[test]
    fn justification_assertion() {
        let f = Formula::just(Term::var("t"), Formula::atom("P"));
        assert_eq!(f.to_string(), "t:P");
    }

    #[test]
    fn conjunction_is_not_collapsed() {
        let p = Formula::atom("P");
        assert_eq!(p.clone().and(p).to_string(), "P /\\ P");
    }

    #[test]
    fn application_inside_assertion() {
        let st = Term::var("s").app(&Term::var("t"));
        assert_eq!(Formula::just(st, Formula::atom("Q")).to_string(), "[s.t]:Q");
    }

    #[test]
    fn application_grouping() {
        let (a, b, c) = (Term::var("a"), Term::var("b"), Term::var("c"));
        assert_eq!(a.app(&b).app(&c).to_string(), "[a.b.c]");
        assert_eq!(a.app(&b.app(&c)).to_string(), "[a.[b.c]]");
    }

    #[test]
    fn precedence_and_associativity() {
        let (p, q, r) = (Formula::atom("P"), Formula::atom("Q"), Formula::atom("R"));
        let right = p.clone().implies(q.clone().implies(r.clone()));
        assert_eq!(right.to_string(), "P -> Q -> R");
        let left = p.clone().implies(q.clone()).implies(r.clone());
        assert_eq!(left.to_string(), "(P -> Q) -> R");
        let mixed = p.clone().and(q.clone()).or(r.clone().not());
        assert_eq!(mixed.to_string(), "P /\\ Q \\/ ~R");
        let boxed = Formula::just(Term::var("x"), p.clone().and(q.clone()));
        assert_eq!(boxed.to_string(), "x:(P /\\ Q)");
        let nested = Formula::just(Term::var("s"), Formula::just(Term::var("t"), p.not()));
        assert_eq!(nested.to_string(), "s:t:~P");
    }
}
