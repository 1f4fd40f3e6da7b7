//! Command implementations. Each returns an [`Outcome`] carrying both the
//! human-readable text and a self-contained JSON object.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use jem_core::consequence::countermodel;
use jem_core::jem::{believed_within, known_within, modal_projection_within, validate_jem_within, JEM};
use jem_core::model::{
    check_closure, cs_violation, derive_jminus, find_countermodel_jminus, is_injective, BasicModel,
    JMinusDerivation,
};
use jem_core::multiworld::{
    box_eval, check_fully_explanatory, check_justification_indifference, extract_kripke, ModalFormula,
    MultiJEM,
};
use jem_core::russell::theorem3_report;
use jem_core::sample::{self, FormulaShape};
use jem_core::syntax::{Formula, Term};
use jem_core::{Error, Limits};
use serde_json::{json, Value};
use thiserror::Error;

use crate::document::{render, DocumentError, ModelDocument};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Limit(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Limit(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::AtomLimit { .. } | Error::SearchLimit { .. } => CliError::Limit(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug)]
pub struct Outcome {
    /// Exit code 0 when true, 1 otherwise.
    pub pass: bool,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

fn pick_world<'a>(m: &'a MultiJEM, world: Option<&str>) -> CliResult<&'a JEM> {
    let Some(name) = world else {
        let names: Vec<&str> = m.worlds().map(|(w, _)| w.as_str()).collect();
        return Err(CliError::Input(format!(
            "multi-world document: choose a world with --world ({})",
            names.join(", ")
        )));
    };
    m.world(name).ok_or_else(|| CliError::Input(format!("no world named {name}")))
}

fn model_of<'a>(doc: &'a ModelDocument, world: Option<&str>) -> CliResult<&'a BasicModel> {
    match doc {
        ModelDocument::Basic(m) => Ok(m),
        ModelDocument::Jem(j) => Ok(&j.model),
        ModelDocument::Multi(m) => Ok(&pick_world(m, world)?.model),
    }
}

fn jem_of<'a>(doc: &'a ModelDocument, world: Option<&str>) -> CliResult<&'a JEM> {
    match doc {
        ModelDocument::Basic(_) => Err(CliError::Input(
            "the document declares no `accepted`/`evidence` sets".into(),
        )),
        ModelDocument::Jem(j) => Ok(j),
        ModelDocument::Multi(m) => pick_world(m, world),
    }
}

pub fn eval(doc: &ModelDocument, world: Option<&str>, f: &Formula) -> CliResult<Outcome> {
    let value = model_of(doc, world)?.eval_formula(f);
    Ok(Outcome {
        pass: value,
        text: format!("{value}\n"),
        json: json!({ "command": "eval", "formula": f, "value": value }),
    })
}

fn mark(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

/// Closure, constant specification, injectivity and JEM sections for one
/// model. Returns `(pass, text, json)`.
fn check_one(
    m: &BasicModel,
    j: Option<&JEM>,
    extra: &BTreeSet<Term>,
    depth: usize,
    limits: &Limits,
) -> CliResult<(bool, String, Value)> {
    let mut signature: BTreeSet<Term> = m.assigned_terms().map(|(t, _)| t.clone()).collect();
    signature.extend(extra.iter().cloned());
    if let Some(j) = j {
        signature.extend(j.accepted.generator_terms());
        signature.extend(j.evidence.generator_terms());
    }
    let mut text = String::new();
    let mut pass = true;

    let closure = check_closure(m, &signature);
    pass &= closure.pass;
    if closure.structural {
        let _ = writeln!(text, "closure: pass (structural: sharp model)");
    } else {
        let _ = writeln!(text, "closure: {} ({} applications)", mark(closure.pass), closure.applications_checked);
    }
    for v in &closure.violations {
        let _ = writeln!(
            text,
            "  [{}.{}]: {} follows from {} and {} but is missing",
            v.left, v.right, v.witness, v.left, v.right
        );
    }

    let cs_json = match &m.constant_spec {
        None => {
            let _ = writeln!(text, "constant specification: none");
            Value::Null
        }
        Some(cs) => {
            let violation = cs_violation(m, cs, depth);
            pass &= violation.is_none();
            let _ = writeln!(text, "constant specification ({}): {}", cs.name(), mark(violation.is_none()));
            if let Some(f) = &violation {
                let _ = writeln!(text, "  false: {f}");
            }
            json!({ "name": cs.name(), "pass": violation.is_none(), "depth": depth, "violation": violation })
        }
    };

    let injective = is_injective(m, &signature);
    let _ = writeln!(text, "injective on {} listed terms: {}", signature.len(), if injective { "yes" } else { "no" });

    let jem_json = match j {
        None => Value::Null,
        Some(j) => {
            let r = validate_jem_within(j, depth, limits)?;
            pass &= r.pass;
            let _ = writeln!(text, "jem: {} ({} terms to depth {})", mark(r.pass), r.terms_checked, r.depth);
            for e in &r.generator_errors {
                let _ = writeln!(text, "  {e}");
            }
            for x in &r.factivity_failures {
                let _ = writeln!(text, "  not factive: {} justifies false {}", x.term, x.formula);
            }
            for x in &r.consistency_failures {
                let _ = writeln!(text, "  inconsistent: {} justifies {}", x.term, x.formula);
            }
            serde_json::to_value(&r).expect("serializable")
        }
    };

    let json = json!({
        "pass": pass,
        "closure": closure,
        "constant_spec": cs_json,
        "injective": injective,
        "jem": jem_json,
    });
    Ok((pass, text, json))
}

pub fn check(doc: &ModelDocument, depth: usize, limits: &Limits) -> CliResult<Outcome> {
    let none = BTreeSet::new();
    match doc {
        ModelDocument::Basic(m) => {
            let (pass, text, json) = check_one(m, None, &none, depth, limits)?;
            Ok(Outcome { pass, text, json: json!({ "command": "check", "kind": doc.kind(), "report": json }) })
        }
        ModelDocument::Jem(j) => {
            let (pass, text, json) = check_one(&j.model, Some(j), &none, depth, limits)?;
            Ok(Outcome { pass, text, json: json!({ "command": "check", "kind": doc.kind(), "report": json }) })
        }
        ModelDocument::Multi(mw) => {
            let mut pass = true;
            let mut text = String::new();
            let mut worlds = serde_json::Map::new();
            for (name, j) in mw.worlds() {
                let (p, t, v) = check_one(&j.model, Some(j), mw.signature(), depth, limits)?;
                pass &= p;
                let _ = writeln!(text, "world {name}:");
                for line in t.lines() {
                    let _ = writeln!(text, "  {line}");
                }
                worlds.insert(name.clone(), v);
            }
            let indiff = check_justification_indifference(mw);
            let explanatory = check_fully_explanatory(mw, &jem_core::multiworld::derive_accessibility(mw));
            let _ = writeln!(text, "{indiff}");
            let _ = writeln!(text, "fully explanatory: {}", mark(explanatory.pass));
            for x in &explanatory.failures {
                let _ = writeln!(text, "  at {}: {} holds at every successor but is unjustified", x.world, x.formula);
            }
            Ok(Outcome {
                pass,
                text,
                json: json!({
                    "command": "check",
                    "kind": doc.kind(),
                    "pass": pass,
                    "worlds": worlds,
                    "indifference": indiff,
                    "fully_explanatory": explanatory,
                }),
            })
        }
    }
}

pub fn derive(hyps: &[Formula], goal: &Formula, depth: usize, limits: &Limits) -> CliResult<Outcome> {
    Ok(match derive_jminus(hyps, goal, depth, limits)? {
        JMinusDerivation::Derivable(instances) => {
            let mut text = String::from("derivable\n");
            if !instances.is_empty() {
                text.push_str("instances used:\n");
            }
            for i in &instances {
                let _ = writeln!(text, "  {i}");
            }
            Outcome {
                pass: true,
                text,
                json: json!({ "command": "derive", "goal": goal, "verdict": "derivable", "instances": instances }),
            }
        }
        JMinusDerivation::NotFoundAtDepth(d) => Outcome {
            pass: false,
            text: format!("no derivation found at depth {d}\n"),
            json: json!({ "command": "derive", "goal": goal, "verdict": "not_found", "depth": d }),
        },
    })
}

#[derive(Clone, Debug)]
pub enum RefuteMode {
    /// Search for a model of J⁻ with finite values padded to `padding` members.
    JMinus { padding: usize },
    /// Any basic model of the hypotheses falsifying the goal.
    Classical { hyps: Vec<Formula> },
    /// Random sharp injective models over the goal's vocabulary.
    SharpInjective { samples: usize, seed: u64 },
}

fn refuted(goal: &Formula, how: String, m: BasicModel) -> Outcome {
    let doc = render(&ModelDocument::Basic(m));
    Outcome {
        pass: false,
        text: format!("# refuted: {how}\n{doc}"),
        json: json!({ "command": "refute", "goal": goal, "verdict": "refuted", "how": how, "countermodel": doc }),
    }
}

fn not_refuted(goal: &Formula, why: String) -> Outcome {
    Outcome {
        pass: true,
        text: format!("{why}\n"),
        json: json!({ "command": "refute", "goal": goal, "verdict": "no_countermodel", "detail": why }),
    }
}

/// Sampling vocabulary: the goal's letters and variables, and constants
/// up to the largest one in the goal.
fn shape_of(goal: &Formula) -> FormulaShape {
    let terms = goal.subterms();
    let mut variables = BTreeSet::new();
    let mut constants = 0u32;
    for t in &terms {
        match t {
            Term::Variable(v) => {
                variables.insert(v.clone());
            }
            Term::Constant(n) => {
                if let Ok(k) = u32::try_from(n) {
                    constants = constants.max(k.saturating_add(1).min(64));
                }
            }
            Term::Application(..) => {}
        }
    }
    FormulaShape {
        letters: goal.atoms().into_iter().collect(),
        variables: variables.into_iter().collect(),
        constants,
        ..FormulaShape::default()
    }
}

pub fn refute(goal: &Formula, mode: &RefuteMode, limits: &Limits) -> CliResult<Outcome> {
    Ok(match mode {
        RefuteMode::JMinus { padding } => match find_countermodel_jminus(goal, *padding, limits)? {
            Some(m) => refuted(goal, "model of J- falsifying the goal".into(), m),
            None => not_refuted(goal, format!("no countermodel with values of at most {padding} members")),
        },
        RefuteMode::Classical { hyps } => match countermodel(hyps, goal, limits)? {
            Some(m) => refuted(goal, "basic model of the hypotheses falsifying the goal".into(), m),
            None => not_refuted(goal, "entailed: every basic model of the hypotheses satisfies the goal".into()),
        },
        RefuteMode::SharpInjective { samples, seed } => {
            let shape = shape_of(goal);
            let mut rng = sample::rng(*seed);
            for i in 0..*samples {
                let m = sample::random_sharp_model(&mut rng, &shape, true);
                if !m.eval_formula(goal) {
                    return Ok(refuted(goal, format!("sharp injective sample {i} (seed {seed})"), m));
                }
            }
            not_refuted(goal, format!("no countermodel among {samples} sampled sharp injective models (seed {seed})"))
        }
    })
}

pub fn russell() -> Outcome {
    let report = theorem3_report();
    Outcome {
        pass: report.holds(),
        text: format!("{report}\n"),
        json: json!({ "command": "russell", "holds": report.holds(), "report": report }),
    }
}

pub fn kripke(doc: &ModelDocument) -> CliResult<Outcome> {
    let ModelDocument::Multi(mw) = doc else {
        return Err(CliError::Input(format!(
            "kripke needs a multi-world document, found a {}",
            doc.kind()
        )));
    };
    Ok(match extract_kripke(mw) {
        Err(report) => Outcome {
            pass: false,
            text: format!("refused: the model is not justification indifferent\n{report}\n"),
            json: json!({ "command": "kripke", "refused": true, "indifference": report }),
        },
        Ok(k) => {
            let explanatory = check_fully_explanatory(mw, &k.relation);
            let t_axiom = k.worlds.iter().all(|u| {
                mw.universe().iter().all(|f| {
                    let g = ModalFormula::forget(f);
                    box_eval(&k, u, &g.clone().boxed().implies(g))
                })
            });
            let mut text = format!("{k}\n");
            let _ = writeln!(text, "reflexive: {}", if k.is_reflexive() { "yes" } else { "no" });
            let _ = writeln!(text, "fully explanatory: {}", mark(explanatory.pass));
            let _ = writeln!(text, "[]F -> F at every world for the universe: {}", if t_axiom { "yes" } else { "no" });
            Outcome {
                pass: true,
                text,
                json: json!({
                    "command": "kripke",
                    "refused": false,
                    "kripke": k,
                    "reflexive": k.is_reflexive(),
                    "fully_explanatory": explanatory,
                    "t_axiom": t_axiom,
                }),
            }
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryKind {
    Believed,
    Known,
    Modal,
}

/// `believed` and `known` pass when the answer holds; `modal` always
/// passes once the projection is computed.
pub fn query(
    kind: QueryKind,
    doc: &ModelDocument,
    world: Option<&str>,
    f: &Formula,
    depth: usize,
    limits: &Limits,
) -> CliResult<Outcome> {
    let j = jem_of(doc, world)?;
    let (name, answer) = match kind {
        QueryKind::Believed => ("believed", believed_within(j, f, depth, limits)?),
        QueryKind::Known => ("known", known_within(j, f, depth, limits)?),
        QueryKind::Modal => {
            let p = modal_projection_within(j, f, depth, limits)?;
            return Ok(Outcome {
                pass: true,
                text: p.to_string(),
                json: json!({ "command": "query", "kind": "modal", "depth": depth, "projection": p, "j_and_e_without_k": p.j_and_e_without_k() }),
            });
        }
    };
    Ok(Outcome {
        pass: answer.holds(),
        text: format!("{name} {f}: {answer}\n"),
        json: json!({ "command": "query", "kind": name, "formula": f, "depth": depth, "answer": answer }),
    })
}
