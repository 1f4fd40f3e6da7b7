//! Line-oriented model documents.
//!
//! ```text
//! # comments run to the end of the line
//! mode sharp
//! atom B = true
//! atom default = false
//! term w = { B }
//! term default = EMPTY
//! const godel-injective
//! accepted = closure(w)
//! evidence = closure(r)
//! ```
//!
//! A document with `world NAME { ... }` blocks describes several worlds;
//! top-level model lines are then shared defaults that each world may
//! override, and `signature = { t; ... }` and `universe = { F; ... }` are
//! required.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use jem_core::jem::{TermSet, JEM};
use jem_core::model::{BasicModel, ConstantSpecification, FormulaSet, TermValuation};
use jem_core::multiworld::MultiJEM;
use jem_core::syntax::{is_identifier, is_variable_name, parse_formula, parse_term, Formula, Term};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct DocumentError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, DocumentError> {
    Err(DocumentError { line, message: message.into() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelDocument {
    Basic(BasicModel),
    Jem(JEM),
    Multi(MultiJEM),
}

impl ModelDocument {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelDocument::Basic(_) => "basic model",
            ModelDocument::Jem(_) => "JEM",
            ModelDocument::Multi(_) => "multi-world JEM",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Sharp,
    Explicit,
}

/// Settings of one scope, each remembering the line that set it.
#[derive(Clone, Debug, Default)]
struct Section {
    mode: Option<(usize, Mode)>,
    atoms: BTreeMap<String, (usize, bool)>,
    atom_default: Option<(usize, bool)>,
    terms: BTreeMap<Term, (usize, FormulaSet)>,
    term_default: Option<(usize, FormulaSet)>,
    constant_spec: Option<(usize, ConstantSpecification)>,
    accepted: Option<(usize, TermSet)>,
    evidence: Option<(usize, TermSet)>,
    consistency: Option<(usize, bool)>,
}

fn set_once<T>(slot: &mut Option<(usize, T)>, line: usize, key: &str, value: T) -> Result<(), DocumentError> {
    if let Some((first, _)) = slot {
        return err(line, format!("duplicate `{key}` (first set on line {first})"));
    }
    *slot = Some((line, value));
    Ok(())
}

impl Section {
    /// `self` overrides `base`.
    fn over(&self, base: &Section) -> Section {
        let mut atoms = base.atoms.clone();
        atoms.extend(self.atoms.clone());
        let mut terms = base.terms.clone();
        terms.extend(self.terms.clone());
        Section {
            mode: self.mode.or(base.mode),
            atoms,
            atom_default: self.atom_default.or(base.atom_default),
            terms,
            term_default: self.term_default.clone().or_else(|| base.term_default.clone()),
            constant_spec: self.constant_spec.clone().or_else(|| base.constant_spec.clone()),
            accepted: self.accepted.clone().or_else(|| base.accepted.clone()),
            evidence: self.evidence.clone().or_else(|| base.evidence.clone()),
            consistency: self.consistency.or(base.consistency),
        }
    }

    fn model(&self) -> Result<BasicModel, DocumentError> {
        let default = self.term_default.clone().map(|(_, v)| v).unwrap_or_else(FormulaSet::empty);
        let mut m = match self.mode.map(|(_, m)| m) {
            Some(Mode::Sharp) => BasicModel::sharp(default),
            _ => BasicModel::explicit(default),
        };
        m.atom_default = self.atom_default.is_some_and(|(_, v)| v);
        for (name, (_, v)) in &self.atoms {
            m.atoms.insert(name.clone(), *v);
        }
        for (t, (line, v)) in &self.terms {
            if let Err(e) = m.set_term(t.clone(), v.clone()) {
                return err(*line, e.to_string());
            }
        }
        m.constant_spec = self.constant_spec.clone().map(|(_, cs)| cs);
        Ok(m)
    }

    /// `None` when neither generator set is given.
    fn jem(&self, required: bool) -> Result<Option<JEM>, DocumentError> {
        let (accepted, evidence) = match (&self.accepted, &self.evidence) {
            (Some((_, a)), Some((_, e))) => (a.clone(), e.clone()),
            (None, None) if !required => return Ok(None),
            (None, None) => (TermSet::ground(), TermSet::ground()),
            (Some((line, _)), None) => return err(*line, "`accepted` given without `evidence`"),
            (None, Some((line, _))) => return err(*line, "`evidence` given without `accepted`"),
        };
        let consistency = self.consistency.is_some_and(|(_, v)| v);
        Ok(Some(JEM::new(self.model()?, accepted, evidence).with_consistency(consistency)))
    }
}

fn parse_bool(line: usize, text: &str) -> Result<bool, DocumentError> {
    match text {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => err(line, format!("expected `true` or `false`, found `{text}`")),
    }
}

/// Splits the inside of `{ a; b; c }`.
fn braced(line: usize, text: &str) -> Result<Vec<&str>, DocumentError> {
    let Some(inner) = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')) else {
        return err(line, format!("expected `{{ ... }}`, found `{text}`"));
    };
    Ok(inner.split(';').map(str::trim).filter(|s| !s.is_empty()).collect())
}

fn parse_formulas(line: usize, text: &str) -> Result<Vec<Formula>, DocumentError> {
    braced(line, text)?
        .into_iter()
        .map(|s| parse_formula(s).or_else(|e| err(line, format!("in `{s}`: {e}"))))
        .collect()
}

pub fn parse_formula_set(line: usize, text: &str) -> Result<FormulaSet, DocumentError> {
    match text {
        "ALL" => Ok(FormulaSet::All),
        "EMPTY" => Ok(FormulaSet::empty()),
        _ => Ok(FormulaSet::finite(parse_formulas(line, text)?)),
    }
}

fn parse_term_at(line: usize, text: &str) -> Result<Term, DocumentError> {
    parse_term(text).or_else(|e| err(line, format!("in `{text}`: {e}")))
}

fn parse_term_set(line: usize, text: &str) -> Result<TermSet, DocumentError> {
    let Some(inner) = text.strip_prefix("closure(").and_then(|t| t.strip_suffix(')')) else {
        return err(line, format!("expected `closure(v, ...)`, found `{text}`"));
    };
    let gens: Vec<&str> = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if let Some(bad) = gens.iter().find(|g| !is_variable_name(g)) {
        return err(line, format!("`{bad}` is not a variable name"));
    }
    Ok(TermSet::proper_closure(gens))
}

fn parse_constant_spec(line: usize, text: &str, base: Option<&Path>) -> Result<ConstantSpecification, DocumentError> {
    let (kind, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    let formulas = match (kind, rest) {
        ("empty", "") => return Ok(ConstantSpecification::Empty),
        ("total", "") => return Ok(ConstantSpecification::Total),
        ("godel-injective", "") => return Ok(ConstantSpecification::GodelInjective),
        ("custom", r) if r.starts_with('{') => parse_formulas(line, r)?,
        ("custom", r) if r.len() >= 2 && r.starts_with('"') && r.ends_with('"') => {
            let name = &r[1..r.len() - 1];
            let path = base.map_or_else(|| Path::new(name).to_path_buf(), |b| b.join(name));
            let body = std::fs::read_to_string(&path)
                .or_else(|e| err(line, format!("cannot read {}: {e}", path.display())))?;
            formula_lines(&body).or_else(|e| err(line, format!("in {}: {e}", path.display())))?
        }
        _ => {
            return err(
                line,
                format!("expected `empty`, `total`, `godel-injective` or `custom {{...}}`/`custom \"file\"`, found `{text}`"),
            )
        }
    };
    ConstantSpecification::custom(formulas).or_else(|e| err(line, e.to_string()))
}

/// One formula per line; blank lines and `#` comments are skipped.
pub fn formula_lines(text: &str) -> Result<Vec<Formula>, DocumentError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        if !body.is_empty() {
            out.push(parse_formula(body).or_else(|e| err(i + 1, e.to_string()))?);
        }
    }
    Ok(out)
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(a, _)| a).trim()
}

struct World {
    line: usize,
    name: String,
    section: Section,
}

#[derive(Default)]
struct Parsed {
    top: Section,
    signature: Option<(usize, Vec<Term>)>,
    universe: Option<(usize, Vec<Formula>)>,
    worlds: Vec<World>,
}

fn model_line(s: &mut Section, line: usize, key: &str, rest: &str, base: Option<&Path>) -> Result<(), DocumentError> {
    let value = |rest: &str| -> Result<String, DocumentError> {
        match rest.trim().strip_prefix('=') {
            Some(v) => Ok(v.trim().to_string()),
            None => err(line, format!("expected `{key} = ...`")),
        }
    };
    match key {
        "mode" => {
            let mode = match rest.trim() {
                "sharp" => Mode::Sharp,
                "explicit" => Mode::Explicit,
                other => return err(line, format!("expected `sharp` or `explicit`, found `{other}`")),
            };
            set_once(&mut s.mode, line, "mode", mode)
        }
        "atom" | "term" => {
            let Some((name, v)) = rest.split_once('=') else {
                return err(line, format!("expected `{key} NAME = ...`"));
            };
            let name = name.trim();
            let v = v.trim();
            if key == "atom" {
                let b = parse_bool(line, v)?;
                if name == "default" {
                    return set_once(&mut s.atom_default, line, "atom default", b);
                }
                if !is_identifier(name) {
                    return err(line, format!("`{name}` is not an identifier"));
                }
                if let Some((first, _)) = s.atoms.insert(name.to_string(), (line, b)) {
                    return err(line, format!("duplicate atom {name} (first set on line {first})"));
                }
                Ok(())
            } else {
                let set = parse_formula_set(line, v)?;
                if name == "default" {
                    return set_once(&mut s.term_default, line, "term default", set);
                }
                let t = parse_term_at(line, name)?;
                if let Some((first, _)) = s.terms.insert(t.clone(), (line, set)) {
                    return err(line, format!("duplicate term {t} (first set on line {first})"));
                }
                Ok(())
            }
        }
        "const" => {
            let cs = parse_constant_spec(line, rest.trim(), base)?;
            set_once(&mut s.constant_spec, line, "const", cs)
        }
        "accepted" => {
            let set = parse_term_set(line, &value(rest)?)?;
            set_once(&mut s.accepted, line, "accepted", set)
        }
        "evidence" => {
            let set = parse_term_set(line, &value(rest)?)?;
            set_once(&mut s.evidence, line, "evidence", set)
        }
        "consistency" => {
            let required = match value(rest)?.as_str() {
                "required" => true,
                "optional" => false,
                other => return err(line, format!("expected `required` or `optional`, found `{other}`")),
            };
            set_once(&mut s.consistency, line, "consistency", required)
        }
        _ => err(line, format!("unknown key `{key}`")),
    }
}

fn rhs<'a>(line: usize, key: &str, rest: &'a str) -> Result<&'a str, DocumentError> {
    match rest.trim().strip_prefix('=') {
        Some(v) => Ok(v.trim()),
        None => err(line, format!("expected `{key} = ...`")),
    }
}

/// Parses a document; `base` resolves relative `const custom "file"` paths.
pub fn parse_document(text: &str, base: Option<&Path>) -> Result<ModelDocument, DocumentError> {
    let mut p = Parsed::default();
    let mut open: Option<World> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        if body == "}" {
            match open.take() {
                Some(w) => p.worlds.push(w),
                None => return err(line, "unmatched `}`"),
            }
            continue;
        }
        let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        match (key, &mut open) {
            ("world", Some(_)) => return err(line, "worlds cannot be nested"),
            ("world", None) => {
                let Some(name) = rest.trim().strip_suffix('{').map(str::trim) else {
                    return err(line, "expected `world NAME {`");
                };
                if !is_identifier(name) {
                    return err(line, format!("`{name}` is not a world name"));
                }
                if let Some(w) = p.worlds.iter().find(|w| w.name == name) {
                    return err(line, format!("duplicate world {name} (first declared on line {})", w.line));
                }
                open = Some(World { line, name: name.to_string(), section: Section::default() });
            }
            ("signature" | "universe", Some(_)) => {
                return err(line, format!("`{key}` belongs at the top level"));
            }
            ("signature", None) => {
                let terms = braced(line, rhs(line, key, rest)?)?
                    .into_iter()
                    .map(|t| parse_term_at(line, t))
                    .collect::<Result<Vec<_>, _>>()?;
                set_once(&mut p.signature, line, "signature", terms)?;
            }
            ("universe", None) => {
                let fs = parse_formulas(line, rhs(line, key, rest)?)?;
                set_once(&mut p.universe, line, "universe", fs)?;
            }
            (_, Some(w)) => model_line(&mut w.section, line, key, rest, base)?,
            (_, None) => model_line(&mut p.top, line, key, rest, base)?,
        }
    }
    if let Some(w) = open {
        return err(w.line, format!("world {} is never closed", w.name));
    }
    build(p)
}

fn build(p: Parsed) -> Result<ModelDocument, DocumentError> {
    if p.worlds.is_empty() {
        for (slot, key) in [(p.signature.as_ref().map(|x| x.0), "signature"), (p.universe.as_ref().map(|x| x.0), "universe")] {
            if let Some(line) = slot {
                return err(line, format!("`{key}` requires `world` blocks"));
            }
        }
        return Ok(match p.top.jem(false)? {
            Some(j) => ModelDocument::Jem(j),
            None => ModelDocument::Basic(p.top.model()?),
        });
    }
    let last = p.worlds.last().map_or(1, |w| w.line);
    let Some((sig_line, signature)) = p.signature else {
        return err(last, "a multi-world document needs `signature = { ... }`");
    };
    let Some((_, universe)) = p.universe else {
        return err(last, "a multi-world document needs `universe = { ... }`");
    };
    let mut worlds = Vec::new();
    for w in &p.worlds {
        let section = w.section.over(&p.top);
        let j = section.jem(true)?.expect("required");
        worlds.push((w.name.clone(), j));
    }
    MultiJEM::new(worlds, signature, universe)
        .map(ModelDocument::Multi)
        .or_else(|e| err(sig_line, e.to_string()))
}

pub fn load_document(path: &Path) -> Result<ModelDocument, DocumentError> {
    let text = std::fs::read_to_string(path)
        .or_else(|e| err(0, format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text, path.parent())
}

fn render_model_lines(out: &mut String, m: &BasicModel, indent: &str) {
    let (mode, default) = match &m.terms {
        TermValuation::Sharp { default, .. } => ("sharp", default),
        TermValuation::Explicit { default, .. } => ("explicit", default),
    };
    let _ = writeln!(out, "{indent}mode {mode}");
    let _ = writeln!(out, "{indent}atom default = {}", m.atom_default);
    for (a, v) in &m.atoms {
        let _ = writeln!(out, "{indent}atom {a} = {v}");
    }
    let _ = writeln!(out, "{indent}term default = {default}");
    for (t, v) in m.assigned_terms() {
        let _ = writeln!(out, "{indent}term {t} = {v}");
    }
    match &m.constant_spec {
        None => {}
        Some(ConstantSpecification::Custom(set)) => {
            let fs: Vec<String> = set.iter().map(Formula::to_string).collect();
            let _ = writeln!(out, "{indent}const custom {{ {} }}", fs.join("; "));
        }
        Some(cs) => {
            let _ = writeln!(out, "{indent}const {}", cs.name());
        }
    }
}

fn render_jem_lines(out: &mut String, j: &JEM, indent: &str) {
    render_model_lines(out, &j.model, indent);
    let _ = writeln!(out, "{indent}accepted = {}", j.accepted);
    let _ = writeln!(out, "{indent}evidence = {}", j.evidence);
    let c = if j.require_consistency { "required" } else { "optional" };
    let _ = writeln!(out, "{indent}consistency = {c}");
}

/// Renders a document that parses back to the same model.
pub fn render(doc: &ModelDocument) -> String {
    let mut out = String::new();
    match doc {
        ModelDocument::Basic(m) => render_model_lines(&mut out, m, ""),
        ModelDocument::Jem(j) => render_jem_lines(&mut out, j, ""),
        ModelDocument::Multi(mw) => {
            let ts: Vec<String> = mw.signature().iter().map(Term::to_string).collect();
            let fs: Vec<String> = mw.universe().iter().map(Formula::to_string).collect();
            let _ = writeln!(out, "signature = {{ {} }}", ts.join("; "));
            let _ = writeln!(out, "universe = {{ {} }}", fs.join("; "));
            for (name, j) in mw.worlds() {
                let _ = writeln!(out, "world {name} {{");
                render_jem_lines(&mut out, j, "  ");
                let _ = writeln!(out, "}}");
            }
        }
    }
    out
}
