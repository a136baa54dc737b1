//! Line-oriented reader for task documents, programs and interpretations.

use std::collections::BTreeSet;

use log::warn;

use super::{TaskBody, TaskDocument};
use crate::error::{Error, Result};
use crate::types::{Atom, AtomSet, PossInterpretation, PossProgram, Rule, Weight, WeightLattice};
use crate::variants::{PartialInterpretation, PartialTask};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// A weight label as written, with its position for error reporting.
#[derive(Clone, Debug)]
struct Label {
    text: String,
    line: usize,
    column: usize,
}

#[derive(Debug)]
struct RawRule {
    weight: Option<Label>,
    rule: Rule,
    line: usize,
}

#[derive(Debug)]
struct RawInterp {
    items: Vec<(Atom, Option<Label>)>,
    line: usize,
    column: usize,
}

/// Cursor over one line; columns are 1-based character positions.
struct Cursor<'t> {
    text: &'t str,
    pos: usize,
    line: usize,
}

impl<'t> Cursor<'t> {
    fn new(text: &'t str, line: usize) -> Self {
        Cursor { text, pos: 0, line }
    }

    fn column(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn error(&self, message: impl Into<String>) -> Error {
        syntax(self.line, self.column(), message)
    }

    fn rest(&self) -> &'t str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    /// A run of letters, digits, `_` and `.`-separated digits; empty when none.
    fn word(&mut self) -> (&'t str, usize) {
        self.skip_ws();
        let column = self.column();
        let rest = self.rest();
        let bytes = rest.as_bytes();
        let mut end = 0;
        while end < bytes.len() {
            let b = bytes[end];
            let decimal_point = b == b'.'
                && end > 0
                && bytes[..end].iter().all(u8::is_ascii_digit)
                && bytes.get(end + 1).is_some_and(u8::is_ascii_digit);
            if b.is_ascii_alphanumeric() || b == b'_' || decimal_point {
                end += 1;
            } else {
                break;
            }
        }
        self.pos += end;
        (&rest[..end], column)
    }

    fn atom(&mut self) -> Result<Atom> {
        let (word, column) = self.word();
        if word.is_empty() {
            return Err(syntax(self.line, column, "expected an atom"));
        }
        Atom::new(word).map_err(|_| {
            syntax(
                self.line,
                column,
                format!("`{word}` is not a valid atom name"),
            )
        })
    }

    fn label(&mut self) -> Result<Label> {
        let (word, column) = self.word();
        if word.is_empty() {
            return Err(syntax(self.line, column, "expected a weight"));
        }
        Ok(Label {
            text: word.to_string(),
            line: self.line,
            column,
        })
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing text"))
        }
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('%').map_or(line, |(code, _)| code)
}

/// `[W ::] head [:- lit, ...].`
fn rule_line(cur: &mut Cursor<'_>) -> Result<RawRule> {
    let line = cur.line;
    let save = cur.pos;
    let first = cur.label()?;
    let weight = if cur.eat("::") {
        Some(first)
    } else {
        cur.pos = save;
        None
    };
    let head = cur.atom()?;
    let mut pos = AtomSet::new();
    let mut neg = AtomSet::new();
    if cur.eat(":-") {
        loop {
            let save = cur.pos;
            let (word, _) = cur.word();
            let negated = word == "not" && {
                let after = cur.pos;
                let (next, _) = cur.word();
                cur.pos = after;
                !next.is_empty()
            };
            if !negated {
                cur.pos = save;
            }
            let atom = cur.atom()?;
            if negated {
                neg.insert(atom);
            } else {
                pos.insert(atom);
            }
            if !cur.eat(",") {
                break;
            }
        }
    }
    cur.expect(".")?;
    cur.finish()?;
    Ok(RawRule {
        weight,
        rule: Rule { head, pos, neg },
        line,
    })
}

/// `{ a@W, b }`
fn interp_line(cur: &mut Cursor<'_>) -> Result<RawInterp> {
    cur.skip_ws();
    let column = cur.column();
    cur.expect("{")?;
    let mut items = Vec::new();
    if !cur.eat("}") {
        loop {
            let atom = cur.atom()?;
            let weight = if cur.eat("@") {
                Some(cur.label()?)
            } else {
                None
            };
            items.push((atom, weight));
            if cur.eat("}") {
                break;
            }
            cur.expect(",")?;
        }
    }
    cur.finish()?;
    Ok(RawInterp {
        items,
        line: cur.line,
        column,
    })
}

fn atom_run(cur: &mut Cursor<'_>, stop: &str) -> Result<AtomSet> {
    let mut out = AtomSet::new();
    while !cur.eat(stop) {
        if cur.at_end() {
            return Err(cur.error(format!("expected `{stop}`")));
        }
        out.insert(cur.atom()?);
    }
    Ok(out)
}

/// `{ inc: a b ; exc: c }`
fn partial_line(cur: &mut Cursor<'_>) -> Result<PartialInterpretation> {
    cur.expect("{")?;
    cur.expect("inc:")?;
    let included = atom_run(cur, ";")?;
    cur.expect("exc:")?;
    let excluded = atom_run(cur, "}")?;
    let column = cur.column();
    cur.finish()?;
    PartialInterpretation::new(included, excluded)
        .map_err(|_| syntax(cur.line, column, "included and excluded atoms overlap"))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    Background,
    Positive,
    Negative,
    PositivePartial,
    NegativePartial,
}

impl Section {
    fn from_header(name: &str) -> Option<Self> {
        Some(match name {
            "background" => Section::Background,
            "positive" => Section::Positive,
            "negative" => Section::Negative,
            "positive-partial" => Section::PositivePartial,
            "negative-partial" => Section::NegativePartial,
            _ => return None,
        })
    }
}

#[derive(Default)]
struct Raw {
    name: Option<String>,
    profile: Option<String>,
    seed: Option<u64>,
    order: Option<Vec<Label>>,
    atoms: AtomSet,
    rules: Vec<RawRule>,
    positives: Vec<RawInterp>,
    negatives: Vec<RawInterp>,
    partial_positives: Vec<PartialInterpretation>,
    partial_negatives: Vec<PartialInterpretation>,
    /// First total and first partial example section, for the mixing check.
    total_at: Option<usize>,
    partial_at: Option<usize>,
}

fn directive(raw: &mut Raw, cur: &mut Cursor<'_>) -> Result<()> {
    let (name, column) = cur.word();
    match name {
        "order" => {
            if raw.order.is_some() {
                return Err(syntax(cur.line, column, "`#order` declared twice"));
            }
            let mut labels = vec![cur.label()?];
            while cur.eat("<") {
                labels.push(cur.label()?);
            }
            cur.finish()?;
            raw.order = Some(labels);
        }
        "atoms" => {
            while !cur.at_end() {
                raw.atoms.insert(cur.atom()?);
            }
        }
        "name" | "profile" => {
            cur.skip_ws();
            let value = cur.rest().trim_end().to_string();
            if value.is_empty() {
                return Err(cur.error(format!("`#{name}` needs a value")));
            }
            cur.pos = cur.text.len();
            if name == "name" {
                raw.name = Some(value);
            } else {
                raw.profile = Some(value);
            }
        }
        "seed" => {
            let (word, column) = cur.word();
            let value = word.parse().map_err(|_| {
                syntax(cur.line, column, "`#seed` needs an unsigned 64-bit integer")
            })?;
            cur.finish()?;
            raw.seed = Some(value);
        }
        "" => return Err(syntax(cur.line, column, "expected a directive name")),
        other => {
            return Err(syntax(
                cur.line,
                column,
                format!("unknown directive `#{other}`"),
            ))
        }
    }
    Ok(())
}

fn read_raw(text: &str) -> Result<Raw> {
    let mut raw = Raw::default();
    let mut section: Option<Section> = None;
    for (i, full_line) in text.lines().enumerate() {
        let line = i + 1;
        let mut cur = Cursor::new(strip_comment(full_line), line);
        if cur.at_end() {
            continue;
        }
        if cur.eat("#") {
            directive(&mut raw, &mut cur)?;
            continue;
        }
        if cur.rest().starts_with('[') {
            let column = cur.column();
            let inner = cur.rest().trim_end();
            let name = inner
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| syntax(line, column, "malformed section header"))?;
            let s = Section::from_header(name.trim()).ok_or_else(|| {
                syntax(line, column, format!("unknown section `[{}]`", name.trim()))
            })?;
            match s {
                Section::Positive | Section::Negative => {
                    raw.total_at.get_or_insert(line);
                }
                Section::PositivePartial | Section::NegativePartial => {
                    raw.partial_at.get_or_insert(line);
                }
                Section::Background => {}
            }
            if raw.total_at.is_some() && raw.partial_at.is_some() {
                return Err(syntax(
                    line,
                    column,
                    "partial and total example sections cannot be mixed",
                ));
            }
            section = Some(s);
            continue;
        }
        match section {
            None => return Err(cur.error("content outside of any section")),
            Some(Section::Background) => raw.rules.push(rule_line(&mut cur)?),
            Some(Section::Positive) => raw.positives.push(interp_line(&mut cur)?),
            Some(Section::Negative) => raw.negatives.push(interp_line(&mut cur)?),
            Some(Section::PositivePartial) => raw.partial_positives.push(partial_line(&mut cur)?),
            Some(Section::NegativePartial) => raw.partial_negatives.push(partial_line(&mut cur)?),
        }
    }
    Ok(raw)
}

/// Turns written labels into weights once the lattice is known.
struct Resolver<'l> {
    lattice: &'l WeightLattice,
}

impl Resolver<'_> {
    fn weight(&self, label: Option<&Label>, line: usize, column: usize) -> Result<Weight> {
        match label {
            Some(l) => self.lattice.weight(&l.text).ok_or_else(|| {
                syntax(
                    l.line,
                    l.column,
                    format!("weight `{}` is outside the declared lattice", l.text),
                )
            }),
            None if self.lattice.len() == 1 => Ok(self.lattice.top()),
            None => Err(syntax(
                line,
                column,
                "a weight is required when the lattice has several values",
            )),
        }
    }

    fn program(&self, rules: &[RawRule]) -> Result<PossProgram> {
        let mut out = PossProgram::new();
        for r in rules {
            let w = self.weight(r.weight.as_ref(), r.line, 1)?;
            if out.insert(r.rule.clone(), w) {
                warn!("line {}: repeated rule `{}` merged", r.line, r.rule);
            }
        }
        Ok(out)
    }

    fn interp(&self, raw: &RawInterp) -> Result<PossInterpretation> {
        let mut out = PossInterpretation::new();
        for (atom, label) in &raw.items {
            let w = self.weight(label.as_ref(), raw.line, raw.column)?;
            if let Some(prev) = out.weight_of(atom).filter(|p| *p != w) {
                let (line, column) = label
                    .as_ref()
                    .map_or((raw.line, raw.column), |l| (l.line, l.column));
                return Err(syntax(
                    line,
                    column,
                    format!(
                        "atom `{atom}` has conflicting weights `{}` and `{}`",
                        self.lattice.label(prev),
                        self.lattice.label(w)
                    ),
                ));
            }
            out.insert(atom.clone(), w)?;
        }
        Ok(out)
    }
}

fn lattice_of(raw: &Raw) -> Result<WeightLattice> {
    if let Some(order) = &raw.order {
        let labels: Vec<&str> = order.iter().map(|l| l.text.as_str()).collect();
        return WeightLattice::new(labels)
            .map_err(|e| syntax(order[0].line, order[0].column, e.to_string()));
    }
    let labels: Vec<&Label> = raw
        .rules
        .iter()
        .filter_map(|r| r.weight.as_ref())
        .chain(
            raw.positives
                .iter()
                .chain(&raw.negatives)
                .flat_map(|e| e.items.iter().filter_map(|(_, w)| w.as_ref())),
        )
        .collect();
    match labels.first() {
        None => Ok(WeightLattice::unit()),
        Some(first) => WeightLattice::infer_decimal(labels.iter().map(|l| l.text.as_str()))
            .map_err(|e| syntax(first.line, first.column, e.to_string())),
    }
}

/// Parses a task document.
pub fn parse_task(text: &str) -> Result<TaskDocument> {
    let raw = read_raw(text)?;
    let lattice = lattice_of(&raw)?;
    let resolver = Resolver { lattice: &lattice };
    let background = resolver.program(&raw.rules)?;
    let partial = raw.partial_at.is_some();
    let body = if partial {
        if lattice.len() != 1 {
            let at = raw
                .order
                .as_ref()
                .map_or((1, 1), |o| (o[0].line, o[0].column));
            return Err(syntax(
                at.0,
                at.1,
                "partial tasks need a one-element lattice",
            ));
        }
        TaskBody::Partial(PartialTask::new(
            raw.atoms.clone(),
            background.projection(),
            raw.partial_positives,
            raw.partial_negatives,
        ))
    } else {
        let positives = raw
            .positives
            .iter()
            .map(|e| resolver.interp(e))
            .collect::<Result<Vec<_>>>()?;
        let negatives = raw
            .negatives
            .iter()
            .map(|e| resolver.interp(e))
            .collect::<Result<Vec<_>>>()?;
        TaskBody::Total {
            background,
            positives: dedup(positives),
            negatives: dedup(negatives),
        }
    };
    let mut doc = TaskDocument {
        name: raw.name,
        profile: raw.profile,
        seed: raw.seed,
        lattice: if partial {
            WeightLattice::unit()
        } else {
            lattice
        },
        atoms: raw.atoms,
        body,
    };
    doc.atoms = doc.alphabet();
    Ok(doc)
}

fn dedup<T: PartialEq>(items: Vec<T>) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(items.len());
    for x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Parses rule lines against a known lattice.
pub fn parse_program(text: &str, lattice: &WeightLattice) -> Result<PossProgram> {
    let mut rules = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut cur = Cursor::new(strip_comment(line), i + 1);
        if !cur.at_end() {
            rules.push(rule_line(&mut cur)?);
        }
    }
    Resolver { lattice }.program(&rules)
}

/// Parses ordinary rules; weights, if written, are ignored.
pub fn parse_rules(text: &str) -> Result<BTreeSet<Rule>> {
    let mut out = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let mut cur = Cursor::new(strip_comment(line), i + 1);
        if !cur.at_end() {
            out.insert(rule_line(&mut cur)?.rule);
        }
    }
    Ok(out)
}

/// Parses a single `{ a@W, ... }` interpretation.
pub fn parse_interpretation(text: &str, lattice: &WeightLattice) -> Result<PossInterpretation> {
    let mut found = None;
    for (i, line) in text.lines().enumerate() {
        let mut cur = Cursor::new(strip_comment(line), i + 1);
        if cur.at_end() {
            continue;
        }
        if found.is_some() {
            return Err(cur.error("expected a single interpretation"));
        }
        found = Some(interp_line(&mut cur)?);
    }
    let raw = found.ok_or_else(|| syntax(1, 1, "expected an interpretation"))?;
    Resolver { lattice }.interp(&raw)
}
