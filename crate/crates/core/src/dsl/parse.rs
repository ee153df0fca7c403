//! Line-oriented parser and link pass.
//!
//! Parsing builds a positioned syntax tree; linking resolves every
//! cross-reference against it and only then lowers it to domain types, so
//! each diagnostic can point at the exact offending token.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::diagnostic::{Code, Diagnostic};
use super::lexer::{lex, Tok, Token};
use super::source::{Decl, KnowledgeDecl, LayerDecl, LineSpan, Provenance, SourceModel};
use crate::him::{BehaviorBinding, EventSpec, EventType, TypeTag};
use crate::knowledge::{Concept, KnowledgeItem};
use crate::model::{is_valid_ident, BehaviorId, Ident, RelationKind, System};

const DECL_KEYWORDS: [&str; 6] = ["system", "concept", "knowledge", "event", "bind", "layer"];

#[derive(Debug, Clone)]
struct Sp {
    text: String,
    line: usize,
    col: usize,
}

#[derive(Debug, Clone)]
struct SpPair {
    from: Sp,
    to: Sp,
}

#[derive(Debug, Clone)]
struct BSpec {
    name: Sp,
    level: Option<Sp>,
    taxon: Option<Sp>,
}

#[derive(Debug, Default)]
struct SysBody {
    components: Option<Vec<Sp>>,
    behaviors: Option<Vec<BSpec>>,
    relations: Option<Vec<SpPair>>,
    behavioral: Option<Vec<SpPair>>,
    functional: Option<Vec<SpPair>>,
    inputs: Option<Vec<SpPair>>,
    outputs: Option<Vec<SpPair>>,
    env: Option<Vec<Sp>>,
}

#[derive(Debug, Default)]
struct ConBody {
    attrs: Option<Vec<Sp>>,
    objects: Option<Vec<Sp>>,
    internal: Option<Vec<SpPair>>,
    inputs: Option<Vec<Sp>>,
    outputs: Option<Vec<Sp>>,
}

#[derive(Debug)]
enum Syn {
    System {
        name: Sp,
        body: SysBody,
    },
    Concept {
        name: Sp,
        body: ConBody,
    },
    Knowledge {
        name: Sp,
        from: Sp,
        to: Sp,
    },
    Event {
        name: Sp,
        kind: Sp,
    },
    Bind {
        event: Sp,
        behavior: Sp,
        level: Sp,
        taxon: Sp,
        pm: Option<Sp>,
    },
    Layer {
        name: Sp,
        members: Vec<Sp>,
    },
}

#[derive(Debug)]
struct SynDecl {
    syn: Syn,
    span: LineSpan,
}

/// Parse failure marker; the diagnostic has already been recorded.
struct Bail;

type PResult<T> = Result<T, Bail>;

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    diags: &'a mut Vec<Diagnostic>,
    last_line: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
            if t.tok != Tok::Newline {
                self.last_line = t.line;
            }
        }
        t
    }

    fn at_line_end(&self) -> bool {
        matches!(self.peek().tok, Tok::Newline | Tok::Eof)
    }

    fn skip_newlines(&mut self) {
        while self.peek().tok == Tok::Newline {
            self.bump();
        }
    }

    fn skip_line(&mut self) {
        while !self.at_line_end() {
            self.bump();
        }
        if self.peek().tok == Tok::Newline {
            self.bump();
        }
    }

    /// Skips an unparseable declaration, including its `{ ... }` block when
    /// the brace opens on the first line.
    fn skip_decl(&mut self) {
        let mut opened = false;
        while !self.at_line_end() {
            opened |= self.bump().tok == Tok::LBrace;
        }
        if opened {
            loop {
                match self.peek().tok {
                    Tok::Eof => return,
                    Tok::RBrace => {
                        self.skip_line();
                        return;
                    }
                    _ => {
                        self.bump();
                    }
                }
            }
        }
        self.skip_line();
    }

    fn error(&mut self, code: Code, line: usize, col: usize, msg: impl Into<String>) {
        self.diags.push(Diagnostic::new(code, line, col, msg));
    }

    fn unexpected(&mut self, expected: &str) -> Bail {
        let t = self.peek().clone();
        self.error(
            Code::Syntax,
            t.line,
            t.col,
            format!("expected {expected}, found {}", t.tok.describe()),
        );
        Bail
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<Token> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn expect_word(&mut self, what: &str) -> PResult<Sp> {
        match &self.peek().tok {
            Tok::Word(w) => {
                let sp = Sp {
                    text: w.clone(),
                    line: self.peek().line,
                    col: self.peek().col,
                };
                self.bump();
                Ok(sp)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn expect_ident(&mut self, what: &str) -> PResult<Sp> {
        let sp = self.expect_word(what)?;
        if !is_valid_ident(&sp.text) {
            self.error(
                Code::InvalidIdent,
                sp.line,
                sp.col,
                format!("`{}` is not a valid identifier", sp.text),
            );
        }
        Ok(sp)
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        match &self.peek().tok {
            Tok::Word(w) if w == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    fn end_of_line(&mut self) -> PResult<()> {
        if self.at_line_end() {
            if self.peek().tok == Tok::Newline {
                self.bump();
            }
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        if self.at_line_end() {
            return Ok(out);
        }
        out.push(item(self)?);
        while self.peek().tok == Tok::Comma {
            self.bump();
            out.push(item(self)?);
        }
        Ok(out)
    }

    fn ident_list(&mut self) -> PResult<Vec<Sp>> {
        self.list(|p| p.expect_ident("identifier"))
    }

    fn pair_list(&mut self) -> PResult<Vec<SpPair>> {
        self.list(|p| {
            let from = p.expect_ident("identifier")?;
            p.expect(Tok::Arrow, "`->`")?;
            let to = p.expect_ident("identifier")?;
            Ok(SpPair { from, to })
        })
    }

    fn bspec_list(&mut self) -> PResult<Vec<BSpec>> {
        self.list(|p| {
            let name = p.expect_ident("behavior name")?;
            let (mut level, mut taxon) = (None, None);
            if p.peek().tok == Tok::LBracket {
                p.bump();
                p.expect_keyword("level")?;
                p.expect(Tok::Eq, "`=`")?;
                level = Some(p.expect_word("level digit")?);
                if p.peek().tok == Tok::Comma {
                    p.bump();
                    p.expect_keyword("type")?;
                    p.expect(Tok::Eq, "`=`")?;
                    taxon = Some(p.expect_word("taxon")?);
                }
                p.expect(Tok::RBracket, "`]`")?;
            }
            Ok(BSpec { name, level, taxon })
        })
    }

    fn parse_model(&mut self) -> Vec<SynDecl> {
        let mut decls = Vec::new();
        loop {
            self.skip_newlines();
            let t = self.peek().clone();
            let kw = match &t.tok {
                Tok::Eof => break,
                Tok::Word(w) => w.clone(),
                _ => {
                    self.unexpected("a declaration");
                    self.skip_decl();
                    continue;
                }
            };
            let parsed = match kw.as_str() {
                "system" => self.system(),
                "concept" => self.concept(),
                "knowledge" => self.knowledge(),
                "event" => self.event(),
                "bind" => self.bind(),
                "layer" => self.layer(),
                _ => {
                    self.error(
                        Code::UnknownDecl,
                        t.line,
                        t.col,
                        format!("unknown declaration `{kw}`"),
                    );
                    Err(Bail)
                }
            };
            match parsed {
                Ok(syn) => decls.push(SynDecl {
                    syn,
                    span: LineSpan {
                        start: t.line,
                        end: self.last_line,
                    },
                }),
                Err(Bail) => self.skip_decl(),
            }
        }
        decls
    }

    /// Runs `section` for each `key: ...` line until the closing brace.
    fn block(&mut self, mut section: impl FnMut(&mut Self, &Sp) -> PResult<()>) -> PResult<()> {
        let open = self.expect(Tok::LBrace, "`{`")?;
        if self.peek().tok == Tok::RBrace {
            self.bump();
            return self.end_of_line();
        }
        self.end_of_line()?;
        loop {
            self.skip_newlines();
            let t = self.peek().clone();
            match &t.tok {
                Tok::RBrace => {
                    self.bump();
                    return self.end_of_line();
                }
                Tok::Eof => {
                    self.error(
                        Code::Unterminated,
                        open.line,
                        open.col,
                        "block is never closed with `}`",
                    );
                    return Err(Bail);
                }
                Tok::Word(w) if *self.peek2() == Tok::Colon => {
                    let key = Sp {
                        text: w.clone(),
                        line: t.line,
                        col: t.col,
                    };
                    self.bump();
                    self.bump();
                    if section(self, &key)
                        .and_then(|_| self.end_of_line())
                        .is_err()
                    {
                        self.skip_line();
                    }
                }
                Tok::Word(w) if DECL_KEYWORDS.contains(&w.as_str()) => {
                    self.error(
                        Code::Unterminated,
                        open.line,
                        open.col,
                        "block is never closed with `}`",
                    );
                    return Err(Bail);
                }
                _ => {
                    self.unexpected("`key:` or `}`");
                    self.skip_line();
                }
            }
        }
    }

    fn section_slot<T>(&mut self, slot: &mut Option<T>, key: &Sp, value: T) {
        if slot.is_some() {
            self.error(
                Code::DuplicateSection,
                key.line,
                key.col,
                format!("section `{}` appears twice", key.text),
            );
        } else {
            *slot = Some(value);
        }
    }

    fn unknown_key(&mut self, key: &Sp, allowed: &str) -> PResult<()> {
        self.error(
            Code::UnknownKey,
            key.line,
            key.col,
            format!("unknown key `{}` (expected one of {allowed})", key.text),
        );
        Err(Bail)
    }

    fn system(&mut self) -> PResult<Syn> {
        self.bump();
        let name = self.expect_ident("system name")?;
        let mut body = SysBody::default();
        self.block(|p, key| {
            match key.text.as_str() {
                "components" => {
                    let v = p.ident_list()?;
                    p.section_slot(&mut body.components, key, v)
                }
                "behaviors" => {
                    let v = p.bspec_list()?;
                    p.section_slot(&mut body.behaviors, key, v)
                }
                "relations" => {
                    let v = p.pair_list()?;
                    p.section_slot(&mut body.relations, key, v)
                }
                "behavioral" => {
                    let v = p.pair_list()?;
                    p.section_slot(&mut body.behavioral, key, v)
                }
                "functional" => {
                    let v = p.pair_list()?;
                    p.section_slot(&mut body.functional, key, v)
                }
                "inputs" => {
                    let v = p.pair_list()?;
                    p.section_slot(&mut body.inputs, key, v)
                }
                "outputs" => {
                    let v = p.pair_list()?;
                    p.section_slot(&mut body.outputs, key, v)
                }
                "env" => {
                    let v = p.ident_list()?;
                    p.section_slot(&mut body.env, key, v)
                }
                _ => {
                    return p.unknown_key(
                        key,
                        "components, behaviors, relations, behavioral, functional, inputs, outputs, env",
                    )
                }
            }
            Ok(())
        })?;
        Ok(Syn::System { name, body })
    }

    fn concept(&mut self) -> PResult<Syn> {
        self.bump();
        let name = self.expect_ident("concept name")?;
        let mut body = ConBody::default();
        self.block(|p, key| {
            match key.text.as_str() {
                "attrs" => {
                    let v = p.ident_list()?;
                    p.section_slot(&mut body.attrs, key, v)
                }
                "objects" => {
                    let v = p.ident_list()?;
                    p.section_slot(&mut body.objects, key, v)
                }
                "internal" => {
                    let v = p.pair_list()?;
                    p.section_slot(&mut body.internal, key, v)
                }
                "inputs" => {
                    let v = p.ident_list()?;
                    p.section_slot(&mut body.inputs, key, v)
                }
                "outputs" => {
                    let v = p.ident_list()?;
                    p.section_slot(&mut body.outputs, key, v)
                }
                _ => return p.unknown_key(key, "attrs, objects, internal, inputs, outputs"),
            }
            Ok(())
        })?;
        Ok(Syn::Concept { name, body })
    }

    fn knowledge(&mut self) -> PResult<Syn> {
        self.bump();
        let name = self.expect_ident("knowledge name")?;
        self.expect(Tok::Colon, "`:`")?;
        let from = self.expect_ident("concept name")?;
        self.expect_keyword("x")?;
        let to = self.expect_ident("concept name")?;
        self.end_of_line()?;
        Ok(Syn::Knowledge { name, from, to })
    }

    fn event(&mut self) -> PResult<Syn> {
        self.bump();
        let name = self.expect_ident("event name")?;
        self.expect_keyword("type")?;
        let kind = self.expect_word("event type")?;
        self.end_of_line()?;
        Ok(Syn::Event { name, kind })
    }

    fn bind(&mut self) -> PResult<Syn> {
        self.bump();
        let event = self.expect_ident("event name")?;
        self.expect(Tok::Arrow, "`->`")?;
        let behavior = self.expect_ident("behavior name")?;
        self.expect_keyword("level")?;
        let level = self.expect_word("level digit")?;
        self.expect_keyword("taxon")?;
        let taxon = self.expect_word("taxon")?;
        let pm = if matches!(&self.peek().tok, Tok::Word(w) if w == "pm") {
            self.bump();
            Some(self.expect_ident("process model name")?)
        } else {
            None
        };
        self.end_of_line()?;
        Ok(Syn::Bind {
            event,
            behavior,
            level,
            taxon,
            pm,
        })
    }

    fn layer(&mut self) -> PResult<Syn> {
        let kw = self.bump();
        let name = self.expect_ident("layer name")?;
        self.expect(Tok::Colon, "`:`")?;
        let members = self.ident_list()?;
        if members.is_empty() {
            self.error(
                Code::Syntax,
                kw.line,
                kw.col,
                "a layer needs at least one member",
            );
            return Err(Bail);
        }
        self.end_of_line()?;
        Ok(Syn::Layer { name, members })
    }
}

/// Result of a successful parse: the linked model and any warnings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub model: SourceModel,
    pub warnings: Vec<Diagnostic>,
}

/// Parses and links model text. Any error-severity diagnostic means no
/// model; diagnostics are sorted by position.
pub fn parse(text: &str) -> Result<Parsed, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let toks = lex(text, &mut diags);
    let decls = {
        let mut p = Parser {
            toks: &toks,
            pos: 0,
            diags: &mut diags,
            last_line: 1,
        };
        p.parse_model()
    };
    let mut linker = Linker { diags: &mut diags };
    linker.check(&decls);
    diags.sort_by_key(|d| (d.line, d.column, d.code));
    if diags.iter().any(Diagnostic::is_error) {
        return Err(diags);
    }
    let model = lower(&decls);
    Ok(Parsed {
        model,
        warnings: diags,
    })
}

struct Linker<'a> {
    diags: &'a mut Vec<Diagnostic>,
}

impl Linker<'_> {
    fn at(&mut self, code: Code, sp: &Sp, msg: impl Into<String>) {
        self.diags.push(Diagnostic::new(code, sp.line, sp.col, msg));
    }

    fn unique(&mut self, items: &[Sp], what: &str) -> BTreeSet<String> {
        let mut set = BTreeSet::new();
        for sp in items {
            if !set.insert(sp.text.clone()) {
                self.at(
                    Code::DuplicateMember,
                    sp,
                    format!("{what} `{}` listed twice", sp.text),
                );
            }
        }
        set
    }

    fn unique_pairs(&mut self, pairs: &[SpPair], what: &str) {
        let mut set = BTreeSet::new();
        for p in pairs {
            if !set.insert((p.from.text.as_str(), p.to.text.as_str())) {
                self.at(
                    Code::DuplicateMember,
                    &p.from,
                    format!("{what} `{} -> {}` listed twice", p.from.text, p.to.text),
                );
            }
        }
    }

    fn endpoint(&mut self, sp: &Sp, ok: bool, what: &str) {
        if !ok {
            self.at(
                Code::DanglingEndpoint,
                sp,
                format!("`{}` is not {what}", sp.text),
            );
        }
    }

    /// Level and taxon checks shared by behavior specs and bindings.
    fn level_and_taxon(&mut self, level: &Sp, taxon: Option<&Sp>) {
        let lv = match level.text.parse::<u32>() {
            Ok(v) if (1..=5).contains(&v) => Some(v as u8),
            Ok(v) => {
                self.at(
                    Code::LevelRange,
                    level,
                    format!("level {v} is outside 1..5"),
                );
                None
            }
            Err(_) => {
                self.at(
                    Code::Syntax,
                    level,
                    format!("level must be a digit, found `{}`", level.text),
                );
                None
            }
        };
        if let Some(t) = taxon {
            match t.text.parse::<TypeTag>() {
                Ok(tag) => {
                    if let Some(lv) = lv {
                        if tag.level() != lv {
                            self.at(
                                Code::TaxonLevel,
                                t,
                                format!("taxon `{}` is level {}, not {lv}", t.text, tag.level()),
                            );
                        }
                    }
                }
                Err(_) => self.at(Code::UnknownTaxon, t, format!("unknown taxon `{}`", t.text)),
            }
        }
    }

    fn check(&mut self, decls: &[SynDecl]) {
        // namespaces: systems and layers share one
        let mut seen: HashMap<(&str, &str), ()> = HashMap::new();
        let mut systems: BTreeMap<&str, BTreeSet<String>> = BTreeMap::new();
        let mut concepts = BTreeSet::new();
        let mut events = BTreeSet::new();
        for d in decls {
            let (ns, name) = match &d.syn {
                Syn::System { name, body } => {
                    let bs = body
                        .behaviors
                        .iter()
                        .flatten()
                        .map(|b| b.name.text.clone())
                        .collect();
                    systems.entry(name.text.as_str()).or_insert(bs);
                    ("system", name)
                }
                Syn::Layer { name, .. } => ("system", name),
                Syn::Concept { name, .. } => {
                    concepts.insert(name.text.as_str());
                    ("concept", name)
                }
                Syn::Knowledge { name, .. } => ("knowledge", name),
                Syn::Event { name, .. } => {
                    events.insert(name.text.as_str());
                    ("event", name)
                }
                Syn::Bind { .. } => continue,
            };
            if seen.insert((ns, name.text.as_str()), ()).is_some() {
                self.at(
                    Code::DuplicateDecl,
                    name,
                    format!("`{}` is already declared", name.text),
                );
            }
        }

        let mut env_refs = BTreeSet::new();
        let mut layers_so_far = BTreeSet::new();
        for d in decls {
            match &d.syn {
                Syn::System { name: _, body } => {
                    let comps = self.unique(body.components.as_deref().unwrap_or(&[]), "component");
                    let bnames: Vec<Sp> = body
                        .behaviors
                        .iter()
                        .flatten()
                        .map(|b| b.name.clone())
                        .collect();
                    let behs = self.unique(&bnames, "behavior");
                    for b in body.behaviors.iter().flatten() {
                        if let Some(level) = &b.level {
                            self.level_and_taxon(level, b.taxon.as_ref());
                        }
                    }
                    let env_list = body.env.as_deref().unwrap_or(&[]);
                    self.unique(env_list, "environment system");
                    let mut env_behaviors = BTreeSet::new();
                    for e in env_list {
                        env_refs.insert(e.text.clone());
                        match systems.get(e.text.as_str()) {
                            Some(bs) => env_behaviors.extend(bs.iter().cloned()),
                            None => self.at(
                                Code::Unresolved,
                                e,
                                format!("no system named `{}`", e.text),
                            ),
                        }
                    }
                    let sections = [
                        (&body.relations, "component relation"),
                        (&body.behavioral, "behavioral relation"),
                        (&body.functional, "functional relation"),
                        (&body.inputs, "input relation"),
                        (&body.outputs, "output relation"),
                    ];
                    for (pairs, what) in sections {
                        self.unique_pairs(pairs.as_deref().unwrap_or(&[]), what);
                    }
                    for p in body.relations.iter().flatten() {
                        self.endpoint(
                            &p.from,
                            comps.contains(&p.from.text),
                            "a component of this system",
                        );
                        self.endpoint(
                            &p.to,
                            comps.contains(&p.to.text),
                            "a component of this system",
                        );
                    }
                    for p in body.behavioral.iter().flatten() {
                        self.endpoint(
                            &p.from,
                            behs.contains(&p.from.text),
                            "a behavior of this system",
                        );
                        self.endpoint(
                            &p.to,
                            behs.contains(&p.to.text),
                            "a behavior of this system",
                        );
                    }
                    for p in body.functional.iter().flatten() {
                        self.endpoint(
                            &p.from,
                            behs.contains(&p.from.text),
                            "a behavior of this system",
                        );
                        self.endpoint(
                            &p.to,
                            comps.contains(&p.to.text),
                            "a component of this system",
                        );
                    }
                    for p in body.inputs.iter().flatten() {
                        self.endpoint(
                            &p.from,
                            env_behaviors.contains(&p.from.text),
                            "a behavior of an environment system",
                        );
                        self.endpoint(
                            &p.to,
                            behs.contains(&p.to.text),
                            "a behavior of this system",
                        );
                    }
                    for p in body.outputs.iter().flatten() {
                        self.endpoint(
                            &p.from,
                            behs.contains(&p.from.text),
                            "a behavior of this system",
                        );
                        self.endpoint(
                            &p.to,
                            env_behaviors.contains(&p.to.text),
                            "a behavior of an environment system",
                        );
                    }
                }
                Syn::Concept { body, .. } => {
                    let attrs = self.unique(body.attrs.as_deref().unwrap_or(&[]), "attribute");
                    let objs = self.unique(body.objects.as_deref().unwrap_or(&[]), "object");
                    let internal = body.internal.as_deref().unwrap_or(&[]);
                    self.unique_pairs(internal, "internal relation");
                    for p in internal {
                        self.endpoint(
                            &p.from,
                            objs.contains(&p.from.text),
                            "an object of this concept",
                        );
                        self.endpoint(
                            &p.to,
                            attrs.contains(&p.to.text),
                            "an attribute of this concept",
                        );
                    }
                    for list in [&body.inputs, &body.outputs] {
                        let list = list.as_deref().unwrap_or(&[]);
                        self.unique(list, "concept");
                        for c in list {
                            if !concepts.contains(c.text.as_str()) {
                                self.at(
                                    Code::Unresolved,
                                    c,
                                    format!("no concept named `{}`", c.text),
                                );
                            }
                        }
                    }
                }
                Syn::Knowledge { from, to, .. } => {
                    for c in [from, to] {
                        if !concepts.contains(c.text.as_str()) {
                            self.at(
                                Code::Unresolved,
                                c,
                                format!("no concept named `{}`", c.text),
                            );
                        }
                    }
                }
                Syn::Event { kind, .. } => {
                    if EventType::from_keyword(&kind.text).is_none() {
                        self.at(
                            Code::EventType,
                            kind,
                            format!("unknown event type `{}` (expected stimulus, timer, interrupt or internal)", kind.text),
                        );
                    }
                }
                Syn::Bind {
                    event,
                    behavior,
                    level,
                    taxon,
                    ..
                } => {
                    if !events.contains(event.text.as_str()) {
                        self.at(
                            Code::Unresolved,
                            event,
                            format!("no event named `{}`", event.text),
                        );
                    }
                    self.level_and_taxon(level, Some(taxon));
                    if !systems.values().any(|bs| bs.contains(&behavior.text)) {
                        self.at(
                            Code::UnknownBehavior,
                            behavior,
                            format!("behavior `{}` is not declared by any system", behavior.text),
                        );
                    }
                }
                Syn::Layer { name, members } => {
                    for m in members {
                        let ok = systems.contains_key(m.text.as_str())
                            || layers_so_far.contains(m.text.as_str());
                        if !ok {
                            self.at(
                                Code::Unresolved,
                                m,
                                format!("`{}` is neither a system nor an earlier layer", m.text),
                            );
                        }
                    }
                    layers_so_far.insert(name.text.as_str());
                }
            }
        }

        let in_layer: BTreeSet<&str> = decls
            .iter()
            .filter_map(|d| match &d.syn {
                Syn::Layer { members, .. } => Some(members.iter().map(|m| m.text.as_str())),
                _ => None,
            })
            .flatten()
            .collect();
        for d in decls {
            if let Syn::System { name, body } = &d.syn {
                let empty = body.components.as_deref().unwrap_or(&[]).is_empty()
                    && body.behaviors.as_deref().unwrap_or(&[]).is_empty();
                if empty && !env_refs.contains(&name.text) && !in_layer.contains(name.text.as_str())
                {
                    self.at(
                        Code::EmptySystem,
                        name,
                        format!("system `{}` has no components or behaviors and is not used as an environment", name.text),
                    );
                }
            }
        }
    }
}

fn ident(sp: &Sp) -> Ident {
    Ident::new(&sp.text).expect("identifiers are checked before lowering")
}

fn idents(list: &Option<Vec<Sp>>) -> Vec<Ident> {
    list.iter().flatten().map(ident).collect()
}

fn pairs(list: &Option<Vec<SpPair>>) -> Vec<(Ident, Ident)> {
    list.iter()
        .flatten()
        .map(|p| (ident(&p.from), ident(&p.to)))
        .collect()
}

fn lower(decls: &[SynDecl]) -> SourceModel {
    let mut out = Vec::with_capacity(decls.len());
    let mut spans = Vec::with_capacity(decls.len());
    for d in decls {
        spans.push(d.span);
        out.push(match &d.syn {
            Syn::System { name, body } => {
                let behaviors: Vec<BehaviorId> = body
                    .behaviors
                    .iter()
                    .flatten()
                    .map(|b| BehaviorId {
                        name: ident(&b.name),
                        level: b
                            .level
                            .as_ref()
                            .map(|l| l.text.parse().expect("checked level")),
                        taxon: b
                            .taxon
                            .as_ref()
                            .map(|t| t.text.parse().expect("checked taxon")),
                    })
                    .collect();
                let mut system = System::new(&name.text, idents(&body.components), behaviors)
                    .expect("members are checked before lowering");
                let sections = [
                    (RelationKind::Component, &body.relations),
                    (RelationKind::Behavioral, &body.behavioral),
                    (RelationKind::Functional, &body.functional),
                    (RelationKind::Input, &body.inputs),
                    (RelationKind::Output, &body.outputs),
                ];
                for (kind, list) in sections {
                    for (a, b) in pairs(list) {
                        system = system.with_relation(kind, a, b);
                    }
                }
                for e in idents(&body.env) {
                    system = system.with_environment(e);
                }
                Decl::System(system)
            }
            Syn::Concept { name, body } => Decl::Concept(
                Concept::new(ident(name))
                    .with_attributes(idents(&body.attrs))
                    .with_objects(idents(&body.objects))
                    .with_internal(pairs(&body.internal))
                    .with_inputs(idents(&body.inputs))
                    .with_outputs(idents(&body.outputs)),
            ),
            Syn::Knowledge { name, from, to } => Decl::Knowledge(KnowledgeDecl {
                name: ident(name),
                item: KnowledgeItem::new(ident(from), ident(to)),
            }),
            Syn::Event { name, kind } => Decl::Event(EventSpec::new(
                ident(name),
                EventType::from_keyword(&kind.text).expect("checked event type"),
            )),
            Syn::Bind {
                event,
                behavior,
                taxon,
                pm,
                ..
            } => {
                let mut b = BehaviorBinding::new(
                    ident(event),
                    ident(behavior),
                    taxon.text.parse().expect("checked taxon"),
                );
                if let Some(pm) = pm {
                    b = b.with_process_model(ident(pm));
                }
                Decl::Bind(b)
            }
            Syn::Layer { name, members } => Decl::Layer(LayerDecl {
                name: ident(name),
                members: members.iter().map(ident).collect(),
            }),
        });
    }
    SourceModel {
        decls: out,
        provenance: Provenance { path: None, spans },
    }
}
