//! Canonical text form.
//!
//! Declarations keep their order; members within a section are sorted;
//! empty sections are dropped. Serializing a parsed model and parsing the
//! result yields an equal model.

use std::fmt::Write;

use super::source::{Decl, SourceModel};
use crate::model::{BehaviorId, Ident, RelationKind};

const INDENT: &str = "  ";

fn join<'a>(items: impl IntoIterator<Item = &'a Ident>) -> String {
    items
        .into_iter()
        .map(Ident::as_str)
        .collect::<Vec<_>>()
        .join(", ")
}

fn join_pairs<'a>(pairs: impl IntoIterator<Item = &'a (Ident, Ident)>) -> String {
    pairs
        .into_iter()
        .map(|(a, b)| format!("{a} -> {b}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn bspec(b: &BehaviorId) -> String {
    let level = b.level.or(b.taxon.map(|t| t.level()));
    match (level, b.taxon) {
        (Some(l), Some(t)) => format!("{}[level={l}, type={}]", b.name, t.as_str()),
        (Some(l), None) => format!("{}[level={l}]", b.name),
        _ => b.name.to_string(),
    }
}

fn section(out: &mut String, key: &str, body: String) {
    if !body.is_empty() {
        let _ = writeln!(out, "{INDENT}{key}: {body}");
    }
}

fn block(out: &mut String, head: &str, body: &str) {
    if body.is_empty() {
        let _ = writeln!(out, "{head} {{}}");
    } else {
        let _ = write!(out, "{head} {{\n{body}}}\n");
    }
}

fn decl(d: &Decl) -> String {
    let mut out = String::new();
    match d {
        Decl::System(s) => {
            let mut body = String::new();
            section(&mut body, "components", join(s.components()));
            let bs: Vec<String> = s.behaviors().iter().map(bspec).collect();
            section(&mut body, "behaviors", bs.join(", "));
            for (kind, key) in [
                (RelationKind::Component, "relations"),
                (RelationKind::Behavioral, "behavioral"),
                (RelationKind::Functional, "functional"),
                (RelationKind::Input, "inputs"),
                (RelationKind::Output, "outputs"),
            ] {
                section(&mut body, key, join_pairs(s.relations(kind).iter()));
            }
            section(&mut body, "env", join(s.environment()));
            block(&mut out, &format!("system {}", s.name()), &body);
        }
        Decl::Concept(c) => {
            let mut body = String::new();
            section(&mut body, "attrs", join(&c.attributes));
            section(&mut body, "objects", join(&c.objects));
            section(&mut body, "internal", join_pairs(&c.internal));
            section(&mut body, "inputs", join(&c.inputs));
            section(&mut body, "outputs", join(&c.outputs));
            block(&mut out, &format!("concept {}", c.name), &body);
        }
        Decl::Knowledge(k) => {
            let _ = writeln!(out, "knowledge {}: {} x {}", k.name, k.item.from, k.item.to);
        }
        Decl::Event(e) => {
            let _ = writeln!(out, "event {} type {}", e.name, e.event_type.keyword());
        }
        Decl::Bind(b) => {
            let _ = write!(
                out,
                "bind {} -> {} level {} taxon {}",
                b.event,
                b.behavior,
                b.level(),
                b.taxon.as_str()
            );
            if let Some(pm) = &b.process_model {
                let _ = write!(out, " pm {pm}");
            }
            out.push('\n');
        }
        Decl::Layer(l) => {
            let _ = writeln!(out, "layer {}: {}", l.name, join(&l.members));
        }
    }
    out
}

fn is_block(d: &Decl) -> bool {
    matches!(d, Decl::System(_) | Decl::Concept(_))
}

/// Renders a model in canonical form. An empty model renders as `""`.
pub fn serialize(model: &SourceModel) -> String {
    let mut out = String::new();
    let mut prev: Option<&Decl> = None;
    for d in model.decls() {
        if prev.is_some_and(|p| is_block(p) || is_block(d)) {
            out.push('\n');
        }
        out.push_str(&decl(d));
        prev = Some(d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse;
    use super::*;

    #[test]
    fn canonical_form_is_a_fixed_point() {
        let src = "event tick type timer\nsystem B {\n  components: z, a\n  behaviors: g[level=2, type=Time-driven], f\n  relations: z -> a\n}\nbind tick -> g level 2 taxon Time-driven pm clock\nlayer L: B\n";
        let m = parse(src).unwrap().model;
        let text = serialize(&m);
        assert_eq!(
            text,
            "event tick type timer\n\nsystem B {\n  components: a, z\n  behaviors: f, g[level=2, type=Time-driven]\n  relations: z -> a\n}\n\nbind tick -> g level 2 taxon Time-driven pm clock\nlayer L: B\n"
        );
        let again = parse(&text).unwrap().model;
        assert_eq!(again, m);
        assert_eq!(serialize(&again), text);
    }

    #[test]
    fn empty_model() {
        assert_eq!(serialize(&SourceModel::default()), "");
    }
}
