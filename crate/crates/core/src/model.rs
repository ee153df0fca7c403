//! The symbiotic system 8-tuple: components, behaviors, the five relation
//! sets and the environment of external systems.

use std::borrow::Borrow;
use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::him::TypeTag;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("duplicate identifier `{0}`")]
    DuplicateIdentifier(String),
}

/// An identifier matching `[A-Za-z_][A-Za-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Ident(String);

pub fn is_valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ident {
    pub fn new(s: &str) -> Result<Ident, ModelError> {
        if is_valid_ident(s) {
            Ok(Ident(s.to_string()))
        } else {
            Err(ModelError::InvalidIdentifier(s.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for Ident {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Ident {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

pub type ComponentId = Ident;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BehaviorId {
    pub name: Ident,
    pub level: Option<u8>,
    pub taxon: Option<TypeTag>,
}

impl BehaviorId {
    pub fn new(name: Ident) -> Self {
        BehaviorId {
            name,
            level: None,
            taxon: None,
        }
    }

    pub fn with_level(mut self, level: u8) -> Self {
        self.level = Some(level);
        self
    }

    pub fn with_taxon(mut self, taxon: TypeTag) -> Self {
        self.taxon = Some(taxon);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Component,
    Behavioral,
    Functional,
    Input,
    Output,
}

impl RelationKind {
    pub const ALL: [RelationKind; 5] = [
        RelationKind::Component,
        RelationKind::Behavioral,
        RelationKind::Functional,
        RelationKind::Input,
        RelationKind::Output,
    ];

    pub fn short(self) -> &'static str {
        match self {
            RelationKind::Component => "rc",
            RelationKind::Behavioral => "rb",
            RelationKind::Functional => "rf",
            RelationKind::Input => "ri",
            RelationKind::Output => "ro",
        }
    }
}

pub type Pair = (Ident, Ident);

/// A finite set of ordered pairs, tagged with the relation it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationSet {
    pub kind: RelationKind,
    pub pairs: BTreeSet<Pair>,
}

impl RelationSet {
    pub fn new(kind: RelationKind) -> Self {
        RelationSet {
            kind,
            pairs: BTreeSet::new(),
        }
    }

    pub fn insert(&mut self, from: Ident, to: Ident) -> bool {
        self.pairs.insert((from, to))
    }

    pub fn contains(&self, from: &str, to: &str) -> bool {
        self.pairs
            .iter()
            .any(|(a, b)| a.as_str() == from && b.as_str() == to)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Pair> {
        self.pairs.iter()
    }
}

/// `(C, B, R^c, R^b, R^f, R^i, R^o, Θ)`.
///
/// The name is a plain string so that fused systems can carry composite
/// names such as `S1⊞S2`; [`System::new`] requires an identifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct System {
    name: String,
    components: BTreeSet<ComponentId>,
    behaviors: Vec<BehaviorId>,
    relations: [RelationSet; 5],
    environment: BTreeSet<Ident>,
}

fn empty_relations() -> [RelationSet; 5] {
    RelationKind::ALL.map(RelationSet::new)
}

impl System {
    pub fn new(
        name: &str,
        components: impl IntoIterator<Item = Ident>,
        behaviors: impl IntoIterator<Item = BehaviorId>,
    ) -> Result<System, ModelError> {
        let name = Ident::new(name)?;
        let mut cs = BTreeSet::new();
        for c in components {
            if !cs.insert(c.clone()) {
                return Err(ModelError::DuplicateIdentifier(c.to_string()));
            }
        }
        let mut bs: Vec<BehaviorId> = Vec::new();
        for b in behaviors {
            if bs.iter().any(|x| x.name == b.name) {
                return Err(ModelError::DuplicateIdentifier(b.name.to_string()));
            }
            bs.push(b);
        }
        bs.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(System {
            name: name.to_string(),
            components: cs,
            behaviors: bs,
            relations: empty_relations(),
            environment: BTreeSet::new(),
        })
    }

    pub(crate) fn from_parts(
        name: String,
        components: BTreeSet<ComponentId>,
        behaviors: Vec<BehaviorId>,
        relations: [RelationSet; 5],
        environment: BTreeSet<Ident>,
    ) -> System {
        System {
            name,
            components,
            behaviors,
            relations,
            environment,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn components(&self) -> &BTreeSet<ComponentId> {
        &self.components
    }

    /// Sorted by name.
    pub fn behaviors(&self) -> &[BehaviorId] {
        &self.behaviors
    }

    pub fn behavior(&self, name: &str) -> Option<&BehaviorId> {
        self.behaviors.iter().find(|b| b.name.as_str() == name)
    }

    pub fn has_component(&self, name: &str) -> bool {
        self.components.contains(name)
    }

    pub fn has_behavior(&self, name: &str) -> bool {
        self.behavior(name).is_some()
    }

    pub fn relations(&self, kind: RelationKind) -> &RelationSet {
        &self.relations[kind as usize]
    }

    pub fn environment(&self) -> &BTreeSet<Ident> {
        &self.environment
    }

    /// Empty C and empty B: only meaningful as someone's environment.
    pub fn is_stub(&self) -> bool {
        self.components.is_empty() && self.behaviors.is_empty()
    }

    /// Endpoints are not checked here; see [`validate`].
    pub fn with_relation(mut self, kind: RelationKind, from: Ident, to: Ident) -> Self {
        self.relations[kind as usize].insert(from, to);
        self
    }

    pub fn with_environment(mut self, name: Ident) -> Self {
        self.environment.insert(name);
        self
    }
}

/// Builds a system from bare names: no levels, no taxa, empty relations.
pub fn new_system(
    name: &str,
    components: &[&str],
    behaviors: &[&str],
) -> Result<System, ModelError> {
    let cs = components
        .iter()
        .map(|c| Ident::new(c))
        .collect::<Result<Vec<_>, _>>()?;
    let bs = behaviors
        .iter()
        .map(|b| Ident::new(b).map(BehaviorId::new))
        .collect::<Result<Vec<_>, _>>()?;
    System::new(name, cs, bs)
}

/// `|C|²`: every ordered pair including self-pairs.
pub fn potential_relation_count(system: &System) -> u64 {
    let n = system.components().len() as u64;
    n * n
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "code")]
pub enum Violation {
    DanglingEndpoint {
        kind: RelationKind,
        from: Ident,
        to: Ident,
        endpoint: Ident,
    },
    LevelOutOfRange {
        behavior: Ident,
        level: u8,
    },
    TaxonLevelMismatch {
        behavior: Ident,
        level: u8,
        taxon: TypeTag,
    },
    UnresolvedEnvironment {
        name: Ident,
    },
}

impl Violation {
    pub fn code(&self) -> &'static str {
        match self {
            Violation::DanglingEndpoint { .. } => "DanglingEndpoint",
            Violation::LevelOutOfRange { .. } => "LevelOutOfRange",
            Violation::TaxonLevelMismatch { .. } => "TaxonLevelMismatch",
            Violation::UnresolvedEnvironment { .. } => "UnresolvedEnvironment",
        }
    }

    pub fn path(&self) -> String {
        match self {
            Violation::DanglingEndpoint { kind, from, to, .. } => {
                format!("{}[{}->{}]", kind.short(), from, to)
            }
            Violation::LevelOutOfRange { behavior, .. } => format!("behaviors.{behavior}.level"),
            Violation::TaxonLevelMismatch { behavior, .. } => format!("behaviors.{behavior}.type"),
            Violation::UnresolvedEnvironment { name } => format!("env.{name}"),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.code(), self.path())
    }
}

/// Checks every endpoint that can be resolved from the system alone. The
/// external side of input and output relations is left to [`validate_in`].
pub fn validate(system: &System) -> Vec<Violation> {
    let mut out = Vec::new();
    for b in system.behaviors() {
        if let Some(level) = b.level {
            if !(1..=5).contains(&level) {
                out.push(Violation::LevelOutOfRange {
                    behavior: b.name.clone(),
                    level,
                });
            } else if let Some(taxon) = b.taxon {
                if taxon.level() != level {
                    out.push(Violation::TaxonLevelMismatch {
                        behavior: b.name.clone(),
                        level,
                        taxon,
                    });
                }
            }
        }
    }
    let comp = |s: &Ident| system.has_component(s.as_str());
    let beh = |s: &Ident| system.has_behavior(s.as_str());
    let any = |_: &Ident| true;
    check_pairs(
        system.relations(RelationKind::Component),
        comp,
        comp,
        &mut out,
    );
    check_pairs(
        system.relations(RelationKind::Behavioral),
        beh,
        beh,
        &mut out,
    );
    check_pairs(
        system.relations(RelationKind::Functional),
        beh,
        comp,
        &mut out,
    );
    check_pairs(system.relations(RelationKind::Input), any, beh, &mut out);
    check_pairs(system.relations(RelationKind::Output), beh, any, &mut out);
    out
}

/// [`validate`] plus resolution of the environment: each name in Θ must be
/// among `env`, and the external endpoints of R^i / R^o must be behaviors of
/// one of those systems.
pub fn validate_in(system: &System, env: &[&System]) -> Vec<Violation> {
    let mut out = validate(system);
    let mut resolved = Vec::new();
    for name in system.environment() {
        match env.iter().find(|s| s.name() == name.as_str()) {
            Some(s) => resolved.push(*s),
            None => out.push(Violation::UnresolvedEnvironment { name: name.clone() }),
        }
    }
    let external = |s: &Ident| resolved.iter().any(|e| e.has_behavior(s.as_str()));
    let any = |_: &Ident| true;
    check_pairs(
        system.relations(RelationKind::Input),
        external,
        any,
        &mut out,
    );
    check_pairs(
        system.relations(RelationKind::Output),
        any,
        external,
        &mut out,
    );
    out
}

fn check_pairs(
    set: &RelationSet,
    from_ok: impl Fn(&Ident) -> bool,
    to_ok: impl Fn(&Ident) -> bool,
    out: &mut Vec<Violation>,
) {
    for (a, b) in set.iter() {
        for (end, ok) in [(a, from_ok(a)), (b, to_ok(b))] {
            if !ok {
                out.push(Violation::DanglingEndpoint {
                    kind: set.kind,
                    from: a.clone(),
                    to: b.clone(),
                    endpoint: end.clone(),
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn id(s: &str) -> Ident {
        Ident::new(s).unwrap()
    }

    #[test]
    fn identifiers() {
        for ok in ["a", "_x", "S1", "abc_DEF_09"] {
            assert!(is_valid_ident(ok), "{ok}");
        }
        for bad in ["", "1a", "a-b", "a b", "⊞", "a.b"] {
            assert!(!is_valid_ident(bad), "{bad}");
        }
    }

    #[test]
    fn construct() {
        let s = new_system("S1", &["a", "b", "c"], &["f", "g"]).unwrap();
        assert_eq!(s.components().len(), 3);
        assert_eq!(s.behaviors().len(), 2);
        assert!(RelationKind::ALL.iter().all(|k| s.relations(*k).is_empty()));
        assert!(s.environment().is_empty());
    }

    #[test]
    fn stub_system() {
        let s = new_system("S", &[], &[]).unwrap();
        assert!(s.is_stub());
        assert!(validate(&s).is_empty());
    }

    #[test]
    fn duplicate_and_invalid() {
        assert_eq!(
            new_system("S", &["a", "a"], &["f"]),
            Err(ModelError::DuplicateIdentifier("a".into()))
        );
        assert_eq!(
            new_system("S", &["a"], &["f", "f"]),
            Err(ModelError::DuplicateIdentifier("f".into()))
        );
        assert_eq!(
            new_system("9S", &[], &[]),
            Err(ModelError::InvalidIdentifier("9S".into()))
        );
        assert_eq!(
            new_system("S", &["a-b"], &[]),
            Err(ModelError::InvalidIdentifier("a-b".into()))
        );
    }

    #[test]
    fn dangling_component_endpoint() {
        let s = new_system("S", &["a", "b"], &[]).unwrap().with_relation(
            RelationKind::Component,
            id("a"),
            id("x"),
        );
        let report = validate(&s);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].code(), "DanglingEndpoint");
        assert_eq!(report[0].path(), "rc[a->x]");
    }

    #[test]
    fn level_out_of_range() {
        let s = System::new("S", [], [BehaviorId::new(id("f")).with_level(7)]).unwrap();
        let report = validate(&s);
        assert_eq!(
            report,
            vec![Violation::LevelOutOfRange {
                behavior: id("f"),
                level: 7
            }]
        );
        assert_eq!(report[0].path(), "behaviors.f.level");
    }

    #[test]
    fn taxon_level_mismatch() {
        let b = BehaviorId::new(id("f"))
            .with_level(3)
            .with_taxon(TypeTag::TimeDriven);
        let s = System::new("S", [], [b]).unwrap();
        assert_eq!(validate(&s)[0].code(), "TaxonLevelMismatch");
    }

    #[test]
    fn functional_and_io_relations() {
        let s = new_system("S", &["a"], &["f"])
            .unwrap()
            .with_relation(RelationKind::Functional, id("f"), id("a"))
            .with_relation(RelationKind::Functional, id("a"), id("f"))
            .with_relation(RelationKind::Input, id("g"), id("f"))
            .with_environment(id("E"));
        let local = validate(&s);
        assert_eq!(local.len(), 2, "{local:?}");
        let env = new_system("E", &[], &["g"]).unwrap();
        assert_eq!(validate_in(&s, &[&env]).len(), 2);
        let report = validate_in(&s, &[]);
        assert!(report.iter().any(|v| v.code() == "UnresolvedEnvironment"));
        assert!(report.iter().any(|v| v.path() == "ri[g->f]"));
    }

    #[test]
    fn potential_count_examples() {
        assert_eq!(
            potential_relation_count(&new_system("S", &["a", "b", "c"], &[]).unwrap()),
            9
        );
        assert_eq!(
            potential_relation_count(&new_system("S", &[], &[]).unwrap()),
            0
        );
    }

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("c{i}")).collect()
    }

    proptest! {
        #[test]
        fn potential_count_matches_enumeration(n in 0usize..=10) {
            let ns = names(n);
            let refs: Vec<&str> = ns.iter().map(String::as_str).collect();
            let s = new_system("S", &refs, &[]).unwrap();
            let mut square = BTreeSet::new();
            for a in s.components() {
                for b in s.components() {
                    square.insert((a.clone(), b.clone()));
                }
            }
            prop_assert_eq!(potential_relation_count(&s), square.len() as u64);
        }

        #[test]
        fn fresh_systems_validate_clean(nc in 0usize..8, nb in 0usize..8) {
            let cs = names(nc);
            let bs: Vec<String> = (0..nb).map(|i| format!("b{i}")).collect();
            let c: Vec<&str> = cs.iter().map(String::as_str).collect();
            let b: Vec<&str> = bs.iter().map(String::as_str).collect();
            prop_assert!(validate(&new_system("S", &c, &b).unwrap()).is_empty());
        }
    }
}
