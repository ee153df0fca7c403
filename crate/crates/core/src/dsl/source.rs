use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

use crate::him::{BehaviorBinding, DispatchError, Dispatcher, EventSpec};
use crate::knowledge::{Concept, KnowledgeBase, KnowledgeError, KnowledgeItem};
use crate::model::{Ident, System};
use crate::topology::{abstract_up, LayeredSystem};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnowledgeDecl {
    pub name: Ident,
    pub item: KnowledgeItem,
}

/// A named composition of systems and earlier layers, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerDecl {
    pub name: Ident,
    pub members: Vec<Ident>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Decl {
    System(System),
    Concept(Concept),
    Knowledge(KnowledgeDecl),
    Event(EventSpec),
    Bind(BehaviorBinding),
    Layer(LayerDecl),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LineSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub path: Option<PathBuf>,
    /// One span per declaration, same order as the declarations.
    pub spans: Vec<LineSpan>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinkError {
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
    #[error("unknown layer or system `{0}`")]
    UnknownNode(String),
    #[error(transparent)]
    Knowledge(#[from] KnowledgeError),
    #[error(transparent)]
    Dispatch(#[from] DispatchError),
}

/// A linked model: every cross-reference has been resolved.
///
/// Equality ignores provenance.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SourceModel {
    pub(crate) decls: Vec<Decl>,
    pub(crate) provenance: Provenance,
}

impl PartialEq for SourceModel {
    fn eq(&self, other: &Self) -> bool {
        self.decls == other.decls
    }
}

impl Eq for SourceModel {}

impl SourceModel {
    pub fn decls(&self) -> &[Decl] {
        &self.decls
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_path(mut self, path: impl Into<PathBuf>) -> Self {
        self.provenance.path = Some(path.into());
        self
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn systems(&self) -> impl Iterator<Item = &System> {
        self.decls.iter().filter_map(|d| match d {
            Decl::System(s) => Some(s),
            _ => None,
        })
    }

    pub fn system(&self, name: &str) -> Option<&System> {
        self.systems().find(|s| s.name() == name)
    }

    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Concept(c) => Some(c),
            _ => None,
        })
    }

    pub fn knowledge(&self) -> impl Iterator<Item = &KnowledgeDecl> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Knowledge(k) => Some(k),
            _ => None,
        })
    }

    pub fn events(&self) -> impl Iterator<Item = &EventSpec> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Event(e) => Some(e),
            _ => None,
        })
    }

    pub fn bindings(&self) -> impl Iterator<Item = &BehaviorBinding> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Bind(b) => Some(b),
            _ => None,
        })
    }

    pub fn layers(&self) -> impl Iterator<Item = &LayerDecl> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Layer(l) => Some(l),
            _ => None,
        })
    }

    /// Systems named in `name`'s environment that are declared in the model.
    pub fn environment_of(&self, system: &System) -> Vec<&System> {
        system
            .environment()
            .iter()
            .filter_map(|e| self.system(e.as_str()))
            .collect()
    }

    pub fn knowledge_base(&self) -> Result<KnowledgeBase, LinkError> {
        let mut kb = KnowledgeBase::new();
        for c in self.concepts() {
            kb.insert_concept(c.clone())?;
        }
        for k in self.knowledge() {
            kb.insert_item(k.item.clone())?;
        }
        Ok(kb)
    }

    pub fn dispatcher(&self) -> Result<Dispatcher, LinkError> {
        let mut d = Dispatcher::new();
        for e in self.events() {
            d.register_event(e.clone())?;
        }
        for b in self.bindings() {
            d.register(b.clone())?;
        }
        Ok(d)
    }

    /// The layered structure rooted at a layer or system name.
    pub fn layered(&self, name: &str) -> Result<LayeredSystem, LinkError> {
        if let Some(layer) = self.layers().find(|l| l.name.as_str() == name) {
            let parts = layer
                .members
                .iter()
                .map(|m| self.layered(m.as_str()))
                .collect::<Result<Vec<_>, _>>()?;
            return abstract_up(name, parts).map_err(|_| LinkError::UnknownNode(name.to_string()));
        }
        self.system(name)
            .map(|s| LayeredSystem::leaf(s.clone()))
            .ok_or_else(|| LinkError::UnknownNode(name.to_string()))
    }

    /// Layers that no other layer contains, followed by systems that no
    /// layer contains, in declaration order.
    pub fn topology_roots(&self) -> Result<Vec<LayeredSystem>, LinkError> {
        let contained = |name: &str| {
            self.layers()
                .any(|l| l.members.iter().any(|m| m.as_str() == name))
        };
        let mut roots = Vec::new();
        for d in &self.decls {
            let name = match d {
                Decl::Layer(l) => l.name.as_str(),
                Decl::System(s) => s.name(),
                _ => continue,
            };
            if !contained(name) {
                roots.push(self.layered(name)?);
            }
        }
        Ok(roots)
    }
}
