//! Hierarchical intelligence model: the five-level behavior taxonomy, the
//! stimulus/behavior classifier and an event-driven dispatcher that fires one
//! bound behavior per event occurrence and records an auditable trace.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::Ident;

/// The five intelligence levels, ordered from reflexive (1) to cognitive (5).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Reflexive,
    Imperative,
    Adaptive,
    Autonomous,
    Cognitive,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::Reflexive,
        Category::Imperative,
        Category::Adaptive,
        Category::Autonomous,
        Category::Cognitive,
    ];

    pub fn level(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_level(level: u8) -> Option<Category> {
        Self::ALL.get(usize::from(level).checked_sub(1)?).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Reflexive => "Reflexive",
            Category::Imperative => "Imperative",
            Category::Adaptive => "Adaptive",
            Category::Autonomous => "Autonomous",
            Category::Cognitive => "Cognitive",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| UnknownName(s.to_string()))
    }
}

/// The sixteen behavior types. Textual names are the hyphenated type names
/// used throughout the model language (`Event-driven`, `Goal-driven`, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeTag {
    Reflexive,
    EventDriven,
    TimeDriven,
    InterruptDriven,
    AnalogyBased,
    FeedbackModulated,
    EnvironmentAware,
    Perceptive,
    ProblemDriven,
    InferenceDriven,
    DecisionDriven,
    Deductive,
    KnowledgeBased,
    LearningDriven,
    GoalDriven,
    Inductive,
}

impl TypeTag {
    pub fn taxon(self) -> &'static HimTaxon {
        &TAXONOMY[self as usize]
    }

    pub fn level(self) -> u8 {
        self.taxon().level
    }

    pub fn as_str(self) -> &'static str {
        self.taxon().type_name
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown name `{0}`")]
pub struct UnknownName(pub String);

impl FromStr for TypeTag {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TAXONOMY
            .iter()
            .find(|t| t.type_name == s)
            .map(|t| t.tag)
            .ok_or_else(|| UnknownName(s.to_string()))
    }
}

impl Serialize for TypeTag {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for TypeTag {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One row of the behavior taxonomy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HimTaxon {
    pub level: u8,
    pub category: Category,
    #[serde(rename = "type_tag")]
    pub type_name: &'static str,
    #[serde(skip)]
    pub tag: TypeTag,
    /// Symbols are kept as printed, including the reused `id` suffix at
    /// levels 4 and 5 and `sd` for goal-driven.
    pub symbol: &'static str,
    pub description: &'static str,
}

/// Per-level taxon counts, levels 1 through 5.
pub const LEVEL_COUNTS: [usize; 5] = [1, 3, 3, 5, 4];

macro_rules! taxon {
    ($level:expr, $cat:ident, $tag:ident, $name:expr, $sym:expr, $desc:expr) => {
        HimTaxon {
            level: $level,
            category: Category::$cat,
            type_name: $name,
            tag: TypeTag::$tag,
            symbol: $sym,
            description: $desc,
        }
    };
}

/// Indexed by `TypeTag as usize`.
pub static TAXONOMY: [HimTaxon; 16] = [
    taxon!(1, Reflexive, Reflexive, "Reflexive", "Ḃ_ref",
        "A wired behavior directly driven by specifically coupled external stimuli or triggering event"),
    taxon!(2, Imperative, EventDriven, "Event-driven", "Ḃ_imp^e",
        "A predefined imperative behavior driven by an event"),
    taxon!(2, Imperative, TimeDriven, "Time-driven", "Ḃ_imp^t",
        "A predefined imperative behavior driven by a point of time"),
    taxon!(2, Imperative, InterruptDriven, "Interrupt-driven", "Ḃ_imp^int",
        "A predefined imperative behavior driven by a system-triggered interrupt event"),
    taxon!(3, Adaptive, AnalogyBased, "Analogy-based", "Ḃ_adp^ab",
        "An adaptive behavior that operates by seeking an equivalent solution for a given analog request"),
    taxon!(3, Adaptive, FeedbackModulated, "Feedback-modulated", "Ḃ_adp^fm",
        "An adaptive behavior rectified by the feedback of temporal system output"),
    taxon!(3, Adaptive, EnvironmentAware, "Environment-aware", "Ḃ_adp^ea",
        "An adaptive behavior where multiple prototype behaviors are modulated by the change of external environment"),
    taxon!(4, Autonomous, Perceptive, "Perceptive", "Ḃ_aut^pe",
        "An autonomous behavior based on the selection of a perceptive inference"),
    taxon!(4, Autonomous, ProblemDriven, "Problem-driven", "Ḃ_aut^pd",
        "An autonomous behavior that seeks a rational solution for a given problem"),
    taxon!(4, Autonomous, InferenceDriven, "Inference-driven", "Ḃ_aut^id",
        "An autonomous behavior seeking an optimal path towards the given goal"),
    taxon!(4, Autonomous, DecisionDriven, "Decision-driven", "Ḃ_aut^dd",
        "An autonomous behavior embodied by the outcome of a decision process"),
    taxon!(4, Autonomous, Deductive, "Deductive", "Ḃ_aut^de",
        "An autonomous behavior driven by a deductive process based on known principles"),
    taxon!(5, Cognitive, KnowledgeBased, "Knowledge-based", "Ḃ_cog^kb",
        "A cognitive behavior generated by introspection of acquired knowledge"),
    taxon!(5, Cognitive, LearningDriven, "Learning-driven", "Ḃ_cog^ld",
        "A cognitive behavior generated by both internal introspection and external acquisition"),
    taxon!(5, Cognitive, GoalDriven, "Goal-driven", "Ḃ_cog^sd",
        "A cognitive behavior that creates a causal chain from a problem to a rational solution"),
    taxon!(5, Cognitive, Inductive, "Inductive", "Ḃ_cog^id",
        "A cognitive behavior that draws a general rule based on multiple observations or common properties"),
];

pub fn taxonomy() -> &'static [HimTaxon] {
    &TAXONOMY
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Determinism {
    Deterministic,
    Indeterministic,
}

/// Classifies a system by the determinism of its stimuli and of its
/// behaviors. Only the four lower categories are reachable.
pub fn classify(stimulus: Determinism, behavior: Determinism) -> Category {
    use Determinism::*;
    match (stimulus, behavior) {
        (Deterministic, Deterministic) => Category::Reflexive,
        (Deterministic, Indeterministic) => Category::Imperative,
        (Indeterministic, Deterministic) => Category::Adaptive,
        (Indeterministic, Indeterministic) => Category::Autonomous,
    }
}

/// Every taxon at the category's level or below. Higher categories include
/// all behaviors of the lower ones.
pub fn capability_set(category: Category) -> BTreeSet<TypeTag> {
    TAXONOMY
        .iter()
        .filter(|t| t.level <= category.level())
        .map(|t| t.tag)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventType {
    ExternalStimulus,
    Timer,
    Interrupt,
    Internal,
}

impl EventType {
    /// Keyword used in model files.
    pub fn keyword(self) -> &'static str {
        match self {
            EventType::ExternalStimulus => "stimulus",
            EventType::Timer => "timer",
            EventType::Interrupt => "interrupt",
            EventType::Internal => "internal",
        }
    }

    pub fn from_keyword(s: &str) -> Option<EventType> {
        match s {
            "stimulus" => Some(EventType::ExternalStimulus),
            "timer" => Some(EventType::Timer),
            "interrupt" => Some(EventType::Interrupt),
            "internal" => Some(EventType::Internal),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EventSpec {
    pub name: Ident,
    pub event_type: EventType,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload_schema: Option<String>,
}

impl EventSpec {
    pub fn new(name: Ident, event_type: EventType) -> Self {
        EventSpec {
            name,
            event_type,
            payload_schema: None,
        }
    }
}

/// Binds a behavior of a given taxon to an event. The process model is a
/// name carried into traces; it is never executed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BehaviorBinding {
    pub event: Ident,
    pub taxon: TypeTag,
    pub behavior: Ident,
    pub process_model: Option<Ident>,
}

impl BehaviorBinding {
    pub fn new(event: Ident, behavior: Ident, taxon: TypeTag) -> Self {
        BehaviorBinding {
            event,
            taxon,
            behavior,
            process_model: None,
        }
    }

    pub fn with_process_model(mut self, pm: Ident) -> Self {
        self.process_model = Some(pm);
        self
    }

    pub fn level(&self) -> u8 {
        self.taxon.level()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DispatchError {
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("event `{0}` is already registered")]
    DuplicateEvent(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventOccurrence {
    /// Position of the occurrence on the caller's clock.
    pub at: u64,
    pub event: String,
}

impl EventOccurrence {
    pub fn new(at: u64, event: impl Into<String>) -> Self {
        EventOccurrence {
            at,
            event: event.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub seq: u64,
    pub event: String,
    /// `None` when the event has no bindings.
    pub binding: Option<String>,
    pub level: Option<u8>,
    pub taxon_tag: Option<TypeTag>,
    pub process_model: Option<String>,
    pub at: u64,
}

impl TraceEntry {
    pub fn is_unhandled(&self) -> bool {
        self.binding.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DispatchTrace {
    pub entries: Vec<TraceEntry>,
}

impl DispatchTrace {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn unhandled(&self) -> usize {
        self.entries.iter().filter(|e| e.is_unhandled()).count()
    }
}

/// Event table plus bindings in registration order.
///
/// Registration completes before dispatch; `dispatch` takes `&self` and may
/// run concurrently on a shared dispatcher.
#[derive(Debug, Clone, Default)]
pub struct Dispatcher {
    events: Vec<EventSpec>,
    bindings: Vec<BehaviorBinding>,
}

impl Dispatcher {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register_event(&mut self, spec: EventSpec) -> Result<(), DispatchError> {
        if self.event(spec.name.as_str()).is_some() {
            return Err(DispatchError::DuplicateEvent(spec.name.to_string()));
        }
        self.events.push(spec);
        Ok(())
    }

    pub fn register(&mut self, binding: BehaviorBinding) -> Result<(), DispatchError> {
        if self.event(binding.event.as_str()).is_none() {
            return Err(DispatchError::UnknownEvent(binding.event.to_string()));
        }
        self.bindings.push(binding);
        Ok(())
    }

    pub fn event(&self, name: &str) -> Option<&EventSpec> {
        self.events.iter().find(|e| e.name.as_str() == name)
    }

    pub fn events(&self) -> &[EventSpec] {
        &self.events
    }

    pub fn bindings(&self) -> &[BehaviorBinding] {
        &self.bindings
    }

    /// Highest level wins; among equal levels the earliest registration wins.
    pub fn select(&self, event: &str) -> Option<&BehaviorBinding> {
        let mut best: Option<&BehaviorBinding> = None;
        for b in self.bindings.iter().filter(|b| b.event.as_str() == event) {
            match best {
                Some(cur) if cur.level() >= b.level() => {}
                _ => best = Some(b),
            }
        }
        best
    }

    pub fn dispatch(
        &self,
        occurrences: &[EventOccurrence],
    ) -> Result<DispatchTrace, DispatchError> {
        if let Some(bad) = occurrences.iter().find(|o| self.event(&o.event).is_none()) {
            return Err(DispatchError::UnknownEvent(bad.event.clone()));
        }
        let entries = occurrences
            .iter()
            .zip(0u64..)
            .map(|(occ, seq)| {
                let chosen = self.select(&occ.event);
                TraceEntry {
                    seq,
                    event: occ.event.clone(),
                    binding: chosen.map(|b| b.behavior.to_string()),
                    level: chosen.map(BehaviorBinding::level),
                    taxon_tag: chosen.map(|b| b.taxon),
                    process_model: chosen
                        .and_then(|b| b.process_model.as_ref().map(|p| p.to_string())),
                    at: occ.at,
                }
            })
            .collect();
        Ok(DispatchTrace { entries })
    }
}
