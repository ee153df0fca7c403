//! Concept algebra and knowledge measurement in `bir` (binary relations).
//!
//! A formal concept is `(A, O, R^c, R^i, R^o)`. One conceptual relation
//! between two concepts is one bir; every larger construct is measured by
//! decomposing it into binary relations first.

use std::collections::BTreeSet;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;
use std::str::FromStr;

use serde::Serialize;
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::model::Ident;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KnowledgeError {
    #[error("unknown concept `{0}`")]
    DanglingConcept(String),
    #[error("concept `{0}` is already defined")]
    DuplicateConcept(String),
    #[error("concept `{concept}`: internal pair {object}->{attribute} is outside O×A")]
    InvalidInternal {
        concept: String,
        object: String,
        attribute: String,
    },
    #[error("knowledge base has no concepts")]
    EmptyBase,
    #[error("next layer would hold {records} records (limit {limit})")]
    LayerTooLarge { records: u64, limit: u64 },
    #[error("capacity domain error: {0}")]
    DomainError(String),
    #[error("unknown learning category `{0}`")]
    UnknownTag(String),
}

/// A knowledge quantity in binary relations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Bir(pub u64);

impl Add for Bir {
    type Output = Bir;
    fn add(self, rhs: Bir) -> Bir {
        Bir(self.0 + rhs.0)
    }
}

impl Sum for Bir {
    fn sum<I: Iterator<Item = Bir>>(iter: I) -> Bir {
        iter.fold(Bir(0), Add::add)
    }
}

impl fmt::Display for Bir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bir", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Concept {
    pub name: Ident,
    /// Intension.
    pub attributes: BTreeSet<Ident>,
    /// Extension.
    pub objects: BTreeSet<Ident>,
    /// R^c ⊆ O × A, as (object, attribute).
    pub internal: BTreeSet<(Ident, Ident)>,
    /// Concepts feeding this one: R^i = inputs × {self}.
    pub inputs: BTreeSet<Ident>,
    /// Concepts fed by this one: R^o = {self} × outputs.
    pub outputs: BTreeSet<Ident>,
}

impl Concept {
    pub fn new(name: Ident) -> Self {
        Concept {
            name,
            attributes: BTreeSet::new(),
            objects: BTreeSet::new(),
            internal: BTreeSet::new(),
            inputs: BTreeSet::new(),
            outputs: BTreeSet::new(),
        }
    }

    pub fn with_attributes(mut self, attrs: impl IntoIterator<Item = Ident>) -> Self {
        self.attributes.extend(attrs);
        self
    }

    pub fn with_objects(mut self, objs: impl IntoIterator<Item = Ident>) -> Self {
        self.objects.extend(objs);
        self
    }

    pub fn with_internal(mut self, pairs: impl IntoIterator<Item = (Ident, Ident)>) -> Self {
        self.internal.extend(pairs);
        self
    }

    /// Relates every object to every attribute.
    pub fn with_full_internal(mut self) -> Self {
        for o in &self.objects {
            for a in &self.attributes {
                self.internal.insert((o.clone(), a.clone()));
            }
        }
        self
    }

    pub fn with_inputs(mut self, names: impl IntoIterator<Item = Ident>) -> Self {
        self.inputs.extend(names);
        self
    }

    pub fn with_outputs(mut self, names: impl IntoIterator<Item = Ident>) -> Self {
        self.outputs.extend(names);
        self
    }

    pub fn check(&self) -> Result<(), KnowledgeError> {
        for (o, a) in &self.internal {
            if !self.objects.contains(o) || !self.attributes.contains(a) {
                return Err(KnowledgeError::InvalidInternal {
                    concept: self.name.to_string(),
                    object: o.to_string(),
                    attribute: a.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// `κ = c1 × c2`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct KnowledgeItem {
    pub from: Ident,
    pub to: Ident,
}

impl KnowledgeItem {
    pub fn new(from: Ident, to: Ident) -> Self {
        KnowledgeItem { from, to }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct KnowledgeGain {
    pub intension: u64,
    pub extension: u64,
    pub internal: u64,
    pub input: u64,
    pub output: u64,
    pub total: u64,
}

/// Knowledge symbiosis between two concept sets, summed over every cross
/// pair `(c_i, c_j)` with `c_i` from the first set and `c_j` from the second.
pub fn knowledge_symbiosis_gain(cs1: &[Concept], cs2: &[Concept]) -> KnowledgeGain {
    let mut g = KnowledgeGain::default();
    for ci in cs1 {
        for cj in cs2 {
            let card = |c: &Concept| (c.attributes.len() as u64, c.objects.len() as u64);
            let (ai, oi) = card(ci);
            let (aj, oj) = card(cj);
            g.intension += ai * aj;
            g.extension += oi * oj;
            g.internal += oi * ai + oj * aj;
            g.input += ci.inputs.len() as u64 * cj.inputs.len() as u64;
            g.output += ci.outputs.len() as u64 * cj.outputs.len() as u64;
        }
    }
    g.total = g.intension + g.extension + g.internal + g.input + g.output;
    g
}

/// One entry of layer `k`, pairing two entries of layer `k − 1` by index.
/// Layer 0 is the concept list itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CompositionRecord {
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Layer {
    pub records: Vec<CompositionRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Itemized {
    pub items: Vec<KnowledgeItem>,
    pub measure: Bir,
}

/// Upper bound on records in one composed layer.
pub const MAX_LAYER_RECORDS: u64 = 10_000_000;

/// Concepts, binary knowledge items and composed layers.
///
/// Mutation (`insert_*`, `acquire`) is single-writer; measurement methods are
/// pure reads.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct KnowledgeBase {
    concepts: Vec<Concept>,
    items: Vec<KnowledgeItem>,
    layers: Vec<Layer>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn items(&self) -> &[KnowledgeItem] {
        &self.items
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn concept(&self, name: &str) -> Option<&Concept> {
        self.concepts.iter().find(|c| c.name.as_str() == name)
    }

    fn resolve(&self, name: &str) -> Result<&Concept, KnowledgeError> {
        self.concept(name)
            .ok_or_else(|| KnowledgeError::DanglingConcept(name.to_string()))
    }

    pub fn insert_concept(&mut self, concept: Concept) -> Result<(), KnowledgeError> {
        concept.check()?;
        if self.concept(concept.name.as_str()).is_some() {
            return Err(KnowledgeError::DuplicateConcept(concept.name.to_string()));
        }
        self.concepts.push(concept);
        Ok(())
    }

    /// Returns `false` if the item was already present.
    pub fn insert_item(&mut self, item: KnowledgeItem) -> Result<bool, KnowledgeError> {
        self.measure_unit(&item)?;
        if self.items.contains(&item) {
            return Ok(false);
        }
        self.items.push(item);
        Ok(true)
    }

    /// Input and output references naming no concept in the base, as
    /// `(concept, reference)`.
    pub fn dangling_references(&self) -> Vec<(Ident, Ident)> {
        let mut out = Vec::new();
        for c in &self.concepts {
            for r in c.inputs.iter().chain(&c.outputs) {
                if self.concept(r.as_str()).is_none() {
                    out.push((c.name.clone(), r.clone()));
                }
            }
        }
        out
    }

    /// Every valid binary conceptual relation is one bir.
    pub fn measure_unit(&self, item: &KnowledgeItem) -> Result<Bir, KnowledgeError> {
        self.resolve(item.from.as_str())?;
        self.resolve(item.to.as_str())?;
        Ok(Bir(1))
    }

    /// Relates `c0` to each distinct concept in `others`, one binary item per
    /// related concept.
    pub fn itemized_knowledge(
        &self,
        c0: &str,
        others: &[&str],
    ) -> Result<Itemized, KnowledgeError> {
        let head = self.resolve(c0)?.name.clone();
        let mut seen = BTreeSet::new();
        let mut items = Vec::new();
        for name in others {
            let c = self.resolve(name)?;
            if seen.insert(c.name.clone()) {
                items.push(KnowledgeItem::new(head.clone(), c.name.clone()));
            }
        }
        let measure = Bir(items.len() as u64);
        Ok(Itemized { items, measure })
    }

    pub fn symbiosis_gain(
        &self,
        left: &[&str],
        right: &[&str],
    ) -> Result<KnowledgeGain, KnowledgeError> {
        let pick = |names: &[&str]| -> Result<Vec<Concept>, KnowledgeError> {
            names.iter().map(|n| self.resolve(n).cloned()).collect()
        };
        Ok(knowledge_symbiosis_gain(&pick(left)?, &pick(right)?))
    }

    /// Number of entries in the current top layer.
    pub fn top_width(&self) -> usize {
        self.layers
            .last()
            .map_or(self.concepts.len(), |l| l.records.len())
    }

    /// One introspective-learning step: a new top layer holding every
    /// unordered pair of distinct entries of the current top layer.
    pub fn compose_layer(&self) -> Result<KnowledgeBase, KnowledgeError> {
        if self.concepts.is_empty() {
            return Err(KnowledgeError::EmptyBase);
        }
        let n = self.top_width() as u64;
        let records = n * n.saturating_sub(1) / 2;
        if records > MAX_LAYER_RECORDS {
            return Err(KnowledgeError::LayerTooLarge {
                records,
                limit: MAX_LAYER_RECORDS,
            });
        }
        let n = n as usize;
        let mut layer = Layer {
            records: Vec::with_capacity(records as usize),
        };
        for left in 0..n {
            for right in left + 1..n {
                layer.records.push(CompositionRecord { left, right });
            }
        }
        let mut next = self.clone();
        next.layers.push(layer);
        Ok(next)
    }

    /// Σ layer records + Σ item measures.
    pub fn entire_knowledge_measure(&self) -> Bir {
        let layered: u64 = self.layers.iter().map(|l| l.records.len() as u64).sum();
        Bir(layered + self.items.len() as u64)
    }

    /// Knowledge acquisition `X ⇒ c(X) ⊎ K`: adds the concept formed from the
    /// observations and relates it to the named existing concepts.
    pub fn acquire(
        &mut self,
        concept: Concept,
        related: &[&str],
    ) -> Result<Itemized, KnowledgeError> {
        for r in related {
            if *r != concept.name.as_str() {
                self.resolve(r)?;
            }
        }
        let name = concept.name.to_string();
        self.insert_concept(concept)?;
        let itemized = self.itemized_knowledge(&name, related)?;
        for item in &itemized.items {
            self.insert_item(item.clone())?;
        }
        Ok(itemized)
    }
}

const STIRLING_MIN: f64 = 20.0;

/// Remainder of Stirling's series for `ln Γ(z)` after
/// `(z − ½) ln z − z + ½ ln 2π`.
fn stirling_correction(z: f64) -> f64 {
    let z2 = z * z;
    (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * z2)) / z2) / z2) / z
}

/// `ln Γ(b + d) − ln Γ(b)` for `b ≥ STIRLING_MIN`, arranged so that the large
/// leading terms cancel analytically.
fn ln_gamma_ratio(b: f64, d: f64) -> f64 {
    let a = b + d;
    (b - 0.5) * (d / b).ln_1p() + d * a.ln() - d + stirling_correction(a) - stirling_correction(b)
}

/// `ln C(n, k)` from log-gamma values, accurate for magnitudes far beyond
/// where `n!` is representable.
pub fn ln_binomial(n: f64, k: f64) -> Result<f64, KnowledgeError> {
    if !n.is_finite() || !k.is_finite() || n < 0.0 || k < 0.0 {
        return Err(KnowledgeError::DomainError(format!(
            "need finite n, k ≥ 0, got n={n}, k={k}"
        )));
    }
    if k > n {
        return Err(KnowledgeError::DomainError(format!(
            "k = {k} exceeds n = {n}"
        )));
    }
    let k = k.min(n - k);
    if k == 0.0 {
        return Ok(0.0);
    }
    let b = n - k + 1.0;
    let head = if b >= STIRLING_MIN {
        ln_gamma_ratio(b, k)
    } else {
        ln_gamma(n + 1.0) - ln_gamma(b)
    };
    Ok(head - ln_gamma(k + 1.0))
}

/// `log10 C(n_neurons, n_synapses)`: the memory capacity bound in bir,
/// as a power of ten.
pub fn memory_capacity_log10(n_neurons: f64, n_synapses: f64) -> Result<f64, KnowledgeError> {
    if n_neurons <= 0.0 {
        return Err(KnowledgeError::DomainError(format!(
            "neuron count must be positive, got {n_neurons}"
        )));
    }
    Ok(ln_binomial(n_neurons, n_synapses)? / std::f64::consts::LN_10)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CognitionStage {
    Data,
    Information,
    Knowledge,
    Intelligence,
}

impl CognitionStage {
    pub fn position(self) -> usize {
        self as usize + 1
    }

    pub fn tag(self) -> &'static str {
        match self {
            CognitionStage::Data => "D",
            CognitionStage::Information => "I",
            CognitionStage::Knowledge => "K",
            CognitionStage::Intelligence => "B",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("stage {position} ({stage:?}, transform `{transform}`) failed: {reason}")]
pub struct StageFailure {
    pub stage: CognitionStage,
    pub position: usize,
    pub transform: String,
    pub reason: String,
}

type StageFn<'a, A, B> = Box<dyn Fn(A) -> Result<B, String> + Send + Sync + 'a>;

pub struct StageMapping<'a, A, B> {
    name: String,
    map: StageFn<'a, A, B>,
}

impl<'a, A, B> StageMapping<'a, A, B> {
    pub fn new(
        name: impl Into<String>,
        map: impl Fn(A) -> Result<B, String> + Send + Sync + 'a,
    ) -> Self {
        StageMapping {
            name: name.into(),
            map: Box::new(map),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    fn apply(&self, stage: CognitionStage, input: A) -> Result<B, StageFailure> {
        (self.map)(input).map_err(|reason| StageFailure {
            stage,
            position: stage.position(),
            transform: self.name.clone(),
            reason,
        })
    }
}

/// Data → information → knowledge → intelligence. The stage types chain
/// objects `O` through quantities `Q`, semantics `S` and concepts `C` to
/// behavior `B`; [`CognitionPipeline::run`] is the only way to apply them.
pub struct CognitionPipeline<'a, O, Q, S, C, B> {
    data: StageMapping<'a, O, Q>,
    information: StageMapping<'a, Q, S>,
    knowledge: StageMapping<'a, S, C>,
    intelligence: StageMapping<'a, C, B>,
}

impl<'a, O, Q, S, C, B> CognitionPipeline<'a, O, Q, S, C, B> {
    pub fn new(
        data: StageMapping<'a, O, Q>,
        information: StageMapping<'a, Q, S>,
        knowledge: StageMapping<'a, S, C>,
        intelligence: StageMapping<'a, C, B>,
    ) -> Self {
        CognitionPipeline {
            data,
            information,
            knowledge,
            intelligence,
        }
    }

    pub fn stage_names(&self) -> [&str; 4] {
        [
            self.data.name(),
            self.information.name(),
            self.knowledge.name(),
            self.intelligence.name(),
        ]
    }

    pub fn run(&self, input: O) -> Result<B, StageFailure> {
        let q = self.data.apply(CognitionStage::Data, input)?;
        let s = self.information.apply(CognitionStage::Information, q)?;
        let c = self.knowledge.apply(CognitionStage::Knowledge, s)?;
        self.intelligence.apply(CognitionStage::Intelligence, c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LearningCategory {
    ObjectIdentification,
    ClusterClassification,
    PatternRecognition,
    FunctionalRegression,
    BehaviorGeneration,
    KnowledgeAcquisition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LearningDescriptor {
    pub category: LearningCategory,
    pub symbol: &'static str,
    pub name: &'static str,
    pub signature: &'static str,
    /// Only knowledge acquisition has an implementation
    /// ([`KnowledgeBase::acquire`]).
    pub executable: bool,
}

impl LearningCategory {
    pub const ALL: [LearningCategory; 6] = [
        LearningCategory::ObjectIdentification,
        LearningCategory::ClusterClassification,
        LearningCategory::PatternRecognition,
        LearningCategory::FunctionalRegression,
        LearningCategory::BehaviorGeneration,
        LearningCategory::KnowledgeAcquisition,
    ];

    pub fn descriptor(self) -> LearningDescriptor {
        use LearningCategory::*;
        let (symbol, name, signature) = match self {
            ObjectIdentification => ("L_i", "Object identification", "x = P · x"),
            ClusterClassification => ("L_c", "Cluster classification", "X ⊂ P"),
            PatternRecognition => ("L_r", "Pattern recognition", "X = P"),
            FunctionalRegression => ("L_f", "Functional regression", "X ⇒ P(X)"),
            BehaviorGeneration => ("L_b", "Behavior generation", "X ⇒ b(P(X))"),
            KnowledgeAcquisition => ("L_k", "Knowledge acquisition", "X ⇒ c(X) ⊎ K"),
        };
        LearningDescriptor {
            category: self,
            symbol,
            name,
            signature,
            executable: self == KnowledgeAcquisition,
        }
    }
}

impl FromStr for LearningCategory {
    type Err = KnowledgeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use LearningCategory::*;
        Ok(match s {
            "ObjectIdentification" => ObjectIdentification,
            "ClusterClassification" => ClusterClassification,
            "PatternRecognition" => PatternRecognition,
            "FunctionalRegression" => FunctionalRegression,
            "BehaviorGeneration" => BehaviorGeneration,
            "KnowledgeAcquisition" => KnowledgeAcquisition,
            _ => return Err(KnowledgeError::UnknownTag(s.to_string())),
        })
    }
}

pub fn learning_category(tag: &str) -> Result<LearningDescriptor, KnowledgeError> {
    tag.parse::<LearningCategory>()
        .map(LearningCategory::descriptor)
}
