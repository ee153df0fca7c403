//! Symbiotic fusion `S1 ⊞ S2` and symbiotic-gain accounting.
//!
//! The cross relations of a fusion are every ordered component pair whose
//! endpoints come from different systems, in both directions, so the gain
//! of fusing `n1` components with `n2` components is `2·n1·n2`.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::model::{Ident, RelationKind, RelationSet, System};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FusionError {
    #[error("systems `{left}` and `{right}` share components: {}", shared.join(", "))]
    OverlappingComponents {
        left: String,
        right: String,
        shared: Vec<String>,
    },
    #[error("systems `{left}` and `{right}` share behaviors: {}", shared.join(", "))]
    OverlappingBehaviors {
        left: String,
        right: String,
        shared: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FusionResult {
    pub fused: System,
    /// ΔR12: the cross component relations created by the fusion.
    pub delta: RelationSet,
    pub gain: u64,
}

fn check_disjoint(s1: &System, s2: &System) -> Result<(), FusionError> {
    let shared: Vec<String> = s1
        .components()
        .intersection(s2.components())
        .map(|c| c.to_string())
        .collect();
    if !shared.is_empty() {
        return Err(FusionError::OverlappingComponents {
            left: s1.name().into(),
            right: s2.name().into(),
            shared,
        });
    }
    let shared: Vec<String> = s1
        .behaviors()
        .iter()
        .filter(|b| s2.has_behavior(b.name.as_str()))
        .map(|b| b.name.to_string())
        .collect();
    if !shared.is_empty() {
        return Err(FusionError::OverlappingBehaviors {
            left: s1.name().into(),
            right: s2.name().into(),
            shared,
        });
    }
    Ok(())
}

/// Fuses two systems with disjoint components and behaviors.
///
/// Input/output pairs whose external endpoint is a behavior of the other
/// operand become behavioral relations of the fused system, and the two
/// operands drop out of the fused environment.
pub fn fuse(s1: &System, s2: &System) -> Result<FusionResult, FusionError> {
    check_disjoint(s1, s2)?;

    let mut delta = RelationSet::new(RelationKind::Component);
    for a in s1.components() {
        for b in s2.components() {
            delta.insert(a.clone(), b.clone());
            delta.insert(b.clone(), a.clone());
        }
    }

    let components = s1.components().union(s2.components()).cloned().collect();
    let mut behaviors: Vec<_> = s1
        .behaviors()
        .iter()
        .chain(s2.behaviors())
        .cloned()
        .collect();
    behaviors.sort_by(|a, b| a.name.cmp(&b.name));

    let mut relations = RelationKind::ALL.map(RelationSet::new);
    for kind in [
        RelationKind::Component,
        RelationKind::Behavioral,
        RelationKind::Functional,
    ] {
        let target = &mut relations[kind as usize];
        target
            .pairs
            .extend(s1.relations(kind).pairs.iter().cloned());
        target
            .pairs
            .extend(s2.relations(kind).pairs.iter().cloned());
    }
    relations[RelationKind::Component as usize]
        .pairs
        .extend(delta.pairs.iter().cloned());

    for (this, other) in [(s1, s2), (s2, s1)] {
        let internal = |name: &Ident| {
            this.environment().contains(other.name()) && other.has_behavior(name.as_str())
        };
        for (x, y) in this.relations(RelationKind::Input).iter() {
            let dest = if internal(x) {
                RelationKind::Behavioral
            } else {
                RelationKind::Input
            };
            relations[dest as usize].insert(x.clone(), y.clone());
        }
        for (x, y) in this.relations(RelationKind::Output).iter() {
            let dest = if internal(y) {
                RelationKind::Behavioral
            } else {
                RelationKind::Output
            };
            relations[dest as usize].insert(x.clone(), y.clone());
        }
    }

    let environment: BTreeSet<Ident> = s1
        .environment()
        .union(s2.environment())
        .filter(|e| e.as_str() != s1.name() && e.as_str() != s2.name())
        .cloned()
        .collect();

    let gain = delta.len() as u64;
    let fused = System::from_parts(
        format!("{}⊞{}", s1.name(), s2.name()),
        components,
        behaviors,
        relations,
        environment,
    );
    Ok(FusionResult { fused, delta, gain })
}

/// Closed form `2·n1·n2`.
pub fn symbiotic_gain(n1: u64, n2: u64) -> u128 {
    (u128::from(n1) * u128::from(n2)).saturating_mul(2)
}

/// `|R| − (|R1| + |R2|)` counted by walking all three Cartesian squares.
pub fn gain_oracle(s1: &System, s2: &System) -> Result<u64, FusionError> {
    check_disjoint(s1, s2)?;
    let square = |set: &BTreeSet<&Ident>| {
        let mut n = 0u64;
        for _a in set {
            for _b in set {
                n += 1;
            }
        }
        n
    };
    let c1: BTreeSet<&Ident> = s1.components().iter().collect();
    let c2: BTreeSet<&Ident> = s2.components().iter().collect();
    let all: BTreeSet<&Ident> = c1.union(&c2).copied().collect();
    Ok(square(&all) - (square(&c1) + square(&c2)))
}
