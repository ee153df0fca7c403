//! Recursive layered topology: primitive systems at depth 0, each higher
//! node containing an ordered list of lower nodes.
//!
//! Composition here is containment only. Relation sets are never merged by
//! [`abstract_up`]; merging is [`crate::fusion::fuse`].

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::System;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("composition needs at least one part")]
    EmptyParts,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Leaf(Box<System>),
    Composite(Vec<LayeredSystem>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredSystem {
    name: String,
    depth: usize,
    node: Node,
}

impl LayeredSystem {
    pub fn leaf(system: System) -> Self {
        LayeredSystem {
            name: system.name().to_string(),
            depth: 0,
            node: Node::Leaf(Box::new(system)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn system(&self) -> Option<&System> {
        match &self.node {
            Node::Leaf(s) => Some(s),
            Node::Composite(_) => None,
        }
    }

    pub fn children(&self) -> &[LayeredSystem] {
        match &self.node {
            Node::Leaf(_) => &[],
            Node::Composite(c) => c,
        }
    }

    /// Leaf systems in left-to-right order.
    pub fn flatten(&self) -> Vec<&System> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            match &n.node {
                Node::Leaf(s) => out.push(s.as_ref()),
                Node::Composite(c) => stack.extend(c.iter().rev()),
            }
        }
        out
    }

    pub fn leaf_count(&self) -> usize {
        match &self.node {
            Node::Leaf(_) => 1,
            Node::Composite(c) => c.iter().map(LayeredSystem::leaf_count).sum(),
        }
    }

    /// Indented outline, one node per line, two spaces per level.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match &self.node {
            Node::Leaf(s) => {
                let _ = writeln!(
                    out,
                    "{pad}{} [S^0] |C|={} |B|={}",
                    self.name,
                    s.components().len(),
                    s.behaviors().len()
                );
            }
            Node::Composite(children) => {
                let _ = writeln!(out, "{pad}{} [S^{}]", self.name, self.depth);
                for c in children {
                    c.render_into(indent + 1, out);
                }
            }
        }
    }
}

/// Bottom-up induction: wraps `parts` in a node one layer above the deepest
/// part.
pub fn abstract_up(name: &str, parts: Vec<LayeredSystem>) -> Result<LayeredSystem, TopologyError> {
    let depth = 1 + parts
        .iter()
        .map(LayeredSystem::depth)
        .max()
        .ok_or(TopologyError::EmptyParts)?;
    Ok(LayeredSystem {
        name: name.to_string(),
        depth,
        node: Node::Composite(parts),
    })
}

/// One top-down deduction step. A leaf refines to itself.
pub fn refine_down(node: &LayeredSystem) -> Vec<&LayeredSystem> {
    match &node.node {
        Node::Leaf(_) => vec![node],
        Node::Composite(c) => c.iter().collect(),
    }
}

/// The generic recursion operator: a left fold `((a∘b)∘c)∘…` over a
/// non-empty sequence.
pub fn big_r_fold<T>(
    items: impl IntoIterator<Item = T>,
    combine: impl FnMut(T, T) -> T,
) -> Result<T, TopologyError> {
    items
        .into_iter()
        .reduce(combine)
        .ok_or(TopologyError::EmptyParts)
}

/// [`big_r_fold`] with a fallible combination step.
pub fn try_big_r_fold<T, E>(
    items: impl IntoIterator<Item = T>,
    mut combine: impl FnMut(T, T) -> Result<T, E>,
) -> Result<Result<T, E>, TopologyError> {
    let mut iter = items.into_iter();
    let first = iter.next().ok_or(TopologyError::EmptyParts)?;
    Ok(iter.try_fold(first, &mut combine))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::{fuse, gain_oracle};
    use crate::model::new_system;

    fn leaf(name: &str) -> LayeredSystem {
        LayeredSystem::leaf(new_system(name, &["x"], &[]).unwrap())
    }

    #[test]
    fn abstraction_depths() {
        let s1 = abstract_up("S1", vec![leaf("a"), leaf("b")]).unwrap();
        assert_eq!(s1.depth(), 1);
        assert_eq!(s1.children().len(), 2);
        let t = abstract_up("T", vec![s1, leaf("c")]).unwrap();
        assert_eq!(t.depth(), 2);
        assert_eq!(abstract_up("E", vec![]), Err(TopologyError::EmptyParts));
    }

    #[test]
    fn refine_is_inverse_of_abstract() {
        let l = leaf("a");
        assert_eq!(refine_down(&l), vec![&l]);
        let x = leaf("x");
        let y = leaf("y");
        let s = abstract_up("S1", vec![x.clone(), y.clone()]).unwrap();
        assert_eq!(refine_down(&s), vec![&x, &y]);
    }

    #[test]
    fn three_layers_over_four_leaves() {
        let s1a = abstract_up("S1a", vec![leaf("a"), leaf("b")]).unwrap();
        let s1b = abstract_up("S1b", vec![leaf("c"), leaf("d")]).unwrap();
        let s2 = abstract_up("S2", vec![s1a, s1b]).unwrap();
        let s3 = abstract_up("S3", vec![s2]).unwrap();
        assert_eq!(s3.depth(), 3);
        let names: Vec<_> = s3.flatten().iter().map(|s| s.name()).collect();
        assert_eq!(names, ["a", "b", "c", "d"]);
        assert_eq!(s3.leaf_count(), 4);
        let rendered = s3.render();
        assert!(rendered.starts_with("S3 [S^3]\n  S2 [S^2]\n    S1a [S^1]\n      a [S^0]"));
    }

    #[test]
    fn fold_contract() {
        assert_eq!(big_r_fold(["s"], |a, _| a), Ok("s"));
        let joined = big_r_fold(["a", "b", "c"].map(String::from), |a, b| {
            format!("({a}∘{b})")
        })
        .unwrap();
        assert_eq!(joined, "((a∘b)∘c)");
        assert_eq!(
            big_r_fold(Vec::<u8>::new(), |a, _| a),
            Err(TopologyError::EmptyParts)
        );
    }

    #[test]
    fn folding_fusion_over_eight_systems() {
        let systems: Vec<_> = (0..8)
            .map(|i| {
                let comps: Vec<String> = (0..=i).map(|j| format!("s{i}c{j}")).collect();
                let refs: Vec<&str> = comps.iter().map(String::as_str).collect();
                new_system(&format!("S{i}"), &refs, &[]).unwrap()
            })
            .collect();

        // oracle: accumulate gain_oracle against the running union
        let mut expected = 0;
        let mut acc = systems[0].clone();
        for s in &systems[1..] {
            expected += gain_oracle(&acc, s).unwrap();
            acc = fuse(&acc, s).unwrap().fused;
        }

        let (_, total) = try_big_r_fold(
            systems.into_iter().map(|s| (s, 0u64)),
            |(a, ga), (b, gb)| fuse(&a, &b).map(|r| (r.fused, ga + gb + r.gain)),
        )
        .unwrap()
        .unwrap();
        assert_eq!(total, expected);
    }
}
