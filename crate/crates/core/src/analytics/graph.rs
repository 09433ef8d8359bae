use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::AnalyticsError;
use crate::logic::{PosExpression, Slot};

/// Slots of a POS expression, joined when they share a sum term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    nodes: BTreeSet<Slot>,
    edges: BTreeSet<(Slot, Slot)>,
}

/// Reasoning-width proxies of one requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ComplexityMetrics {
    pub sum_terms: usize,
    pub components: usize,
    /// Size of the largest connected component.
    pub lcc: usize,
    pub max_degree: usize,
}

impl DependencyGraph {
    pub fn nodes(&self) -> &BTreeSet<Slot> {
        &self.nodes
    }

    /// Undirected edges, stored with the lower slot first.
    pub fn edges(&self) -> &BTreeSet<(Slot, Slot)> {
        &self.edges
    }

    pub fn degree(&self, slot: Slot) -> usize {
        self.edges
            .iter()
            .filter(|(a, b)| *a == slot || *b == slot)
            .count()
    }

    /// Sizes of the connected components, largest first.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        let mut sizes = Vec::new();
        for &start in &self.nodes {
            if !seen.insert(start) {
                continue;
            }
            let mut stack = alloc::vec![start];
            let mut size = 0;
            while let Some(node) = stack.pop() {
                size += 1;
                for &(a, b) in &self.edges {
                    let next = if a == node {
                        b
                    } else if b == node {
                        a
                    } else {
                        continue;
                    };
                    if seen.insert(next) {
                        stack.push(next);
                    }
                }
            }
            sizes.push(size);
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

pub fn build_dependency_graph(pos: &PosExpression) -> Result<DependencyGraph, AnalyticsError> {
    if pos.is_empty() {
        return Err(AnalyticsError::EmptyExpression);
    }
    let nodes = pos.slots();
    let mut edges = BTreeSet::new();
    for term in pos.terms() {
        let slots: Vec<Slot> = term.slots().collect();
        for (i, &a) in slots.iter().enumerate() {
            for &b in &slots[i + 1..] {
                edges.insert(if a < b { (a, b) } else { (b, a) });
            }
        }
    }
    Ok(DependencyGraph { nodes, edges })
}

pub fn complexity_metrics(pos: &PosExpression) -> Result<ComplexityMetrics, AnalyticsError> {
    let graph = build_dependency_graph(pos)?;
    let sizes = graph.component_sizes();
    Ok(ComplexityMetrics {
        sum_terms: pos.terms().len(),
        components: sizes.len(),
        lcc: sizes.first().copied().unwrap_or(0),
        max_degree: graph
            .nodes
            .iter()
            .map(|&s| graph.degree(s))
            .max()
            .unwrap_or(0),
    })
}
