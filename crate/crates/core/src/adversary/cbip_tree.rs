//! Recursive trees that force CBIP to open `2 * kappa` bins while never
//! using more than `kappa` components.
//!
//! `T_1` is a vertex, `T_2` an edge rooted at its second vertex (the one CBIP
//! puts in bin 2), and `T_i` is `T_{i-1}`, then `T_{i-2}`, then a new root
//! adjacent to both earlier roots.

use super::{parity_coloring_from_last, AdversaryError, FixedPlan};
use crate::graph::{OnlineGraph, PresentationStep, VertexId};

/// One completed `T_order` inside the construction. Its vertices are the
/// contiguous arrival range `start .. start + len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subtree {
    pub order: usize,
    pub start: VertexId,
    pub len: usize,
    pub root: VertexId,
}

impl Subtree {
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (self.start.0..self.start.0 + self.len).map(VertexId)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        (self.start.0..self.start.0 + self.len).contains(&v.0)
    }
}

#[derive(Debug, Clone)]
pub struct CbipTreePlan {
    pub plan: FixedPlan,
    /// Every `T_i` built along the way, in completion order.
    pub subtrees: Vec<Subtree>,
}

/// `|T_i|`: 1, 2, 4, 7, 12, 20, ...
pub fn cbip_tree_size(order: usize) -> usize {
    let (mut prev, mut cur) = (1usize, 2usize);
    match order {
        0 => 0,
        1 => 1,
        _ => {
            for _ in 2..order {
                (prev, cur) = (cur, cur + prev + 1);
            }
            cur
        }
    }
}

fn build(order: usize, steps: &mut Vec<PresentationStep>, subtrees: &mut Vec<Subtree>) -> VertexId {
    let start = VertexId(steps.len());
    let root = match order {
        1 => {
            steps.push(PresentationStep::isolated(start));
            start
        }
        2 => {
            let leaf = start;
            let root = VertexId(start.0 + 1);
            steps.push(PresentationStep::isolated(leaf));
            steps.push(PresentationStep::new(root, vec![leaf]));
            root
        }
        _ => {
            let big = build(order - 1, steps, subtrees);
            let small = build(order - 2, steps, subtrees);
            let root = VertexId(steps.len());
            steps.push(PresentationStep::new(root, vec![big, small]));
            root
        }
    };
    subtrees.push(Subtree {
        order,
        start,
        len: steps.len() - start.0,
        root,
    });
    root
}

/// Builds `T_{2 kappa}`; the adversary colors by depth parity from its root.
pub fn cbip_tree_adversary(kappa: usize) -> Result<CbipTreePlan, AdversaryError> {
    if kappa == 0 {
        return Err(AdversaryError::InvalidParameter(
            "cbip_tree needs kappa >= 1".into(),
        ));
    }
    if kappa > super::limits::CBIP_TREE_KAPPA {
        return Err(AdversaryError::OverBudget(format!(
            "cbip_tree kappa={kappa}"
        )));
    }
    let mut steps = Vec::with_capacity(cbip_tree_size(2 * kappa));
    let mut subtrees = Vec::new();
    build(2 * kappa, &mut steps, &mut subtrees);
    let graph = OnlineGraph::from_steps(steps.iter().cloned())?;
    let colors = parity_coloring_from_last(&graph);
    Ok(CbipTreePlan {
        plan: FixedPlan::new(steps.into_iter().zip(colors).collect(), kappa, 2),
        subtrees,
    })
}
