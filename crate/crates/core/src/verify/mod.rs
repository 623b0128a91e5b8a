//! Checks for traces and colorings. Each check recomputes what it needs from
//! the raw presentation rather than trusting the structures that produced it.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::adversary::AdversaryColor;
use crate::algorithms::Bin;
use crate::graph::{GraphError, OnlineGraph, PresentationStep, VertexId};

mod chromatic;
mod types;

pub use chromatic::{
    chromatic_number, chromatic_number_with_budget, Chromatic, DEFAULT_NODE_BUDGET,
};
pub use types::{
    check_continuity, check_type_transition, classify_bin_sets, classify_components, ArrivalEvent,
    ClassifyError, ComponentClass, ComponentType, ContinuityViolation, MergedPart, SetShape, Side,
    TableViolation, TransitionRow, TypeKind, TypeLabel, TypeMonitor, TypeViolation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("expected {expected} labels, got {got}")]
pub struct LengthMismatch {
    pub expected: usize,
    pub got: usize,
}

/// Component count after each prefix, from a plain union-find.
pub fn component_counts<'a, I>(steps: I) -> Result<Vec<usize>, GraphError>
where
    I: IntoIterator<Item = &'a PresentationStep>,
{
    fn root(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut parent: Vec<usize> = Vec::new();
    let mut components = 0usize;
    let mut counts = Vec::new();
    for step in steps {
        step.validate(parent.len())?;
        let v = parent.len();
        parent.push(v);
        components += 1;
        for u in &step.pre_neighborhood {
            let (a, b) = (root(&mut parent, u.0), root(&mut parent, v));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        counts.push(components);
    }
    Ok(counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("prefix of length {prefix} has {components} components")]
pub struct CbViolation {
    pub prefix: usize,
    pub components: usize,
}

/// Checks that no prefix has more than `kappa` components; reports the
/// shortest offending prefix.
pub fn check_kappa_cb<'a, I>(steps: I, kappa: usize) -> Result<Result<(), CbViolation>, GraphError>
where
    I: IntoIterator<Item = &'a PresentationStep>,
{
    let counts = component_counts(steps)?;
    Ok(match counts.iter().position(|&c| c > kappa) {
        Some(i) => Err(CbViolation {
            prefix: i + 1,
            components: counts[i],
        }),
        None => Ok(()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProperError {
    #[error("edge ({0}, {1}) has equal labels")]
    Conflict(VertexId, VertexId),
    #[error(transparent)]
    Length(#[from] LengthMismatch),
}

/// Checks that no edge carries the same label at both ends; reports the
/// first conflicting edge in arrival order.
pub fn check_proper<L: PartialEq>(graph: &OnlineGraph, labels: &[L]) -> Result<(), ProperError> {
    if labels.len() != graph.len() {
        return Err(LengthMismatch {
            expected: graph.len(),
            got: labels.len(),
        }
        .into());
    }
    match graph.edges().find(|&(u, v)| labels[u.0] == labels[v.0]) {
        Some((u, v)) => Err(ProperError::Conflict(u, v)),
        None => Ok(()),
    }
}

pub fn distinct_labels<L: Ord>(labels: &[L]) -> usize {
    labels.iter().collect::<BTreeSet<_>>().len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BinSaturation {
    pub size: usize,
    /// Largest `p` for which the bin is `p`-saturated.
    pub p: usize,
    pub perfectly: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SaturationReport {
    pub bins: BTreeMap<Bin, BinSaturation>,
}

impl SaturationReport {
    /// Bins that are at least `p`-saturated.
    pub fn saturated(&self, p: usize) -> Vec<Bin> {
        self.bins
            .iter()
            .filter(|(_, s)| s.p >= p)
            .map(|(&b, _)| b)
            .collect()
    }
}

pub fn saturation_report(
    bins: &[Bin],
    colors: &[AdversaryColor],
) -> Result<SaturationReport, LengthMismatch> {
    if bins.len() != colors.len() {
        return Err(LengthMismatch {
            expected: bins.len(),
            got: colors.len(),
        });
    }
    let mut groups: BTreeMap<Bin, (usize, BTreeSet<AdversaryColor>)> = BTreeMap::new();
    for (&b, &c) in bins.iter().zip(colors) {
        let entry = groups.entry(b).or_default();
        entry.0 += 1;
        entry.1.insert(c);
    }
    let bins = groups
        .into_iter()
        .map(|(b, (size, cs))| {
            let p = cs.len();
            (
                b,
                BinSaturation {
                    size,
                    p,
                    perfectly: size == p,
                },
            )
        })
        .collect();
    Ok(SaturationReport { bins })
}

/// True iff the graph has a cycle of length at most `k`.
pub fn girth_at_most(graph: &OnlineGraph, k: usize) -> bool {
    let n = graph.len();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut touched = Vec::new();
    for s in 0..n {
        for &v in &touched {
            dist[v] = usize::MAX;
            parent[v] = usize::MAX;
        }
        touched.clear();
        dist[s] = 0;
        touched.push(s);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 > k {
                break;
            }
            for &w in graph.neighbors(VertexId(u)) {
                let w = w.0;
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else if w != parent[u] && dist[u] + dist[w] < k {
                    return true;
                }
            }
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("order is not a permutation of the {0} vertices")]
pub struct NotAPermutation(pub usize);

/// Largest number of neighbors a vertex has later in `order`.
pub fn max_back_degree(graph: &OnlineGraph, order: &[VertexId]) -> Result<usize, NotAPermutation> {
    let n = graph.len();
    let mut position = vec![usize::MAX; n];
    for (i, v) in order.iter().enumerate() {
        match position.get_mut(v.0) {
            Some(slot) if *slot == usize::MAX => *slot = i,
            _ => return Err(NotAPermutation(n)),
        }
    }
    if order.len() != n {
        return Err(NotAPermutation(n));
    }
    Ok(graph
        .vertices()
        .map(|v| {
            graph
                .neighbors(v)
                .iter()
                .filter(|w| position[w.0] > position[v.0])
                .count()
        })
        .max()
        .unwrap_or(0))
}
