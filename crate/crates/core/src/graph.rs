//! Online graphs in the vertex-arrival model.
//!
//! [`OnlineGraph`] records the presentation order together with each
//! vertex's pre-neighborhood. [`ComponentTracker`] maintains connected
//! components incrementally with a parity union-find, so that the number of
//! components of every prefix and the bipartition of every bipartite
//! component are available at each arrival.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Dense vertex identifier equal to the 0-based arrival index.
///
/// Rendered 1-based (`v1`, `v2`, ...) for humans and in trace files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }

    /// Builds an id from its 1-based rendering.
    pub fn from_one_based(n: usize) -> Option<Self> {
        n.checked_sub(1).map(VertexId)
    }

    pub fn one_based(self) -> usize {
        self.0 + 1
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0 + 1)
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.one_based() as u64)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = u64::deserialize(deserializer)?;
        usize::try_from(raw)
            .ok()
            .and_then(VertexId::from_one_based)
            .ok_or_else(|| serde::de::Error::custom("vertex ids are 1-based"))
    }
}

/// One arrival: the new vertex and its edges to already presented vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationStep {
    pub vertex: VertexId,
    pub pre_neighborhood: Vec<VertexId>,
}

impl PresentationStep {
    pub fn new(vertex: VertexId, pre_neighborhood: Vec<VertexId>) -> Self {
        Self {
            vertex,
            pre_neighborhood,
        }
    }

    pub fn isolated(vertex: VertexId) -> Self {
        Self::new(vertex, Vec::new())
    }

    /// Checks the step against a graph that already holds `presented` vertices.
    pub fn validate(&self, presented: usize) -> Result<(), GraphError> {
        if self.vertex.0 != presented {
            return Err(GraphError::UnexpectedVertex {
                expected: VertexId(presented),
                got: self.vertex,
            });
        }
        let mut seen = vec![false; presented];
        for &u in &self.pre_neighborhood {
            if u.0 >= presented {
                return Err(GraphError::UnknownPreNeighbor {
                    vertex: self.vertex,
                    neighbor: u,
                });
            }
            if std::mem::replace(&mut seen[u.0], true) {
                return Err(GraphError::DuplicatePreNeighbor {
                    vertex: self.vertex,
                    neighbor: u,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("expected vertex {expected} to arrive next, got {got}")]
    UnexpectedVertex { expected: VertexId, got: VertexId },
    #[error("pre-neighbor {neighbor} of {vertex} has not been presented")]
    UnknownPreNeighbor {
        vertex: VertexId,
        neighbor: VertexId,
    },
    #[error("pre-neighbor {neighbor} listed twice for {vertex}")]
    DuplicatePreNeighbor {
        vertex: VertexId,
        neighbor: VertexId,
    },
    #[error("component of {0} is not bipartite")]
    NotBipartite(VertexId),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
}

/// The growing graph together with its presentation order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OnlineGraph {
    steps: Vec<PresentationStep>,
    adjacency: Vec<Vec<VertexId>>,
    edges: usize,
}

impl OnlineGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph by presenting `steps` in order.
    pub fn from_steps<I>(steps: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = PresentationStep>,
    {
        let mut graph = Self::new();
        for step in steps {
            graph.push(step)?;
        }
        Ok(graph)
    }

    pub fn push(&mut self, step: PresentationStep) -> Result<(), GraphError> {
        step.validate(self.len())?;
        let v = step.vertex;
        self.adjacency.push(step.pre_neighborhood.clone());
        for &u in &step.pre_neighborhood {
            self.adjacency[u.0].push(v);
        }
        self.edges += step.pre_neighborhood.len();
        self.steps.push(step);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn steps(&self) -> &[PresentationStep] {
        &self.steps
    }

    pub fn pre_neighborhood(&self, v: VertexId) -> &[VertexId] {
        &self.steps[v.0].pre_neighborhood
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v.0].len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.len()).map(VertexId)
    }

    /// Each edge once, as `(earlier, later)`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.steps
            .iter()
            .flat_map(|s| s.pre_neighborhood.iter().map(move |&u| (u, s.vertex)))
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a.0].contains(&b)
    }
}

/// Incremental connected components with bipartition sides.
///
/// Every vertex stores its parity relative to its parent; the parity of a
/// vertex relative to its root is the xor along the path. Each root keeps
/// the explicit member lists of both sides, merged small-into-large.
#[derive(Debug, Clone, Default)]
pub struct ComponentTracker {
    parent: Vec<usize>,
    rank: Vec<u8>,
    parity: Vec<bool>,
    bipartite: Vec<bool>,
    sides: Vec<[Vec<VertexId>; 2]>,
    components: usize,
}

impl ComponentTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Root of `v` and the parity of `v` relative to that root.
    pub fn find(&mut self, v: VertexId) -> (VertexId, bool) {
        let (root, parity) = self.find_index(v.0);
        (VertexId(root), parity)
    }

    fn find_index(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, parent_parity) = self.find_index(p);
        self.parity[x] ^= parent_parity;
        self.parent[x] = root;
        (root, self.parity[x])
    }

    pub fn same_component(&mut self, u: VertexId, v: VertexId) -> bool {
        self.find(u).0 == self.find(v).0
    }

    pub fn is_bipartite(&mut self, v: VertexId) -> bool {
        let root = self.find(v).0;
        self.bipartite[root.0]
    }

    /// Presents `step`, returning the component count afterwards.
    ///
    /// An odd cycle is not an error: it only clears the bipartite flag of
    /// the resulting component.
    pub fn add_vertex(&mut self, step: &PresentationStep) -> Result<usize, GraphError> {
        step.validate(self.len())?;
        let v = step.vertex.0;
        self.parent.push(v);
        self.rank.push(0);
        self.parity.push(false);
        self.bipartite.push(true);
        self.sides.push([vec![step.vertex], Vec::new()]);
        self.components += 1;
        for &u in &step.pre_neighborhood {
            self.union_opposite(v, u.0);
        }
        Ok(self.components)
    }

    fn union_opposite(&mut self, a: usize, b: usize) {
        let (ra, pa) = self.find_index(a);
        let (rb, pb) = self.find_index(b);
        if ra == rb {
            if pa == pb {
                self.bipartite[ra] = false;
            }
            return;
        }
        // parity of the absorbed root relative to the surviving root, chosen
        // so that `a` and `b` end up on opposite sides
        let link = !(pa ^ pb);
        let (keep, drop) = match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => (rb, ra),
            std::cmp::Ordering::Greater => (ra, rb),
            std::cmp::Ordering::Equal => {
                self.rank[ra] += 1;
                (ra, rb)
            }
        };
        self.parent[drop] = keep;
        self.parity[drop] = link;
        self.bipartite[keep] &= self.bipartite[drop];
        self.components -= 1;

        let [mut d0, mut d1] = std::mem::take(&mut self.sides[drop]);
        if link {
            std::mem::swap(&mut d0, &mut d1);
        }
        for (side, mut incoming) in [(0, d0), (1, d1)] {
            let target = &mut self.sides[keep][side];
            if target.len() < incoming.len() {
                std::mem::swap(target, &mut incoming);
            }
            target.extend(incoming);
        }
    }

    /// Bipartition of `v`'s component as `(same side as v, opposite side)`.
    pub fn component_sides(
        &mut self,
        v: VertexId,
    ) -> Result<(Vec<VertexId>, Vec<VertexId>), GraphError> {
        if v.0 >= self.len() {
            return Err(GraphError::UnknownVertex(v));
        }
        let (root, parity) = self.find(v);
        if !self.bipartite[root.0] {
            return Err(GraphError::NotBipartite(v));
        }
        let [zero, one] = &self.sides[root.0];
        let (same, opposite) = if parity { (one, zero) } else { (zero, one) };
        Ok((same.clone(), opposite.clone()))
    }

    /// Opposite side of `v`'s component, without copying.
    pub fn opposite_side(&mut self, v: VertexId) -> Result<&[VertexId], GraphError> {
        if v.0 >= self.len() {
            return Err(GraphError::UnknownVertex(v));
        }
        let (root, parity) = self.find(v);
        if !self.bipartite[root.0] {
            return Err(GraphError::NotBipartite(v));
        }
        Ok(&self.sides[root.0][usize::from(!parity)])
    }

    /// All members of `v`'s component, in no particular order.
    pub fn component_members(&mut self, v: VertexId) -> Vec<VertexId> {
        let root = self.find(v).0;
        let [a, b] = &self.sides[root.0];
        a.iter().chain(b.iter()).copied().collect()
    }
}

/// Presents `step` to both the graph and its tracker.
pub fn add_vertex(
    graph: &mut OnlineGraph,
    tracker: &mut ComponentTracker,
    step: PresentationStep,
) -> Result<usize, GraphError> {
    step.validate(graph.len())?;
    let count = tracker.add_vertex(&step)?;
    graph.push(step)?;
    Ok(count)
}
