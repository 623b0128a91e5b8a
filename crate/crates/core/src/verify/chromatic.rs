//! Exact chromatic number by iterative deepening on the color count with
//! DSATUR-ordered backtracking.

use std::collections::VecDeque;

use serde::Serialize;

use crate::graph::OnlineGraph;

/// Search nodes allowed per query unless a budget is given.
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Chromatic {
    Exact(usize),
    ExceedsLimit,
    /// The node budget ran out before the answer was settled.
    Indeterminate,
}

pub fn chromatic_number(graph: &OnlineGraph, limit: usize) -> Chromatic {
    chromatic_number_with_budget(graph, limit, DEFAULT_NODE_BUDGET)
}

pub fn chromatic_number_with_budget(graph: &OnlineGraph, limit: usize, budget: u64) -> Chromatic {
    let within = |k: usize| {
        if k <= limit {
            Chromatic::Exact(k)
        } else {
            Chromatic::ExceedsLimit
        }
    };
    if graph.is_empty() {
        return within(0);
    }
    if graph.edge_count() == 0 {
        return within(1);
    }
    if is_bipartite(graph) {
        return within(2);
    }
    let lower = greedy_clique(graph).max(3);
    let mut search = Search::new(graph, budget);
    for k in lower..=limit.min(graph.len()) {
        match search.colorable(k) {
            Some(true) => return Chromatic::Exact(k),
            Some(false) => {}
            None => return Chromatic::Indeterminate,
        }
    }
    Chromatic::ExceedsLimit
}

fn is_bipartite(graph: &OnlineGraph) -> bool {
    let mut side: Vec<Option<bool>> = vec![None; graph.len()];
    for start in graph.vertices() {
        if side[start.0].is_some() {
            continue;
        }
        side[start.0] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let su = side[u.0];
            for &w in graph.neighbors(u) {
                match side[w.0] {
                    None => {
                        side[w.0] = su.map(|s| !s);
                        queue.push_back(w);
                    }
                    s if s == su => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// Size of the largest clique found by growing greedily from each vertex.
fn greedy_clique(graph: &OnlineGraph) -> usize {
    let mut best = usize::from(!graph.is_empty());
    for v in graph.vertices() {
        let mut nbrs: Vec<_> = graph.neighbors(v).to_vec();
        nbrs.sort_by_key(|&w| std::cmp::Reverse(graph.degree(w)));
        let mut clique = vec![v];
        for w in nbrs {
            if clique.iter().all(|&c| graph.has_edge(c, w)) {
                clique.push(w);
            }
        }
        best = best.max(clique.len());
    }
    best
}

struct Search {
    adj: Vec<Vec<usize>>,
    color: Vec<Option<usize>>,
    /// `counts[v][c]`: neighbors of `v` holding color `c`.
    counts: Vec<Vec<u32>>,
    saturation: Vec<usize>,
    nodes_left: u64,
}

impl Search {
    fn new(graph: &OnlineGraph, budget: u64) -> Self {
        let adj = graph
            .vertices()
            .map(|v| graph.neighbors(v).iter().map(|w| w.0).collect())
            .collect();
        Self {
            adj,
            color: Vec::new(),
            counts: Vec::new(),
            saturation: Vec::new(),
            nodes_left: budget,
        }
    }

    fn colorable(&mut self, k: usize) -> Option<bool> {
        let n = self.adj.len();
        self.color = vec![None; n];
        self.counts = vec![vec![0; k]; n];
        self.saturation = vec![0; n];
        self.solve(0, 0, k)
    }

    fn pick(&self) -> usize {
        (0..self.adj.len())
            .filter(|&v| self.color[v].is_none())
            .max_by_key(|&v| (self.saturation[v], self.adj[v].len(), std::cmp::Reverse(v)))
            .expect("called with an uncolored vertex left")
    }

    fn set(&mut self, v: usize, c: usize) {
        self.color[v] = Some(c);
        for i in 0..self.adj[v].len() {
            let w = self.adj[v][i];
            if self.counts[w][c] == 0 {
                self.saturation[w] += 1;
            }
            self.counts[w][c] += 1;
        }
    }

    fn unset(&mut self, v: usize, c: usize) {
        self.color[v] = None;
        for i in 0..self.adj[v].len() {
            let w = self.adj[v][i];
            self.counts[w][c] -= 1;
            if self.counts[w][c] == 0 {
                self.saturation[w] -= 1;
            }
        }
    }

    fn solve(&mut self, colored: usize, used: usize, k: usize) -> Option<bool> {
        if colored == self.adj.len() {
            return Some(true);
        }
        if self.nodes_left == 0 {
            return None;
        }
        self.nodes_left -= 1;
        let v = self.pick();
        // a fresh color is interchangeable with any other fresh color
        for c in 0..k.min(used + 1) {
            if self.counts[v][c] != 0 {
                continue;
            }
            self.set(v, c);
            let found = self.solve(colored + 1, used.max(c + 1), k);
            self.unset(v, c);
            if found != Some(false) {
                return found;
            }
        }
        Some(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{PresentationStep, VertexId};

    fn graph(n: usize, edges: &[(usize, usize)]) -> OnlineGraph {
        let steps = (0..n).map(|v| {
            let mut pre: Vec<VertexId> = edges
                .iter()
                .filter_map(|&(a, b)| match (a.max(b) == v, a.min(b)) {
                    (true, u) => Some(VertexId(u)),
                    _ => None,
                })
                .collect();
            pre.sort();
            PresentationStep::new(VertexId(v), pre)
        });
        OnlineGraph::from_steps(steps).unwrap()
    }

    fn cycle(n: usize) -> OnlineGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        graph(n, &edges)
    }

    #[test]
    fn small_cases() {
        assert_eq!(chromatic_number(&graph(0, &[]), 5), Chromatic::Exact(0));
        assert_eq!(chromatic_number(&graph(3, &[]), 5), Chromatic::Exact(1));
        assert_eq!(chromatic_number(&cycle(6), 5), Chromatic::Exact(2));
        assert_eq!(chromatic_number(&cycle(5), 5), Chromatic::Exact(3));
    }

    #[test]
    fn complete_graph_and_limit() {
        let edges: Vec<_> = (0..5).flat_map(|i| (0..i).map(move |j| (j, i))).collect();
        let k5 = graph(5, &edges);
        assert_eq!(chromatic_number(&k5, 5), Chromatic::Exact(5));
        assert_eq!(chromatic_number(&k5, 4), Chromatic::ExceedsLimit);
    }

    #[test]
    fn petersen_is_three() {
        let mut edges: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.extend((0..5).map(|i| (i, i + 5)));
        edges.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
        assert_eq!(
            chromatic_number(&graph(10, &edges), 10),
            Chromatic::Exact(3)
        );
    }

    #[test]
    fn grotzsch_is_four() {
        // Mycielskian of C5: triangle-free, chromatic number 4
        let mut edges: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        for i in 0..5 {
            edges.push((5 + i, (i + 1) % 5));
            edges.push((5 + i, (i + 4) % 5));
            edges.push((5 + i, 10));
        }
        assert_eq!(
            chromatic_number(&graph(11, &edges), 11),
            Chromatic::Exact(4)
        );
    }

    #[test]
    fn zero_budget_is_indeterminate() {
        assert_eq!(
            chromatic_number_with_budget(&cycle(5), 5, 0),
            Chromatic::Indeterminate
        );
    }
}
