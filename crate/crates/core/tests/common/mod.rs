//! Random instance generators and brute-force oracles shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::VecDeque;

use kcb::{OnlineGraph, PresentationStep, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random presentation of a bipartite graph on `n` vertices in which no
/// prefix has more than `kappa` components.
pub fn random_kcb_bipartite(seed: u64, n: usize, kappa: usize) -> Vec<PresentationStep> {
    assert!(kappa >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hidden: Vec<bool> = Vec::with_capacity(n);
    let mut parent: Vec<usize> = Vec::with_capacity(n);
    let mut components = 0usize;
    let isolated_bias = rng.gen_range(0.0..0.5);
    let max_degree = rng.gen_range(1..=5);
    let mut steps = Vec::with_capacity(n);
    for v in 0..n {
        let mut side = rng.gen_bool(0.5);
        let opposite = |s: bool, hidden: &[bool]| -> Vec<usize> {
            (0..hidden.len()).filter(|&u| hidden[u] != s).collect()
        };
        let mut candidates = opposite(side, &hidden);
        if candidates.is_empty() && v > 0 {
            side = !side;
            candidates = opposite(side, &hidden);
        }
        let want_isolated = v == 0 || (components < kappa && rng.gen_bool(isolated_bias));
        let mut pre = Vec::new();
        if !want_isolated && !candidates.is_empty() {
            let k = rng.gen_range(1..=max_degree.min(candidates.len()));
            pre = candidates.choose_multiple(&mut rng, k).copied().collect();
        }
        if pre.is_empty() && components == kappa {
            pre.push(
                *candidates
                    .choose(&mut rng)
                    .expect("a full prefix has an opposite vertex"),
            );
        }
        pre.sort_unstable();
        hidden.push(side);
        parent.push(v);
        components += 1;
        for &u in &pre {
            let (a, b) = (root(&mut parent, u), root(&mut parent, v));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        steps.push(PresentationStep::new(
            VertexId(v),
            pre.into_iter().map(VertexId).collect(),
        ));
    }
    steps
}

fn root(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        v = parent[v];
    }
    v
}

/// A random presentation of a general graph: each earlier vertex is a
/// pre-neighbor with probability `p`.
pub fn random_graph(seed: u64, n: usize, p: f64) -> Vec<PresentationStep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|v| {
            let pre = (0..v).filter(|_| rng.gen_bool(p)).map(VertexId).collect();
            PresentationStep::new(VertexId(v), pre)
        })
        .collect()
}

pub fn graph_of(steps: &[PresentationStep]) -> OnlineGraph {
    OnlineGraph::from_steps(steps.iter().cloned()).expect("generated steps are well-formed")
}

/// Components of the first `len` vertices by breadth-first search.
pub fn bfs_components(graph: &OnlineGraph, len: usize) -> usize {
    let mut seen = vec![false; len];
    let mut count = 0;
    for s in 0..len {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for w in graph.neighbors(VertexId(u)) {
                if w.0 < len && !seen[w.0] {
                    seen[w.0] = true;
                    queue.push_back(w.0);
                }
            }
        }
    }
    count
}

/// Two-coloring by BFS, or `None` if some component has an odd cycle.
pub fn bfs_two_coloring(graph: &OnlineGraph) -> Option<Vec<bool>> {
    let n = graph.len();
    let mut side: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for w in graph.neighbors(VertexId(u)) {
                match side[w.0] {
                    None => {
                        side[w.0] = side[u].map(|x| !x);
                        queue.push_back(w.0);
                    }
                    x if x == side[u] => return None,
                    _ => {}
                }
            }
        }
    }
    side.into_iter().collect()
}

/// Chromatic number by enumerating every set partition of the vertices
/// (restricted growth strings) and keeping the proper ones.
pub fn exhaustive_chromatic(graph: &OnlineGraph) -> usize {
    let n = graph.len();
    if n == 0 {
        return 0;
    }
    let edges: Vec<(usize, usize)> = graph.edges().map(|(u, v)| (u.0, v.0)).collect();
    let mut best = n;
    let mut labels = vec![0usize; n];
    fn walk(
        i: usize,
        blocks: usize,
        labels: &mut [usize],
        edges: &[(usize, usize)],
        best: &mut usize,
    ) {
        if blocks >= *best {
            return;
        }
        if i == labels.len() {
            if edges.iter().all(|&(u, v)| labels[u] != labels[v]) {
                *best = blocks;
            }
            return;
        }
        for c in 0..=blocks {
            labels[i] = c;
            walk(i + 1, blocks.max(c + 1), labels, edges, best);
        }
    }
    walk(0, 0, &mut labels, &edges, &mut best);
    best
}
