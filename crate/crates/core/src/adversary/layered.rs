//! Layered adversary that forces any online algorithm to open `t` bins on a
//! 3-colorable graph while keeping a single component.
//!
//! Layer `L_1` is a path. Two non-adjacent reservoirs are drawn from its two
//! most populous bins. Every vertex of layer `L_i` is joined to one fresh
//! vertex from each of the reservoirs `B'_1..B'_i`, so it cannot reuse any of
//! their bins; the most populous bin of the layer then seeds `B'_{i+1}`.
//! The single vertex of `L_{t-1}` lands in a `t`-th bin. The construction
//! stops as soon as `t` distinct bins have appeared.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{AdversaryColor, AdversaryError, AdversaryMove, Strategy, StrategySpec};
use crate::algorithms::{AlgorithmSpec, Bin};
use crate::graph::{PresentationStep, VertexId};
use crate::harness::{run_matchup, MatchupTrace, RunError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayeredConfig {
    /// Number of bins to force; at least 3.
    pub t: usize,
    /// When set to `k`, no cycle of length `<= k` is created.
    pub ck_free: Option<usize>,
}

/// Layer sizes `l_1..l_{t-1}` (index 0 holds `l_1`).
///
/// `l_{t-1} = 1`, `l_i = t (t+1)^(t-i-2)` for `2 <= i <= t-2` and
/// `l_1 = 10 t (t+1)^(t-3)`. Each budget meets its reservoir inequality with
/// equality, which is re-checked here with floors.
pub fn layer_budgets(t: usize) -> Result<Vec<usize>, AdversaryError> {
    if t < 3 {
        return Err(AdversaryError::InvalidParameter(format!(
            "universal adversary needs t >= 3, got {t}"
        )));
    }
    let overflow = || AdversaryError::OverBudget(format!("layer sizes for t={t} overflow"));
    let pow = |e: usize| -> Result<usize, AdversaryError> {
        (t + 1)
            .checked_pow(u32::try_from(e).map_err(|_| overflow())?)
            .ok_or_else(overflow)
    };
    let mut budgets = vec![0usize; t - 1];
    budgets[0] = pow(t - 3)?.checked_mul(10 * t).ok_or_else(overflow)?;
    for i in 2..=t.saturating_sub(2) {
        budgets[i - 1] = pow(t - i - 2)?.checked_mul(t).ok_or_else(overflow)?;
    }
    budgets[t - 2] = 1;

    let tail = |from: usize| -> usize { budgets[from - 1..].iter().sum() };
    for i in 2..=t - 2 {
        if budgets[i - 1] / t < tail(i + 1) {
            return Err(AdversaryError::BudgetInfeasible { layer: i });
        }
    }
    if budgets[0] / (10 * t) < tail(2) {
        return Err(AdversaryError::BudgetInfeasible { layer: 1 });
    }
    Ok(budgets)
}

/// Length of the path layer. The `C_k`-free variant stretches it by `k + 1`
/// so that the wider exclusion radius still leaves full reservoirs.
pub fn layered_path_len(t: usize, ck_free: Option<usize>) -> Result<usize, AdversaryError> {
    let base = layer_budgets(t)?[0];
    match ck_free {
        None => Ok(base),
        Some(k) => base
            .checked_mul(k + 1)
            .ok_or_else(|| AdversaryError::OverBudget(format!("path for t={t}, k={k}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Path,
    Layer(usize),
    Finished,
}

#[derive(Debug, Clone)]
struct Reservoir {
    bin: Bin,
    vertices: VecDeque<VertexId>,
}

/// Adaptive state of the layered construction.
#[derive(Debug, Clone)]
pub struct LayeredAdversary {
    t: usize,
    radius: usize,
    path_len: usize,
    budgets: Vec<usize>,
    phase: Phase,
    steps: Vec<PresentationStep>,
    bins: Vec<Option<Bin>>,
    distinct: BTreeSet<Bin>,
    reservoirs: Vec<Reservoir>,
    layer_members: Vec<VertexId>,
    parent: Vec<Option<VertexId>>,
    colors: Option<Vec<AdversaryColor>>,
}

impl LayeredAdversary {
    pub fn new(config: LayeredConfig) -> Result<Self, AdversaryError> {
        if let Some(k) = config.ck_free {
            if k < 3 {
                return Err(AdversaryError::InvalidParameter(format!(
                    "ck_free needs k >= 3, got {k}"
                )));
            }
        }
        let budgets = layer_budgets(config.t)?;
        Ok(Self {
            t: config.t,
            radius: config.ck_free.unwrap_or(1),
            path_len: layered_path_len(config.t, config.ck_free)?,
            budgets,
            phase: Phase::Path,
            steps: Vec::new(),
            bins: Vec::new(),
            distinct: BTreeSet::new(),
            reservoirs: Vec::new(),
            layer_members: Vec::new(),
            parent: Vec::new(),
            colors: None,
        })
    }

    pub fn path_len(&self) -> usize {
        self.path_len
    }

    /// Bins chosen for `B'_1, B'_2, ...` so far.
    pub fn reservoir_bins(&self) -> Vec<Bin> {
        self.reservoirs.iter().map(|r| r.bin).collect()
    }

    /// The vertex that consumed each vertex, if any.
    pub fn parents(&self) -> &[Option<VertexId>] {
        &self.parent
    }

    fn reservoir_target(&self) -> usize {
        // reservoir sizes come from the unstretched path length
        self.budgets[0] / (10 * self.t)
    }

    fn next_id(&self) -> VertexId {
        VertexId(self.steps.len())
    }

    fn emit(&mut self, pre: Vec<VertexId>, done: bool) -> AdversaryMove {
        let step = PresentationStep::new(self.next_id(), pre);
        self.steps.push(step.clone());
        self.bins.push(None);
        self.parent.push(None);
        AdversaryMove {
            step,
            color: None,
            done,
        }
    }

    fn bin_of(&self, v: VertexId) -> Bin {
        self.bins[v.0].expect("bins are observed before the next move")
    }

    /// Most populous bin among `members`; ties go to the lowest bin.
    fn fullest_bins(&self, members: &[VertexId]) -> Vec<(Bin, Vec<VertexId>)> {
        let mut by_bin: BTreeMap<Bin, Vec<VertexId>> = BTreeMap::new();
        for &v in members {
            by_bin.entry(self.bin_of(v)).or_default().push(v);
        }
        let mut ranked: Vec<_> = by_bin.into_iter().collect();
        ranked.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));
        ranked
    }

    /// Draws `B'_1` and `B'_2` from the path by alternating picks; each pick
    /// removes every path vertex within `radius` of it from both candidate
    /// lists.
    fn extract_path_reservoirs(&mut self) -> Result<(), AdversaryError> {
        let path: Vec<VertexId> = (0..self.path_len).map(VertexId).collect();
        let ranked = self.fullest_bins(&path);
        if ranked.len() < 2 {
            return Err(AdversaryError::DegeneratePath);
        }
        let target = self.reservoir_target();
        let mut excluded = vec![false; self.path_len];
        let mut cursors = [0usize; 2];
        let mut picked: [Vec<VertexId>; 2] = [Vec::new(), Vec::new()];
        for _ in 0..target {
            for side in 0..2 {
                let candidates = &ranked[side].1;
                while cursors[side] < candidates.len() && excluded[candidates[cursors[side]].0] {
                    cursors[side] += 1;
                }
                let Some(&v) = candidates.get(cursors[side]) else {
                    return Err(AdversaryError::ReservoirUnderflow {
                        reservoir: side + 1,
                        needed: target,
                        available: picked[side].len(),
                    });
                };
                picked[side].push(v);
                let lo = v.0.saturating_sub(self.radius);
                let hi = (v.0 + self.radius).min(self.path_len - 1);
                excluded[lo..=hi].iter_mut().for_each(|x| *x = true);
            }
        }
        for (side, vertices) in picked.into_iter().enumerate() {
            self.reservoirs.push(Reservoir {
                bin: ranked[side].0,
                vertices: vertices.into(),
            });
        }
        Ok(())
    }

    /// Seeds `B'_{i+1}` from the layer just finished.
    fn seal_layer(&mut self, layer: usize) -> Result<(), AdversaryError> {
        let needed = self.budgets[layer - 1] / self.t;
        let members = std::mem::take(&mut self.layer_members);
        let ranked = self.fullest_bins(&members);
        let (bin, vertices) = ranked.into_iter().next().unwrap_or((Bin(1), Vec::new()));
        if vertices.len() < needed {
            return Err(AdversaryError::ReservoirUnderflow {
                reservoir: layer + 1,
                needed,
                available: vertices.len(),
            });
        }
        self.reservoirs.push(Reservoir {
            bin,
            vertices: vertices.into_iter().take(needed).collect(),
        });
        Ok(())
    }

    fn finish(&mut self) {
        self.phase = Phase::Finished;
        self.colors = Some(self.three_coloring());
    }

    /// Two-colors the parent forest, then greedily colors the remaining path
    /// vertices, each of which has at most two neighbors.
    fn three_coloring(&self) -> Vec<AdversaryColor> {
        let n = self.steps.len();
        let mut forest: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for step in self.steps.iter().skip(self.path_len) {
            for &u in &step.pre_neighborhood {
                forest[u.0].push(step.vertex);
                forest[step.vertex.0].push(u);
            }
        }
        let mut color: Vec<Option<AdversaryColor>> = vec![None; n];
        for start in (0..n).rev() {
            if color[start].is_some() || forest[start].is_empty() {
                continue;
            }
            color[start] = Some(AdversaryColor::RED);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let other = if color[u] == Some(AdversaryColor::RED) {
                    AdversaryColor::GREEN
                } else {
                    AdversaryColor::RED
                };
                for &w in &forest[u] {
                    if color[w.0].is_none() {
                        color[w.0] = Some(other);
                        queue.push_back(w.0);
                    }
                }
            }
        }
        for v in 0..n.min(self.path_len) {
            if color[v].is_some() {
                continue;
            }
            let taken: Vec<AdversaryColor> = [v.checked_sub(1), Some(v + 1)]
                .into_iter()
                .flatten()
                .filter(|&w| w < n.min(self.path_len))
                .filter_map(|w| color[w])
                .collect();
            let free = (1..)
                .map(AdversaryColor)
                .find(|c| !taken.contains(c))
                .expect("a free color exists");
            color[v] = Some(free);
        }
        color
            .into_iter()
            .map(|c| c.expect("every vertex is colored"))
            .collect()
    }
}

impl Strategy for LayeredAdversary {
    fn propose(&mut self) -> Result<Option<AdversaryMove>, AdversaryError> {
        if self.phase != Phase::Finished && self.distinct.len() >= self.t {
            self.finish();
        }
        loop {
            match self.phase {
                Phase::Finished => return Ok(None),
                Phase::Path => {
                    let n = self.steps.len();
                    if n < self.path_len {
                        let pre = n.checked_sub(1).map(VertexId).into_iter().collect();
                        return Ok(Some(self.emit(pre, false)));
                    }
                    self.extract_path_reservoirs()?;
                    self.phase = Phase::Layer(2);
                }
                Phase::Layer(i) => {
                    if self.layer_members.len() < self.budgets[i - 1] {
                        let mut pre = Vec::with_capacity(i);
                        for (j, reservoir) in self.reservoirs.iter_mut().take(i).enumerate() {
                            let u = reservoir.vertices.pop_front().ok_or(
                                AdversaryError::ReservoirUnderflow {
                                    reservoir: j + 1,
                                    needed: 1,
                                    available: 0,
                                },
                            )?;
                            pre.push(u);
                        }
                        pre.sort_unstable();
                        let last_layer = i == self.t - 1;
                        let done =
                            last_layer && self.layer_members.len() + 1 == self.budgets[i - 1];
                        let mv = self.emit(pre, done);
                        for u in &mv.step.pre_neighborhood {
                            debug_assert!(self.parent[u.0].is_none(), "vertex consumed twice");
                            self.parent[u.0] = Some(mv.step.vertex);
                        }
                        self.layer_members.push(mv.step.vertex);
                        return Ok(Some(mv));
                    }
                    if i == self.t - 1 {
                        self.finish();
                    } else {
                        self.seal_layer(i)?;
                        self.phase = Phase::Layer(i + 1);
                    }
                }
            }
        }
    }

    fn observe(&mut self, vertex: VertexId, bin: Bin) {
        if let Some(slot) = self.bins.get_mut(vertex.0) {
            *slot = Some(bin);
            self.distinct.insert(bin);
        }
    }

    fn final_colors(&mut self) -> Option<Vec<AdversaryColor>> {
        self.colors.clone()
    }

    fn declared_kappa(&self) -> usize {
        1
    }

    fn declared_chi(&self) -> usize {
        3
    }
}

/// Plays the layered construction against `algorithm`.
pub fn universal_layered_adversary(
    t: usize,
    algorithm: AlgorithmSpec,
    ck_free: Option<usize>,
) -> Result<MatchupTrace, RunError> {
    run_matchup(StrategySpec::Universal { t, ck_free }, algorithm)
}
