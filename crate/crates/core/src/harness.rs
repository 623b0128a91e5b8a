//! Drives strategies against colorers, checks the resulting traces, and
//! produces sweep tables.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::adversary::{
    cbip_tree_adversary, layered_path_len, AdversaryColor, AdversaryError, StrategySpec,
};
use crate::algorithms::{AlgorithmSpec, Bin, ColorerError};
use crate::graph::{ComponentTracker, GraphError, OnlineGraph, VertexId};
pub use crate::trace::MatchupTrace;
use crate::trace::{TraceError, TraceMeta, TraceRecord};
use crate::verify::{
    self, check_kappa_cb, check_proper, chromatic_number, distinct_labels, girth_at_most,
    max_back_degree, saturation_report, Chromatic, TypeMonitor,
};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error("{algorithm} failed on {vertex}: {source}")]
    Colorer {
        algorithm: String,
        vertex: VertexId,
        source: ColorerError,
    },
    #[error("strategy left {0} without a color")]
    MissingColor(VertexId),
    #[error("strategy returned {got} final colors for {expected} vertices")]
    ColorCount { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Runs a matchup within the default budgets.
pub fn run_matchup(
    strategy: StrategySpec,
    algorithm: AlgorithmSpec,
) -> Result<MatchupTrace, RunError> {
    run_matchup_with(strategy, algorithm, false)
}

/// Runs the adaptive loop: the strategy proposes a vertex, the algorithm
/// bins it, the strategy observes the bin. Stops when the strategy has no
/// further move.
pub fn run_matchup_with(
    strategy: StrategySpec,
    algorithm: AlgorithmSpec,
    allow_large: bool,
) -> Result<MatchupTrace, RunError> {
    strategy.check_budget(allow_large)?;
    let mut adversary = strategy.build()?;
    let mut colorer = algorithm.build();
    let mut tracker = ComponentTracker::new();
    let mut records = Vec::new();
    while let Some(mv) = adversary.propose()? {
        let vertex = mv.step.vertex;
        let bin = colorer
            .decide(&mv.step)
            .map_err(|source| RunError::Colorer {
                algorithm: algorithm.label(),
                vertex,
                source,
            })?;
        adversary.observe(vertex, bin);
        let components = tracker.add_vertex(&mv.step)?;
        records.push(TraceRecord {
            vertex,
            pre: mv.step.pre_neighborhood,
            bin,
            color: mv.color,
            components,
        });
    }
    let final_colors = adversary.final_colors();
    match &final_colors {
        Some(colors) if colors.len() != records.len() => {
            return Err(RunError::ColorCount {
                expected: records.len(),
                got: colors.len(),
            })
        }
        Some(_) => {}
        None => {
            if let Some(r) = records.iter().find(|r| r.color.is_none()) {
                return Err(RunError::MissingColor(r.vertex));
            }
        }
    }
    let meta = TraceMeta {
        strategy,
        algorithm,
        kappa: adversary.declared_kappa(),
        chi: adversary.declared_chi(),
    };
    Ok(MatchupTrace::new(meta, records, final_colors))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome != Outcome::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.outcome == Outcome::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn pass(&mut self, name: &'static str, detail: impl Into<String>) {
        self.push(name, Outcome::Pass, detail);
    }

    fn fail(&mut self, name: &'static str, detail: impl Into<String>) {
        self.push(name, Outcome::Fail, detail);
    }

    fn skip(&mut self, name: &'static str, detail: impl Into<String>) {
        self.push(name, Outcome::Skipped, detail);
    }

    fn check(&mut self, name: &'static str, ok: bool, detail: impl Into<String>) {
        let outcome = if ok { Outcome::Pass } else { Outcome::Fail };
        self.push(name, outcome, detail);
    }

    fn push(&mut self, name: &'static str, outcome: Outcome, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name,
            outcome,
            detail: detail.into(),
        });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match c.outcome {
                Outcome::Pass => "PASS",
                Outcome::Fail => "FAIL",
                Outcome::Skipped => "SKIP",
            };
            writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Vertex count up to which the exact chromatic number is always computed.
pub const CHROMATIC_EXACT_N: usize = 20;
/// Vertex count up to which 3-colorability is decided.
pub const CHROMATIC_THREE_N: usize = 500;

/// Parses a trace file's contents and verifies it.
pub fn verify_trace_text(text: &str) -> Result<VerifyReport, TraceError> {
    Ok(verify_trace(&MatchupTrace::parse(text)?))
}

/// Runs every applicable check on a parsed trace.
pub fn verify_trace(trace: &MatchupTrace) -> VerifyReport {
    let mut report = VerifyReport::default();
    let meta = &trace.meta;
    let strategy = meta.strategy;

    report.check(
        "declared",
        meta.kappa == strategy.kappa() && meta.chi == strategy.chi(),
        format!("kappa={} chi={}", meta.kappa, meta.chi),
    );

    let summary = trace.recompute_summary();
    report.check(
        "summary",
        summary == trace.summary,
        format!(
            "bins_used={} vertices={} max_components={}",
            summary.bins_used, summary.vertices, summary.max_components
        ),
    );

    let steps = trace.steps();
    let bins = trace.bins();
    let graph = match trace.graph() {
        Ok(g) => g,
        Err(e) => {
            report.fail("graph", e.to_string());
            return report;
        }
    };

    let mut colorer = meta.algorithm.build();
    let replay: Result<Vec<Bin>, _> = steps.iter().map(|s| colorer.decide(s)).collect();
    match replay {
        Ok(replayed) => {
            let first = replayed.iter().zip(&bins).position(|(a, b)| a != b);
            match first {
                None => report.pass("replay", format!("{} bins reproduced", bins.len())),
                Some(i) => report.fail(
                    "replay",
                    format!(
                        "v{}: recorded bin {}, algorithm gives {}",
                        i + 1,
                        bins[i],
                        replayed[i]
                    ),
                ),
            }
        }
        Err(e) => report.fail("replay", e.to_string()),
    }

    match run_matchup_with(strategy, meta.algorithm, true) {
        Ok(fresh) if fresh == *trace => report.pass("regenerate", "strategy reproduces the trace"),
        Ok(fresh) => {
            let at = fresh
                .records
                .iter()
                .zip(&trace.records)
                .position(|(a, b)| a != b);
            let detail = match at {
                Some(i) => format!("first differing record: v{}", i + 1),
                None if fresh.records.len() != trace.records.len() => format!(
                    "strategy emits {} vertices, trace has {}",
                    fresh.records.len(),
                    trace.records.len()
                ),
                None => "metadata, colors or summary differ".into(),
            };
            report.fail("regenerate", detail);
        }
        Err(e) => report.fail("regenerate", e.to_string()),
    }

    match verify::component_counts(&steps) {
        Ok(counts) => {
            let recorded: Vec<usize> = trace.records.iter().map(|r| r.components).collect();
            report.check(
                "components",
                counts == recorded,
                "recorded counts match an independent recount",
            );
        }
        Err(e) => report.fail("components", e.to_string()),
    }

    match check_kappa_cb(&steps, meta.kappa) {
        Ok(Ok(())) => report.pass(
            "kappa_cb",
            format!("every prefix has <= {} components", meta.kappa),
        ),
        Ok(Err(v)) => report.fail("kappa_cb", v.to_string()),
        Err(e) => report.fail("kappa_cb", e.to_string()),
    }

    match check_proper(&graph, &bins) {
        Ok(()) => report.pass("algorithm_proper", "no edge inside a bin"),
        Err(e) => report.fail("algorithm_proper", e.to_string()),
    }

    let colors = trace.colors();
    match &colors {
        None => report.fail("adversary_proper", "coloring incomplete"),
        Some(colors) => {
            match check_proper(&graph, colors) {
                Ok(()) => report.pass("adversary_proper", "no monochromatic edge"),
                Err(e) => report.fail("adversary_proper", e.to_string()),
            }
            let used = distinct_labels(colors);
            report.check(
                "adversary_colors",
                used <= meta.chi,
                format!("{used} colors, declared {}", meta.chi),
            );
        }
    }

    chromatic_check(&mut report, &graph, meta.chi);
    strategy_checks(&mut report, trace, &graph, colors.as_deref());

    if meta.algorithm == AlgorithmSpec::Cbip {
        let mut monitor = TypeMonitor::new(meta.kappa);
        let failure = steps
            .iter()
            .zip(&bins)
            .find_map(|(s, &b)| monitor.observe(s, b).err());
        match failure {
            None => report.pass(
                "component_types",
                format!(
                    "every arrival matches the type tables; max l = {}",
                    monitor.max_ell()
                ),
            ),
            Some(e) => report.fail("component_types", e.to_string()),
        }
    }
    report
}

fn chromatic_check(report: &mut VerifyReport, graph: &OnlineGraph, chi: usize) {
    let n = graph.len();
    let limit = if n <= CHROMATIC_EXACT_N {
        n
    } else if chi <= 3 && n <= CHROMATIC_THREE_N {
        3
    } else {
        report.skip(
            "chromatic",
            format!("n={n} is beyond the exact search budget"),
        );
        return;
    };
    match chromatic_number(graph, limit) {
        Chromatic::Exact(k) => report.check("chromatic", k <= chi, format!("chi(G) = {k}")),
        Chromatic::ExceedsLimit => report.fail("chromatic", format!("chi(G) > {limit}")),
        Chromatic::Indeterminate => report.skip("chromatic", "search budget exhausted"),
    }
}

fn strategy_checks(
    report: &mut VerifyReport,
    trace: &MatchupTrace,
    graph: &OnlineGraph,
    colors: Option<&[AdversaryColor]>,
) {
    let bins = trace.bins();
    let used = trace.summary.bins_used;
    let algorithm = trace.meta.algorithm;
    let first_fit = algorithm == AlgorithmSpec::FirstFit;
    match trace.meta.strategy {
        StrategySpec::Clique { n } => {
            report.check("forced_bins", used == n, format!("{used} bins for K_{n}"));
        }
        StrategySpec::FfBipartite2cb { n } if first_fit => {
            let expected: Vec<Bin> = (0..n).map(|i| Bin(i as u32 / 2 + 1)).collect();
            report.check(
                "bin_pattern",
                bins == expected,
                format!("pairs share bins 1..{}", n / 2),
            );
        }
        StrategySpec::Ff3Colorable1cb { rounds } if first_fit => {
            let Some(colors) = colors else {
                report.fail("saturation", "coloring incomplete");
                return;
            };
            match saturation_report(&bins, colors) {
                Ok(sat) => {
                    let saturated = sat.saturated(3);
                    let expected: Vec<Bin> = (1..=rounds as u32).map(Bin).collect();
                    report.check(
                        "saturation",
                        saturated == expected && used == rounds,
                        format!("3-saturated bins: {}", list(&saturated)),
                    );
                }
                Err(e) => report.fail("saturation", e.to_string()),
            }
        }
        StrategySpec::Forest { kappa } if first_fit => {
            report.check(
                "forced_bins",
                used == kappa + 1 && bins.last() == Some(&Bin(kappa as u32 + 1)),
                format!(
                    "{used} bins, last vertex in bin {}",
                    bins.last().map_or(0, |b| b.0)
                ),
            );
        }
        StrategySpec::CbipTree { kappa } if algorithm == AlgorithmSpec::Cbip => {
            cbip_tree_checks(report, kappa, graph, &bins);
        }
        StrategySpec::Universal { t, ck_free } => {
            universal_checks(report, t, ck_free, graph, used);
        }
        _ => {}
    }
}

fn list(bins: &[Bin]) -> String {
    let parts: Vec<String> = bins.iter().map(|b| b.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Per-subtree checks: components within every prefix of each `T_i` and the
/// bin sets of its even and odd levels. `T_1` already needs one component
/// and `T_3` two, so the bound that holds for every `i` is `ceil(i/2)`; it
/// equals `kappa` for the full tree `T_{2 kappa}`.
fn cbip_tree_checks(report: &mut VerifyReport, kappa: usize, graph: &OnlineGraph, bins: &[Bin]) {
    report.check(
        "forced_bins",
        bins.iter().collect::<BTreeSet<_>>().len() == 2 * kappa,
        format!("expected {} bins", 2 * kappa),
    );
    let plan = match cbip_tree_adversary(kappa) {
        Ok(p) => p,
        Err(e) => {
            report.fail("subtrees", e.to_string());
            return;
        }
    };
    if plan.plan.len() != graph.len() {
        report.fail("subtrees", "trace size differs from the construction");
        return;
    }
    let mut cb_failure = None;
    let mut bin_failure = None;
    for sub in &plan.subtrees {
        let i = sub.order;
        let steps: Vec<_> = sub
            .vertices()
            .map(|v| {
                let pre = graph
                    .pre_neighborhood(v)
                    .iter()
                    .filter(|u| sub.contains(**u))
                    .map(|u| VertexId(u.0 - sub.start.0))
                    .collect();
                crate::graph::PresentationStep::new(VertexId(v.0 - sub.start.0), pre)
            })
            .collect();
        match check_kappa_cb(&steps, i.div_ceil(2)) {
            Ok(Ok(())) => {}
            Ok(Err(v)) => {
                cb_failure.get_or_insert(format!("T_{i} at {}: {v}", sub.start));
            }
            Err(e) => {
                cb_failure.get_or_insert(e.to_string());
            }
        }
        let (even, odd) = levels(graph, sub);
        let b = |vs: &[VertexId]| vs.iter().map(|v| bins[v.0].0).collect::<BTreeSet<u32>>();
        let i = i as u32;
        let want_even: BTreeSet<u32> = (1..=i).filter(|&x| x + 1 != i).collect();
        let want_odd: BTreeSet<u32> = (1..i).collect();
        if b(&even) != want_even || b(&odd) != want_odd {
            bin_failure.get_or_insert(format!(
                "T_{i} at {}: even {:?}, odd {:?}",
                sub.start,
                b(&even),
                b(&odd)
            ));
        }
    }
    let count = plan.subtrees.len();
    match cb_failure {
        None => report.pass("subtree_cb", format!("{count} subtrees are ceil(i/2)-CB")),
        Some(d) => report.fail("subtree_cb", d),
    }
    match bin_failure {
        None => report.pass(
            "subtree_bins",
            format!("{count} subtrees match the level bin sets"),
        ),
        Some(d) => report.fail("subtree_bins", d),
    }
}

/// Vertices of a subtree at even and odd distance from its root.
fn levels(graph: &OnlineGraph, sub: &crate::adversary::Subtree) -> (Vec<VertexId>, Vec<VertexId>) {
    let mut depth = vec![None; graph.len()];
    depth[sub.root.0] = Some(0usize);
    let mut queue = std::collections::VecDeque::from([sub.root]);
    let (mut even, mut odd) = (Vec::new(), Vec::new());
    while let Some(u) = queue.pop_front() {
        let d = depth[u.0].expect("queued vertices have a depth");
        if d % 2 == 0 {
            even.push(u)
        } else {
            odd.push(u)
        }
        for &w in graph.neighbors(u) {
            if sub.contains(w) && depth[w.0].is_none() {
                depth[w.0] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    (even, odd)
}

/// Size bound `20 t (t+1)^(t-3)` on the layered construction.
pub fn universal_size_bound(t: usize) -> Option<usize> {
    let power = (t + 1).checked_pow(u32::try_from(t.checked_sub(3)?).ok()?)?;
    20usize.checked_mul(t)?.checked_mul(power)
}

fn universal_checks(
    report: &mut VerifyReport,
    t: usize,
    ck_free: Option<usize>,
    graph: &OnlineGraph,
    used: usize,
) {
    report.check("forced_bins", used >= t, format!("{used} bins, target {t}"));
    let n = graph.len();
    let path_len = layered_path_len(t, ck_free).unwrap_or(0);
    match ck_free {
        None => match universal_size_bound(t) {
            Some(bound) => report.check("size_bound", n <= bound, format!("{n} <= {bound}")),
            None => report.fail("size_bound", "bound overflows"),
        },
        Some(_) => report.skip("size_bound", "the girth variant stretches the path"),
    }
    let order: Vec<VertexId> = graph.vertices().collect();
    match max_back_degree(graph, &order) {
        Ok(d) => report.check(
            "two_inductive",
            d <= 2,
            format!("max later-neighbor count {d}"),
        ),
        Err(e) => report.fail("two_inductive", e.to_string()),
    }
    // apart from the path successor, each vertex has at most one later
    // neighbor: the layer vertex that consumed it
    let shared = graph.vertices().find(|&v| {
        let later = graph
            .neighbors(v)
            .iter()
            .filter(|w| **w > v && !(v.0 + 1 == w.0 && w.0 < path_len))
            .count();
        later > 1
    });
    match shared {
        None => report.pass("single_parent", "no vertex serves two layer vertices"),
        Some(v) => report.fail("single_parent", format!("{v} has several later neighbors")),
    }
    if let Some(k) = ck_free {
        report.check(
            "girth",
            !girth_at_most(graph, k),
            format!("no cycle of length <= {k}"),
        );
    }
}

/// Strategy families that take a single integer parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Clique,
    FfBipartite2cb,
    Ff3Colorable1cb,
    Forest,
    CbipTree,
    Universal { ck_free: Option<usize> },
}

impl Family {
    pub fn spec(self, param: usize) -> StrategySpec {
        match self {
            Family::Clique => StrategySpec::Clique { n: param },
            Family::FfBipartite2cb => StrategySpec::FfBipartite2cb { n: param },
            Family::Ff3Colorable1cb => StrategySpec::Ff3Colorable1cb { rounds: param },
            Family::Forest => StrategySpec::Forest { kappa: param },
            Family::CbipTree => StrategySpec::CbipTree { kappa: param },
            Family::Universal { ck_free } => StrategySpec::Universal { t: param, ck_free },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub param: usize,
    pub vertices: usize,
    pub bins: usize,
    pub components: usize,
}

/// One matchup per parameter, run in parallel; rows come back in parameter
/// order.
pub fn sweep(
    family: Family,
    algorithm: AlgorithmSpec,
    params: impl IntoIterator<Item = usize>,
    allow_large: bool,
) -> Result<Vec<SweepRow>, RunError> {
    let params: Vec<usize> = params.into_iter().collect();
    params
        .into_par_iter()
        .map(|param| {
            let trace = run_matchup_with(family.spec(param), algorithm, allow_large)?;
            Ok(SweepRow {
                param,
                vertices: trace.summary.vertices,
                bins: trace.summary.bins_used,
                components: trace.summary.max_components,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).expect("in-memory csv write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
}

pub fn sweep_json(rows: &[SweepRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forest_three_against_first_fit() {
        let trace =
            run_matchup(StrategySpec::Forest { kappa: 3 }, AlgorithmSpec::FirstFit).unwrap();
        assert_eq!(trace.summary.bins_used, 4);
        assert_eq!(trace.summary.vertices, 8);
        assert_eq!(trace.summary.max_components, 3);
        let report = verify_trace(&trace);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn cbip_tree_two_against_cbip() {
        let trace = run_matchup(StrategySpec::CbipTree { kappa: 2 }, AlgorithmSpec::Cbip).unwrap();
        assert_eq!(trace.summary.bins_used, 4);
        assert_eq!(trace.summary.vertices, 7);
        assert_eq!(trace.summary.max_components, 2);
        let report = verify_trace(&trace);
        assert!(report.passed(), "{report}");
        assert_eq!(report.get("subtree_bins").unwrap().outcome, Outcome::Pass);
    }

    #[test]
    fn universal_three_against_first_fit() {
        let trace = run_matchup(
            StrategySpec::Universal {
                t: 3,
                ck_free: None,
            },
            AlgorithmSpec::FirstFit,
        )
        .unwrap();
        assert!(trace.summary.bins_used >= 3);
        assert_eq!(trace.summary.max_components, 1);
        assert!(trace.final_colors.is_some());
        let report = verify_trace(&trace);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn cbip_rejects_odd_cycles_as_run_error() {
        let err = run_matchup(StrategySpec::Clique { n: 3 }, AlgorithmSpec::Cbip).unwrap_err();
        assert!(matches!(
            err,
            RunError::Colorer {
                source: ColorerError::NotBipartite(_),
                ..
            }
        ));
    }

    #[test]
    fn corrupted_bin_fails_replay() {
        let mut trace =
            run_matchup(StrategySpec::Forest { kappa: 3 }, AlgorithmSpec::FirstFit).unwrap();
        trace.records[2].bin = Bin(3);
        let report = verify_trace(&trace);
        assert_eq!(report.get("replay").unwrap().outcome, Outcome::Fail);
    }

    #[test]
    fn three_colorable_saturation_check() {
        let trace = run_matchup(
            StrategySpec::Ff3Colorable1cb { rounds: 3 },
            AlgorithmSpec::FirstFit,
        )
        .unwrap();
        let report = verify_trace(&trace);
        assert!(report.passed(), "{report}");
        let sat = report.get("saturation").unwrap();
        assert_eq!(sat.outcome, Outcome::Pass);
        assert_eq!(sat.detail, "3-saturated bins: [1,2,3]");
    }

    #[test]
    fn size_bound_values() {
        assert_eq!(universal_size_bound(3), Some(60));
        assert_eq!(universal_size_bound(4), Some(400));
        assert_eq!(universal_size_bound(2), None);
    }

    #[test]
    fn sweep_forest_rows() {
        let rows = sweep(Family::Forest, AlgorithmSpec::FirstFit, 1..=4, false).unwrap();
        let bins: Vec<usize> = rows.iter().map(|r| r.bins).collect();
        assert_eq!(bins, vec![2, 3, 4, 5]);
        let csv = sweep_csv(&rows);
        assert!(csv.starts_with("param,vertices,bins,components\n1,2,2,1\n"));
    }
}
