mod common;

use std::collections::BTreeSet;

use common::*;
use kcb::adversary::{
    cbip_tree_adversary, clique_adversary, ff_3colorable_1cb, ff_bipartite_2cb, forest_adversary,
    layer_budgets, universal_layered_adversary,
};
use kcb::algorithms::{color_all, Cbip, FirstFit};
use kcb::graph::ComponentTracker;
use kcb::harness::{run_matchup, sweep, universal_size_bound, verify_trace, Family, Outcome};
use kcb::verify::{
    self, chromatic_number, girth_at_most, max_back_degree, saturation_report, Chromatic,
};
use kcb::{AdversaryColor, AlgorithmSpec, Bin, StrategySpec, VertexId};

fn bins(xs: &[u32]) -> Vec<Bin> {
    xs.iter().copied().map(Bin).collect()
}

fn bin_set(b: &[Bin], vs: impl IntoIterator<Item = VertexId>) -> BTreeSet<u32> {
    vs.into_iter().map(|v| b[v.0].0).collect()
}

#[test]
fn figure_1a_bins_and_counts() {
    let plan = ff_bipartite_2cb(8).unwrap();
    let steps: Vec<_> = plan.steps().cloned().collect();
    let ff = color_all(&mut FirstFit::new(), &steps).unwrap();
    assert_eq!(ff, bins(&[1, 1, 2, 2, 3, 3, 4, 4]));
    let mut tracker = ComponentTracker::new();
    let counts: Vec<usize> = steps
        .iter()
        .map(|s| tracker.add_vertex(s).unwrap())
        .collect();
    let graph = graph_of(&steps);
    let bfs: Vec<usize> = (1..=8).map(|i| bfs_components(&graph, i)).collect();
    assert_eq!(counts, bfs);
    assert_eq!(counts, vec![1, 2, 2, 2, 1, 1, 1, 1]);
    assert!(counts.iter().all(|&c| c <= 2));
}

#[test]
fn ff_bipartite_two_vertices() {
    let plan = ff_bipartite_2cb(2).unwrap();
    let steps: Vec<_> = plan.steps().cloned().collect();
    assert_eq!(
        color_all(&mut FirstFit::new(), &steps).unwrap(),
        bins(&[1, 1])
    );
}

#[test]
fn clique_examples() {
    let one = run_matchup(StrategySpec::Clique { n: 1 }, AlgorithmSpec::FirstFit).unwrap();
    assert_eq!(one.summary.bins_used, 1);
    for alg in [AlgorithmSpec::FirstFit, AlgorithmSpec::Baseline { seed: 5 }] {
        let tri = run_matchup(StrategySpec::Clique { n: 3 }, alg).unwrap();
        assert_eq!(tri.summary.bins_used, 3);
        assert_eq!(tri.summary.max_components, 1);
    }
    let ten = run_matchup(StrategySpec::Clique { n: 10 }, AlgorithmSpec::FirstFit).unwrap();
    assert_eq!(ten.summary.bins_used, 10);
    assert!(ten.records.iter().all(|r| r.components == 1));
    assert_eq!(clique_adversary(10).unwrap().len(), 10);
}

#[test]
fn three_colorable_examples() {
    let plan = ff_3colorable_1cb(2).unwrap();
    let steps: Vec<_> = plan.steps().cloned().collect();
    let b = color_all(&mut FirstFit::new(), &steps).unwrap();
    assert_eq!(b, bins(&[1, 2, 1, 2, 1, 2]));
    let sat = saturation_report(&b, &plan.colors()).unwrap();
    assert_eq!(sat.saturated(3), bins(&[1, 2]));

    let plan = ff_3colorable_1cb(4).unwrap();
    let steps: Vec<_> = plan.steps().cloned().collect();
    let b = color_all(&mut FirstFit::new(), &steps).unwrap();
    assert_eq!(b.iter().collect::<BTreeSet<_>>().len(), 4);
    for k in 3..=4u32 {
        let i = 3 * k as usize;
        assert_eq!(&b[i - 3..i], &bins(&[k, k, k])[..]);
    }
    let graph = plan.graph();
    let colors = plan.colors();
    assert_eq!(verify::check_proper(&graph, &colors), Ok(()));
    assert_eq!(verify::distinct_labels(&colors), 3);
    assert_eq!(exhaustive_chromatic(&graph), 3);
    assert_eq!(chromatic_number(&graph, 12), Chromatic::Exact(3));
}

#[test]
fn saturated_color_classes_spread_over_all_bins() {
    // with r saturated bins, each color class has r vertices in r distinct bins
    for rounds in [2, 3, 5, 10] {
        let plan = ff_3colorable_1cb(rounds).unwrap();
        let steps: Vec<_> = plan.steps().cloned().collect();
        let b = color_all(&mut FirstFit::new(), &steps).unwrap();
        let colors = plan.colors();
        for c in [
            AdversaryColor::RED,
            AdversaryColor::GREEN,
            AdversaryColor::BLUE,
        ] {
            let class: Vec<Bin> = (0..b.len())
                .filter(|&v| colors[v] == c)
                .map(|v| b[v])
                .collect();
            assert_eq!(class.len(), rounds);
            assert_eq!(class.iter().collect::<BTreeSet<_>>().len(), rounds);
        }
    }
}

#[test]
fn forest_examples() {
    let one = forest_adversary(1, AlgorithmSpec::FirstFit).unwrap();
    assert_eq!((one.summary.vertices, one.summary.bins_used), (2, 2));
    let three = forest_adversary(3, AlgorithmSpec::FirstFit).unwrap();
    assert_eq!(three.summary.vertices, 8);
    assert_eq!(three.summary.bins_used, 4);
    assert!(three.records.iter().all(|r| r.components <= 3));
    // S(1) = 1, S(k+1) = 2 S(k) + 1, plus the final vertex
    let mut s = 1;
    for kappa in 1..=10 {
        let trace = forest_adversary(kappa, AlgorithmSpec::FirstFit).unwrap();
        assert_eq!(trace.summary.vertices, s + 1);
        s = 2 * s + 1;
    }
}

#[test]
fn cbip_tree_examples() {
    let t2 = cbip_tree_adversary(1).unwrap();
    let steps: Vec<_> = t2.plan.steps().cloned().collect();
    assert_eq!(color_all(&mut Cbip::new(), &steps).unwrap(), bins(&[1, 2]));

    let t4 = cbip_tree_adversary(2).unwrap();
    let steps: Vec<_> = t4.plan.steps().cloned().collect();
    assert_eq!(steps.len(), 7);
    let b = color_all(&mut Cbip::new(), &steps).unwrap();
    let root = t4.subtrees.last().unwrap().root;
    assert_eq!(b[root.0], Bin(4));
    let graph = graph_of(&steps);
    let sides = bfs_two_coloring(&graph).unwrap();
    let even = (0..7).filter(|&v| sides[v] == sides[root.0]).map(VertexId);
    let odd = (0..7).filter(|&v| sides[v] != sides[root.0]).map(VertexId);
    assert_eq!(bin_set(&b, even), BTreeSet::from([1, 2, 4]));
    assert_eq!(bin_set(&b, odd), BTreeSet::from([1, 2, 3]));
    assert!(verify::component_counts(&steps)
        .unwrap()
        .iter()
        .all(|&c| c <= 2));

    let t6 = cbip_tree_adversary(3).unwrap();
    let steps: Vec<_> = t6.plan.steps().cloned().collect();
    assert_eq!(steps.len(), 20);
    let b = color_all(&mut Cbip::new(), &steps).unwrap();
    assert_eq!(b.iter().collect::<BTreeSet<_>>().len(), 6);
    let root = t6.subtrees.last().unwrap().root;
    let sides = bfs_two_coloring(&graph_of(&steps)).unwrap();
    let even = (0..20).filter(|&v| sides[v] == sides[root.0]).map(VertexId);
    let odd = (0..20).filter(|&v| sides[v] != sides[root.0]).map(VertexId);
    assert_eq!(bin_set(&b, odd), (1..=5).collect());
    assert_eq!(bin_set(&b, even), BTreeSet::from([1, 2, 3, 4, 6]));
}

#[test]
fn universal_three_against_first_fit() {
    assert_eq!(layer_budgets(3).unwrap(), vec![30, 1]);
    let trace = universal_layered_adversary(3, AlgorithmSpec::FirstFit, None).unwrap();
    assert!(trace.summary.bins_used >= 3);
    assert!(trace.summary.vertices <= 60);
    let b = trace.bins();
    let alternating: Vec<Bin> = (0..30).map(|i| Bin(i % 2 + 1)).collect();
    assert_eq!(&b[..30], &alternating[..]);
    let last = trace.records.last().unwrap();
    assert_eq!(trace.records.len(), 31);
    assert_eq!(
        bin_set(&b, last.pre.iter().copied()),
        BTreeSet::from([1, 2])
    );
    assert_eq!(last.bin, Bin(3));
    let graph = trace.graph().unwrap();
    let c = chromatic_number(&graph, 3);
    assert!(matches!(c, Chromatic::Exact(k) if k <= 3), "{c:?}");
}

#[test]
fn universal_four_against_baselines() {
    for seed in 0..20 {
        let trace = universal_layered_adversary(4, AlgorithmSpec::Baseline { seed }, None).unwrap();
        assert!(trace.summary.bins_used >= 4, "seed {seed}");
        let c = chromatic_number(&trace.graph().unwrap(), 3);
        assert!(
            matches!(c, Chromatic::Exact(k) if k <= 3),
            "seed {seed}: {c:?}"
        );
    }
}

#[test]
fn universal_four_is_two_inductive() {
    let trace = universal_layered_adversary(4, AlgorithmSpec::FirstFit, None).unwrap();
    let graph = trace.graph().unwrap();
    let order: Vec<_> = graph.vertices().collect();
    assert!(max_back_degree(&graph, &order).unwrap() <= 2);
}

#[test]
fn girth_variants() {
    for k in [4, 5] {
        let trace = universal_layered_adversary(3, AlgorithmSpec::FirstFit, Some(k)).unwrap();
        assert!(trace.summary.bins_used >= 3);
        assert!(!girth_at_most(&trace.graph().unwrap(), k), "k={k}");
    }
}

#[test]
fn harness_summaries() {
    let f = run_matchup(StrategySpec::Forest { kappa: 3 }, AlgorithmSpec::FirstFit).unwrap();
    assert_eq!(
        (
            f.summary.bins_used,
            f.summary.vertices,
            f.summary.max_components
        ),
        (4, 8, 3)
    );
    let c = run_matchup(StrategySpec::CbipTree { kappa: 2 }, AlgorithmSpec::Cbip).unwrap();
    assert_eq!(
        (
            c.summary.bins_used,
            c.summary.vertices,
            c.summary.max_components
        ),
        (4, 7, 2)
    );
    let u = run_matchup(
        StrategySpec::Universal {
            t: 3,
            ck_free: None,
        },
        AlgorithmSpec::FirstFit,
    )
    .unwrap();
    assert!(u.summary.bins_used >= 3);
    assert_eq!(u.summary.max_components, 1);
}

#[test]
fn verify_examples() {
    let f = run_matchup(StrategySpec::Forest { kappa: 3 }, AlgorithmSpec::FirstFit).unwrap();
    assert!(verify_trace(&f).passed());
    let mut bad = f.clone();
    bad.records[5].bin = Bin(bad.records[5].bin.0 + 1);
    let report = verify_trace(&bad);
    assert_eq!(report.get("replay").unwrap().outcome, Outcome::Fail);

    let r = run_matchup(
        StrategySpec::Ff3Colorable1cb { rounds: 3 },
        AlgorithmSpec::FirstFit,
    )
    .unwrap();
    let report = verify_trace(&r);
    assert!(report.passed());
    let sat = saturation_report(&r.bins(), &r.colors().unwrap()).unwrap();
    assert_eq!(sat.saturated(3), bins(&[1, 2, 3]));
}

#[test]
fn sweep_examples() {
    let rows = sweep(Family::Forest, AlgorithmSpec::FirstFit, 1..=8, false).unwrap();
    assert!(rows.iter().all(|r| r.bins == r.param + 1));
    let rows = sweep(Family::CbipTree, AlgorithmSpec::Cbip, 1..=6, false).unwrap();
    assert!(rows.iter().all(|r| r.bins == 2 * r.param));
    let mut algorithms = vec![AlgorithmSpec::FirstFit];
    algorithms.extend((0..10).map(|seed| AlgorithmSpec::Baseline { seed }));
    for alg in algorithms {
        let rows = sweep(Family::Universal { ck_free: None }, alg, 3..=5, false).unwrap();
        for r in rows {
            assert!(r.bins >= r.param, "{alg:?} {r:?}");
            assert!(r.vertices <= universal_size_bound(r.param).unwrap());
        }
    }
}
