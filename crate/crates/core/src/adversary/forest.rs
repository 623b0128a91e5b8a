//! Bean's forest construction: trees `T_1..T_kappa` whose representatives
//! sit in FirstFit bins `1..kappa`, then one vertex joined to every
//! representative.

use super::{parity_coloring_from_last, AdversaryError, FixedPlan, StrategySpec};
use crate::algorithms::AlgorithmSpec;
use crate::graph::{OnlineGraph, PresentationStep, VertexId};
use crate::harness::{run_matchup, MatchupTrace, RunError};

/// Appends trees `T_1..T_k` to `steps`; returns their representatives in
/// tree order. Never more than `k` components are alive.
fn build_trees(k: usize, steps: &mut Vec<PresentationStep>) -> Vec<VertexId> {
    if k == 1 {
        let v = VertexId(steps.len());
        steps.push(PresentationStep::isolated(v));
        return vec![v];
    }
    let first = build_trees(k - 1, steps);
    let joint = VertexId(steps.len());
    steps.push(PresentationStep::new(joint, sorted(first)));
    // the merged tree is set aside while T'_1..T'_{k-1} are rebuilt
    let mut reps = build_trees(k - 1, steps);
    reps.push(joint);
    reps
}

fn sorted(mut vs: Vec<VertexId>) -> Vec<VertexId> {
    vs.sort_unstable();
    vs
}

/// The forest construction for `kappa` components: `2^kappa` vertices.
pub fn forest_plan(kappa: usize) -> Result<FixedPlan, AdversaryError> {
    if kappa == 0 {
        return Err(AdversaryError::InvalidParameter(
            "forest needs kappa >= 1".into(),
        ));
    }
    if kappa > super::limits::FOREST_KAPPA {
        return Err(AdversaryError::OverBudget(format!("forest kappa={kappa}")));
    }
    let mut steps = Vec::with_capacity(1 << kappa);
    let reps = build_trees(kappa, &mut steps);
    steps.push(PresentationStep::new(VertexId(steps.len()), sorted(reps)));
    let graph = OnlineGraph::from_steps(steps.iter().cloned())?;
    let colors = parity_coloring_from_last(&graph);
    Ok(FixedPlan::new(
        steps.into_iter().zip(colors).collect(),
        kappa,
        2,
    ))
}

/// Plays the forest construction against `algorithm`.
pub fn forest_adversary(kappa: usize, algorithm: AlgorithmSpec) -> Result<MatchupTrace, RunError> {
    run_matchup(StrategySpec::Forest { kappa }, algorithm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_order_for_three_components() {
        let plan = forest_plan(3).unwrap();
        let pres: Vec<Vec<usize>> = plan
            .steps()
            .map(|s| s.pre_neighborhood.iter().map(|v| v.one_based()).collect())
            .collect();
        // v2-v1, v4-{v2,v3}, v6-v5, v8-{v4,v6,v7}
        assert_eq!(
            pres,
            vec![
                vec![],
                vec![1],
                vec![],
                vec![2, 3],
                vec![],
                vec![5],
                vec![],
                vec![4, 6, 7],
            ]
        );
    }

    #[test]
    fn size_recurrence() {
        // S(1) = 1, S(k + 1) = 2 S(k) + 1, plus the final vertex
        let mut s = 1usize;
        for kappa in 1..=10 {
            assert_eq!(forest_plan(kappa).unwrap().len(), s + 1);
            s = 2 * s + 1;
        }
    }

    #[test]
    fn rejects_zero() {
        assert!(forest_plan(0).is_err());
    }
}
