//! Fixed constructions that defeat FirstFit on bipartite (two components)
//! and 3-colorable (one component) inputs.

use super::{AdversaryColor, AdversaryError, FixedPlan};
use crate::graph::{PresentationStep, VertexId};

/// Bipartite graph on `v_1..v_n` where `v_{2k-1}` is adjacent to `v_{2k'}`
/// for all `k != k'`, presented in index order. Two components suffice, and
/// FirstFit puts both `v_{2k-1}` and `v_{2k}` in bin `k`.
pub fn ff_bipartite_2cb(n: usize) -> Result<FixedPlan, AdversaryError> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(AdversaryError::InvalidParameter(format!(
            "ff_bipartite_2cb needs an even n >= 2, got {n}"
        )));
    }
    let moves = (0..n)
        .map(|i| {
            // 0-based: even i is v_{2k-1}, odd i is v_{2k}; k = i / 2 + 1
            let k = i / 2;
            let pre = (0..k)
                .map(|kk| if i % 2 == 0 { 2 * kk + 1 } else { 2 * kk })
                .map(VertexId)
                .collect();
            let color = if i % 2 == 0 {
                AdversaryColor::RED
            } else {
                AdversaryColor::GREEN
            };
            (PresentationStep::new(VertexId(i), pre), color)
        })
        .collect();
    Ok(FixedPlan::new(moves, 2, 2))
}

/// Triangle-free 3-colorable construction that saturates one new FirstFit
/// bin per round while staying connected.
///
/// Rounds 1 and 2 are the path `v_1..v_6`. In round `k >= 3`,
/// `v_{3k-2}` sees every earlier `v_{3k'-1}`, `v_{3k-1}` every earlier
/// `v_{3k'}`, and `v_{3k}` every earlier `v_{3k'-2}`. The adversary colors by
/// index mod 3.
pub fn ff_3colorable_1cb(rounds: usize) -> Result<FixedPlan, AdversaryError> {
    if rounds < 2 {
        return Err(AdversaryError::InvalidParameter(format!(
            "ff_3colorable_1cb needs rounds >= 2, got {rounds}"
        )));
    }
    let palette = [
        AdversaryColor::RED,
        AdversaryColor::GREEN,
        AdversaryColor::BLUE,
    ];
    let mut moves = Vec::with_capacity(3 * rounds);
    for i in 0..6 {
        let pre = if i == 0 {
            vec![]
        } else {
            vec![VertexId(i - 1)]
        };
        moves.push((PresentationStep::new(VertexId(i), pre), palette[i % 3]));
    }
    for k in 3..=rounds {
        for (slot, &color) in palette.iter().enumerate() {
            // slot 0 (red) sees greens, slot 1 (green) sees blues, slot 2 (blue) sees reds
            let target = (slot + 1) % 3;
            let pre = (0..k - 1).map(|kk| VertexId(3 * kk + target)).collect();
            let i = 3 * (k - 1) + slot;
            moves.push((PresentationStep::new(VertexId(i), pre), color));
        }
    }
    Ok(FixedPlan::new(moves, 1, 3))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pre(plan: &FixedPlan, one_based: usize) -> Vec<usize> {
        let step = plan.steps().nth(one_based - 1).unwrap();
        step.pre_neighborhood
            .iter()
            .map(|v| v.one_based())
            .collect()
    }

    #[test]
    fn bipartite_rejects_odd_or_small() {
        assert!(ff_bipartite_2cb(7).is_err());
        assert!(ff_bipartite_2cb(0).is_err());
        assert!(ff_bipartite_2cb(2).is_ok());
    }

    #[test]
    fn bipartite_edges_match_figure() {
        let plan = ff_bipartite_2cb(8).unwrap();
        assert_eq!(pre(&plan, 1), Vec::<usize>::new());
        assert_eq!(pre(&plan, 2), Vec::<usize>::new());
        assert_eq!(pre(&plan, 7), vec![2, 4, 6]);
        assert_eq!(pre(&plan, 8), vec![1, 3, 5]);
        // every odd-even pair except (2k-1, 2k)
        assert_eq!(plan.graph().edge_count(), 4 * 3);
    }

    #[test]
    fn three_colorable_edges_match_figure() {
        let plan = ff_3colorable_1cb(4).unwrap();
        assert_eq!(pre(&plan, 6), vec![5]);
        assert_eq!(pre(&plan, 7), vec![2, 5]);
        assert_eq!(pre(&plan, 8), vec![3, 6]);
        assert_eq!(pre(&plan, 9), vec![1, 4]);
        assert_eq!(pre(&plan, 10), vec![2, 5, 8]);
        assert_eq!(pre(&plan, 12), vec![1, 4, 7]);
        let colors = plan.colors();
        assert_eq!(colors[9], AdversaryColor::RED);
        assert_eq!(colors[11], AdversaryColor::BLUE);
    }
}
