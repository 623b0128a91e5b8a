use super::{AdversaryColor, AdversaryError, FixedPlan};
use crate::graph::{PresentationStep, VertexId};

/// K_n, each vertex adjacent to all earlier ones. One component throughout;
/// the adversary gives every vertex its own color.
pub fn clique_adversary(n: usize) -> Result<FixedPlan, AdversaryError> {
    if n == 0 {
        return Err(AdversaryError::InvalidParameter(
            "clique needs n >= 1".into(),
        ));
    }
    let moves = (0..n)
        .map(|i| {
            let step = PresentationStep::new(VertexId(i), (0..i).map(VertexId).collect());
            (step, AdversaryColor(i as u32 + 1))
        })
        .collect();
    Ok(FixedPlan::new(moves, 1, n))
}
