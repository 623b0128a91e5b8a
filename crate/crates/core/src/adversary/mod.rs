//! Adversary strategies for the components-bounded vertex-arrival game.
//!
//! A [`Strategy`] is pulled one move at a time. After each move the driver
//! reports the bin the algorithm chose, so adaptive strategies can branch on
//! it. Fixed constructions ignore the feedback and are exposed as a
//! [`FixedPlan`].

mod cbip_tree;
mod clique;
mod first_fit;
mod forest;
mod layered;

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::Bin;
use crate::graph::{GraphError, OnlineGraph, PresentationStep, VertexId};

pub use cbip_tree::{cbip_tree_adversary, cbip_tree_size, CbipTreePlan, Subtree};
pub use clique::clique_adversary;
pub use first_fit::{ff_3colorable_1cb, ff_bipartite_2cb};
pub use forest::{forest_adversary, forest_plan};
pub use layered::{
    layer_budgets, layered_path_len, universal_layered_adversary, LayeredAdversary, LayeredConfig,
};

/// A color in the adversary's own proper coloring (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AdversaryColor(pub u32);

impl AdversaryColor {
    pub const RED: AdversaryColor = AdversaryColor(1);
    pub const GREEN: AdversaryColor = AdversaryColor(2);
    pub const BLUE: AdversaryColor = AdversaryColor(3);
}

impl fmt::Display for AdversaryColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AdversaryColor::RED => f.write_str("red"),
            AdversaryColor::GREEN => f.write_str("green"),
            AdversaryColor::BLUE => f.write_str("blue"),
            AdversaryColor(c) => write!(f, "c{c}"),
        }
    }
}

/// The next vertex of the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryMove {
    pub step: PresentationStep,
    /// `None` when the strategy only fixes its coloring at termination.
    pub color: Option<AdversaryColor>,
    /// Set on the last move of a construction.
    pub done: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdversaryError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parameter exceeds desk-scale budget: {0}")]
    OverBudget(String),
    #[error("layer budgets violate the reservoir inequalities at layer {layer}")]
    BudgetInfeasible { layer: usize },
    #[error("reservoir {reservoir} underflow: needed {needed}, had {available}")]
    ReservoirUnderflow {
        reservoir: usize,
        needed: usize,
        available: usize,
    },
    #[error("path layer used fewer than two bins")]
    DegeneratePath,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An adversary in the adaptive protocol.
pub trait Strategy {
    /// Next move, or `None` once the construction has terminated.
    fn propose(&mut self) -> Result<Option<AdversaryMove>, AdversaryError>;

    /// Bin the algorithm assigned to the vertex of the last move.
    fn observe(&mut self, vertex: VertexId, bin: Bin);

    /// Coloring of the whole graph for strategies that defer it.
    fn final_colors(&mut self) -> Option<Vec<AdversaryColor>> {
        None
    }

    /// Maximum number of components any prefix may have.
    fn declared_kappa(&self) -> usize;

    /// Number of colors the adversary's coloring may use.
    fn declared_chi(&self) -> usize;
}

/// A construction whose moves do not depend on the algorithm's answers.
#[derive(Debug, Clone)]
pub struct FixedPlan {
    moves: VecDeque<(PresentationStep, AdversaryColor)>,
    kappa: usize,
    chi: usize,
}

impl FixedPlan {
    pub fn new(moves: Vec<(PresentationStep, AdversaryColor)>, kappa: usize, chi: usize) -> Self {
        Self {
            moves: moves.into(),
            kappa,
            chi,
        }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn steps(&self) -> impl Iterator<Item = &PresentationStep> {
        self.moves.iter().map(|(s, _)| s)
    }

    pub fn colors(&self) -> Vec<AdversaryColor> {
        self.moves.iter().map(|&(_, c)| c).collect()
    }

    pub fn graph(&self) -> OnlineGraph {
        OnlineGraph::from_steps(self.steps().cloned()).expect("plans are built in arrival order")
    }
}

impl Strategy for FixedPlan {
    fn propose(&mut self) -> Result<Option<AdversaryMove>, AdversaryError> {
        Ok(self.moves.pop_front().map(|(step, color)| AdversaryMove {
            step,
            color: Some(color),
            done: self.moves.is_empty(),
        }))
    }

    fn observe(&mut self, _vertex: VertexId, _bin: Bin) {}

    fn declared_kappa(&self) -> usize {
        self.kappa
    }

    fn declared_chi(&self) -> usize {
        self.chi
    }
}

/// Two-coloring of a bipartite graph by BFS parity, starting from the last
/// vertex and then from the lowest uncolored vertex of each other component.
fn parity_coloring_from_last(graph: &OnlineGraph) -> Vec<AdversaryColor> {
    let n = graph.len();
    let mut color: Vec<Option<AdversaryColor>> = vec![None; n];
    let starts = (0..n).rev().take(1).chain(0..n);
    for start in starts {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(AdversaryColor::RED);
        let mut queue = VecDeque::from([VertexId(start)]);
        while let Some(u) = queue.pop_front() {
            let next = if color[u.0] == Some(AdversaryColor::RED) {
                AdversaryColor::GREEN
            } else {
                AdversaryColor::RED
            };
            for &w in graph.neighbors(u) {
                if color[w.0].is_none() {
                    color[w.0] = Some(next);
                    queue.push_back(w);
                }
            }
        }
    }
    color
        .into_iter()
        .map(|c| c.expect("every vertex visited"))
        .collect()
}

/// Budgets that keep a single run at desk scale.
pub mod limits {
    pub const CLIQUE_N: usize = 2_000;
    pub const FF_BIPARTITE_N: usize = 4_000;
    pub const FF_ROUNDS: usize = 1_000;
    pub const FOREST_KAPPA: usize = 16;
    pub const CBIP_TREE_KAPPA: usize = 12;
    pub const UNIVERSAL_T: usize = 7;
    pub const UNIVERSAL_T_OVERRIDE: usize = 8;
    pub const CK_FREE_K: usize = 12;
}

/// Registered strategies and their parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum StrategySpec {
    Clique {
        n: usize,
    },
    #[serde(rename = "ff_bipartite_2cb")]
    FfBipartite2cb {
        n: usize,
    },
    #[serde(rename = "ff_3colorable_1cb")]
    Ff3Colorable1cb {
        rounds: usize,
    },
    Forest {
        kappa: usize,
    },
    CbipTree {
        kappa: usize,
    },
    Universal {
        t: usize,
        ck_free: Option<usize>,
    },
}

impl StrategySpec {
    pub fn name(&self) -> &'static str {
        match self {
            StrategySpec::Clique { .. } => "clique",
            StrategySpec::FfBipartite2cb { .. } => "ff_bipartite_2cb",
            StrategySpec::Ff3Colorable1cb { .. } => "ff_3colorable_1cb",
            StrategySpec::Forest { .. } => "forest",
            StrategySpec::CbipTree { .. } => "cbip_tree",
            StrategySpec::Universal { .. } => "universal",
        }
    }

    /// Short label for file names, e.g. `forest-k3`.
    pub fn label(&self) -> String {
        match *self {
            StrategySpec::Clique { n } => format!("clique-n{n}"),
            StrategySpec::FfBipartite2cb { n } => format!("ff_bipartite_2cb-n{n}"),
            StrategySpec::Ff3Colorable1cb { rounds } => format!("ff_3colorable_1cb-r{rounds}"),
            StrategySpec::Forest { kappa } => format!("forest-k{kappa}"),
            StrategySpec::CbipTree { kappa } => format!("cbip_tree-k{kappa}"),
            StrategySpec::Universal { t, ck_free: None } => format!("universal-t{t}"),
            StrategySpec::Universal {
                t,
                ck_free: Some(k),
            } => format!("universal-t{t}-c{k}"),
        }
    }

    /// Declared component bound.
    pub fn kappa(&self) -> usize {
        match *self {
            StrategySpec::FfBipartite2cb { .. } => 2,
            StrategySpec::Forest { kappa } | StrategySpec::CbipTree { kappa } => kappa,
            _ => 1,
        }
    }

    /// Declared number of adversary colors.
    pub fn chi(&self) -> usize {
        match *self {
            StrategySpec::Clique { n } => n,
            StrategySpec::FfBipartite2cb { .. }
            | StrategySpec::Forest { .. }
            | StrategySpec::CbipTree { .. } => 2,
            StrategySpec::Ff3Colorable1cb { .. } | StrategySpec::Universal { .. } => 3,
        }
    }

    /// Rejects parameters whose runs would not finish at desk scale.
    pub fn check_budget(&self, allow_large: bool) -> Result<(), AdversaryError> {
        let over = |what: String| Err(AdversaryError::OverBudget(what));
        match *self {
            StrategySpec::Clique { n } if n > limits::CLIQUE_N => over(format!("clique n={n}")),
            StrategySpec::FfBipartite2cb { n } if n > limits::FF_BIPARTITE_N => {
                over(format!("ff_bipartite_2cb n={n}"))
            }
            StrategySpec::Ff3Colorable1cb { rounds } if rounds > limits::FF_ROUNDS => {
                over(format!("ff_3colorable_1cb rounds={rounds}"))
            }
            StrategySpec::Forest { kappa } if kappa > limits::FOREST_KAPPA => {
                over(format!("forest kappa={kappa}"))
            }
            StrategySpec::CbipTree { kappa } if kappa > limits::CBIP_TREE_KAPPA => {
                over(format!("cbip_tree kappa={kappa}"))
            }
            StrategySpec::Universal { t, ck_free } => {
                let cap = if allow_large {
                    limits::UNIVERSAL_T_OVERRIDE
                } else {
                    limits::UNIVERSAL_T
                };
                if t > cap {
                    return over(format!("universal t={t} (limit {cap})"));
                }
                match ck_free {
                    Some(k) if k > limits::CK_FREE_K => over(format!("ck_free k={k}")),
                    _ => Ok(()),
                }
            }
            _ => Ok(()),
        }
    }

    pub fn build(&self) -> Result<Box<dyn Strategy + Send>, AdversaryError> {
        Ok(match *self {
            StrategySpec::Clique { n } => Box::new(clique_adversary(n)?),
            StrategySpec::FfBipartite2cb { n } => Box::new(ff_bipartite_2cb(n)?),
            StrategySpec::Ff3Colorable1cb { rounds } => Box::new(ff_3colorable_1cb(rounds)?),
            StrategySpec::Forest { kappa } => Box::new(forest_plan(kappa)?),
            StrategySpec::CbipTree { kappa } => Box::new(cbip_tree_adversary(kappa)?.plan),
            StrategySpec::Universal { t, ck_free } => {
                Box::new(LayeredAdversary::new(LayeredConfig { t, ck_free })?)
            }
        })
    }
}
