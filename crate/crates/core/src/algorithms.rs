//! Online colorers: FirstFit, CBIP and a seeded random baseline.
//!
//! A colorer only ever sees [`PresentationStep`]s. It never learns about
//! future vertices or the adversary's own coloring.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::graph::{ComponentTracker, GraphError, PresentationStep, VertexId};

/// A bin chosen by an online algorithm. Bins are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Bin(pub u32);

impl Bin {
    pub fn new(index: u32) -> Option<Self> {
        (index >= 1).then_some(Bin(index))
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Bin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<'de> Deserialize<'de> for Bin {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Bin::new(u32::deserialize(deserializer)?)
            .ok_or_else(|| serde::de::Error::custom("bins are 1-based"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColorerError {
    #[error("malformed step: {0}")]
    Step(#[from] GraphError),
    #[error("CBIP requires a bipartite input, but the component of {0} has an odd cycle")]
    NotBipartite(VertexId),
}

/// Deterministic online coloring algorithm in the vertex-arrival model.
pub trait OnlineColorer {
    fn name(&self) -> &'static str;

    /// Assigns a bin to the arriving vertex.
    fn decide(&mut self, step: &PresentationStep) -> Result<Bin, ColorerError>;

    /// Bins assigned so far, indexed by vertex.
    fn bins(&self) -> &[Bin];
}

/// Smallest bin not in `used`.
fn least_absent(used: impl Iterator<Item = Bin>, bound: usize) -> Bin {
    // the answer never exceeds bound + 1
    let mut taken = vec![false; bound + 2];
    for b in used {
        if let Some(slot) = taken.get_mut(b.0 as usize) {
            *slot = true;
        }
    }
    let first = (1..taken.len()).find(|&i| !taken[i]).unwrap_or(taken.len());
    Bin(first as u32)
}

#[derive(Debug, Clone, Default)]
pub struct FirstFit {
    bins: Vec<Bin>,
}

impl FirstFit {
    pub fn new() -> Self {
        Self::default()
    }
}

impl OnlineColorer for FirstFit {
    fn name(&self) -> &'static str {
        "firstfit"
    }

    fn decide(&mut self, step: &PresentationStep) -> Result<Bin, ColorerError> {
        step.validate(self.bins.len())?;
        let pre = &step.pre_neighborhood;
        let bin = least_absent(pre.iter().map(|u| self.bins[u.0]), pre.len());
        self.bins.push(bin);
        Ok(bin)
    }

    fn bins(&self) -> &[Bin] {
        &self.bins
    }
}

/// CBIP: bin = least bin absent from the opposite side of the arriving
/// vertex's component, where the component already includes the vertex.
#[derive(Debug, Clone, Default)]
pub struct Cbip {
    tracker: ComponentTracker,
    bins: Vec<Bin>,
}

impl Cbip {
    pub fn new() -> Self {
        Self::default()
    }
}

impl OnlineColorer for Cbip {
    fn name(&self) -> &'static str {
        "cbip"
    }

    fn decide(&mut self, step: &PresentationStep) -> Result<Bin, ColorerError> {
        step.validate(self.bins.len())?;
        self.tracker.add_vertex(step)?;
        let opposite = match self.tracker.opposite_side(step.vertex) {
            Ok(side) => side,
            Err(GraphError::NotBipartite(v)) => return Err(ColorerError::NotBipartite(v)),
            Err(e) => return Err(e.into()),
        };
        let bins = &self.bins;
        let bin = least_absent(opposite.iter().map(|u| bins[u.0]), opposite.len());
        self.bins.push(bin);
        Ok(bin)
    }

    fn bins(&self) -> &[Bin] {
        &self.bins
    }
}

/// Picks uniformly among the proper bins in `1..=max_used + 1`.
///
/// Deterministic for a fixed seed; it has no structure an adversary could
/// anticipate beyond properness.
#[derive(Debug, Clone)]
pub struct Baseline {
    rng: ChaCha8Rng,
    bins: Vec<Bin>,
    max_used: u32,
}

impl Baseline {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bins: Vec::new(),
            max_used: 0,
        }
    }
}

impl OnlineColorer for Baseline {
    fn name(&self) -> &'static str {
        "baseline"
    }

    fn decide(&mut self, step: &PresentationStep) -> Result<Bin, ColorerError> {
        step.validate(self.bins.len())?;
        let mut blocked = vec![false; self.max_used as usize + 2];
        for u in &step.pre_neighborhood {
            blocked[self.bins[u.0].0 as usize] = true;
        }
        let options: Vec<u32> = (1..=self.max_used + 1)
            .filter(|&b| !blocked[b as usize])
            .collect();
        // max_used + 1 is never blocked, so options is non-empty
        let bin = Bin(options[self.rng.gen_range(0..options.len())]);
        self.max_used = self.max_used.max(bin.0);
        self.bins.push(bin);
        Ok(bin)
    }

    fn bins(&self) -> &[Bin] {
        &self.bins
    }
}

/// Names a colorer; used in trace metadata and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgorithmSpec {
    #[serde(rename = "firstfit")]
    FirstFit,
    Cbip,
    Baseline {
        seed: u64,
    },
}

impl AlgorithmSpec {
    pub fn build(self) -> Box<dyn OnlineColorer + Send> {
        match self {
            AlgorithmSpec::FirstFit => Box::new(FirstFit::new()),
            AlgorithmSpec::Cbip => Box::new(Cbip::new()),
            AlgorithmSpec::Baseline { seed } => Box::new(Baseline::new(seed)),
        }
    }

    pub fn label(self) -> String {
        match self {
            AlgorithmSpec::FirstFit => "firstfit".into(),
            AlgorithmSpec::Cbip => "cbip".into(),
            AlgorithmSpec::Baseline { seed } => format!("baseline-{seed}"),
        }
    }
}

/// Runs `colorer` over `steps`, returning the bin sequence.
pub fn color_all<'a, I>(colorer: &mut dyn OnlineColorer, steps: I) -> Result<Vec<Bin>, ColorerError>
where
    I: IntoIterator<Item = &'a PresentationStep>,
{
    steps.into_iter().map(|s| colorer.decide(s)).collect()
}
