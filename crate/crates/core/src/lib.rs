//! Online graph coloring against components-bounded adversaries.
//!
//! Vertices arrive one at a time together with their edges to earlier
//! vertices. A `kappa`-CB adversary keeps every prefix of the presentation
//! at most `kappa` connected components. The crate provides the online
//! colorers, the adversary constructions, a harness that plays them against
//! each other and records JSON Lines traces, and independent checks for
//! every claimed property of a trace.

pub mod adversary;
pub mod algorithms;
pub mod graph;
pub mod harness;
pub mod trace;
pub mod verify;

pub use adversary::{AdversaryColor, Strategy, StrategySpec};
pub use algorithms::{AlgorithmSpec, Bin, OnlineColorer};
pub use graph::{ComponentTracker, OnlineGraph, PresentationStep, VertexId};
pub use harness::{run_matchup, verify_trace, RunError, VerifyReport};
pub use trace::MatchupTrace;
