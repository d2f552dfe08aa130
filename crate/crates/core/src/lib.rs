//! Capacitated cost-sharing network games.
//!
//! Agents route from a source to a sink and split the cost of every edge
//! they use evenly. Each edge admits at most `capacity` agents. The crate
//! covers topology recognition, equilibrium verification and construction,
//! optimal profiles, benchmark instances and efficiency metrics.

pub mod cost;
pub mod error;
pub mod format;
pub(crate) mod eval;
pub mod game;
pub mod instances;
pub mod metrics;
pub mod network;
pub mod optimal;
pub mod equilibria;
pub mod topology;

pub use cost::{harmonic, Cost, ExtCost};
pub use error::{Error, Result};
pub use game::{enumerate_paths, Agents, Game, Limits, Path, StrategyProfile, StrategySpace};
pub use network::{Edge, EdgeSpec, Network, NetworkBuilder};
