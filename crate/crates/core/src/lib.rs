//! Energy-aware multipath traffic engineering.
//!
//! The crate models a core network where every ingress-egress pair spreads
//! its demand over a set of explicit tunnels, and provides:
//!
//! - [`entre`]: the ENTRE distributed heuristic, which rebalances traffic
//!   every measurement window and excludes energy-hungry, under-used paths
//!   so their links can sleep;
//! - [`optimizer`]: evaluation and minimization of the min-max
//!   utilization × energy objective, with an exhaustive grid oracle;
//! - [`baselines`]: OSPF-style single shortest path and static equal split;
//! - [`simulator`]: a fluid, round-based simulator producing metrics
//!   trajectories;
//! - [`scenario_file`], [`report`] and [`commands`]: the TOML scenario
//!   format, CSV output, and the batch commands behind the `entre` binary.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod baselines;
pub mod commands;
pub mod energy;
pub mod entre;
pub mod error;
pub mod model;
pub mod optimizer;
pub mod reference;
pub mod report;
pub mod scenario_file;
pub mod simulator;

pub use energy::{NetworkState, PowerProfile};
pub use entre::EntreParams;
pub use error::{Error, Result};
pub use model::{
    IePair, Link, LinkId, LinkState, NodeId, PairId, Path, Scenario, SplitVector, Topology,
};
pub use simulator::{MetricsSnapshot, Strategy, Summary, Trajectory};
