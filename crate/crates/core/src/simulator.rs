//! Discrete-round fluid simulation.
//!
//! Traffic is a set of constant rates. Each window a path offers
//! `x_p · T · t_m` bits; every overloaded link passes only `c / flow` of the
//! offered traffic crossing it, and a path keeps the product of those
//! survival ratios along its links.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::baselines;
use crate::energy::{recompute_state, NetworkState};
use crate::entre::{self, EntreParams};
use crate::error::{Error, Result};
use crate::model::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Entre,
    Ospf,
    Equal,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Entre => "entre",
            Strategy::Ospf => "ospf",
            Strategy::Equal => "equal",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "entre" => Ok(Strategy::Entre),
            "ospf" => Ok(Strategy::Ospf),
            "equal" => Ok(Strategy::Equal),
            other => Err(Error::Parse(format!("unknown strategy `{other}`"))),
        }
    }
}

/// One row of a trajectory; also the CSV record layout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsSnapshot {
    pub round: usize,
    #[serde(rename = "throughput_mbps")]
    pub throughput: f64,
    #[serde(rename = "total_energy_w")]
    pub total_energy: f64,
    #[serde(rename = "max_link_util")]
    pub max_link_utilization: f64,
    #[serde(rename = "sleeping_frac")]
    pub sleeping_links_fraction: f64,
    #[serde(rename = "excluded_frac")]
    pub excluded_routes_fraction: f64,
    pub max_abs_delta_x: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub strategy: Strategy,
    pub snapshots: Vec<MetricsSnapshot>,
    /// Rounds executed.
    pub iterations: usize,
    pub converged: bool,
    /// Scenario as left by the last round.
    pub scenario: Scenario,
}

impl Trajectory {
    pub fn last(&self) -> &MetricsSnapshot {
        self.snapshots.last().expect("trajectories are never empty")
    }
}

/// Bits delivered per `[pair][path]` during one window of `t_m` seconds.
///
/// Each overloaded link passes `capacity / offered flow` of the traffic
/// crossing it; a path keeps the product of those ratios along its links.
pub fn deliver(scenario: &Scenario, state: &NetworkState, t_m: f64) -> Vec<Vec<f64>> {
    let survival = survival(scenario, state);
    let topo = &scenario.topology;
    scenario
        .pairs
        .iter()
        .map(|pair| {
            pair.paths
                .iter()
                .zip(&pair.splits.fractions)
                .map(|(path, &x)| {
                    let ratio: f64 = path
                        .links
                        .iter()
                        .filter_map(|&id| topo.link_index(id))
                        .map(|i| survival[i])
                        .product();
                    x * pair.demand * t_m * ratio
                })
                .collect()
        })
        .collect()
}

fn survival(scenario: &Scenario, state: &NetworkState) -> Vec<f64> {
    state
        .link_flow
        .iter()
        .zip(scenario.topology.links())
        .map(|(&flow, l)| {
            if flow > l.capacity {
                l.capacity / flow
            } else {
                1.0
            }
        })
        .collect()
}

/// Rate leaving each link once the scaling of that link and of every
/// earlier hop on each crossing path is applied.
pub fn carried_link_flow(scenario: &Scenario, state: &NetworkState) -> Vec<f64> {
    let survival = survival(scenario, state);
    let topo = &scenario.topology;
    let mut out = vec![0.0; survival.len()];
    for pair in &scenario.pairs {
        for (path, &x) in pair.paths.iter().zip(&pair.splits.fractions) {
            let mut rate = x * pair.demand;
            for i in path.links.iter().filter_map(|&id| topo.link_index(id)) {
                rate *= survival[i];
                out[i] += rate;
            }
        }
    }
    out
}

pub fn snapshot(
    round: usize,
    scenario: &Scenario,
    state: &NetworkState,
    delivered_bits: &[Vec<f64>],
    t_m: f64,
    max_abs_delta_x: f64,
) -> MetricsSnapshot {
    let delivered: f64 = delivered_bits.iter().flatten().sum();
    let links = scenario.topology.links().len();
    let paths = scenario.path_count();
    MetricsSnapshot {
        round,
        throughput: delivered / t_m,
        total_energy: state.total_energy(),
        max_link_utilization: state.max_link_utilization(),
        sleeping_links_fraction: fraction(scenario.topology.sleeping_count(), links),
        excluded_routes_fraction: fraction(scenario.excluded_count(), paths),
        max_abs_delta_x,
    }
}

fn fraction(n: usize, of: usize) -> f64 {
    if of == 0 {
        0.0
    } else {
        n as f64 / of as f64
    }
}

/// Drives one routing strategy over the scenario.
///
/// ENTRE iterates until convergence. The static baselines route every path
/// of the candidate set (no exclusion, every link awake) and report a single
/// steady round.
pub fn run(scenario: &Scenario, strategy: Strategy, params: &EntreParams) -> Result<Trajectory> {
    let splits = match strategy {
        Strategy::Entre => return entre::run_until_convergence(scenario, params),
        Strategy::Ospf => baselines::ospf_assign(scenario),
        Strategy::Equal => baselines::equal_split_assign(scenario),
    };
    let mut scenario = scenario.clone();
    scenario.set_splits(splits);
    scenario.wake_all_links();
    let state = recompute_state(&scenario.topology, &scenario.pairs, &scenario.profile)?;
    let delivered = deliver(&scenario, &state, params.t_m);
    let snap = snapshot(1, &scenario, &state, &delivered, params.t_m, 0.0);
    Ok(Trajectory {
        strategy,
        snapshots: vec![snap],
        iterations: 1,
        converged: true,
        scenario,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    /// Strategy name, or `optimal` for the offline reference.
    pub label: String,
    pub throughput_mbps: f64,
    pub total_energy_w: f64,
    /// `1 − E_final / E_reference`.
    pub energy_saving: f64,
    pub max_link_util: f64,
    pub sleeping_frac: f64,
    pub excluded_frac: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Final-round figures of a trajectory, with energy saving measured against
/// `reference_energy` watts.
pub fn summarize(trajectory: &Trajectory, reference_energy: f64) -> Summary {
    let last = trajectory.last();
    let energy_saving = if reference_energy > 0.0 {
        1.0 - last.total_energy / reference_energy
    } else {
        0.0
    };
    Summary {
        label: trajectory.strategy.to_string(),
        throughput_mbps: last.throughput,
        total_energy_w: last.total_energy,
        energy_saving,
        max_link_util: last.max_link_utilization,
        sleeping_frac: last.sleeping_links_fraction,
        excluded_frac: last.excluded_routes_fraction,
        iterations: trajectory.iterations,
        converged: trajectory.converged,
    }
}
