//! Port energy model and the derived network state.
//!
//! The energy of an active link is its base power scaled by a utilization
//! factor. The factor is affine, `σ + (1 − σ)·min(u, 1)`, where `σ` is the
//! load-independent share of the port's power. Sleeping links draw a flat
//! `sleep_power`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{IePair, LinkState, Path, Topology};

#[derive(Debug, Clone, PartialEq)]
pub struct PowerProfile {
    /// Watts per power class.
    pub base_power: BTreeMap<String, f64>,
    /// Load-independent share of the base power, in `[0, 1]`.
    pub idle_fraction: f64,
    /// Watts drawn by a sleeping link.
    pub sleep_power: f64,
}

impl Default for PowerProfile {
    fn default() -> Self {
        let base_power = [("10M", 0.3), ("100M", 0.6), ("1G", 1.2), ("10G", 5.0)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        PowerProfile {
            base_power,
            idle_fraction: 0.85,
            sleep_power: 0.0,
        }
    }
}

impl PowerProfile {
    pub fn base_power(&self, class: &str) -> Option<f64> {
        self.base_power.get(class).copied()
    }

    /// Problems with the profile itself, empty when usable.
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (class, &w) in &self.base_power {
            if !(w > 0.0 && w.is_finite()) {
                out.push(format!(
                    "base power of class `{class}` must be positive, got {w}"
                ));
            }
        }
        if !(0.0..=1.0).contains(&self.idle_fraction) {
            out.push(format!(
                "idle fraction must lie in [0, 1], got {}",
                self.idle_fraction
            ));
        }
        let min_base = self
            .base_power
            .values()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if !(self.sleep_power >= 0.0 && self.sleep_power <= min_base) {
            out.push(format!(
                "sleep power must lie in [0, {min_base}], got {}",
                self.sleep_power
            ));
        }
        out
    }
}

/// Watts drawn by one directed port at utilization `u`.
pub fn link_energy(
    u: f64,
    power_class: &str,
    state: LinkState,
    profile: &PowerProfile,
) -> Result<f64> {
    let base = profile
        .base_power(power_class)
        .ok_or_else(|| Error::UnknownPowerClass(power_class.to_string()))?;
    Ok(match state {
        LinkState::Sleeping => profile.sleep_power,
        LinkState::Active => {
            let sigma = profile.idle_fraction;
            base * (sigma + (1.0 - sigma) * u.clamp(0.0, 1.0))
        }
    })
}

/// Per-link and per-path quantities derived from all pairs' splits.
///
/// Link vectors are indexed by position in [`Topology::links`]; path vectors
/// are indexed `[pair][path]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    /// Offered Mbit/s per link.
    pub link_flow: Vec<f64>,
    pub link_util: Vec<f64>,
    /// Watts per link.
    pub link_energy: Vec<f64>,
    pub path_util: Vec<Vec<f64>>,
    pub path_energy: Vec<Vec<f64>>,
}

impl NetworkState {
    pub fn total_energy(&self) -> f64 {
        self.link_energy.iter().sum()
    }

    pub fn max_link_utilization(&self) -> f64 {
        self.link_util.iter().copied().fold(0.0, f64::max)
    }
}

/// `E_p`: sum of link energies along the path.
pub fn path_energy(path: &Path, topology: &Topology, state: &NetworkState) -> f64 {
    path.links
        .iter()
        .filter_map(|&id| topology.link_index(id))
        .map(|i| state.link_energy[i])
        .sum()
}

/// `U_p`: the largest link utilization along the path.
pub fn path_utilization(path: &Path, topology: &Topology, state: &NetworkState) -> f64 {
    path.links
        .iter()
        .filter_map(|&id| topology.link_index(id))
        .map(|i| state.link_util[i])
        .fold(0.0, f64::max)
}

/// Rebuilds the full state from scratch.
///
/// Link flow is the sum of `x_ip · T_i` over every path of every pair that
/// crosses the link, so utilizations above 1 are representable here.
pub fn recompute_state(
    topology: &Topology,
    pairs: &[IePair],
    profile: &PowerProfile,
) -> Result<NetworkState> {
    let links = topology.links();
    let mut link_flow = vec![0.0; links.len()];
    for pair in pairs {
        for (path, &x) in pair.paths.iter().zip(&pair.splits.fractions) {
            let offered = x * pair.demand;
            if offered == 0.0 {
                continue;
            }
            for &id in &path.links {
                if let Some(i) = topology.link_index(id) {
                    link_flow[i] += offered;
                }
            }
        }
    }
    let link_util: Vec<f64> = link_flow
        .iter()
        .zip(links)
        .map(|(f, l)| f / l.capacity)
        .collect();
    let link_energy = link_util
        .iter()
        .zip(links)
        .map(|(&u, l)| link_energy(u, &l.power_class, l.state, profile))
        .collect::<Result<Vec<_>>>()?;

    let mut state = NetworkState {
        link_flow,
        link_util,
        link_energy,
        path_util: Vec::with_capacity(pairs.len()),
        path_energy: Vec::with_capacity(pairs.len()),
    };
    for pair in pairs {
        let utils = pair
            .paths
            .iter()
            .map(|p| path_utilization(p, topology, &state))
            .collect();
        let energies = pair
            .paths
            .iter()
            .map(|p| path_energy(p, topology, &state))
            .collect();
        state.path_util.push(utils);
        state.path_energy.push(energies);
    }
    Ok(state)
}
