//! Bundled 20-router reference family.
//!
//! Four ingress routers (0-3) send to four egress routers (4-7) across
//! twelve core routers (8-19). Pair `i` runs from ingress `i` to egress
//! `4 + i` and owns cores `a = 8 + i`, `b = 12 + i`, `c = 16 + i`; its
//! candidate routes are the two-hop routes through `a`, `b` and `c`, plus a
//! three-hop route through the next pair's `a` and `b` cores.
//!
//! The five `redundancy-*` scenarios mix three kinds of pairs:
//!
//! - *needed*: every route is required to carry the demand, nothing can
//!   sleep;
//! - *skewed*: two required routes of unequal capacity, which ENTRE has to
//!   rebalance over several rounds;
//! - *redundant*: a low-rate primary route that can carry the whole demand
//!   alone, plus high-rate detours that draw more power.
//!
//! Demands, capacities and power classes are tuned so the optimal energy
//! saving climbs from roughly 15% to roughly 60% across the family. They
//! are a calibration of this crate, not a published topology.

use crate::energy::PowerProfile;
use crate::entre::EntreParams;
use crate::model::{IePair, Link, NodeId, PairId, Path, Scenario, Topology};

pub const ROUTERS: u32 = 20;
pub const PAIRS: u32 = 4;

/// Grid step used when searching the optimum of the bundled scenarios.
pub const GRID_STEP: f64 = 0.25;

pub fn ingress(pair: u32) -> u32 {
    pair
}

pub fn egress(pair: u32) -> u32 {
    4 + pair
}

fn core_a(pair: u32) -> u32 {
    8 + pair % PAIRS
}

fn core_b(pair: u32) -> u32 {
    12 + pair % PAIRS
}

fn core_c(pair: u32) -> u32 {
    16 + pair % PAIRS
}

/// Which intermediate routers a route crosses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Via {
    A,
    B,
    C,
    /// The next pair's `a` then `b` core.
    Cross,
}

impl Via {
    fn cores(self, pair: u32) -> Vec<u32> {
        match self {
            Via::A => vec![core_a(pair)],
            Via::B => vec![core_b(pair)],
            Via::C => vec![core_c(pair)],
            Via::Cross => vec![core_a(pair + 1), core_b(pair + 1)],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteSpec {
    pub via: Via,
    /// Mbit/s on every hop.
    pub capacity: f64,
    pub power_class: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairSpec {
    pub demand: f64,
    pub routes: Vec<RouteSpec>,
}

fn route(via: Via, capacity: f64, power_class: &'static str) -> RouteSpec {
    RouteSpec {
        via,
        capacity,
        power_class,
    }
}

/// Two equal 1G routes, both required.
pub fn needed_pair() -> PairSpec {
    PairSpec {
        demand: 1500.0,
        routes: vec![route(Via::A, 1000.0, "1G"), route(Via::B, 1000.0, "1G")],
    }
}

/// Two required 1G-class routes of unequal rate.
pub fn skewed_pair() -> PairSpec {
    PairSpec {
        demand: 1200.0,
        routes: vec![route(Via::A, 1000.0, "1G"), route(Via::B, 600.0, "1G")],
    }
}

/// A 100M primary that fits the demand, plus 1G detours along `detours`.
pub fn redundant_pair(detours: &[Via]) -> PairSpec {
    let mut routes = vec![route(Via::A, 100.0, "100M")];
    routes.extend(detours.iter().map(|&via| route(via, 1000.0, "1G")));
    PairSpec {
        demand: 60.0,
        routes,
    }
}

/// Builds a scenario where only the links of the listed routes exist.
pub fn build(name: &str, pairs: &[PairSpec], params: EntreParams) -> Scenario {
    let mut links = Vec::new();
    let mut ies = Vec::new();
    for (i, spec) in pairs.iter().enumerate() {
        let i = i as u32;
        let mut paths = Vec::new();
        for r in &spec.routes {
            let mut hops = vec![ingress(i)];
            hops.extend(r.via.cores(i));
            hops.push(egress(i));
            let mut ids = Vec::new();
            for w in hops.windows(2) {
                let id = links.len() as u32;
                links.push(Link::new(id, w[0], w[1], r.capacity, r.power_class));
                ids.push(id);
            }
            paths.push(Path::new(PairId(i), ids));
        }
        ies.push(IePair::new(i, ingress(i), egress(i), spec.demand, paths));
    }
    Scenario {
        name: name.to_string(),
        topology: Topology::new((0..ROUTERS).map(NodeId).collect(), links),
        profile: PowerProfile::default(),
        pairs: ies,
        params,
    }
}

/// Energy-excess threshold (W) used by the bundled redundancy scenarios,
/// low enough for a detour's first-round excess to trigger exclusion.
pub const REFERENCE_T_E: f64 = 0.2;

fn reference_params() -> EntreParams {
    EntreParams {
        t_e: REFERENCE_T_E,
        ..EntreParams::default()
    }
}

/// The five `redundancy-*` scenarios, in increasing order of redundancy.
pub fn redundancy_family() -> Vec<Scenario> {
    use Via::*;
    let (n, s, r) = (needed_pair, skewed_pair, redundant_pair);
    let mixes = [
        vec![n(), s(), n(), r(&[Cross])],
        vec![n(), s(), r(&[B]), r(&[B])],
        vec![n(), s(), r(&[B]), r(&[B, C])],
        vec![s(), r(&[B]), r(&[B]), r(&[B])],
        vec![s(), r(&[B, C]), r(&[B, C]), r(&[B, C])],
    ];
    mixes
        .iter()
        .enumerate()
        .map(|(i, mix)| build(&format!("redundancy-{}", i + 1), mix, reference_params()))
        .collect()
}

/// Demand of every pair in [`disjoint_paths`]; above any single route's rate.
pub const DISJOINT_DEMAND: f64 = 2000.0;

/// Every pair owns four edge-disjoint 1G-class routes of rate 1000, 800, 600
/// and 400 Mbit/s (the last one three hops long). Each pair starts with
/// all four as candidates; use [`Scenario::regenerate_paths`] to keep `k`.
pub fn disjoint_paths() -> Scenario {
    let spec = PairSpec {
        demand: DISJOINT_DEMAND,
        routes: vec![
            route(Via::A, 1000.0, "1G"),
            route(Via::B, 800.0, "1G"),
            route(Via::C, 600.0, "1G"),
            route(Via::Cross, 400.0, "1G"),
        ],
    };
    build(
        "disjoint-paths",
        &vec![spec; PAIRS as usize],
        EntreParams::default(),
    )
}

/// Every pair is redundant: a 100M primary with two 1G detours.
pub fn redundant_paths() -> Scenario {
    let specs = vec![redundant_pair(&[Via::B, Via::C]); PAIRS as usize];
    build("redundant-paths", &specs, reference_params())
}

/// Every bundled scenario with its file stem.
pub fn bundled() -> Vec<Scenario> {
    let mut all = redundancy_family();
    all.push(disjoint_paths());
    all.push(redundant_paths());
    all
}
