#![allow(dead_code)]

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use entre::model::{IePair, Link, NodeId, PairId, Path, Scenario, SplitVector, Topology};
use entre::{EntreParams, PowerProfile};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub struct GenConfig {
    pub pairs: RangeInclusive<usize>,
    pub paths: RangeInclusive<usize>,
    pub core_nodes: usize,
    /// Offered load of each pair relative to its best path's bottleneck.
    pub load: RangeInclusive<f64>,
    /// Start from random splits, some with zero entries, instead of uniform.
    pub random_splits: bool,
    /// Draw T_U, T_E, U_min and E_min at random instead of the defaults.
    pub random_params: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            pairs: 2..=6,
            paths: 2..=4,
            core_nodes: 6,
            load: 0.1..=1.2,
            random_splits: true,
            random_params: true,
        }
    }
}

const CLASSES: [(&str, f64); 4] = [
    ("10M", 10.0),
    ("100M", 100.0),
    ("1G", 1000.0),
    ("10G", 10000.0),
];

/// Pair `i` runs from edge node `2i` to `2i + 1`; every path crosses one to
/// three core nodes. A link is keyed by its endpoints, so paths of
/// different pairs that hop between the same core nodes share it.
pub fn random_scenario(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Scenario {
    let n_pairs = rng.gen_range(cfg.pairs.clone());
    let core0 = 2 * n_pairs as u32;
    let cores: Vec<u32> = (core0..core0 + cfg.core_nodes as u32).collect();

    let mut links: Vec<Link> = Vec::new();
    let mut by_ends: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    let mut pairs = Vec::new();
    for i in 0..n_pairs as u32 {
        let (ingress, egress) = (2 * i, 2 * i + 1);
        let want = rng.gen_range(cfg.paths.clone());
        let mut routes: Vec<Vec<u32>> = Vec::new();
        let mut attempts = 0;
        while routes.len() < want && attempts < 100 {
            attempts += 1;
            let hops = rng.gen_range(1..=3);
            let mut via: Vec<u32> = cores.choose_multiple(rng, hops).copied().collect();
            via.shuffle(rng);
            if !routes.contains(&via) {
                routes.push(via);
            }
        }
        let mut paths = Vec::new();
        for via in routes {
            let mut nodes = vec![ingress];
            nodes.extend(via);
            nodes.push(egress);
            let ids: Vec<u32> = nodes
                .windows(2)
                .map(|w| {
                    *by_ends.entry((w[0], w[1])).or_insert_with(|| {
                        let (class, nominal) = CLASSES[rng.gen_range(0..CLASSES.len())];
                        let id = links.len() as u32;
                        let capacity = nominal * rng.gen_range(0.2..=1.0);
                        links.push(Link::new(id, w[0], w[1], capacity, class));
                        id
                    })
                })
                .collect();
            paths.push(Path::new(PairId(i), ids));
        }
        pairs.push(IePair::new(i, ingress, egress, 0.0, paths));
    }

    let topology = Topology::new(
        (0..core0 + cfg.core_nodes as u32).map(NodeId).collect(),
        links,
    );
    for pair in &mut pairs {
        let best = pair
            .paths
            .iter()
            .map(|p| entre::model::bottleneck_capacity(p, &topology))
            .fold(0.0, f64::max);
        pair.demand = best * rng.gen_range(cfg.load.clone());
        if cfg.random_splits {
            pair.splits = random_split(rng, pair.paths.len());
        }
    }

    let params = if cfg.random_params {
        EntreParams {
            t_u: rng.gen_range(0.0..0.2),
            t_e: rng.gen_range(0.0..1.0),
            u_min: if rng.gen_bool(0.3) {
                rng.gen_range(0.0..0.2)
            } else {
                0.0
            },
            e_min: if rng.gen_bool(0.3) {
                rng.gen_range(0.0..1.0)
            } else {
                0.0
            },
            max_iters: 30,
            ..EntreParams::default()
        }
    } else {
        EntreParams::default()
    };

    Scenario {
        name: "random".into(),
        topology,
        profile: PowerProfile::default(),
        pairs,
        params,
    }
}

/// A point on the simplex; roughly one draw in four zeroes some entries.
pub fn random_split(rng: &mut ChaCha8Rng, n: usize) -> SplitVector {
    let sparse = rng.gen_bool(0.25);
    let mut w: Vec<f64> = (0..n)
        .map(|_| {
            if sparse && rng.gen_bool(0.5) {
                0.0
            } else {
                rng.gen_range(0.01..1.0)
            }
        })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    let sum: f64 = w.iter().sum();
    SplitVector::from_fractions(w.into_iter().map(|x| x / sum).collect())
}

/// Random power profile with the default class names.
pub fn random_profile(rng: &mut ChaCha8Rng) -> PowerProfile {
    let mut p = PowerProfile::default();
    for v in p.base_power.values_mut() {
        *v = rng.gen_range(0.01..10.0);
    }
    p.idle_fraction = rng.gen_range(0.0..=1.0);
    p.sleep_power = rng.gen_range(0.0..0.01);
    p
}
