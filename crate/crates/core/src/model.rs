//! Topology, path and demand representation.
//!
//! Links are directed. A physical cable is two [`Link`]s, one per direction,
//! and energy is attributed to each directed port separately. Rates are in
//! Mbit/s throughout the crate.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::energy::PowerProfile;
use crate::entre::EntreParams;
use crate::error::{Error, Result};

/// Tolerance on `Σ x_ip = 1`.
pub const SPLIT_SUM_TOLERANCE: f64 = 1e-9;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(
            Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

id_type!(
    /// Router identifier.
    NodeId
);
id_type!(
    /// Directed link identifier.
    LinkId
);
id_type!(
    /// Ingress-egress pair identifier.
    PairId
);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkState {
    #[default]
    Active,
    Sleeping,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub id: LinkId,
    pub src: NodeId,
    pub dst: NodeId,
    /// Mbit/s.
    pub capacity: f64,
    pub power_class: String,
    pub state: LinkState,
}

impl Link {
    pub fn new(id: u32, src: u32, dst: u32, capacity: f64, power_class: impl Into<String>) -> Self {
        Link {
            id: LinkId(id),
            src: NodeId(src),
            dst: NodeId(dst),
            capacity,
            power_class: power_class.into(),
            state: LinkState::Active,
        }
    }
}

/// An explicit tunnel: an ordered list of links from ingress to egress.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub pair: PairId,
    pub links: Vec<LinkId>,
}

impl Path {
    pub fn new(pair: PairId, links: impl IntoIterator<Item = u32>) -> Self {
        Path {
            pair,
            links: links.into_iter().map(LinkId).collect(),
        }
    }

    pub fn hops(&self) -> usize {
        self.links.len()
    }
}

/// Per-path traffic fractions of one pair, plus the routing-table exclusion
/// flags. Excluded paths always carry zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitVector {
    pub fractions: Vec<f64>,
    pub excluded: Vec<bool>,
}

impl SplitVector {
    pub fn uniform(paths: usize) -> Self {
        let share = if paths == 0 { 0.0 } else { 1.0 / paths as f64 };
        SplitVector {
            fractions: vec![share; paths],
            excluded: vec![false; paths],
        }
    }

    pub fn from_fractions(fractions: Vec<f64>) -> Self {
        let excluded = vec![false; fractions.len()];
        SplitVector {
            fractions,
            excluded,
        }
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }

    pub fn active_count(&self) -> usize {
        self.excluded.iter().filter(|e| !**e).count()
    }

    pub fn active_sum(&self) -> f64 {
        self.fractions
            .iter()
            .zip(&self.excluded)
            .filter(|(_, e)| !**e)
            .map(|(x, _)| x)
            .sum()
    }

    /// Uniform split over the non-excluded paths.
    pub fn reset_uniform(&mut self) {
        let active = self.active_count();
        for (x, excluded) in self.fractions.iter_mut().zip(&self.excluded) {
            *x = if *excluded || active == 0 {
                0.0
            } else {
                1.0 / active as f64
            };
        }
    }

    /// Describes the first broken invariant, if any.
    pub fn check(&self) -> Option<String> {
        if self.fractions.len() != self.excluded.len() {
            return Some("fraction and exclusion vectors differ in length".into());
        }
        if self.active_count() == 0 {
            return Some("every path is excluded".into());
        }
        for (p, (&x, &excluded)) in self.fractions.iter().zip(&self.excluded).enumerate() {
            if !x.is_finite() || !(0.0..=1.0).contains(&x) {
                return Some(format!("fraction {x} of path {p} is outside [0, 1]"));
            }
            if excluded && x != 0.0 {
                return Some(format!("excluded path {p} carries fraction {x}"));
            }
        }
        let sum = self.active_sum();
        if (sum - 1.0).abs() > SPLIT_SUM_TOLERANCE {
            return Some(format!("fractions sum to {sum}, not 1"));
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IePair {
    pub id: PairId,
    pub ingress: NodeId,
    pub egress: NodeId,
    /// Mbit/s.
    pub demand: f64,
    pub paths: Vec<Path>,
    pub splits: SplitVector,
}

impl IePair {
    /// A pair with a uniform initial split over `paths`.
    pub fn new(id: u32, ingress: u32, egress: u32, demand: f64, paths: Vec<Path>) -> Self {
        let splits = SplitVector::uniform(paths.len());
        IePair {
            id: PairId(id),
            ingress: NodeId(ingress),
            egress: NodeId(egress),
            demand,
            paths,
            splits,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    nodes: Vec<NodeId>,
    links: Vec<Link>,
    index: BTreeMap<LinkId, usize>,
}

impl Topology {
    pub fn new(nodes: Vec<NodeId>, links: Vec<Link>) -> Self {
        let mut index = BTreeMap::new();
        for (i, link) in links.iter().enumerate() {
            index.entry(link.id).or_insert(i);
        }
        Topology {
            nodes,
            links,
            index,
        }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link_index(&self, id: LinkId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn link(&self, id: LinkId) -> Option<&Link> {
        self.link_index(id).map(|i| &self.links[i])
    }

    pub fn set_link_state(&mut self, index: usize, state: LinkState) {
        self.links[index].state = state;
    }

    pub fn set_capacity(&mut self, index: usize, capacity: f64) {
        self.links[index].capacity = capacity;
    }

    /// Link positions along `path`, or `None` if any id is unknown.
    pub fn resolve(&self, path: &Path) -> Option<Vec<usize>> {
        path.links.iter().map(|&id| self.link_index(id)).collect()
    }

    pub fn sleeping_count(&self) -> usize {
        self.links
            .iter()
            .filter(|l| l.state == LinkState::Sleeping)
            .count()
    }
}

/// Everything a run needs: topology, power model, demands with their
/// candidate paths, and heuristic parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub topology: Topology,
    pub profile: PowerProfile,
    pub pairs: Vec<IePair>,
    pub params: EntreParams,
}

impl Scenario {
    pub fn total_demand(&self) -> f64 {
        self.pairs.iter().map(|p| p.demand).sum()
    }

    pub fn path_count(&self) -> usize {
        self.pairs.iter().map(|p| p.paths.len()).sum()
    }

    pub fn excluded_count(&self) -> usize {
        self.pairs
            .iter()
            .map(|p| p.splits.excluded.iter().filter(|e| **e).count())
            .sum()
    }

    pub fn splits(&self) -> Vec<SplitVector> {
        self.pairs.iter().map(|p| p.splits.clone()).collect()
    }

    /// Replaces every pair's split vector. Panics if the count differs.
    pub fn set_splits(&mut self, splits: Vec<SplitVector>) {
        assert_eq!(splits.len(), self.pairs.len(), "one split vector per pair");
        for (pair, split) in self.pairs.iter_mut().zip(splits) {
            pair.splits = split;
        }
    }

    /// For every link position: is it traversed by a non-excluded path?
    pub fn links_in_use(&self) -> Vec<bool> {
        let mut used = vec![false; self.topology.links().len()];
        for pair in &self.pairs {
            for (path, &excluded) in pair.paths.iter().zip(&pair.splits.excluded) {
                if excluded {
                    continue;
                }
                for &id in &path.links {
                    if let Some(i) = self.topology.link_index(id) {
                        used[i] = true;
                    }
                }
            }
        }
        used
    }

    pub fn wake_all_links(&mut self) {
        for i in 0..self.topology.links().len() {
            self.topology.set_link_state(i, LinkState::Active);
        }
    }

    /// Replaces every pair's candidates with up to `k` edge-disjoint paths
    /// and resets splits to uniform. All links are woken.
    pub fn regenerate_paths(&mut self, k: usize) -> Result<()> {
        for pair in &mut self.pairs {
            pair.paths =
                generate_disjoint_paths(&self.topology, pair.id, pair.ingress, pair.egress, k)?;
            pair.splits = SplitVector::uniform(pair.paths.len());
        }
        self.wake_all_links();
        Ok(())
    }

    /// Multiplies every demand by `factor`.
    pub fn scale_demands(&mut self, factor: f64) {
        for pair in &mut self.pairs {
            pair.demand *= factor;
        }
    }
}

/// A broken scenario invariant, reported by [`validate_topology`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    DuplicateNode(NodeId),
    DuplicateLink(LinkId),
    LinkUnknownNode {
        link: LinkId,
        node: NodeId,
    },
    SelfLoop(LinkId),
    NonPositiveCapacity {
        link: LinkId,
        capacity: f64,
    },
    UnknownPowerClass {
        link: LinkId,
        class: String,
    },
    DuplicatePair(PairId),
    PairUnknownNode {
        pair: PairId,
        node: NodeId,
    },
    PairSameEndpoints(PairId),
    InvalidDemand {
        pair: PairId,
        demand: f64,
    },
    NoPaths(PairId),
    EmptyPath {
        pair: PairId,
        path: usize,
    },
    PathWrongPair {
        pair: PairId,
        path: usize,
    },
    DanglingLink {
        pair: PairId,
        path: usize,
        link: LinkId,
    },
    DiscontinuousPath {
        pair: PairId,
        path: usize,
        after: LinkId,
    },
    PathLoop {
        pair: PairId,
        path: usize,
        node: NodeId,
    },
    PathEndpoints {
        pair: PairId,
        path: usize,
    },
    SplitLength {
        pair: PairId,
        expected: usize,
        found: usize,
    },
    InvalidSplit {
        pair: PairId,
        reason: String,
    },
    Config(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            DuplicateNode(n) => write!(f, "node {n} is declared twice"),
            DuplicateLink(l) => write!(f, "link {l} is declared twice"),
            LinkUnknownNode { link, node } => {
                write!(f, "link {link} references unknown node {node}")
            }
            SelfLoop(l) => write!(f, "link {l} has identical source and destination"),
            NonPositiveCapacity { link, capacity } => {
                write!(f, "link {link} has non-positive capacity {capacity}")
            }
            UnknownPowerClass { link, class } => {
                write!(
                    f,
                    "link {link} uses power class `{class}` missing from the profile"
                )
            }
            DuplicatePair(p) => write!(f, "pair {p} is declared twice"),
            PairUnknownNode { pair, node } => {
                write!(f, "pair {pair} references unknown node {node}")
            }
            PairSameEndpoints(p) => write!(f, "pair {p} has ingress equal to egress"),
            InvalidDemand { pair, demand } => write!(f, "pair {pair} has invalid demand {demand}"),
            NoPaths(p) => write!(f, "pair {p} has no candidate paths"),
            EmptyPath { pair, path } => write!(f, "pair {pair} path {path} is empty"),
            PathWrongPair { pair, path } => {
                write!(f, "pair {pair} path {path} is tagged with another pair")
            }
            DanglingLink { pair, path, link } => {
                write!(f, "pair {pair} path {path} references unknown link {link}")
            }
            DiscontinuousPath { pair, path, after } => {
                write!(
                    f,
                    "pair {pair} path {path} is discontinuous after link {after}"
                )
            }
            PathLoop { pair, path, node } => {
                write!(f, "pair {pair} path {path} visits node {node} twice")
            }
            PathEndpoints { pair, path } => write!(
                f,
                "pair {pair} path {path} does not run from the pair's ingress to its egress"
            ),
            SplitLength {
                pair,
                expected,
                found,
            } => write!(
                f,
                "pair {pair} has {found} split entries for {expected} paths"
            ),
            InvalidSplit { pair, reason } => write!(f, "pair {pair} split vector: {reason}"),
            Config(msg) => f.write_str(msg),
        }
    }
}

/// Checks every id reference, link, path and split invariant of `scenario`.
/// An empty result means the scenario is usable.
pub fn validate_topology(scenario: &Scenario) -> Vec<Violation> {
    let mut out = Vec::new();
    let topo = &scenario.topology;

    let mut nodes = BTreeSet::new();
    for &n in topo.nodes() {
        if !nodes.insert(n) {
            out.push(Violation::DuplicateNode(n));
        }
    }

    let mut link_ids = BTreeSet::new();
    for link in topo.links() {
        if !link_ids.insert(link.id) {
            out.push(Violation::DuplicateLink(link.id));
        }
        for node in [link.src, link.dst] {
            if !nodes.contains(&node) {
                out.push(Violation::LinkUnknownNode {
                    link: link.id,
                    node,
                });
            }
        }
        if link.src == link.dst {
            out.push(Violation::SelfLoop(link.id));
        }
        if !(link.capacity > 0.0 && link.capacity.is_finite()) {
            out.push(Violation::NonPositiveCapacity {
                link: link.id,
                capacity: link.capacity,
            });
        }
        if scenario.profile.base_power(&link.power_class).is_none() {
            out.push(Violation::UnknownPowerClass {
                link: link.id,
                class: link.power_class.clone(),
            });
        }
    }

    let mut pair_ids = BTreeSet::new();
    for pair in &scenario.pairs {
        if !pair_ids.insert(pair.id) {
            out.push(Violation::DuplicatePair(pair.id));
        }
        for node in [pair.ingress, pair.egress] {
            if !nodes.contains(&node) {
                out.push(Violation::PairUnknownNode {
                    pair: pair.id,
                    node,
                });
            }
        }
        if pair.ingress == pair.egress {
            out.push(Violation::PairSameEndpoints(pair.id));
        }
        if !(pair.demand >= 0.0 && pair.demand.is_finite()) {
            out.push(Violation::InvalidDemand {
                pair: pair.id,
                demand: pair.demand,
            });
        }
        if pair.paths.is_empty() {
            out.push(Violation::NoPaths(pair.id));
        }
        for (idx, path) in pair.paths.iter().enumerate() {
            check_path(topo, pair, idx, path, &mut out);
        }
        if pair.splits.len() != pair.paths.len() || pair.splits.excluded.len() != pair.paths.len() {
            out.push(Violation::SplitLength {
                pair: pair.id,
                expected: pair.paths.len(),
                found: pair.splits.len(),
            });
        } else if !pair.paths.is_empty() {
            if let Some(reason) = pair.splits.check() {
                out.push(Violation::InvalidSplit {
                    pair: pair.id,
                    reason,
                });
            }
        }
    }
    out
}

fn check_path(topo: &Topology, pair: &IePair, idx: usize, path: &Path, out: &mut Vec<Violation>) {
    let (pid, before) = (pair.id, out.len());
    if path.pair != pid {
        out.push(Violation::PathWrongPair {
            pair: pid,
            path: idx,
        });
    }
    if path.links.is_empty() {
        out.push(Violation::EmptyPath {
            pair: pid,
            path: idx,
        });
        return;
    }
    let mut links = Vec::with_capacity(path.links.len());
    for &id in &path.links {
        match topo.link(id) {
            Some(l) => links.push(l),
            None => out.push(Violation::DanglingLink {
                pair: pid,
                path: idx,
                link: id,
            }),
        }
    }
    if out.len() > before {
        return;
    }
    for w in links.windows(2) {
        if w[0].dst != w[1].src {
            out.push(Violation::DiscontinuousPath {
                pair: pid,
                path: idx,
                after: w[0].id,
            });
            return;
        }
    }
    let mut seen = BTreeSet::new();
    seen.insert(links[0].src);
    for l in &links {
        if !seen.insert(l.dst) {
            out.push(Violation::PathLoop {
                pair: pid,
                path: idx,
                node: l.dst,
            });
            return;
        }
    }
    if links[0].src != pair.ingress || links[links.len() - 1].dst != pair.egress {
        out.push(Violation::PathEndpoints {
            pair: pid,
            path: idx,
        });
    }
}

/// Up to `k` pairwise edge-disjoint paths from `ingress` to `egress`.
///
/// Each round takes a minimum-hop path over the edges not yet used and then
/// removes its edges. Breadth-first search visits out-links ordered by
/// (destination id, link id), so ties resolve toward the lowest next node.
pub fn generate_disjoint_paths(
    topology: &Topology,
    pair: PairId,
    ingress: NodeId,
    egress: NodeId,
    k: usize,
) -> Result<Vec<Path>> {
    if ingress == egress {
        return Err(Error::InvalidRequest(format!(
            "ingress and egress are both node {ingress}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidRequest("k must be at least 1".into()));
    }

    let mut adjacency: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
    for (i, link) in topology.links().iter().enumerate() {
        adjacency.entry(link.src).or_default().push(i);
    }
    let links = topology.links();
    for out in adjacency.values_mut() {
        out.sort_by_key(|&i| (links[i].dst, links[i].id));
    }

    let mut used = vec![false; links.len()];
    let mut paths = Vec::new();
    while paths.len() < k {
        let Some(hops) = bfs(links, &adjacency, &used, ingress, egress) else {
            break;
        };
        for &i in &hops {
            used[i] = true;
        }
        paths.push(Path {
            pair,
            links: hops.iter().map(|&i| links[i].id).collect(),
        });
    }
    if paths.is_empty() {
        return Err(Error::NoPath { ingress, egress });
    }
    Ok(paths)
}

fn bfs(
    links: &[Link],
    adjacency: &BTreeMap<NodeId, Vec<usize>>,
    used: &[bool],
    from: NodeId,
    to: NodeId,
) -> Option<Vec<usize>> {
    let mut parent: BTreeMap<NodeId, Option<usize>> = BTreeMap::new();
    parent.insert(from, None);
    let mut queue = VecDeque::from([from]);
    while let Some(node) = queue.pop_front() {
        if node == to {
            break;
        }
        for &i in adjacency.get(&node).into_iter().flatten() {
            let next = links[i].dst;
            if used[i] || parent.contains_key(&next) {
                continue;
            }
            parent.insert(next, Some(i));
            queue.push_back(next);
        }
    }
    parent.get(&to)?;
    let mut hops = Vec::new();
    let mut node = to;
    while let Some(&Some(i)) = parent.get(&node) {
        hops.push(i);
        node = links[i].src;
    }
    hops.reverse();
    Some(hops)
}

/// Minimum capacity along `path`. Unknown link ids are ignored.
pub fn bottleneck_capacity(path: &Path, topology: &Topology) -> f64 {
    path.links
        .iter()
        .filter_map(|&id| topology.link(id))
        .map(|l| l.capacity)
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nodes(n: u32) -> Vec<NodeId> {
        (0..n).map(NodeId).collect()
    }

    fn scenario(topology: Topology, pairs: Vec<IePair>) -> Scenario {
        Scenario {
            name: "test".into(),
            topology,
            profile: PowerProfile::default(),
            pairs,
            params: EntreParams::default(),
        }
    }

    fn diamond() -> Topology {
        // 0 -> 1 -> 3 and 0 -> 2 -> 3, plus a cross link 1 -> 2.
        Topology::new(
            nodes(4),
            vec![
                Link::new(0, 0, 1, 100.0, "1G"),
                Link::new(1, 1, 3, 100.0, "1G"),
                Link::new(2, 0, 2, 100.0, "1G"),
                Link::new(3, 2, 3, 100.0, "1G"),
                Link::new(4, 1, 2, 100.0, "1G"),
            ],
        )
    }

    #[test]
    fn minimal_scenario_is_valid() {
        let topo = Topology::new(nodes(2), vec![Link::new(0, 0, 1, 10.0, "1G")]);
        let pair = IePair::new(0, 0, 1, 5.0, vec![Path::new(PairId(0), [0])]);
        assert!(validate_topology(&scenario(topo, vec![pair])).is_empty());
    }

    #[test]
    fn dangling_link_is_reported() {
        let topo = Topology::new(nodes(2), vec![Link::new(0, 0, 1, 10.0, "1G")]);
        let pair = IePair::new(0, 0, 1, 5.0, vec![Path::new(PairId(0), [7])]);
        let v = validate_topology(&scenario(topo, vec![pair]));
        assert_eq!(
            v,
            vec![Violation::DanglingLink {
                pair: PairId(0),
                path: 0,
                link: LinkId(7)
            }]
        );
    }

    #[test]
    fn discontinuous_path_is_reported() {
        let pair = IePair::new(0, 0, 3, 5.0, vec![Path::new(PairId(0), [0, 3])]);
        let v = validate_topology(&scenario(diamond(), vec![pair]));
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::DiscontinuousPath { .. }));
    }

    #[test]
    fn bad_links_and_splits_are_reported() {
        let topo = Topology::new(
            nodes(2),
            vec![
                Link::new(0, 0, 1, -1.0, "1G"),
                Link::new(1, 1, 1, 10.0, "nope"),
            ],
        );
        let mut pair = IePair::new(0, 0, 1, 5.0, vec![Path::new(PairId(0), [0])]);
        pair.splits.fractions[0] = 0.5;
        let v = validate_topology(&scenario(topo, vec![pair]));
        assert!(v
            .iter()
            .any(|v| matches!(v, Violation::NonPositiveCapacity { .. })));
        assert!(v.iter().any(|v| matches!(v, Violation::SelfLoop(_))));
        assert!(v
            .iter()
            .any(|v| matches!(v, Violation::UnknownPowerClass { .. })));
        assert!(v
            .iter()
            .any(|v| matches!(v, Violation::InvalidSplit { .. })));
    }

    #[test]
    fn parallel_routes_are_both_found() {
        let topo = Topology::new(
            nodes(4),
            vec![
                Link::new(0, 0, 1, 10.0, "1G"),
                Link::new(1, 1, 3, 10.0, "1G"),
                Link::new(2, 0, 2, 10.0, "1G"),
                Link::new(3, 2, 3, 10.0, "1G"),
            ],
        );
        let paths = generate_disjoint_paths(&topo, PairId(0), NodeId(0), NodeId(3), 2).unwrap();
        assert_eq!(paths[0].links, vec![LinkId(0), LinkId(1)]);
        assert_eq!(paths[1].links, vec![LinkId(2), LinkId(3)]);
    }

    #[test]
    fn chain_yields_one_path() {
        let topo = Topology::new(
            nodes(3),
            vec![
                Link::new(0, 0, 1, 10.0, "1G"),
                Link::new(1, 1, 2, 10.0, "1G"),
            ],
        );
        let paths = generate_disjoint_paths(&topo, PairId(0), NodeId(0), NodeId(2), 3).unwrap();
        assert_eq!(paths.len(), 1);
    }

    /// All simple paths by depth-first enumeration.
    fn all_simple_paths(topo: &Topology, from: NodeId, to: NodeId) -> Vec<Vec<LinkId>> {
        fn walk(
            topo: &Topology,
            at: NodeId,
            to: NodeId,
            seen: &mut Vec<NodeId>,
            acc: &mut Vec<LinkId>,
            out: &mut Vec<Vec<LinkId>>,
        ) {
            if at == to {
                out.push(acc.clone());
                return;
            }
            for l in topo.links().iter().filter(|l| l.src == at) {
                if seen.contains(&l.dst) {
                    continue;
                }
                seen.push(l.dst);
                acc.push(l.id);
                walk(topo, l.dst, to, seen, acc, out);
                acc.pop();
                seen.pop();
            }
        }
        let mut out = Vec::new();
        walk(topo, from, to, &mut vec![from], &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn diamond_has_exactly_two_disjoint_arms() {
        let topo = diamond();
        // Oracle: the largest set of pairwise edge-disjoint simple paths.
        let all = all_simple_paths(&topo, NodeId(0), NodeId(3));
        let mut best = 0;
        for mask in 0u32..(1 << all.len()) {
            let chosen: Vec<_> = (0..all.len()).filter(|i| mask & (1 << i) != 0).collect();
            let mut used = BTreeSet::new();
            let disjoint = chosen
                .iter()
                .all(|&i| all[i].iter().all(|l| used.insert(*l)));
            if disjoint {
                best = best.max(chosen.len());
            }
        }
        assert_eq!(best, 2);

        let paths = generate_disjoint_paths(&topo, PairId(0), NodeId(0), NodeId(3), 2).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[0].links, vec![LinkId(0), LinkId(1)]);
        assert_eq!(paths[1].links, vec![LinkId(2), LinkId(3)]);
    }

    #[test]
    fn unreachable_egress_is_no_path() {
        let topo = Topology::new(nodes(3), vec![Link::new(0, 0, 1, 10.0, "1G")]);
        let err = generate_disjoint_paths(&topo, PairId(0), NodeId(0), NodeId(2), 1).unwrap_err();
        assert!(matches!(err, Error::NoPath { .. }));
    }

    #[test]
    fn bottleneck_examples() {
        let topo = Topology::new(
            nodes(4),
            vec![
                Link::new(0, 0, 1, 100.0, "100M"),
                Link::new(1, 1, 2, 10.0, "10M"),
                Link::new(2, 2, 3, 100.0, "100M"),
                Link::new(3, 0, 3, 1000.0, "1G"),
            ],
        );
        assert_eq!(
            bottleneck_capacity(&Path::new(PairId(0), [0, 1, 2]), &topo),
            10.0
        );
        assert_eq!(
            bottleneck_capacity(&Path::new(PairId(0), [3]), &topo),
            1000.0
        );
        let uniform = Topology::new(
            nodes(3),
            vec![
                Link::new(0, 0, 1, 40.0, "1G"),
                Link::new(1, 1, 2, 40.0, "1G"),
            ],
        );
        assert_eq!(
            bottleneck_capacity(&Path::new(PairId(0), [0, 1]), &uniform),
            40.0
        );
    }

    #[test]
    fn split_vector_checks() {
        let mut s = SplitVector::from_fractions(vec![0.5, 0.5]);
        assert!(s.check().is_none());
        s.excluded[1] = true;
        assert!(s.check().is_some());
        s.fractions = vec![1.0, 0.0];
        assert!(s.check().is_none());
    }
}
